#include <doctest.h>

#include <cmath>
#include <vector>

#include "bridge.hpp"
#include "error.hpp"
#include "normal.hpp"

using namespace disct;

TEST_CASE("pair kind classification") {
    CHECK(pair_kind(ColumnKind::Continuous, ColumnKind::Continuous) == PairKind::BothContinuous);
    CHECK(pair_kind(ColumnKind::Continuous, ColumnKind::Discretized) ==
          PairKind::MixedContinuousFirst);
    CHECK(pair_kind(ColumnKind::Discretized, ColumnKind::Continuous) ==
          PairKind::MixedDiscreteFirst);
    CHECK(pair_kind(ColumnKind::Discretized, ColumnKind::Discretized) == PairKind::BothDiscrete);
}

TEST_CASE("exceedance rates against the column mean") {
    CHECK(estimate_tau_single({1, 1, 1, 2}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(estimate_tau_single({1, 2, 1, 2}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(estimate_tau_single({}), DisctError);

    // discretized sides exceed their mean, continuous sides exceed zero
    const std::vector<double> cont = {-1.3, -0.4, 0.4, 1.3};
    const std::vector<double> lev = {1, 2, 1, 2};
    CHECK(estimate_tau_pair(cont, lev, PairKind::MixedContinuousFirst) ==
          doctest::Approx(0.25).epsilon(1e-15));  // rows where cont > 0 and lev > 1.5
    CHECK(estimate_tau_pair(lev, lev, PairKind::BothDiscrete) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(estimate_tau_pair(cont, cont, PairKind::BothContinuous) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(estimate_tau_pair(cont, {1.0}, PairKind::BothContinuous), DisctError);
}

TEST_CASE("latent cut from an exceedance rate, with empty-cell clamping") {
    CHECK(estimate_h(0.5, 100) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(estimate_h(0.25, 1000) == doctest::Approx(0.6744897501960817).epsilon(1e-12));
    // tau = 0 clamps to 1/(2n): with n = 100 the cut is the 0.995 quantile
    CHECK(estimate_h(0.0, 100) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
    CHECK(estimate_h(1.0, 100) == doctest::Approx(-2.5758293035489004).epsilon(1e-12));
    CHECK_THROWS_AS(estimate_h(1.5, 100), DisctError);
    CHECK_THROWS_AS(estimate_h(0.5, 0), DisctError);
}

TEST_CASE("bridge inversion at zero cuts has a closed form") {
    // tau12 = 1/4 + asin(sigma)/(2 pi)
    CHECK(solve_bridge(1.0 / 3.0, 0, 0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(solve_bridge(0.25, 0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(solve_bridge(0.25 - 1.0 / 12.0, 0, 0) == doctest::Approx(-0.5).epsilon(1e-9));
    // unattainable rates clamp to the sigma bounds
    CHECK(solve_bridge(0.5, 0, 0) == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
    CHECK(solve_bridge(0.0, 0, 0) == doctest::Approx(-(1.0 - 1e-6)).epsilon(1e-12));
    CHECK(solve_bridge(1.0, -1.0, 0.5) == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
    CHECK_THROWS_AS(solve_bridge(1.5, 0, 0), DisctError);
}

TEST_CASE("bridge inversion round-trips the orthant mass") {
    for (double sigma : {-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9})
        for (double h1 : {-1.0, 0.0, 1.2})
            for (double h2 : {-0.7, 0.4}) {
                const double tau12 = orthant_upper(h1, h2, sigma);
                CHECK(solve_bridge(tau12, h1, h2) ==
                      doctest::Approx(sigma).epsilon(1e-8).scale(1.0));
            }
}

TEST_CASE("pairwise state recovery per kind") {
    SUBCASE("continuous pair uses the plain covariance") {
        // already standardized columns: sigma_hat is the mean product
        const std::vector<double> a = {-1, -1, 1, 1};
        const std::vector<double> b = {-1, 1, -1, 1};
        const PairTheta th = estimate_pair(a, b, PairKind::BothContinuous);
        CHECK(th.sigma == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
        CHECK(th.h1 == 0.0);
        CHECK(th.thr1 == 0.0);
        // a perfectly collinear pair clamps inside the open interval
        const PairTheta id = estimate_pair(a, a, PairKind::BothContinuous);
        CHECK(id.sigma == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
    }
    SUBCASE("discretized pair solves the bridge at estimated cuts") {
        const std::vector<double> a = {1, 1, 2, 2};
        const std::vector<double> b = {1, 2, 1, 2};
        const PairTheta th = estimate_pair(a, b, PairKind::BothDiscrete);
        CHECK(th.thr1 == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(th.thr2 == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(th.h1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(th.h2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(th.sigma == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));  // tau12 = 1/4

        const PairTheta same = estimate_pair(a, a, PairKind::BothDiscrete);
        CHECK(same.sigma == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));  // tau12 = 1/2
    }
    SUBCASE("mixed pair thresholds the discretized side only") {
        const std::vector<double> cont = {-1.3416407864998738, -0.4472135954999579,
                                          0.4472135954999579, 1.3416407864998738};
        const std::vector<double> lev = {1, 2, 1, 2};
        const PairTheta th = estimate_pair(cont, lev, PairKind::MixedContinuousFirst);
        CHECK(th.thr1 == 0.0);
        CHECK(th.thr2 == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(th.h1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(th.sigma == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));  // tau12 = 1/4
    }
}
