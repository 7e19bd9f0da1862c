#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr interleaved
};

// the harness exports DISCT_CLI with the freshly built binary
std::string cli_path() {
    const char* p = std::getenv("DISCT_CLI");
    REQUIRE_MESSAGE(p != nullptr, "DISCT_CLI must point at the cli binary");
    return p;
}

RunResult run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path() + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, got);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& stem) {
        static int counter = 0;
        path = (std::filesystem::temp_directory_path() /
                ("disct_cli_" + stem + "_" + std::to_string(++counter) + ".csv"))
                   .string();
    }
    ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) out.push_back(f);
    return out;
}

} // namespace

TEST_CASE("usage and bad invocations exit nonzero") {
    CHECK(run_cli("").exit_code != 0);
    const RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("citest") != std::string::npos);
    CHECK(help.output.find("discover") != std::string::npos);

    const RunResult missing = run_cli("test --data /nonexistent.csv --pair a,b");
    CHECK(missing.exit_code == 1);
    CHECK(missing.output.find("error:") != std::string::npos);
}

TEST_CASE("scenario generation is reproducible") {
    TempPath a("gen_a"), b("gen_b"), c("gen_c");
    CHECK(run_cli("gen --scenario null --n 200 --cond-dim 1 --pair-type discrete --levels 2"
                  " --seed 9 --out " + a.path).exit_code == 0);
    CHECK(run_cli("gen --scenario null --n 200 --cond-dim 1 --pair-type discrete --levels 2"
                  " --seed 9 --out " + b.path).exit_code == 0);
    CHECK(run_cli("gen --scenario null --n 200 --cond-dim 1 --pair-type discrete --levels 2"
                  " --seed 10 --out " + c.path).exit_code == 0);
    const std::string bytes = slurp(a.path);
    CHECK(bytes == slurp(b.path));
    CHECK(bytes != slurp(c.path));
    CHECK(lines_of(bytes).size() == 201);
    CHECK(lines_of(bytes)[0] == "y,w,z1");

    // truth output needs the dag scenario
    TempPath t("gen_truth");
    const RunResult bad = run_cli("gen --scenario null --n 200 --out " + a.path +
                                  " --truth-out " + t.path);
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("--scenario dag") != std::string::npos);
}

TEST_CASE("pair and conditional tests print one csv row") {
    TempPath data("pairdata");
    REQUIRE(run_cli("gen --scenario null --n 1200 --cond-dim 1 --pair-type discrete --levels 2"
                    " --seed 3 --out " + data.path).exit_code == 0);

    const RunResult pr = run_cli("test --data " + data.path + " --pair y,z1");
    CHECK(pr.exit_code == 0);
    const auto plines = lines_of(pr.output);
    REQUIRE(plines.size() == 2);
    CHECK(plines[0] == "sigma_hat,variance,z,p_value");
    const auto pf = fields_of(plines[1]);
    REQUIRE(pf.size() == 4);
    const double sigma = std::strtod(pf[0].c_str(), nullptr);
    CHECK(sigma > 0.1);  // y loads positively on z1
    CHECK(sigma < 1.0);

    // column references also work positionally
    const RunResult by_index = run_cli("test --data " + data.path + " --pair 0,2");
    CHECK(by_index.output == pr.output);

    const RunResult ci = run_cli("citest --data " + data.path + " --i y --j w --cond z1");
    CHECK(ci.exit_code == 0);
    const auto clines = lines_of(ci.output);
    REQUIRE(clines.size() == 2);
    CHECK(clines[0] == "beta_hat,variance,z,p_value,decision,pd_repair_flag");
    const auto cf = fields_of(clines[1]);
    REQUIRE(cf.size() == 6);
    const double p = std::strtod(cf[3].c_str(), nullptr);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK((cf[4] == "independent" || cf[4] == "dependent"));
    CHECK((cf[5] == "0" || cf[5] == "1"));

    CHECK(run_cli("test --data " + data.path + " --pair y").exit_code == 1);
    CHECK(run_cli("test --data " + data.path + " --pair y,nosuch").exit_code == 1);
    CHECK(run_cli("citest --data " + data.path + " --i y --j y --cond z1").exit_code == 1);
}

TEST_CASE("discovery against a generated truth") {
    TempPath data("dagdata"), truth("dagtruth"), adj("adj"), metrics("metrics");
    REQUIRE(run_cli("gen --scenario dag --n 2000 --p 4 --edges 3 --levels 2 --seed 7 --out " +
                    data.path + " --truth-out " + truth.path).exit_code == 0);
    const auto tlines = lines_of(slurp(truth.path));
    REQUIRE(tlines.size() == 4);  // header + one row per arc
    CHECK(tlines[0] == "from,to");

    const RunResult res = run_cli("discover --data " + data.path +
                                  " --test dct --mode dag --truth " + truth.path + " --out " +
                                  adj.path + " --metrics-out " + metrics.path);
    CHECK(res.exit_code == 0);

    const auto alines = lines_of(slurp(adj.path));
    REQUIRE(alines.size() == 4);
    for (const auto& line : alines) {
        const auto f = fields_of(line);
        REQUIRE(f.size() == 4);
        for (const auto& cell : f) CHECK((cell == "0" || cell == "1"));
    }

    const auto mlines = lines_of(slurp(metrics.path));
    REQUIRE(mlines.size() == 2);
    CHECK(mlines[0] == "mode,f1,precision,recall,shd");
    const auto mf = fields_of(mlines[1]);
    REQUIRE(mf.size() == 5);
    CHECK(mf[0] == "dag");
    const double f1 = std::strtod(mf[1].c_str(), nullptr);
    CHECK(f1 >= 0.0);
    CHECK(f1 <= 1.0);

    // skeleton mode emits a symmetric matrix
    TempPath skel("skel");
    REQUIRE(run_cli("discover --data " + data.path + " --test dct --mode skeleton --out " +
                    skel.path).exit_code == 0);
    const auto slines = lines_of(slurp(skel.path));
    REQUIRE(slines.size() == 4);
    std::vector<std::vector<std::string>> m;
    for (const auto& line : slines) m.push_back(fields_of(line));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(m[i][j] == m[j][i]);
}

TEST_CASE("sweep subcommands write stable csv files") {
    TempPath one("t1_one"), four("t1_four");
    const std::string common =
        "type1 --replicates 5 --n-grid 250 --d-grid 1 --k-grid 2 --pair-types discrete"
        " --tests dct --seed 6 --out ";
    REQUIRE(run_cli(common + one.path + " --threads 1").exit_code == 0);
    REQUIRE(run_cli(common + four.path + " --threads 4").exit_code == 0);
    const std::string csv = slurp(one.path);
    CHECK(csv == slurp(four.path));
    const auto lines = lines_of(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "test,pair_type,n,D,K,rejection_rate,mc_stderr,failures");
    CHECK(fields_of(lines[1])[0] == "dct");

    TempPath pw("power");
    REQUIRE(run_cli("power --replicates 4 --calibration-replicates 20 --n-grid 250 --d-grid 1"
                    " --k-grid 2 --pair-types discrete --tests dct --seed 6 --out " +
                    pw.path).exit_code == 0);
    const auto plines = lines_of(slurp(pw.path));
    REQUIRE(plines.size() == 2);
    CHECK(plines[0] == "test,pair_type,n,D,K,calibrated_type2_rate,failures");

    TempPath ds("disco");
    REQUIRE(run_cli("discover-sweep --replicates 1 --p-grid 4 --n-grid 400 --edge-grid 3"
                    " --tests fisherz --seed 2 --out " + ds.path).exit_code == 0);
    const auto dlines = lines_of(slurp(ds.path));
    REQUIRE(dlines.size() == 3);  // header + skeleton + dag rows
    CHECK(dlines[0] == "test,p,n,edges,mode,f1,precision,recall,shd,seed");

    CHECK(run_cli("type1 --tests nosuch --out " + one.path).exit_code == 1);
}
