#pragma once

// Counter-based random stream (Philox4x32-10). Streams are keyed by
// (seed, stream id), so any worker can regenerate any replicate's draws
// without coordination; results never depend on thread scheduling.

#include <array>
#include <cstdint>

namespace disct {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * c[0];
    const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        philox_round(ctr, key);
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace detail

// Mixes an arbitrary list of labels into a stream id. Used to derive
// independent substreams per (cell, replicate, purpose) deterministically.
inline std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t acc = 0x243F6A8885A308D3ull;
    for (std::uint64_t p : parts) acc = detail::splitmix64(acc ^ p);
    return acc;
}

class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          hi_{stream} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        if (idx_ == 2) {
            const std::array<std::uint32_t, 4> ctr = {
                static_cast<std::uint32_t>(lo_), static_cast<std::uint32_t>(lo_ >> 32),
                static_cast<std::uint32_t>(hi_), static_cast<std::uint32_t>(hi_ >> 32)};
            const auto out = detail::philox4x32_10(ctr, key_);
            block_[0] = (std::uint64_t{out[1]} << 32) | out[0];
            block_[1] = (std::uint64_t{out[3]} << 32) | out[2];
            ++lo_;
            idx_ = 0;
        }
        return block_[idx_++];
    }

    // uniform on [0,1), 53-bit resolution
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform on (0,1), safe as a quantile-function argument
    double uniform_open() {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal();        // standard normal via inverse CDF
    double student_t3();    // t with 3 df, scaled to unit variance
    double exponential1();  // Exp(1) centered to mean zero

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = max() - max() % n;
        std::uint64_t v;
        do { v = (*this)(); } while (v >= limit);
        return v % n;
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t hi_;
    std::uint64_t lo_ = 0;
    std::array<std::uint64_t, 2> block_{};
    int idx_ = 2;
};

} // namespace disct
