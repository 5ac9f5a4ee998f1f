#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace sop {

/// Seeded random source used everywhere randomness is needed. Wraps a
/// mt19937_64 engine but draws bounded integers and reals itself so that
/// streams are reproducible independent of the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// Derives an independent stream from (seed, stream, index). Used by the
    /// training engine to give each (epoch, sample) pair its own source.
    static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        std::uint64_t s = mix(seed + 0x9e3779b97f4a7c15ULL);
        s ^= mix(stream + 0xbf58476d1ce4e5b9ULL);
        s ^= mix(index + 0x94d049bb133111ebULL);
        return Rng(s);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) { // full 64-bit range
            return static_cast<std::int64_t>(engine_());
        }
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return lo + static_cast<std::int64_t>(v % span);
    }

    /// Uniform real in [lo, hi) with 53-bit resolution.
    double uniform_real(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    bool bernoulli(double p) { return uniform_real(0.0, 1.0) < p; }

    std::string serialize() const {
        std::ostringstream os;
        os << engine_;
        return os.str();
    }

    static Rng deserialize(const std::string& state) {
        Rng r;
        std::istringstream is(state);
        is >> r.engine_;
        return r;
    }

private:
    Rng() : engine_() {}

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace sop
