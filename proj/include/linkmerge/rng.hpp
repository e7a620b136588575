// Deterministic counter-based RNG with named substreams.
//
// The generator is splitmix64: the state is a counter advanced by a fixed
// increment and the output is a bijective mix of the counter. Substreams are
// derived by hashing a stream label into the initial counter, so draws from
// one stream never perturb another (an x-stream of length m and a y-stream
// of length n stay identical when m or n changes).
//
// All samplers are hand-rolled transforms of the uniform output so that a
// (seed, stream) pair reproduces the same doubles on every run.

#ifndef LINKMERGE_RNG_HPP
#define LINKMERGE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace linkmerge {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

class Rng {
public:
    explicit Rng(std::uint64_t seed) : counter_(detail::mix64(seed)) {}

    Rng(std::uint64_t seed, std::string_view stream)
        : counter_(detail::mix64(detail::mix64(seed) ^ detail::fnv1a(stream))) {}

    /// Derive a fresh seed for a child task (experiment cell, repetition).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        return detail::mix64(detail::mix64(seed) + 0x9e3779b97f4a7c15ULL * (index + 1));
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return detail::mix64(counter_);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + next_double() * (hi - lo);
    }

    /// Standard normal via Box-Muller; always consumes two uniforms.
    double normal() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi() * u2);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted with u^(1/shape).
    double gamma(double shape) {
        if (!(shape > 0.0))
            throw std::invalid_argument("gamma shape must be positive");
        if (shape < 1.0) {
            double u = next_double();
            if (u < 1e-300) u = 1e-300;
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    /// Student-t with nu degrees of freedom (normal over scaled chi-square).
    double student_t(double nu) {
        if (!(nu > 0.0))
            throw std::invalid_argument("student nu must be positive");
        const double z = normal();
        const double chi2 = 2.0 * gamma(nu / 2.0);
        return z / std::sqrt(std::max(chi2 / nu, 1e-300));
    }

private:
    static constexpr double two_pi() { return 6.283185307179586476925286766559; }

    std::uint64_t counter_;
};

} // namespace linkmerge

#endif // LINKMERGE_RNG_HPP
