// Distribution deconvolution by characteristic-function division.
//
// The estimator: take the empirical characteristic function of the noisy
// sample on a symmetric frequency grid, zero every coefficient whose modulus
// falls below the truncation threshold tau, divide by the (known) noise
// characteristic function, and invert the transform onto an x grid. The raw
// density that comes back is signed; it is corrected into a proper CDF by
// clipping negatives, integrating, running-max monotonizing, clamping to
// [0,1] and normalizing the endpoint to 1.

#ifndef LINKMERGE_DECONVOLUTION_HPP
#define LINKMERGE_DECONVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "linkmerge/noise.hpp"
#include "linkmerge/step_cdf.hpp"

namespace linkmerge {

struct DeconvConfig {
    std::optional<double> tau;        // default n^{-1/2}
    std::optional<double> freq_max;   // default 20/IQR, floored at 5
    std::size_t n_freq = 1024;        // even count, symmetric about 0
    std::vector<double> x_grid;       // empty: data range +- 3 noise spreads, 512 points
    std::size_t n_x = 512;            // used only when x_grid is empty

    static std::vector<double> linspace(double lo, double hi, std::size_t n) {
        if (n < 2 || !(hi > lo))
            throw std::invalid_argument("linspace: need n >= 2 and hi > lo");
        std::vector<double> g(n);
        const double step = (hi - lo) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
        g.back() = hi;
        return g;
    }
};

struct DeconvolvedCdf {
    StepCdf cdf;
    std::vector<double> raw_density;  // signed inverse-transform values, pre-correction
    std::vector<double> x_grid;
    double tau = 0.0;
    double freq_max = 0.0;
    std::size_t n_freq = 0;
    std::size_t n_used = 0;
    std::size_t truncated = 0;        // coefficients zeroed by tau
    std::size_t cf_warnings = 0;      // divisions skipped: noise CF below 1e-12
    double raw_mass = 0.0;            // integral of the clipped density before normalization
    bool degenerate = false;          // all coefficients killed; uniform-ramp fallback
};

inline std::vector<std::complex<double>>
empirical_char_fn(const std::vector<double>& samples, const std::vector<double>& t_grid) {
    if (samples.empty())
        throw std::invalid_argument("empty sample");
    std::vector<std::complex<double>> out(t_grid.size());
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        const double t = t_grid[j];
        double re = 0.0, im = 0.0;
        for (double y : samples) {
            re += std::cos(t * y);
            im += std::sin(t * y);
        }
        out[j] = {re * inv_n, im * inv_n};
    }
    return out;
}

namespace detail {

inline double sample_quantile(std::vector<double> sorted, double p) {
    // sorted must be sorted ascending; type-7 interpolation
    const double idx = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

inline double interquartile_range(const std::vector<double>& sorted) {
    return sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
}

// Symmetric frequency grid with an even number of points: the positive half
// is mirrored exactly, so Hermitian symmetry of the spectrum is preserved
// bit-for-bit and t = 0 is never a grid point.
inline std::vector<double> symmetric_freq_grid(double freq_max, std::size_t n_freq) {
    std::vector<double> t(n_freq);
    const double step = 2.0 * freq_max / static_cast<double>(n_freq - 1);
    for (std::size_t k = 0; k < n_freq / 2; ++k) {
        const double v = freq_max - static_cast<double>(k) * step;
        t[n_freq - 1 - k] = v;
        t[k] = -v;
    }
    return t;
}

} // namespace detail

inline DeconvolvedCdf deconvolve(const std::vector<double>& samples_y,
                                 const NoiseSpec& noise, const DeconvConfig& config) {
    if (samples_y.empty())
        throw std::invalid_argument("empty sample");
    std::vector<double> sorted(samples_y);
    for (double v : sorted)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite sample");
    // Sorting fixes the summation order, so the fit is invariant under
    // permutations of the input sample.
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    if (config.n_freq < 8 || config.n_freq % 2 != 0)
        throw std::invalid_argument("n_freq must be even and at least 8");

    const double tau = config.tau.value_or(1.0 / std::sqrt(static_cast<double>(n)));
    if (!(tau >= 0.0))
        throw std::invalid_argument("tau must be >= 0");

    double freq_max;
    if (config.freq_max) {
        freq_max = *config.freq_max;
        if (!(freq_max > 0.0))
            throw std::invalid_argument("freq_max must be > 0");
    } else {
        double iqr = detail::interquartile_range(sorted);
        if (!(iqr > 0.0)) iqr = std::max(sorted.back() - sorted.front(), 1e-9);
        freq_max = std::max(5.0, 20.0 / iqr);
    }

    std::vector<double> x_grid = config.x_grid;
    if (x_grid.empty()) {
        double pad = 3.0 * noise.spread();
        const double range = sorted.back() - sorted.front();
        pad = std::max(pad, 1e-3 * std::max(range, 1.0));
        x_grid = DeconvConfig::linspace(sorted.front() - pad, sorted.back() + pad,
                                        std::max<std::size_t>(config.n_x, 2));
    } else {
        for (std::size_t i = 1; i < x_grid.size(); ++i)
            if (!(x_grid[i] > x_grid[i - 1]))
                throw std::invalid_argument("x_grid must be strictly increasing");
        if (sorted.front() < x_grid.front() || sorted.back() > x_grid.back())
            throw std::invalid_argument("grid does not cover sample range");
    }

    const auto t_grid = detail::symmetric_freq_grid(freq_max, config.n_freq);
    auto coef = empirical_char_fn(sorted, t_grid);

    DeconvolvedCdf result{
        StepCdf({0.0, 1.0}, {0.0, 1.0}, CdfKind::deconvolved), {}, {}, tau, freq_max,
        config.n_freq, n, 0, 0, 0.0, false};

    // Frequencies where the noise CF dips below the numerator noise floor
    // carry no signal after division, only amplified sampling noise, so the
    // ratio is zeroed there as well (counted as warnings).
    const double cf_guard = std::max(1e-12, tau);
    for (std::size_t j = 0; j < coef.size(); ++j) {
        if (std::abs(coef[j]) < tau) {
            coef[j] = 0.0;
            ++result.truncated;
            continue;
        }
        const std::complex<double> cf = noise.char_fn(t_grid[j]);
        if (std::abs(cf) < cf_guard) {
            coef[j] = 0.0;
            ++result.cf_warnings;
        } else {
            coef[j] /= cf;
        }
    }

    // Inverse transform: f(x) = (dt / 2pi) * sum_j e^{-i t_j x} coef_j. The
    // grid is Hermitian-symmetric, so only the positive half is summed.
    const double dt = 2.0 * freq_max / static_cast<double>(config.n_freq - 1);
    const std::size_t half = config.n_freq / 2;
    std::vector<double> density(x_grid.size(), 0.0);
    for (std::size_t k = half; k < config.n_freq; ++k) {
        const std::complex<double> c = coef[k];
        if (c == std::complex<double>(0.0, 0.0)) continue;
        const double t = t_grid[k];
        for (std::size_t i = 0; i < x_grid.size(); ++i) {
            const double a = t * x_grid[i];
            density[i] += c.real() * std::cos(a) + c.imag() * std::sin(a);
        }
    }
    const double scale = dt / M_PI; // (dt/2pi) * 2 for the mirrored half
    for (auto& d : density) d *= scale;

    result.raw_density = density;
    result.x_grid = x_grid;

    // Correction pipeline: clip, integrate, running max, clamp, normalize.
    std::vector<double> clipped(density.size());
    for (std::size_t i = 0; i < density.size(); ++i)
        clipped[i] = std::max(density[i], 0.0);

    std::vector<double> cum(density.size(), 0.0);
    for (std::size_t i = 1; i < density.size(); ++i)
        cum[i] = cum[i - 1]
               + 0.5 * (clipped[i - 1] + clipped[i]) * (x_grid[i] - x_grid[i - 1]);
    result.raw_mass = cum.back();

    if (!(cum.back() > 1e-12) || !std::isfinite(cum.back())) {
        // Everything was truncated away; fall back to a uniform ramp so the
        // returned object still satisfies the CDF invariants.
        result.degenerate = true;
        const double span = x_grid.back() - x_grid.front();
        for (std::size_t i = 0; i < cum.size(); ++i)
            cum[i] = (x_grid[i] - x_grid.front()) / span;
    } else {
        double running = 0.0; // integral of a clipped density is already
        for (auto& v : cum) { // non-decreasing; kept for the stated order
            running = std::max(running, v);
            v = running;
        }
        for (auto& v : cum) v = std::clamp(v, 0.0, 1.0);
        const double total = cum.back();
        if (total < 1.0)
            for (auto& v : cum) v /= total;
    }
    cum.back() = 1.0;

    result.cdf = StepCdf(x_grid, std::move(cum), CdfKind::deconvolved);
    return result;
}

// Per-frequency check of the quantile-matching-vs-deconvolution condition
// |1 - 1/f*| >= |1/f - 1/f*|, where f* is the true noise CF and f the
// candidate used for deconvolution. Frequencies where either CF is ~0 are
// skipped and counted.
struct NoiseAdvantageReport {
    std::vector<double> t;
    std::vector<bool> holds;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;
    double fraction = 0.0;
};

inline NoiseAdvantageReport noise_advantage(const NoiseSpec& candidate,
                                            const NoiseSpec& truth,
                                            const std::vector<double>& t_grid) {
    NoiseAdvantageReport report;
    report.t = t_grid;
    report.holds.resize(t_grid.size(), false);
    std::size_t satisfied = 0;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        const auto f = candidate.char_fn(t_grid[j]);
        const auto f_star = truth.char_fn(t_grid[j]);
        if (std::abs(f) < 1e-12 || std::abs(f_star) < 1e-12) {
            ++report.skipped;
            continue;
        }
        const double lhs = std::abs(1.0 - 1.0 / f_star);
        const double rhs = std::abs(1.0 / f - 1.0 / f_star);
        const bool ok = lhs >= rhs - 1e-15;
        report.holds[j] = ok;
        ++report.evaluated;
        if (ok) ++satisfied;
    }
    report.fraction = report.evaluated == 0
                        ? 0.0
                        : static_cast<double>(satisfied) / static_cast<double>(report.evaluated);
    return report;
}

// Indicative sup-error rate of the deconvolved CDF at confidence 1-delta.
// Ordinary-smooth noise (uniform: decay 1, student: decay nu) gives a
// polynomial rate (n/log(1/delta))^{-eps}; Gaussian noise a log rate.
// Constants are fixed at C=1; callers may override psi wholesale.
inline double psi_rate(const NoiseSpec& noise, std::size_t n, double delta,
                       double smoothness) {
    if (n < 1)
        throw std::invalid_argument("psi_rate: n must be at least 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("psi_rate: delta must lie in (0,1)");
    if (!(smoothness > 0.0))
        throw std::invalid_argument("psi_rate: smoothness must be positive");
    const double nd = static_cast<double>(n);
    switch (noise.family()) {
        case NoiseFamily::dirac:
            return 0.0;
        case NoiseFamily::gaussian:
            return std::pow(std::log(nd / delta), -smoothness);
        case NoiseFamily::uniform: {
            const double eps = smoothness / (2.0 * smoothness + 2.0 * 1.0 + 1.0);
            return std::pow(nd / std::log(1.0 / delta), -eps);
        }
        case NoiseFamily::scaled_student: {
            const double eps = smoothness / (2.0 * smoothness + 2.0 * noise.nu() + 1.0);
            return std::pow(nd / std::log(1.0 / delta), -eps);
        }
    }
    return 0.0;
}

} // namespace linkmerge

#endif // LINKMERGE_DECONVOLUTION_HPP
