// Mean-zero noise families: Dirac, Gaussian, centered uniform and scaled
// Student-t. Each family exposes its density, a seeded sampler and its
// characteristic function. Gaussian/uniform/Dirac CFs are closed-form; the
// Student CF is computed by adaptive quadrature of the density against
// cos(t x) (the density is symmetric, so the CF is real and even).

#ifndef LINKMERGE_NOISE_HPP
#define LINKMERGE_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkmerge/rng.hpp"

namespace linkmerge {

enum class NoiseFamily { dirac, gaussian, uniform, scaled_student };

namespace detail {

// Composite 15-point Gauss-Legendre over uniform panels. Exact to machine
// precision once the panel width resolves the integrand's oscillation.
inline double gl15_paneled(const std::function<double(double)>& f, double a, double b,
                           double max_panel) {
    static constexpr double kNodes[15] = {
        -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
        -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
        -0.2011940939974345, 0.0,                 0.2011940939974345,
        0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
        0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
    static constexpr double kWeights[15] = {
        0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
        0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
        0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
        0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
        0.1071592204671719, 0.0703660474881081, 0.0307532419961173};
    const int n_panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
    const double w = (b - a) / n_panels;
    double total = 0.0;
    for (int p = 0; p < n_panels; ++p) {
        const double lo = a + p * w;
        const double mid = lo + 0.5 * w;
        double panel = 0.0;
        for (int q = 0; q < 15; ++q) panel += kWeights[q] * f(mid + 0.5 * w * kNodes[q]);
        total += 0.5 * w * panel;
    }
    return total;
}

// Panel halving until two successive estimates agree within abs_tol.
inline double integrate_to_tolerance(const std::function<double(double)>& f, double a,
                                     double b, double initial_panel, double abs_tol,
                                     const char* what) {
    double panel = std::min(initial_panel, b - a);
    double previous = gl15_paneled(f, a, b, panel);
    for (int round = 0; round < 8; ++round) {
        panel *= 0.5;
        const double refined = gl15_paneled(f, a, b, panel);
        if (std::abs(refined - previous) <= abs_tol && std::isfinite(refined))
            return refined;
        previous = refined;
    }
    throw std::runtime_error(std::string("quadrature did not converge: ") + what);
}

} // namespace detail

class NoiseSpec {
public:
    static NoiseSpec dirac() { return NoiseSpec(NoiseFamily::dirac, 0.0, 0.0); }

    static NoiseSpec gaussian(double sigma) {
        if (!(sigma >= 0.0) || !std::isfinite(sigma))
            throw std::invalid_argument("gaussian sigma must be finite and >= 0");
        if (sigma == 0.0) return dirac();
        return NoiseSpec(NoiseFamily::gaussian, sigma, 0.0);
    }

    /// Uniform on [-a, a].
    static NoiseSpec uniform(double half_range) {
        if (!(half_range >= 0.0) || !std::isfinite(half_range))
            throw std::invalid_argument("uniform half-range must be finite and >= 0");
        if (half_range == 0.0) return dirac();
        return NoiseSpec(NoiseFamily::uniform, half_range, 0.0);
    }

    /// scale * t(nu): "0.1 Student(4)" is scaled_student(0.1, 4).
    static NoiseSpec scaled_student(double scale, double nu) {
        if (!(scale >= 0.0) || !std::isfinite(scale))
            throw std::invalid_argument("student scale must be finite and >= 0");
        if (!(nu > 0.0) || !std::isfinite(nu))
            throw std::invalid_argument("student nu must be finite and > 0");
        if (scale == 0.0) return dirac();
        return NoiseSpec(NoiseFamily::scaled_student, scale, nu);
    }

    NoiseFamily family() const { return family_; }

    /// sigma for gaussian, half-range for uniform, scale for student, 0 for dirac.
    double param() const { return param_; }
    double nu() const { return nu_; }

    bool is_dirac() const { return family_ == NoiseFamily::dirac; }

    /// Standard deviation (student with nu <= 2 has none; its scale is
    /// returned instead, which is all the grid heuristics need).
    double spread() const {
        switch (family_) {
            case NoiseFamily::dirac: return 0.0;
            case NoiseFamily::gaussian: return param_;
            case NoiseFamily::uniform: return param_ / std::sqrt(3.0);
            case NoiseFamily::scaled_student:
                return nu_ > 2.0 ? param_ * std::sqrt(nu_ / (nu_ - 2.0)) : param_;
        }
        return 0.0;
    }

    double density(double x) const {
        switch (family_) {
            case NoiseFamily::dirac:
                return 0.0; // point mass, no density
            case NoiseFamily::gaussian: {
                const double z = x / param_;
                return std::exp(-0.5 * z * z) / (param_ * std::sqrt(2.0 * M_PI));
            }
            case NoiseFamily::uniform:
                return (x >= -param_ && x <= param_) ? 0.5 / param_ : 0.0;
            case NoiseFamily::scaled_student: {
                const double z = x / param_;
                const double logc = std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(0.5 * nu_)
                                  - 0.5 * std::log(nu_ * M_PI);
                return std::exp(logc - 0.5 * (nu_ + 1.0) * std::log1p(z * z / nu_)) / param_;
            }
        }
        return 0.0;
    }

    std::complex<double> char_fn(double t) const {
        switch (family_) {
            case NoiseFamily::dirac:
                return {1.0, 0.0};
            case NoiseFamily::gaussian: {
                const double st = param_ * t;
                return {std::exp(-0.5 * st * st), 0.0};
            }
            case NoiseFamily::uniform: {
                const double at = param_ * t;
                if (std::abs(at) < 1e-8) return {1.0 - at * at / 6.0, 0.0};
                return {std::sin(at) / at, 0.0};
            }
            case NoiseFamily::scaled_student:
                return {student_cf(std::abs(param_ * t)), 0.0};
        }
        return {1.0, 0.0};
    }

    std::vector<double> sample(std::size_t n, Rng& rng) const {
        std::vector<double> out(n);
        switch (family_) {
            case NoiseFamily::dirac:
                std::fill(out.begin(), out.end(), 0.0);
                break;
            case NoiseFamily::gaussian:
                for (auto& v : out) v = param_ * rng.normal();
                break;
            case NoiseFamily::uniform:
                for (auto& v : out) v = rng.uniform(-param_, param_);
                break;
            case NoiseFamily::scaled_student:
                for (auto& v : out) v = param_ * rng.student_t(nu_);
                break;
        }
        return out;
    }

    std::string describe() const {
        switch (family_) {
            case NoiseFamily::dirac: return "dirac";
            case NoiseFamily::gaussian: return "gaussian(" + fmt(param_) + ")";
            case NoiseFamily::uniform: return "uniform(" + fmt(param_) + ")";
            case NoiseFamily::scaled_student:
                return "student(" + fmt(param_) + "," + fmt(nu_) + ")";
        }
        return "?";
    }

private:
    NoiseSpec(NoiseFamily f, double param, double nu) : family_(f), param_(param), nu_(nu) {}

    static std::string fmt(double v) {
        std::string s = std::to_string(v);
        while (s.size() > 1 && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    // CF of the standard t(nu) at u >= 0 by quadrature of the density
    // against cos(u x): composite Gauss-Legendre on half-period panels,
    // refined until two passes agree within the absolute tolerance.
    double student_cf(double u) const {
        if (u == 0.0) return 1.0;
        constexpr double abs_tol = 1e-8;
        // The density has poles at +-i sqrt(nu), so the CF decays like
        // exp(-sqrt(nu) u); far past that scale the value is below any
        // usable threshold and the oscillatory quadrature is pointless.
        if (std::sqrt(nu_) * u > 60.0) return 0.0;
        // Tail cut: density mass beyond X is below abs_tol/20 by the crude
        // bound (x^2/nu)^{-(nu+1)/2}.
        const double logc = std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(0.5 * nu_)
                          - 0.5 * std::log(nu_ * M_PI);
        const double c = std::exp(logc);
        double X = std::pow(2.0 * c * std::pow(nu_, 0.5 * (nu_ + 1.0)) / (nu_ * abs_tol / 20.0),
                            1.0 / nu_);
        X = std::max(X, 10.0 * std::sqrt(std::max(nu_, 1.0)));
        const auto integrand = [&](double x) {
            return 2.0 * std::exp(logc - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_))
                 * std::cos(u * x);
        };
        const double half_period = M_PI / u;
        return detail::integrate_to_tolerance(integrand, 0.0, X, half_period, abs_tol,
                                              "student characteristic function");
    }

    NoiseFamily family_;
    double param_;
    double nu_;
};

/// n i.i.d. draws from the noise law; deterministic given the seed.
inline std::vector<double> sample_noise(const NoiseSpec& noise, std::size_t n,
                                        std::uint64_t seed) {
    Rng rng(seed, "noise");
    return noise.sample(n, rng);
}

} // namespace linkmerge

#endif // LINKMERGE_NOISE_HPP
