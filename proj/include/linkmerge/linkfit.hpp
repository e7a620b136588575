// The core estimator: per matched group Z, compose the pseudo-inverse of the
// deconvolved CDF of Y^Z with the empirical CDF of X^Z. Confidence bands
// bracket the quantile level by the combined ECDF and deconvolution
// sup-errors (phi + psi) and map both ends through the estimated quantile
// function. The Hoelder bound gives the corresponding explicit error rate.

#ifndef LINKMERGE_LINKFIT_HPP
#define LINKMERGE_LINKFIT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "linkmerge/deconvolution.hpp"
#include "linkmerge/matching.hpp"
#include "linkmerge/noise.hpp"
#include "linkmerge/step_cdf.hpp"

namespace linkmerge {

struct FitDiagnostics {
    std::size_t n_z = 0;
    double psi = 0.0;
    double phi = 0.0;
    double delta = 0.0;
    double tau = 0.0;
    std::size_t cf_warnings = 0;
    bool psi_indicative = true; // psi came from the default rate, not the caller
};

struct LinkEstimate {
    std::string group_key;
    std::vector<double> u_grid;
    std::vector<double> h_hat;
    std::vector<double> band_lo; // empty when no band was requested
    std::vector<double> band_hi;
    FitDiagnostics diagnostics;
    double output_cell = 0.0; // largest spacing of the deconvolved x grid

    /// Piecewise-linear evaluation of the fitted curve, clamped to the ends.
    double operator()(double u) const {
        if (u <= u_grid.front()) return h_hat.front();
        if (u >= u_grid.back()) return h_hat.back();
        auto it = std::upper_bound(u_grid.begin(), u_grid.end(), u);
        const std::size_t i = static_cast<std::size_t>(it - u_grid.begin());
        const double w = (u - u_grid[i - 1]) / (u_grid[i] - u_grid[i - 1]);
        return h_hat[i - 1] * (1.0 - w) + h_hat[i] * w;
    }
};

struct HolderParams {
    double alpha;
    double L;
    double beta;
    double M;

    HolderParams(double alpha_, double L_, double beta_, double M_)
        : alpha(alpha_), L(L_), beta(beta_), M(M_) {
        if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("Hoelder exponents must lie in (0,1]");
        if (!(L > 0.0) || !(M > 0.0))
            throw std::invalid_argument("Hoelder constants must be positive");
    }
};

/// Explicit high-probability error bound L * M^alpha * (psi+phi)^(alpha*beta).
inline double holder_error_bound(const HolderParams& hp, double psi, double phi) {
    if (!(psi >= 0.0) || !(phi >= 0.0))
        throw std::invalid_argument("psi and phi must be >= 0");
    return hp.L * std::pow(hp.M, hp.alpha) * std::pow(psi + phi, hp.alpha * hp.beta);
}

/// Plug-in confidence bracket at u: the quantile level F_Z(u) is widened by
/// psi + phi on both sides (clamped to [0,1]) and mapped through the
/// deconvolved quantile function.
inline std::pair<double, double> band_from_bounds(const StepCdf& f_z, const StepCdf& f_h,
                                                  double u, double psi, double phi) {
    if (!(psi >= 0.0) || !(phi >= 0.0))
        throw std::invalid_argument("psi and phi must be >= 0");
    const double level = f_z(u);
    const double width = psi + phi;
    const double lo = f_h.quantile(std::clamp(level - width, 0.0, 1.0));
    const double hi = f_h.quantile(std::clamp(level + width, 0.0, 1.0));
    return {lo, hi};
}

struct MatchMergeOptions {
    std::optional<double> psi; // override the indicative default rate
    double smoothness = 1.0;   // feeds the default psi rate
    bool decreasing = false;   // fit -Y and negate the result
    bool with_band = true;
    std::size_t threads = 1;   // groups are independent; results stay key-ordered
};

struct GroupFailure {
    std::string group_key;
    std::string message;
};

struct MatchMergeResult {
    std::vector<LinkEstimate> estimates;    // in group-key order
    std::vector<std::string> skipped;       // groups with n_z <= 1
    std::vector<GroupFailure> failures;     // per-group numeric errors
};

namespace detail {

inline std::vector<double> make_u_grid(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.size() >= 2 && xs.back() > xs.front()) {
        const auto uniform = DeconvConfig::linspace(xs.front(), xs.back(), 101);
        xs.insert(xs.end(), uniform.begin(), uniform.end());
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    }
    return xs;
}

inline LinkEstimate fit_group(const std::string& key, const Group& group,
                              const NoiseSpec& noise, const DeconvConfig& config,
                              double delta, const MatchMergeOptions& opts) {
    std::vector<double> ys = group.y_subset;
    if (opts.decreasing)
        for (auto& y : ys) y = -y;

    const StepCdf f_z = empirical_cdf(group.x_subset);
    const DeconvolvedCdf dec = deconvolve(ys, noise, config);

    LinkEstimate est;
    est.group_key = key;
    est.u_grid = make_u_grid(group.x_subset);
    est.output_cell = dec.cdf.max_cell();

    const std::size_t n_z = group.n_z();
    est.diagnostics.n_z = n_z;
    est.diagnostics.delta = delta;
    est.diagnostics.tau = dec.tau;
    est.diagnostics.cf_warnings = dec.cf_warnings;
    est.diagnostics.phi = phi_bound(delta, group.x_subset.size());
    if (opts.psi) {
        est.diagnostics.psi = *opts.psi;
        est.diagnostics.psi_indicative = false;
    } else {
        est.diagnostics.psi = psi_rate(noise, ys.size(), delta, opts.smoothness);
        est.diagnostics.psi_indicative = !noise.is_dirac();
    }

    est.h_hat.reserve(est.u_grid.size());
    if (opts.with_band) {
        est.band_lo.reserve(est.u_grid.size());
        est.band_hi.reserve(est.u_grid.size());
    }
    for (double u : est.u_grid) {
        est.h_hat.push_back(dec.cdf.quantile(f_z(u)));
        if (opts.with_band) {
            auto [lo, hi] =
                band_from_bounds(f_z, dec.cdf, u, est.diagnostics.psi, est.diagnostics.phi);
            est.band_lo.push_back(lo);
            est.band_hi.push_back(hi);
        }
    }

    if (opts.decreasing) {
        for (auto& h : est.h_hat) h = -h;
        if (opts.with_band) {
            for (auto& b : est.band_lo) b = -b;
            for (auto& b : est.band_hi) b = -b;
            std::swap(est.band_lo, est.band_hi);
        }
    }
    return est;
}

} // namespace detail

/// Algorithm 1: fit every matched group with n_Z > 1; other groups are
/// reported as skipped, and per-group failures never abort the rest. Fits
/// run on opts.threads workers; each group lands in its own slot, so the
/// output is identical for every thread count.
inline MatchMergeResult match_merge(const GroupMap& groups, const NoiseSpec& noise,
                                    const DeconvConfig& config, double delta,
                                    const MatchMergeOptions& opts = {}) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("delta must lie in (0,1)");

    std::vector<const std::pair<const std::string, Group>*> items;
    items.reserve(groups.groups.size());
    for (const auto& kv : groups.groups) items.push_back(&kv);

    struct Slot {
        std::optional<LinkEstimate> estimate;
        std::optional<GroupFailure> failure;
        bool skipped = false;
    };
    std::vector<Slot> slots(items.size());

    const auto work = [&](std::size_t i) {
        const auto& [key, group] = *items[i];
        if (group.n_z() <= 1) {
            slots[i].skipped = true;
            return;
        }
        try {
            slots[i].estimate = detail::fit_group(key, group, noise, config, delta, opts);
        } catch (const std::exception& e) {
            slots[i].failure = GroupFailure{key, e.what()};
        }
    };

    const std::size_t threads = std::min(std::max<std::size_t>(opts.threads, 1), items.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < items.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& th : pool) th.join();
    }

    MatchMergeResult result;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].skipped) result.skipped.push_back(items[i]->first);
        if (slots[i].estimate) result.estimates.push_back(std::move(*slots[i].estimate));
        if (slots[i].failure) result.failures.push_back(std::move(*slots[i].failure));
    }
    return result;
}

// Oracle for the graph identity h(u) = F_h^{-1}(F(u)): both distribution
// functions are built by dense enumeration of the analytic inputs, composed,
// and compared against h itself. Points where F is locally flat violate the
// identity's precondition and are flagged rather than scored.
struct Lemma3Report {
    std::vector<double> deviation;  // |F_h^{-1}(F(u)) - h(u)| per grid point
    std::vector<bool> f_flat;       // F not strictly increasing near u
    double max_deviation_strict = 0.0; // max over non-flagged points
    double grid_cell = 0.0;
};

inline Lemma3Report lemma3_check(const std::function<double(double)>& cdf_f,
                                 const std::function<double(double)>& h,
                                 const std::vector<double>& u_grid,
                                 double domain_lo, double domain_hi,
                                 std::size_t dense_n = 10000) {
    const auto xs = DeconvConfig::linspace(domain_lo, domain_hi, dense_n);
    std::vector<double> hx(xs.size());
    std::vector<double> fx(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        hx[k] = h(xs[k]);
        fx[k] = std::clamp(cdf_f(xs[k]), 0.0, 1.0);
    }

    // F_h^{-1}(p) by interpolated inversion of the enumerated (F(x), h(x))
    // pairs; on a flat stretch of F the left end of the level set is taken.
    const auto f_h_inv = [&](double p) {
        auto it = std::lower_bound(fx.begin(), fx.end(), p);
        if (it == fx.begin()) return hx.front();
        if (it == fx.end()) return hx.back();
        const std::size_t k = static_cast<std::size_t>(it - fx.begin());
        if (fx[k] > fx[k - 1]) {
            const double w = (p - fx[k - 1]) / (fx[k] - fx[k - 1]);
            return hx[k - 1] + w * (hx[k] - hx[k - 1]);
        }
        return hx[k];
    };

    Lemma3Report report;
    report.grid_cell = (domain_hi - domain_lo) / static_cast<double>(dense_n - 1);
    const double probe = report.grid_cell;
    for (double u : u_grid) {
        const double dev = std::abs(f_h_inv(std::clamp(cdf_f(u), 0.0, 1.0)) - h(u));
        // strict increase must hold on both sides of u; a one-sided plateau
        // already breaks the identity (the pseudo-inverse picks the left
        // end of the level set)
        const bool flat = cdf_f(u + probe) - cdf_f(u) <= 0.0
                       || cdf_f(u) - cdf_f(u - probe) <= 0.0;
        report.deviation.push_back(dev);
        report.f_flat.push_back(flat);
        if (!flat) report.max_deviation_strict = std::max(report.max_deviation_strict, dev);
    }
    return report;
}

} // namespace linkmerge

#endif // LINKMERGE_LINKFIT_HPP
