// Simulation lab: synthetic data generators for the monotone-link model,
// a seeded experiment runner over (sample size x noise) grids, the
// misspecified-deconvolution ablation, and the holdout MSE metric.
//
// Sampling uses three named substreams (x, y, noise) derived from one seed,
// so the X sample, the fresh X' draws behind Y, and the noise draws never
// perturb each other when m or n changes.

#ifndef LINKMERGE_SIMLAB_HPP
#define LINKMERGE_SIMLAB_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linkmerge/linkfit.hpp"
#include "linkmerge/matching.hpp"
#include "linkmerge/noise.hpp"
#include "linkmerge/rng.hpp"

namespace linkmerge {

enum class HFamily { identity, affine, power_abs, disc_flat, custom };

inline HFamily parse_h_family(const std::string& tag) {
    if (tag == "identity") return HFamily::identity;
    if (tag == "affine") return HFamily::affine;
    if (tag == "power_abs") return HFamily::power_abs;
    if (tag == "disc_flat") return HFamily::disc_flat;
    if (tag == "custom") return HFamily::custom;
    throw std::invalid_argument("unknown h family: " + tag);
}

inline std::string h_family_name(HFamily f) {
    switch (f) {
        case HFamily::identity: return "identity";
        case HFamily::affine: return "affine";
        case HFamily::power_abs: return "power_abs";
        case HFamily::disc_flat: return "disc_flat";
        case HFamily::custom: return "custom";
    }
    return "?";
}

struct SimConfig {
    std::size_t m = 500;                  // X sample size
    std::size_t n = 500;                  // Y sample size
    HFamily h_family = HFamily::power_abs;
    double affine_a = 1.0;
    double affine_b = 0.0;
    std::vector<std::pair<double, double>> custom_table; // monotone (x, h(x)) knots
    double x_lo = -5.0;                   // X ~ U([x_lo, x_hi])
    double x_hi = 5.0;
    NoiseSpec noise_true = NoiseSpec::gaussian(std::sqrt(0.1));
    NoiseSpec noise_deconv = NoiseSpec::gaussian(std::sqrt(0.1));
    std::uint64_t seed = 0;

    void validate() const {
        if (m < 2 || n < 2)
            throw std::invalid_argument("SimConfig: m and n must be at least 2");
        if (!(x_lo < x_hi))
            throw std::invalid_argument("SimConfig: x_lo must be below x_hi");
        if (h_family == HFamily::custom && custom_table.size() < 2)
            throw std::invalid_argument("SimConfig: custom table needs at least two knots");
    }

    /// The true link as a callable.
    std::function<double(double)> h_fn() const {
        switch (h_family) {
            case HFamily::identity:
                return [](double x) { return x; };
            case HFamily::affine: {
                const double a = affine_a, b = affine_b;
                return [a, b](double x) { return a * x + b; };
            }
            case HFamily::power_abs:
                return [](double x) { return x * std::abs(x) / 4.0; };
            case HFamily::disc_flat:
                // monotone with a flat stretch on [0,2) and jumps at 0 and 2
                return [](double x) {
                    if (x < 0.0) return x;
                    if (x < 2.0) return 0.5;
                    return x + 1.0;
                };
            case HFamily::custom: {
                auto table = custom_table;
                return [table](double x) {
                    if (x <= table.front().first) return table.front().second;
                    if (x >= table.back().first) return table.back().second;
                    auto it = std::upper_bound(
                        table.begin(), table.end(), x,
                        [](double v, const auto& knot) { return v < knot.first; });
                    const auto& [x1, h1] = *it;
                    const auto& [x0, h0] = *(it - 1);
                    const double w = (x - x0) / (x1 - x0);
                    return h0 * (1.0 - w) + h1 * w;
                };
            }
        }
        return [](double x) { return x; };
    }
};

struct SimData {
    Dataset dx;
    Dataset dy;
    std::vector<std::pair<double, double>> truth; // dense table of the true h
};

/// Draw X and Y from the model with Y built from a *fresh* X' sample: the
/// two datasets are fully independent, as in data collected by two sources.
inline SimData simulate(const SimConfig& config) {
    config.validate();
    const auto h = config.h_fn();

    Rng x_rng(config.seed, "x");
    Rng y_rng(config.seed, "y");
    Rng noise_rng(config.seed, "noise");

    SimData out;
    out.dx.values.reserve(config.m);
    for (std::size_t i = 0; i < config.m; ++i)
        out.dx.values.push_back(x_rng.uniform(config.x_lo, config.x_hi));

    const auto eps = config.noise_true.sample(config.n, noise_rng);
    out.dy.values.reserve(config.n);
    for (std::size_t j = 0; j < config.n; ++j) {
        const double x_fresh = y_rng.uniform(config.x_lo, config.x_hi);
        out.dy.values.push_back(h(x_fresh) + eps[j]);
    }

    const auto grid = DeconvConfig::linspace(config.x_lo, config.x_hi, 1001);
    out.truth.reserve(grid.size());
    for (double x : grid) out.truth.emplace_back(x, h(x));
    return out;
}

struct EvalReport {
    double mse = 0.0;
    double risk = 0.0;
    std::size_t n_holdout = 0;
};

/// Holdout metric: mean squared vertical deviation of (x, y) points from the
/// fitted curve, with the curve interpolated linearly and clamped at its ends.
inline EvalReport evaluate(const LinkEstimate& estimate,
                           const std::vector<std::pair<double, double>>& holdout) {
    if (holdout.empty())
        throw std::invalid_argument("empty holdout");
    double sum = 0.0;
    for (const auto& [x, y] : holdout) {
        const double d = y - estimate(x);
        sum += d * d;
    }
    EvalReport report;
    report.n_holdout = holdout.size();
    report.mse = sum / static_cast<double>(holdout.size());
    report.risk = std::sqrt(report.mse);
    return report;
}

/// Squared deviation from the true link on a uniform grid spanning the
/// central 90% of the X law's support (edge quantiles degenerate beyond the
/// sample extremes).
inline double grid_mse(const LinkEstimate& estimate, const std::function<double(double)>& h,
                       double x_lo, double x_hi, std::size_t n_points = 201) {
    const double margin = 0.05 * (x_hi - x_lo);
    const auto grid = DeconvConfig::linspace(x_lo + margin, x_hi - margin, n_points);
    double sum = 0.0;
    for (double x : grid) {
        const double d = estimate(x) - h(x);
        sum += d * d;
    }
    return sum / static_cast<double>(grid.size());
}

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double iqr_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return sample_quantile(v, 0.75) - sample_quantile(v, 0.25);
}

// One end-to-end fit of simulated data; returns the grid-MSE against the
// configured truth.
inline double fit_cell_once(const SimConfig& config, const DeconvConfig& deconv,
                            double delta) {
    const auto data = simulate(config);
    GroupMap groups;
    groups.groups[""] = Group{data.dx.values, data.dy.values};
    MatchMergeOptions opts;
    opts.with_band = false;
    auto fit = match_merge(groups, config.noise_deconv, deconv, delta, opts);
    if (!fit.failures.empty())
        throw std::runtime_error(fit.failures.front().message);
    return grid_mse(fit.estimates.front(), config.h_fn(), config.x_lo, config.x_hi);
}

} // namespace detail

struct CellSummary {
    std::size_t m = 0;
    std::size_t n = 0;
    std::string noise;
    std::string h_family;
    std::size_t repetitions = 0;
    double median_mse = 0.0;
    double iqr_mse = 0.0;
    std::size_t failures = 0;
};

/// Appendix-style grid study: for every (size, noise) cell, repeat the
/// simulate-fit-score loop with per-repetition derived seeds and summarize.
inline std::vector<CellSummary> run_grid_experiment(
    const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
    const std::vector<NoiseSpec>& noises, HFamily h_family, std::size_t repetitions,
    std::uint64_t seed, const DeconvConfig& deconv = {}, double delta = 0.05) {
    if (repetitions < 1)
        throw std::invalid_argument("repetitions must be at least 1");
    std::vector<CellSummary> cells;
    std::size_t cell_index = 0;
    for (const auto& [m, n] : sizes) {
        for (const auto& noise : noises) {
            CellSummary cell;
            cell.m = m;
            cell.n = n;
            cell.noise = noise.describe();
            cell.h_family = h_family_name(h_family);
            cell.repetitions = repetitions;
            std::vector<double> scores;
            const std::uint64_t cell_seed = Rng::derive(seed, cell_index++);
            for (std::size_t rep = 0; rep < repetitions; ++rep) {
                SimConfig config;
                config.m = m;
                config.n = n;
                config.h_family = h_family;
                config.noise_true = noise;
                config.noise_deconv = noise;
                config.seed = Rng::derive(cell_seed, rep);
                try {
                    scores.push_back(detail::fit_cell_once(config, deconv, delta));
                } catch (const std::exception&) {
                    ++cell.failures;
                }
            }
            if (!scores.empty()) {
                cell.median_mse = detail::median_of(scores);
                cell.iqr_mse = detail::iqr_of(scores);
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

struct MisspecReport {
    std::string noise_true;
    std::string noise_deconv;
    std::size_t repetitions = 0;
    double median_mse_correct = 0.0; // deconvolved with the true noise
    double median_mse_wrong = 0.0;   // deconvolved with the configured noise
    double iqr_mse_correct = 0.0;
    double iqr_mse_wrong = 0.0;
    std::size_t failures = 0;
};

/// Same data, two deconvolutions: the true noise versus the configured
/// (possibly wrong) one, repeated over derived seeds.
inline MisspecReport run_misspecified(const SimConfig& base, std::size_t repetitions,
                                      const DeconvConfig& deconv = {}, double delta = 0.05) {
    if (repetitions < 1)
        throw std::invalid_argument("repetitions must be at least 1");
    MisspecReport report;
    report.noise_true = base.noise_true.describe();
    report.noise_deconv = base.noise_deconv.describe();
    report.repetitions = repetitions;
    std::vector<double> correct, wrong;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
        SimConfig config = base;
        config.seed = Rng::derive(base.seed, rep);
        try {
            SimConfig as_true = config;
            as_true.noise_deconv = config.noise_true;
            correct.push_back(detail::fit_cell_once(as_true, deconv, delta));
            wrong.push_back(detail::fit_cell_once(config, deconv, delta));
        } catch (const std::exception&) {
            ++report.failures;
        }
    }
    if (!correct.empty()) {
        report.median_mse_correct = detail::median_of(correct);
        report.iqr_mse_correct = detail::iqr_of(correct);
    }
    if (!wrong.empty()) {
        report.median_mse_wrong = detail::median_of(wrong);
        report.iqr_mse_wrong = detail::iqr_of(wrong);
    }
    return report;
}

} // namespace linkmerge

#endif // LINKMERGE_SIMLAB_HPP
