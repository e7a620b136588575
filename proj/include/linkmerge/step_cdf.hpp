// Right-continuous step/grid distribution functions and their pseudo-inverse,
// plus the Bernstein-type sup-error bound used for confidence brackets.

#ifndef LINKMERGE_STEP_CDF_HPP
#define LINKMERGE_STEP_CDF_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace linkmerge {

enum class CdfKind { empirical, deconvolved };

// A non-decreasing function on a strictly increasing grid, with values in
// [0,1]. F(x) is the value at the largest grid point <= x (0 left of the
// grid), so empirical CDFs are represented exactly by their jump points.
class StepCdf {
public:
    StepCdf(std::vector<double> grid_points, std::vector<double> cdf_values, CdfKind kind)
        : grid_(std::move(grid_points)), values_(std::move(cdf_values)), kind_(kind) {
        validate();
    }

    double operator()(double x) const {
        auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
        if (it == grid_.begin()) return 0.0;
        return values_[static_cast<std::size_t>(it - grid_.begin()) - 1];
    }

    // Generalized quantile inf{x on grid : F(x) >= p}. Levels at or below
    // F(grid front) clamp to the first grid point; levels above the top
    // value clamp to the last (the fit never leaves observed support).
    double quantile(double p) const {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("quantile level out of range");
        auto it = std::lower_bound(values_.begin(), values_.end(), p);
        if (it == values_.end()) return grid_.back();
        return grid_[static_cast<std::size_t>(it - values_.begin())];
    }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    CdfKind kind() const { return kind_; }
    std::size_t size() const { return grid_.size(); }

    double min_x() const { return grid_.front(); }
    double max_x() const { return grid_.back(); }

    /// Largest spacing between adjacent grid points.
    double max_cell() const {
        double w = 0.0;
        for (std::size_t i = 1; i < grid_.size(); ++i)
            w = std::max(w, grid_[i] - grid_[i - 1]);
        return w;
    }

private:
    void validate() const {
        if (grid_.empty() || grid_.size() != values_.size())
            throw std::invalid_argument("StepCdf: grid and values must be non-empty and aligned");
        double prev_x = -std::numeric_limits<double>::infinity();
        double prev_v = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            if (!std::isfinite(grid_[i]) || grid_[i] <= prev_x)
                throw std::invalid_argument("StepCdf: grid must be finite and strictly increasing");
            if (!std::isfinite(values_[i]) || values_[i] < 0.0 || values_[i] > 1.0)
                throw std::invalid_argument("StepCdf: values must lie in [0,1]");
            if (values_[i] < prev_v)
                throw std::invalid_argument("StepCdf: values must be non-decreasing");
            prev_x = grid_[i];
            prev_v = values_[i];
        }
        if (kind_ == CdfKind::empirical && values_.back() != 1.0)
            throw std::invalid_argument("StepCdf: empirical CDF must end at 1");
    }

    std::vector<double> grid_;
    std::vector<double> values_;
    CdfKind kind_;
};

/// Classic ECDF: jump of k/m at each distinct sample value repeated k times.
inline StepCdf empirical_cdf(const std::vector<double>& samples) {
    if (samples.empty())
        throw std::invalid_argument("empty sample");
    std::vector<double> sorted(samples);
    for (double v : sorted)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite sample");
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> grid;
    std::vector<double> values;
    grid.reserve(sorted.size());
    values.reserve(sorted.size());
    const double m = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!grid.empty() && sorted[i] == grid.back()) {
            values.back() = static_cast<double>(i + 1) / m;
        } else {
            grid.push_back(sorted[i]);
            values.push_back(static_cast<double>(i + 1) / m);
        }
    }
    values.back() = 1.0;
    return StepCdf(std::move(grid), std::move(values), CdfKind::empirical);
}

inline double pseudo_inverse(const StepCdf& cdf, double p) {
    return cdf.quantile(p);
}

/// High-probability sup-error of an ECDF of m samples at confidence 1-delta:
/// sqrt(log(2/delta)/m) + 16*log(2/delta)/m.
inline double phi_bound(double delta, std::size_t m) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("phi_bound: delta must lie in (0,1)");
    if (m < 1)
        throw std::invalid_argument("phi_bound: m must be at least 1");
    const double l = std::log(2.0 / delta);
    const double md = static_cast<double>(m);
    return std::sqrt(l / md) + 16.0 * l / md;
}

} // namespace linkmerge

#endif // LINKMERGE_STEP_CDF_HPP
