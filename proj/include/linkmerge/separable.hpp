// Separable-model variant: regress each dataset on its own numeric context,
// subtract the fitted context effect, and run the context-free fit on the
// residual pair. Each dataset is residualized against its own context
// columns (the X side against Z(1), the Y side against Z(2)).

#ifndef LINKMERGE_SEPARABLE_HPP
#define LINKMERGE_SEPARABLE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "linkmerge/linkfit.hpp"
#include "linkmerge/matching.hpp"

namespace linkmerge {

struct LinearModel {
    double intercept = 0.0;
    std::vector<double> coefficients; // one per numeric context coordinate

    double predict(const std::vector<double>& z) const {
        double v = intercept;
        for (std::size_t j = 0; j < coefficients.size(); ++j) v += coefficients[j] * z[j];
        return v;
    }
};

namespace detail {

// Solve the symmetric system A b = rhs by Gaussian elimination with partial
// pivoting; a vanishing pivot means the design is rank deficient.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    const double tiny = std::max(scale, 1.0) * 1e-12;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < tiny)
            throw std::invalid_argument("collinear context");
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double v = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) v -= a[i][c] * x[c];
        x[i] = v / a[i][i];
    }
    return x;
}

} // namespace detail

/// Ordinary least squares with intercept on numeric context columns.
inline LinearModel fit_linear(const std::vector<double>& values,
                              const std::vector<std::vector<double>>& context) {
    const std::size_t rows = values.size();
    if (rows == 0)
        throw std::invalid_argument("fit_linear: no rows");
    const std::size_t d = context.empty() ? 0 : context.front().size();
    if (!context.empty() && context.size() != rows)
        throw std::invalid_argument("fit_linear: values and context row counts differ");
    if (rows < d + 1)
        throw std::invalid_argument("fit_linear: need at least d+1 rows");

    // Normal equations on the centered design keep the system well scaled.
    std::vector<double> z_mean(d, 0.0);
    double v_mean = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        v_mean += values[i];
        for (std::size_t j = 0; j < d; ++j) z_mean[j] += context[i][j];
    }
    v_mean /= static_cast<double>(rows);
    for (auto& m : z_mean) m /= static_cast<double>(rows);

    LinearModel model;
    model.coefficients.assign(d, 0.0);
    if (d > 0) {
        std::vector<std::vector<double>> ata(d, std::vector<double>(d, 0.0));
        std::vector<double> atv(d, 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double zj = context[i][j] - z_mean[j];
                atv[j] += zj * (values[i] - v_mean);
                for (std::size_t k = j; k < d; ++k)
                    ata[j][k] += zj * (context[i][k] - z_mean[k]);
            }
        }
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < j; ++k) ata[j][k] = ata[k][j];
        model.coefficients = detail::solve_dense(std::move(ata), std::move(atv));
    }
    model.intercept = v_mean;
    for (std::size_t j = 0; j < d; ++j) model.intercept -= model.coefficients[j] * z_mean[j];
    return model;
}

struct ResidualPair {
    std::vector<double> x_resid;
    std::vector<double> y_resid;
};

struct SepFitResult {
    LinkEstimate estimate;
    LinearModel model_x;
    LinearModel model_y;
    ResidualPair residuals;
};

namespace detail {

inline std::vector<std::vector<double>> numeric_context(const Dataset& d) {
    if (!d.schema.all_numeric())
        throw std::invalid_argument("separable fit requires numeric context");
    std::vector<std::vector<double>> out;
    out.reserve(d.rows());
    for (const auto& row : d.context) {
        std::vector<double> r;
        r.reserve(row.size());
        for (const auto& cell : row) r.push_back(std::get<double>(cell));
        out.push_back(std::move(r));
    }
    if (d.schema.dim() > 0 && out.size() != d.rows())
        throw std::invalid_argument("separable fit requires context on every row");
    return out;
}

} // namespace detail

/// Algorithm 2: residualize both sides on their contexts, then fit the
/// residual pair as a single context-free group.
inline SepFitResult match_merge_sep(const Dataset& dx, const Dataset& dy,
                                    const NoiseSpec& noise, const DeconvConfig& config,
                                    double delta, const MatchMergeOptions& opts = {}) {
    dx.validate();
    dy.validate();
    if (dx.schema.dim() != dy.schema.dim())
        throw std::invalid_argument("mismatched context schemas");

    const auto zx = detail::numeric_context(dx);
    const auto zy = detail::numeric_context(dy);

    SepFitResult out;
    out.model_x = fit_linear(dx.values, zx);
    out.model_y = fit_linear(dy.values, zy);

    out.residuals.x_resid.reserve(dx.rows());
    out.residuals.y_resid.reserve(dy.rows());
    for (std::size_t i = 0; i < dx.rows(); ++i)
        out.residuals.x_resid.push_back(
            dx.values[i] - (zx.empty() ? out.model_x.intercept : out.model_x.predict(zx[i])));
    for (std::size_t i = 0; i < dy.rows(); ++i)
        out.residuals.y_resid.push_back(
            dy.values[i] - (zy.empty() ? out.model_y.intercept : out.model_y.predict(zy[i])));

    GroupMap residual_group;
    residual_group.groups[""] = Group{out.residuals.x_resid, out.residuals.y_resid};
    auto fit = match_merge(residual_group, noise, config, delta, opts);
    if (!fit.failures.empty())
        throw std::runtime_error("separable fit failed: " + fit.failures.front().message);
    if (fit.estimates.empty())
        throw std::runtime_error("separable fit: too few rows");
    out.estimate = std::move(fit.estimates.front());
    return out;
}

} // namespace linkmerge

#endif // LINKMERGE_SEPARABLE_HPP
