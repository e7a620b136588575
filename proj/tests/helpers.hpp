// Shared test utilities: analytic CDFs and brute-force sup-distance helpers.

#ifndef LINKMERGE_TESTS_HELPERS_HPP
#define LINKMERGE_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "linkmerge/step_cdf.hpp"

namespace test_helpers {

inline double uniform_cdf(double x, double lo, double hi) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    return (x - lo) / (hi - lo);
}

/// Brute-force sup |ecdf - truth| for sorted samples: the supremum of the
/// deviation of an ECDF from a continuous CDF is attained at a sample point,
/// approaching from either side.
inline double ks_against(const std::vector<double>& samples,
                         const std::function<double(double)>& truth) {
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = truth(sorted[i]);
        sup = std::max(sup, std::abs((static_cast<double>(i) + 1.0) / n - f));
        sup = std::max(sup, std::abs(static_cast<double>(i) / n - f));
    }
    return sup;
}

/// Sup of |cdf(x) - truth(x)| over the cdf's own grid points.
inline double sup_vs_truth(const linkmerge::StepCdf& cdf,
                           const std::function<double(double)>& truth) {
    double sup = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i)
        sup = std::max(sup, std::abs(cdf.values()[i] - truth(cdf.grid()[i])));
    return sup;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace test_helpers

#endif // LINKMERGE_TESTS_HELPERS_HPP
