// Grouping of two independently collected datasets by contextual variables:
// exact matching on the shared context values, and nearest-neighbourhood
// matching that pools rows whose numeric context is within a radius of a
// center (categorical coordinates must match exactly).

#ifndef LINKMERGE_MATCHING_HPP
#define LINKMERGE_MATCHING_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace linkmerge {

enum class ContextKind { categorical, numeric };

using ContextCell = std::variant<std::string, double>; // categorical | numeric
using ContextRow = std::vector<ContextCell>;

struct ContextSchema {
    std::vector<std::string> names;
    std::vector<ContextKind> kinds;

    std::size_t dim() const { return kinds.size(); }
    bool compatible_with(const ContextSchema& other) const { return kinds == other.kinds; }
    bool all_numeric() const {
        for (auto k : kinds)
            if (k != ContextKind::numeric) return false;
        return true;
    }
};

struct Dataset {
    std::vector<double> values;
    std::vector<ContextRow> context; // empty rows when the schema has d = 0
    ContextSchema schema;

    std::size_t rows() const { return values.size(); }

    void validate() const {
        if (!context.empty() && context.size() != values.size())
            throw std::invalid_argument("Dataset: values and context row counts differ");
        for (const auto& row : context)
            if (row.size() != schema.dim())
                throw std::invalid_argument("Dataset: context dimension mismatch");
    }
};

inline std::string context_key(const ContextRow& row) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) os << '|';
        if (std::holds_alternative<std::string>(row[i]))
            os << std::get<std::string>(row[i]);
        else
            os << std::get<double>(row[i]);
    }
    return os.str();
}

struct Group {
    std::vector<double> x_subset;
    std::vector<double> y_subset;

    std::size_t n_z() const { return std::min(x_subset.size(), y_subset.size()); }
};

struct GroupMap {
    std::map<std::string, Group> groups; // key order fixes downstream iteration
    double upsilon = 0.0;                // 0 for exact matching
    std::size_t dropped_x = 0;           // rows whose context matched nothing
    std::size_t dropped_y = 0;
};

/// One group per context value present in both datasets; rows with context
/// seen on only one side are dropped and counted. d = 0 pools everything.
inline GroupMap group_exact(const Dataset& dx, const Dataset& dy) {
    dx.validate();
    dy.validate();
    if (!dx.schema.compatible_with(dy.schema))
        throw std::invalid_argument("mismatched context schemas");

    GroupMap out;
    if (dx.schema.dim() == 0) {
        out.groups[""] = Group{dx.values, dy.values};
        return out;
    }

    std::map<std::string, std::vector<double>> by_key_x, by_key_y;
    for (std::size_t i = 0; i < dx.rows(); ++i)
        by_key_x[context_key(dx.context[i])].push_back(dx.values[i]);
    for (std::size_t i = 0; i < dy.rows(); ++i)
        by_key_y[context_key(dy.context[i])].push_back(dy.values[i]);

    for (auto& [key, xs] : by_key_x) {
        auto it = by_key_y.find(key);
        if (it == by_key_y.end()) {
            out.dropped_x += xs.size();
            continue;
        }
        out.groups[key] = Group{std::move(xs), std::move(it->second)};
    }
    for (auto& [key, ys] : by_key_y)
        if (!out.groups.count(key)) out.dropped_y += ys.size();
    return out;
}

namespace detail {

inline bool near_center(const ContextRow& row, const ContextRow& center, double upsilon) {
    double dist2 = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (std::holds_alternative<std::string>(center[i])) {
            if (std::get<std::string>(row[i]) != std::get<std::string>(center[i]))
                return false;
        } else {
            const double d = std::get<double>(row[i]) - std::get<double>(center[i]);
            dist2 += d * d;
        }
    }
    return dist2 <= upsilon * upsilon;
}

} // namespace detail

/// Pools rows upsilon-close to each center. Groups may overlap; centers
/// whose neighbourhood is empty on either side are dropped and counted.
inline GroupMap group_near(const Dataset& dx, const Dataset& dy,
                           const std::vector<ContextRow>& centers, double upsilon) {
    dx.validate();
    dy.validate();
    if (!dx.schema.compatible_with(dy.schema))
        throw std::invalid_argument("mismatched context schemas");
    if (!(upsilon > 0.0))
        throw std::invalid_argument("upsilon must be positive");

    GroupMap out;
    out.upsilon = upsilon;
    for (const auto& center : centers) {
        if (center.size() != dx.schema.dim())
            throw std::invalid_argument("center dimension mismatch");
        Group g;
        for (std::size_t i = 0; i < dx.rows(); ++i)
            if (detail::near_center(dx.context[i], center, upsilon))
                g.x_subset.push_back(dx.values[i]);
        for (std::size_t i = 0; i < dy.rows(); ++i)
            if (detail::near_center(dy.context[i], center, upsilon))
                g.y_subset.push_back(dy.values[i]);
        if (g.x_subset.empty() || g.y_subset.empty()) {
            out.dropped_x += g.x_subset.size();
            out.dropped_y += g.y_subset.size();
            continue;
        }
        out.groups[context_key(center)] = std::move(g);
    }
    return out;
}

} // namespace linkmerge

#endif // LINKMERGE_MATCHING_HPP
