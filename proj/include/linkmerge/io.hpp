// Dataset CSV schema and file helpers.
//
// Dataset files carry a mandatory header whose first column is `value`;
// remaining columns are context coordinates prefixed `cat_` (categorical,
// kept verbatim) or `num_` (numeric, parsed). Lines starting with '#' are
// ignored, which lets every emitted file embed its resolved configuration.
// All writes go through a temp-file-then-rename so outputs appear atomically.

#ifndef LINKMERGE_IO_HPP
#define LINKMERGE_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "linkmerge/matching.hpp"

namespace linkmerge {

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("cannot parse " + what + ": '" + s + "'");
    }
}

} // namespace detail

inline Dataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());

    Dataset out;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto cells = detail::split_csv_line(line);
        if (!have_header) {
            if (cells.empty() || cells.front() != "value")
                throw std::runtime_error(path.string() + ": first column must be 'value'");
            for (std::size_t c = 1; c < cells.size(); ++c) {
                const auto& name = cells[c];
                if (name.rfind("cat_", 0) == 0)
                    out.schema.kinds.push_back(ContextKind::categorical);
                else if (name.rfind("num_", 0) == 0)
                    out.schema.kinds.push_back(ContextKind::numeric);
                else
                    throw std::runtime_error(path.string() + ": context column '" + name
                                             + "' must be prefixed cat_ or num_");
                out.schema.names.push_back(name);
            }
            have_header = true;
            continue;
        }
        if (cells.size() != out.schema.dim() + 1)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no)
                                     + ": expected " + std::to_string(out.schema.dim() + 1)
                                     + " columns");
        const double v = detail::parse_double(cells.front(), "value");
        if (!std::isfinite(v))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no)
                                     + ": non-finite value");
        out.values.push_back(v);
        ContextRow row;
        row.reserve(out.schema.dim());
        for (std::size_t c = 0; c < out.schema.dim(); ++c) {
            const auto& cell = cells[c + 1];
            if (out.schema.kinds[c] == ContextKind::categorical)
                row.emplace_back(cell);
            else
                row.emplace_back(detail::parse_double(cell, out.schema.names[c]));
        }
        out.context.push_back(std::move(row));
    }
    if (!have_header)
        throw std::runtime_error(path.string() + ": missing header row");
    out.validate();
    return out;
}

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename over the target).
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string dataset_to_csv(const Dataset& data, const std::string& config_comment) {
    std::string out;
    if (!config_comment.empty()) out += "# " + config_comment + "\n";
    out += "value";
    for (const auto& name : data.schema.names) out += "," + name;
    out += "\n";
    for (std::size_t i = 0; i < data.rows(); ++i) {
        out += format_double(data.values[i]);
        for (std::size_t c = 0; c < data.schema.dim(); ++c) {
            out += ",";
            const auto& cell = data.context[i][c];
            if (std::holds_alternative<std::string>(cell))
                out += std::get<std::string>(cell);
            else
                out += format_double(std::get<double>(cell));
        }
        out += "\n";
    }
    return out;
}

/// Two-column (x, y) CSV used for holdout points and truth tables.
inline std::vector<std::pair<double, double>>
read_pairs_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::vector<std::pair<double, double>> out;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            have_header = true; // header names are not interpreted
            continue;
        }
        const auto cells = detail::split_csv_line(line);
        if (cells.size() < 2)
            throw std::runtime_error(path.string() + ": expected two columns");
        out.emplace_back(detail::parse_double(cells[0], "x"),
                         detail::parse_double(cells[1], "y"));
    }
    return out;
}

} // namespace linkmerge

#endif // LINKMERGE_IO_HPP
