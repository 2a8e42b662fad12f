#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "depfn/core.hpp"
#include "depfn/estimator.hpp"
#include "depfn/study.hpp"

namespace depfn {

// 17 significant digits: round-trips doubles losslessly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::string_view unquote(std::string_view s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

// comma split honoring double quotes
inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i < line.size() && line[i] == '"') quoted = !quoted;
        if (i == line.size() || (line[i] == ',' && !quoted)) {
            out.push_back(unquote(trim(line.substr(start, i - start))));
            start = i + 1;
        }
    }
    return out;
}

inline bool parse_field(std::string_view s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace detail

struct CsvLoadResult {
    Dataset data;
    std::vector<std::size_t> skipped_rows;  // 1-based data row numbers
    std::vector<std::string> warnings;
};

// Loads a comma-separated file with a mandatory header row; '.' decimal
// separator, optional double quotes, CRLF and UTF-8 BOM tolerated. Rows whose
// selected fields are missing or non-numeric are skipped with their row
// numbers reported.
inline CsvLoadResult load_csv(const std::string& path, const std::string& y_column,
                              const std::vector<std::string>& x_columns) {
    if (x_columns.empty()) throw io_error("load_csv: no x columns selected");
    std::ifstream in(path);
    if (!in) throw io_error("load_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw io_error("load_csv: '" + path + "' is empty");
    if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF')
        line.erase(0, 3);

    const auto header = detail::split_fields(line);
    auto find_column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        std::string available;
        for (const auto& h : header) available += (available.empty() ? "" : ", ") + std::string(h);
        throw io_error("load_csv: column '" + name + "' not found; available: " + available);
    };

    std::vector<std::size_t> cols;
    cols.push_back(find_column(y_column));
    for (const auto& name : x_columns) cols.push_back(find_column(name));

    CsvLoadResult result;
    result.data.d = x_columns.size();
    std::size_t row = 0;
    std::vector<double> parsed(cols.size());
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        bool ok = true;
        std::string why;
        for (std::size_t c = 0; c < cols.size() && ok; ++c) {
            if (cols[c] >= fields.size()) {
                ok = false;
                why = "missing field";
            } else if (!detail::parse_field(fields[cols[c]], parsed[c])) {
                ok = false;
                why = "non-numeric field '" + std::string(fields[cols[c]]) + "'";
            }
        }
        if (!ok) {
            result.skipped_rows.push_back(row);
            result.warnings.push_back("row " + std::to_string(row) + " skipped: " + why);
            continue;
        }
        result.data.y.push_back(parsed[0]);
        for (std::size_t c = 1; c < cols.size(); ++c) result.data.x.push_back(parsed[c]);
    }

    if (result.data.y.empty()) throw io_error("load_csv: no valid data rows in '" + path + "'");
    if (result.data.y.size() < 2) throw io_error("load_csv: only one valid data row in '" + path + "'");
    result.data.validate();
    return result;
}

inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "y";
    for (std::size_t k = 1; k <= data.d; ++k) out << ",x" << k;
    out << "\n";
    for (std::size_t i = 0; i < data.n(); ++i) {
        out << format_double(data.y[i]);
        for (std::size_t k = 0; k < data.d; ++k) out << ',' << format_double(data.x[i * data.d + k]);
        out << "\n";
    }
}

inline void write_curve_csv(std::ostream& out, const DependenceCurve& curve) {
    out << "t," << curve_kind_name(curve.kind) << "\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << format_double(curve.grid[i]) << ',' << format_double(curve.values[i]) << "\n";
}

inline void write_curves_csv(std::ostream& out, const DependenceCurve& phi,
                             const DependenceCurve& kappa) {
    out << "t,phi,kappa\n";
    for (std::size_t i = 0; i < phi.grid.size(); ++i)
        out << format_double(phi.grid[i]) << ',' << format_double(phi.values[i]) << ','
            << format_double(kappa.values[i]) << "\n";
}

// long format: kind,n,rep,deviation
inline void write_study_csv(std::ostream& out, const StudyResult& result) {
    out << "kind,n,rep,deviation\n";
    for (const auto& cell : result.cells)
        for (std::size_t r = 0; r < cell.deviations.size(); ++r)
            out << curve_kind_name(cell.kind) << ',' << cell.n << ',' << r << ','
                << format_double(cell.deviations[r]) << "\n";
}

}  // namespace depfn
