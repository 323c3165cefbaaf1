#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "animfa/core.hpp"
#include "animfa/simulate.hpp"

namespace animfa {

namespace detail {

inline void append_number(std::string& line, double v)
{
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.12g", v);
    line.append(buf, static_cast<std::size_t>(len));
}

inline std::vector<std::pair<std::size_t, std::size_t>> z_columns(const Trace& trace)
{
    std::vector<std::pair<std::size_t, std::size_t>> cols;
    if (!trace.has_z())
        return cols;
    const std::size_t n = trace.support.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (trace.support(i, j))
                cols.emplace_back(i, j);
    return cols;
}

} // namespace detail

/// Writes `t, y_1..y_n, ybar[, z_i_j...]` with ", " separators and 12
/// significant digits. z columns cover the supported pairs in row-major order.
inline void write_trace_csv(const Trace& trace, std::ostream& os)
{
    const std::size_t n = trace.communities();
    const auto zcols = detail::z_columns(trace);
    std::string line = "t";
    for (std::size_t i = 0; i < n; ++i)
        line += ", y_" + std::to_string(i + 1);
    line += ", ybar";
    for (const auto& [i, j] : zcols)
        line += ", z_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    os << line << '\n';

    for (std::size_t k = 0; k < trace.samples(); ++k) {
        line.clear();
        detail::append_number(line, trace.times[k]);
        for (double v : trace.y_series[k]) {
            line += ", ";
            detail::append_number(line, v);
        }
        line += ", ";
        detail::append_number(line, trace.ybar_series[k]);
        for (const auto& [i, j] : zcols) {
            line += ", ";
            detail::append_number(line, trace.z_series[k](i, j));
        }
        os << line << '\n';
    }
}

inline void export_trace_csv(const Trace& trace, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("export_trace_csv: cannot open " + path + " for writing");
    write_trace_csv(trace, os);
    os.flush();
    if (!os)
        throw Error("export_trace_csv: write failed for " + path);
}

/// Parses a file produced by export_trace_csv.
inline Trace read_trace_csv(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header))
        throw Error("read_trace_csv: missing header");

    std::vector<std::string> names;
    {
        std::istringstream hs(header);
        std::string tok;
        while (std::getline(hs, tok, ','))
            names.push_back(tok.substr(tok.find_first_not_of(' ')));
    }
    std::size_t n = 0;
    while (n + 1 < names.size() && names[n + 1].rfind("y_", 0) == 0)
        ++n;
    if (names.empty() || names[0] != "t" || n + 1 >= names.size() || names[n + 1] != "ybar")
        throw Error("read_trace_csv: unexpected header '" + header + "'");

    Trace trace;
    trace.support = Mask(n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> zcols;
    for (std::size_t c = n + 2; c < names.size(); ++c) {
        std::size_t i = 0, j = 0;
        if (std::sscanf(names[c].c_str(), "z_%zu_%zu", &i, &j) != 2 || i == 0 || j == 0 || i > n || j > n)
            throw Error("read_trace_csv: bad column '" + names[c] + "'");
        trace.support(i - 1, j - 1) = 1;
        zcols.emplace_back(i - 1, j - 1);
    }

    std::string line;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ','))
            row.push_back(std::stod(tok));
        if (row.size() != names.size())
            throw Error("read_trace_csv: row has " + std::to_string(row.size()) + " fields, expected " +
                        std::to_string(names.size()));
        trace.times.push_back(row[0]);
        trace.y_series.emplace_back(row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(n));
        trace.ybar_series.push_back(row[n + 1]);
        if (!zcols.empty()) {
            Matrix z(n, 0.0);
            for (std::size_t c = 0; c < zcols.size(); ++c)
                z(zcols[c].first, zcols[c].second) = row[n + 2 + c];
            trace.z_series.push_back(std::move(z));
        }
    }
    return trace;
}

inline Trace read_trace_csv(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error("read_trace_csv: cannot open " + path);
    return read_trace_csv(is);
}

} // namespace animfa
