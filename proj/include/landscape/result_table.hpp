#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "landscape/types.hpp"

namespace landscape {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Rectangular numeric table with a provenance header.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string scenario_hash;
    std::string version;
    std::string timestamp; // empty under --reproducible

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("ResultTable: row width mismatch");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("ResultTable: non-finite entry");
        rows.push_back(std::move(row));
    }

    double at(std::size_t row, const std::string& column) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == column) return rows.at(row).at(c);
        throw std::out_of_range("ResultTable: unknown column " + column);
    }
};

/// UTF-8 CSV: provenance comment, header row, %.17g values, LF endings.
inline void emit_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
    out << "# scenario=" << table.scenario_hash << " version=" << table.version;
    if (!table.timestamp.empty()) out << " time=" << table.timestamp;
    out << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ",";
        out << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << format_g17(row[c]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

inline ResultTable parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
    ResultTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            table.columns = cells;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(std::stod(c));
        table.add_row(std::move(row));
    }
    return table;
}

struct PlotSpec {
    std::string x_column;
    std::vector<std::string> series;
    std::string title;
};

/// Minimal SVG line plot: one polyline per series, linear axes, 800x600
/// view box.
inline void emit_svg(const ResultTable& table, const std::string& path, const PlotSpec& spec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_svg: cannot open " + path);

    auto column_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            if (table.columns[c] == name) return c;
        throw std::invalid_argument("emit_svg: unknown column " + name);
    };
    const std::size_t xi = column_index(spec.x_column);
    std::vector<std::size_t> si;
    for (const auto& s : spec.series) si.push_back(column_index(s));

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& row : table.rows) {
        const double x = row[xi];
        for (std::size_t s : si) {
            const double y = row[s];
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    const double W = 800.0, H = 600.0, ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    static const char* palette[] = {"#d62728", "#ff7f0e", "#2ca02c", "#1f77b4",
                                    "#7f7f7f", "#9467bd", "#8c564b", "#e377c2"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\">\n";
    if (!spec.title.empty())
        out << "  <text x=\"" << ml << "\" y=\"24\" font-size=\"16\">" << spec.title
            << "</text>\n";
    out << "  <rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (W - ml - mr)
        << "\" height=\"" << (H - mt - mb) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    out << "  <text x=\"" << ml << "\" y=\"" << (H - 12.0) << "\" font-size=\"12\">"
        << format_g17(xmin) << "</text>\n";
    out << "  <text x=\"" << (W - mr - 60.0) << "\" y=\"" << (H - 12.0) << "\" font-size=\"12\">"
        << format_g17(xmax) << "</text>\n";
    out << "  <text x=\"4\" y=\"" << (H - mb) << "\" font-size=\"12\">" << format_g17(ymin)
        << "</text>\n";
    out << "  <text x=\"4\" y=\"" << (mt + 12.0) << "\" font-size=\"12\">" << format_g17(ymax)
        << "</text>\n";
    for (std::size_t s = 0; s < si.size(); ++s) {
        out << "  <polyline fill=\"none\" stroke=\"" << palette[s % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& row : table.rows) {
            out << px(row[xi]) << "," << py(row[si[s]]) << " ";
        }
        out << "\"/>\n";
        out << "  <text x=\"" << (W - mr - 150.0) << "\" y=\"" << (mt + 18.0 + 16.0 * s)
            << "\" font-size=\"12\" fill=\"" << palette[s % 8] << "\">" << spec.series[s]
            << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("emit_svg: write failed for " + path);
}

inline std::string fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace landscape
