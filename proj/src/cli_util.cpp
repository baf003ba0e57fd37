#include "zx/cli_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zx {

namespace {

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("malformed number: " + s);
    return v;
}

std::string format17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(spec);
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() == 1) return {parse_double(parts[0])};
    if (parts.size() != 3) throw std::invalid_argument("range must be a:step:b");
    const double a = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double b = parse_double(parts[2]);
    if (step <= 0.0) throw std::invalid_argument("range step must be positive");
    if (a > b) throw std::invalid_argument("range start exceeds end");
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double x = a + k * step;
        if (x > b + step * 1e-9) break;
        grid.push_back(std::min(x, b));
    }
    return grid;
}

std::uint64_t config_hash(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string version_string() { return "0.1.0"; }

void emit_csv(const CsvTable& table, const CsvMeta& meta, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format17(row[i]);
        out << "\n";
    }
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(meta.config)));
    out << "# meta: seed=" << meta.seed << " config=" << hash
        << " version=" << version_string() << " rng=" << meta.rng << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (!header_done) {
            table.header = cells;
            header_done = true;
            continue;
        }
        std::vector<double> values;
        for (const auto& c : cells) values.push_back(parse_double(c));
        table.rows.push_back(std::move(values));
    }
    return table;
}

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

void plot_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes,
              const std::string& path) {
    if (series.empty()) throw std::invalid_argument("no series to plot");
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (axes.log_y && y <= 0.0)
                throw std::invalid_argument("log-scale plot requires positive values");
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    if (axes.log_y) {
        y_min = std::pow(10.0, std::floor(std::log10(y_min)));
        y_max = std::pow(10.0, std::ceil(std::log10(y_max)));
        if (y_max <= y_min) y_max = 10.0 * y_min;
    } else if (y_max <= y_min) {
        y_max = y_min + 1.0;
    }

    auto px = [&](double x) {
        return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
    };
    auto py = [&](double y) {
        const double t = axes.log_y
                             ? (std::log10(y) - std::log10(y_min)) /
                                   (std::log10(y_max) - std::log10(y_min))
                             : (y - y_min) / (y_max - y_min);
        return kHeight - kBottom - t * (kHeight - kTop - kBottom);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // frame
    svg << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\""
        << coord(kWidth - kLeft - kRight) << "\" height=\""
        << coord(kHeight - kTop - kBottom)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // horizontal gridlines: decades when log, 5 even steps otherwise
    if (axes.log_y) {
        for (double e = std::log10(y_min); e <= std::log10(y_max) + 1e-9; e += 1.0) {
            const double y = std::pow(10.0, e);
            svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(py(y))
                << "\" x2=\"" << coord(kWidth - kRight) << "\" y2=\"" << coord(py(y))
                << "\" stroke=\"#cccccc\"/>\n"
                << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(py(y) + 4)
                << "\" text-anchor=\"end\" font-size=\"12\">1e" << static_cast<int>(std::lround(e))
                << "</text>\n";
        }
    } else {
        for (int k = 0; k <= 5; ++k) {
            const double y = y_min + (y_max - y_min) * k / 5.0;
            svg << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(py(y))
                << "\" x2=\"" << coord(kWidth - kRight) << "\" y2=\"" << coord(py(y))
                << "\" stroke=\"#cccccc\"/>\n"
                << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(py(y) + 4)
                << "\" text-anchor=\"end\" font-size=\"12\">" << coord(y) << "</text>\n";
        }
    }
    for (int k = 0; k <= 6; ++k) {
        const double x = x_min + (x_max - x_min) * k / 6.0;
        svg << "<text x=\"" << coord(px(x)) << "\" y=\"" << coord(kHeight - kBottom + 18)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << coord(x) << "</text>\n";
    }
    svg << "<text x=\"" << coord((kLeft + kWidth - kRight) / 2) << "\" y=\""
        << coord(kHeight - 12) << "\" text-anchor=\"middle\" font-size=\"14\">"
        << axes.x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << coord((kTop + kHeight - kBottom) / 2)
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
        << coord((kTop + kHeight - kBottom) / 2) << ")\">" << axes.y_label
        << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % 5];
        if (!s.markers_only && s.points.size() > 1) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points)
                svg << coord(px(x)) << "," << coord(py(y)) << " ";
            svg << "\"/>\n";
        }
        if (s.markers_only || s.points.size() == 1)
            for (const auto& [x, y] : s.points)
                svg << "<rect x=\"" << coord(px(x) - 3) << "\" y=\"" << coord(py(y) - 3)
                    << "\" width=\"6\" height=\"6\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << coord(kWidth - kRight - 8) << "\" y=\""
            << coord(kTop + 18 + 16 * static_cast<double>(si))
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">"
            << s.label << "</text>\n";
    }
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << svg.str();
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace zx
