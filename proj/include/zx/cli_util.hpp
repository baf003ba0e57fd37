#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace zx {

/// "a:step:b" -> inclusive arithmetic grid (endpoint kept within step*1e-9);
/// a bare number yields a single-point grid. Throws std::invalid_argument.
std::vector<double> parse_range(const std::string& spec);

/// One output table: header columns plus rows of doubles.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct CsvMeta {
    std::uint64_t seed = 0;
    std::string config;  // canonical key=value string, hashed into the trailer
    std::string rng;
};

/// Writes the table with 17 significant digits, LF endings, and a trailing
/// "# meta:" comment carrying seed, config hash, version, and RNG name.
void emit_csv(const CsvTable& table, const CsvMeta& meta, const std::string& path);

/// Reads back a CSV written by emit_csv (comment lines skipped).
CsvTable parse_csv(const std::string& path);

/// FNV-1a over the canonical config string; stable across runs.
std::uint64_t config_hash(const std::string& canonical);

std::string version_string();

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool markers_only = false;  // scatter (e.g. simulated points) vs polyline
};

struct PlotAxes {
    bool log_y = true;
    std::string x_label = "gamma";
    std::string y_label = "SER";
};

/// Minimal standalone SVG renderer; byte-identical output for equal input.
void plot_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes,
              const std::string& path);

}  // namespace zx
