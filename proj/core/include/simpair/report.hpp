#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "simpair/dataset.hpp"
#include "simpair/detector.hpp"

namespace simpair {

// Everything one scan produced: dataset fingerprint, config echo, and all
// pair evaluations. The findings are the is_paradox subset of all_pairs.
struct ScanReport {
    std::string tool_version;
    std::size_t dataset_rows = 0;
    std::vector<std::string> dataset_columns;
    std::string outcome;
    std::string dataset_hash;
    ScanConfig config;
    std::vector<PairEvaluation> all_pairs;
    double scan_seconds = 0.0;
};

ScanReport make_scan_report(const Dataset& d, const ScanConfig& cfg,
                            std::vector<PairEvaluation> evaluations,
                            std::string dataset_hash, double scan_seconds);

// Indices into all_pairs of the is_paradox evaluations, strongest
// contradiction first: |mean_disagg_sign - aggregate_sign| descending, then
// pair names.
std::vector<std::size_t> finding_indices(const ScanReport& report);

// Canonical report format. Keys appear in a fixed order so identical scans
// serialize identically.
std::string report_to_json(const ScanReport& report);
void write_report_json(const ScanReport& report, const std::string& path);

// Lossy flat projection: one CSV row per pair evaluation.
void write_report_csv(const ScanReport& report, const std::string& path);

struct PlotPoint {
    double x = 0.0;
    double fitted = 0.0;
    double empirical = 0.0;  // meaningful only when has_empirical
    std::size_t n = 0;
    bool has_empirical = false;
};

// One curve of a reconstruction plot: the aggregate fit of a pair or the fit
// within one conditioning bin. Fitted values are sampled on an even 50-point
// grid across the curve's observed x range; empirical outcome means are
// attached per distinct x value (or per x-decile for high-cardinality x).
// Points are ordered by x.
struct PlotSeries {
    std::string pair_id;  // "<x_p>|<x_c>"
    std::string x_p;
    std::string x_c;
    std::string curve_type;  // "aggregate" or "bin"
    std::string bin_label;   // empty for aggregate curves
    std::vector<PlotPoint> points;
};

std::vector<PlotSeries> build_plot_series(const ScanReport& report, const Dataset& d);
void write_plot_csv(const std::vector<PlotSeries>& series, const std::string& path);
void write_plot_data(const ScanReport& report, const Dataset& d, const std::string& path);

// Dataset as CSV: header row, then one line per row. Numbers are written in
// shortest round-trip form, so equal datasets produce byte-identical files.
void write_dataset_csv(const Dataset& d, const std::string& path);

std::uint64_t fnv1a64(const void* data, std::size_t size);
// "fnv1a64:<16 hex digits>" over the raw file bytes.
std::string file_content_hash(const std::string& path);

// Shortest decimal form of v that parses back to exactly v.
std::string format_number(double v);

}  // namespace simpair
