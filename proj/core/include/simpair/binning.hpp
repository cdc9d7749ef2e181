#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "simpair/dataset.hpp"

namespace simpair {

enum class BinStrategy {
    distinct_values,
    equal_width,
    equal_frequency,
    log_width,
};
const char* to_string(BinStrategy strategy);
BinStrategy bin_strategy_from_string(const std::string& name);

struct BinSpec {
    BinStrategy strategy = BinStrategy::equal_frequency;
    int bin_count = 10;             // ignored for distinct_values
    std::size_t min_bin_rows = 100; // smaller subgroups are flagged invalid
};

// One disaggregation subgroup. For interval strategies [lo, hi) is half-open
// except for the final bin, which includes its right edge; for distinct
// values lo == hi. Subgroups of one disaggregation are pairwise disjoint and
// together cover every row.
struct Subgroup {
    std::string label;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> row_indices;
    std::size_t n = 0;
    bool valid = false;  // n >= spec.min_bin_rows
};

// Partition rows into subgroups by the value (or bin) of one variable.
// Subgroups are returned in ascending value order, including undersized and
// empty ones, so callers can count what was skipped.
std::vector<Subgroup> disaggregate(const Dataset& d, const std::string& var,
                                   const BinSpec& spec);

// Default strategy for a column: distinct values when the cardinality is
// small, logarithmic bins for positive heavy-tailed columns, quantile bins
// otherwise.
BinSpec auto_bin_spec(const Dataset& d, const std::string& var);

}  // namespace simpair
