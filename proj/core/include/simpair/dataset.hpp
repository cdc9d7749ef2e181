#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "simpair/error.hpp"

namespace simpair {

enum class VariableKind {
    binary_outcome,
    continuous_outcome,
    continuous,
    integer,
    categorical,
};

bool is_outcome_kind(VariableKind kind);
const char* to_string(VariableKind kind);

struct VariableSpec {
    std::string name;
    VariableKind kind = VariableKind::continuous;
};

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;  // sample variance, n-1 denominator
    double min = 0.0;
    double max = 0.0;
    std::size_t distinct_count = 0;
};

// Immutable columnar table of numeric variables plus one outcome column.
// All columns have the same length (>= 1) and contain only finite values;
// rows violating that are filtered out before construction. Instances are
// safe to share across threads once built.
class Dataset {
public:
    Dataset(std::vector<std::string> names,
            std::vector<std::vector<double>> columns,
            std::string outcome_name,
            std::map<std::string, std::string> metadata = {});

    std::size_t n_rows() const { return n_rows_; }
    const std::vector<std::string>& column_names() const { return names_; }
    const std::string& outcome_name() const { return outcome_; }
    bool has_column(const std::string& name) const;
    std::span<const double> column(const std::string& name) const;
    std::span<const double> outcome() const { return column(outcome_); }
    // All column names except the outcome, in table order.
    std::vector<std::string> variable_names() const;
    const std::map<std::string, std::string>& metadata() const { return metadata_; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::string outcome_;
    std::map<std::string, std::string> metadata_;
    std::map<std::string, std::size_t> index_;
    std::size_t n_rows_ = 0;
};

struct LoadResult {
    Dataset data;
    std::size_t dropped_rows = 0;
};

// Reads a UTF-8, comma-separated file with a header row. Columns named in the
// schema are parsed as numbers; all other columns are ignored. Rows with a
// non-finite or unparsable value in any declared column are dropped (counted
// in dropped_rows) without reordering the survivors.
LoadResult load_csv(const std::string& path, const std::vector<VariableSpec>& schema);

// First line of a CSV file, split on commas.
std::vector<std::string> read_csv_header(const std::string& path);

// New dataset with an added column numerator/denominator. Rows whose
// denominator is zero (or whose ratio is not finite) are dropped and counted.
LoadResult derive_ratio(const Dataset& d, const std::string& numerator,
                        const std::string& denominator, const std::string& new_name);

SummaryStats column_stats(const Dataset& d, const std::string& name);

}  // namespace simpair
