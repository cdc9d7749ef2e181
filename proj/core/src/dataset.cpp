#include "simpair/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

namespace simpair {

bool is_outcome_kind(VariableKind kind) {
    return kind == VariableKind::binary_outcome || kind == VariableKind::continuous_outcome;
}

const char* to_string(VariableKind kind) {
    switch (kind) {
        case VariableKind::binary_outcome: return "binary_outcome";
        case VariableKind::continuous_outcome: return "continuous_outcome";
        case VariableKind::continuous: return "continuous";
        case VariableKind::integer: return "integer";
        case VariableKind::categorical: return "categorical";
    }
    return "?";
}

Dataset::Dataset(std::vector<std::string> names,
                 std::vector<std::vector<double>> columns,
                 std::string outcome_name,
                 std::map<std::string, std::string> metadata)
    : names_(std::move(names)),
      columns_(std::move(columns)),
      outcome_(std::move(outcome_name)),
      metadata_(std::move(metadata)) {
    if (names_.size() != columns_.size())
        throw Error("dataset: column name/vector count mismatch");
    if (names_.empty()) throw Error("dataset: no columns");
    n_rows_ = columns_.front().size();
    if (n_rows_ == 0) throw Error("dataset: zero rows");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (columns_[i].size() != n_rows_)
            throw Error("dataset: column '" + names_[i] + "' has mismatched length");
        for (double v : columns_[i]) {
            if (!std::isfinite(v))
                throw Error("dataset: column '" + names_[i] + "' contains a non-finite value");
        }
        if (!index_.emplace(names_[i], i).second)
            throw Error("dataset: duplicate column '" + names_[i] + "'");
    }
    if (index_.find(outcome_) == index_.end())
        throw Error("dataset: outcome column '" + outcome_ + "' not present");
}

bool Dataset::has_column(const std::string& name) const {
    return index_.find(name) != index_.end();
}

std::span<const double> Dataset::column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown column '" + name + "'");
    return columns_[it->second];
}

std::vector<std::string> Dataset::variable_names() const {
    std::vector<std::string> out;
    out.reserve(names_.size() - 1);
    for (const auto& n : names_)
        if (n != outcome_) out.push_back(n);
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

std::vector<std::string> read_csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("file '" + path + "' is empty");
    return split_csv_line(line);
}

LoadResult load_csv(const std::string& path, const std::vector<VariableSpec>& schema) {
    if (schema.empty()) throw Error("load_csv: empty schema");
    std::size_t outcome_count = 0;
    for (const auto& spec : schema)
        if (is_outcome_kind(spec.kind)) ++outcome_count;
    if (outcome_count != 1)
        throw Error("load_csv: schema must declare exactly one outcome column");

    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("file '" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);

    // schema name -> position in the file
    std::vector<std::size_t> file_pos(schema.size());
    std::size_t max_pos = 0;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        auto it = std::find(header.begin(), header.end(), schema[i].name);
        if (it == header.end())
            throw Error("missing column '" + schema[i].name + "' in '" + path + "'");
        file_pos[i] = static_cast<std::size_t>(it - header.begin());
        max_pos = std::max(max_pos, file_pos[i]);
    }

    std::vector<std::vector<double>> columns(schema.size());
    std::size_t dropped = 0;
    std::vector<double> row(schema.size());
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        bool ok = fields.size() > max_pos;
        if (ok) {
            for (std::size_t i = 0; i < schema.size(); ++i) {
                double v;
                if (!parse_double(fields[file_pos[i]], v) || !std::isfinite(v)) {
                    ok = false;
                    break;
                }
                row[i] = v;
            }
        }
        if (!ok) {
            ++dropped;
            continue;
        }
        for (std::size_t i = 0; i < schema.size(); ++i) columns[i].push_back(row[i]);
    }

    std::string outcome_name;
    std::vector<std::string> names(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
        names[i] = schema[i].name;
        if (is_outcome_kind(schema[i].kind)) {
            outcome_name = schema[i].name;
            if (schema[i].kind == VariableKind::binary_outcome) {
                for (double v : columns[i]) {
                    if (v != 0.0 && v != 1.0)
                        throw Error("binary outcome '" + schema[i].name +
                                    "' contains a value outside {0,1}");
                }
            }
        }
    }
    if (columns.front().empty())
        throw Error("no rows left in '" + path + "' after filtering");

    return LoadResult{Dataset(std::move(names), std::move(columns), std::move(outcome_name)),
                      dropped};
}

LoadResult derive_ratio(const Dataset& d, const std::string& numerator,
                        const std::string& denominator, const std::string& new_name) {
    auto num = d.column(numerator);
    auto den = d.column(denominator);
    if (numerator == d.outcome_name() || denominator == d.outcome_name())
        throw Error("derive_ratio: outcome column cannot be used");
    if (d.has_column(new_name))
        throw Error("derive_ratio: column '" + new_name + "' already exists");

    std::vector<std::size_t> keep;
    std::vector<double> ratio;
    keep.reserve(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        if (den[i] == 0.0) continue;
        const double r = num[i] / den[i];
        if (!std::isfinite(r)) continue;
        keep.push_back(i);
        ratio.push_back(r);
    }
    if (keep.empty())
        throw Error("derive_ratio: every row has denominator zero in '" + denominator + "'");
    const std::size_t dropped = d.n_rows() - keep.size();

    std::vector<std::string> names = d.column_names();
    std::vector<std::vector<double>> columns;
    columns.reserve(names.size() + 1);
    for (const auto& name : names) {
        auto src = d.column(name);
        std::vector<double> col;
        col.reserve(keep.size());
        for (std::size_t i : keep) col.push_back(src[i]);
        columns.push_back(std::move(col));
    }
    names.push_back(new_name);
    columns.push_back(std::move(ratio));

    return LoadResult{Dataset(std::move(names), std::move(columns), d.outcome_name(),
                              d.metadata()),
                      dropped};
}

SummaryStats column_stats(const Dataset& d, const std::string& name) {
    auto col = d.column(name);
    SummaryStats s;
    const std::size_t n = col.size();
    double sum = 0.0;
    s.min = col.front();
    s.max = col.front();
    for (double v : col) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : col) {
            const double dlt = v - s.mean;
            ss += dlt * dlt;
        }
        s.variance = ss / static_cast<double>(n - 1);
    }
    std::vector<double> sorted(col.begin(), col.end());
    std::sort(sorted.begin(), sorted.end());
    s.distinct_count =
        static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    return s;
}

}  // namespace simpair
