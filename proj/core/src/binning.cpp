#include "simpair/binning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace simpair {

const char* to_string(BinStrategy strategy) {
    switch (strategy) {
        case BinStrategy::distinct_values: return "distinct_values";
        case BinStrategy::equal_width: return "equal_width";
        case BinStrategy::equal_frequency: return "equal_frequency";
        case BinStrategy::log_width: return "log_width";
    }
    return "?";
}

BinStrategy bin_strategy_from_string(const std::string& name) {
    if (name == "distinct_values") return BinStrategy::distinct_values;
    if (name == "equal_width") return BinStrategy::equal_width;
    if (name == "equal_frequency") return BinStrategy::equal_frequency;
    if (name == "log_width") return BinStrategy::log_width;
    throw Error("unknown bin strategy '" + name + "'");
}

namespace {

std::string format_value(double v) {
    if (v == std::floor(v) && std::abs(v) < 9.007199254740992e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string interval_label(double lo, double hi, bool closed_right) {
    return "[" + format_value(lo) + ", " + format_value(hi) + (closed_right ? "]" : ")");
}

// Bins from strictly increasing inner boundaries over [lo, hi]. Row i lands in
// bin #{j : boundary_j <= v_i}; the final bin includes its right edge.
std::vector<Subgroup> bins_from_boundaries(std::span<const double> values, double lo,
                                           double hi, const std::vector<double>& inner,
                                           std::size_t min_bin_rows) {
    const std::size_t k = inner.size() + 1;
    std::vector<Subgroup> groups(k);
    for (std::size_t j = 0; j < k; ++j) {
        groups[j].lo = j == 0 ? lo : inner[j - 1];
        groups[j].hi = j == k - 1 ? hi : inner[j];
        groups[j].label = interval_label(groups[j].lo, groups[j].hi, j == k - 1);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t j = static_cast<std::size_t>(
            std::upper_bound(inner.begin(), inner.end(), values[i]) - inner.begin());
        groups[j].row_indices.push_back(i);
    }
    for (auto& g : groups) {
        g.n = g.row_indices.size();
        g.valid = g.n >= min_bin_rows;
    }
    return groups;
}

}  // namespace

std::vector<Subgroup> disaggregate(const Dataset& d, const std::string& var,
                                   const BinSpec& spec) {
    if (var == d.outcome_name())
        throw Error("disaggregate: cannot condition on the outcome '" + var + "'");
    auto values = d.column(var);
    if (spec.min_bin_rows < 1) throw Error("disaggregate: min_bin_rows must be positive");
    if (spec.strategy != BinStrategy::distinct_values && spec.bin_count < 2)
        throw Error("disaggregate: bin_count must be at least 2");

    if (spec.strategy == BinStrategy::distinct_values) {
        std::vector<double> uniq(values.begin(), values.end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        std::vector<Subgroup> groups(uniq.size());
        for (std::size_t j = 0; j < uniq.size(); ++j) {
            groups[j].lo = groups[j].hi = uniq[j];
            groups[j].label = format_value(uniq[j]);
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::size_t j = static_cast<std::size_t>(
                std::lower_bound(uniq.begin(), uniq.end(), values[i]) - uniq.begin());
            groups[j].row_indices.push_back(i);
        }
        for (auto& g : groups) {
            g.n = g.row_indices.size();
            g.valid = g.n >= spec.min_bin_rows;
        }
        return groups;
    }

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *min_it;
    const double hi = *max_it;
    const std::size_t k = static_cast<std::size_t>(spec.bin_count);

    std::vector<double> inner;
    switch (spec.strategy) {
        case BinStrategy::equal_width: {
            const double width = (hi - lo) / static_cast<double>(k);
            for (std::size_t j = 1; j < k; ++j) inner.push_back(lo + width * static_cast<double>(j));
            break;
        }
        case BinStrategy::log_width: {
            if (lo <= 0.0)
                throw Error("disaggregate: log_width requires strictly positive values in '" +
                            var + "'");
            const double tlo = std::log10(lo);
            const double thi = std::log10(hi);
            const double width = (thi - tlo) / static_cast<double>(k);
            for (std::size_t j = 1; j < k; ++j)
                inner.push_back(std::pow(10.0, tlo + width * static_cast<double>(j)));
            break;
        }
        case BinStrategy::equal_frequency: {
            std::vector<double> sorted(values.begin(), values.end());
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t j = 1; j < k; ++j)
                inner.push_back(sorted[j * sorted.size() / k]);
            break;
        }
        case BinStrategy::distinct_values: break;  // handled above
    }

    // Drop degenerate edges; duplicate quantile edges merge into wider bins.
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    inner.erase(std::remove_if(inner.begin(), inner.end(),
                               [&](double b) { return b <= lo || b > hi; }),
                inner.end());

    return bins_from_boundaries(values, lo, hi, inner, spec.min_bin_rows);
}

BinSpec auto_bin_spec(const Dataset& d, const std::string& var) {
    const SummaryStats s = column_stats(d, var);
    BinSpec spec;
    spec.min_bin_rows = 100;
    if (s.distinct_count <= 20) {
        spec.strategy = BinStrategy::distinct_values;
        return spec;
    }
    spec.bin_count = 10;
    if (s.min > 0.0 && s.max / s.min > 1000.0)
        spec.strategy = BinStrategy::log_width;
    else
        spec.strategy = BinStrategy::equal_frequency;
    return spec;
}

}  // namespace simpair
