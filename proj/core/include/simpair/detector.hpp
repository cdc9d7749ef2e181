#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simpair/binning.hpp"
#include "simpair/dataset.hpp"
#include "simpair/stats.hpp"

namespace simpair {

enum class OutcomeModel { logistic, linear };
const char* to_string(OutcomeModel model);

// reversal: aggregate and disaggregated trends have opposite signs.
// disappearance: a significant aggregate trend vanishes in the subgroups.
// emergence: a flat aggregate hides a consistent subgroup trend.
enum class ParadoxClass { none, reversal, disappearance, emergence };
const char* to_string(ParadoxClass c);

struct ScanConfig {
    double threshold = 0.05;                      // significance level for trend signs
    OutcomeModel model = OutcomeModel::logistic;
    std::size_t min_valid_bins = 2;
    std::size_t min_bin_rows = 100;
    std::optional<BinSpec> default_bins;          // unset: auto per variable
    std::map<std::string, BinSpec> bin_overrides; // keyed by conditioning variable
    std::vector<std::string> variables;           // empty: all non-outcome columns
    int jobs = 1;
};

// Necessary-condition measurements for a candidate pair: the conditioning
// variable must depend on the paradox variable, and the outcome must vary
// across conditioning subgroups. If either fails, no genuine trend reversal
// can arise from conditioning.
struct ParadoxDiagnostics {
    double dependence_pc = 0.0;               // Pearson correlation of x_p and x_c
    double between_bin_outcome_spread = 0.0;  // variance of per-bin outcome means
    bool condition1_met = false;              // |dependence_pc| > 0.01
    bool condition2_met = false;              // spread > 1e-12
};

struct BinTrend {
    std::string label;
    std::size_t n = 0;
    FitResult fit;
    TrendSign sign;
    bool counted = false;  // enters the disaggregated sign average
};

struct PairEvaluation {
    std::string x_p;  // variable whose trend is under study
    std::string x_c;  // conditioning variable defining the subgroups
    FitResult aggregate_fit;
    TrendSign aggregate_sign;
    std::vector<BinTrend> bin_results;
    double mean_disagg_sign = 0.0;  // unweighted mean over counted bins
    TrendSign disagg_sign;
    bool is_paradox = false;
    ParadoxClass classification = ParadoxClass::none;
    std::size_t valid_bins = 0;
    std::size_t skipped_bins = 0;
    ParadoxDiagnostics diagnostics;
    std::string note;  // non-empty when the evaluation could not be run
};

// Bin spec used for a conditioning variable under this config:
// per-variable override, else the configured default, else auto_bin_spec.
BinSpec resolve_bin_spec(const Dataset& d, const std::string& var, const ScanConfig& cfg);

// Fits the outcome against x_p on all rows, then within each bin of x_c, and
// compares the aggregate trend sign with the average of the per-bin signs.
PairEvaluation evaluate_pair(const Dataset& d, const std::string& x_p,
                             const std::string& x_c, const ScanConfig& cfg);

// Evaluates every ordered pair (x_p, x_c) of distinct variables; m variables
// yield m*(m-1) evaluations. Per-pair failures are recorded in the
// evaluation's note instead of aborting the scan. Results are sorted by
// (is_paradox desc, x_p, x_c) and are identical for any jobs count.
std::vector<PairEvaluation> scan_pairs(const Dataset& d, const ScanConfig& cfg);

ParadoxDiagnostics diagnostics(const Dataset& d, const std::string& x_p,
                               const std::string& x_c);
ParadoxDiagnostics diagnostics(const Dataset& d, const std::string& x_p,
                               const std::string& x_c, const BinSpec& spec);

// Maximum absolute deviation, over distinct x_p values, between the empirical
// E[Y | X_p = x] and its mixture over distinct x_c cells
// sum_c E[Y | X_p = x, X_c = c] * P(X_c = c | X_p = x).
// An algebraic identity of empirical frequencies; deviations beyond rounding
// indicate a bookkeeping bug. Requires at most 1000 distinct x_p values.
double mixture_identity_check(const Dataset& d, const std::string& x_p,
                              const std::string& x_c);

}  // namespace simpair
