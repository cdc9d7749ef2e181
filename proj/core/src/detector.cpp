#include "simpair/detector.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <cmath>
#include <thread>
#include <unordered_map>

namespace simpair {

const char* to_string(OutcomeModel model) {
    return model == OutcomeModel::logistic ? "logistic" : "linear";
}

const char* to_string(ParadoxClass c) {
    switch (c) {
        case ParadoxClass::none: return "none";
        case ParadoxClass::reversal: return "reversal";
        case ParadoxClass::disappearance: return "disappearance";
        case ParadoxClass::emergence: return "emergence";
    }
    return "?";
}

namespace {

// The disaggregated sign is the sign of the per-bin average only when a
// majority of the counted bins agree; a lone significant bin among quiet ones
// keeps the average inside the dead zone and yields 0.
constexpr double kMeanSignDeadZone = 0.5;

TrendSign mean_to_sign(double mean) {
    if (std::abs(mean) < kMeanSignDeadZone) return TrendSign{0};
    return TrendSign{mean > 0.0 ? 1 : -1};
}

ParadoxClass classify(int agg, int disagg, bool is_paradox) {
    if (!is_paradox) return ParadoxClass::none;
    if (agg * disagg == -1) return ParadoxClass::reversal;
    if (agg != 0 && disagg == 0) return ParadoxClass::disappearance;
    if (agg == 0 && disagg != 0) return ParadoxClass::emergence;
    return ParadoxClass::none;
}

FitResult fit_model(OutcomeModel model, std::span<const double> x,
                    std::span<const double> y) {
    return model == OutcomeModel::logistic ? fit_logistic(x, y) : fit_linear(x, y);
}

void require_pair(const Dataset& d, const std::string& x_p, const std::string& x_c) {
    if (x_p == x_c) throw Error("pair variables must differ, got '" + x_p + "' twice");
    if (x_p == d.outcome_name() || x_c == d.outcome_name())
        throw Error("pair variables cannot include the outcome '" + d.outcome_name() + "'");
    (void)d.column(x_p);
    (void)d.column(x_c);
}

}  // namespace

BinSpec resolve_bin_spec(const Dataset& d, const std::string& var, const ScanConfig& cfg) {
    BinSpec spec;
    auto it = cfg.bin_overrides.find(var);
    if (it != cfg.bin_overrides.end())
        spec = it->second;
    else if (cfg.default_bins)
        spec = *cfg.default_bins;
    else
        spec = auto_bin_spec(d, var);
    spec.min_bin_rows = cfg.min_bin_rows;
    return spec;
}

PairEvaluation evaluate_pair(const Dataset& d, const std::string& x_p,
                             const std::string& x_c, const ScanConfig& cfg) {
    require_pair(d, x_p, x_c);

    PairEvaluation ev;
    ev.x_p = x_p;
    ev.x_c = x_c;

    const auto x = d.column(x_p);
    const auto y = d.outcome();
    ev.aggregate_fit = fit_model(cfg.model, x, y);
    ev.aggregate_sign = trend_sign(ev.aggregate_fit, cfg.threshold);

    const BinSpec spec = resolve_bin_spec(d, x_c, cfg);
    const std::vector<Subgroup> groups = disaggregate(d, x_c, spec);

    const std::size_t min_fit_rows = cfg.model == OutcomeModel::logistic ? 2 : 3;
    double sign_sum = 0.0;
    std::vector<double> xs, ys;
    for (const auto& g : groups) {
        if (!g.valid || g.n < min_fit_rows) {
            ++ev.skipped_bins;
            continue;
        }
        xs.clear();
        ys.clear();
        xs.reserve(g.n);
        ys.reserve(g.n);
        for (std::size_t i : g.row_indices) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
        BinTrend bt;
        bt.label = g.label;
        bt.n = g.n;
        bt.fit = fit_model(cfg.model, xs, ys);
        bt.sign = trend_sign(bt.fit, cfg.threshold);
        bt.counted = bt.fit.status != FitStatus::degenerate;
        if (bt.counted) {
            sign_sum += bt.sign.value;
            ++ev.valid_bins;
        } else {
            ++ev.skipped_bins;
        }
        ev.bin_results.push_back(std::move(bt));
    }

    ev.mean_disagg_sign =
        ev.valid_bins > 0 ? sign_sum / static_cast<double>(ev.valid_bins) : 0.0;
    ev.disagg_sign = mean_to_sign(ev.mean_disagg_sign);
    ev.is_paradox = ev.valid_bins >= cfg.min_valid_bins &&
                    ev.aggregate_sign.value != ev.disagg_sign.value;
    ev.classification = classify(ev.aggregate_sign.value, ev.disagg_sign.value, ev.is_paradox);
    ev.diagnostics = diagnostics(d, x_p, x_c, spec);
    return ev;
}

std::vector<PairEvaluation> scan_pairs(const Dataset& d, const ScanConfig& cfg) {
    std::vector<std::string> vars =
        cfg.variables.empty() ? d.variable_names() : cfg.variables;
    std::set<std::string> unique_vars;
    for (const auto& v : vars) {
        (void)d.column(v);
        if (v == d.outcome_name())
            throw Error("scan variables cannot include the outcome '" + v + "'");
        if (!unique_vars.insert(v).second)
            throw Error("scan variable '" + v + "' listed twice");
    }
    if (vars.size() < 2) throw Error("scan requires at least 2 variables");

    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.reserve(vars.size() * (vars.size() - 1));
    for (const auto& p : vars)
        for (const auto& c : vars)
            if (p != c) pairs.emplace_back(p, c);

    std::vector<PairEvaluation> results(pairs.size());
    auto eval_at = [&](std::size_t i) {
        try {
            results[i] = evaluate_pair(d, pairs[i].first, pairs[i].second, cfg);
        } catch (const std::exception& e) {
            results[i] = PairEvaluation{};
            results[i].x_p = pairs[i].first;
            results[i].x_c = pairs[i].second;
            results[i].note = e.what();
        }
    };

    const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(pairs.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) eval_at(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < pairs.size();
                     i = next.fetch_add(1))
                    eval_at(i);
            });
        }
        for (auto& t : workers) t.join();
    }

    std::stable_sort(results.begin(), results.end(),
                     [](const PairEvaluation& a, const PairEvaluation& b) {
                         if (a.is_paradox != b.is_paradox) return a.is_paradox;
                         if (a.x_p != b.x_p) return a.x_p < b.x_p;
                         return a.x_c < b.x_c;
                     });
    return results;
}

ParadoxDiagnostics diagnostics(const Dataset& d, const std::string& x_p,
                               const std::string& x_c) {
    return diagnostics(d, x_p, x_c, auto_bin_spec(d, x_c));
}

ParadoxDiagnostics diagnostics(const Dataset& d, const std::string& x_p,
                               const std::string& x_c, const BinSpec& spec) {
    require_pair(d, x_p, x_c);
    ParadoxDiagnostics diag;
    diag.dependence_pc = pearson_correlation(d.column(x_p), d.column(x_c));

    const auto y = d.outcome();
    std::vector<double> bin_means;
    for (const auto& g : disaggregate(d, x_c, spec)) {
        if (!g.valid || g.n == 0) continue;
        double m = 0.0;
        for (std::size_t i : g.row_indices) m += y[i];
        bin_means.push_back(m / static_cast<double>(g.n));
    }
    if (bin_means.size() > 1) {
        double mean = 0.0;
        for (double m : bin_means) mean += m;
        mean /= static_cast<double>(bin_means.size());
        double ss = 0.0;
        for (double m : bin_means) ss += (m - mean) * (m - mean);
        diag.between_bin_outcome_spread = ss / static_cast<double>(bin_means.size());
    }
    diag.condition1_met = std::abs(diag.dependence_pc) > 0.01;
    diag.condition2_met = diag.between_bin_outcome_spread > 1e-12;
    return diag;
}

double mixture_identity_check(const Dataset& d, const std::string& x_p,
                              const std::string& x_c) {
    require_pair(d, x_p, x_c);
    const auto xp = d.column(x_p);
    const auto xc = d.column(x_c);
    const auto y = d.outcome();
    const std::size_t n = d.n_rows();

    // Rows grouped by distinct x_p value via a sorted index pass.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xp[a] < xp[b]; });

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (i == 0 || xp[order[i]] != xp[order[i - 1]]) ++distinct;
    if (distinct > 1000)
        throw Error("mixture_identity_check: '" + x_p + "' has more than 1000 distinct values");

    auto kahan_add = [](double& sum, double& comp, double term) {
        const double t = term - comp;
        const double s = sum + t;
        comp = (s - sum) - t;
        sum = s;
    };

    struct Cell {
        double sum = 0.0;
        double comp = 0.0;
        std::size_t count = 0;
    };
    double max_dev = 0.0;
    std::unordered_map<double, Cell> cells;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start;
        while (end < n && xp[order[end]] == xp[order[start]]) ++end;
        const double n_v = static_cast<double>(end - start);

        double lhs = 0.0, lhs_c = 0.0;
        cells.clear();
        for (std::size_t j = start; j < end; ++j) {
            const std::size_t i = order[j];
            kahan_add(lhs, lhs_c, y[i]);
            Cell& cell = cells[xc[i]];
            kahan_add(cell.sum, cell.comp, y[i]);
            ++cell.count;
        }
        lhs /= n_v;

        double rhs = 0.0, rhs_c = 0.0;
        for (const auto& [value, cell] : cells) {
            const double cell_mean = cell.sum / static_cast<double>(cell.count);
            const double cell_weight = static_cast<double>(cell.count) / n_v;
            kahan_add(rhs, rhs_c, cell_mean * cell_weight);
        }
        max_dev = std::max(max_dev, std::abs(lhs - rhs));
        start = end;
    }
    return max_dev;
}

}  // namespace simpair
