#include "simpair/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "simpair/stats.hpp"
#include "simpair/version.hpp"

namespace simpair {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string file_content_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    char out[40];
    std::snprintf(out, sizeof(out), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return out;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (v == std::floor(v) && std::abs(v) < 9.007199254740992e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
        return buf;
    }
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

ScanReport make_scan_report(const Dataset& d, const ScanConfig& cfg,
                            std::vector<PairEvaluation> evaluations,
                            std::string dataset_hash, double scan_seconds) {
    ScanReport rep;
    rep.tool_version = kVersion;
    rep.dataset_rows = d.n_rows();
    rep.dataset_columns = d.column_names();
    rep.outcome = d.outcome_name();
    rep.dataset_hash = std::move(dataset_hash);
    rep.config = cfg;
    if (rep.config.variables.empty()) rep.config.variables = d.variable_names();
    rep.all_pairs = std::move(evaluations);
    rep.scan_seconds = scan_seconds;
    return rep;
}

std::vector<std::size_t> finding_indices(const ScanReport& report) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < report.all_pairs.size(); ++i)
        if (report.all_pairs[i].is_paradox) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = report.all_pairs[a];
        const auto& eb = report.all_pairs[b];
        const double ga = std::abs(ea.mean_disagg_sign - ea.aggregate_sign.value);
        const double gb = std::abs(eb.mean_disagg_sign - eb.aggregate_sign.value);
        if (ga != gb) return ga > gb;
        if (ea.x_p != eb.x_p) return ea.x_p < eb.x_p;
        return ea.x_c < eb.x_c;
    });
    return idx;
}

namespace {

ordered_json fit_to_json(const FitResult& f) {
    return ordered_json{{"alpha", f.alpha},
                        {"beta", f.beta},
                        {"loglik_full", f.loglik_full},
                        {"loglik_null", f.loglik_null},
                        {"p_value", f.p_value},
                        {"n", f.n},
                        {"status", to_string(f.status)}};
}

ordered_json bin_spec_to_json(const BinSpec& spec) {
    return ordered_json{{"strategy", to_string(spec.strategy)},
                        {"bin_count", spec.bin_count},
                        {"min_bin_rows", spec.min_bin_rows}};
}

ordered_json evaluation_to_json(const PairEvaluation& ev) {
    ordered_json bins = ordered_json::array();
    for (const auto& b : ev.bin_results) {
        bins.push_back(ordered_json{{"label", b.label},
                                    {"n", b.n},
                                    {"fit", fit_to_json(b.fit)},
                                    {"sign", b.sign.value},
                                    {"counted", b.counted}});
    }
    return ordered_json{
        {"x_p", ev.x_p},
        {"x_c", ev.x_c},
        {"aggregate_fit", fit_to_json(ev.aggregate_fit)},
        {"aggregate_sign", ev.aggregate_sign.value},
        {"bins", bins},
        {"mean_disagg_sign", ev.mean_disagg_sign},
        {"disagg_sign", ev.disagg_sign.value},
        {"is_paradox", ev.is_paradox},
        {"classification", to_string(ev.classification)},
        {"valid_bins", ev.valid_bins},
        {"skipped_bins", ev.skipped_bins},
        {"diagnostics",
         ordered_json{{"dependence_pc", ev.diagnostics.dependence_pc},
                      {"between_bin_outcome_spread", ev.diagnostics.between_bin_outcome_spread},
                      {"condition1_met", ev.diagnostics.condition1_met},
                      {"condition2_met", ev.diagnostics.condition2_met}}},
        {"note", ev.note}};
}

}  // namespace

std::string report_to_json(const ScanReport& report) {
    ordered_json config{{"threshold", report.config.threshold},
                        {"model", to_string(report.config.model)},
                        {"min_valid_bins", report.config.min_valid_bins},
                        {"min_bin_rows", report.config.min_bin_rows},
                        {"jobs", report.config.jobs}};
    config["default_bins"] = report.config.default_bins
                                 ? bin_spec_to_json(*report.config.default_bins)
                                 : ordered_json(nullptr);
    ordered_json overrides = ordered_json::object();
    for (const auto& [var, spec] : report.config.bin_overrides)
        overrides[var] = bin_spec_to_json(spec);
    config["bin_overrides"] = overrides;
    config["variables"] = report.config.variables;

    ordered_json findings = ordered_json::array();
    for (std::size_t i : finding_indices(report))
        findings.push_back(evaluation_to_json(report.all_pairs[i]));
    ordered_json all_pairs = ordered_json::array();
    for (const auto& ev : report.all_pairs) all_pairs.push_back(evaluation_to_json(ev));

    ordered_json root{{"tool_version", report.tool_version},
                      {"dataset", ordered_json{{"rows", report.dataset_rows},
                                               {"columns", report.dataset_columns},
                                               {"outcome", report.outcome},
                                               {"content_hash", report.dataset_hash}}},
                      {"config", config},
                      {"findings", findings},
                      {"all_pairs", all_pairs},
                      {"timing", ordered_json{{"scan_seconds", report.scan_seconds}}}};
    return root.dump(2);
}

void write_report_json(const ScanReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << report_to_json(report) << '\n';
}

void write_report_csv(const ScanReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << "x_p,x_c,is_paradox,classification,aggregate_sign,aggregate_beta,"
           "aggregate_p_value,mean_disagg_sign,disagg_sign,valid_bins,skipped_bins,"
           "dependence_pc,between_bin_outcome_spread,note\n";
    for (const auto& ev : report.all_pairs) {
        out << ev.x_p << ',' << ev.x_c << ',' << (ev.is_paradox ? 1 : 0) << ','
            << to_string(ev.classification) << ',' << ev.aggregate_sign.value << ','
            << format_number(ev.aggregate_fit.beta) << ','
            << format_number(ev.aggregate_fit.p_value) << ','
            << format_number(ev.mean_disagg_sign) << ',' << ev.disagg_sign.value << ','
            << ev.valid_bins << ',' << ev.skipped_bins << ','
            << format_number(ev.diagnostics.dependence_pc) << ','
            << format_number(ev.diagnostics.between_bin_outcome_spread) << ','
            << ev.note << '\n';
    }
}

namespace {

constexpr int kCurveSamples = 50;
// Above this many distinct x values, empirical means are computed per decile.
constexpr std::size_t kEmpiricalDistinctCap = 50;

double fitted_value(OutcomeModel model, const FitResult& fit, double x) {
    const double t = fit.alpha + fit.beta * x;
    return model == OutcomeModel::logistic ? sigmoid(t) : t;
}

// Fitted curve on an even grid plus empirical outcome means, merged in x order.
void fill_points(PlotSeries& series, OutcomeModel model, const FitResult& fit,
                 const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto [mn_it, mx_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *mn_it;
    const double hi = *mx_it;

    std::vector<PlotPoint> pts;
    for (int i = 0; i < kCurveSamples; ++i) {
        const double x = kCurveSamples == 1
                             ? lo
                             : lo + (hi - lo) * static_cast<double>(i) / (kCurveSamples - 1);
        PlotPoint p;
        p.x = x;
        p.fitted = fitted_value(model, fit, x);
        pts.push_back(p);
    }

    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (i == 0 || xs[order[i]] != xs[order[i - 1]]) ++distinct;

    auto emit_group = [&](std::size_t begin, std::size_t end) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t j = begin; j < end; ++j) {
            sx += xs[order[j]];
            sy += ys[order[j]];
        }
        PlotPoint p;
        p.x = sx / static_cast<double>(end - begin);
        p.empirical = sy / static_cast<double>(end - begin);
        p.n = end - begin;
        p.has_empirical = true;
        p.fitted = fitted_value(model, fit, p.x);
        pts.push_back(p);
    };

    if (distinct <= kEmpiricalDistinctCap) {
        std::size_t start = 0;
        while (start < order.size()) {
            std::size_t end = start;
            while (end < order.size() && xs[order[end]] == xs[order[start]]) ++end;
            emit_group(start, end);
            start = end;
        }
    } else {
        const std::size_t deciles = 10;
        for (std::size_t dec = 0; dec < deciles; ++dec) {
            const std::size_t begin = dec * order.size() / deciles;
            const std::size_t end = (dec + 1) * order.size() / deciles;
            if (begin < end) emit_group(begin, end);
        }
    }

    std::stable_sort(pts.begin(), pts.end(),
                     [](const PlotPoint& a, const PlotPoint& b) { return a.x < b.x; });
    series.points = std::move(pts);
}

}  // namespace

std::vector<PlotSeries> build_plot_series(const ScanReport& report, const Dataset& d) {
    std::vector<PlotSeries> out;
    const OutcomeModel model = report.config.model;
    const auto y = d.outcome();
    for (const auto& ev : report.all_pairs) {
        if (!ev.note.empty()) continue;
        const auto x = d.column(ev.x_p);
        const std::string pair_id = ev.x_p + "|" + ev.x_c;

        PlotSeries agg;
        agg.pair_id = pair_id;
        agg.x_p = ev.x_p;
        agg.x_c = ev.x_c;
        agg.curve_type = "aggregate";
        fill_points(agg, model, ev.aggregate_fit, std::vector<double>(x.begin(), x.end()),
                    std::vector<double>(y.begin(), y.end()));
        out.push_back(std::move(agg));

        // Re-disaggregate deterministically and pair each fitted bin with its
        // rows by label.
        const BinSpec spec = resolve_bin_spec(d, ev.x_c, report.config);
        const std::vector<Subgroup> groups = disaggregate(d, ev.x_c, spec);
        for (const auto& bt : ev.bin_results) {
            const Subgroup* match = nullptr;
            for (const auto& g : groups)
                if (g.label == bt.label) {
                    match = &g;
                    break;
                }
            if (match == nullptr) continue;
            std::vector<double> xs, ys;
            xs.reserve(match->n);
            ys.reserve(match->n);
            for (std::size_t i : match->row_indices) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
            if (xs.empty()) continue;
            PlotSeries bin;
            bin.pair_id = pair_id;
            bin.x_p = ev.x_p;
            bin.x_c = ev.x_c;
            bin.curve_type = "bin";
            bin.bin_label = bt.label;
            fill_points(bin, model, bt.fit, xs, ys);
            out.push_back(std::move(bin));
        }
    }
    return out;
}

void write_plot_csv(const std::vector<PlotSeries>& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << "pair_id,x_p,x_c,curve_type,bin_label,x,fitted,empirical,n\n";
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            out << s.pair_id << ',' << s.x_p << ',' << s.x_c << ',' << s.curve_type << ','
                << s.bin_label << ',' << format_number(p.x) << ','
                << format_number(p.fitted) << ',';
            if (p.has_empirical)
                out << format_number(p.empirical) << ',' << p.n;
            else
                out << ',';
            out << '\n';
        }
    }
}

void write_plot_data(const ScanReport& report, const Dataset& d, const std::string& path) {
    write_plot_csv(build_plot_series(report, d), path);
}

void write_dataset_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    std::string line;
    const auto& names = d.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (j) line += ',';
        line += names[j];
    }
    line += '\n';
    out << line;
    std::vector<std::span<const double>> cols;
    cols.reserve(names.size());
    for (const auto& name : names) cols.push_back(d.column(name));
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        line.clear();
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j) line += ',';
            line += format_number(cols[j][i]);
        }
        line += '\n';
        out << line;
    }
}

}  // namespace simpair
