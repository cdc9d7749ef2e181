// Command-line frontend: scan a CSV for Simpson's pairs, generate synthetic
// datasets with known paradoxes, or print pair diagnostics.
//
// Exit codes: 0 success, 2 bad flags, 3 data errors.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simpair/binning.hpp"
#include "simpair/dataset.hpp"
#include "simpair/detector.hpp"
#include "simpair/report.hpp"
#include "simpair/synthgen.hpp"
#include "simpair/version.hpp"

namespace {

using namespace simpair;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) {
            if (start < s.size()) out.push_back(s.substr(start));
            break;
        }
        if (comma > start) out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::vector<double> split_doubles(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const auto& field : split_list(s)) {
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end != field.c_str() + field.size())
            throw CLI::ValidationError(flag, "'" + field + "' is not a number");
        out.push_back(v);
    }
    return out;
}

// "STRATEGY" or "STRATEGY:K", e.g. "equal_frequency:10".
BinSpec parse_bin_spec(const std::string& s, const std::string& flag) {
    BinSpec spec;
    const std::size_t colon = s.find(':');
    const std::string name = colon == std::string::npos ? s : s.substr(0, colon);
    try {
        spec.strategy = bin_strategy_from_string(name);
    } catch (const Error& e) {
        throw CLI::ValidationError(flag, e.what());
    }
    if (colon != std::string::npos) {
        char* end = nullptr;
        const long k = std::strtol(s.c_str() + colon + 1, &end, 10);
        if (end != s.c_str() + s.size() || k < 2)
            throw CLI::ValidationError(flag, "bin count must be an integer >= 2");
        spec.bin_count = static_cast<int>(k);
    } else if (spec.strategy != BinStrategy::distinct_values) {
        throw CLI::ValidationError(flag, "strategy '" + name + "' requires a bin count");
    }
    return spec;
}

const CLI::Validator OpenUnit(
    [](std::string& s) -> std::string {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size() || !(v > 0.0 && v < 1.0))
            return "value must lie strictly between 0 and 1";
        return {};
    },
    "FLOAT in (0,1)");

int default_jobs() {
    if (const char* env = std::getenv("SIMPAIR_JOBS")) {
        const int j = std::atoi(env);
        if (j >= 1) return j;
    }
    return 1;
}

struct ScanArgs {
    std::string input;
    std::string outcome;
    std::string vars;
    double threshold = 0.05;
    std::string bins;
    std::vector<std::string> bins_for;
    std::size_t min_bin_rows = 100;
    std::size_t min_valid_bins = 2;
    std::string model = "logistic";
    std::string out = "report.json";
    std::string format = "json";
    std::string plot_data;
    int jobs = default_jobs();
};

LoadResult load_for_scan(const std::string& input, const std::string& outcome,
                         const std::vector<std::string>& vars, bool logistic) {
    const std::vector<std::string> header = read_csv_header(input);
    std::vector<VariableSpec> schema;
    bool saw_outcome = false;
    for (const auto& name : header) {
        if (name == outcome) {
            schema.push_back({name, logistic ? VariableKind::binary_outcome
                                             : VariableKind::continuous_outcome});
            saw_outcome = true;
        } else if (std::find(vars.begin(), vars.end(), name) != vars.end()) {
            schema.push_back({name, VariableKind::continuous});
        }
    }
    if (!saw_outcome)
        throw Error("outcome column '" + outcome + "' not found in '" + input + "'");
    for (const auto& v : vars) {
        if (std::find(header.begin(), header.end(), v) == header.end())
            throw Error("variable '" + v + "' not found in '" + input + "'");
        if (v == outcome) throw Error("variable '" + v + "' is the outcome");
    }
    return load_csv(input, schema);
}

int run_scan(const ScanArgs& args) {
    std::vector<std::string> vars = split_list(args.vars);
    if (vars.empty()) {
        for (const auto& name : read_csv_header(args.input))
            if (name != args.outcome) vars.push_back(name);
    }
    const bool logistic = args.model == "logistic";
    const LoadResult loaded = load_for_scan(args.input, args.outcome, vars, logistic);
    if (loaded.dropped_rows > 0)
        std::cerr << "note: dropped " << loaded.dropped_rows
                  << " rows with non-numeric or non-finite values\n";

    ScanConfig cfg;
    cfg.threshold = args.threshold;
    cfg.model = logistic ? OutcomeModel::logistic : OutcomeModel::linear;
    cfg.min_bin_rows = args.min_bin_rows;
    cfg.min_valid_bins = args.min_valid_bins;
    cfg.variables = vars;
    cfg.jobs = args.jobs;
    if (!args.bins.empty()) cfg.default_bins = parse_bin_spec(args.bins, "--bins");
    for (const auto& entry : args.bins_for) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--bins-for", "expected VAR=STRATEGY:K");
        cfg.bin_overrides[entry.substr(0, eq)] =
            parse_bin_spec(entry.substr(eq + 1), "--bins-for");
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<PairEvaluation> evals = scan_pairs(loaded.data, cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const ScanReport report = make_scan_report(loaded.data, cfg, std::move(evals),
                                               file_content_hash(args.input), seconds);
    if (args.format == "json")
        write_report_json(report, args.out);
    else
        write_report_csv(report, args.out);
    if (!args.plot_data.empty()) write_plot_data(report, loaded.data, args.plot_data);

    const std::vector<std::size_t> findings = finding_indices(report);
    for (std::size_t i : findings) {
        const PairEvaluation& ev = report.all_pairs[i];
        char mean_buf[32];
        std::snprintf(mean_buf, sizeof(mean_buf), "%+.3f", ev.mean_disagg_sign);
        std::cout << to_string(ev.classification) << ": " << report.outcome << " ~ "
                  << ev.x_p << " | " << ev.x_c << "  agg_sign=" << ev.aggregate_sign.value
                  << " mean_bin_sign=" << mean_buf << " valid_bins=" << ev.valid_bins
                  << "\n";
    }
    if (findings.empty())
        std::cout << "no Simpson's pairs flagged (" << report.all_pairs.size()
                  << " evaluations)\n";
    std::cout << "report: " << args.out << " (" << report.all_pairs.size() << " pairs, "
              << findings.size() << " findings)\n";
    return 0;
}

struct SynthArgs {
    std::string kind;
    std::string out = "synth.csv";
    std::uint64_t seed = 1;
    // sessions
    SessionGenParams sessions;
    // reversal
    std::size_t n_per_group = 50000;
    std::string centers = "0,3";
    std::string offsets = "2,-2";
    double reversal_slope = 0.5;
    // null
    std::size_t rows = 10000;
    std::size_t m_vars = 3;
    // majority-mask
    std::size_t mask_rows = 100000;
    double p_majority = 0.65;
};

int run_synth(const SynthArgs& args) {
    Dataset data = [&] {
        if (args.kind == "sessions") {
            SessionGenParams p = args.sessions;
            p.seed = args.seed;
            return gen_sessions(p);
        }
        if (args.kind == "reversal") {
            ReversalGenParams p;
            p.n_per_group = args.n_per_group;
            p.group_centers = split_doubles(args.centers, "--centers");
            p.group_offsets = split_doubles(args.offsets, "--offsets");
            p.within_slope = args.reversal_slope;
            p.seed = args.seed;
            return gen_reversal(p);
        }
        if (args.kind == "null") return gen_null(args.rows, args.m_vars, args.seed);
        MajorityMaskParams p;
        p.n_rows = args.mask_rows;
        p.p_majority = args.p_majority;
        p.seed = args.seed;
        return gen_majority_mask(p);
    }();
    write_dataset_csv(data, args.out);
    std::cout << data.n_rows() << " rows -> " << args.out << "\n";
    return 0;
}

struct DiagnoseArgs {
    std::string input;
    std::string outcome;
    std::string x_p;
    std::string x_c;
    std::string model = "logistic";
    bool as_json = false;
};

int run_diagnose(const DiagnoseArgs& args) {
    const bool logistic = args.model == "logistic";
    const LoadResult loaded =
        load_for_scan(args.input, args.outcome, {args.x_p, args.x_c}, logistic);
    const ParadoxDiagnostics diag = diagnostics(loaded.data, args.x_p, args.x_c);

    bool mixture_ok = true;
    double mixture_dev = 0.0;
    std::string mixture_note;
    try {
        mixture_dev = mixture_identity_check(loaded.data, args.x_p, args.x_c);
    } catch (const Error& e) {
        mixture_ok = false;
        mixture_note = e.what();
    }

    if (args.as_json) {
        std::cout << "{\n"
                  << "  \"x_p\": \"" << args.x_p << "\",\n"
                  << "  \"x_c\": \"" << args.x_c << "\",\n"
                  << "  \"dependence_pc\": " << format_number(diag.dependence_pc) << ",\n"
                  << "  \"between_bin_outcome_spread\": "
                  << format_number(diag.between_bin_outcome_spread) << ",\n"
                  << "  \"condition1_met\": " << (diag.condition1_met ? "true" : "false")
                  << ",\n"
                  << "  \"condition2_met\": " << (diag.condition2_met ? "true" : "false")
                  << ",\n"
                  << "  \"mixture_identity_max_abs_deviation\": "
                  << (mixture_ok ? format_number(mixture_dev) : "null") << "\n"
                  << "}\n";
    } else {
        std::cout << "x_p: " << args.x_p << "\n"
                  << "x_c: " << args.x_c << "\n"
                  << "dependence_pc: " << format_number(diag.dependence_pc) << "\n"
                  << "between_bin_outcome_spread: "
                  << format_number(diag.between_bin_outcome_spread) << "\n"
                  << "condition1_met: " << (diag.condition1_met ? "true" : "false") << "\n"
                  << "condition2_met: " << (diag.condition2_met ? "true" : "false") << "\n";
        if (mixture_ok)
            std::cout << "mixture_identity_max_abs_deviation: " << format_number(mixture_dev)
                      << "\n";
        else
            std::cout << "mixture_identity_max_abs_deviation: skipped (" << mixture_note
                      << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simpson's pair detector: finds variable pairs whose aggregate trend "
                 "contradicts the per-subgroup trends"};
    app.set_version_flag("--version", simpair::kVersion);
    app.require_subcommand(1);

    ScanArgs scan_args;
    CLI::App* scan = app.add_subcommand("scan", "Evaluate all ordered variable pairs");
    scan->add_option("--input", scan_args.input, "CSV file")->required();
    scan->add_option("--outcome", scan_args.outcome, "outcome column name")->required();
    scan->add_option("--vars", scan_args.vars,
                     "comma-separated variables (default: all non-outcome columns)");
    scan->add_option("--threshold", scan_args.threshold, "significance level")
        ->check(OpenUnit);
    scan->add_option("--bins", scan_args.bins,
                     "default bin spec STRATEGY:K (distinct_values, equal_width, "
                     "equal_frequency, log_width); default: auto per variable");
    scan->add_option("--bins-for", scan_args.bins_for,
                     "per-variable bin spec VAR=STRATEGY:K (repeatable)");
    scan->add_option("--min-bin-rows", scan_args.min_bin_rows,
                     "bins with fewer rows are skipped")
        ->check(CLI::PositiveNumber);
    scan->add_option("--min-valid-bins", scan_args.min_valid_bins,
                     "minimum counted bins for a paradox flag")
        ->check(CLI::PositiveNumber);
    scan->add_option("--model", scan_args.model, "outcome model")
        ->check(CLI::IsMember({"logistic", "linear"}));
    scan->add_option("--out", scan_args.out, "report path (default report.json)");
    scan->add_option("--format", scan_args.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    scan->add_option("--plot-data", scan_args.plot_data, "write fitted/empirical curves CSV");
    scan->add_option("--jobs", scan_args.jobs,
                     "parallel pair evaluations (default $SIMPAIR_JOBS or 1)")
        ->check(CLI::PositiveNumber);

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth->add_option("--kind", synth_args.kind, "generator")
        ->check(CLI::IsMember({"sessions", "reversal", "null", "majority-mask"}))
        ->required();
    synth->add_option("--out", synth_args.out, "output CSV path");
    synth->add_option("--seed", synth_args.seed, "RNG seed");
    synth->add_option("--n-sessions", synth_args.sessions.n_sessions, "sessions: count");
    synth->add_option("--p-continue", synth_args.sessions.p_continue,
                      "sessions: continuation probability")
        ->check(OpenUnit);
    synth->add_option("--max-len", synth_args.sessions.max_len, "sessions: length cap")
        ->check(CLI::PositiveNumber);
    synth->add_option("--base-accept", synth_args.sessions.base_accept,
                      "sessions: acceptance probability at position 1, length 1")
        ->check(OpenUnit);
    synth->add_option("--within-slope", synth_args.sessions.within_slope,
                      "sessions: log-odds change per position");
    synth->add_option("--between-offset", synth_args.sessions.between_offset,
                      "sessions: log-odds change per unit of session length");
    synth->add_option("--n-per-group", synth_args.n_per_group, "reversal: rows per group");
    synth->add_option("--centers", synth_args.centers, "reversal: group means of x_p");
    synth->add_option("--offsets", synth_args.offsets, "reversal: group log-odds offsets");
    synth->add_option("--slope", synth_args.reversal_slope, "reversal: shared within slope");
    synth->add_option("--rows", synth_args.rows, "null: row count");
    synth->add_option("--m-vars", synth_args.m_vars, "null: independent variable count");
    synth->add_option("--mask-rows", synth_args.mask_rows, "majority-mask: row count");
    synth->add_option("--p-majority", synth_args.p_majority,
                      "majority-mask: mass of the majority subgroup")
        ->check(OpenUnit);

    DiagnoseArgs diag_args;
    CLI::App* diagnose =
        app.add_subcommand("diagnose", "Necessary-condition diagnostics for one pair");
    diagnose->add_option("--input", diag_args.input, "CSV file")->required();
    diagnose->add_option("--outcome", diag_args.outcome, "outcome column name")->required();
    diagnose->add_option("--xp", diag_args.x_p, "paradox variable")->required();
    diagnose->add_option("--xc", diag_args.x_c, "conditioning variable")->required();
    diagnose->add_option("--model", diag_args.model, "outcome model")
        ->check(CLI::IsMember({"logistic", "linear"}));
    diagnose->add_flag("--json", diag_args.as_json, "emit JSON instead of text");

    try {
        app.parse(argc, argv);
        if (diagnose->parsed() && diag_args.x_p == diag_args.x_c)
            throw CLI::ValidationError("--xc", "must differ from --xp");
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (scan->parsed()) return run_scan(scan_args);
        if (synth->parsed()) return run_synth(synth_args);
        return run_diagnose(diag_args);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
