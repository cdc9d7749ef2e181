#include "doctest.h"

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "test_support.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs the installed CLI with output captured to files.
RunResult run_cli(const std::string& args) {
    const auto out_path = (testsup::tmp_dir() / "cli_stdout.txt").string();
    const std::string cmd =
        std::string(SIMPAIR_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testsup::slurp(out_path);
    return r;
}

std::string tmp(const std::string& name) { return (testsup::tmp_dir() / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and help exit cleanly") {
    const RunResult v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("scan --help").exit_code == 0);
}

TEST_CASE("synth is byte-deterministic per seed") {
    const auto a = tmp("det_a.csv");
    const auto b = tmp("det_b.csv");
    CHECK(run_cli("synth --kind sessions --n-sessions 1000 --seed 7 --out " + a).exit_code == 0);
    CHECK(run_cli("synth --kind sessions --n-sessions 1000 --seed 7 --out " + b).exit_code == 0);
    CHECK(testsup::slurp(a) == testsup::slurp(b));
    CHECK(!testsup::slurp(a).empty());
}

TEST_CASE("invalid flags exit with code 2") {
    CHECK(run_cli("synth --kind sessions --p-continue 1.5 --out " + tmp("x.csv")).exit_code == 2);
    CHECK(run_cli("synth --kind bogus --out " + tmp("x.csv")).exit_code == 2);
    CHECK(run_cli("scan --input " + tmp("nope.csv") +
                  " --outcome y --threshold 1.5").exit_code == 2);
    CHECK(run_cli("scan").exit_code == 2);
    CHECK(run_cli("diagnose --input a.csv --outcome y --xp a --xc a").exit_code == 2);
}

TEST_CASE("data errors exit with code 3") {
    CHECK(run_cli("scan --input " + tmp("missing_file.csv") + " --outcome y").exit_code == 3);
    const auto csv = testsup::write_file("cli_small.csv", "a,b,y\n1,2,0\n2,1,1\n3,4,0\n4,3,1\n");
    CHECK(run_cli("scan --input " + csv + " --outcome nope").exit_code == 3);
    CHECK(run_cli("diagnose --input " + csv + " --outcome y --xp a --xc zzz").exit_code == 3);
}

TEST_CASE("sessions synth scans to a reversal finding") {
    const auto csv = tmp("cli_sessions.csv");
    REQUIRE(run_cli("synth --kind sessions --n-sessions 20000 --seed 3 --out " + csv)
                .exit_code == 0);
    const auto report = tmp("cli_report.json");
    const RunResult scan = run_cli("scan --input " + csv + " --outcome accepted --out " + report);
    CHECK(scan.exit_code == 0);
    CHECK(scan.out.find("reversal") != std::string::npos);
    CHECK(scan.out.find("position | session_length") != std::string::npos);

    const json rep = json::parse(testsup::slurp(report));
    CHECK(rep["all_pairs"].size() == 2);
    REQUIRE(rep["findings"].size() == 1);
    CHECK(rep["findings"][0]["x_p"] == "position");
    CHECK(rep["findings"][0]["x_c"] == "session_length");
    CHECK(rep["findings"][0]["classification"] == "reversal");
}

TEST_CASE("scan reports are identical across runs and jobs settings") {
    const auto csv = tmp("cli_det.csv");
    REQUIRE(run_cli("synth --kind sessions --n-sessions 5000 --seed 11 --out " + csv)
                .exit_code == 0);
    const auto r1 = tmp("cli_det1.json");
    const auto r2 = tmp("cli_det2.json");
    REQUIRE(run_cli("scan --input " + csv + " --outcome accepted --jobs 1 --out " + r1)
                .exit_code == 0);
    REQUIRE(run_cli("scan --input " + csv + " --outcome accepted --jobs 4 --out " + r2)
                .exit_code == 0);
    json a = json::parse(testsup::slurp(r1));
    json b = json::parse(testsup::slurp(r2));
    a["timing"] = nullptr;
    b["timing"] = nullptr;
    a["config"]["jobs"] = 0;
    b["config"]["jobs"] = 0;
    CHECK(a == b);
}

TEST_CASE("majority-mask output is scannable and flagged") {
    const auto csv = tmp("cli_mask.csv");
    REQUIRE(run_cli("synth --kind majority-mask --mask-rows 30000 --seed 5 --out " + csv)
                .exit_code == 0);
    const auto report = tmp("cli_mask.json");
    const RunResult scan = run_cli("scan --input " + csv + " --outcome outcome --out " + report);
    CHECK(scan.exit_code == 0);
    const json rep = json::parse(testsup::slurp(report));
    bool found = false;
    for (const auto& f : rep["findings"])
        if (f["x_p"] == "x_p" && f["x_c"] == "c") found = true;
    CHECK(found);
}

TEST_CASE("csv format and plot data files are written") {
    const auto csv = tmp("cli_fmt.csv");
    REQUIRE(run_cli("synth --kind sessions --n-sessions 3000 --seed 2 --out " + csv)
                .exit_code == 0);
    const auto flat = tmp("cli_flat.csv");
    const auto plot = tmp("cli_plot.csv");
    CHECK(run_cli("scan --input " + csv + " --outcome accepted --format csv --out " + flat +
                  " --plot-data " + plot)
              .exit_code == 0);
    CHECK(testsup::slurp(flat).rfind("x_p,x_c,is_paradox", 0) == 0);
    CHECK(testsup::slurp(plot).rfind("pair_id,", 0) == 0);

    // aggregate rows carry no bin label
    const std::string plot_text = testsup::slurp(plot);
    CHECK(plot_text.find(",aggregate,,") != std::string::npos);
}

TEST_CASE("scan restricted to a variable subset") {
    const auto csv = tmp("cli_null3.csv");
    REQUIRE(run_cli("synth --kind null --rows 2000 --m-vars 3 --seed 4 --out " + csv)
                .exit_code == 0);
    const auto report = tmp("cli_subset.json");
    const RunResult r = run_cli("scan --input " + csv +
                                " --outcome outcome --vars x1,x3 --out " + report);
    CHECK(r.exit_code == 0);
    const json rep = json::parse(testsup::slurp(report));
    CHECK(rep["all_pairs"].size() == 2);
    CHECK(rep["config"]["variables"] == json::array({"x1", "x3"}));

    CHECK(run_cli("scan --input " + csv + " --outcome outcome --vars x1,zzz").exit_code == 3);
}

TEST_CASE("diagnose prints the necessary conditions") {
    const auto csv = tmp("cli_diag.csv");
    REQUIRE(run_cli("synth --kind sessions --n-sessions 5000 --seed 13 --out " + csv)
                .exit_code == 0);
    const RunResult r = run_cli("diagnose --input " + csv +
                                " --outcome accepted --xp position --xc session_length");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("condition1_met: true") != std::string::npos);
    CHECK(r.out.find("condition2_met: true") != std::string::npos);
    CHECK(r.out.find("mixture_identity_max_abs_deviation:") != std::string::npos);

    const RunResult j = run_cli("diagnose --input " + csv +
                                " --outcome accepted --xp position --xc session_length --json");
    CHECK(j.exit_code == 0);
    const json parsed = json::parse(j.out);
    CHECK(parsed["condition1_met"] == true);
    CHECK(parsed["mixture_identity_max_abs_deviation"].get<double>() <= 1e-12);
}

}  // TEST_SUITE
