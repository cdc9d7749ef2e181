#include "doctest.h"

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "simpair/detector.hpp"
#include "simpair/rng.hpp"
#include "simpair/stats.hpp"
#include "simpair/synthgen.hpp"
#include "test_support.hpp"

using namespace simpair;

namespace {

bool datasets_equal(const Dataset& a, const Dataset& b) {
    if (a.column_names() != b.column_names() || a.n_rows() != b.n_rows()) return false;
    for (const auto& name : a.column_names())
        if (testsup::to_vec(a.column(name)) != testsup::to_vec(b.column(name))) return false;
    return true;
}

}  // namespace

TEST_SUITE("synthgen") {

TEST_CASE("generators are pure functions of their parameters") {
    SessionGenParams sp;
    sp.n_sessions = 2000;
    sp.seed = 42;
    CHECK(datasets_equal(gen_sessions(sp), gen_sessions(sp)));
    sp.seed = 43;
    CHECK_FALSE(datasets_equal(gen_sessions(SessionGenParams{2000, 0.5, 8, 0.2, -0.3, 0.5, 42}),
                               gen_sessions(sp)));

    ReversalGenParams rp;
    rp.n_per_group = 500;
    rp.seed = 7;
    CHECK(datasets_equal(gen_reversal(rp), gen_reversal(rp)));

    CHECK(datasets_equal(gen_null(1000, 3, 9), gen_null(1000, 3, 9)));
    CHECK(datasets_equal(gen_majority_mask(11), gen_majority_mask(11)));
}

TEST_CASE("session lengths follow the halving law") {
    SessionGenParams p;
    p.n_sessions = 100000;
    p.seed = 1;
    const Dataset d = gen_sessions(p);
    const auto len = d.column("session_length");
    const auto pos = d.column("position");
    std::map<int, double> sessions;  // length -> session count
    for (std::size_t i = 0; i < d.n_rows(); ++i)
        if (pos[i] == 1.0) sessions[static_cast<int>(len[i])] += 1.0;
    for (int k = 1; k <= 4; ++k) {
        const double ratio = sessions[k] / sessions[k + 1];
        CHECK(ratio > 1.8);
        CHECK(ratio < 2.2);
    }
    // the cap absorbs the whole geometric tail: with p = 0.5 its mass equals
    // the last uncapped length instead of halving again
    CHECK(sessions[8] / sessions[7] > 0.8);
    CHECK(sessions[8] / sessions[7] < 1.2);
}

TEST_CASE("empirical cell means match the closed form within 3 standard errors") {
    SessionGenParams p;
    p.n_sessions = 100000;
    p.seed = 5;
    const Dataset d = gen_sessions(p);
    const auto pos = d.column("position");
    const auto len = d.column("session_length");
    const auto acc = d.outcome();
    std::map<std::pair<int, int>, std::pair<double, double>> cells;  // (k,L) -> (sum, n)
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        auto& c = cells[{static_cast<int>(pos[i]), static_cast<int>(len[i])}];
        c.first += acc[i];
        c.second += 1.0;
    }
    int checked = 0;
    for (const auto& [cell, stats] : cells) {
        if (stats.second < 5000) continue;
        const double expect = oracles::sigmoid(
            oracles::session_cell_logodds(p, cell.first, cell.second));
        const double se = std::sqrt(expect * (1.0 - expect) / stats.second);
        CHECK(std::abs(stats.first / stats.second - expect) <= 3.0 * se);
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("within-session trend falls while the aggregate trend rises") {
    SessionGenParams p;
    p.n_sessions = 100000;
    p.seed = 8;

    // the reversal is in the model itself, before any sampling; the exact
    // aggregate mean rises up to the cap, where survivor mass stops shifting
    for (int k = 1; k < p.max_len - 1; ++k)
        CHECK(oracles::session_aggregate_mean(p, k + 1) > oracles::session_aggregate_mean(p, k));
    for (int len = 2; len <= p.max_len; ++len)
        for (int k = 1; k < len; ++k)
            CHECK(oracles::sigmoid(oracles::session_cell_logodds(p, k + 1, len)) <
                  oracles::sigmoid(oracles::session_cell_logodds(p, k, len)));

    const Dataset d = gen_sessions(p);
    const auto pos = d.column("position");
    const auto len = d.column("session_length");
    const auto acc = d.outcome();

    // aggregate empirical acceptance increases over the well-populated positions
    std::map<int, std::pair<double, double>> agg;
    std::map<int, double> session_count;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        auto& a = agg[static_cast<int>(pos[i])];
        a.first += acc[i];
        a.second += 1.0;
        if (pos[i] == 1.0) session_count[static_cast<int>(len[i])] += 1.0;
    }
    for (int k = 1; k <= 3; ++k) {
        const double mk = agg[k].first / agg[k].second;
        const double mk1 = agg[k + 1].first / agg[k + 1].second;
        CHECK(mk1 > mk);
    }

    // per-length empirical acceptance decreases in position for lengths with
    // at least 1000 sessions
    std::map<std::pair<int, int>, std::pair<double, double>> cells;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        auto& c = cells[{static_cast<int>(len[i]), static_cast<int>(pos[i])}];
        c.first += acc[i];
        c.second += 1.0;
    }
    for (const auto& [length, count] : session_count) {
        if (count < 1000.0 || length < 2) continue;
        for (int k = 1; k < length; ++k) {
            const auto& a = cells[{length, k}];
            const auto& b = cells[{length, k + 1}];
            CHECK(b.first / b.second < a.first / a.second);
        }
    }
}

TEST_CASE("session parameter validation") {
    SessionGenParams p;
    p.p_continue = 1.5;
    CHECK_THROWS_AS(gen_sessions(p), Error);
    p = SessionGenParams{};
    p.n_sessions = 0;
    CHECK_THROWS_AS(gen_sessions(p), Error);
    p = SessionGenParams{};
    p.between_offset = 10.0;  // saturates the longest-session cells
    CHECK_THROWS_AS(gen_sessions(p), Error);
    p = SessionGenParams{};
    p.base_accept = 1.0;
    CHECK_THROWS_AS(gen_sessions(p), Error);
}

TEST_CASE("grouped reversal: within-group rise, aggregate fall") {
    ReversalGenParams p;
    p.n_per_group = 50000;
    p.seed = 3;

    // quadrature oracle: the population aggregate association is negative,
    // and the pooled conditional mean falls across the between-group gap
    CHECK(oracles::reversal_population_cov(p) < 0.0);
    CHECK(oracles::reversal_conditional_mean(p, 2.5) <
          oracles::reversal_conditional_mean(p, 0.5));

    const Dataset d = gen_reversal(p);
    const auto x = d.column("x_p");
    const auto g = d.column("group");
    const auto y = d.outcome();
    const FitResult agg = fit_logistic(x, y);
    CHECK(trend_sign(agg, 0.05).value == -1);

    for (int grp = 0; grp <= 1; ++grp) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            if (g[i] == grp) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        }
        CHECK(trend_sign(fit_logistic(xs, ys), 0.05).value == 1);
    }
}

TEST_CASE("single group: aggregate and within-group trends agree") {
    ReversalGenParams p;
    p.n_per_group = 20000;
    p.group_centers = {0.0};
    p.group_offsets = {0.5};
    p.seed = 12;
    const Dataset d = gen_reversal(p);
    const FitResult agg = fit_logistic(d.column("x_p"), d.outcome());
    CHECK(trend_sign(agg, 0.05).value == 1);
}

TEST_CASE("reversal parameter validation") {
    ReversalGenParams p;
    p.group_offsets = {1.0};  // length mismatch with two centers
    CHECK_THROWS_AS(gen_reversal(p), Error);
    p = ReversalGenParams{};
    p.n_per_group = 0;
    CHECK_THROWS_AS(gen_reversal(p), Error);
}

TEST_CASE("null generator") {
    CHECK_THROWS_AS(gen_null(0, 3, 1), Error);
    CHECK_THROWS_AS(gen_null(100, 1, 1), Error);
    const Dataset d = gen_null(5000, 3, 2);
    CHECK(d.column_names() ==
          std::vector<std::string>{"x1", "x2", "x3", "outcome"});
    double ybar = 0.0;
    for (double v : d.outcome()) ybar += v;
    ybar /= static_cast<double>(d.n_rows());
    CHECK(ybar > 0.45);
    CHECK(ybar < 0.55);
    CHECK(std::abs(pearson_correlation(d.column("x1"), d.column("x2"))) < 0.05);
}

TEST_CASE("majority mask: group shares and per-group trends") {
    const Dataset d = gen_majority_mask(1);
    const auto c = d.column("c");
    const auto x = d.column("x_p");
    const auto y = d.outcome();
    double majority = 0.0;
    for (double v : c)
        if (v == 1.0) majority += 1.0;
    majority /= static_cast<double>(d.n_rows());
    CHECK(majority > 0.63);
    CHECK(majority < 0.67);

    for (int grp = 1; grp <= 3; ++grp) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            if (c[i] == grp) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        }
        const int sign = trend_sign(fit_logistic(xs, ys), 0.05).value;
        CHECK(sign == (grp == 1 ? -1 : 1));
    }
}

TEST_CASE("balanced mask groups remove the majority-mask contrast") {
    // with equal group masses the pooled two-predictor fit and the per-bin
    // sign average point the same way
    MajorityMaskParams p;
    p.p_majority = 1.0 / 3.0;
    p.seed = 6;
    const Dataset d = gen_majority_mask(p);
    const MultiFitResult multi =
        fit_logistic_multivariate(d.column("x_p"), d.column("c"), d.outcome());
    CHECK(multi.beta_p > 0.0);
    CHECK(multi.p_value_beta_p < 0.05);

    ScanConfig cfg;
    const PairEvaluation ev = evaluate_pair(d, "x_p", "c", cfg);
    CHECK(ev.mean_disagg_sign > 0.0);
    CHECK(ev.aggregate_sign.value == 1);
}

TEST_CASE("metadata records the generator recipe") {
    const Dataset d = gen_null(10, 2, 99);
    CHECK(d.metadata().at("generator") == "null");
    CHECK(d.metadata().at("seed") == "99");
    CHECK(d.metadata().at("rng") == std::string(Rng::algorithm()));
}

}  // TEST_SUITE
