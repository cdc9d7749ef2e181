#include "simpair/synthgen.hpp"

#include <cmath>
#include <string>

#include "simpair/rng.hpp"
#include "simpair/stats.hpp"

namespace simpair {

namespace {

// Log-odds beyond this yield probabilities indistinguishable from 0 or 1 in
// double precision.
constexpr double kMaxLogOdds = 36.0;

std::map<std::string, std::string> gen_metadata(const char* generator, std::uint64_t seed) {
    return {{"generator", generator},
            {"rng", Rng::algorithm()},
            {"seed", std::to_string(seed)}};
}

}  // namespace

Dataset gen_sessions(const SessionGenParams& p) {
    if (p.n_sessions < 1) throw Error("gen_sessions: n_sessions must be positive");
    if (!(p.p_continue > 0.0 && p.p_continue < 1.0))
        throw Error("gen_sessions: p_continue must lie in (0,1)");
    if (!(p.base_accept > 0.0 && p.base_accept < 1.0))
        throw Error("gen_sessions: base_accept must lie in (0,1)");
    if (p.max_len < 1) throw Error("gen_sessions: max_len must be positive");
    if (!std::isfinite(p.within_slope) || !std::isfinite(p.between_offset))
        throw Error("gen_sessions: slopes must be finite");

    const double base = logit(p.base_accept);
    auto cell_logodds = [&](int k, int len) {
        return base + p.within_slope * (k - 1) + p.between_offset * (len - 1);
    };
    // Log-odds are linear in (k, len) over the triangle k <= len, so the
    // extremes sit at its corners.
    for (auto [k, len] : {std::pair{1, 1}, {1, p.max_len}, {p.max_len, p.max_len}}) {
        if (std::abs(cell_logodds(k, len)) > kMaxLogOdds)
            throw Error("gen_sessions: cell probability saturates at position " +
                        std::to_string(k) + ", length " + std::to_string(len));
    }

    Rng lengths = Rng(p.seed).stream(0);
    Rng outcomes = Rng(p.seed).stream(1);
    std::vector<double> position, session_length, accepted;
    position.reserve(p.n_sessions * 2);
    session_length.reserve(p.n_sessions * 2);
    accepted.reserve(p.n_sessions * 2);
    for (std::size_t s = 0; s < p.n_sessions; ++s) {
        int len = 1;
        while (len < p.max_len && lengths.bernoulli(p.p_continue)) ++len;
        for (int k = 1; k <= len; ++k) {
            position.push_back(k);
            session_length.push_back(len);
            accepted.push_back(outcomes.bernoulli(sigmoid(cell_logodds(k, len))) ? 1.0 : 0.0);
        }
    }
    return Dataset({"position", "session_length", "accepted"},
                   {std::move(position), std::move(session_length), std::move(accepted)},
                   "accepted", gen_metadata("sessions", p.seed));
}

Dataset gen_reversal(const ReversalGenParams& p) {
    if (p.n_per_group < 1) throw Error("gen_reversal: n_per_group must be positive");
    if (p.group_centers.empty() || p.group_centers.size() != p.group_offsets.size())
        throw Error("gen_reversal: group_centers and group_offsets must match and be non-empty");
    for (double c : p.group_centers)
        if (!std::isfinite(c)) throw Error("gen_reversal: centers must be finite");
    for (double o : p.group_offsets)
        if (!std::isfinite(o)) throw Error("gen_reversal: offsets must be finite");
    if (!std::isfinite(p.within_slope)) throw Error("gen_reversal: slope must be finite");

    Rng draws = Rng(p.seed).stream(0);
    Rng outcomes = Rng(p.seed).stream(1);
    const std::size_t total = p.n_per_group * p.group_centers.size();
    std::vector<double> x, group, outcome;
    x.reserve(total);
    group.reserve(total);
    outcome.reserve(total);
    for (std::size_t g = 0; g < p.group_centers.size(); ++g) {
        for (std::size_t i = 0; i < p.n_per_group; ++i) {
            const double v = p.group_centers[g] + draws.normal();
            const double logodds = p.group_offsets[g] + p.within_slope * v;
            x.push_back(v);
            group.push_back(static_cast<double>(g));
            outcome.push_back(outcomes.bernoulli(sigmoid(logodds)) ? 1.0 : 0.0);
        }
    }
    return Dataset({"x_p", "group", "outcome"},
                   {std::move(x), std::move(group), std::move(outcome)}, "outcome",
                   gen_metadata("reversal", p.seed));
}

Dataset gen_null(std::size_t n, std::size_t m_vars, std::uint64_t seed) {
    if (n < 1) throw Error("gen_null: n must be positive");
    if (m_vars < 2) throw Error("gen_null: m_vars must be at least 2");

    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < m_vars; ++j) {
        Rng stream = Rng(seed).stream(j);
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = stream.uniform();
        names.push_back("x" + std::to_string(j + 1));
        columns.push_back(std::move(col));
    }
    Rng outcome_stream = Rng(seed).stream(m_vars);
    std::vector<double> outcome(n);
    for (std::size_t i = 0; i < n; ++i)
        outcome[i] = outcome_stream.bernoulli(0.5) ? 1.0 : 0.0;
    names.push_back("outcome");
    columns.push_back(std::move(outcome));
    return Dataset(std::move(names), std::move(columns), "outcome",
                   gen_metadata("null", seed));
}

Dataset gen_majority_mask(const MajorityMaskParams& p) {
    if (p.n_rows < 1) throw Error("gen_majority_mask: n_rows must be positive");
    if (!(p.p_majority > 0.0 && p.p_majority < 1.0))
        throw Error("gen_majority_mask: p_majority must lie in (0,1)");
    if (p.x_half_range <= 0.0)
        throw Error("gen_majority_mask: x_half_range must be positive");
    const double worst = std::max(std::abs(p.majority_slope), std::abs(p.minority_slope)) *
                         p.x_half_range;
    if (worst > kMaxLogOdds)
        throw Error("gen_majority_mask: slopes saturate the outcome probability");

    Rng masks = Rng(p.seed).stream(0);
    Rng draws = Rng(p.seed).stream(1);
    Rng outcomes = Rng(p.seed).stream(2);
    std::vector<double> x(p.n_rows), c(p.n_rows), outcome(p.n_rows);
    const double p_minor = (1.0 - p.p_majority) / 2.0;
    for (std::size_t i = 0; i < p.n_rows; ++i) {
        const double u = masks.uniform();
        const int group = u < p.p_majority ? 1 : (u < p.p_majority + p_minor ? 2 : 3);
        const double v = (2.0 * draws.uniform() - 1.0) * p.x_half_range;
        const double slope = group == 1 ? p.majority_slope : p.minority_slope;
        x[i] = v;
        c[i] = group;
        outcome[i] = outcomes.bernoulli(sigmoid(slope * v)) ? 1.0 : 0.0;
    }
    return Dataset({"x_p", "c", "outcome"},
                   {std::move(x), std::move(c), std::move(outcome)}, "outcome",
                   gen_metadata("majority-mask", p.seed));
}

Dataset gen_majority_mask(std::uint64_t seed) {
    MajorityMaskParams p;
    p.seed = seed;
    return gen_majority_mask(p);
}

}  // namespace simpair
