#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "simpair/dataset.hpp"

namespace simpair {

// Activity-session generator. Session lengths are geometric (each session
// continues with probability p_continue, capped at max_len); a session of
// length L emits one row per position k = 1..L. The outcome is Bernoulli with
// log-odds
//     logit(base_accept) + within_slope*(k-1) + between_offset*(L-1),
// so the trend is downward within every session length while longer sessions
// sit higher, and short sessions drop out of late positions. Columns:
// position, session_length, accepted.
struct SessionGenParams {
    std::size_t n_sessions = 100000;
    double p_continue = 0.5;
    int max_len = 8;
    double base_accept = 0.2;
    double within_slope = -0.3;
    double between_offset = 0.5;
    std::uint64_t seed = 1;
};
Dataset gen_sessions(const SessionGenParams& p);

// Generic two-mechanism reversal: group g draws x_p ~ Normal(center_g, 1) and
// the outcome is Bernoulli with log-odds offset_g + within_slope * x_p.
// Columns: x_p, group, outcome.
struct ReversalGenParams {
    std::size_t n_per_group = 50000;
    std::vector<double> group_centers{0.0, 3.0};
    std::vector<double> group_offsets{2.0, -2.0};
    double within_slope = 0.5;
    std::uint64_t seed = 1;
};
Dataset gen_reversal(const ReversalGenParams& p);

// Null model for false-positive calibration: m_vars mutually independent
// uniform columns x1..x<m)>, outcome Bernoulli(0.5) independent of all of
// them. Columns: x1..xm, outcome.
Dataset gen_null(std::size_t n, std::size_t m_vars, std::uint64_t seed);

// Majority-mass construction: conditioning variable c = 1 carries p_majority
// of the rows with a decreasing outcome trend in x_p; c = 2 and c = 3 split
// the rest with increasing trends. A pooled two-predictor fit follows the
// majority while the per-bin sign average points the other way. Columns:
// x_p, c, outcome.
struct MajorityMaskParams {
    std::size_t n_rows = 100000;
    double p_majority = 0.65;
    double majority_slope = -0.6;
    double minority_slope = 0.6;
    double x_half_range = 1.5;  // x_p ~ Uniform(-x_half_range, x_half_range)
    std::uint64_t seed = 1;
};
Dataset gen_majority_mask(const MajorityMaskParams& p);
Dataset gen_majority_mask(std::uint64_t seed);

}  // namespace simpair
