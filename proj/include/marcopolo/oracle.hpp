#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "marcopolo/dmdp.hpp"

namespace marcopolo {

/// Best fixed cycle for a (k, anchor) arm over num_epochs epochs whose first
/// epoch starts at round phase_start: aggregates per-phase reward weights and
/// finds the maximum-weight closed path of length k by layered DP. Ties break
/// toward the lowest action index per layer, so the lexicographic-minimum
/// optimal cycle is returned along with its exact total reward.
std::pair<std::vector<Action>, double> best_cycle_dp(const Dmdp& m, const RewardSequence& rewards,
                                                     int k, State anchor, Round phase_start,
                                                     std::int64_t num_epochs);

struct BestPolicyResult {
    Policy policy;
    double total_reward = 0.0;
};

/// Exhaustive maximum over deterministic policies whose induced cycle length
/// (from s1) is at most max_cycle_length, simulated over the full horizon.
/// Throws CapError when A^N exceeds policy_cap.
BestPolicyResult best_policy_bruteforce(const Dmdp& m, const RewardSequence& rewards, State s1,
                                        int max_cycle_length,
                                        std::uint64_t policy_cap = 1'000'000);

/// Benchmark total minus the learner's realized total; negative values are
/// reported, never clamped.
double regret(std::span<const double> learner_per_round_rewards, double benchmark_total);

} // namespace marcopolo
