#pragma once

#include <cstdint>
#include <vector>

#include "marcopolo/bandits.hpp"
#include "marcopolo/dmdp.hpp"

namespace marcopolo {

struct CycleLearnerConfig {
    int k = 1;                 // cycle length of the competitor class
    State anchor = 0;          // the class's anchor state
    Round start_round = 1;     // global round at which the learner takes over
    State start_state = 0;     // the state it happens to be in
    Round rounds_budget = 0;   // rounds available to this invocation
    int path_length = 1;       // uniform path length d from the structure analysis
};

/// The phase lock-in prescription: walk `path` (exactly d actions) to the
/// reference cycle's state at phase k', then `padding` (k'' actions) along
/// the reference cycle back to the anchor, entering phase 1 of the epochs.
struct LockInPlan {
    std::vector<Action> reference_cycle; // canonical: lexicographic minimum
    int k_prime = 0;
    int k_double_prime = 0;
    std::vector<Action> path;
    std::vector<Action> padding;
};

LockInPlan lock_in_plan(const CycleLearnerConfig& cfg, const Dmdp& m,
                        std::uint64_t enum_cap = 1'000'000);

struct CycleLearnerResult {
    double total_reward = 0.0;
    State final_state = 0;
    std::vector<double> per_round_rewards;
    std::int64_t epochs_played = 0;
};

/// Runs the fixed-(k, anchor) learner: lock-in, then epochs of exactly k
/// rounds driven by the BLO engine (propose, decompose, sample, play, feed
/// back the epoch's reward sum). Lock-in rewards count toward the total but
/// give no learning signal; a budget-truncated final epoch gives none either.
CycleLearnerResult run_cycle_learner(const CycleLearnerConfig& cfg, const Dmdp& m,
                                     const RewardSequence& rewards, VertexHedgeBlo& blo,
                                     Rng& rng);

/// Regret ceiling for the fixed-(k, anchor) learner over T rounds:
/// 4*L^2*(N*A)^{3/2}*sqrt(T*ln T) + (2L + d).
double eval_cycle_learner_bound(double max_cycle_len, int num_states, int num_actions, std::int64_t T,
                       int d);

} // namespace marcopolo
