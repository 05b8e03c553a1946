#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "marcopolo/cycle_learner.hpp"
#include "marcopolo/dmdp.hpp"

namespace marcopolo {

struct MarcoPoloConfig {
    int max_cycle_length = 1;             // L
    Round horizon = 1;                    // T
    std::optional<Round> episode_length;  // tau; default floor(sqrt(T))
    State start_state = 0;
    std::uint64_t enum_cap = 1'000'000;
};

/// Feasible (k, s) arms: k in [1, L], s in the closed communicating set,
/// with at least one length-k cycle at s. Deterministic lexicographic order.
struct ArmTable {
    std::vector<std::pair<int, State>> arms;
};

ArmTable build_arm_table(const Dmdp& m, int max_cycle_length);

struct MarcoPoloTrace {
    Round tau = 0;
    std::int64_t episodes = 0;
    int uniform_path_length = 0;          // d used by every episode's lock-in
    ArmTable arms;
    std::vector<int> episode_arms;        // chosen arm index per episode
    std::vector<double> episode_rewards;  // R_j per episode
    std::vector<double> per_round_rewards;
    double total_reward = 0.0;
};

/// The full algorithm: episodes of length tau, an adversarial-bandit layer
/// choosing a (k, s) arm per episode, and a fresh fixed-(k, s) learner run
/// inside each episode from whatever state the previous episode left behind.
/// Rounds after the last full episode replay the last arm's canonical cycle.
MarcoPoloTrace run_marcopolo(const MarcoPoloConfig& cfg, const Dmdp& m,
                             const RewardSequence& rewards, Rng& rng);

/// Leading constant of the T^{3/4}*sqrt(ln T) regret ceiling:
/// 4*L^2*(N*A)^{3/2} + sqrt(7*N*L*ln(N*L)).
double eval_marcopolo_constant(int max_cycle_length, int num_states, int num_actions);

/// Same episode scaffolding with the inner learner replaced by deterministic
/// replay of the chosen arm's canonical cycle; a pure-MAB baseline.
MarcoPoloTrace run_exp3_baseline(const MarcoPoloConfig& cfg, const Dmdp& m,
                                 const RewardSequence& rewards, Rng& rng);

} // namespace marcopolo
