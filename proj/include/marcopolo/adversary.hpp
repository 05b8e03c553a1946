#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "marcopolo/dmdp.hpp"

namespace marcopolo {

/// Seed-reproducible oblivious adversaries: the whole reward sequence is
/// fixed by the spec before the run and never reacts to the learner.
struct AdversarySpec {
    enum class Kind { Constant, Indicator, PhaseWave, Switching, SeededRandom };

    Kind kind = Kind::Constant;
    double value = 0.5;                               // Constant
    std::vector<std::pair<State, Action>> pairs;      // Indicator
    std::int64_t period = 2;                          // PhaseWave
    std::pair<State, Action> target{0, 0};            // PhaseWave
    std::int64_t block = 1;                           // Switching
    std::vector<std::pair<State, Action>> set_a;      // Switching, odd blocks
    std::vector<std::pair<State, Action>> set_b;      // Switching, even blocks
    std::uint64_t seed = 0;                           // SeededRandom
};

/// Builds the reward sequence a spec describes; identical spec and seed give
/// identical sequences, query order notwithstanding.
RewardSequence make_rewards(const AdversarySpec& spec, const Dmdp& m, Round horizon);

/// Samples (t, s, a) probes uniformly and reports whether every raw value
/// lies in [0,1]. A zero budget is vacuously true.
bool verify_range(const RewardSequence& rewards, std::int64_t sample_budget,
                  std::uint64_t probe_seed = 0x632d5eedULL);

} // namespace marcopolo
