#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "marcopolo/adversary.hpp"
#include "marcopolo/dmdp.hpp"
#include "marcopolo/graph_analysis.hpp"

namespace marcopolo {

/// A DMDP together with the human-readable names used by the file formats;
/// indices are assigned in declaration order.
struct NamedDmdp {
    Dmdp dmdp;
    std::vector<std::string> state_names;
    std::vector<std::string> action_names;

    State state_index(const std::string& name) const;
    Action action_index(const std::string& name) const;
};

/// Parses the DMDP file format: {"states": [...], "actions": [...],
/// "transitions": [[state, action, next_state], ...]}. Every (state, action)
/// pair must appear exactly once. Throws ParseError with field context.
NamedDmdp parse_dmdp_json(const std::string& text);

/// Parses an adversary spec with names resolved against the DMDP.
AdversarySpec parse_adversary_json(const std::string& text, const NamedDmdp& named);

enum class AlgorithmKind { MarcoPolo, CycleLearner, Exp3Baseline };

struct ExperimentConfig {
    std::string name = "experiment";
    NamedDmdp named;
    AdversarySpec adversary;
    AlgorithmKind algorithm = AlgorithmKind::MarcoPolo;
    int learner_k = 1;        // cycle_learner only
    State learner_anchor = 0; // cycle_learner only
    Round horizon = 1;
    int max_cycle_length = 1;
    std::optional<Round> tau;
    State initial_state = 0;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = ".";
    std::uint64_t max_enum = 1'000'000;
};

/// Parses the experiment config format; unknown fields are errors. A DMDP
/// given as {"file": ...} is resolved relative to base_dir.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir);

struct SeedRunResult {
    std::uint64_t seed = 0;
    double total_reward = 0.0;
    double final_regret = 0.0;
    std::vector<Round> checkpoints;
    std::vector<double> checkpoint_regret;
    std::string csv;
};

struct ExperimentResult {
    std::string name;
    std::string out_dir;
    std::vector<SeedRunResult> per_seed;
    std::string summary_json;
};

/// Runs every seed and renders per-seed CSV traces (checkpoint rows of
/// round, cum_reward, benchmark_cum, regret) plus a summary with regret
/// statistics, the fitted log-log regret-growth exponent and the reference
/// bound values. Deterministic: identical config and seeds give identical
/// bytes.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Structural analysis as JSON: classification flags, closed and transient
/// sets, the uniform path length and feasible arm counts for k <= L.
std::string analyze_json(const NamedDmdp& named, int max_cycle_length);

/// Hindsight optima as JSON: the brute-force best policy (unless the policy
/// space exceeds max_enum and fallback_dp allows skipping it) and the best
/// cycle per feasible arm. Throws CapError when the cap is exceeded and
/// fallback was not allowed.
std::string oracle_json(const NamedDmdp& named, const AdversarySpec& adversary, Round horizon,
                        int max_cycle_length, State start_state, bool fallback_dp,
                        std::uint64_t max_enum);

/// Least-squares slope of ln(max(regret, 1)) against ln t over checkpoints
/// t >= 64; absent when fewer than two such checkpoints exist.
std::optional<double> fit_regret_exponent(const std::vector<Round>& checkpoints,
                                          const std::vector<double>& regrets);

/// Checkpoint schedule {2^i} union {T}.
std::vector<Round> checkpoint_rounds(Round horizon);

/// Random-mixture reconstruction checks for the decomposition machinery on
/// built-in fixtures; returns a JSON report and sets ok accordingly.
std::string decompose_selftest_json(bool& ok);

} // namespace marcopolo
