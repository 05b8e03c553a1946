#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "marcopolo/errors.hpp"

namespace marcopolo {

using State = int;
using Action = int;
using Round = std::int64_t; // rounds are 1-indexed

/// Deterministic MDP skeleton: dense state/action indices and a total
/// transition table. Immutable after construction.
class Dmdp {
public:
    // table[s * num_actions + a] = next state; must be total and in range.
    Dmdp(int num_states, int num_actions, std::vector<State> table);

    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }

    State step(State s, Action a) const {
        check_state(s);
        check_action(a);
        return table_[static_cast<std::size_t>(s) * num_actions_ + a];
    }

    void check_state(State s) const {
        if (s < 0 || s >= num_states_)
            throw InputError("state index out of range");
    }
    void check_action(Action a) const {
        if (a < 0 || a >= num_actions_)
            throw InputError("action index out of range");
    }

private:
    int num_states_;
    int num_actions_;
    std::vector<State> table_;
};

/// Per-round reward tables r_t(s, a) in [0,1], 1 <= t <= horizon. Backed by a
/// closed-form generator so long horizons never materialize T*N*A values.
/// Out-of-range generator values are rejected at evaluation, never clamped.
class RewardSequence {
public:
    using Generator = std::function<double(Round, State, Action)>;

    RewardSequence(Round horizon, int num_states, int num_actions, Generator gen);

    // Eagerly validated dense table, values[(t-1)*N*A + s*A + a].
    static RewardSequence from_table(Round horizon, int num_states, int num_actions,
                                     std::vector<double> values);

    Round horizon() const { return horizon_; }
    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }

    double at(Round t, State s, Action a) const {
        double v = raw(t, s, a);
        if (!(v >= 0.0 && v <= 1.0))
            throw InputError("reward value outside [0,1]");
        return v;
    }

    // Unvalidated value, used by range audits (verify_range).
    double raw(Round t, State s, Action a) const {
        if (t < 1 || t > horizon_)
            throw InputError("round index out of range");
        if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_)
            throw InputError("state/action index out of range");
        return gen_(t, s, a);
    }

private:
    Round horizon_;
    int num_states_;
    int num_actions_;
    Generator gen_;
};

/// Deterministic stationary policy: one action per state.
struct Policy {
    std::vector<Action> action_of;
};

void validate_policy(const Dmdp& m, const Policy& p);

struct TrajectoryStep {
    Round round;
    State state;
    Action action;
    State next_state;
    double reward;
};

struct Trajectory {
    State start_state = 0;
    std::vector<TrajectoryStep> steps;
};

/// Fold of step() over an action sequence; an empty sequence returns start.
State run_action_sequence(const Dmdp& m, State start, std::span<const Action> seq);

/// Exact preimage of s under the transition table, sorted by (state, action).
std::vector<std::pair<State, Action>> predecessors(const Dmdp& m, State s);

/// Where a policy's trajectory from s1 enters its cycle.
/// cycle_length <= N and prefix_rounds <= N always.
struct PolicyCycleInfo {
    int cycle_length;    // k
    int prefix_rounds;   // t*: rounds before the first repeated state
    State entry_state;   // the first state that repeats
    State phase_origin;  // cycle state t* positions behind entry_state
};

PolicyCycleInfo classify_policy_cycle(const Dmdp& m, const Policy& p, State s1);

/// T rounds of the policy from s1; returns the trajectory and its total reward.
std::pair<Trajectory, double> simulate_policy(const Dmdp& m, const Policy& p, State s1,
                                              const RewardSequence& rewards);

} // namespace marcopolo
