#include "marcopolo/dmdp.hpp"

#include <algorithm>
#include <memory>

namespace marcopolo {

Dmdp::Dmdp(int num_states, int num_actions, std::vector<State> table)
    : num_states_(num_states), num_actions_(num_actions), table_(std::move(table)) {
    if (num_states_ < 1 || num_actions_ < 1)
        throw InputError("Dmdp requires at least one state and one action");
    if (table_.size() != static_cast<std::size_t>(num_states_) * num_actions_)
        throw InputError("transition table size must be num_states * num_actions");
    for (State next : table_)
        if (next < 0 || next >= num_states_)
            throw InputError("transition table entry out of range");
}

RewardSequence::RewardSequence(Round horizon, int num_states, int num_actions, Generator gen)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions), gen_(std::move(gen)) {
    if (horizon_ < 1)
        throw InputError("reward horizon must be positive");
    if (num_states_ < 1 || num_actions_ < 1)
        throw InputError("reward sequence needs positive state/action counts");
    if (!gen_)
        throw InputError("reward generator must be callable");
}

RewardSequence RewardSequence::from_table(Round horizon, int num_states, int num_actions,
                                          std::vector<double> values) {
    const std::size_t expected =
        static_cast<std::size_t>(horizon) * num_states * num_actions;
    if (values.size() != expected)
        throw InputError("reward table size must be T * num_states * num_actions");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0))
            throw InputError("reward table contains a value outside [0,1]");
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    const int per_round = num_states * num_actions;
    const int per_state = num_actions;
    return RewardSequence(horizon, num_states, num_actions,
                          [data, per_round, per_state](Round t, State s, Action a) {
                              return (*data)[static_cast<std::size_t>(t - 1) * per_round +
                                             static_cast<std::size_t>(s) * per_state + a];
                          });
}

void validate_policy(const Dmdp& m, const Policy& p) {
    if (p.action_of.size() != static_cast<std::size_t>(m.num_states()))
        throw InputError("policy must assign an action to every state");
    for (Action a : p.action_of)
        m.check_action(a);
}

State run_action_sequence(const Dmdp& m, State start, std::span<const Action> seq) {
    State s = start;
    m.check_state(s);
    for (Action a : seq)
        s = m.step(s, a);
    return s;
}

std::vector<std::pair<State, Action>> predecessors(const Dmdp& m, State s) {
    m.check_state(s);
    std::vector<std::pair<State, Action>> result;
    for (State from = 0; from < m.num_states(); ++from)
        for (Action a = 0; a < m.num_actions(); ++a)
            if (m.step(from, a) == s)
                result.emplace_back(from, a);
    return result;
}

PolicyCycleInfo classify_policy_cycle(const Dmdp& m, const Policy& p, State s1) {
    validate_policy(m, p);
    m.check_state(s1);

    // Walk until a state repeats; at most N+1 visits.
    std::vector<int> first_seen(m.num_states(), -1);
    std::vector<State> visits;
    State s = s1;
    while (first_seen[s] < 0) {
        first_seen[s] = static_cast<int>(visits.size());
        visits.push_back(s);
        s = m.step(s, p.action_of[s]);
    }
    const int entry_index = first_seen[s];
    const int cycle_length = static_cast<int>(visits.size()) - entry_index;
    const int prefix_rounds = entry_index;

    // phase_origin sits prefix_rounds positions behind the entry state on the
    // cycle, so a competitor walking the cycle from it at round 1 is in phase
    // with the policy from round prefix_rounds+1 onward.
    const int back = ((-prefix_rounds) % cycle_length + cycle_length) % cycle_length;
    const State phase_origin = visits[entry_index + back];

    return PolicyCycleInfo{cycle_length, prefix_rounds, s, phase_origin};
}

std::pair<Trajectory, double> simulate_policy(const Dmdp& m, const Policy& p, State s1,
                                              const RewardSequence& rewards) {
    validate_policy(m, p);
    m.check_state(s1);

    Trajectory traj;
    traj.start_state = s1;
    traj.steps.reserve(static_cast<std::size_t>(rewards.horizon()));
    double total = 0.0;
    State s = s1;
    for (Round t = 1; t <= rewards.horizon(); ++t) {
        const Action a = p.action_of[s];
        const State next = m.step(s, a);
        const double r = rewards.at(t, s, a);
        traj.steps.push_back(TrajectoryStep{t, s, a, next, r});
        total += r;
        s = next;
    }
    return {std::move(traj), total};
}

} // namespace marcopolo
