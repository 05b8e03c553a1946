#include "marcopolo/cycle_learner.hpp"

#include <cmath>

#include "marcopolo/graph_analysis.hpp"
#include "marcopolo/polytope.hpp"

namespace marcopolo {

LockInPlan lock_in_plan(const CycleLearnerConfig& cfg, const Dmdp& m, std::uint64_t enum_cap) {
    m.check_state(cfg.anchor);
    m.check_state(cfg.start_state);
    if (cfg.k < 1)
        throw InputError("lock_in_plan: cycle length must be at least 1");
    if (cfg.start_round < 1)
        throw InputError("lock_in_plan: start round must be at least 1");
    if (cfg.path_length < 0)
        throw InputError("lock_in_plan: path length must be nonnegative");

    LockInPlan plan;

    // Canonical reference cycle: lexicographically smallest member.
    {
        const auto feasible_count = count_cycles(m, cfg.k, cfg.anchor);
        if (feasible_count == 0)
            throw ConfigError("lock_in_plan: no cycle of the requested length at the anchor");
        CycleSet all = enumerate_cycles(m, cfg.k, cfg.anchor, enum_cap);
        plan.reference_cycle = all.cycles.front();
    }

    plan.k_prime = static_cast<int>((cfg.start_round + cfg.path_length - 1) % cfg.k) + 1;
    plan.k_double_prime = (cfg.k - plan.k_prime + 1) % cfg.k;

    // States visited by the reference cycle: sigma[i] at phase i+1, sigma[0]
    // being the anchor.
    std::vector<State> sigma(static_cast<std::size_t>(cfg.k));
    {
        State s = cfg.anchor;
        for (int i = 0; i < cfg.k; ++i) {
            sigma[static_cast<std::size_t>(i)] = s;
            s = m.step(s, plan.reference_cycle[static_cast<std::size_t>(i)]);
        }
    }
    const State target = sigma[static_cast<std::size_t>(plan.k_prime - 1)];

    auto path = fixed_length_path(m, cfg.start_state, target, cfg.path_length);
    if (!path)
        throw ConfigError("lock_in_plan: no action sequence of exactly the uniform length "
                          "from the start state to the reference cycle's phase state");
    plan.path = std::move(*path);

    // Finish the reference cycle from phase k' to close at the anchor.
    if (plan.k_double_prime > 0)
        plan.padding.assign(plan.reference_cycle.begin() + (plan.k_prime - 1),
                            plan.reference_cycle.end());
    return plan;
}

CycleLearnerResult run_cycle_learner(const CycleLearnerConfig& cfg, const Dmdp& m,
                                     const RewardSequence& rewards, VertexHedgeBlo& blo,
                                     Rng& rng) {
    if (cfg.rounds_budget < 0)
        throw InputError("run_cycle_learner: negative rounds budget");
    if (blo.index().cycle_len() != cfg.k || blo.cycles().anchor != cfg.anchor)
        throw InputError("run_cycle_learner: BLO engine built for a different (k, anchor)");
    if (cfg.start_round + cfg.rounds_budget - 1 > rewards.horizon())
        throw InputError("run_cycle_learner: budget exceeds the reward horizon");

    const LockInPlan plan = lock_in_plan(cfg, m);

    CycleLearnerResult result;
    result.final_state = cfg.start_state;
    result.per_round_rewards.reserve(static_cast<std::size_t>(cfg.rounds_budget));

    State s = cfg.start_state;
    Round local = 1; // offset from start_round; round `local` is global start_round+local-1

    auto play = [&](Action a) {
        const Round t = cfg.start_round + local - 1;
        const double r = rewards.at(t, s, a);
        result.per_round_rewards.push_back(r);
        result.total_reward += r;
        s = m.step(s, a);
        result.final_state = s;
        ++local;
        return r;
    };

    // Lock-in: d path actions, then k'' padding actions. Rewards accumulate
    // but produce no learning signal.
    for (Action a : plan.path) {
        if (local > cfg.rounds_budget)
            return result;
        play(a);
    }
    for (Action a : plan.padding) {
        if (local > cfg.rounds_budget)
            return result;
        play(a);
    }

    // Epochs of exactly k rounds; a truncated final epoch gets no feedback.
    while (local <= cfg.rounds_budget) {
        const FlowPoint proposal = blo.propose();
        const VertexDistribution theta = decompose(proposal, m, blo.index(), cfg.anchor);
        const std::vector<Action>& cycle = sample_cycle(theta, rng);

        double epoch_reward = 0.0;
        bool completed = true;
        for (int i = 0; i < cfg.k; ++i) {
            if (local > cfg.rounds_budget) {
                completed = false;
                break;
            }
            epoch_reward += play(cycle[static_cast<std::size_t>(i)]);
        }
        if (!completed)
            break;
        blo.feedback(cycle, epoch_reward);
        ++result.epochs_played;
    }
    return result;
}

double eval_cycle_learner_bound(double max_cycle_len, int num_states, int num_actions, std::int64_t T,
                       int d) {
    if (max_cycle_len <= 0.0 || num_states < 1 || num_actions < 1 || d < 0)
        throw InputError("eval_cycle_learner_bound: positive arguments required");
    if (T < 2)
        throw InputError("eval_cycle_learner_bound: horizon must be at least 2");
    const double na = static_cast<double>(num_states) * num_actions;
    return 4.0 * max_cycle_len * max_cycle_len * std::pow(na, 1.5) *
               std::sqrt(static_cast<double>(T) * std::log(static_cast<double>(T))) +
           (2.0 * max_cycle_len + d);
}

} // namespace marcopolo
