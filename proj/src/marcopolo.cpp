#include "marcopolo/marcopolo.hpp"

#include <algorithm>
#include <cmath>

#include "marcopolo/bandits.hpp"
#include "marcopolo/graph_analysis.hpp"
#include "marcopolo/polytope.hpp"

namespace marcopolo {

ArmTable build_arm_table(const Dmdp& m, int max_cycle_length) {
    if (max_cycle_length < 1)
        throw InputError("build_arm_table: max cycle length must be at least 1");
    const auto closed = closed_communicating_set(m);
    if (!closed.weakly_communicating)
        throw ConfigError("build_arm_table: DMDP is not weakly communicating");

    std::vector<char> in_closed(m.num_states(), 0);
    for (State s : closed.closed)
        in_closed[s] = 1;

    ArmTable table;
    for (int k = 1; k <= max_cycle_length; ++k)
        for (State s = 0; s < m.num_states(); ++s)
            if (in_closed[s] && count_cycles(m, k, s) > 0)
                table.arms.emplace_back(k, s);
    if (table.arms.empty())
        throw ConfigError("build_arm_table: no feasible (k, s) arm exists");
    return table;
}

namespace {

struct EpisodePlan {
    Round tau;
    std::int64_t episodes;
    int d;
    ArmTable arms;
};

EpisodePlan prepare_run(const MarcoPoloConfig& cfg, const Dmdp& m, const RewardSequence& rewards) {
    m.check_state(cfg.start_state);
    if (cfg.horizon < 1)
        throw InputError("marcopolo: horizon must be positive");
    if (rewards.horizon() < cfg.horizon)
        throw InputError("marcopolo: reward sequence shorter than the horizon");

    EpisodePlan plan;
    plan.tau = cfg.episode_length.value_or(
        std::max<Round>(1, static_cast<Round>(std::floor(std::sqrt(static_cast<double>(cfg.horizon))))));
    if (plan.tau < 1 || plan.tau > cfg.horizon)
        throw ConfigError("marcopolo: episode length must lie in [1, T]");
    plan.episodes = cfg.horizon / plan.tau;

    const auto closed = closed_communicating_set(m);
    if (!closed.weakly_communicating)
        throw ConfigError("marcopolo: DMDP is not weakly communicating");
    if (std::find(closed.closed.begin(), closed.closed.end(), cfg.start_state) ==
        closed.closed.end())
        throw ConfigError("marcopolo: start state must belong to the closed communicating set");
    const auto d = minimal_uniform_path_length(m, closed.closed);
    if (!d)
        throw ConfigError("marcopolo: no uniform path length exists for the closed set");
    plan.d = *d;

    plan.arms = build_arm_table(m, cfg.max_cycle_length);
    return plan;
}

// Shared by the full algorithm and the canonical-cycle baseline.
template <typename EpisodeRunner>
MarcoPoloTrace run_episodes(const MarcoPoloConfig& cfg, const Dmdp& m,
                            const RewardSequence& rewards, Rng& rng, EpisodeRunner&& episode) {
    const EpisodePlan plan = prepare_run(cfg, m, rewards);
    const int num_arms = static_cast<int>(plan.arms.arms.size());

    MarcoPoloTrace trace;
    trace.tau = plan.tau;
    trace.episodes = plan.episodes;
    trace.uniform_path_length = plan.d;
    trace.arms = plan.arms;
    trace.per_round_rewards.reserve(static_cast<std::size_t>(cfg.horizon));

    // The arm layer degenerates when only one arm is feasible.
    std::optional<Exp3> mab;
    if (num_arms >= 2)
        mab.emplace(num_arms, plan.episodes);

    State current = cfg.start_state;
    Round t = 1;
    int last_arm = 0;
    for (std::int64_t j = 0; j < plan.episodes; ++j) {
        const int arm = mab ? mab->select(rng) : 0;
        last_arm = arm;
        const auto [k, anchor] = plan.arms.arms[static_cast<std::size_t>(arm)];

        CycleLearnerConfig learner_cfg;
        learner_cfg.k = k;
        learner_cfg.anchor = anchor;
        learner_cfg.start_round = t;
        learner_cfg.start_state = current;
        learner_cfg.rounds_budget = plan.tau;
        learner_cfg.path_length = plan.d;

        const CycleLearnerResult result = episode(learner_cfg);
        if (static_cast<Round>(result.per_round_rewards.size()) != plan.tau)
            throw InternalError("marcopolo: episode consumed the wrong number of rounds");

        if (mab)
            mab->update(arm, result.total_reward / static_cast<double>(plan.tau));

        trace.episode_arms.push_back(arm);
        trace.episode_rewards.push_back(result.total_reward);
        trace.per_round_rewards.insert(trace.per_round_rewards.end(),
                                       result.per_round_rewards.begin(),
                                       result.per_round_rewards.end());
        trace.total_reward += result.total_reward;
        current = result.final_state;
        t += plan.tau;
    }

    // Leftover rounds: replay the last arm's canonical cycle, no updates.
    if (t <= cfg.horizon) {
        const auto [k, anchor] = plan.arms.arms[static_cast<std::size_t>(last_arm)];
        const auto canonical = enumerate_cycles(m, k, anchor, cfg.enum_cap).cycles.front();
        int i = 0;
        while (t <= cfg.horizon) {
            const Action a = canonical[static_cast<std::size_t>(i)];
            const double r = rewards.at(t, current, a);
            trace.per_round_rewards.push_back(r);
            trace.total_reward += r;
            current = m.step(current, a);
            ++t;
            i = (i + 1) % k;
        }
    }
    return trace;
}

} // namespace

MarcoPoloTrace run_marcopolo(const MarcoPoloConfig& cfg, const Dmdp& m,
                             const RewardSequence& rewards, Rng& rng) {
    return run_episodes(cfg, m, rewards, rng, [&](const CycleLearnerConfig& learner_cfg) {
        VertexHedgeBlo blo(m, learner_cfg.k, learner_cfg.anchor,
                           std::max<std::int64_t>(1, learner_cfg.rounds_budget / learner_cfg.k),
                           static_cast<double>(learner_cfg.k), cfg.enum_cap);
        return run_cycle_learner(learner_cfg, m, rewards, blo, rng);
    });
}

MarcoPoloTrace run_exp3_baseline(const MarcoPoloConfig& cfg, const Dmdp& m,
                                 const RewardSequence& rewards, Rng& rng) {
    return run_episodes(cfg, m, rewards, rng, [&](const CycleLearnerConfig& learner_cfg) {
        // Deterministic inner play: lock in, then repeat the canonical cycle.
        const LockInPlan plan = lock_in_plan(learner_cfg, m, cfg.enum_cap);
        CycleLearnerResult result;
        result.final_state = learner_cfg.start_state;
        State s = learner_cfg.start_state;
        Round local = 1;
        auto play = [&](Action a) {
            const Round t = learner_cfg.start_round + local - 1;
            const double r = rewards.at(t, s, a);
            result.per_round_rewards.push_back(r);
            result.total_reward += r;
            s = m.step(s, a);
            result.final_state = s;
            ++local;
        };
        for (Action a : plan.path) {
            if (local > learner_cfg.rounds_budget)
                return result;
            play(a);
        }
        for (Action a : plan.padding) {
            if (local > learner_cfg.rounds_budget)
                return result;
            play(a);
        }
        int i = 0;
        while (local <= learner_cfg.rounds_budget) {
            play(plan.reference_cycle[static_cast<std::size_t>(i)]);
            i = (i + 1) % learner_cfg.k;
            if (i == 0)
                ++result.epochs_played;
        }
        return result;
    });
}

double eval_marcopolo_constant(int max_cycle_length, int num_states, int num_actions) {
    if (max_cycle_length < 1 || num_states < 1 || num_actions < 1)
        throw InputError("eval_marcopolo_constant: positive arguments required");
    const double nl = static_cast<double>(num_states) * max_cycle_length;
    if (nl < 2.0)
        throw InputError("eval_marcopolo_constant: N*L must be at least 2");
    const double na = static_cast<double>(num_states) * num_actions;
    return 4.0 * max_cycle_length * max_cycle_length * std::pow(na, 1.5) +
           std::sqrt(7.0 * nl * std::log(nl));
}

} // namespace marcopolo
