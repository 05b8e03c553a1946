#include "marcopolo/oracle.hpp"

#include <cmath>
#include <limits>

namespace marcopolo {

std::pair<std::vector<Action>, double> best_cycle_dp(const Dmdp& m, const RewardSequence& rewards,
                                                     int k, State anchor, Round phase_start,
                                                     std::int64_t num_epochs) {
    m.check_state(anchor);
    if (k < 1)
        throw InputError("best_cycle_dp: cycle length must be at least 1");
    if (num_epochs < 1)
        throw InputError("best_cycle_dp: need at least one epoch");
    if (phase_start < 1 || phase_start + num_epochs * k - 1 > rewards.horizon())
        throw InputError("best_cycle_dp: epochs do not fit in the reward horizon");

    // Aggregated weight of committing to (s, a) at phase i across all epochs.
    const int n = m.num_states();
    const int na = m.num_actions();
    std::vector<double> weight(static_cast<std::size_t>(k) * n * na, 0.0);
    for (int i = 0; i < k; ++i)
        for (State s = 0; s < n; ++s)
            for (Action a = 0; a < na; ++a) {
                double sum = 0.0;
                for (std::int64_t j = 0; j < num_epochs; ++j)
                    sum += rewards.at(phase_start + j * k + i, s, a);
                weight[(static_cast<std::size_t>(i) * n + s) * na + a] = sum;
            }

    // value[i][s]: best achievable weight from phase i+1 at state s to a
    // closed path ending at the anchor.
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> value(static_cast<std::size_t>(k) + 1,
                                           std::vector<double>(n, kNegInf));
    value[static_cast<std::size_t>(k)][anchor] = 0.0;
    for (int i = k - 1; i >= 0; --i)
        for (State s = 0; s < n; ++s)
            for (Action a = 0; a < na; ++a) {
                const double next = value[static_cast<std::size_t>(i) + 1][m.step(s, a)];
                if (next == kNegInf)
                    continue;
                const double total = weight[(static_cast<std::size_t>(i) * n + s) * na + a] + next;
                if (total > value[static_cast<std::size_t>(i)][s])
                    value[static_cast<std::size_t>(i)][s] = total;
            }
    if (value[0][anchor] == kNegInf)
        throw InputError("best_cycle_dp: no cycle of the requested length at the anchor");

    // Forward reconstruction, lowest action index first among optimal moves.
    std::vector<Action> cycle;
    cycle.reserve(static_cast<std::size_t>(k));
    State s = anchor;
    for (int i = 0; i < k; ++i) {
        for (Action a = 0; a < na; ++a) {
            const double next = value[static_cast<std::size_t>(i) + 1][m.step(s, a)];
            if (next == kNegInf)
                continue;
            const double total = weight[(static_cast<std::size_t>(i) * n + s) * na + a] + next;
            if (total == value[static_cast<std::size_t>(i)][s]) {
                cycle.push_back(a);
                s = m.step(s, a);
                break;
            }
        }
    }
    if (static_cast<int>(cycle.size()) != k || s != anchor)
        throw InternalError("best_cycle_dp: reconstruction failed");
    return {std::move(cycle), value[0][anchor]};
}

BestPolicyResult best_policy_bruteforce(const Dmdp& m, const RewardSequence& rewards, State s1,
                                        int max_cycle_length, std::uint64_t policy_cap) {
    m.check_state(s1);
    if (max_cycle_length < 1)
        throw InputError("best_policy_bruteforce: max cycle length must be at least 1");
    if (rewards.horizon() < 1)
        throw InputError("best_policy_bruteforce: empty horizon");

    // A^N total policies.
    const int n = m.num_states();
    const int na = m.num_actions();
    std::uint64_t num_policies = 1;
    for (int s = 0; s < n; ++s) {
        if (num_policies > policy_cap / static_cast<std::uint64_t>(na) + 1)
            throw CapError("best_policy_bruteforce: A^N exceeds the policy cap; "
                           "use the cycle oracle instead");
        num_policies *= static_cast<std::uint64_t>(na);
    }
    if (num_policies > policy_cap)
        throw CapError("best_policy_bruteforce: A^N exceeds the policy cap; "
                       "use the cycle oracle instead");

    BestPolicyResult best;
    best.total_reward = -std::numeric_limits<double>::infinity();
    Policy p;
    p.action_of.assign(static_cast<std::size_t>(n), 0);
    for (std::uint64_t code = 0; code < num_policies; ++code) {
        std::uint64_t rest = code;
        for (int s = 0; s < n; ++s) {
            p.action_of[static_cast<std::size_t>(s)] = static_cast<Action>(rest % na);
            rest /= na;
        }
        if (classify_policy_cycle(m, p, s1).cycle_length > max_cycle_length)
            continue;

        double total = 0.0;
        State s = s1;
        for (Round t = 1; t <= rewards.horizon(); ++t) {
            const Action a = p.action_of[static_cast<std::size_t>(s)];
            total += rewards.at(t, s, a);
            s = m.step(s, a);
        }
        if (total > best.total_reward) {
            best.total_reward = total;
            best.policy = p;
        }
    }
    if (best.total_reward == -std::numeric_limits<double>::infinity())
        throw ConfigError("best_policy_bruteforce: no policy within the cycle-length class");
    return best;
}

double regret(std::span<const double> learner_per_round_rewards, double benchmark_total) {
    double learner_total = 0.0;
    for (double r : learner_per_round_rewards)
        learner_total += r;
    return benchmark_total - learner_total;
}

} // namespace marcopolo
