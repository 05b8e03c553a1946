#include "marcopolo/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "marcopolo/rng.hpp"

namespace marcopolo {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_pairs(const Dmdp& m, const std::vector<std::pair<State, Action>>& pairs) {
    for (const auto& [s, a] : pairs) {
        m.check_state(s);
        m.check_action(a);
    }
}

bool contains(const std::vector<std::pair<State, Action>>& pairs, State s, Action a) {
    return std::find(pairs.begin(), pairs.end(), std::make_pair(s, a)) != pairs.end();
}

} // namespace

RewardSequence make_rewards(const AdversarySpec& spec, const Dmdp& m, Round horizon) {
    const int n = m.num_states();
    const int na = m.num_actions();

    switch (spec.kind) {
    case AdversarySpec::Kind::Constant: {
        if (!(spec.value >= 0.0 && spec.value <= 1.0))
            throw InputError("constant adversary: value outside [0,1]");
        const double v = spec.value;
        return RewardSequence(horizon, n, na, [v](Round, State, Action) { return v; });
    }
    case AdversarySpec::Kind::Indicator: {
        check_pairs(m, spec.pairs);
        auto pairs = spec.pairs;
        return RewardSequence(horizon, n, na, [pairs](Round, State s, Action a) {
            return contains(pairs, s, a) ? 1.0 : 0.0;
        });
    }
    case AdversarySpec::Kind::PhaseWave: {
        m.check_state(spec.target.first);
        m.check_action(spec.target.second);
        if (spec.period < 1)
            throw InputError("phase_wave adversary: period must be positive");
        const auto target = spec.target;
        const double period = static_cast<double>(spec.period);
        return RewardSequence(horizon, n, na, [target, period](Round t, State s, Action a) {
            if (s != target.first || a != target.second)
                return 0.0;
            return (1.0 + std::sin(2.0 * kPi * static_cast<double>(t) / period)) / 2.0;
        });
    }
    case AdversarySpec::Kind::Switching: {
        check_pairs(m, spec.set_a);
        check_pairs(m, spec.set_b);
        if (spec.block < 1)
            throw InputError("switching adversary: block length must be positive");
        auto set_a = spec.set_a;
        auto set_b = spec.set_b;
        const std::int64_t block = spec.block;
        return RewardSequence(horizon, n, na, [set_a, set_b, block](Round t, State s, Action a) {
            const bool first_set = (((t - 1) / block) % 2) == 0;
            return contains(first_set ? set_a : set_b, s, a) ? 1.0 : 0.0;
        });
    }
    case AdversarySpec::Kind::SeededRandom: {
        const std::uint64_t seed = spec.seed;
        return RewardSequence(horizon, n, na, [seed](Round t, State s, Action a) {
            return hashed_uniform01(seed, static_cast<std::uint64_t>(t),
                                    static_cast<std::uint64_t>(s),
                                    static_cast<std::uint64_t>(a));
        });
    }
    }
    throw InputError("make_rewards: unknown adversary kind");
}

bool verify_range(const RewardSequence& rewards, std::int64_t sample_budget,
                  std::uint64_t probe_seed) {
    if (sample_budget < 0)
        throw InputError("verify_range: negative sample budget");
    Rng rng(probe_seed);
    const auto horizon = static_cast<std::uint64_t>(rewards.horizon());
    for (std::int64_t i = 0; i < sample_budget; ++i) {
        const Round t = static_cast<Round>(rng.next_u64() % horizon) + 1;
        const State s = static_cast<State>(rng.next_u64() %
                                           static_cast<std::uint64_t>(rewards.num_states()));
        const Action a = static_cast<Action>(rng.next_u64() %
                                             static_cast<std::uint64_t>(rewards.num_actions()));
        const double v = rewards.raw(t, s, a);
        if (!(v >= 0.0 && v <= 1.0))
            return false;
    }
    return true;
}

} // namespace marcopolo
