#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "marcopolo/marcopolo.hpp"
#include "marcopolo/oracle.hpp"

using namespace marcopolo;

TEST_CASE("build_arm_table keeps feasible (k, s) pairs in order") {
    using Arms = std::vector<std::pair<int, State>>;
    CHECK(build_arm_table(fixtures::d2(), 2).arms ==
          Arms{{1, 0}, {1, 1}, {2, 0}, {2, 1}});
    CHECK(build_arm_table(fixtures::dswap(), 2).arms == Arms{{2, 0}, {2, 1}});
    CHECK_THROWS_AS(build_arm_table(fixtures::dswap(), 1), ConfigError);
    CHECK_THROWS_AS(build_arm_table(fixtures::dsplit(), 2), ConfigError);

    // ring4: self-loops at 0 and 3; no length-2 cycle at state 2.
    CHECK(build_arm_table(fixtures::ring4(), 3).arms ==
          Arms{{1, 0}, {1, 3}, {2, 0}, {2, 1}, {2, 3}, {3, 0}, {3, 1}, {3, 2}, {3, 3}});

    // Transient states are excluded even when they carry cycles of the graph.
    CHECK(build_arm_table(fixtures::chain3(), 1).arms == Arms{{1, 2}});
}

TEST_CASE("episode layout follows tau = floor(sqrt(T))") {
    const Dmdp m = fixtures::d2();
    const auto r = fixtures::constant_rewards(m, 100, 1.0);
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 2;
    cfg.horizon = 100;
    cfg.start_state = 0;
    Rng rng(1);
    const auto trace = run_marcopolo(cfg, m, r, rng);
    CHECK(trace.tau == 10);
    CHECK(trace.episodes == 10);
    CHECK(trace.episode_arms.size() == 10);
    CHECK(trace.per_round_rewards.size() == 100);
    CHECK(trace.total_reward == 100.0);
}

TEST_CASE("episode accounting re-sums and leftover rounds are played") {
    const Dmdp m = fixtures::ring4();
    AdversarySpec spec;
    spec.kind = AdversarySpec::Kind::SeededRandom;
    spec.seed = 31;
    const auto r = make_rewards(spec, m, 105);
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 3;
    cfg.horizon = 105;
    cfg.episode_length = 10;
    cfg.start_state = 0;
    Rng rng(4);
    const auto trace = run_marcopolo(cfg, m, r, rng);
    CHECK(trace.tau == 10);
    CHECK(trace.episodes == 10);
    CHECK(trace.per_round_rewards.size() == 105); // 5 leftover rounds

    double episode_sum = 0.0;
    for (double v : trace.episode_rewards)
        episode_sum += v;
    double all = 0.0;
    for (double v : trace.per_round_rewards)
        all += v;
    CHECK(trace.total_reward == doctest::Approx(all).epsilon(1e-12));
    CHECK(all >= episode_sum); // leftovers only add
    for (std::size_t j = 0; j < trace.episode_rewards.size(); ++j) {
        double ep = 0.0;
        for (std::size_t i = 0; i < 10; ++i)
            ep += trace.per_round_rewards[j * 10 + i];
        CHECK(trace.episode_rewards[j] == doctest::Approx(ep).epsilon(1e-12));
    }
}

TEST_CASE("runs are deterministic given config and seed") {
    const Dmdp m = fixtures::d2();
    const auto r = fixtures::indicator_rewards(m, 3000, {{0, 1}});
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 2;
    cfg.horizon = 3000;
    cfg.start_state = 0;

    Rng rng1(12345), rng2(12345), rng3(54321);
    const auto t1 = run_marcopolo(cfg, m, r, rng1);
    const auto t2 = run_marcopolo(cfg, m, r, rng2);
    CHECK(t1.per_round_rewards == t2.per_round_rewards);
    CHECK(t1.episode_arms == t2.episode_arms);

    const auto t3 = run_marcopolo(cfg, m, r, rng3);
    CHECK(t1.per_round_rewards != t3.per_round_rewards); // different randomness
}

TEST_CASE("start state must lie in the closed communicating set") {
    const Dmdp m = fixtures::chain3();
    const auto r = fixtures::constant_rewards(m, 100, 0.5);
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 1;
    cfg.horizon = 100;
    cfg.start_state = 0; // transient
    Rng rng(1);
    CHECK_THROWS_AS(run_marcopolo(cfg, m, r, rng), ConfigError);
}

TEST_CASE("a single feasible arm runs without the bandit layer") {
    const Dmdp m = fixtures::chain3();
    const auto r = fixtures::constant_rewards(m, 100, 0.5);
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 1;
    cfg.horizon = 100;
    cfg.start_state = 2;
    Rng rng(1);
    const auto trace = run_marcopolo(cfg, m, r, rng);
    CHECK(trace.arms.arms.size() == 1);
    CHECK(trace.total_reward == doctest::Approx(50.0).epsilon(1e-12));
    for (int arm : trace.episode_arms)
        CHECK(arm == 0);
}

TEST_CASE("the learner concentrates on the paying arm") {
    // Self-loop at state 0 pays every round; the (k=1, s=0) arm dominates.
    const Dmdp m = fixtures::d2();
    const Round horizon = 100000;
    const auto r = fixtures::indicator_rewards(m, horizon, {{0, 1}});
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 2;
    cfg.horizon = horizon;
    cfg.start_state = 0;
    Rng rng(7);
    const auto trace = run_marcopolo(cfg, m, r, rng);

    // Arm 0 is (1, 0). Count its share over the last quarter of episodes.
    REQUIRE(trace.arms.arms[0] == std::pair<int, State>{1, 0});
    const std::size_t quarter = trace.episode_arms.size() / 4;
    int hits = 0;
    for (std::size_t j = trace.episode_arms.size() - quarter; j < trace.episode_arms.size(); ++j)
        if (trace.episode_arms[j] == 0)
            ++hits;
    CHECK(static_cast<double>(hits) / static_cast<double>(quarter) >= 0.6);
}

TEST_CASE("exp3_baseline replays canonical cycles deterministically inside episodes") {
    const Dmdp m = fixtures::d2();
    const auto r = fixtures::indicator_rewards(m, 2500, {{0, 1}});
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 2;
    cfg.horizon = 2500;
    cfg.start_state = 0;
    Rng rng(9);
    const auto trace = run_exp3_baseline(cfg, m, r, rng);
    CHECK(trace.per_round_rewards.size() == 2500);
    CHECK(trace.episodes == 50);

    // Identical seed gives identical behavior.
    Rng rng2(9);
    const auto again = run_exp3_baseline(cfg, m, r, rng2);
    CHECK(trace.per_round_rewards == again.per_round_rewards);

    // The paying arm (1, 0) plays its self-loop for a full episode: at least
    // one late episode collects the maximum tau reward.
    double best_episode = 0.0;
    for (double v : trace.episode_rewards)
        best_episode = std::max(best_episode, v);
    CHECK(best_episode == doctest::Approx(static_cast<double>(trace.tau)));
}

TEST_CASE("marcopolo regret against the brute-force policy oracle is sane") {
    const Dmdp m = fixtures::d2();
    const Round horizon = 20000;
    const auto r = fixtures::indicator_rewards(m, horizon, {{0, 1}});
    MarcoPoloConfig cfg;
    cfg.max_cycle_length = 2;
    cfg.horizon = horizon;
    cfg.start_state = 0;
    Rng rng(11);
    const auto trace = run_marcopolo(cfg, m, r, rng);
    const auto best = best_policy_bruteforce(m, r, 0, 2);
    const double reg = regret(trace.per_round_rewards, best.total_reward);
    CHECK(best.total_reward == doctest::Approx(static_cast<double>(horizon)));
    CHECK(reg >= 0.0);
    const double ceiling = eval_marcopolo_constant(2, 2, 2) *
                           std::pow(static_cast<double>(horizon), 0.75) *
                           std::sqrt(std::log(static_cast<double>(horizon)));
    CHECK(reg <= ceiling);
    CHECK(reg <= 0.5 * static_cast<double>(horizon)); // far sharper than the bound
}

TEST_CASE("eval_marcopolo_constant arithmetic") {
    CHECK(eval_marcopolo_constant(3, 4, 2) == doctest::Approx(829.0).epsilon(1e-3));
    CHECK(eval_marcopolo_constant(1, 2, 1) == doctest::Approx(14.43).epsilon(1e-3));
    // Increasing the action count moves only the leading term.
    const double lead2 = eval_marcopolo_constant(2, 3, 2) - std::sqrt(7.0 * 6 * std::log(6.0));
    const double lead4 = eval_marcopolo_constant(2, 3, 4) - std::sqrt(7.0 * 6 * std::log(6.0));
    CHECK(lead4 == doctest::Approx(lead2 * std::pow(2.0, 1.5)).epsilon(1e-12));
    CHECK_THROWS_AS(eval_marcopolo_constant(1, 1, 1), InputError);
}
