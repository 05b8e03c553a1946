#include "marcopolo/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "marcopolo/bandits.hpp"
#include "marcopolo/cycle_learner.hpp"
#include "marcopolo/marcopolo.hpp"
#include "marcopolo/oracle.hpp"
#include "marcopolo/polytope.hpp"

namespace marcopolo {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ParseError(what + ": invalid JSON");
    return j;
}

void require_object(const json& j, const std::string& what) {
    if (!j.is_object())
        throw ParseError(what + ": expected an object");
}

void reject_unknown_fields(const json& j, const std::vector<std::string>& allowed,
                           const std::string& what) {
    for (const auto& item : j.items())
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw ParseError(what + ": unknown field '" + item.key() + "'");
}

const json& require_field(const json& j, const std::string& key, const std::string& what) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ParseError(what + ": missing field '" + key + "'");
    return *it;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::string> parse_name_list(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty())
        throw ParseError(what + ": expected a nonempty array of names");
    std::vector<std::string> names;
    for (const auto& item : j) {
        if (!item.is_string())
            throw ParseError(what + ": names must be strings");
        const std::string name = item.get<std::string>();
        if (std::find(names.begin(), names.end(), name) != names.end())
            throw ParseError(what + ": duplicate name '" + name + "'");
        names.push_back(name);
    }
    return names;
}

} // namespace

State NamedDmdp::state_index(const std::string& name) const {
    const auto it = std::find(state_names.begin(), state_names.end(), name);
    if (it == state_names.end())
        throw ParseError("unknown state name '" + name + "'");
    return static_cast<State>(it - state_names.begin());
}

Action NamedDmdp::action_index(const std::string& name) const {
    const auto it = std::find(action_names.begin(), action_names.end(), name);
    if (it == action_names.end())
        throw ParseError("unknown action name '" + name + "'");
    return static_cast<Action>(it - action_names.begin());
}

NamedDmdp parse_dmdp_json(const std::string& text) {
    const json j = parse_json_text(text, "dmdp");
    require_object(j, "dmdp");
    reject_unknown_fields(j, {"states", "actions", "transitions"}, "dmdp");

    NamedDmdp named{Dmdp(1, 1, {0}), {}, {}};
    named.state_names = parse_name_list(require_field(j, "states", "dmdp"), "dmdp.states");
    named.action_names = parse_name_list(require_field(j, "actions", "dmdp"), "dmdp.actions");

    const int n = static_cast<int>(named.state_names.size());
    const int na = static_cast<int>(named.action_names.size());
    const auto& transitions = require_field(j, "transitions", "dmdp");
    if (!transitions.is_array())
        throw ParseError("dmdp.transitions: expected an array of triples");

    std::vector<State> table(static_cast<std::size_t>(n) * na, -1);
    int row = 0;
    for (const auto& triple : transitions) {
        ++row;
        const std::string where = "dmdp.transitions[" + std::to_string(row) + "]";
        if (!triple.is_array() || triple.size() != 3 || !triple[0].is_string() ||
            !triple[1].is_string() || !triple[2].is_string())
            throw ParseError(where + ": expected [state, action, next_state] names");
        const State s = named.state_index(triple[0].get<std::string>());
        const Action a = named.action_index(triple[1].get<std::string>());
        const State next = named.state_index(triple[2].get<std::string>());
        State& slot = table[static_cast<std::size_t>(s) * na + a];
        if (slot != -1)
            throw ParseError(where + ": duplicate (state, action) pair");
        slot = next;
    }
    for (State s = 0; s < n; ++s)
        for (Action a = 0; a < na; ++a)
            if (table[static_cast<std::size_t>(s) * na + a] == -1)
                throw ParseError("dmdp.transitions: missing pair (" + named.state_names[s] + ", " +
                                 named.action_names[a] + ")");

    named.dmdp = Dmdp(n, na, std::move(table));
    return named;
}

namespace {

std::vector<std::pair<State, Action>> parse_pair_list(const json& j, const NamedDmdp& named,
                                                      const std::string& what) {
    if (!j.is_array())
        throw ParseError(what + ": expected an array of [state, action] pairs");
    std::vector<std::pair<State, Action>> pairs;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_string())
            throw ParseError(what + ": each entry must be a [state, action] name pair");
        pairs.emplace_back(named.state_index(item[0].get<std::string>()),
                           named.action_index(item[1].get<std::string>()));
    }
    return pairs;
}

std::int64_t get_positive_int(const json& j, const std::string& what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 1)
        throw ParseError(what + ": expected a positive integer");
    return j.get<std::int64_t>();
}

} // namespace

AdversarySpec parse_adversary_json(const std::string& text, const NamedDmdp& named) {
    const json j = parse_json_text(text, "adversary");
    require_object(j, "adversary");
    const auto& kind_field = require_field(j, "kind", "adversary");
    if (!kind_field.is_string())
        throw ParseError("adversary.kind: expected a string");
    const std::string kind = kind_field.get<std::string>();

    AdversarySpec spec;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            throw ParseError("adversary.seed: expected an integer");
        spec.seed = j["seed"].get<std::uint64_t>();
    }

    if (kind == "constant") {
        reject_unknown_fields(j, {"kind", "seed", "value"}, "adversary(constant)");
        const auto& v = require_field(j, "value", "adversary(constant)");
        if (!v.is_number())
            throw ParseError("adversary.value: expected a number");
        spec.kind = AdversarySpec::Kind::Constant;
        spec.value = v.get<double>();
    } else if (kind == "indicator") {
        reject_unknown_fields(j, {"kind", "seed", "pairs"}, "adversary(indicator)");
        spec.kind = AdversarySpec::Kind::Indicator;
        spec.pairs = parse_pair_list(require_field(j, "pairs", "adversary(indicator)"), named,
                                     "adversary.pairs");
    } else if (kind == "phase_wave") {
        reject_unknown_fields(j, {"kind", "seed", "period", "target"}, "adversary(phase_wave)");
        spec.kind = AdversarySpec::Kind::PhaseWave;
        spec.period = get_positive_int(require_field(j, "period", "adversary(phase_wave)"),
                                       "adversary.period");
        const auto target = parse_pair_list(json::array({require_field(j, "target",
                                                                       "adversary(phase_wave)")}),
                                            named, "adversary.target");
        spec.target = target.front();
    } else if (kind == "switching") {
        reject_unknown_fields(j, {"kind", "seed", "block", "set1", "set2"},
                              "adversary(switching)");
        spec.kind = AdversarySpec::Kind::Switching;
        spec.block =
            get_positive_int(require_field(j, "block", "adversary(switching)"), "adversary.block");
        spec.set_a = parse_pair_list(require_field(j, "set1", "adversary(switching)"), named,
                                     "adversary.set1");
        spec.set_b = parse_pair_list(require_field(j, "set2", "adversary(switching)"), named,
                                     "adversary.set2");
    } else if (kind == "seeded_random") {
        reject_unknown_fields(j, {"kind", "seed"}, "adversary(seeded_random)");
        spec.kind = AdversarySpec::Kind::SeededRandom;
    } else {
        throw ParseError("adversary.kind: unknown kind '" + kind + "'");
    }
    return spec;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir) {
    const json j = parse_json_text(text, "config");
    require_object(j, "config");
    reject_unknown_fields(j,
                          {"name", "dmdp", "adversary", "algorithm", "horizon",
                           "max_cycle_length", "tau", "initial_state", "seeds", "out_dir",
                           "max_enum"},
                          "config");

    // The DMDP comes first; everything else resolves names against it.
    const auto& dmdp_field = require_field(j, "dmdp", "config");
    require_object(dmdp_field, "config.dmdp");
    reject_unknown_fields(dmdp_field, {"file", "inline"}, "config.dmdp");
    std::string dmdp_text;
    if (dmdp_field.contains("file")) {
        if (dmdp_field.contains("inline"))
            throw ParseError("config.dmdp: give either 'file' or 'inline', not both");
        if (!dmdp_field["file"].is_string())
            throw ParseError("config.dmdp.file: expected a path string");
        std::string path = dmdp_field["file"].get<std::string>();
        if (!path.empty() && path.front() != '/' && !base_dir.empty())
            path = base_dir + "/" + path;
        dmdp_text = read_file(path);
    } else if (dmdp_field.contains("inline")) {
        dmdp_text = dmdp_field["inline"].dump();
    } else {
        throw ParseError("config.dmdp: needs 'file' or 'inline'");
    }

    ExperimentConfig cfg{.named = parse_dmdp_json(dmdp_text)};

    if (j.contains("name")) {
        if (!j["name"].is_string() || j["name"].get<std::string>().empty())
            throw ParseError("config.name: expected a nonempty string");
        cfg.name = j["name"].get<std::string>();
    }

    cfg.adversary = parse_adversary_json(require_field(j, "adversary", "config").dump(), cfg.named);

    const auto& algo = require_field(j, "algorithm", "config");
    if (algo.is_string()) {
        const std::string name = algo.get<std::string>();
        if (name == "marcopolo")
            cfg.algorithm = AlgorithmKind::MarcoPolo;
        else if (name == "exp3_baseline")
            cfg.algorithm = AlgorithmKind::Exp3Baseline;
        else
            throw ParseError("config.algorithm: unknown algorithm '" + name + "'");
    } else if (algo.is_object()) {
        reject_unknown_fields(algo, {"name", "k", "anchor"}, "config.algorithm");
        const auto& name_field = require_field(algo, "name", "config.algorithm");
        if (!name_field.is_string())
            throw ParseError("config.algorithm.name: expected a string");
        const std::string name = name_field.get<std::string>();
        if (name == "cycle_learner") {
            cfg.algorithm = AlgorithmKind::CycleLearner;
            cfg.learner_k = static_cast<int>(
                get_positive_int(require_field(algo, "k", "config.algorithm"), "algorithm.k"));
            const auto& anchor = require_field(algo, "anchor", "config.algorithm");
            if (!anchor.is_string())
                throw ParseError("config.algorithm.anchor: expected a state name");
            cfg.learner_anchor = cfg.named.state_index(anchor.get<std::string>());
        } else if (name == "marcopolo" || name == "exp3_baseline") {
            if (algo.contains("k") || algo.contains("anchor"))
                throw ParseError("config.algorithm: k/anchor only apply to cycle_learner");
            cfg.algorithm = name == "marcopolo" ? AlgorithmKind::MarcoPolo
                                                : AlgorithmKind::Exp3Baseline;
        } else {
            throw ParseError("config.algorithm: unknown algorithm '" + name + "'");
        }
    } else {
        throw ParseError("config.algorithm: expected a string or an object");
    }

    cfg.horizon = get_positive_int(require_field(j, "horizon", "config"), "config.horizon");

    if (cfg.algorithm == AlgorithmKind::CycleLearner) {
        cfg.max_cycle_length = cfg.learner_k;
        if (j.contains("max_cycle_length"))
            cfg.max_cycle_length = static_cast<int>(
                get_positive_int(j["max_cycle_length"], "config.max_cycle_length"));
    } else {
        cfg.max_cycle_length = static_cast<int>(get_positive_int(
            require_field(j, "max_cycle_length", "config"), "config.max_cycle_length"));
    }

    if (j.contains("tau"))
        cfg.tau = get_positive_int(j["tau"], "config.tau");

    const auto& start = require_field(j, "initial_state", "config");
    if (!start.is_string())
        throw ParseError("config.initial_state: expected a state name");
    cfg.initial_state = cfg.named.state_index(start.get<std::string>());

    const auto& seeds = require_field(j, "seeds", "config");
    if (!seeds.is_array() || seeds.empty())
        throw ParseError("config.seeds: expected a nonempty array of integers");
    for (const auto& s : seeds) {
        if (!s.is_number_integer() && !s.is_number_unsigned())
            throw ParseError("config.seeds: entries must be integers");
        cfg.seeds.push_back(s.get<std::uint64_t>());
    }

    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string())
            throw ParseError("config.out_dir: expected a string");
        cfg.out_dir = j["out_dir"].get<std::string>();
    }
    if (j.contains("max_enum"))
        cfg.max_enum = static_cast<std::uint64_t>(get_positive_int(j["max_enum"],
                                                                   "config.max_enum"));
    return cfg;
}

std::vector<Round> checkpoint_rounds(Round horizon) {
    std::vector<Round> rounds;
    for (Round t = 1; t <= horizon && t > 0; t *= 2)
        rounds.push_back(t);
    if (rounds.empty() || rounds.back() != horizon)
        rounds.push_back(horizon);
    return rounds;
}

std::optional<double> fit_regret_exponent(const std::vector<Round>& checkpoints,
                                          const std::vector<double>& regrets) {
    if (checkpoints.size() != regrets.size())
        throw InputError("fit_regret_exponent: size mismatch");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 64)
            continue;
        xs.push_back(std::log(static_cast<double>(checkpoints[i])));
        ys.push_back(std::log(std::max(regrets[i], 1.0)));
    }
    if (xs.size() < 2)
        return std::nullopt;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= static_cast<double>(xs.size());
    mean_y /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
        sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    }
    if (sxx == 0.0)
        return std::nullopt;
    return sxy / sxx;
}

namespace {

struct Benchmark {
    std::string kind;
    double total = 0.0;
    std::vector<double> per_round; // length T
    json detail;                   // oracle-specific extras for the summary
};

// Comparator per-round series for a cycle replayed from its anchor.
std::vector<double> replay_cycle_series(const Dmdp& m, const RewardSequence& rewards,
                                        const std::vector<Action>& cycle, State anchor,
                                        Round from_round, Round to_round) {
    std::vector<double> series(static_cast<std::size_t>(to_round), 0.0);
    State s = anchor;
    std::size_t i = 0;
    for (Round t = from_round; t <= to_round; ++t) {
        const Action a = cycle[i];
        series[static_cast<std::size_t>(t - 1)] = rewards.at(t, s, a);
        s = m.step(s, a);
        i = (i + 1) % cycle.size();
    }
    return series;
}

Benchmark compute_benchmark(const ExperimentConfig& cfg, const RewardSequence& rewards) {
    const Dmdp& m = cfg.named.dmdp;
    Benchmark bench;

    if (cfg.algorithm == AlgorithmKind::CycleLearner) {
        // Comparator class of the fixed-(k, anchor) learner, phase-matched to
        // its post-lock-in epochs.
        const auto closed = closed_communicating_set(m);
        if (!closed.weakly_communicating)
            throw ConfigError("benchmark: DMDP is not weakly communicating");
        const auto d = minimal_uniform_path_length(m, closed.closed);
        if (!d)
            throw ConfigError("benchmark: no uniform path length for the closed set");
        const int k = cfg.learner_k;
        const int k_prime = static_cast<int>((1 + *d - 1) % k) + 1;
        const int k_dprime = (k - k_prime + 1) % k;
        const Round phase_start = 1 + *d + k_dprime;
        const std::int64_t epochs = (cfg.horizon - *d - k_dprime) / k;
        if (epochs < 1)
            throw ConfigError("benchmark: horizon leaves no room for a full epoch");
        auto [cycle, total] =
            best_cycle_dp(m, rewards, k, cfg.learner_anchor, phase_start, epochs);
        bench.kind = "matched_phase_cycle_dp";
        bench.total = total;
        bench.per_round.assign(static_cast<std::size_t>(cfg.horizon), 0.0);
        const auto series = replay_cycle_series(m, rewards, cycle, cfg.learner_anchor, phase_start,
                                                phase_start + epochs * k - 1);
        for (Round t = phase_start; t <= phase_start + epochs * k - 1; ++t)
            bench.per_round[static_cast<std::size_t>(t - 1)] = series[static_cast<std::size_t>(t - 1)];
        bench.detail = json{{"cycle_length", k},
                            {"epochs", epochs},
                            {"phase_start", phase_start}};
        return bench;
    }

    // Full-horizon comparator: the best deterministic policy when the policy
    // space is enumerable, otherwise the best replayed arm cycle.
    try {
        const auto best =
            best_policy_bruteforce(m, rewards, cfg.initial_state, cfg.max_cycle_length,
                                   cfg.max_enum);
        bench.kind = "policy_bruteforce";
        bench.total = best.total_reward;
        bench.per_round.reserve(static_cast<std::size_t>(cfg.horizon));
        State s = cfg.initial_state;
        for (Round t = 1; t <= cfg.horizon; ++t) {
            const Action a = best.policy.action_of[static_cast<std::size_t>(s)];
            bench.per_round.push_back(rewards.at(t, s, a));
            s = m.step(s, a);
        }
        bench.detail = json{{"policy", best.policy.action_of}};
        return bench;
    } catch (const CapError&) {
        // Benchmark: cycle DP only.
    }

    const ArmTable arms = build_arm_table(m, cfg.max_cycle_length);
    double best_total = -1.0;
    std::vector<double> best_series;
    json best_detail;
    for (const auto& [k, anchor] : arms.arms) {
        if (k > cfg.horizon)
            continue;
        auto [cycle, dp_total] = best_cycle_dp(m, rewards, k, anchor, 1, cfg.horizon / k);
        auto series = replay_cycle_series(m, rewards, cycle, anchor, 1, cfg.horizon);
        double total = 0.0;
        for (double r : series)
            total += r;
        if (total > best_total) {
            best_total = total;
            best_series = std::move(series);
            best_detail = json{{"cycle_length", k}, {"anchor", anchor}, {"dp_total", dp_total}};
        }
    }
    if (best_total < 0.0)
        throw ConfigError("benchmark: no feasible comparator cycle fits the horizon");
    bench.kind = "cycle_dp";
    bench.total = best_total;
    bench.per_round = std::move(best_series);
    bench.detail = std::move(best_detail);
    return bench;
}

std::vector<double> run_one_seed(const ExperimentConfig& cfg, const RewardSequence& rewards,
                                 std::uint64_t seed) {
    const Dmdp& m = cfg.named.dmdp;
    Rng rng(seed);
    switch (cfg.algorithm) {
    case AlgorithmKind::MarcoPolo: {
        MarcoPoloConfig mp{cfg.max_cycle_length, cfg.horizon, cfg.tau, cfg.initial_state,
                           cfg.max_enum};
        return run_marcopolo(mp, m, rewards, rng).per_round_rewards;
    }
    case AlgorithmKind::Exp3Baseline: {
        MarcoPoloConfig mp{cfg.max_cycle_length, cfg.horizon, cfg.tau, cfg.initial_state,
                           cfg.max_enum};
        return run_exp3_baseline(mp, m, rewards, rng).per_round_rewards;
    }
    case AlgorithmKind::CycleLearner: {
        const auto closed = closed_communicating_set(m);
        if (!closed.weakly_communicating)
            throw ConfigError("cycle_learner: DMDP is not weakly communicating");
        const auto d = minimal_uniform_path_length(m, closed.closed);
        if (!d)
            throw ConfigError("cycle_learner: no uniform path length for the closed set");
        CycleLearnerConfig lc;
        lc.k = cfg.learner_k;
        lc.anchor = cfg.learner_anchor;
        lc.start_round = 1;
        lc.start_state = cfg.initial_state;
        lc.rounds_budget = cfg.horizon;
        lc.path_length = *d;
        VertexHedgeBlo blo(m, lc.k, lc.anchor,
                           std::max<std::int64_t>(1, cfg.horizon / lc.k),
                           static_cast<double>(lc.k), cfg.max_enum);
        return run_cycle_learner(lc, m, rewards, blo, rng).per_round_rewards;
    }
    }
    throw InternalError("run_one_seed: unknown algorithm");
}

json bounds_json(const ExperimentConfig& cfg, Round tau, std::int64_t episodes, int num_arms,
                 int d) {
    const Dmdp& m = cfg.named.dmdp;
    json b = json::object();
    if (cfg.algorithm == AlgorithmKind::CycleLearner) {
        b["cycle_learner"] = eval_cycle_learner_bound(cfg.learner_k, m.num_states(), m.num_actions(), cfg.horizon, d);
        const int dim = m.num_states() * m.num_actions() * cfg.learner_k;
        const std::int64_t blo_horizon = std::max<std::int64_t>(2, cfg.horizon / cfg.learner_k);
        b["blo"] = eval_blo_bound(cfg.learner_k, dim, blo_horizon);
    } else {
        if (static_cast<std::int64_t>(m.num_states()) * cfg.max_cycle_length >= 2) {
            const double constant =
                eval_marcopolo_constant(cfg.max_cycle_length, m.num_states(), m.num_actions());
            b["marcopolo_constant"] = constant;
            b["marcopolo_ceiling"] = constant *
                                std::pow(static_cast<double>(cfg.horizon), 0.75) *
                                std::sqrt(std::log(static_cast<double>(cfg.horizon)));
        }
        if (num_arms >= 2 && episodes >= 1)
            b["exp3_layer"] = eval_exp3_bound(static_cast<double>(tau), num_arms, episodes);
    }
    return b;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.seeds.empty())
        throw ConfigError("run_experiment: at least one seed is required");
    const Dmdp& m = cfg.named.dmdp;
    const RewardSequence rewards = make_rewards(cfg.adversary, m, cfg.horizon);
    const Benchmark bench = compute_benchmark(cfg, rewards);
    const std::vector<Round> checkpoints = checkpoint_rounds(cfg.horizon);

    std::vector<double> bench_cum(checkpoints.size(), 0.0);
    {
        double cum = 0.0;
        std::size_t next = 0;
        for (Round t = 1; t <= cfg.horizon && next < checkpoints.size(); ++t) {
            cum += bench.per_round[static_cast<std::size_t>(t - 1)];
            while (next < checkpoints.size() && checkpoints[next] == t)
                bench_cum[next++] = cum;
        }
    }

    // Episode parameters for the summary (seed independent).
    Round tau = cfg.horizon;
    std::int64_t episodes = 0;
    int num_arms = 0;
    int d_used = 0;
    {
        const auto closed = closed_communicating_set(m);
        if (closed.weakly_communicating)
            if (const auto d = minimal_uniform_path_length(m, closed.closed))
                d_used = *d;
        if (cfg.algorithm != AlgorithmKind::CycleLearner) {
            tau = cfg.tau.value_or(std::max<Round>(
                1, static_cast<Round>(std::floor(std::sqrt(static_cast<double>(cfg.horizon))))));
            episodes = cfg.horizon / tau;
            num_arms = static_cast<int>(build_arm_table(m, cfg.max_cycle_length).arms.size());
        }
    }

    ExperimentResult result;
    result.name = cfg.name;
    result.out_dir = cfg.out_dir;

    std::vector<double> mean_regret(checkpoints.size(), 0.0);
    for (const std::uint64_t seed : cfg.seeds) {
        const auto per_round = run_one_seed(cfg, rewards, seed);
        if (per_round.size() != static_cast<std::size_t>(cfg.horizon))
            throw InternalError("run_experiment: learner consumed the wrong number of rounds");

        SeedRunResult seed_result;
        seed_result.seed = seed;
        seed_result.checkpoints = checkpoints;

        std::ostringstream csv;
        csv << "round,cum_reward,benchmark_cum,regret\n";
        double cum = 0.0;
        std::size_t next = 0;
        for (Round t = 1; t <= cfg.horizon && next < checkpoints.size(); ++t) {
            cum += per_round[static_cast<std::size_t>(t - 1)];
            while (next < checkpoints.size() && checkpoints[next] == t) {
                const double regret_t = bench_cum[next] - cum;
                seed_result.checkpoint_regret.push_back(regret_t);
                mean_regret[next] += regret_t / static_cast<double>(cfg.seeds.size());
                csv << t << ',' << fmt_double(cum) << ',' << fmt_double(bench_cum[next]) << ','
                    << fmt_double(regret_t) << '\n';
                ++next;
            }
        }
        seed_result.total_reward = cum;
        seed_result.final_regret = bench.total - cum;
        seed_result.csv = csv.str();
        result.per_seed.push_back(std::move(seed_result));
    }

    double mean_final = 0.0, min_final = 0.0, max_final = 0.0;
    json per_seed_final = json::array();
    for (std::size_t i = 0; i < result.per_seed.size(); ++i) {
        const double r = result.per_seed[i].final_regret;
        mean_final += r;
        min_final = i == 0 ? r : std::min(min_final, r);
        max_final = i == 0 ? r : std::max(max_final, r);
        per_seed_final.push_back(r);
    }
    mean_final /= static_cast<double>(result.per_seed.size());

    const auto exponent = fit_regret_exponent(checkpoints, mean_regret);

    json summary;
    summary["name"] = cfg.name;
    summary["algorithm"] = cfg.algorithm == AlgorithmKind::MarcoPolo       ? "marcopolo"
                           : cfg.algorithm == AlgorithmKind::CycleLearner ? "cycle_learner"
                                                                          : "exp3_baseline";
    if (cfg.algorithm == AlgorithmKind::CycleLearner) {
        summary["k"] = cfg.learner_k;
        summary["anchor"] = cfg.named.state_names[static_cast<std::size_t>(cfg.learner_anchor)];
    }
    summary["horizon"] = cfg.horizon;
    summary["max_cycle_length"] = cfg.max_cycle_length;
    summary["initial_state"] =
        cfg.named.state_names[static_cast<std::size_t>(cfg.initial_state)];
    if (cfg.algorithm != AlgorithmKind::CycleLearner) {
        summary["tau"] = tau;
        summary["episodes"] = episodes;
        summary["num_arms"] = num_arms;
    }
    summary["uniform_path_length"] = d_used;
    summary["seeds"] = cfg.seeds;
    summary["benchmark"] = json{{"kind", bench.kind}, {"total", bench.total}};
    if (!bench.detail.is_null())
        summary["benchmark"]["detail"] = bench.detail;
    summary["final_regret"] = json{{"mean", mean_final},
                                   {"min", min_final},
                                   {"max", max_final},
                                   {"per_seed", per_seed_final}};
    if (exponent)
        summary["regret_exponent"] = *exponent;
    else
        summary["regret_exponent"] = nullptr;
    json curve = json::array();
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        curve.push_back(json::array({checkpoints[i], mean_regret[i]}));
    summary["mean_regret_checkpoints"] = curve;
    summary["bounds"] = bounds_json(cfg, tau, episodes, num_arms, d_used);

    result.summary_json = summary.dump(2) + "\n";
    return result;
}

std::string analyze_json(const NamedDmdp& named, int max_cycle_length) {
    const Dmdp& m = named.dmdp;
    const StructureReport report = analyze_structure(m);

    json out;
    out["num_states"] = m.num_states();
    out["num_actions"] = m.num_actions();
    out["weakly_communicating"] = report.weakly_communicating;
    json closed = json::array(), transient = json::array();
    for (State s : report.closed)
        closed.push_back(named.state_names[static_cast<std::size_t>(s)]);
    for (State s : report.transient)
        transient.push_back(named.state_names[static_cast<std::size_t>(s)]);
    out["closed_set"] = closed;
    out["transient_states"] = transient;
    if (report.unichain)
        out["unichain"] = *report.unichain;
    else
        out["unichain"] = nullptr;
    if (report.assumption1_d)
        out["assumption1_d"] = *report.assumption1_d;
    else
        out["assumption1_d"] = nullptr;

    json arms = json::array();
    int count = 0;
    if (report.weakly_communicating) {
        std::vector<char> in_closed(m.num_states(), 0);
        for (State s : report.closed)
            in_closed[s] = 1;
        for (int k = 1; k <= max_cycle_length; ++k)
            for (State s = 0; s < m.num_states(); ++s)
                if (in_closed[s] && count_cycles(m, k, s) > 0) {
                    arms.push_back(json::array(
                        {k, named.state_names[static_cast<std::size_t>(s)]}));
                    ++count;
                }
    }
    out["feasible_arms"] =
        json{{"max_cycle_length", max_cycle_length}, {"count", count}, {"arms", arms}};
    return out.dump(2) + "\n";
}

std::string oracle_json(const NamedDmdp& named, const AdversarySpec& adversary, Round horizon,
                        int max_cycle_length, State start_state, bool fallback_dp,
                        std::uint64_t max_enum) {
    const Dmdp& m = named.dmdp;
    const RewardSequence rewards = make_rewards(adversary, m, horizon);

    json out;
    out["horizon"] = horizon;
    out["max_cycle_length"] = max_cycle_length;
    out["initial_state"] = named.state_names[static_cast<std::size_t>(start_state)];

    try {
        const auto best =
            best_policy_bruteforce(m, rewards, start_state, max_cycle_length, max_enum);
        json actions = json::object();
        for (State s = 0; s < m.num_states(); ++s)
            actions[named.state_names[static_cast<std::size_t>(s)]] =
                named.action_names[static_cast<std::size_t>(
                    best.policy.action_of[static_cast<std::size_t>(s)])];
        out["best_policy"] = json{{"actions", actions}, {"reward", best.total_reward}};
    } catch (const CapError&) {
        if (!fallback_dp)
            throw;
        out["best_policy"] = nullptr;
        out["note"] = "policy space exceeds the enumeration cap; cycle oracle only";
    }

    json arms = json::array();
    try {
        for (const auto& [k, anchor] : build_arm_table(m, max_cycle_length).arms) {
            if (k > horizon)
                continue;
            auto [cycle, total] = best_cycle_dp(m, rewards, k, anchor, 1, horizon / k);
            json actions = json::array();
            for (Action a : cycle)
                actions.push_back(named.action_names[static_cast<std::size_t>(a)]);
            arms.push_back(json{{"k", k},
                                {"state", named.state_names[static_cast<std::size_t>(anchor)]},
                                {"cycle", actions},
                                {"reward", total}});
        }
    } catch (const ConfigError&) {
        // Not weakly communicating or no feasible arm: leave the table empty.
    }
    out["best_cycle_per_arm"] = arms;
    return out.dump(2) + "\n";
}

std::string decompose_selftest_json(bool& ok) {
    ok = true;
    json cases = json::array();
    double worst_error = 0.0;

    // Fixtures: a two-state two-action DMDP with all four transitions, and a
    // four-state ring with self-loops.
    const Dmdp d2(2, 2, {1, 0, 0, 1});
    const Dmdp ring(4, 2, {1, 0, 2, 0, 3, 0, 3, 0});
    struct Case {
        const Dmdp* m;
        const char* label;
        int k;
        State anchor;
    };
    const Case plan[] = {{&d2, "d2", 2, 0},  {&d2, "d2", 3, 0},  {&d2, "d2", 4, 1},
                         {&ring, "ring", 2, 0}, {&ring, "ring", 3, 0}, {&ring, "ring", 4, 2}};

    Rng rng(0x5e1f7e57);
    for (const Case& c : plan) {
        const TripletIndex idx(c.m->num_states(), c.m->num_actions(), c.k);
        const CycleSet cycles = enumerate_cycles(*c.m, c.k, c.anchor);
        if (cycles.cycles.empty())
            continue;
        std::vector<FlowPoint> vertices;
        for (const auto& cycle : cycles.cycles)
            vertices.push_back(embed_cycle(*c.m, idx, c.anchor, cycle));

        double case_error = 0.0;
        int max_support = 0;
        const int trials = 200;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<double> mix(vertices.size());
            double total = 0.0;
            for (double& w : mix) {
                w = -std::log(1.0 - rng.uniform01());
                total += w;
            }
            FlowPoint p;
            p.coords.assign(static_cast<std::size_t>(idx.dim()), 0.0);
            for (std::size_t v = 0; v < vertices.size(); ++v)
                for (std::size_t i = 0; i < p.coords.size(); ++i)
                    p.coords[i] += mix[v] / total * vertices[v].coords[i];

            const VertexDistribution dist = decompose(p, *c.m, idx, c.anchor);
            max_support = std::max(max_support, static_cast<int>(dist.cycles.size()));
            std::vector<double> rebuilt(p.coords.size(), 0.0);
            for (std::size_t v = 0; v < dist.cycles.size(); ++v) {
                const FlowPoint vertex = embed_cycle(*c.m, idx, c.anchor, dist.cycles[v]);
                for (std::size_t i = 0; i < rebuilt.size(); ++i)
                    rebuilt[i] += dist.weights[v] * vertex.coords[i];
            }
            for (std::size_t i = 0; i < rebuilt.size(); ++i)
                case_error = std::max(case_error, std::abs(rebuilt[i] - p.coords[i]));
        }
        const bool case_ok = case_error <= kFlowTolerance && max_support <= idx.dim() + 1;
        ok = ok && case_ok;
        worst_error = std::max(worst_error, case_error);
        cases.push_back(json{{"dmdp", c.label},
                             {"k", c.k},
                             {"anchor", c.anchor},
                             {"vertices", cycles.cycles.size()},
                             {"trials", trials},
                             {"max_error", case_error},
                             {"max_support", max_support},
                             {"ok", case_ok}});
    }

    json out;
    out["ok"] = ok;
    out["tolerance"] = kFlowTolerance;
    out["max_error"] = worst_error;
    out["cases"] = cases;
    return out.dump(2) + "\n";
}

} // namespace marcopolo
