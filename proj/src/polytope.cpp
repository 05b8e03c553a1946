#include "marcopolo/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace marcopolo {

TripletIndex::TripletIndex(int num_states, int num_actions, int cycle_len)
    : num_states_(num_states), num_actions_(num_actions), cycle_len_(cycle_len) {
    if (num_states_ < 1 || num_actions_ < 1 || cycle_len_ < 1)
        throw InputError("TripletIndex requires positive dimensions");
}

void TripletIndex::check(State s, Action a, int phase) const {
    if (s < 0 || s >= num_states_)
        throw InputError("TripletIndex: state out of range");
    if (a < 0 || a >= num_actions_)
        throw InputError("TripletIndex: action out of range");
    if (phase < 1 || phase > cycle_len_)
        throw InputError("TripletIndex: phase out of range");
}

TripletIndex::Triplet TripletIndex::unflat(int index) const {
    if (index < 0 || index >= dim())
        throw InputError("TripletIndex: flat index out of range");
    const int per_phase = num_states_ * num_actions_;
    Triplet t;
    t.phase = index / per_phase + 1;
    const int rest = index % per_phase;
    t.s = rest / num_actions_;
    t.a = rest % num_actions_;
    return t;
}

namespace {

// reach_back[j][s]: s can reach the anchor in exactly j steps.
std::vector<std::vector<char>> feasibility_layers(const Dmdp& m, int k, State anchor) {
    std::vector<std::vector<char>> feasible(static_cast<std::size_t>(k) + 1,
                                            std::vector<char>(m.num_states(), 0));
    feasible[0][anchor] = 1;
    for (int j = 1; j <= k; ++j)
        for (State s = 0; s < m.num_states(); ++s)
            for (Action a = 0; a < m.num_actions(); ++a)
                if (feasible[j - 1][m.step(s, a)]) {
                    feasible[j][s] = 1;
                    break;
                }
    return feasible;
}

} // namespace

std::uint64_t count_cycles(const Dmdp& m, int k, State anchor) {
    m.check_state(anchor);
    if (k < 1)
        throw InputError("cycle length must be at least 1");

    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    // counts[s] = number of paths of the remaining length from s to anchor.
    std::vector<std::uint64_t> counts(m.num_states(), 0);
    counts[anchor] = 1;
    for (int j = 0; j < k; ++j) {
        std::vector<std::uint64_t> next(m.num_states(), 0);
        for (State s = 0; s < m.num_states(); ++s) {
            std::uint64_t total = 0;
            for (Action a = 0; a < m.num_actions(); ++a) {
                const std::uint64_t c = counts[m.step(s, a)];
                total = (total > kMax - c) ? kMax : total + c;
            }
            next[s] = total;
        }
        counts = std::move(next);
    }
    return counts[anchor];
}

CycleSet enumerate_cycles(const Dmdp& m, int k, State anchor, std::uint64_t cap) {
    m.check_state(anchor);
    if (k < 1)
        throw InputError("cycle length must be at least 1");
    const std::uint64_t size = count_cycles(m, k, anchor);
    if (size > cap)
        throw CapError("enumerate_cycles: cycle set size " + std::to_string(size) +
                       " exceeds cap " + std::to_string(cap));

    const auto feasible = feasibility_layers(m, k, anchor);
    CycleSet set;
    set.k = k;
    set.anchor = anchor;
    if (!feasible[k][anchor])
        return set;

    // DFS with lowest action first: output comes out in lexicographic order
    // and the first cycle found is the canonical one.
    std::vector<Action> current(static_cast<std::size_t>(k));
    std::vector<State> at(static_cast<std::size_t>(k) + 1);
    at[0] = anchor;
    int depth = 0;
    std::vector<Action> next_action(static_cast<std::size_t>(k), 0);
    while (depth >= 0) {
        if (depth == k) {
            set.cycles.push_back(current);
            --depth;
            continue;
        }
        bool advanced = false;
        for (Action a = next_action[depth]; a < m.num_actions(); ++a) {
            const State next = m.step(at[depth], a);
            if (feasible[k - depth - 1][next]) {
                current[depth] = a;
                at[depth + 1] = next;
                next_action[depth] = a + 1;
                ++depth;
                if (depth < k)
                    next_action[depth] = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            next_action[depth] = 0;
            --depth;
        }
    }
    return set;
}

FlowPoint embed_cycle(const Dmdp& m, const TripletIndex& idx, State anchor,
                      const std::vector<Action>& cycle) {
    m.check_state(anchor);
    if (static_cast<int>(cycle.size()) != idx.cycle_len())
        throw InputError("embed_cycle: sequence length differs from index cycle length");
    FlowPoint p;
    p.coords.assign(static_cast<std::size_t>(idx.dim()), 0.0);
    State s = anchor;
    for (int i = 1; i <= idx.cycle_len(); ++i) {
        const Action a = cycle[static_cast<std::size_t>(i - 1)];
        m.check_action(a);
        p.coords[static_cast<std::size_t>(idx.flat(s, a, i))] = 1.0;
        s = m.step(s, a);
    }
    if (s != anchor)
        throw InputError("embed_cycle: action sequence does not return to the anchor");
    return p;
}

MembershipReport check_membership(const FlowPoint& p, const Dmdp& m, const TripletIndex& idx,
                                  State anchor) {
    m.check_state(anchor);
    if (p.coords.size() != static_cast<std::size_t>(idx.dim()))
        throw InputError("check_membership: dimension mismatch");

    MembershipReport report;
    auto violated = [&report](std::string what, double residual) {
        report.violations.push_back({std::move(what), residual});
    };
    const int k = idx.cycle_len();

    for (int i = 0; i < idx.dim(); ++i) {
        const double v = p.coords[static_cast<std::size_t>(i)];
        if (v < -kFlowTolerance) {
            const auto t = idx.unflat(i);
            violated("nonnegativity at (s=" + std::to_string(t.s) + ",a=" + std::to_string(t.a) +
                         ",i=" + std::to_string(t.phase) + ")",
                     -v);
        }
    }

    // Unit outflow at the anchor, phase 1.
    double anchor_out = 0.0;
    for (Action a = 0; a < m.num_actions(); ++a)
        anchor_out += p.coords[static_cast<std::size_t>(idx.flat(anchor, a, 1))];
    if (std::abs(anchor_out - 1.0) > kFlowTolerance)
        violated("unit outflow at anchor, phase 1", std::abs(anchor_out - 1.0));

    // Phase-1 mass vanishes away from the anchor.
    for (State s = 0; s < m.num_states(); ++s) {
        if (s == anchor)
            continue;
        for (Action a = 0; a < m.num_actions(); ++a) {
            const double v = p.coords[static_cast<std::size_t>(idx.flat(s, a, 1))];
            if (std::abs(v) > kFlowTolerance)
                violated("phase-1 zero at (s=" + std::to_string(s) + ",a=" + std::to_string(a) + ")",
                         std::abs(v));
        }
    }

    // Final phase only uses pairs that lead back to the anchor.
    for (State s = 0; s < m.num_states(); ++s) {
        for (Action a = 0; a < m.num_actions(); ++a) {
            if (m.step(s, a) == anchor)
                continue;
            const double v = p.coords[static_cast<std::size_t>(idx.flat(s, a, k))];
            if (std::abs(v) > kFlowTolerance)
                violated("final-phase zero at (s=" + std::to_string(s) + ",a=" + std::to_string(a) +
                             ")",
                         std::abs(v));
        }
    }

    // Flow conservation at every state for phases 2..k.
    for (int i = 2; i <= k; ++i) {
        for (State s = 0; s < m.num_states(); ++s) {
            double inflow = 0.0;
            for (const auto& [ps, pa] : predecessors(m, s))
                inflow += p.coords[static_cast<std::size_t>(idx.flat(ps, pa, i - 1))];
            double outflow = 0.0;
            for (Action a = 0; a < m.num_actions(); ++a)
                outflow += p.coords[static_cast<std::size_t>(idx.flat(s, a, i))];
            if (std::abs(inflow - outflow) > kFlowTolerance)
                violated("flow conservation at (s=" + std::to_string(s) +
                             ",i=" + std::to_string(i) + ")",
                         std::abs(inflow - outflow));
        }
    }

    report.ok = report.violations.empty();
    return report;
}

EpochRewardVector epoch_reward_vector(const RewardSequence& rewards, Round epoch_start,
                                      const TripletIndex& idx) {
    if (epoch_start < 1)
        throw InputError("epoch_reward_vector: epoch start must be at least 1");
    if (epoch_start + idx.cycle_len() - 1 > rewards.horizon())
        throw InputError("epoch_reward_vector: epoch exceeds the reward horizon");
    EpochRewardVector rho;
    rho.coords.assign(static_cast<std::size_t>(idx.dim()), 0.0);
    for (int i = 1; i <= idx.cycle_len(); ++i)
        for (State s = 0; s < idx.num_states(); ++s)
            for (Action a = 0; a < idx.num_actions(); ++a)
                rho.coords[static_cast<std::size_t>(idx.flat(s, a, i))] =
                    rewards.at(epoch_start + i - 1, s, a);
    return rho;
}

double dot(const EpochRewardVector& rho, const FlowPoint& x) {
    if (rho.coords.size() != x.coords.size())
        throw InputError("dot: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        sum += rho.coords[i] * x.coords[i];
    return sum;
}

VertexDistribution decompose(const FlowPoint& p, const Dmdp& m, const TripletIndex& idx,
                             State anchor) {
    const auto membership = check_membership(p, m, idx, anchor);
    if (!membership.ok)
        throw InputError("decompose: input point is not a member of the cycle polytope");

    const int k = idx.cycle_len();
    const auto feasible = feasibility_layers(m, k, anchor);
    std::vector<double> residual = p.coords;
    VertexDistribution dist;

    auto anchor_mass = [&]() {
        double mass = 0.0;
        for (Action a = 0; a < m.num_actions(); ++a)
            mass += residual[static_cast<std::size_t>(idx.flat(anchor, a, 1))];
        return mass;
    };

    const int max_extractions = idx.dim() + 1;
    for (int round = 0; round < max_extractions; ++round) {
        if (anchor_mass() < kFlowTolerance)
            break;

        // Trace one positive-weight closed path, taking the max-coordinate
        // action at each phase (ties to the lowest action index). Only
        // actions from which the path can still close are eligible.
        std::vector<Action> cycle(static_cast<std::size_t>(k));
        std::vector<int> flat_path(static_cast<std::size_t>(k));
        double path_min = std::numeric_limits<double>::infinity();
        State s = anchor;
        for (int i = 1; i <= k; ++i) {
            Action best = -1;
            double best_value = 0.0;
            for (Action a = 0; a < m.num_actions(); ++a) {
                if (!feasible[k - i][m.step(s, a)])
                    continue;
                const double v = residual[static_cast<std::size_t>(idx.flat(s, a, i))];
                if (v > best_value) {
                    best_value = v;
                    best = a;
                }
            }
            if (best < 0)
                throw InternalError("decompose: positive-weight path broke mid-phase");
            cycle[static_cast<std::size_t>(i - 1)] = best;
            flat_path[static_cast<std::size_t>(i - 1)] = idx.flat(s, best, i);
            path_min = std::min(path_min, best_value);
            s = m.step(s, best);
        }
        if (s != anchor)
            throw InternalError("decompose: traced path did not close at the anchor");

        for (int flat : flat_path) {
            double& v = residual[static_cast<std::size_t>(flat)];
            v -= path_min;
            if (v < 0.0)
                v = 0.0; // rounding dust from the subtraction
        }
        dist.cycles.push_back(std::move(cycle));
        dist.weights.push_back(path_min);
    }

    if (anchor_mass() >= kFlowTolerance)
        throw InternalError("decompose: residual mass left after D+1 extractions");
    if (dist.weights.empty())
        throw InternalError("decompose: no vertices extracted from a member point");

    double total = 0.0;
    for (double w : dist.weights)
        total += w;
    for (double& w : dist.weights)
        w /= total;
    return dist;
}

int sample_cycle_index(const VertexDistribution& dist, Rng& rng) {
    if (dist.cycles.empty() || dist.cycles.size() != dist.weights.size())
        throw InputError("sample_cycle_index: malformed distribution");
    return rng.sample_discrete(dist.weights);
}

} // namespace marcopolo
