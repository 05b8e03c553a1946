#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "marcopolo/dmdp.hpp"
#include "marcopolo/rng.hpp"

namespace marcopolo {

// Tolerance for all flow-constraint membership and reconstruction checks.
// Everything here is sums and differences of O(D) unit-scale quantities.
inline constexpr double kFlowTolerance = 1e-9;

/// Bijection between (state, action, phase) triplets and flat coordinates of
/// the cycle polytope's ambient space, dimension D = N*A*k. The layout is
/// phase-major: scanning flat indices in increasing order visits phase 1
/// first, so a dot product accumulates epoch rewards in play order.
class TripletIndex {
public:
    TripletIndex(int num_states, int num_actions, int cycle_len);

    int dim() const { return num_states_ * num_actions_ * cycle_len_; }
    int num_states() const { return num_states_; }
    int num_actions() const { return num_actions_; }
    int cycle_len() const { return cycle_len_; }

    // phase is 1-based, in [1, k].
    int flat(State s, Action a, int phase) const {
        check(s, a, phase);
        return (phase - 1) * num_states_ * num_actions_ + s * num_actions_ + a;
    }

    struct Triplet {
        State s;
        Action a;
        int phase;
    };

    Triplet unflat(int index) const;

private:
    void check(State s, Action a, int phase) const;

    int num_states_;
    int num_actions_;
    int cycle_len_;
};

/// The action cycles of length k anchored at a state: every member returns
/// the agent from the anchor back to the anchor.
struct CycleSet {
    int k = 0;
    State anchor = 0;
    std::vector<std::vector<Action>> cycles; // lexicographic order
};

/// A point of the cycle polytope (or a candidate for membership checking).
struct FlowPoint {
    std::vector<double> coords;
};

/// Epoch rewards laid out over the same triplet coordinates.
struct EpochRewardVector {
    std::vector<double> coords;
};

struct ConstraintViolation {
    std::string constraint;
    double residual = 0.0;
};

struct MembershipReport {
    bool ok = false;
    std::vector<ConstraintViolation> violations;
};

/// Convex weights over concrete cycles; weights are positive and sum to one.
struct VertexDistribution {
    std::vector<std::vector<Action>> cycles;
    std::vector<double> weights;
};

/// Number of length-k action cycles at the anchor, saturating at 2^64-1.
std::uint64_t count_cycles(const Dmdp& m, int k, State anchor);

/// Materializes the cycle set in lexicographic order (lowest action first).
/// Throws CapError when the set is larger than cap.
CycleSet enumerate_cycles(const Dmdp& m, int k, State anchor,
                          std::uint64_t cap = 1'000'000);

/// Binary embedding of a cycle: exactly k ones, one per phase, marking the
/// (state, action) visited at that phase.
FlowPoint embed_cycle(const Dmdp& m, const TripletIndex& idx, State anchor,
                      const std::vector<Action>& cycle);

/// Checks the unit-outflow, boundary and flow-conservation constraints within
/// kFlowTolerance; the report lists every violated constraint with residual.
MembershipReport check_membership(const FlowPoint& p, const Dmdp& m, const TripletIndex& idx,
                                  State anchor);

/// Rewards of the k rounds starting at epoch_start, as a coordinate vector:
/// coords(s, a, i) = r_{epoch_start + i - 1}(s, a).
EpochRewardVector epoch_reward_vector(const RewardSequence& rewards, Round epoch_start,
                                      const TripletIndex& idx);

/// Dot product in flat-coordinate (phase-major) order. For a cycle embedding
/// this reproduces the simulated epoch reward sum bit for bit.
double dot(const EpochRewardVector& rho, const FlowPoint& x);

/// Carathéodory decomposition of a polytope point into at most D+1 cycle
/// vertices, by greedy max-coordinate path extraction. Residual mass below
/// kFlowTolerance is discarded and the weights renormalized to sum to one.
VertexDistribution decompose(const FlowPoint& p, const Dmdp& m, const TripletIndex& idx,
                             State anchor);

/// Draws a cycle index from the distribution's weights.
int sample_cycle_index(const VertexDistribution& dist, Rng& rng);

inline const std::vector<Action>& sample_cycle(const VertexDistribution& dist, Rng& rng) {
    return dist.cycles[static_cast<std::size_t>(sample_cycle_index(dist, rng))];
}

} // namespace marcopolo
