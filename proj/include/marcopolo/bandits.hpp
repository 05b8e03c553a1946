#pragma once

#include <cstdint>
#include <vector>

#include "marcopolo/polytope.hpp"

namespace marcopolo {

/// Eq-style regret ceiling for the adversarial MAB engine: U*sqrt(7*m*n*ln n).
double eval_exp3_bound(double reward_scale, int num_arms, std::int64_t m);

/// Regret ceiling for the bandit linear optimizer: 4*U*dim^{3/2}*sqrt(m*ln m).
double eval_blo_bound(double reward_scale, int dim, std::int64_t m);

/// Exponential-weights adversarial bandit over finitely many arms, tuned for
/// a known horizon: gamma = min{1, sqrt(n*ln n / ((e-1)*m))}. Rewards must be
/// pre-scaled to [0,1] by the caller. Strict select -> update cycle.
class Exp3 {
public:
    Exp3(int num_arms, std::int64_t horizon);

    // Direct parameterization, mainly for diagnostics and tests.
    Exp3(int num_arms, double gamma, std::vector<double> initial_weights);

    int num_arms() const { return num_arms_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& weights() const { return weights_; }

    // p_i = (1-gamma) * w_i / sum(w) + gamma / n; always sums to 1.
    std::vector<double> probabilities() const;

    int select(Rng& rng);
    void update(int arm, double reward01);

private:
    int num_arms_;
    double gamma_;
    std::vector<double> weights_;
    int last_arm_ = -1;
    double last_prob_ = 0.0;
};

/// Bandit linear optimization over the cycle polytope, implemented as an
/// exponential-weights hedge on the enumerated vertex set with uniform
/// exploration mixing. Feedback builds an importance-weighted estimate
/// through the pseudo-inverse of the sampling distribution's second-moment
/// matrix, so it is unbiased on the span of the vertices.
class VertexHedgeBlo {
public:
    VertexHedgeBlo(const Dmdp& m, int k, State anchor, std::int64_t horizon,
                   double reward_scale, std::uint64_t enum_cap = 1'000'000);

    const CycleSet& cycles() const { return cycles_; }
    const TripletIndex& index() const { return index_; }
    int num_vertices() const { return static_cast<int>(cycles_.cycles.size()); }
    double gamma() const { return gamma_; }
    double eta() const { return eta_; }
    double reward_scale() const { return reward_scale_; }

    // Hedge weights mixed with gamma-uniform exploration; sums to 1.
    std::vector<double> sampling_probabilities() const;

    // Mean point of the sampling distribution; always a polytope member.
    FlowPoint propose() const;

    // Scalar bandit feedback for the cycle that was actually played.
    void feedback(const std::vector<Action>& played_cycle, double epoch_reward);

    // Estimated per-vertex rewards from one observation; exposed for the
    // estimator's unbiasedness checks.
    std::vector<double> estimate_vertex_rewards(int played_index, double epoch_reward) const;

    int vertex_index(const std::vector<Action>& cycle) const;

private:
    TripletIndex index_;
    CycleSet cycles_;
    std::vector<std::vector<double>> vertices_; // embeddings, one row per cycle
    std::vector<double> weights_;
    double gamma_;
    double eta_;
    double reward_scale_;
};

} // namespace marcopolo
