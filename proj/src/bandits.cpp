#include "marcopolo/bandits.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace marcopolo {

double eval_exp3_bound(double reward_scale, int num_arms, std::int64_t m) {
    if (reward_scale <= 0.0 || m < 1)
        throw InputError("eval_exp3_bound: positive scale and horizon required");
    if (num_arms < 2)
        throw InputError("eval_exp3_bound: at least two arms required");
    return reward_scale *
           std::sqrt(7.0 * static_cast<double>(m) * num_arms * std::log(num_arms));
}

double eval_blo_bound(double reward_scale, int dim, std::int64_t m) {
    if (reward_scale <= 0.0 || dim < 1)
        throw InputError("eval_blo_bound: positive scale and dimension required");
    if (m < 2)
        throw InputError("eval_blo_bound: horizon must be at least 2");
    return 4.0 * reward_scale * std::pow(static_cast<double>(dim), 1.5) *
           std::sqrt(static_cast<double>(m) * std::log(static_cast<double>(m)));
}

Exp3::Exp3(int num_arms, std::int64_t horizon) : num_arms_(num_arms) {
    if (num_arms_ < 2)
        throw InputError("Exp3 requires at least two arms");
    if (horizon < 1)
        throw InputError("Exp3 requires a positive horizon");
    const double n = static_cast<double>(num_arms_);
    gamma_ = std::min(
        1.0, std::sqrt(n * std::log(n) / ((std::exp(1.0) - 1.0) * static_cast<double>(horizon))));
    weights_.assign(static_cast<std::size_t>(num_arms_), 1.0);
}

Exp3::Exp3(int num_arms, double gamma, std::vector<double> initial_weights)
    : num_arms_(num_arms), gamma_(gamma), weights_(std::move(initial_weights)) {
    if (num_arms_ < 2)
        throw InputError("Exp3 requires at least two arms");
    if (!(gamma_ >= 0.0 && gamma_ <= 1.0))
        throw InputError("Exp3 gamma must lie in [0,1]");
    if (weights_.size() != static_cast<std::size_t>(num_arms_))
        throw InputError("Exp3 needs one weight per arm");
    for (double w : weights_)
        if (!(w > 0.0))
            throw InputError("Exp3 weights must be strictly positive");
}

std::vector<double> Exp3::probabilities() const {
    double total = 0.0;
    for (double w : weights_)
        total += w;
    std::vector<double> p(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i)
        p[i] = (1.0 - gamma_) * weights_[i] / total + gamma_ / num_arms_;
    return p;
}

int Exp3::select(Rng& rng) {
    const auto p = probabilities();
    const int arm = rng.sample_discrete(p);
    last_arm_ = arm;
    last_prob_ = p[static_cast<std::size_t>(arm)];
    return arm;
}

void Exp3::update(int arm, double reward01) {
    if (arm != last_arm_)
        throw InputError("Exp3::update: arm is not the last selected arm");
    if (!(reward01 >= 0.0 && reward01 <= 1.0))
        throw InputError("Exp3::update: reward outside [0,1]");

    const double estimate = reward01 / last_prob_;
    weights_[static_cast<std::size_t>(arm)] *= std::exp(gamma_ * estimate / num_arms_);
    last_arm_ = -1;

    // The sampling distribution is scale invariant; keep weights bounded.
    const double max_w = *std::max_element(weights_.begin(), weights_.end());
    if (max_w > 1e100)
        for (double& w : weights_)
            w /= max_w;
}

VertexHedgeBlo::VertexHedgeBlo(const Dmdp& m, int k, State anchor, std::int64_t horizon,
                               double reward_scale, std::uint64_t enum_cap)
    : index_(m.num_states(), m.num_actions(), k),
      cycles_(enumerate_cycles(m, k, anchor, enum_cap)),
      reward_scale_(reward_scale) {
    if (horizon < 1)
        throw InputError("VertexHedgeBlo requires a positive horizon");
    if (reward_scale_ <= 0.0)
        throw InputError("VertexHedgeBlo requires a positive reward scale");
    if (cycles_.cycles.empty())
        throw InputError("VertexHedgeBlo: empty cycle set, (k, anchor) arm is infeasible");

    vertices_.reserve(cycles_.cycles.size());
    for (const auto& cycle : cycles_.cycles)
        vertices_.push_back(embed_cycle(m, index_, anchor, cycle).coords);
    weights_.assign(cycles_.cycles.size(), 1.0);

    gamma_ = std::min(1.0, std::pow(static_cast<double>(horizon), -1.0 / 3.0));
    eta_ = gamma_ / (reward_scale_ * index_.dim());
}

std::vector<double> VertexHedgeBlo::sampling_probabilities() const {
    double total = 0.0;
    for (double w : weights_)
        total += w;
    const double uniform = 1.0 / static_cast<double>(weights_.size());
    std::vector<double> q(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i)
        q[i] = (1.0 - gamma_) * weights_[i] / total + gamma_ * uniform;
    return q;
}

FlowPoint VertexHedgeBlo::propose() const {
    const auto q = sampling_probabilities();
    FlowPoint mean;
    mean.coords.assign(static_cast<std::size_t>(index_.dim()), 0.0);
    for (std::size_t v = 0; v < vertices_.size(); ++v)
        for (std::size_t i = 0; i < mean.coords.size(); ++i)
            mean.coords[i] += q[v] * vertices_[v][i];
    return mean;
}

int VertexHedgeBlo::vertex_index(const std::vector<Action>& cycle) const {
    const auto it = std::lower_bound(cycles_.cycles.begin(), cycles_.cycles.end(), cycle);
    if (it == cycles_.cycles.end() || *it != cycle)
        throw InputError("VertexHedgeBlo: cycle is not a member of the vertex set");
    return static_cast<int>(it - cycles_.cycles.begin());
}

std::vector<double> VertexHedgeBlo::estimate_vertex_rewards(int played_index,
                                                            double epoch_reward) const {
    if (played_index < 0 || played_index >= num_vertices())
        throw InputError("estimate_vertex_rewards: vertex index out of range");

    const auto q = sampling_probabilities();
    const int nv = num_vertices();
    const int dim = index_.dim();

    // rho_hat = C^+ x(played) * R with C = sum_v q_v x(v) x(v)^T. Work in
    // whichever of the two symmetric forms is smaller: the DxD second-moment
    // matrix or the |V|x|V| Gram matrix W W^T with W = diag(sqrt(q)) X. Both
    // share the nonzero spectrum, so the eigenvalue cutoff means the same.
    Eigen::VectorXd scores(nv);
    constexpr double kEigenvalueFloor = 1e-12;

    if (dim <= nv) {
        Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(dim, dim);
        for (int v = 0; v < nv; ++v) {
            Eigen::Map<const Eigen::VectorXd> x(vertices_[static_cast<std::size_t>(v)].data(), dim);
            second_moment.noalias() += q[static_cast<std::size_t>(v)] * x * x.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(second_moment);
        Eigen::VectorXd inv_values = eig.eigenvalues();
        for (int i = 0; i < inv_values.size(); ++i)
            inv_values[i] = inv_values[i] > kEigenvalueFloor ? 1.0 / inv_values[i] : 0.0;
        Eigen::Map<const Eigen::VectorXd> played(
            vertices_[static_cast<std::size_t>(played_index)].data(), dim);
        const Eigen::VectorXd rho_hat =
            eig.eigenvectors() *
            (inv_values.asDiagonal() * (eig.eigenvectors().transpose() * played)) * epoch_reward;
        for (int v = 0; v < nv; ++v) {
            Eigen::Map<const Eigen::VectorXd> x(vertices_[static_cast<std::size_t>(v)].data(), dim);
            scores[v] = rho_hat.dot(x);
        }
    } else {
        Eigen::MatrixXd X(nv, dim);
        for (int v = 0; v < nv; ++v)
            X.row(v) = Eigen::Map<const Eigen::VectorXd>(
                vertices_[static_cast<std::size_t>(v)].data(), dim);
        Eigen::VectorXd sqrt_q(nv);
        for (int v = 0; v < nv; ++v)
            sqrt_q[v] = std::sqrt(q[static_cast<std::size_t>(v)]);
        const Eigen::MatrixXd W = sqrt_q.asDiagonal() * X;
        const Eigen::MatrixXd gram = W * W.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
        Eigen::VectorXd inv_values = eig.eigenvalues();
        for (int i = 0; i < inv_values.size(); ++i)
            inv_values[i] = inv_values[i] > kEigenvalueFloor ? 1.0 / inv_values[i] : 0.0;
        // C^+ = W^T G^+ G^+ W, hence X C^+ x(played) factors through G twice.
        const Eigen::VectorXd w_played = W * X.row(played_index).transpose();
        const Eigen::VectorXd tmp =
            eig.eigenvectors() *
            (inv_values.asDiagonal() *
             (inv_values.asDiagonal() * (eig.eigenvectors().transpose() * w_played)));
        scores = X * (W.transpose() * tmp) * epoch_reward;
    }

    return std::vector<double>(scores.data(), scores.data() + nv);
}

void VertexHedgeBlo::feedback(const std::vector<Action>& played_cycle, double epoch_reward) {
    if (!(epoch_reward >= 0.0 && epoch_reward <= reward_scale_ + kFlowTolerance))
        throw InputError("VertexHedgeBlo::feedback: reward outside [0, U]");
    const int played = vertex_index(played_cycle);

    const auto estimates = estimate_vertex_rewards(played, epoch_reward);
    for (std::size_t v = 0; v < weights_.size(); ++v) {
        // Heavy-tailed importance-weighted estimates are expected; only the
        // exponent is clipped, to +-30, for numeric safety.
        const double exponent = std::clamp(eta_ * estimates[v], -30.0, 30.0);
        weights_[v] *= std::exp(exponent);
    }

    const double max_w = *std::max_element(weights_.begin(), weights_.end());
    if (max_w > 1e100 || max_w < 1e-100)
        for (double& w : weights_)
            w /= max_w;
}

} // namespace marcopolo
