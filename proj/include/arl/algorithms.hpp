#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arl/errors.hpp"
#include "arl/mlp.hpp"
#include "arl/rng.hpp"

namespace arl {

enum class AlgoKind { OneStepQ, OneStepSarsa, NStepQ, A3C, A3CContinuous };

inline AlgoKind parse_algo_kind(const std::string& s) {
    if (s == "q1") return AlgoKind::OneStepQ;
    if (s == "sarsa1") return AlgoKind::OneStepSarsa;
    if (s == "qn") return AlgoKind::NStepQ;
    if (s == "a3c") return AlgoKind::A3C;
    if (s == "a3c_continuous") return AlgoKind::A3CContinuous;
    throw ConfigError("unknown algorithm: " + s);
}

inline const char* algo_kind_name(AlgoKind k) {
    switch (k) {
        case AlgoKind::OneStepQ: return "q1";
        case AlgoKind::OneStepSarsa: return "sarsa1";
        case AlgoKind::NStepQ: return "qn";
        case AlgoKind::A3C: return "a3c";
        case AlgoKind::A3CContinuous: return "a3c_continuous";
    }
    return "?";
}

inline bool is_value_based(AlgoKind k) {
    return k == AlgoKind::OneStepQ || k == AlgoKind::OneStepSarsa || k == AlgoKind::NStepQ;
}

// ---------------------------------------------------------------------------
// Exploration

// Per-thread final exploration rate, drawn once at thread start from a
// small discrete distribution.
struct EpsilonSupport {
    std::array<double, 3> values{0.1, 0.01, 0.5};
    std::array<double, 3> probs{0.4, 0.3, 0.3};

    bool operator==(const EpsilonSupport&) const = default;
};

inline double sample_epsilon_final(Rng& rng, const EpsilonSupport& support) {
    double total = support.probs[0] + support.probs[1] + support.probs[2];
    if (std::fabs(total - 1.0) > 1e-9)
        throw ConfigError("epsilon support probabilities must sum to 1");
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        acc += support.probs[i];
        if (u < acc) return support.values[i];
    }
    return support.values[2];
}

// Exploration rate annealed linearly from 1 to epsilon_final over the first
// anneal_frames global frames, then held.
struct ExplorationPolicy {
    double epsilon_final = 0.1;
    std::int64_t anneal_frames = 4000000;
    int thread_id = 0;

    double at(std::int64_t frame) const {
        const double f = anneal_frames > 0
                             ? std::min(1.0, static_cast<double>(frame) / static_cast<double>(anneal_frames))
                             : 1.0;
        return 1.0 + (epsilon_final - 1.0) * f;
    }
};

inline double epsilon_at(const ExplorationPolicy& policy, std::int64_t frame) {
    return policy.at(frame);
}

// ---------------------------------------------------------------------------
// Hyperparameters shared by the actor-learner loops

struct HyperParams {
    double gamma = 0.99;
    int t_max = 5;
    int i_async_update = 5;              // gradient batching for one-step methods
    std::int64_t target_interval = 40000;  // frames between target refreshes
    double beta = 0.01;                  // entropy weight
    EpsilonSupport epsilon_support;
    std::int64_t anneal_frames = 4000000;
    std::optional<double> clip_norm;
    bool resample_epsilon_each_episode = false;

    bool operator==(const HyperParams&) const = default;
};

// ---------------------------------------------------------------------------
// Action selection helpers (all randomness flows through the caller's rng)

template <typename S>
int argmax_tiebreak(std::span<const S> values, Rng& rng) {
    S best = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) best = std::max(best, values[i]);
    int count = 0;
    for (S v : values)
        if (v == best) ++count;
    if (count == 1) {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] == best) return static_cast<int>(i);
    }
    int pick = std::uniform_int_distribution<int>(0, count - 1)(rng);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == best && pick-- == 0) return static_cast<int>(i);
    return 0;
}

template <typename S>
int epsilon_greedy(std::span<const S> q, double epsilon, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u < epsilon)
        return std::uniform_int_distribution<int>(0, static_cast<int>(q.size()) - 1)(rng);
    return argmax_tiebreak(q, rng);
}

template <typename S>
int sample_categorical(std::span<const S> probs, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += static_cast<double>(probs[i]);
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

// ---------------------------------------------------------------------------
// Targets and returns

template <typename S>
S one_step_q_target(S r, std::span<const S> q_next, bool terminal, S gamma) {
    if (terminal) return r;
    if (q_next.empty()) throw ConfigError("one_step_q_target: empty next-state values");
    S best = q_next[0];
    for (std::size_t i = 1; i < q_next.size(); ++i) best = std::max(best, q_next[i]);
    return r + gamma * best;
}

template <typename S>
S one_step_sarsa_target(S r, S q_next_taken, bool terminal, S gamma) {
    return terminal ? r : r + gamma * q_next_taken;
}

// Backward recurrence R <- r_i + gamma * R seeded with the bootstrap value,
// returned in time order. The bootstrap must be 0 for terminal rollouts.
template <typename S>
std::vector<S> n_step_returns(std::span<const S> rewards, S bootstrap, S gamma) {
    std::vector<S> out(rewards.size());
    S run = bootstrap;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        run = rewards[i] + gamma * run;
        out[i] = run;
    }
    return out;
}

template <typename S>
std::vector<S> n_step_returns(const std::vector<S>& rewards, S bootstrap, S gamma) {
    return n_step_returns(std::span<const S>(rewards), bootstrap, gamma);
}

// ---------------------------------------------------------------------------
// Rollout segment

template <typename S>
struct Trajectory {
    std::vector<std::vector<S>> states;
    std::vector<int> actions;                   // discrete methods
    std::vector<std::vector<S>> actions_cont;   // continuous A3C
    std::vector<S> rewards;
    std::vector<S> final_state;  // observation after the last step
    bool terminal = false;       // targets bootstrap 0 when set

    std::size_t size() const { return rewards.size(); }
    void clear() {
        states.clear();
        actions.clear();
        actions_cont.clear();
        rewards.clear();
        final_state.clear();
        terminal = false;
    }
};

// Policy network plus where the critic lives: the private value head of the
// shared architecture, or a fully separate network for the continuous case.
struct NetPair {
    MLPSpec policy;
    std::optional<MLPSpec> value;  // set iff the critic is a separate network

    std::size_t theta_count() const { return policy.theta_count(); }
    std::size_t theta_v_count() const {
        return value ? value->theta_count() : policy.theta_v_count();
    }
    void validate() const {
        policy.validate();
        if (value) {
            value->validate();
            if (value->head != HeadKind::QValues || value->head_dim() != 1)
                throw ConfigError("separate critic must have a single linear output");
            if (value->input_dim() != policy.input_dim())
                throw ConfigError("policy and critic must read the same observation");
        }
        if (policy.head == HeadKind::GaussianPolicy && !value)
            throw ConfigError("gaussian policy requires a separate critic network");
        if (policy.head == HeadKind::PolicyValueShared && value)
            throw ConfigError("shared policy/value architecture carries its own value head");
    }
};

// ---------------------------------------------------------------------------
// Gradient assembly

// Accumulate d(y - Q(s,a))^2/d theta for one transition into bufs.d_theta.
// Used by the one-step methods (against the live parameters they read at
// that step) and equals the n-step path at length 1.
template <typename S>
void accumulate_q_gradient(const MLPSpec& spec, std::span<const S> theta,
                           std::span<const S> obs, int action, S target,
                           GradientBuffers<S>& bufs) {
    ForwardCache<S> cache;
    auto out = forward<S>(spec, theta, {}, obs, &cache);
    OutputGrads<S> g;
    g.d_q.assign(out.q.size(), S(0));
    const S diff = target - out.q[static_cast<std::size_t>(action)];
    g.d_q[static_cast<std::size_t>(action)] = S(-2) * diff;
    backward_accumulate<S>(spec, theta, {}, cache, g, bufs);
}

template <typename S>
struct UpdateGradients {
    std::vector<S> d_theta;
    std::vector<S> d_theta_v;
    S bootstrap_value{};
    std::vector<S> returns;
};

// n-step Q update: summed d(R_i - Q(s_i,a_i))^2/d theta' over the rollout,
// with the bootstrap taken greedily from the target network.
template <typename S>
UpdateGradients<S> n_step_q_gradients(const Trajectory<S>& traj, const MLPSpec& spec,
                                      std::span<const S> theta_snapshot,
                                      std::span<const S> theta_target, S gamma) {
    if (traj.size() == 0) throw ConfigError("n_step_q_gradients: empty trajectory");
    UpdateGradients<S> out;
    S bootstrap = S(0);
    if (!traj.terminal) {
        auto target_q = forward<S>(spec, theta_target, {}, traj.final_state);
        bootstrap = target_q.q[0];
        for (std::size_t i = 1; i < target_q.q.size(); ++i)
            bootstrap = std::max(bootstrap, target_q.q[i]);
    }
    out.bootstrap_value = bootstrap;
    out.returns = n_step_returns<S>(traj.rewards, bootstrap, gamma);

    GradientBuffers<S> bufs(spec);
    for (std::size_t i = 0; i < traj.size(); ++i)
        accumulate_q_gradient<S>(spec, theta_snapshot, traj.states[i], traj.actions[i],
                                 out.returns[i], bufs);
    out.d_theta = std::move(bufs.d_theta);
    out.d_theta_v = std::move(bufs.d_theta_v);
    return out;
}

// Actor-critic update. d_theta is the ascent gradient of
//   sum_i [ log pi(a_i|s_i) * (R_i - V(s_i)) + beta * H(pi(s_i)) ]
// with the advantage treated as a constant; d_theta_v is the descent
// gradient of sum_i (R_i - V(s_i))^2 with respect to the critic parameters
// (the private value head, or the whole separate critic network).
template <typename S>
UpdateGradients<S> a3c_gradients(const Trajectory<S>& traj, const NetPair& nets,
                                 std::span<const S> theta_snapshot,
                                 std::span<const S> thetav_snapshot, S beta, S gamma) {
    if (traj.size() == 0) throw ConfigError("a3c_gradients: empty trajectory");
    const bool shared = nets.policy.head == HeadKind::PolicyValueShared;
    if (!shared && nets.policy.head != HeadKind::GaussianPolicy)
        throw ConfigError("a3c_gradients: policy head must be softmax or gaussian");

    auto value_of = [&](std::span<const S> obs) -> S {
        if (shared)
            return forward<S>(nets.policy, theta_snapshot, thetav_snapshot, obs).value;
        return forward<S>(*nets.value, thetav_snapshot, {}, obs).q[0];
    };

    UpdateGradients<S> out;
    out.bootstrap_value = traj.terminal ? S(0) : value_of(traj.final_state);
    out.returns = n_step_returns<S>(traj.rewards, out.bootstrap_value, gamma);

    GradientBuffers<S> policy_bufs(nets.policy);
    GradientBuffers<S> critic_bufs = shared ? GradientBuffers<S>(nets.policy)
                                            : GradientBuffers<S>(*nets.value);

    for (std::size_t i = 0; i < traj.size(); ++i) {
        ForwardCache<S> cache;
        auto fwd = forward<S>(nets.policy, theta_snapshot,
                              shared ? thetav_snapshot : std::span<const S>{}, traj.states[i],
                              &cache);
        ForwardCache<S> vcache;
        ForwardResult<S> vfwd;
        if (!shared) vfwd = forward<S>(*nets.value, thetav_snapshot, {}, traj.states[i], &vcache);
        const S v = shared ? fwd.value : vfwd.q[0];
        const S adv = out.returns[i] - v;

        OutputGrads<S> g;
        if (shared) {
            auto [h, dh_dlogits] = policy_entropy<S>(fwd.probs);
            (void)h;
            g.d_logits.assign(fwd.probs.size(), S(0));
            for (std::size_t k = 0; k < fwd.probs.size(); ++k) {
                const S indicator = static_cast<int>(k) == traj.actions[i] ? S(1) : S(0);
                g.d_logits[k] = adv * (indicator - fwd.probs[k]) + beta * dh_dlogits[k];
            }
            backward_accumulate<S>(nets.policy, theta_snapshot, thetav_snapshot, cache, g,
                                   policy_bufs);
            // Value head is linear in the trunk output; its loss gradient
            // stays in theta_v per the separate accumulators of the update
            // rule (nothing flows back into the shared trunk).
            const std::vector<S>& h_out = cache.act[static_cast<std::size_t>(nets.policy.num_hidden())];
            const S dv = S(-2) * adv;
            for (std::size_t c = 0; c < h_out.size(); ++c)
                critic_bufs.d_theta_v[c] += dv * h_out[c];
            critic_bufs.d_theta_v[h_out.size()] += dv;
        } else {
            const auto& a = traj.actions_cont[i];
            const S k = static_cast<S>(a.size());
            const S s2 = fwd.sigma2;
            g.d_mu.assign(fwd.mu.size(), S(0));
            S sq = 0;
            for (std::size_t j = 0; j < a.size(); ++j) {
                const S d = a[j] - fwd.mu[j];
                g.d_mu[j] = adv * d / s2;
                sq += d * d;
            }
            const S dlogp_ds2 = -k / (S(2) * s2) + sq / (S(2) * s2 * s2);
            const S dent_ds2 = k / (S(2) * s2);
            const S sig = S(1) / (S(1) + std::exp(-fwd.raw_sigma));
            g.d_raw_sigma = (adv * dlogp_ds2 + beta * dent_ds2) * sig;
            backward_accumulate<S>(nets.policy, theta_snapshot, {}, cache, g, policy_bufs);

            OutputGrads<S> vg;
            vg.d_q.assign(1, S(-2) * adv);
            backward_accumulate<S>(*nets.value, thetav_snapshot, {}, vcache, vg, critic_bufs);
        }
    }

    out.d_theta = std::move(policy_bufs.d_theta);
    out.d_theta_v = shared ? std::move(critic_bufs.d_theta_v) : std::move(critic_bufs.d_theta);
    return out;
}

}  // namespace arl
