#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arl/algorithms.hpp"
#include "arl/environments.hpp"
#include "arl/mlp.hpp"
#include "arl/optimizer.hpp"
#include "arl/shared_state.hpp"

namespace arl {

// Everything one run shares across its actor-learner threads.
template <typename S>
struct RunContext {
    NetPair nets;
    SharedParams<S> params;
    TargetNetwork<S> target;
    GlobalCounter counter;
    std::atomic<bool> stop{false};

    RunContext(NetPair n, std::span<const S> theta0, std::span<const S> theta_v0)
        : nets(std::move(n)),
          params(theta0, theta_v0),
          target(std::vector<S>(theta0.begin(), theta0.end())) {
        nets.validate();
        if (theta0.size() != nets.theta_count() || theta_v0.size() != nets.theta_v_count())
            throw ConfigError("RunContext: parameter shapes do not match the network spec");
    }
};

template <typename S>
struct ActorOptimizers {
    Optimizer<S> theta;
    std::optional<Optimizer<S>> theta_v;
};

struct ThreadStats {
    std::int64_t steps = 0;
    std::int64_t updates = 0;
    std::int64_t episodes = 0;
    double reward_sum = 0.0;
    double epsilon_final = 0.0;
    bool faulted = false;
    std::string fault;
};

// One actor-learner: owns its environment, generator, trajectory and
// gradient buffers; shares parameters, target and counter through the run
// context. run_until can be called repeatedly with growing frame limits --
// all loop state persists, so a paused-and-resumed run is identical to an
// uninterrupted one.
template <typename S>
class ActorLearner {
public:
    ActorLearner(AlgoKind algo, RunContext<S>& ctx, Environment<S>& env, const HyperParams& hp,
                 const LearningRateSchedule& lr, ActorOptimizers<S> opts, int thread_id,
                 std::uint64_t seed)
        : algo_(algo),
          ctx_(ctx),
          env_(env),
          hp_(hp),
          lr_(lr),
          opts_(std::move(opts)),
          thread_id_(thread_id),
          rng_(seed),
          bufs_(ctx.nets.policy) {
        if ((algo_ == AlgoKind::A3C || algo_ == AlgoKind::A3CContinuous) && !opts_.theta_v)
            throw ConfigError("actor-critic needs an optimizer for the critic parameters");
        explore_ = ExplorationPolicy{sample_epsilon_final(rng_, hp_.epsilon_support),
                                     hp_.anneal_frames, thread_id_};
        stats_.epsilon_final = explore_.epsilon_final;
        obs_ = env_.reset();
    }

    // Run until the global counter reaches t_limit or the stop flag rises.
    void run_until(std::int64_t t_limit) {
        if (stats_.faulted) return;
        try {
            if (algo_ == AlgoKind::OneStepQ || algo_ == AlgoKind::OneStepSarsa)
                one_step_until(t_limit);
            else
                rollout_until(t_limit);
        } catch (const std::exception& e) {
            stats_.faulted = true;
            stats_.fault = e.what();
            ctx_.stop.store(true, std::memory_order_relaxed);
        }
    }

    const ThreadStats& stats() const { return stats_; }

private:
    void apply_batch(SharedVector<S>& shared, Optimizer<S>& opt, std::vector<S>& grad, S eta) {
        if (hp_.clip_norm) clip_global_norm<S>(grad, *hp_.clip_norm);
        opt.step(shared, grad, eta);
    }

    // One-step Q and Sarsa: per-step gradients against the live shared
    // parameters, targets from the frozen snapshot, updates applied every
    // i_async_update steps or at an episode boundary.
    void one_step_until(std::int64_t t_limit) {
        const MLPSpec& spec = ctx_.nets.policy;
        const bool sarsa = algo_ == AlgoKind::OneStepSarsa;

        while (!ctx_.stop.load(std::memory_order_relaxed)) {
            if (ctx_.counter.value() >= t_limit) break;
            ctx_.params.theta.snapshot_into(theta_local_);
            const double eps = explore_.at(ctx_.counter.value());

            int action;
            if (sarsa && pending_action_ >= 0) {
                action = pending_action_;
            } else {
                auto q = forward<S>(spec, theta_local_, {}, obs_).q;
                action = epsilon_greedy<S>(q, eps, rng_);
            }

            EnvStep<S> step = env_.step(action);
            stats_.reward_sum += step.reward;
            const bool boundary = step.terminal || step.truncated;

            auto target_snap = ctx_.target.read();
            S y;
            if (sarsa) {
                int next_action = -1;
                S q_taken = S(0);
                if (!step.terminal) {
                    auto q_next = forward<S>(spec, theta_local_, {}, step.observation).q;
                    next_action = epsilon_greedy<S>(q_next, eps, rng_);
                    auto q_minus = forward<S>(spec, *target_snap.values, {}, step.observation).q;
                    q_taken = q_minus[static_cast<std::size_t>(next_action)];
                }
                y = one_step_sarsa_target<S>(step.reward, q_taken, step.terminal,
                                             static_cast<S>(hp_.gamma));
                pending_action_ = boundary ? -1 : next_action;
            } else {
                if (step.terminal) {
                    y = step.reward;
                } else {
                    auto q_minus = forward<S>(spec, *target_snap.values, {}, step.observation).q;
                    y = one_step_q_target<S>(step.reward, q_minus, false, static_cast<S>(hp_.gamma));
                }
            }

            accumulate_q_gradient<S>(spec, theta_local_, obs_, action, y, bufs_);
            ++batch_;

            const std::int64_t t_global = ctx_.counter.increment();
            ++stats_.steps;
            refresh_target(ctx_.params.theta, ctx_.target, t_global, 1, hp_.target_interval);

            if (batch_ % hp_.i_async_update == 0 || boundary) {
                apply_batch(ctx_.params.theta, opts_.theta, bufs_.d_theta,
                            static_cast<S>(lr_.at(t_global)));
                bufs_.clear();
                batch_ = 0;
                ++stats_.updates;
            }

            if (boundary) {
                ++stats_.episodes;
                obs_ = env_.reset();
                if (hp_.resample_epsilon_each_episode)
                    explore_.epsilon_final = sample_epsilon_final(rng_, hp_.epsilon_support);
            } else {
                obs_ = std::move(step.observation);
            }

            if (t_global >= t_limit) break;
        }
    }

    // n-step Q and actor-critic: snapshot the shared parameters once per
    // rollout, act from the snapshot for up to t_max steps, then apply one
    // accumulated update.
    void rollout_until(std::int64_t t_limit) {
        const NetPair& nets = ctx_.nets;
        const MLPSpec& spec = nets.policy;
        const bool nstep_q = algo_ == AlgoKind::NStepQ;
        const bool continuous = algo_ == AlgoKind::A3CContinuous;

        while (!ctx_.stop.load(std::memory_order_relaxed)) {
            std::int64_t t_global = ctx_.counter.value();
            if (t_global >= t_limit) break;

            ctx_.params.theta.snapshot_into(theta_local_);
            ctx_.params.theta_v.snapshot_into(theta_v_local_);
            traj_.clear();

            bool boundary = false;
            for (int k = 0; k < hp_.t_max && !boundary; ++k) {
                EnvStep<S> step;
                if (nstep_q) {
                    auto q = forward<S>(spec, theta_local_, {}, obs_).q;
                    const double eps = explore_.at(ctx_.counter.value());
                    const int action = epsilon_greedy<S>(q, eps, rng_);
                    step = env_.step(action);
                    traj_.actions.push_back(action);
                } else if (!continuous) {
                    auto out = forward<S>(spec, theta_local_, theta_v_local_, obs_);
                    const int action = sample_categorical<S>(out.probs, rng_);
                    step = env_.step(action);
                    traj_.actions.push_back(action);
                } else {
                    auto out = forward<S>(spec, theta_local_, {}, obs_);
                    const S sigma = std::sqrt(out.sigma2);
                    std::vector<S> action(out.mu.size());
                    for (std::size_t j = 0; j < action.size(); ++j)
                        action[j] = out.mu[j] + sigma * static_cast<S>(unit_normal_(rng_));
                    step = env_.step(std::span<const S>(action));
                    traj_.actions_cont.push_back(std::move(action));
                }

                traj_.states.push_back(std::move(obs_));
                traj_.rewards.push_back(step.reward);
                stats_.reward_sum += step.reward;

                t_global = ctx_.counter.increment();
                ++stats_.steps;
                if (nstep_q)
                    refresh_target(ctx_.params.theta, ctx_.target, t_global, 1, hp_.target_interval);

                traj_.terminal = step.terminal;
                boundary = step.terminal || step.truncated;
                traj_.final_state = std::move(step.observation);
                if (boundary) {
                    ++stats_.episodes;
                    obs_ = env_.reset();
                    if (nstep_q && hp_.resample_epsilon_each_episode)
                        explore_.epsilon_final = sample_epsilon_final(rng_, hp_.epsilon_support);
                } else {
                    obs_ = traj_.final_state;
                }
            }

            const S eta = static_cast<S>(lr_.at(t_global));
            if (nstep_q) {
                auto target_snap = ctx_.target.read();
                auto grads = n_step_q_gradients<S>(traj_, spec, theta_local_, *target_snap.values,
                                                   static_cast<S>(hp_.gamma));
                apply_batch(ctx_.params.theta, opts_.theta, grads.d_theta, eta);
            } else {
                auto grads = a3c_gradients<S>(traj_, nets, theta_local_, theta_v_local_,
                                              static_cast<S>(hp_.beta), static_cast<S>(hp_.gamma));
                // d_theta is an ascent direction; the optimizer subtracts.
                for (S& g : grads.d_theta) g = -g;
                apply_batch(ctx_.params.theta, opts_.theta, grads.d_theta, eta);
                apply_batch(ctx_.params.theta_v, *opts_.theta_v, grads.d_theta_v, eta);
            }
            ++stats_.updates;

            if (t_global >= t_limit) break;
        }
    }

    AlgoKind algo_;
    RunContext<S>& ctx_;
    Environment<S>& env_;
    HyperParams hp_;
    LearningRateSchedule lr_;
    ActorOptimizers<S> opts_;
    int thread_id_;
    Rng rng_;
    std::normal_distribution<double> unit_normal_{0.0, 1.0};
    ExplorationPolicy explore_;
    ThreadStats stats_;

    std::vector<S> obs_;
    std::vector<S> theta_local_, theta_v_local_;
    GradientBuffers<S> bufs_;
    Trajectory<S> traj_;
    int pending_action_ = -1;  // Sarsa carries the action chosen for obs_
    std::int64_t batch_ = 0;
};

// Single-call form: construct, run to the frame budget, return the stats.
template <typename S>
ThreadStats run_actor_learner(AlgoKind algo, RunContext<S>& ctx, Environment<S>& env,
                              const HyperParams& hp, const LearningRateSchedule& lr,
                              ActorOptimizers<S>& opts, int thread_id, std::int64_t total_frames,
                              std::uint64_t seed) {
    try {
        ActorLearner<S> actor(algo, ctx, env, hp, lr, opts, thread_id, seed);
        actor.run_until(total_frames);
        return actor.stats();
    } catch (const std::exception& e) {
        ThreadStats stats;
        stats.faulted = true;
        stats.fault = e.what();
        ctx.stop.store(true, std::memory_order_relaxed);
        return stats;
    }
}

}  // namespace arl
