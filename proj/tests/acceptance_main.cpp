// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
// Every tolerance is pinned in code. Runs write their artifacts under a
// scratch directory that is printed at startup. The throughput-scaling
// gates carry a hardware precondition (>= 8 logical cores) and are skipped
// with the measured numbers when the machine does not qualify.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "arl/harness.hpp"

using namespace arl;
namespace fs = std::filesystem;

namespace {

std::string g_out_root;
std::vector<std::string> g_metric_files;  // validated in criterion 10

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Fail;
    std::string detail;
};

Outcome pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::Skip, std::move(d)}; }

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool grad_close(double analytic, double numeric) {
    const double diff = std::fabs(analytic - numeric);
    const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
    return diff <= std::max(1e-7, 1e-4 * scale);
}

template <typename Loss>
std::vector<double> central_differences(std::vector<double> params, Loss&& loss,
                                        double step = 1e-5) {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + step;
        const double up = loss(params);
        params[i] = keep - step;
        const double down = loss(params);
        params[i] = keep;
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

// ---------------------------------------------------------------------------
// 1. Gradient correctness: 50 randomized small instances per algorithm,
//    every parameter partial within relative 1e-4 of central differences.

long check_one_step(std::mt19937_64& rng, bool sarsa) {
    std::normal_distribution<double> n(0.0, 1.0);
    long checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        MLPSpec spec{{4, 6, 3}, HeadKind::QValues};
        Rng init(splitmix64(static_cast<std::uint64_t>(trial) + (sarsa ? 50000u : 0u)));
        auto [theta, u1] = init_params<double>(spec, init);
        auto [theta_minus, u2] = init_params<double>(spec, init);
        std::vector<double> s(4), s2(4);
        for (double& v : s) v = n(rng);
        for (double& v : s2) v = n(rng);
        const int a = std::uniform_int_distribution<int>(0, 2)(rng);
        const double r = n(rng);
        const bool terminal = trial % 5 == 0;
        const double gamma = 0.93;

        double y;
        auto q_minus = forward<double>(spec, theta_minus, {}, s2).q;
        if (sarsa) {
            const int a2 = std::uniform_int_distribution<int>(0, 2)(rng);
            y = one_step_sarsa_target<double>(r, q_minus[static_cast<std::size_t>(a2)], terminal, gamma);
        } else {
            y = one_step_q_target<double>(r, q_minus, terminal, gamma);
        }

        GradientBuffers<double> bufs(spec);
        accumulate_q_gradient<double>(spec, theta, s, a, y, bufs);
        auto fd = central_differences(theta, [&](const std::vector<double>& th) {
            const double q = forward<double>(spec, th, {}, s).q[static_cast<std::size_t>(a)];
            return (y - q) * (y - q);
        });
        for (std::size_t i = 0; i < theta.size(); ++i) {
            if (!grad_close(bufs.d_theta[i], fd[i])) return -1;
            ++checked;
        }
    }
    return checked;
}

long check_nstep(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    long checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        MLPSpec spec{{3, 5, 2}, HeadKind::QValues};
        Rng init(splitmix64(static_cast<std::uint64_t>(trial) + 333));
        auto [theta, u1] = init_params<double>(spec, init);
        auto [theta_minus, u2] = init_params<double>(spec, init);
        Trajectory<double> traj;
        const int len = std::uniform_int_distribution<int>(1, 5)(rng);
        for (int i = 0; i < len; ++i) {
            traj.states.push_back({n(rng), n(rng), n(rng)});
            traj.actions.push_back(std::uniform_int_distribution<int>(0, 1)(rng));
            traj.rewards.push_back(n(rng));
        }
        traj.final_state = {n(rng), n(rng), n(rng)};
        traj.terminal = trial % 4 == 0;

        auto impl = n_step_q_gradients<double>(traj, spec, theta, theta_minus, 0.9);
        const std::vector<double> frozen = impl.returns;
        auto fd = central_differences(theta, [&](const std::vector<double>& th) {
            double loss = 0;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const double q =
                    forward<double>(spec, th, {}, traj.states[i]).q[static_cast<std::size_t>(traj.actions[i])];
                loss += (frozen[i] - q) * (frozen[i] - q);
            }
            return loss;
        });
        for (std::size_t i = 0; i < theta.size(); ++i) {
            if (!grad_close(impl.d_theta[i], fd[i])) return -1;
            ++checked;
        }
    }
    return checked;
}

double log_softmax_at(const std::vector<double>& logits, int a) {
    double zmax = logits[0];
    for (double z : logits) zmax = std::max(zmax, z);
    double sum = 0;
    for (double z : logits) sum += std::exp(z - zmax);
    return logits[static_cast<std::size_t>(a)] - zmax - std::log(sum);
}

long check_a3c_discrete(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    long checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        NetPair nets{MLPSpec{{3, 5, 2}, HeadKind::PolicyValueShared}, std::nullopt};
        Rng init(splitmix64(static_cast<std::uint64_t>(trial) + 777));
        auto [theta, theta_v] = init_params<double>(nets.policy, init);
        Trajectory<double> traj;
        const int len = std::uniform_int_distribution<int>(1, 5)(rng);
        for (int i = 0; i < len; ++i) {
            traj.states.push_back({n(rng), n(rng), n(rng)});
            traj.actions.push_back(std::uniform_int_distribution<int>(0, 1)(rng));
            traj.rewards.push_back(n(rng));
        }
        traj.final_state = {n(rng), n(rng), n(rng)};
        traj.terminal = trial % 4 == 0;
        const double beta = 0.01, gamma = 0.9;

        auto impl = a3c_gradients<double>(traj, nets, theta, theta_v, beta, gamma);
        const std::vector<double> frozen_R = impl.returns;
        std::vector<double> frozen_adv(traj.size());
        for (std::size_t i = 0; i < traj.size(); ++i)
            frozen_adv[i] =
                frozen_R[i] - forward<double>(nets.policy, theta, theta_v, traj.states[i]).value;

        auto fd_theta = central_differences(theta, [&](const std::vector<double>& th) {
            double obj = 0;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                auto out = forward<double>(nets.policy, th, theta_v, traj.states[i]);
                obj += log_softmax_at(out.logits, traj.actions[i]) * frozen_adv[i];
                double h = 0;
                for (double p : out.probs)
                    if (p > 0) h -= p * std::log(p);
                obj += beta * h;
            }
            return obj;
        });
        for (std::size_t i = 0; i < theta.size(); ++i) {
            if (!grad_close(impl.d_theta[i], fd_theta[i])) return -1;
            ++checked;
        }
        auto fd_theta_v = central_differences(theta_v, [&](const std::vector<double>& tv) {
            double loss = 0;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const double v = forward<double>(nets.policy, theta, tv, traj.states[i]).value;
                loss += (frozen_R[i] - v) * (frozen_R[i] - v);
            }
            return loss;
        });
        for (std::size_t i = 0; i < theta_v.size(); ++i) {
            if (!grad_close(impl.d_theta_v[i], fd_theta_v[i])) return -1;
            ++checked;
        }
    }
    return checked;
}

long check_a3c_continuous(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    long checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        NetPair nets{MLPSpec{{3, 4, 2}, HeadKind::GaussianPolicy},
                     MLPSpec{{3, 4, 1}, HeadKind::QValues}};
        Rng init(splitmix64(static_cast<std::uint64_t>(trial) + 912));
        auto [theta, u1] = init_params<double>(nets.policy, init);
        auto [theta_v, u2] = init_params<double>(*nets.value, init);
        Trajectory<double> traj;
        const int len = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int i = 0; i < len; ++i) {
            traj.states.push_back({n(rng), n(rng), n(rng)});
            traj.actions_cont.push_back({n(rng), n(rng)});
            traj.rewards.push_back(n(rng));
        }
        traj.final_state = {n(rng), n(rng), n(rng)};
        traj.terminal = trial % 3 == 0;
        const double beta = 1e-4, gamma = 0.95;

        auto impl = a3c_gradients<double>(traj, nets, theta, theta_v, beta, gamma);
        const std::vector<double> frozen_R = impl.returns;
        std::vector<double> frozen_adv(traj.size());
        for (std::size_t i = 0; i < traj.size(); ++i)
            frozen_adv[i] =
                frozen_R[i] - forward<double>(*nets.value, theta_v, {}, traj.states[i]).q[0];

        auto fd_theta = central_differences(theta, [&](const std::vector<double>& th) {
            double obj = 0;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                auto out = forward<double>(nets.policy, th, {}, traj.states[i]);
                auto [logp, ent] =
                    gaussian_logprob_and_entropy<double>(out.mu, out.sigma2, traj.actions_cont[i]);
                obj += logp * frozen_adv[i] + beta * ent;
            }
            return obj;
        });
        for (std::size_t i = 0; i < theta.size(); ++i) {
            if (!grad_close(impl.d_theta[i], fd_theta[i])) return -1;
            ++checked;
        }
        auto fd_theta_v = central_differences(theta_v, [&](const std::vector<double>& tv) {
            double loss = 0;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                const double v = forward<double>(*nets.value, tv, {}, traj.states[i]).q[0];
                loss += (frozen_R[i] - v) * (frozen_R[i] - v);
            }
            return loss;
        });
        for (std::size_t i = 0; i < theta_v.size(); ++i) {
            if (!grad_close(impl.d_theta_v[i], fd_theta_v[i])) return -1;
            ++checked;
        }
    }
    return checked;
}

Outcome criterion_gradients() {
    const double t0 = now_seconds();
    std::mt19937_64 rng(20260809);
    long total = 0;
    struct Arm {
        const char* name;
        std::function<long()> run;
    };
    std::vector<Arm> arms{{"one-step Q", [&] { return check_one_step(rng, false); }},
                          {"one-step Sarsa", [&] { return check_one_step(rng, true); }},
                          {"n-step Q", [&] { return check_nstep(rng); }},
                          {"A3C discrete", [&] { return check_a3c_discrete(rng); }},
                          {"A3C continuous", [&] { return check_a3c_continuous(rng); }}};
    for (auto& arm : arms) {
        const long n = arm.run();
        if (n < 0) return fail(std::string(arm.name) + ": finite-difference mismatch");
        total += n;
    }
    const double elapsed = now_seconds() - t0;
    if (elapsed >= 60.0) return fail("runtime " + std::to_string(elapsed) + "s exceeds 1 min");
    char buf[160];
    std::snprintf(buf, sizeof buf, "5 algorithms x 50 instances, %ld partials, rel<=1e-4, %.1fs",
                  total, elapsed);
    return pass(buf);
}

// ---------------------------------------------------------------------------
// 2. Return oracle: backward recurrence vs direct summation, 1000 cases.

Outcome criterion_returns() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> reward(-1.0, 1.0), boot(-2.0, 2.0), gam(0.01, 1.0);
    std::uniform_int_distribution<int> len(1, 10), mode(0, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int L = len(rng);
        std::vector<double> rewards(static_cast<std::size_t>(L));
        for (double& v : rewards) v = reward(rng);
        const int m = mode(rng);
        const double gamma = m == 0 ? 1.0 : gam(rng);
        const double bootstrap = m == 1 ? 0.0 : boot(rng);
        auto fast = n_step_returns<double>(rewards, bootstrap, gamma);
        for (int i = 0; i < L; ++i) {
            double acc = 0.0, g = 1.0;
            for (int j = i; j < L; ++j) {
                acc += g * rewards[static_cast<std::size_t>(j)];
                g *= gamma;
            }
            acc += g * bootstrap;
            worst = std::max(worst, std::fabs(acc - fast[static_cast<std::size_t>(i)]));
            if (worst > 1e-12) return fail("deviation " + std::to_string(worst) + " > 1e-12");
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "1000 cases incl. gamma=1 and terminal, max|delta| = %.2e", worst);
    return pass(buf);
}

// ---------------------------------------------------------------------------
// 3. Serial equivalence: the engine vs an independent tabular Q-learning
//    reference, parameters compared bitwise every 500 of 10000 steps.

struct SerialQReference {
    int n_states = 5, n_actions = 2;
    std::vector<float> w, b, w_t, b_t, m;
    float gamma = 0.99f, eta = 0.1f;
    std::int64_t target_interval = 100;
    double epsilon_final = 0.3;
    std::int64_t anneal_frames = 5000;
    ChainMDP<float> env;
    Rng rng;
    int s = 0;
    std::int64_t T = 0;

    explicit SerialQReference(std::uint64_t seed) : rng(seed) {
        (void)std::uniform_real_distribution<double>(0.0, 1.0)(rng);  // epsilon-final draw
        env.reset();
    }

    float q(const std::vector<float>& wv, const std::vector<float>& bv, int st, int a) const {
        return bv[static_cast<std::size_t>(a)] + wv[static_cast<std::size_t>(a) * n_states + st];
    }

    void run_to(std::int64_t limit) {
        while (T < limit) {
            const double frac = std::min(1.0, static_cast<double>(T) / static_cast<double>(anneal_frames));
            const double eps = 1.0 + (epsilon_final - 1.0) * frac;
            int a;
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            if (u < eps) {
                a = std::uniform_int_distribution<int>(0, n_actions - 1)(rng);
            } else {
                const float q0 = q(w, b, s, 0), q1 = q(w, b, s, 1);
                a = q0 == q1 ? std::uniform_int_distribution<int>(0, 1)(rng) : (q1 > q0 ? 1 : 0);
            }
            auto step = env.step(a);
            const int s2 = env.position();
            float y;
            if (step.terminal)
                y = step.reward;
            else
                y = step.reward + gamma * std::max(q(w_t, b_t, s2, 0), q(w_t, b_t, s2, 1));
            const float d = -2.0f * (y - q(w, b, s, a));
            ++T;
            if (T % target_interval == 0) {
                w_t = w;
                b_t = b;
            }
            for (int i = 0; i < n_actions * n_states + n_actions; ++i) {
                const bool is_w = i < n_actions * n_states;
                float grad = 0.0f;
                if (is_w && i == a * n_states + s) grad = d;
                if (!is_w && i - n_actions * n_states == a) grad = d;
                m[static_cast<std::size_t>(i)] = 0.0f * m[static_cast<std::size_t>(i)] + 1.0f * grad;
                float& p = is_w ? w[static_cast<std::size_t>(i)]
                                : b[static_cast<std::size_t>(i - n_actions * n_states)];
                p += -eta * m[static_cast<std::size_t>(i)];
            }
            if (step.terminal || step.truncated) {
                env.reset();
                s = 0;
            } else {
                s = s2;
            }
        }
    }
};

Outcome criterion_serial_equivalence() {
    const std::uint64_t init_seed = 101, thread_seed = 202;
    const std::int64_t total = 10000, chunk = 500;

    NetPair nets{MLPSpec{{5, 2}, HeadKind::QValues}, std::nullopt};
    Rng init(init_seed);
    auto [theta0, theta_v0] = init_params<float>(nets.policy, init);

    HyperParams hp;
    hp.gamma = 0.99;
    hp.t_max = 1;
    hp.i_async_update = 1;
    hp.target_interval = 100;
    hp.anneal_frames = 5000;
    hp.epsilon_support = {{0.3, 0.3, 0.3}, {1.0, 0.0, 0.0}};
    LearningRateSchedule lr{0.1, 0};

    RunContext<float> ctx(nets, theta0, theta_v0);
    ChainMDP<float> env;
    ActorOptimizers<float> opts{
        make_optimizer<float>(OptimizerKind::MomentumSgd, nets.theta_count(), 0.0f, 0.1f),
        std::nullopt};
    ActorLearner<float> actor(AlgoKind::OneStepQ, ctx, env, hp, lr, opts, 0, thread_seed);

    SerialQReference ref(thread_seed);
    ref.w.assign(theta0.begin(), theta0.begin() + 10);
    ref.b.assign(theta0.begin() + 10, theta0.end());
    ref.w_t = ref.w;
    ref.b_t = ref.b;
    ref.m.assign(12, 0.0f);

    for (std::int64_t limit = chunk; limit <= total; limit += chunk) {
        actor.run_until(limit);
        ref.run_to(limit);
        if (actor.stats().faulted) return fail("engine faulted: " + actor.stats().fault);
        auto theta = ctx.params.theta.snapshot();
        for (int i = 0; i < 10; ++i)
            if (theta[static_cast<std::size_t>(i)] != ref.w[static_cast<std::size_t>(i)])
                return fail("w[" + std::to_string(i) + "] diverged at step " + std::to_string(limit));
        for (int i = 0; i < 2; ++i)
            if (theta[static_cast<std::size_t>(10 + i)] != ref.b[static_cast<std::size_t>(i)])
                return fail("b[" + std::to_string(i) + "] diverged at step " + std::to_string(limit));
    }
    return pass("10000 steps, parameters bitwise equal at every 500-step checkpoint");
}

// ---------------------------------------------------------------------------
// 4. Tabular convergence: q1 and qn on ChainMDP(5) reach max|Q-Q*| <= 0.01
//    within 200k frames, each in under 30 s.

Outcome criterion_tabular() {
    ChainMDP<double> chain;
    auto qstar = value_iteration(chain.to_mdp(), 0.99, 1e-12);
    std::string detail;
    for (const char* algo : {"q1", "qn"}) {
        RunConfig cfg;
        cfg.algo = algo;
        cfg.env.id = "chain";
        cfg.threads = 2;
        cfg.total_frames = 200000;
        cfg.hidden = {};
        cfg.optimizer = "sgd";
        cfg.optimizer_alpha = 0.0;
        cfg.lr = 0.2;
        cfg.hp.t_max = 5;
        cfg.hp.i_async_update = 5;
        cfg.hp.target_interval = 1000;
        cfg.hp.anneal_frames = 100000;
        cfg.hp.epsilon_support = {{0.25, 0.25, 0.25}, {1.0, 0.0, 0.0}};
        cfg.eval_interval = 100000;
        cfg.eval_episodes = 2;
        cfg.out_dir = g_out_root + "/tabular";
        cfg.seed = 17;
        const double t0 = now_seconds();
        auto r = train(cfg);
        const double elapsed = now_seconds() - t0;
        if (r.faulted) return fail(std::string(algo) + " faulted: " + r.fault);
        if (elapsed >= 30.0)
            return fail(std::string(algo) + " took " + std::to_string(elapsed) + "s (budget 30s)");
        g_metric_files.push_back(r.metrics_path);

        auto env = make_environment<float>(cfg.env, 1);
        auto nets = build_nets(cfg, *env);
        auto loaded = checkpoint_load(r.checkpoint_path, nets);
        double worst = 0;
        for (int s = 0; s < 4; ++s) {
            std::vector<float> obs(5, 0.0f);
            obs[static_cast<std::size_t>(s)] = 1.0f;
            auto q = forward<float>(nets.policy, loaded.theta, {}, obs).q;
            for (int a = 0; a < 2; ++a)
                worst = std::max(worst,
                                 std::fabs(q[static_cast<std::size_t>(a)] -
                                           qstar[static_cast<std::size_t>(s * 2 + a)]));
        }
        if (worst > 0.01)
            return fail(std::string(algo) + " max|Q-Q*| = " + std::to_string(worst) + " > 0.01");
        char buf[80];
        std::snprintf(buf, sizeof buf, "%s%s: max|Q-Q*|=%.4f in %.1fs", detail.empty() ? "" : "; ",
                      algo, worst, elapsed);
        detail += buf;
    }
    return pass(detail);
}

// ---------------------------------------------------------------------------
// 5. Hogwild counting: no lost indivisible adds; no torn target snapshots.

Outcome criterion_hogwild() {
    SharedVector<float> shared(4);
    {
        std::vector<std::thread> pool;
        for (int t = 0; t < 8; ++t)
            pool.emplace_back([&shared] {
                for (int i = 0; i < 100000; ++i) shared.add(0, 1.0f);
            });
        for (auto& th : pool) th.join();
    }
    if (shared.load(0) != 800000.0f)
        return fail("lost updates: sum " + std::to_string(shared.load(0)) + " != 800000");

    TargetNetwork<float> target(std::vector<float>(64, 1.0f));
    std::atomic<bool> stop{false};
    std::atomic<long> torn{0};
    std::atomic<long> reads{0};
    std::thread writer([&] {
        float v = 2.0f;
        while (!stop.load()) {
            target.refresh_values(std::vector<float>(64, v));
            v = v == 1.0f ? 2.0f : 1.0f;
        }
    });
    std::vector<std::thread> readers;
    for (int r = 0; r < 3; ++r)
        readers.emplace_back([&] {
            while (reads.fetch_add(1) < 1000000) {
                auto snap = target.read();
                const float first = (*snap.values)[0];
                for (float x : *snap.values)
                    if (x != first) torn.fetch_add(1);
            }
        });
    for (auto& th : readers) th.join();
    stop.store(true);
    writer.join();
    if (torn.load() != 0) return fail(std::to_string(torn.load()) + " torn snapshots");
    return pass("8x100k adds exact (800000); 0 torn snapshots in 1e6 reads");
}

// ---------------------------------------------------------------------------
// 6. Throughput scaling. The >=2.5x (4 threads) and >=4x (8 threads) gates
//    require a machine with >= 8 logical cores; on smaller machines the
//    measured rates are reported and the gates are skipped.

double median_rate(const RunConfig& base, int threads) {
    std::vector<double> rates;
    for (int rep = 0; rep < 3; ++rep) {
        RunConfig cfg = base;
        cfg.threads = threads;
        cfg.total_frames = 60000 * threads;
        cfg.eval_interval = cfg.total_frames;
        cfg.run_id = "scaling-t" + std::to_string(threads) + "-r" + std::to_string(rep);
        cfg.seed = derive_seed(5, static_cast<std::uint64_t>(threads) * 10 + static_cast<std::uint64_t>(rep));
        auto r = train(cfg);
        rates.push_back(r.steps_per_second);
        g_metric_files.push_back(r.metrics_path);
    }
    return median_of(rates);
}

Outcome criterion_scaling() {
    const unsigned cores = std::thread::hardware_concurrency();
    RunConfig base;
    base.algo = "qn";
    base.env.id = "maze";
    base.hidden = {128};
    base.optimizer = "rmsprop";
    base.lr = 0.001;
    base.hp.t_max = 20;
    base.hp.i_async_update = 20;
    base.hp.anneal_frames = 1000000;
    base.eval_episodes = 1;
    base.out_dir = g_out_root + "/scaling";

    const double rate1 = median_rate(base, 1);
    const double rate4 = median_rate(base, 4);
    char buf[240];
    if (cores < 8) {
        std::snprintf(buf, sizeof buf,
                      "machine has %u logical cores (< 8 required): gates skipped; measured "
                      "median steps/s: 1 thread %.0f, 4 threads %.0f (x%.2f)",
                      cores, rate1, rate4, rate4 / rate1);
        return skip(buf);
    }
    const double rate8 = median_rate(base, 8);
    if (rate4 < 2.5 * rate1) {
        std::snprintf(buf, sizeof buf, "4-thread rate %.0f < 2.5x single rate %.0f", rate4, rate1);
        return fail(buf);
    }
    if (rate8 < 4.0 * rate1) {
        std::snprintf(buf, sizeof buf, "8-thread rate %.0f < 4x single rate %.0f", rate8, rate1);
        return fail(buf);
    }
    std::snprintf(buf, sizeof buf, "steps/s 1:%.0f 4:%.0f (x%.2f) 8:%.0f (x%.2f)", rate1, rate4,
                  rate4 / rate1, rate8, rate8 / rate1);
    return pass(buf);
}

// ---------------------------------------------------------------------------
// 7. Learning at scale-down: A3C on GridMaze reaches 3x the random-policy
//    baseline within 2M frames in under 10 minutes; continuous A3C on the
//    point mass improves on the initial policy by at least 50% within 1M.

Outcome criterion_learning() {
    // (a) discrete A3C on the maze
    RunConfig maze_cfg;
    maze_cfg.algo = "a3c";
    maze_cfg.env.id = "maze";
    maze_cfg.env.maze = MazeConfig{12, 12, 4, 300, 2};
    maze_cfg.threads = 4;
    maze_cfg.total_frames = 2000000;
    maze_cfg.hidden = {64};
    maze_cfg.optimizer = "shared-rmsprop";
    maze_cfg.lr = 0.002;
    maze_cfg.hp.beta = 0.01;
    maze_cfg.eval_interval = 200000;
    maze_cfg.eval_episodes = 20;
    maze_cfg.out_dir = g_out_root + "/learning";
    maze_cfg.seed = 9;

    auto env = make_environment<float>(maze_cfg.env, derive_seed(maze_cfg.seed, 0xE7A1));
    NetPair nets = build_nets(maze_cfg, *env);
    std::vector<float> zero_theta(nets.theta_count(), 0.0f), zero_tv(nets.theta_v_count(), 0.0f);
    auto [baseline, baseline_sd] = evaluate_params<float>(
        nets, zero_theta, zero_tv, *env, maze_cfg.eval_episodes, derive_seed(maze_cfg.seed, 0xEE11));
    if (!(baseline > 0)) return fail("degenerate random baseline on the maze");
    maze_cfg.score_target = 3.0 * baseline;

    const double t0 = now_seconds();
    auto maze_run = train(maze_cfg);
    const double maze_elapsed = now_seconds() - t0;
    g_metric_files.push_back(maze_run.metrics_path);
    if (maze_run.faulted) return fail("maze run faulted: " + maze_run.fault);
    if (maze_elapsed >= 600.0)
        return fail("maze run took " + std::to_string(maze_elapsed) + "s (budget 600s)");
    if (!maze_run.reached_target || maze_run.frames_at_target > 2000000) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "maze: final score %.2f never reached 3x baseline %.2f in 2M frames",
                      maze_run.final_metric.eval_mean_score, 3.0 * baseline);
        return fail(buf);
    }

    // (b) continuous A3C on the point mass
    RunConfig pm_cfg;
    pm_cfg.algo = "a3c_continuous";
    pm_cfg.env.id = "pointmass";
    pm_cfg.threads = 4;
    pm_cfg.total_frames = 1000000;
    pm_cfg.hidden = {32};
    pm_cfg.optimizer = "shared-rmsprop";
    pm_cfg.lr = 0.003;
    pm_cfg.hp.beta = 1e-4;
    pm_cfg.hp.t_max = 200;  // whole-episode updates, no bootstrapping
    pm_cfg.eval_interval = 200000;
    pm_cfg.eval_episodes = 20;
    pm_cfg.out_dir = g_out_root + "/learning";
    pm_cfg.seed = 4;

    auto pm_env = make_environment<float>(pm_cfg.env, derive_seed(pm_cfg.seed, 0xE7A1));
    NetPair pm_nets = build_nets(pm_cfg, *pm_env);
    Rng pm_init(derive_seed(pm_cfg.seed, 0x1217));
    auto [pm_theta0, pm_tv0] = init_net_pair<float>(pm_nets, pm_init);
    auto [pm_baseline, pm_bsd] = evaluate_params<float>(
        pm_nets, pm_theta0, pm_tv0, *pm_env, pm_cfg.eval_episodes, derive_seed(pm_cfg.seed, 0xEE11));

    auto pm_run = train(pm_cfg);
    g_metric_files.push_back(pm_run.metrics_path);
    if (pm_run.faulted) return fail("point-mass run faulted: " + pm_run.fault);
    // reward is negative; a 50% improvement halves the distance to zero
    const double required = pm_baseline + 0.5 * std::fabs(pm_baseline);
    const double achieved = pm_run.final_metric.eval_mean_score;
    if (achieved < required) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "point mass: %.3f did not improve 50%% over baseline %.3f",
                      achieved, pm_baseline);
        return fail(buf);
    }

    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "maze: 3x baseline (%.1f) reached at %lld frames in %.0fs; point mass: %.3f vs "
                  "baseline %.3f (needed %.3f)",
                  3.0 * baseline, static_cast<long long>(maze_run.frames_at_target), maze_elapsed,
                  achieved, pm_baseline, required);
    return pass(buf);
}

// ---------------------------------------------------------------------------
// 8. Optimizer robustness: paired 20-point log-uniform sweep on n-step Q;
//    shared RMSProp must reach the optimal policy at least as often as
//    momentum SGD. Rank-score curves go to the scratch directory.

Outcome criterion_robustness() {
    Rng lr_rng(derive_seed(99, 0x10c));
    std::vector<double> lrs;
    for (int i = 0; i < 20; ++i) lrs.push_back(sample_log_uniform(lr_rng, 1e-4, 1e-2));

    auto optimal_policy = [](const RunConfig& cfg, const std::string& ckpt) {
        auto env = make_environment<float>(cfg.env, 1);
        auto nets = build_nets(cfg, *env);
        auto loaded = checkpoint_load(ckpt, nets);
        for (int s = 0; s < 4; ++s) {
            std::vector<float> obs(5, 0.0f);
            obs[static_cast<std::size_t>(s)] = 1.0f;
            auto q = forward<float>(nets.policy, loaded.theta, {}, obs).q;
            if (!(q[1] > q[0])) return false;
        }
        return true;
    };

    std::ofstream curves(g_out_root + "/robustness_rank_scores.jsonl", std::ios::trunc);
    int counts[2] = {0, 0};
    const char* opts[2] = {"shared-rmsprop", "sgd"};
    for (int arm = 0; arm < 2; ++arm) {
        std::vector<double> scores;
        for (int i = 0; i < 20; ++i) {
            RunConfig cfg;
            cfg.algo = "qn";
            cfg.env.id = "chain";
            cfg.threads = 1;
            cfg.deterministic = true;  // byte-stable paired comparison
            cfg.total_frames = 60000;
            cfg.hidden = {};
            cfg.optimizer = opts[arm];
            cfg.optimizer_alpha = arm == 0 ? 0.99 : 0.9;
            cfg.lr = lrs[static_cast<std::size_t>(i)];
            cfg.hp.target_interval = 1000;
            cfg.hp.anneal_frames = 30000;
            cfg.hp.epsilon_support = {{0.25, 0.25, 0.25}, {1.0, 0.0, 0.0}};
            cfg.eval_interval = 60000;
            cfg.eval_episodes = 3;
            cfg.out_dir = g_out_root + "/robustness";
            cfg.run_id = std::string(opts[arm]) + "-p" + std::to_string(i);
            cfg.seed = derive_seed(1234, static_cast<std::uint64_t>(i));
            auto r = train(cfg);
            g_metric_files.push_back(r.metrics_path);
            if (r.faulted) return fail(std::string(opts[arm]) + " run faulted: " + r.fault);
            if (optimal_policy(cfg, r.checkpoint_path)) ++counts[arm];
            scores.push_back(r.final_metric.eval_mean_score);
        }
        std::sort(scores.rbegin(), scores.rend());
        for (std::size_t rank = 0; rank < scores.size(); ++rank) {
            nlohmann::json j;
            j["optimizer"] = opts[arm];
            j["rank"] = rank;
            j["final_score"] = scores[rank];
            curves << j.dump() << '\n';
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "optimal policies: shared-rmsprop %d/20, momentum sgd %d/20",
                  counts[0], counts[1]);
    if (counts[0] < counts[1]) return fail(buf);
    return pass(buf);
}

// ---------------------------------------------------------------------------
// 9. Entropy property: zero-advantage feedback with beta = 0.01 drives the
//    policy entropy monotonically to within 1e-6 of ln|A|.

Outcome criterion_entropy() {
    NetPair nets{MLPSpec{{2, 4}, HeadKind::PolicyValueShared}, std::nullopt};
    Rng init(606);
    auto [theta, theta_v] = init_params<double>(nets.policy, init);
    const std::vector<double> probe{0.5, -0.5};
    const double beta = 0.01, gamma = 0.99, eta = 10.0;
    const double h_max = std::log(4.0);

    auto entropy_at_probe = [&] {
        auto out = forward<double>(nets.policy, theta, theta_v, probe);
        double h = 0;
        for (double p : out.probs)
            if (p > 0) h -= p * std::log(p);
        return h;
    };

    double prev = entropy_at_probe();
    const double h_start = prev;
    int iters = 0;
    bool reached = false;
    for (; iters < 30000 && !reached; ++iters) {
        const double v = forward<double>(nets.policy, theta, theta_v, probe).value;
        Trajectory<double> traj;
        traj.states = {probe};
        traj.actions = {iters % 4};
        traj.rewards = {v * (1.0 - gamma)};
        traj.final_state = probe;
        traj.terminal = false;
        auto g = a3c_gradients<double>(traj, nets, theta, theta_v, beta, gamma);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += eta * g.d_theta[i];
        const double h = entropy_at_probe();
        if (h_max - prev > 1e-6 && h <= prev)
            return fail("entropy not monotone at iteration " + std::to_string(iters));
        prev = h;
        reached = h_max - h <= 1e-6;
    }
    if (!reached) return fail("entropy stalled at gap " + std::to_string(h_max - prev));
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "entropy rose monotonically %.6f -> within 1e-6 of ln 4 in %d updates", h_start,
                  iters);
    return pass(buf);
}

// ---------------------------------------------------------------------------
// 10. Format stability: checkpoint and config round trips, and a strict
//     schema parse of every metric line emitted by the runs above.

Outcome criterion_formats() {
    // checkpoint round trip
    NetPair nets{MLPSpec{{6, 8, 3}, HeadKind::PolicyValueShared}, std::nullopt};
    Rng rng(31);
    auto [theta, theta_v] = init_net_pair<float>(nets, rng);
    const std::string path = g_out_root + "/format_check.ckpt";
    checkpoint_save(path, nets, theta, theta_v);
    auto loaded = checkpoint_load(path, nets);
    if (loaded.theta != theta || loaded.theta_v != theta_v)
        return fail("checkpoint round trip not bit-exact");

    // config round trip
    RunConfig cfg;
    cfg.algo = "a3c";
    cfg.env.id = "maze";
    cfg.hp.clip_norm = 5.0;
    cfg.score_target = 12.5;
    cfg.lr = 0.000731;
    if (parse_config(render_config(cfg)) != cfg) return fail("config round trip not equal");

    // strict parse of all emitted metric lines
    long lines = 0;
    for (const auto& file : g_metric_files) {
        std::ifstream in(file);
        if (!in) return fail("missing metrics file " + file);
        std::string line;
        std::int64_t prev = -1;
        while (std::getline(in, line)) {
            MetricRecord r;
            try {
                r = parse_metric_line(line);
            } catch (const std::exception& e) {
                return fail(file + ": " + e.what());
            }
            if (r.frames <= prev) return fail(file + ": frames not strictly increasing");
            prev = r.frames;
            ++lines;
        }
    }
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "checkpoint bit-exact; config equal; %ld metric lines from %zu files parse",
                  lines, g_metric_files.size());
    return pass(buf);
}

}  // namespace

int main() {
    g_out_root = (fs::temp_directory_path() / "arl_acceptance").string();
    fs::remove_all(g_out_root);
    fs::create_directories(g_out_root);
    std::printf("acceptance artifacts: %s\n", g_out_root.c_str());

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "gradient-correctness", criterion_gradients},
        {2, "return-oracle", criterion_returns},
        {3, "serial-equivalence", criterion_serial_equivalence},
        {4, "tabular-convergence", criterion_tabular},
        {5, "hogwild-counting", criterion_hogwild},
        {6, "throughput-scaling", criterion_scaling},
        {7, "learning-at-scale-down", criterion_learning},
        {8, "optimizer-robustness", criterion_robustness},
        {9, "entropy-property", criterion_entropy},
        {10, "format-stability", criterion_formats},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = fail(std::string("exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::Pass ? "PASS"
                          : outcome.kind == Outcome::Skip ? "SKIP"
                                                          : "FAIL";
        std::printf("[%s] %2d. %-24s %s\n", tag, c.id, c.name, outcome.detail.c_str());
        std::fflush(stdout);
        if (outcome.kind == Outcome::Fail) ++failures;
    }
    std::printf("%d/%zu criteria failed\n", failures, criteria.size());
    return failures;
}
