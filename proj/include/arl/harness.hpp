#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "arl/actor_learner.hpp"
#include "arl/checkpoint.hpp"
#include "arl/config.hpp"
#include "arl/metrics.hpp"

namespace arl {

// ---------------------------------------------------------------------------
// Clocks. bench timing goes through this interface so tests can inject a
// deterministic stub.

class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() const = 0;  // seconds, monotonic
};

class MonotonicClock final : public Clock {
public:
    double now() const override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
            .count();
    }
};

class StubClock final : public Clock {
public:
    StubClock() = default;
    // Auto-advancing variant: each reading moves time forward by `step`.
    explicit StubClock(double step_per_read) : step_(step_per_read) {}

    double now() const override {
        const double t = t_;
        t_ += step_;
        return t;
    }
    void advance(double dt) { t_ += dt; }
    void set(double t) { t_ = t; }

private:
    mutable double t_ = 0.0;
    double step_ = 0.0;
};

// ---------------------------------------------------------------------------
// Initialization and evaluation

template <typename S>
std::pair<std::vector<S>, std::vector<S>> init_net_pair(const NetPair& nets, Rng& rng) {
    auto [theta, theta_v] = init_params<S>(nets.policy, rng);
    if (nets.value) {
        auto [tv, unused] = init_params<S>(*nets.value, rng);
        theta_v = std::move(tv);
    }
    return {std::move(theta), std::move(theta_v)};
}

// Greedy rollouts (argmax Q, argmax pi, or action = mu) over `episodes`
// seeded episodes; returns mean and population standard deviation of the
// undiscounted episode score.
template <typename S>
std::pair<double, double> evaluate_params(const NetPair& nets, std::span<const S> theta,
                                          std::span<const S> theta_v, Environment<S>& env,
                                          int episodes, std::uint64_t seed) {
    if (episodes < 1) throw ConfigError("evaluate: episodes must be >= 1");
    if (static_cast<int>(env.obs_dim()) != nets.policy.input_dim())
        throw ConfigError("evaluate: checkpoint spec does not match the environment");
    Rng tie_rng(derive_seed(seed, 0xA11CE));
    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(episodes));
    for (int ep = 0; ep < episodes; ++ep) {
        std::vector<S> obs = env.reset_seeded(derive_seed(seed, static_cast<std::uint64_t>(ep)));
        double total = 0.0;
        for (;;) {
            EnvStep<S> step;
            switch (nets.policy.head) {
                case HeadKind::QValues: {
                    auto q = forward<S>(nets.policy, theta, {}, obs).q;
                    step = env.step(argmax_tiebreak<S>(q, tie_rng));
                    break;
                }
                case HeadKind::PolicyValueShared: {
                    auto out = forward<S>(nets.policy, theta, theta_v, obs);
                    step = env.step(argmax_tiebreak<S>(out.probs, tie_rng));
                    break;
                }
                case HeadKind::GaussianPolicy: {
                    auto out = forward<S>(nets.policy, theta, {}, obs);
                    step = env.step(std::span<const S>(out.mu));
                    break;
                }
            }
            total += step.reward;
            if (step.terminal || step.truncated) break;
            obs = std::move(step.observation);
        }
        scores.push_back(total);
    }
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scores.size());
    return {mean, std::sqrt(var)};
}

// ---------------------------------------------------------------------------
// train

struct TrainResult {
    MetricRecord final_metric;
    std::vector<ThreadStats> per_thread;
    std::int64_t frames_run = 0;
    std::string metrics_path;
    std::string checkpoint_path;
    bool reached_target = false;
    double time_to_target = 0.0;
    std::int64_t frames_at_target = 0;
    double elapsed_seconds = 0.0;     // training only, excludes final eval
    double steps_per_second = 0.0;
    bool faulted = false;
    std::string fault;
};

namespace detail {

inline ActorOptimizers<float> build_optimizers(const RunConfig& cfg, const NetPair& nets,
                                               const std::shared_ptr<SharedVector<float>>& g_theta,
                                               const std::shared_ptr<SharedVector<float>>& g_theta_v) {
    const OptimizerKind kind = cfg.optimizer_kind();
    const float alpha = static_cast<float>(cfg.optimizer_alpha);
    const float eps = static_cast<float>(cfg.eps_reg);
    ActorOptimizers<float> opts{make_optimizer<float>(kind, nets.theta_count(), alpha, eps, g_theta),
                                std::nullopt};
    const AlgoKind algo = cfg.algo_kind();
    if (algo == AlgoKind::A3C || algo == AlgoKind::A3CContinuous)
        opts.theta_v = make_optimizer<float>(kind, nets.theta_v_count(), alpha, eps, g_theta_v);
    return opts;
}

}  // namespace detail

inline TrainResult train(const RunConfig& cfg, Clock* injected_clock = nullptr) {
    cfg.validate();
    const std::string run_id = cfg.derived_run_id();
    std::filesystem::create_directories(cfg.out_dir);

    MonotonicClock monotonic;
    Clock* clock = injected_clock ? injected_clock : static_cast<Clock*>(&monotonic);

    auto eval_env = make_environment<float>(cfg.env, derive_seed(cfg.seed, 0xE7A1));
    const NetPair nets = build_nets(cfg, *eval_env);
    Rng init_rng(derive_seed(cfg.seed, 0x1217));
    auto [theta0, theta_v0] = init_net_pair<float>(nets, init_rng);

    RunContext<float> ctx(nets, theta0, theta_v0);
    const AlgoKind algo = cfg.algo_kind();
    const LearningRateSchedule lr = cfg.lr_schedule();

    std::shared_ptr<SharedVector<float>> g_theta, g_theta_v;
    if (cfg.optimizer_kind() == OptimizerKind::SharedRmsprop) {
        g_theta = make_shared_accumulator<float>(nets.theta_count());
        if (algo == AlgoKind::A3C || algo == AlgoKind::A3CContinuous)
            g_theta_v = make_shared_accumulator<float>(nets.theta_v_count());
    }

    TrainResult result;
    result.metrics_path = cfg.out_dir + "/" + run_id + ".metrics.jsonl";
    result.checkpoint_path = cfg.out_dir + "/" + run_id + ".ckpt";
    MetricsWriter metrics(result.metrics_path);

    const std::uint64_t eval_seed = derive_seed(cfg.seed, 0xEE11);
    auto run_eval = [&]() {
        auto theta = ctx.params.theta.snapshot();
        auto theta_v = ctx.params.theta_v.snapshot();
        return evaluate_params<float>(nets, theta, theta_v, *eval_env, cfg.eval_episodes, eval_seed);
    };

    const double t0 = clock->now();
    std::int64_t last_emitted_frames = -1;
    auto emit = [&](std::int64_t frames, double wall, double mean, double std_dev) {
        if (frames == last_emitted_frames) return;
        MetricRecord r{run_id, cfg.threads, wall, frames, mean, std_dev, lr.at(frames)};
        metrics.append(r);
        result.final_metric = r;
        last_emitted_frames = frames;
        if (cfg.score_target && !result.reached_target && mean >= *cfg.score_target) {
            result.reached_target = true;
            result.time_to_target = wall;
            result.frames_at_target = frames;
            ctx.stop.store(true, std::memory_order_relaxed);
        }
    };

    if (cfg.deterministic) {
        // Serial mode: one actor on this thread, paused exactly at the
        // evaluation boundaries. Wall clock is a frame-derived surrogate so
        // reruns produce byte-identical metric files.
        auto env = make_environment<float>(cfg.env, derive_seed(cfg.seed, 1000));
        ActorLearner<float> actor(algo, ctx, *env, cfg.hp, lr,
                                  detail::build_optimizers(cfg, nets, g_theta, g_theta_v), 0,
                                  derive_seed(cfg.seed, 2000));
        std::int64_t next_eval = std::min(cfg.eval_interval, cfg.total_frames);
        while (ctx.counter.value() < cfg.total_frames && !ctx.stop.load()) {
            actor.run_until(std::min(next_eval, cfg.total_frames));
            const std::int64_t frames = ctx.counter.value();
            if (frames >= next_eval) {
                auto [mean, sd] = run_eval();
                emit(frames, static_cast<double>(frames) / 1000.0, mean, sd);
                while (next_eval <= frames) next_eval += cfg.eval_interval;
            }
            if (actor.stats().faulted) break;
        }
        result.elapsed_seconds = clock->now() - t0;
        result.per_thread.push_back(actor.stats());
    } else {
        std::vector<std::unique_ptr<Environment<float>>> envs;
        std::vector<std::unique_ptr<ActorLearner<float>>> actors;
        for (int t = 0; t < cfg.threads; ++t) {
            envs.push_back(make_environment<float>(cfg.env, derive_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(t))));
            actors.push_back(std::make_unique<ActorLearner<float>>(
                algo, ctx, *envs.back(), cfg.hp, lr,
                detail::build_optimizers(cfg, nets, g_theta, g_theta_v), t,
                derive_seed(cfg.seed, 2000 + static_cast<std::uint64_t>(t))));
        }
        std::vector<std::thread> pool;
        pool.reserve(actors.size());
        for (auto& actor : actors)
            pool.emplace_back([&actor, &cfg] { actor->run_until(cfg.total_frames); });

        std::int64_t next_eval = std::min(cfg.eval_interval, cfg.total_frames);
        while (ctx.counter.value() < cfg.total_frames && !ctx.stop.load()) {
            std::this_thread::sleep_for(std::chrono::microseconds(500));
            if (ctx.counter.value() >= next_eval) {
                const std::int64_t frames = ctx.counter.value();
                auto [mean, sd] = run_eval();
                emit(frames, clock->now() - t0, mean, sd);
                while (next_eval <= frames) next_eval += cfg.eval_interval;
            }
        }
        for (auto& th : pool) th.join();
        result.elapsed_seconds = clock->now() - t0;
        for (auto& actor : actors) result.per_thread.push_back(actor->stats());
    }

    result.frames_run = ctx.counter.value();
    if (result.elapsed_seconds > 0.0)
        result.steps_per_second = static_cast<double>(result.frames_run) / result.elapsed_seconds;

    for (const auto& s : result.per_thread) {
        if (s.faulted) {
            result.faulted = true;
            result.fault = s.fault;
        }
    }

    // Final evaluation point and checkpoint (flushed even after a fault).
    {
        auto [mean, sd] = run_eval();
        const double wall = cfg.deterministic ? static_cast<double>(result.frames_run) / 1000.0
                                              : clock->now() - t0;
        emit(result.frames_run, wall, mean, sd);
    }
    checkpoint_save(result.checkpoint_path, nets, ctx.params.theta.snapshot(),
                    ctx.params.theta_v.snapshot());
    return result;
}

// Greedy evaluation of a saved checkpoint against a config's environment.
inline std::pair<double, double> evaluate_checkpoint(const std::string& checkpoint_path,
                                                     const RunConfig& cfg) {
    auto env = make_environment<float>(cfg.env, derive_seed(cfg.seed, 0xE7A1));
    const NetPair nets = build_nets(cfg, *env);
    auto loaded = checkpoint_load(checkpoint_path, nets);
    return evaluate_params<float>(nets, loaded.theta, loaded.theta_v, *env, cfg.eval_episodes,
                                  derive_seed(cfg.seed, 0xEE11));
}

// ---------------------------------------------------------------------------
// Learning-rate sweep: n independent seeded runs with rates drawn
// log-uniformly from [lo, hi].

inline double sample_log_uniform(Rng& rng, double lo, double hi) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

struct SweepRow {
    int index = 0;
    double eta0 = 0.0;
    std::uint64_t seed = 0;
    double final_score = 0.0;
    bool faulted = false;
};

inline std::vector<SweepRow> sweep(const RunConfig& base, int n_samples, double lr_low,
                                   double lr_high) {
    if (n_samples < 1) throw ConfigError("sweep: need at least one sample");
    if (!(lr_low > 0.0 && lr_low <= lr_high)) throw ConfigError("sweep: need 0 < lr_low <= lr_high");
    Rng rng(derive_seed(base.seed, 0x51EE9));
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        RunConfig cfg = base;
        cfg.lr = sample_log_uniform(rng, lr_low, lr_high);
        cfg.seed = derive_seed(base.seed, 7000 + static_cast<std::uint64_t>(i));
        cfg.run_id = base.derived_run_id() + "-sweep" + std::to_string(i);
        auto r = train(cfg);
        rows.push_back({i, cfg.lr, cfg.seed, r.final_metric.eval_mean_score, r.faulted});
    }

    std::filesystem::create_directories(base.out_dir);
    std::ofstream out(base.out_dir + "/" + base.derived_run_id() + ".sweep.jsonl", std::ios::trunc);
    std::vector<SweepRow> by_score = rows;
    std::sort(by_score.begin(), by_score.end(),
              [](const SweepRow& a, const SweepRow& b) { return a.final_score > b.final_score; });
    for (std::size_t rank = 0; rank < by_score.size(); ++rank) {
        nlohmann::json j;
        j["rank"] = rank;
        j["sample"] = by_score[rank].index;
        j["eta0"] = by_score[rank].eta0;
        j["seed"] = by_score[rank].seed;
        j["final_score"] = by_score[rank].final_score;
        j["faulted"] = by_score[rank].faulted;
        out << j.dump() << '\n';
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Scalability benchmark: median time-to-reference-score per thread count,
// speedup(n) = time(1) / time(n).

struct ScalingRow {
    int threads = 0;
    std::vector<double> times;  // reached runs only
    int runs = 0;
    int reached = 0;
    double median_time = 0.0;          // valid when reached > 0
    std::optional<double> speedup;     // empty when unreached
};

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Pure speedup arithmetic over measured times, separated out for direct
// testing: speedup(1) is exactly 1 and unreached entries stay empty.
inline std::vector<ScalingRow> compute_speedup_table(std::vector<ScalingRow> rows) {
    double base_time = 0.0;
    bool have_base = false;
    for (auto& row : rows) {
        if (row.threads == 1 && row.reached > 0) {
            row.median_time = median_of(row.times);
            base_time = row.median_time;
            have_base = true;
        }
    }
    for (auto& row : rows) {
        if (row.reached == 0) continue;
        row.median_time = median_of(row.times);
        if (have_base && row.median_time > 0.0) row.speedup = base_time / row.median_time;
    }
    return rows;
}

inline std::vector<ScalingRow> bench_scaling(const RunConfig& base,
                                             const std::vector<int>& thread_counts,
                                             double reference_score, int runs_per_point = 3,
                                             Clock* clock = nullptr) {
    if (runs_per_point < 1) throw ConfigError("bench_scaling: need at least one run per point");
    std::vector<ScalingRow> rows;
    for (int n : thread_counts) {
        ScalingRow row;
        row.threads = n;
        row.runs = runs_per_point;
        for (int r = 0; r < runs_per_point; ++r) {
            RunConfig cfg = base;
            cfg.threads = n;
            cfg.deterministic = false;
            cfg.score_target = reference_score;
            cfg.seed = derive_seed(base.seed, static_cast<std::uint64_t>(n) * 100 + static_cast<std::uint64_t>(r));
            cfg.run_id = base.derived_run_id() + "-bench-t" + std::to_string(n) + "-r" + std::to_string(r);
            auto result = train(cfg, clock);
            if (result.reached_target) {
                row.times.push_back(result.time_to_target);
                ++row.reached;
            }
        }
        rows.push_back(std::move(row));
    }
    rows = compute_speedup_table(std::move(rows));

    std::filesystem::create_directories(base.out_dir);
    std::ofstream out(base.out_dir + "/" + base.derived_run_id() + ".scaling.jsonl", std::ios::trunc);
    for (const auto& row : rows) {
        nlohmann::json j;
        j["threads"] = row.threads;
        j["runs"] = row.runs;
        j["reached"] = row.reached;
        if (row.reached > 0) {
            j["median_time_s"] = row.median_time;
            if (row.speedup) j["speedup"] = *row.speedup;
        } else {
            j["unreached"] = true;
        }
        out << j.dump() << '\n';
    }
    return rows;
}

}  // namespace arl
