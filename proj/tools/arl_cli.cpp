// arl: train/evaluate/sweep/benchmark the asynchronous RL engine.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime fault.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arl/harness.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw arl::ConfigError("not an integer list: " + text);
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw arl::ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliFlags {
    std::string config_path;
    std::string hidden;
    double clip_norm = 0.0;
    double score_target = 0.0;
    bool print_config = false;
};

// Defaults -> flags -> config file (the file, when given, wins).
void attach_common(CLI::App* cmd, arl::RunConfig& cfg, CliFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file; overrides all flags");
    cmd->add_option("--algo", cfg.algo, "q1 | sarsa1 | qn | a3c | a3c_continuous");
    cmd->add_option("--env", cfg.env.id, "chain | maze | pointmass");
    cmd->add_option("--threads", cfg.threads, "actor-learner threads");
    cmd->add_option("--total-frames", cfg.total_frames, "global frame budget");
    cmd->add_option("--t-max", cfg.hp.t_max, "rollout length / update period");
    cmd->add_option("--gamma", cfg.hp.gamma, "discount factor");
    cmd->add_option("--beta", cfg.hp.beta, "entropy regularization weight");
    cmd->add_option("--optimizer", cfg.optimizer, "sgd | rmsprop | shared-rmsprop");
    cmd->add_option("--lr", cfg.lr, "initial learning rate");
    cmd->add_option("--target-interval", cfg.hp.target_interval, "frames between target refreshes");
    cmd->add_option("--clip-norm", flags.clip_norm, "global gradient norm clip (off by default)");
    cmd->add_option("--anneal-frames", cfg.hp.anneal_frames, "exploration annealing horizon");
    cmd->add_option("--momentum", cfg.optimizer_alpha, "momentum / rmsprop decay");
    cmd->add_option("--eps-reg", cfg.eps_reg, "rmsprop denominator regularizer");
    cmd->add_option("--hidden", flags.hidden, "hidden layer sizes, comma separated (\"\" = linear)");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--eval-interval", cfg.eval_interval, "frames between evaluations");
    cmd->add_option("--eval-episodes", cfg.eval_episodes, "episodes per evaluation");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--run-id", cfg.run_id, "run identifier (derived from config when empty)");
    cmd->add_option("--score-target", flags.score_target, "stop once the evaluation reaches this score");
    cmd->add_flag("--deterministic", cfg.deterministic, "serial mode: forces threads=1");
    cmd->add_flag(
        "--no-lr-anneal", [&cfg](std::int64_t) { cfg.lr_anneal = false; },
        "hold the learning rate constant");
    cmd->add_flag("--print-config", flags.print_config, "print the effective config and exit");
}

arl::RunConfig finalize(const CLI::App* cmd, arl::RunConfig cfg, const CliFlags& flags) {
    if (cmd->count("--hidden")) {
        cfg.hidden = parse_int_list(flags.hidden);
    }
    if (cmd->count("--clip-norm")) cfg.hp.clip_norm = flags.clip_norm;
    if (cmd->count("--score-target")) cfg.score_target = flags.score_target;
    if (cfg.deterministic) cfg.threads = 1;
    if (!flags.config_path.empty()) cfg = arl::parse_config(read_file(flags.config_path));
    cfg.validate();
    return cfg;
}

int run_train(const arl::RunConfig& cfg) {
    auto result = arl::train(cfg);
    std::printf("run        %s\n", cfg.derived_run_id().c_str());
    std::printf("frames     %lld\n", static_cast<long long>(result.frames_run));
    std::printf("steps/s    %.0f\n", result.steps_per_second);
    std::printf("eval mean  %.4f (std %.4f)\n", result.final_metric.eval_mean_score,
                result.final_metric.eval_std);
    std::printf("metrics    %s\n", result.metrics_path.c_str());
    std::printf("checkpoint %s\n", result.checkpoint_path.c_str());
    if (result.reached_target)
        std::printf("reached score target at %lld frames (%.3f s)\n",
                    static_cast<long long>(result.frames_at_target), result.time_to_target);
    if (result.faulted) {
        std::fprintf(stderr, "run fault: %s\n", result.fault.c_str());
        return 3;
    }
    return 0;
}

int run_sweep(const arl::RunConfig& cfg) {
    auto rows = arl::sweep(cfg, cfg.sweep_samples, cfg.lr_low, cfg.lr_high);
    std::vector<arl::SweepRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(),
              [](const arl::SweepRow& a, const arl::SweepRow& b) { return a.final_score > b.final_score; });
    std::printf("%-6s %-12s %-12s\n", "rank", "eta0", "final_score");
    for (std::size_t i = 0; i < sorted.size(); ++i)
        std::printf("%-6zu %-12.6g %-12.6g\n", i, sorted[i].eta0, sorted[i].final_score);
    for (const auto& row : rows)
        if (row.faulted) return 3;
    return 0;
}

int run_bench(const arl::RunConfig& cfg, const std::string& counts_text, double reference,
              int runs_per_point) {
    auto counts = parse_int_list(counts_text);
    if (counts.empty()) throw arl::ConfigError("bench-scaling: empty thread-count list");
    auto rows = arl::bench_scaling(cfg, counts, reference, runs_per_point);
    std::printf("%-8s %-10s %-14s %-10s\n", "threads", "reached", "median_time_s", "speedup");
    for (const auto& row : rows) {
        if (row.reached > 0 && row.speedup)
            std::printf("%-8d %d/%-8d %-14.3f %-10.2f\n", row.threads, row.reached, row.runs,
                        row.median_time, *row.speedup);
        else if (row.reached > 0)
            std::printf("%-8d %d/%-8d %-14.3f %-10s\n", row.threads, row.reached, row.runs,
                        row.median_time, "n/a");
        else
            std::printf("%-8d %d/%-8d %-14s %-10s\n", row.threads, row.reached, row.runs,
                        "unreached", "-");
    }
    return 0;
}

int run_eval(const arl::RunConfig& cfg, const std::string& checkpoint) {
    auto [mean, sd] = arl::evaluate_checkpoint(checkpoint, cfg);
    std::printf("episodes %d  mean %.6f  std %.6f\n", cfg.eval_episodes, mean, sd);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asynchronous reinforcement learning engine"};
    app.require_subcommand(1);

    arl::RunConfig cfg_train, cfg_sweep, cfg_bench, cfg_eval;
    CliFlags fl_train, fl_sweep, fl_bench, fl_eval;

    auto* train_cmd = app.add_subcommand("train", "run one training job");
    attach_common(train_cmd, cfg_train, fl_train);

    auto* sweep_cmd = app.add_subcommand("sweep", "log-uniform learning-rate sweep");
    attach_common(sweep_cmd, cfg_sweep, fl_sweep);
    sweep_cmd->add_option("--lr-low", cfg_sweep.lr_low, "sweep lower bound");
    sweep_cmd->add_option("--lr-high", cfg_sweep.lr_high, "sweep upper bound");
    sweep_cmd->add_option("--samples", cfg_sweep.sweep_samples, "number of sampled runs");

    auto* bench_cmd = app.add_subcommand("bench-scaling", "time-to-reference-score speedups");
    attach_common(bench_cmd, cfg_bench, fl_bench);
    std::string thread_counts = "1,2,4";
    double reference_score = 0.0;
    int runs_per_point = 3;
    bench_cmd->add_option("--thread-counts", thread_counts, "comma-separated thread counts");
    bench_cmd->add_option("--reference-score", reference_score, "score that stops the clock")
        ->required();
    bench_cmd->add_option("--runs-per-point", runs_per_point, "seeds per thread count");

    auto* eval_cmd = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
    attach_common(eval_cmd, cfg_eval, fl_eval);
    std::string checkpoint_path;
    eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed()) {
            auto cfg = finalize(train_cmd, cfg_train, fl_train);
            if (fl_train.print_config) {
                std::fputs(arl::render_config(cfg).c_str(), stdout);
                return 0;
            }
            return run_train(cfg);
        }
        if (sweep_cmd->parsed()) {
            auto cfg = finalize(sweep_cmd, cfg_sweep, fl_sweep);
            if (fl_sweep.print_config) {
                std::fputs(arl::render_config(cfg).c_str(), stdout);
                return 0;
            }
            return run_sweep(cfg);
        }
        if (bench_cmd->parsed()) {
            auto cfg = finalize(bench_cmd, cfg_bench, fl_bench);
            return run_bench(cfg, thread_counts, reference_score, runs_per_point);
        }
        if (eval_cmd->parsed()) {
            auto cfg = finalize(eval_cmd, cfg_eval, fl_eval);
            return run_eval(cfg, checkpoint_path);
        }
    } catch (const arl::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fault: %s\n", e.what());
        return 3;
    }
    return 0;
}
