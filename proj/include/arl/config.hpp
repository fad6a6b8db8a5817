#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arl/algorithms.hpp"
#include "arl/environments.hpp"
#include "arl/errors.hpp"
#include "arl/optimizer.hpp"

namespace arl {

// Full description of one training run. Serializes to a human-readable
// JSON file with a bit-stable round trip.
struct RunConfig {
    std::string algo = "qn";  // q1 | sarsa1 | qn | a3c | a3c_continuous
    EnvConfig env;
    int threads = 4;
    std::int64_t total_frames = 100000;
    HyperParams hp;

    std::string optimizer = "shared-rmsprop";
    double optimizer_alpha = 0.99;  // momentum, or the rmsprop decay
    double eps_reg = 0.1;
    double lr = 1e-3;
    bool lr_anneal = true;  // anneal to 0 over total_frames

    std::vector<int> hidden{64};
    std::uint64_t seed = 1;
    std::int64_t eval_interval = 10000;
    int eval_episodes = 10;
    std::string out_dir = "out";
    std::string run_id;  // derived from the config when empty
    bool deterministic = false;
    std::optional<double> score_target;

    // sweep parameters
    double lr_low = 1e-4;
    double lr_high = 1e-2;
    int sweep_samples = 50;

    bool operator==(const RunConfig&) const = default;

    AlgoKind algo_kind() const { return parse_algo_kind(algo); }
    OptimizerKind optimizer_kind() const { return parse_optimizer_kind(optimizer); }

    void validate() const {
        algo_kind();
        optimizer_kind();
        if (threads < 1) throw ConfigError("threads must be >= 1");
        if (total_frames < 1) throw ConfigError("total_frames must be >= 1");
        if (hp.t_max < 1 || hp.i_async_update < 1) throw ConfigError("t_max and the update period must be >= 1");
        if (!(hp.gamma > 0.0 && hp.gamma <= 1.0)) throw ConfigError("gamma must be in (0,1]");
        if (hp.beta < 0.0) throw ConfigError("beta must be >= 0");
        if (hp.target_interval < 1) throw ConfigError("target interval must be >= 1");
        if (lr <= 0.0) throw ConfigError("learning rate must be > 0");
        if (eps_reg <= 0.0) throw ConfigError("eps_reg must be > 0");
        if (!(optimizer_alpha >= 0.0 && optimizer_alpha < 1.0))
            throw ConfigError("optimizer alpha must be in [0,1)");
        if (eval_interval < 1) throw ConfigError("eval interval must be >= 1");
        if (eval_episodes < 1) throw ConfigError("eval episodes must be >= 1");
        if (hp.clip_norm && *hp.clip_norm <= 0.0) throw ConfigError("clip norm must be > 0");
        if (!(lr_low > 0.0 && lr_low <= lr_high)) throw ConfigError("need 0 < lr_low <= lr_high");
        if (sweep_samples < 1) throw ConfigError("sweep samples must be >= 1");
        for (int h : hidden)
            if (h < 1) throw ConfigError("hidden layer sizes must be >= 1");
        if (deterministic && threads != 1)
            throw ConfigError("deterministic mode requires threads = 1");
        if (algo == "a3c_continuous") {
            if (env.id != "pointmass") throw ConfigError("a3c_continuous needs a continuous-action environment");
        } else if (env.id == "pointmass") {
            throw ConfigError("pointmass needs the a3c_continuous algorithm");
        }
    }

    std::string derived_run_id() const {
        if (!run_id.empty()) return run_id;
        return algo + "-" + env.id + "-t" + std::to_string(threads) + "-s" + std::to_string(seed);
    }

    LearningRateSchedule lr_schedule() const {
        return LearningRateSchedule{lr, lr_anneal ? total_frames : 0};
    }
};

// Builds the network pair for a config against the environment's shapes.
template <typename S>
NetPair build_nets(const RunConfig& cfg, const Environment<S>& env) {
    std::vector<int> sizes;
    sizes.push_back(env.obs_dim());
    for (int h : cfg.hidden) sizes.push_back(h);
    NetPair nets;
    switch (cfg.algo_kind()) {
        case AlgoKind::OneStepQ:
        case AlgoKind::OneStepSarsa:
        case AlgoKind::NStepQ:
            sizes.push_back(env.num_actions());
            nets.policy = MLPSpec{sizes, HeadKind::QValues};
            break;
        case AlgoKind::A3C:
            sizes.push_back(env.num_actions());
            nets.policy = MLPSpec{sizes, HeadKind::PolicyValueShared};
            break;
        case AlgoKind::A3CContinuous: {
            sizes.push_back(env.action_dim());
            nets.policy = MLPSpec{sizes, HeadKind::GaussianPolicy};
            std::vector<int> vsizes(sizes.begin(), sizes.end() - 1);
            vsizes.push_back(1);
            nets.value = MLPSpec{vsizes, HeadKind::QValues};
            break;
        }
    }
    nets.validate();
    return nets;
}

// --------------------------------------------------------------------------
// JSON (de)serialization

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["algo"] = c.algo;
    j["env"] = {{"id", c.env.id},
                {"chain", {{"n_states", c.env.chain.n_states}, {"episode_cap", c.env.chain.episode_cap}}},
                {"maze",
                 {{"width", c.env.maze.width},
                  {"height", c.env.maze.height},
                  {"apples", c.env.maze.apples},
                  {"episode_cap", c.env.maze.episode_cap},
                  {"view_radius", c.env.maze.view_radius}}},
                {"pointmass", {{"episode_cap", c.env.pointmass.episode_cap}, {"dt", c.env.pointmass.dt}}}};
    j["threads"] = c.threads;
    j["total_frames"] = c.total_frames;
    j["hp"] = {{"gamma", c.hp.gamma},
               {"t_max", c.hp.t_max},
               {"i_async_update", c.hp.i_async_update},
               {"target_interval", c.hp.target_interval},
               {"beta", c.hp.beta},
               {"epsilon_values", c.hp.epsilon_support.values},
               {"epsilon_probs", c.hp.epsilon_support.probs},
               {"anneal_frames", c.hp.anneal_frames},
               {"resample_epsilon_each_episode", c.hp.resample_epsilon_each_episode}};
    if (c.hp.clip_norm) j["hp"]["clip_norm"] = *c.hp.clip_norm;
    j["optimizer"] = c.optimizer;
    j["optimizer_alpha"] = c.optimizer_alpha;
    j["eps_reg"] = c.eps_reg;
    j["lr"] = c.lr;
    j["lr_anneal"] = c.lr_anneal;
    j["hidden"] = c.hidden;
    j["seed"] = c.seed;
    j["eval_interval"] = c.eval_interval;
    j["eval_episodes"] = c.eval_episodes;
    j["out_dir"] = c.out_dir;
    j["run_id"] = c.run_id;
    j["deterministic"] = c.deterministic;
    if (c.score_target) j["score_target"] = *c.score_target;
    j["lr_low"] = c.lr_low;
    j["lr_high"] = c.lr_high;
    j["sweep_samples"] = c.sweep_samples;
    return j;
}

inline std::string render_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

inline RunConfig config_from_json(const nlohmann::json& j) {
    try {
        RunConfig c;
        c.algo = j.at("algo").get<std::string>();
        const auto& je = j.at("env");
        c.env.id = je.at("id").get<std::string>();
        c.env.chain.n_states = je.at("chain").at("n_states").get<int>();
        c.env.chain.episode_cap = je.at("chain").at("episode_cap").get<int>();
        c.env.maze.width = je.at("maze").at("width").get<int>();
        c.env.maze.height = je.at("maze").at("height").get<int>();
        c.env.maze.apples = je.at("maze").at("apples").get<int>();
        c.env.maze.episode_cap = je.at("maze").at("episode_cap").get<int>();
        c.env.maze.view_radius = je.at("maze").at("view_radius").get<int>();
        c.env.pointmass.episode_cap = je.at("pointmass").at("episode_cap").get<int>();
        c.env.pointmass.dt = je.at("pointmass").at("dt").get<double>();
        c.threads = j.at("threads").get<int>();
        c.total_frames = j.at("total_frames").get<std::int64_t>();
        const auto& jh = j.at("hp");
        c.hp.gamma = jh.at("gamma").get<double>();
        c.hp.t_max = jh.at("t_max").get<int>();
        c.hp.i_async_update = jh.at("i_async_update").get<int>();
        c.hp.target_interval = jh.at("target_interval").get<std::int64_t>();
        c.hp.beta = jh.at("beta").get<double>();
        c.hp.epsilon_support.values = jh.at("epsilon_values").get<std::array<double, 3>>();
        c.hp.epsilon_support.probs = jh.at("epsilon_probs").get<std::array<double, 3>>();
        c.hp.anneal_frames = jh.at("anneal_frames").get<std::int64_t>();
        c.hp.resample_epsilon_each_episode = jh.at("resample_epsilon_each_episode").get<bool>();
        if (jh.contains("clip_norm")) c.hp.clip_norm = jh.at("clip_norm").get<double>();
        c.optimizer = j.at("optimizer").get<std::string>();
        c.optimizer_alpha = j.at("optimizer_alpha").get<double>();
        c.eps_reg = j.at("eps_reg").get<double>();
        c.lr = j.at("lr").get<double>();
        c.lr_anneal = j.at("lr_anneal").get<bool>();
        c.hidden = j.at("hidden").get<std::vector<int>>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.eval_interval = j.at("eval_interval").get<std::int64_t>();
        c.eval_episodes = j.at("eval_episodes").get<int>();
        c.out_dir = j.at("out_dir").get<std::string>();
        c.run_id = j.at("run_id").get<std::string>();
        c.deterministic = j.at("deterministic").get<bool>();
        if (j.contains("score_target")) c.score_target = j.at("score_target").get<double>();
        c.lr_low = j.at("lr_low").get<double>();
        c.lr_high = j.at("lr_high").get<double>();
        c.sweep_samples = j.at("sweep_samples").get<int>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
}

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace arl
