#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include "arl/environments.hpp"

using namespace arl;

TEST_CASE("chain reset starts at the leftmost state", "[env]") {
    ChainMDP<float> env;
    auto obs = env.reset();
    REQUIRE(obs.size() == 5);
    CHECK(obs[0] == 1.0f);
    for (int i = 1; i < 5; ++i) CHECK(obs[static_cast<std::size_t>(i)] == 0.0f);
}

TEST_CASE("chain transitions, goal reward and truncation", "[env]") {
    ChainMDP<float> env{ChainConfig{5, 50}};
    env.reset();
    auto s1 = env.step(ChainMDP<float>::kRight);
    CHECK(s1.reward == 0.0f);
    CHECK_FALSE(s1.terminal);

    // left from state 1 bumps back to 0; left again stays at 0
    env.step(ChainMDP<float>::kLeft);
    auto s2 = env.step(ChainMDP<float>::kLeft);
    CHECK(s2.observation[0] == 1.0f);

    // straight run right: terminal +1 on entering the last state
    env.reset();
    for (int i = 0; i < 3; ++i) {
        auto s = env.step(ChainMDP<float>::kRight);
        CHECK_FALSE(s.terminal);
    }
    auto goal = env.step(ChainMDP<float>::kRight);
    CHECK(goal.reward == 1.0f);
    CHECK(goal.terminal);

    // cap: 50 left-steps truncate without terminal
    env.reset();
    EnvStep<float> last;
    for (int i = 0; i < 50; ++i) last = env.step(ChainMDP<float>::kLeft);
    CHECK(last.truncated);
    CHECK_FALSE(last.terminal);

    env.reset();
    CHECK_THROWS_AS(env.step(7), ConfigError);
}

TEST_CASE("value iteration solves the chain in closed form", "[env]") {
    ChainMDP<double> env{ChainConfig{5, 50}};
    auto mdp = env.to_mdp();

    auto q99 = value_iteration(mdp, 0.99, 1e-10);
    CHECK(q99[0 * 2 + ChainMDP<double>::kRight] == Catch::Approx(std::pow(0.99, 3)).margin(1e-8));

    auto q50 = value_iteration(mdp, 0.5, 1e-10);
    CHECK(q50[0 * 2 + ChainMDP<double>::kRight] == Catch::Approx(0.125).margin(1e-9));
    // left from s0 stays, then the best path costs one extra discount step
    CHECK(q50[0 * 2 + ChainMDP<double>::kLeft] == Catch::Approx(0.5 * 0.125).margin(1e-9));

    // optimal policy is "right" everywhere it matters
    auto pi = greedy_policy(q99, 2);
    for (int s = 0; s < 4; ++s) CHECK(pi[static_cast<std::size_t>(s)] == ChainMDP<double>::kRight);

    // convergence consistency between tolerances
    auto loose = value_iteration(mdp, 0.99, 1e-6);
    for (std::size_t i = 0; i < q99.size(); ++i)
        CHECK(std::fabs(loose[i] - q99[i]) < 1e-5);
}

TEST_CASE("value iteration handles an absorbing loop", "[env]") {
    TabularMDP mdp;
    mdp.n_states = 1;
    mdp.n_actions = 1;
    mdp.transition = {{{0, 1.0, false}}};
    auto q = value_iteration(mdp, 0.5, 1e-12);
    CHECK(q[0] == Catch::Approx(2.0).margin(1e-10));

    TabularMDP empty;
    CHECK_THROWS_AS(value_iteration(empty, 0.9, 1e-6), ConfigError);
    CHECK_THROWS_AS(value_iteration(mdp, 0.0, 1e-6), ConfigError);
}

TEST_CASE("maze layouts are deterministic per seed and distinct across seeds", "[env]") {
    GridMaze<float> a{MazeConfig{}, 1};
    GridMaze<float> b{MazeConfig{}, 2};
    auto obs_a = a.reset_seeded(424242);
    auto obs_b = b.reset_seeded(424242);
    CHECK(obs_a == obs_b);
    CHECK(a.layout_hash() == b.layout_hash());

    std::set<std::uint64_t> hashes;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        a.reset_seeded(seed);
        hashes.insert(a.layout_hash());
    }
    // different seeds give different layouts with probability ~ 1
    CHECK(hashes.size() >= 995);
}

TEST_CASE("generated mazes are fully connected", "[env]") {
    GridMaze<float> env{MazeConfig{}, 7};
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        env.reset_seeded(seed);
        INFO("seed " << seed);
        REQUIRE(env.fully_connected());
    }
}

TEST_CASE("maze rewards are bounded and the portal teleports", "[env]") {
    GridMaze<float> env{MazeConfig{6, 6, 3, 100}, 99};
    env.reset();
    double episode_total = 0;
    for (int i = 0; i < 100; ++i) {
        auto s = env.step(i % 4);
        CHECK(std::fabs(s.reward) <= 10.0f);
        episode_total += s.reward;
        if (s.truncated) break;
    }
    CHECK(episode_total >= 0.0);
}

TEST_CASE("maze trajectories are reproducible from the seed", "[env]") {
    GridMaze<float> a{MazeConfig{}, 5}, b{MazeConfig{}, 5};
    a.reset();
    b.reset();
    for (int i = 0; i < 200; ++i) {
        auto sa = a.step(i % 4);
        auto sb = b.step(i % 4);
        REQUIRE(sa.observation == sb.observation);
        REQUIRE(sa.reward == sb.reward);
    }
}

TEST_CASE("frozen maze variant is enumerable and solvable", "[env]") {
    // unenumerable apple counts are rejected up front
    GridMaze<double> big{MazeConfig{16, 16, 40, 100}, 3};
    big.reset_seeded(1);
    CHECK_THROWS_AS(big.frozen_mdp(), ConfigError);

    GridMaze<double> env{MazeConfig{5, 5, 2, 100}, 3};
    env.reset_seeded(11);
    auto mdp = env.frozen_mdp();
    CHECK(mdp.n_states > 0);
    auto q = value_iteration(mdp, 0.95, 1e-8);
    // reaching the portal is worth at least gamma^k * 10 from anywhere in a
    // connected maze, so every state's best action value is positive
    for (int s = 0; s < mdp.n_states; ++s) {
        double best = q[static_cast<std::size_t>(s) * 4];
        for (int a2 = 1; a2 < 4; ++a2) best = std::max(best, q[static_cast<std::size_t>(s) * 4 + a2]);
        CHECK(best > 0.0);
    }
}

TEST_CASE("point mass dynamics, fixed point and horizon", "[env]") {
    PointMass1D<double> env{PointMassConfig{}, 13};
    auto obs = env.reset_seeded(5);
    REQUIRE(obs.size() == 3);

    // at the target with zero velocity, zero action: reward 0, no motion
    PointMass1D<double> still{PointMassConfig{}, 0};
    // craft: find a seed start, then drive to verify clamping instead; use
    // the reward identity directly: reward = -(pos-target)^2*dt
    auto o = still.reset_seeded(77);
    const double pos = o[0], target = o[2];
    std::vector<double> zero_force{0.0};
    auto s = still.step(zero_force);
    CHECK(s.reward == Catch::Approx(-(pos - target) * (pos - target) * 0.05).margin(1e-12));
    CHECK(s.observation[0] == Catch::Approx(pos).margin(1e-12));  // vel was 0

    // horizon end is terminal
    PointMass1D<double> run{PointMassConfig{}, 1};
    run.reset_seeded(1);
    EnvStep<double> last;
    std::vector<double> push{1.0};
    for (int i = 0; i < 200; ++i) last = run.step(push);
    CHECK(last.terminal);

    // actions are clamped, so position stays within documented bounds
    PointMass1D<double> clamp_env{PointMassConfig{}, 2};
    clamp_env.reset_seeded(2);
    std::vector<double> huge{1000.0};
    for (int i = 0; i < 150; ++i) {
        auto st = clamp_env.step(huge);
        CHECK(std::fabs(st.observation[0]) <= 2.0);
        CHECK(std::fabs(st.reward) <= 16.0 * 0.05);
    }
}

TEST_CASE("environment factory dispatches by id", "[env]") {
    EnvConfig cfg;
    cfg.id = "maze";
    auto env = make_environment<float>(cfg, 1);
    CHECK(env->num_actions() == 4);
    CHECK(env->obs_dim() == 3 * 5 * 5 + 8);  // default view radius 2

    cfg.id = "pointmass";
    auto pm = make_environment<float>(cfg, 1);
    CHECK(pm->continuous());
    CHECK_THROWS_AS(pm->step(0), ConfigError);

    cfg.id = "chain";
    auto chain = make_environment<float>(cfg, 1);
    std::vector<float> force{0.5f};
    CHECK_THROWS_AS(chain->step(std::span<const float>(force)), ConfigError);

    cfg.id = "nope";
    CHECK_THROWS_AS(make_environment<float>(cfg, 1), ConfigError);
}
