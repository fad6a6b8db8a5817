#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "arl/errors.hpp"
#include "arl/rng.hpp"

namespace arl {

template <typename S>
struct EnvStep {
    std::vector<S> observation;
    S reward{};
    bool terminal = false;   // true episode end; targets bootstrap with 0
    bool truncated = false;  // step-cap cutoff; targets bootstrap from estimates
};

// Single-owner environment. Each actor-learner thread constructs its own
// instance; construction from a shared immutable config is concurrent-safe.
template <typename S>
class Environment {
public:
    virtual ~Environment() = default;

    virtual int obs_dim() const = 0;
    virtual int num_actions() const = 0;  // 0 when the action space is continuous
    virtual int action_dim() const = 0;   // 0 when the action space is discrete
    bool continuous() const { return action_dim() > 0; }

    // Start the next episode using the environment's own generator.
    virtual std::vector<S> reset() = 0;
    // Start an episode fully determined by `seed`.
    virtual std::vector<S> reset_seeded(std::uint64_t seed) = 0;

    virtual EnvStep<S> step(int action) {
        (void)action;
        throw ConfigError("environment does not take discrete actions");
    }
    virtual EnvStep<S> step(std::span<const S> action) {
        (void)action;
        throw ConfigError("environment does not take continuous actions");
    }
};

// ---------------------------------------------------------------------------
// Enumerable MDP + value iteration (the exact oracle for acceptance tests)

struct Transition {
    int next_state;
    double reward;
    bool terminal;
};

struct TabularMDP {
    int n_states = 0;
    int n_actions = 0;
    // deterministic: transition[s][a]
    std::vector<std::vector<Transition>> transition;
};

// Solves Q* by backing up Q(s,a) = r + gamma * max_a' Q(s',a') until the
// max-norm Bellman residual falls below tol. Terminal transitions carry no
// continuation value.
inline std::vector<double> value_iteration(const TabularMDP& mdp, double gamma, double tol,
                                           std::int64_t max_iters = 1000000) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("value_iteration: gamma must be in (0,1]");
    if (mdp.n_states <= 0 || mdp.n_actions <= 0)
        throw ConfigError("value_iteration: empty MDP is unsupported");
    std::vector<double> q(static_cast<std::size_t>(mdp.n_states) * mdp.n_actions, 0.0);
    auto at = [&](int s, int a) -> double& { return q[static_cast<std::size_t>(s) * mdp.n_actions + a]; };
    for (std::int64_t it = 0; it < max_iters; ++it) {
        double residual = 0.0;
        for (int s = 0; s < mdp.n_states; ++s) {
            for (int a = 0; a < mdp.n_actions; ++a) {
                const Transition& t = mdp.transition[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
                double backup = t.reward;
                if (!t.terminal) {
                    double best = at(t.next_state, 0);
                    for (int a2 = 1; a2 < mdp.n_actions; ++a2)
                        best = std::max(best, at(t.next_state, a2));
                    backup += gamma * best;
                }
                residual = std::max(residual, std::fabs(backup - at(s, a)));
                at(s, a) = backup;
            }
        }
        if (residual <= tol) return q;
    }
    throw RuntimeFault("value_iteration: did not converge");
}

inline std::vector<int> greedy_policy(const std::vector<double>& q, int n_actions) {
    const int n_states = static_cast<int>(q.size()) / n_actions;
    std::vector<int> pi(static_cast<std::size_t>(n_states));
    for (int s = 0; s < n_states; ++s) {
        int best = 0;
        for (int a = 1; a < n_actions; ++a)
            if (q[static_cast<std::size_t>(s) * n_actions + a] > q[static_cast<std::size_t>(s) * n_actions + best]) best = a;
        pi[static_cast<std::size_t>(s)] = best;
    }
    return pi;
}

// ---------------------------------------------------------------------------
// ChainMDP: deterministic left/right chain, +1 on entering the rightmost
// state (terminal), one-hot observations. The exact-oracle workhorse.

struct ChainConfig {
    int n_states = 5;
    int episode_cap = 50;

    bool operator==(const ChainConfig&) const = default;
};

template <typename S>
class ChainMDP final : public Environment<S> {
public:
    static constexpr int kLeft = 0, kRight = 1;

    explicit ChainMDP(ChainConfig cfg = {}, std::uint64_t seed = 0) : cfg_(cfg) {
        (void)seed;  // fully deterministic
        if (cfg_.n_states < 2) throw ConfigError("ChainMDP: need at least 2 states");
    }

    int obs_dim() const override { return cfg_.n_states; }
    int num_actions() const override { return 2; }
    int action_dim() const override { return 0; }

    std::vector<S> reset() override {
        pos_ = 0;
        steps_ = 0;
        return observe();
    }
    std::vector<S> reset_seeded(std::uint64_t) override { return reset(); }

    EnvStep<S> step(int action) override {
        if (action != kLeft && action != kRight)
            throw ConfigError("ChainMDP: invalid action index");
        EnvStep<S> out;
        ++steps_;
        if (action == kRight) {
            ++pos_;
            if (pos_ == cfg_.n_states - 1) {
                out.reward = S(1);
                out.terminal = true;
            }
        } else {
            pos_ = std::max(0, pos_ - 1);
        }
        if (!out.terminal && steps_ >= cfg_.episode_cap) out.truncated = true;
        out.observation = observe();
        return out;
    }

    TabularMDP to_mdp() const {
        TabularMDP mdp;
        mdp.n_states = cfg_.n_states;
        mdp.n_actions = 2;
        mdp.transition.resize(static_cast<std::size_t>(cfg_.n_states), std::vector<Transition>(2));
        for (int s = 0; s < cfg_.n_states; ++s) {
            mdp.transition[static_cast<std::size_t>(s)][kLeft] = {std::max(0, s - 1), 0.0, false};
            const int right = std::min(cfg_.n_states - 1, s + 1);
            const bool goal = right == cfg_.n_states - 1;
            mdp.transition[static_cast<std::size_t>(s)][kRight] = {right, goal ? 1.0 : 0.0, goal};
        }
        // transitions out of the terminal state are never taken; make them
        // self-absorbing with zero reward so the table is total.
        mdp.transition[static_cast<std::size_t>(cfg_.n_states - 1)][kLeft] = {cfg_.n_states - 1, 0.0, true};
        mdp.transition[static_cast<std::size_t>(cfg_.n_states - 1)][kRight] = {cfg_.n_states - 1, 0.0, true};
        return mdp;
    }

    int position() const { return pos_; }

private:
    std::vector<S> observe() const {
        std::vector<S> obs(static_cast<std::size_t>(cfg_.n_states), S(0));
        obs[static_cast<std::size_t>(pos_)] = S(1);
        return obs;
    }

    ChainConfig cfg_;
    int pos_ = 0;
    int steps_ = 0;
};

// ---------------------------------------------------------------------------
// GridMaze: randomly generated maze with apples (+1, consumed) and one
// portal (+10, teleports the agent and regenerates the apples). A new maze
// is generated every episode. The observation is an agent-centered feature
// grid -- three stacked (2r+1)^2 windows (blocked, apple, portal) -- plus
// four direction features pointing at the nearest apple and the portal, so
// policies generalize across layouts.

struct MazeConfig {
    int width = 8;
    int height = 8;
    int apples = 5;
    int episode_cap = 500;
    int view_radius = 2;

    bool operator==(const MazeConfig&) const = default;
};

template <typename S>
class GridMaze final : public Environment<S> {
public:
    GridMaze(MazeConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
        if (cfg_.width < 3 || cfg_.height < 3) throw ConfigError("GridMaze: grid too small");
        if (cfg_.apples < 0 || cfg_.apples > cfg_.width * cfg_.height / 4)
            throw ConfigError("GridMaze: bad apple count");
        if (cfg_.view_radius < 1) throw ConfigError("GridMaze: view radius must be >= 1");
    }

    int obs_dim() const override {
        const int side = 2 * cfg_.view_radius + 1;
        return 3 * side * side + 8;
    }
    int num_actions() const override { return 4; }  // up, down, left, right
    int action_dim() const override { return 0; }

    std::vector<S> reset() override {
        generate(rng_());
        return observe();
    }
    std::vector<S> reset_seeded(std::uint64_t seed) override {
        generate(seed);
        return observe();
    }

    EnvStep<S> step(int action) override {
        if (action < 0 || action >= 4) throw ConfigError("GridMaze: invalid action index");
        static constexpr int dx[4] = {0, 0, -1, 1};
        static constexpr int dy[4] = {-1, 1, 0, 0};
        EnvStep<S> out;
        ++steps_;
        const int nx = agent_x_ + dx[action];
        const int ny = agent_y_ + dy[action];
        if (in_bounds(nx, ny) && !wall_[idx(nx, ny)]) {
            agent_x_ = nx;
            agent_y_ = ny;
        }
        const std::size_t cell = idx(agent_x_, agent_y_);
        if (apple_[cell]) {
            apple_[cell] = 0;
            out.reward = S(1);
        } else if (cell == portal_) {
            out.reward = S(10);
            apple_ = apple_home_;
            teleport();
        }
        if (steps_ >= cfg_.episode_cap) out.truncated = true;
        out.observation = observe();
        return out;
    }

    // Frozen-layout, no-respawn variant as an enumerable MDP: the portal is
    // terminal, apples are consumed, and the state is (cell, apple mask).
    TabularMDP frozen_mdp() const {
        int n_apples = 0;
        for (char a : apple_home_) n_apples += a;
        if (n_apples > 16)
            throw ConfigError("frozen maze variant: too many apples to enumerate");
        std::vector<int> free_cells;
        std::vector<int> cell_index(wall_.size(), -1);
        for (std::size_t c = 0; c < wall_.size(); ++c)
            if (!wall_[c]) {
                cell_index[c] = static_cast<int>(free_cells.size());
                free_cells.push_back(static_cast<int>(c));
            }
        std::vector<int> apple_cells;
        for (std::size_t c = 0; c < apple_home_.size(); ++c)
            if (apple_home_[c]) apple_cells.push_back(static_cast<int>(c));
        const int n_masks = 1 << apple_cells.size();
        const int nf = static_cast<int>(free_cells.size());

        TabularMDP mdp;
        mdp.n_states = nf * n_masks;
        mdp.n_actions = 4;
        mdp.transition.resize(static_cast<std::size_t>(mdp.n_states), std::vector<Transition>(4));
        static constexpr int dx[4] = {0, 0, -1, 1};
        static constexpr int dy[4] = {-1, 1, 0, 0};
        for (int f = 0; f < nf; ++f) {
            const int c = free_cells[static_cast<std::size_t>(f)];
            const int x = c % cfg_.width, y = c / cfg_.width;
            for (int mask = 0; mask < n_masks; ++mask) {
                for (int a = 0; a < 4; ++a) {
                    int nx = x + dx[a], ny = y + dy[a];
                    int nc = c;
                    if (in_bounds(nx, ny) && !wall_[idx(nx, ny)]) nc = nx + ny * cfg_.width;
                    double reward = 0.0;
                    bool terminal = false;
                    int nmask = mask;
                    if (static_cast<std::size_t>(nc) == portal_) {
                        reward = 10.0;
                        terminal = true;
                    } else {
                        for (std::size_t ai = 0; ai < apple_cells.size(); ++ai) {
                            if (apple_cells[ai] == nc && (mask >> ai & 1)) {
                                reward = 1.0;
                                nmask = mask & ~(1 << ai);
                            }
                        }
                    }
                    mdp.transition[static_cast<std::size_t>(f) * n_masks + mask][static_cast<std::size_t>(a)] = {
                        cell_index[static_cast<std::size_t>(nc)] * n_masks + nmask, reward, terminal};
                }
            }
        }
        return mdp;
    }

    // FNV-1a over the layout (walls, items, spawn) for collision tests.
    std::uint64_t layout_hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ULL;
        };
        for (std::size_t i = 0; i < wall_.size(); ++i)
            mix((static_cast<std::uint64_t>(wall_[i]) << 1) | apple_home_[i]);
        mix(portal_);
        mix(static_cast<std::uint64_t>(agent_x_) << 16 | static_cast<std::uint64_t>(agent_y_));
        return h;
    }

    // Every free cell must be reachable from the agent's spawn.
    bool fully_connected() const {
        std::vector<char> seen(wall_.size(), 0);
        std::deque<std::size_t> queue{idx(agent_x_, agent_y_)};
        seen[queue.front()] = 1;
        std::size_t reached = 0;
        while (!queue.empty()) {
            const std::size_t c = queue.front();
            queue.pop_front();
            ++reached;
            const int x = static_cast<int>(c) % cfg_.width, y = static_cast<int>(c) / cfg_.width;
            static constexpr int dx[4] = {0, 0, -1, 1};
            static constexpr int dy[4] = {-1, 1, 0, 0};
            for (int a = 0; a < 4; ++a) {
                const int nx = x + dx[a], ny = y + dy[a];
                if (!in_bounds(nx, ny)) continue;
                const std::size_t nc = idx(nx, ny);
                if (!wall_[nc] && !seen[nc]) {
                    seen[nc] = 1;
                    queue.push_back(nc);
                }
            }
        }
        std::size_t free_count = 0;
        for (char w : wall_)
            if (!w) ++free_count;
        return reached == free_count;
    }

private:
    bool in_bounds(int x, int y) const { return x >= 0 && x < cfg_.width && y >= 0 && y < cfg_.height; }
    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(x) + static_cast<std::size_t>(y) * cfg_.width; }

    void generate(std::uint64_t seed) {
        Rng rng(seed);
        wall_.assign(static_cast<std::size_t>(cfg_.width) * cfg_.height, 0);
        divide(rng, 0, 0, cfg_.width, cfg_.height);

        // Connectivity repair: knock out walls adjacent to the region
        // reachable from the first free cell until everything is reachable.
        auto flood = [this](std::size_t start, std::vector<char>& seen) {
            seen.assign(wall_.size(), 0);
            std::deque<std::size_t> queue{start};
            seen[start] = 1;
            while (!queue.empty()) {
                const std::size_t c = queue.front();
                queue.pop_front();
                const int x = static_cast<int>(c) % cfg_.width, y = static_cast<int>(c) / cfg_.width;
                static constexpr int dx[4] = {0, 0, -1, 1};
                static constexpr int dy[4] = {-1, 1, 0, 0};
                for (int a = 0; a < 4; ++a) {
                    const int nx = x + dx[a], ny = y + dy[a];
                    if (!in_bounds(nx, ny)) continue;
                    const std::size_t nc = idx(nx, ny);
                    if (!wall_[nc] && !seen[nc]) {
                        seen[nc] = 1;
                        queue.push_back(nc);
                    }
                }
            }
        };

        std::size_t start = 0;
        while (wall_[start]) ++start;
        std::vector<char> seen;
        for (;;) {
            flood(start, seen);
            // wall cells bordering the reached region, preferring ones that
            // also border an unreached free cell
            std::vector<std::size_t> bridge, fallback;
            bool all_reached = true;
            for (std::size_t c = 0; c < wall_.size(); ++c) {
                if (!wall_[c] && !seen[c]) all_reached = false;
                if (!wall_[c]) continue;
                const int x = static_cast<int>(c) % cfg_.width, y = static_cast<int>(c) / cfg_.width;
                bool near_seen = false, near_unseen_free = false;
                static constexpr int dx[4] = {0, 0, -1, 1};
                static constexpr int dy[4] = {-1, 1, 0, 0};
                for (int a = 0; a < 4; ++a) {
                    const int nx = x + dx[a], ny = y + dy[a];
                    if (!in_bounds(nx, ny)) continue;
                    const std::size_t nc = idx(nx, ny);
                    if (wall_[nc]) continue;
                    (seen[nc] ? near_seen : near_unseen_free) = true;
                }
                if (near_seen && near_unseen_free) bridge.push_back(c);
                else if (near_seen) fallback.push_back(c);
            }
            if (all_reached) break;
            auto& pool = bridge.empty() ? fallback : bridge;
            wall_[pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]] = 0;
        }

        // Items and spawn on distinct free cells.
        std::vector<std::size_t> free_cells;
        for (std::size_t c = 0; c < wall_.size(); ++c)
            if (!wall_[c]) free_cells.push_back(c);
        std::shuffle(free_cells.begin(), free_cells.end(), rng);
        std::size_t cursor = 0;
        agent_x_ = static_cast<int>(free_cells[cursor] % static_cast<std::size_t>(cfg_.width));
        agent_y_ = static_cast<int>(free_cells[cursor] / static_cast<std::size_t>(cfg_.width));
        ++cursor;
        portal_ = free_cells[cursor++];
        apple_home_.assign(wall_.size(), 0);
        for (int i = 0; i < cfg_.apples && cursor < free_cells.size(); ++i)
            apple_home_[free_cells[cursor++]] = 1;
        apple_ = apple_home_;
        steps_ = 0;
        episode_rng_.seed(splitmix64(seed ^ 0x5bf03635ULL));
    }

    // Recursive division: split a region with a wall line, punch one door,
    // recurse into both halves.
    void divide(Rng& rng, int x0, int y0, int w, int h) {
        if (w < 4 && h < 4) return;
        const bool horizontal = h > w || (h == w && std::uniform_int_distribution<int>(0, 1)(rng));
        if (horizontal) {
            if (h < 4) return;
            const int wy = y0 + std::uniform_int_distribution<int>(1, h - 2)(rng);
            const int door = x0 + std::uniform_int_distribution<int>(0, w - 1)(rng);
            for (int x = x0; x < x0 + w; ++x)
                if (x != door) wall_[idx(x, wy)] = 1;
            divide(rng, x0, y0, w, wy - y0);
            divide(rng, x0, wy + 1, w, y0 + h - wy - 1);
        } else {
            if (w < 4) return;
            const int wx = x0 + std::uniform_int_distribution<int>(1, w - 2)(rng);
            const int door = y0 + std::uniform_int_distribution<int>(0, h - 1)(rng);
            for (int y = y0; y < y0 + h; ++y)
                if (y != door) wall_[idx(wx, y)] = 1;
            divide(rng, x0, y0, wx - x0, h);
            divide(rng, wx + 1, y0, x0 + w - wx - 1, h);
        }
    }

    void teleport() {
        std::vector<std::size_t> candidates;
        for (std::size_t c = 0; c < wall_.size(); ++c)
            if (!wall_[c] && c != portal_ && !apple_[c]) candidates.push_back(c);
        const std::size_t c =
            candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(episode_rng_)];
        agent_x_ = static_cast<int>(c % static_cast<std::size_t>(cfg_.width));
        agent_y_ = static_cast<int>(c / static_cast<std::size_t>(cfg_.width));
    }

    std::vector<S> observe() const {
        const int r = cfg_.view_radius;
        const int side = 2 * r + 1;
        const std::size_t plane = static_cast<std::size_t>(side) * side;
        std::vector<S> obs(3 * plane + 8, S(0));
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                const std::size_t w = static_cast<std::size_t>(dx + r) + static_cast<std::size_t>(dy + r) * side;
                const int x = agent_x_ + dx, y = agent_y_ + dy;
                if (!in_bounds(x, y) || wall_[idx(x, y)]) {
                    obs[w] = S(1);  // blocked
                    continue;
                }
                const std::size_t c = idx(x, y);
                if (apple_[c]) obs[plane + w] = S(1);
                if (c == portal_) obs[2 * plane + w] = S(1);
            }
        }

        // Route features: one-hot first move of the shortest path to the
        // nearest apple (zero when none are left) and to the portal.
        const std::size_t base = 3 * plane;
        std::vector<int> first_move(wall_.size(), -1);
        std::deque<std::size_t> queue{idx(agent_x_, agent_y_)};
        std::vector<char> seen(wall_.size(), 0);
        seen[queue.front()] = 1;
        first_move[queue.front()] = 4;  // origin marker
        static constexpr int dx4[4] = {0, 0, -1, 1};
        static constexpr int dy4[4] = {-1, 1, 0, 0};
        int best_apple = -1;
        while (!queue.empty()) {
            const std::size_t c = queue.front();
            queue.pop_front();
            if (best_apple < 0 && apple_[c]) best_apple = static_cast<int>(c);
            const int x = static_cast<int>(c) % cfg_.width, y = static_cast<int>(c) / cfg_.width;
            for (int a = 0; a < 4; ++a) {
                const int nx = x + dx4[a], ny = y + dy4[a];
                if (!in_bounds(nx, ny)) continue;
                const std::size_t nc = idx(nx, ny);
                if (wall_[nc] || seen[nc]) continue;
                seen[nc] = 1;
                first_move[nc] = first_move[c] == 4 ? a : first_move[c];
                queue.push_back(nc);
            }
        }
        if (best_apple >= 0 && first_move[static_cast<std::size_t>(best_apple)] < 4)
            obs[base + static_cast<std::size_t>(first_move[static_cast<std::size_t>(best_apple)])] = S(1);
        if (first_move[portal_] >= 0 && first_move[portal_] < 4)
            obs[base + 4 + static_cast<std::size_t>(first_move[portal_])] = S(1);
        return obs;
    }

    MazeConfig cfg_;
    Rng rng_;          // layout seeds, advanced once per episode
    Rng episode_rng_;  // in-episode randomness (teleports)
    std::vector<char> wall_, apple_, apple_home_;
    std::size_t portal_ = 0;
    int agent_x_ = 0, agent_y_ = 0;
    int steps_ = 0;
};

// ---------------------------------------------------------------------------
// PointMass1D: continuous-action point mass pushed toward a target with a
// clamped scalar force. Finite-horizon task, terminal at the episode cap.

struct PointMassConfig {
    int episode_cap = 200;
    double dt = 0.05;

    bool operator==(const PointMassConfig&) const = default;
};

template <typename S>
class PointMass1D final : public Environment<S> {
public:
    PointMass1D(PointMassConfig cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {}

    int obs_dim() const override { return 3; }
    int num_actions() const override { return 0; }
    int action_dim() const override { return 1; }

    std::vector<S> reset() override { return start(rng_); }
    std::vector<S> reset_seeded(std::uint64_t seed) override {
        Rng rng(seed);
        return start(rng);
    }

    EnvStep<S> step(std::span<const S> action) override {
        if (action.size() != 1) throw ConfigError("PointMass1D: action must be one force value");
        const double a = std::clamp(static_cast<double>(action[0]), -1.0, 1.0);
        const double dt = cfg_.dt;
        vel_ = std::clamp(vel_ + a * dt, -2.0, 2.0);
        pos_ = std::clamp(pos_ + vel_ * dt, -2.0, 2.0);
        ++steps_;
        EnvStep<S> out;
        const double err = pos_ - target_;
        out.reward = static_cast<S>(-err * err * dt);
        out.terminal = steps_ >= cfg_.episode_cap;
        out.observation = observe();
        return out;
    }

private:
    std::vector<S> start(Rng& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        pos_ = u(rng);
        target_ = u(rng);
        vel_ = 0.0;
        steps_ = 0;
        return observe();
    }
    std::vector<S> observe() const {
        return {static_cast<S>(pos_), static_cast<S>(vel_), static_cast<S>(target_)};
    }

    PointMassConfig cfg_;
    Rng rng_;
    double pos_ = 0, vel_ = 0, target_ = 0;
    int steps_ = 0;
};

// ---------------------------------------------------------------------------

struct EnvConfig {
    std::string id = "chain";  // chain | maze | pointmass
    ChainConfig chain;
    MazeConfig maze;
    PointMassConfig pointmass;

    bool operator==(const EnvConfig&) const = default;
};

template <typename S>
std::unique_ptr<Environment<S>> make_environment(const EnvConfig& cfg, std::uint64_t seed) {
    if (cfg.id == "chain") return std::make_unique<ChainMDP<S>>(cfg.chain, seed);
    if (cfg.id == "maze") return std::make_unique<GridMaze<S>>(cfg.maze, seed);
    if (cfg.id == "pointmass") return std::make_unique<PointMass1D<S>>(cfg.pointmass, seed);
    throw ConfigError("unknown environment id: " + cfg.id);
}

}  // namespace arl
