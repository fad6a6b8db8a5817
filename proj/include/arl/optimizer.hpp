#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "arl/errors.hpp"
#include "arl/shared_state.hpp"

namespace arl {

enum class OptimizerKind { MomentumSgd, Rmsprop, SharedRmsprop };

inline OptimizerKind parse_optimizer_kind(const std::string& s) {
    if (s == "sgd") return OptimizerKind::MomentumSgd;
    if (s == "rmsprop") return OptimizerKind::Rmsprop;
    if (s == "shared-rmsprop") return OptimizerKind::SharedRmsprop;
    throw ConfigError("unknown optimizer kind: " + s);
}

inline const char* optimizer_kind_name(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::MomentumSgd: return "sgd";
        case OptimizerKind::Rmsprop: return "rmsprop";
        case OptimizerKind::SharedRmsprop: return "shared-rmsprop";
    }
    return "?";
}

// Linearly annealed learning rate: eta(T) = eta0 * max(0, 1 - T/total).
// total_steps == 0 disables annealing.
struct LearningRateSchedule {
    double eta0 = 1e-3;
    std::int64_t total_steps = 0;

    double at(std::int64_t t) const {
        if (total_steps <= 0) return eta0;
        const double frac = 1.0 - static_cast<double>(t) / static_cast<double>(total_steps);
        return eta0 * std::max(0.0, frac);
    }
};

namespace detail {

// One RMSProp element: g' = alpha*g + (1-alpha)*d^2, returns the parameter
// delta -eta*d/sqrt(g'+eps). Shared and per-thread variants route through
// this same expression so single-threaded trajectories are bitwise equal.
template <typename S>
inline S rmsprop_element(S g_old, S d, S alpha, S eps, S eta, S& g_new) {
    g_new = alpha * g_old + (S(1) - alpha) * d * d;
    return -eta * d / std::sqrt(g_new + eps);
}

}  // namespace detail

// Per-thread optimizer handle. Momentum SGD and plain RMSProp keep their
// accumulator private to the thread; shared RMSProp keeps one process-wide
// g updated with indivisible elementwise read-modify-writes and no locking.
template <typename S>
class Optimizer {
public:
    Optimizer(OptimizerKind kind, std::size_t n, S alpha, S eps_reg,
              std::shared_ptr<SharedVector<S>> shared_g = nullptr)
        : kind_(kind), alpha_(alpha), eps_(eps_reg), shared_g_(std::move(shared_g)) {
        if (kind_ == OptimizerKind::SharedRmsprop) {
            if (!shared_g_ || shared_g_->size() != n)
                throw ConfigError("shared rmsprop requires a process-wide g of matching size");
        } else {
            local_.assign(n, S(0));
        }
        if (kind_ != OptimizerKind::MomentumSgd && !(eps_ > S(0)))
            throw ConfigError("rmsprop requires eps_reg > 0");
    }

    OptimizerKind kind() const { return kind_; }

    // Apply one accumulated gradient to the shared parameters at learning
    // rate eta. Gradient semantics: parameters move along -eta * f(grad).
    void step(SharedVector<S>& params, std::span<const S> grad, S eta) {
        if (grad.size() != params.size()) throw ConfigError("optimizer: gradient length mismatch");
        switch (kind_) {
            case OptimizerKind::MomentumSgd:
                for (std::size_t i = 0; i < grad.size(); ++i) {
                    local_[i] = alpha_ * local_[i] + (S(1) - alpha_) * grad[i];
                    params.add(i, -eta * local_[i]);
                }
                break;
            case OptimizerKind::Rmsprop:
                for (std::size_t i = 0; i < grad.size(); ++i) {
                    S g_new;
                    const S delta = detail::rmsprop_element(local_[i], grad[i], alpha_, eps_, eta, g_new);
                    local_[i] = g_new;
                    params.add(i, delta);
                }
                break;
            case OptimizerKind::SharedRmsprop:
                for (std::size_t i = 0; i < grad.size(); ++i) {
                    const S d = grad[i];
                    const S g_new = shared_g_->update(
                        i, [this, d](S g_old) { return alpha_ * g_old + (S(1) - alpha_) * d * d; });
                    params.add(i, -eta * d / std::sqrt(g_new + eps_));
                }
                break;
        }
    }

    // Accumulator contents, for tests and diagnostics.
    std::vector<S> accumulator() const {
        if (kind_ == OptimizerKind::SharedRmsprop) return shared_g_->snapshot();
        return local_;
    }

private:
    OptimizerKind kind_;
    S alpha_, eps_;
    std::vector<S> local_;
    std::shared_ptr<SharedVector<S>> shared_g_;
};

// Factory: builds per-thread handles. For shared RMSProp all handles must
// be given the same process-wide accumulator, created once per run with
// make_shared_accumulator.
template <typename S>
std::shared_ptr<SharedVector<S>> make_shared_accumulator(std::size_t n) {
    return std::make_shared<SharedVector<S>>(n, S(0));
}

template <typename S>
Optimizer<S> make_optimizer(OptimizerKind kind, std::size_t n, S alpha, S eps_reg,
                            std::shared_ptr<SharedVector<S>> shared_g = nullptr) {
    return Optimizer<S>(kind, n, alpha, eps_reg, std::move(shared_g));
}

// Global-norm gradient clip; no-op when the norm is under the limit.
template <typename S>
void clip_global_norm(std::span<S> grad, double max_norm) {
    double sq = 0;
    for (S g : grad) sq += static_cast<double>(g) * static_cast<double>(g);
    const double norm = std::sqrt(sq);
    if (norm <= max_norm || norm == 0.0) return;
    const S scale = static_cast<S>(max_norm / norm);
    for (S& g : grad) g *= scale;
}

}  // namespace arl
