#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "arl/errors.hpp"

namespace arl {

// Shared parameter store for Hogwild-style training. Every element is an
// atomic scalar: single-element reads and read-modify-writes are
// indivisible, nothing is ordered or atomic across elements. That is the
// whole contract; threads otherwise race freely.
template <typename S>
class SharedVector {
public:
    explicit SharedVector(std::size_t n, S fill = S(0)) : data_(new std::atomic<S>[n]), n_(n) {
        for (std::size_t i = 0; i < n_; ++i) data_[i].store(fill, std::memory_order_relaxed);
    }
    explicit SharedVector(std::span<const S> init) : SharedVector(init.size()) {
        for (std::size_t i = 0; i < n_; ++i) data_[i].store(init[i], std::memory_order_relaxed);
    }

    SharedVector(const SharedVector&) = delete;
    SharedVector& operator=(const SharedVector&) = delete;

    std::size_t size() const { return n_; }
    static constexpr std::size_t element_width = sizeof(S);

    S load(std::size_t i) const { return data_[i].load(std::memory_order_relaxed); }
    void store(std::size_t i, S v) { data_[i].store(v, std::memory_order_relaxed); }

    // Indivisible add; no update is ever lost.
    void add(std::size_t i, S delta) { data_[i].fetch_add(delta, std::memory_order_relaxed); }

    // Indivisible elementwise transform; returns the value written. Used by
    // shared RMSProp for g <- a*g + c.
    template <typename F>
    S update(std::size_t i, F&& f) {
        S old = data_[i].load(std::memory_order_relaxed);
        S next = f(old);
        while (!data_[i].compare_exchange_weak(old, next, std::memory_order_relaxed,
                                               std::memory_order_relaxed))
            next = f(old);
        return next;
    }

    // Private copy; each element is some recently written value, with no
    // cross-element consistency (inherent to the lock-free contract).
    std::vector<S> snapshot() const {
        std::vector<S> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = data_[i].load(std::memory_order_relaxed);
        return out;
    }
    void snapshot_into(std::vector<S>& out) const {
        out.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = data_[i].load(std::memory_order_relaxed);
    }

    void add_vector(std::span<const S> delta) {
        if (delta.size() != n_) throw ConfigError("SharedVector: delta length mismatch");
        for (std::size_t i = 0; i < n_; ++i) add(i, delta[i]);
    }

    void assign(std::span<const S> values) {
        if (values.size() != n_) throw ConfigError("SharedVector: assign length mismatch");
        for (std::size_t i = 0; i < n_; ++i) store(i, values[i]);
    }

private:
    std::unique_ptr<std::atomic<S>[]> data_;
    std::size_t n_;
};

// The shared parameters of one run: theta plus an optional second vector
// (separate critic network, or the private value head of the shared
// architecture).
template <typename S>
struct SharedParams {
    SharedVector<S> theta;
    SharedVector<S> theta_v;

    SharedParams(std::span<const S> t, std::span<const S> tv) : theta(t), theta_v(tv) {}
};

// Periodically refreshed frozen copy of theta. Replacement swaps in a whole
// new immutable vector, so a reader either sees the old snapshot or the new
// one, never a mixture.
template <typename S>
class TargetNetwork {
public:
    struct Snapshot {
        std::shared_ptr<const std::vector<S>> values;
        std::uint64_t version;
    };

    explicit TargetNetwork(std::vector<S> initial)
        : current_(std::make_shared<const std::vector<S>>(std::move(initial))), version_(0) {}

    Snapshot read() const {
        std::lock_guard<std::mutex> lock(mu_);
        return {current_, version_};
    }

    // Install a fresh copy of the shared parameters. Returns the new version.
    std::uint64_t refresh(const SharedVector<S>& shared) {
        auto fresh = std::make_shared<const std::vector<S>>(shared.snapshot());
        std::lock_guard<std::mutex> lock(mu_);
        current_ = std::move(fresh);
        return ++version_;
    }

    std::uint64_t refresh_values(std::vector<S> values) {
        auto fresh = std::make_shared<const std::vector<S>>(std::move(values));
        std::lock_guard<std::mutex> lock(mu_);
        current_ = std::move(fresh);
        return ++version_;
    }

    std::uint64_t version() const {
        std::lock_guard<std::mutex> lock(mu_);
        return version_;
    }

private:
    mutable std::mutex mu_;
    std::shared_ptr<const std::vector<S>> current_;
    std::uint64_t version_;
};

// Global frame counter T. Increments are lost-update-free, so the final
// value equals the sum of per-thread step counts.
class GlobalCounter {
public:
    explicit GlobalCounter(std::int64_t start = 0) : value_(start) {}

    std::int64_t increment(std::int64_t by = 1) {
        return value_.fetch_add(by, std::memory_order_relaxed) + by;
    }
    std::int64_t value() const { return value_.load(std::memory_order_relaxed); }

private:
    std::atomic<std::int64_t> value_;
};

// True iff the increment that produced `post` (adding `by`) crossed a
// multiple of `period`. Exactly one thread observes each crossing, which
// makes it the refresh owner for that period.
inline bool crossed_multiple(std::int64_t post, std::int64_t by, std::int64_t period) {
    const std::int64_t prev = post - by;
    return post / period != prev / period;
}

// Refresh theta-minus when the increment that produced `post_increment_T`
// crossed a multiple of the refresh period.
template <typename S>
bool refresh_target(const SharedVector<S>& shared, TargetNetwork<S>& target,
                    std::int64_t post_increment_T, std::int64_t by, std::int64_t target_interval) {
    if (target_interval < 1) throw ConfigError("refresh_target: interval must be >= 1");
    if (!crossed_multiple(post_increment_T, by, target_interval)) return false;
    target.refresh(shared);
    return true;
}

}  // namespace arl
