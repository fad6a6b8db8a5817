#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arl/errors.hpp"
#include "arl/rng.hpp"

namespace arl {

// Dense feedforward network with manual forward/backward passes.
// Parameters live in flat vectors with a canonical layout (per layer:
// weights row-major, then biases) so they can be shared, checkpointed and
// indexed identically across runs.

enum class HeadKind {
    QValues,            // linear layer, one output per action
    PolicyValueShared,  // softmax policy head + linear scalar value head on a shared trunk
    GaussianPolicy,     // linear mean head + scalar softplus-variance head
};

inline const char* head_kind_name(HeadKind h) {
    switch (h) {
        case HeadKind::QValues: return "q_values";
        case HeadKind::PolicyValueShared: return "policy_value_shared";
        case HeadKind::GaussianPolicy: return "gaussian_policy";
    }
    return "?";
}

struct MLPSpec {
    // input dim, hidden dims..., primary head width (|A|, or action dim for
    // the gaussian head). Hidden layers use a rectifier; heads are linear.
    std::vector<int> layer_sizes;
    HeadKind head = HeadKind::QValues;

    int input_dim() const { return layer_sizes.front(); }
    int head_dim() const { return layer_sizes.back(); }
    int num_hidden() const { return static_cast<int>(layer_sizes.size()) - 2; }
    // Width of the layer the heads read from (the input itself if there are
    // no hidden layers).
    int trunk_dim() const { return layer_sizes[layer_sizes.size() - 2]; }

    void validate() const {
        if (layer_sizes.size() < 2)
            throw ConfigError("MLPSpec: need at least input and output sizes");
        for (int n : layer_sizes)
            if (n < 1) throw ConfigError("MLPSpec: layer sizes must be >= 1");
    }

    // theta holds the main chain (trunk + primary head) plus, for the
    // gaussian head, the scalar raw-variance block appended at the end.
    std::size_t theta_count() const {
        std::size_t n = 0;
        for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i)
            n += static_cast<std::size_t>(layer_sizes[i + 1]) * layer_sizes[i] + layer_sizes[i + 1];
        if (head == HeadKind::GaussianPolicy) n += static_cast<std::size_t>(trunk_dim()) + 1;
        return n;
    }

    // theta_v holds the private value head (trunk_dim -> 1) of the shared
    // policy/value architecture; empty for the other heads.
    std::size_t theta_v_count() const {
        return head == HeadKind::PolicyValueShared ? static_cast<std::size_t>(trunk_dim()) + 1 : 0;
    }

    std::string describe() const {
        std::string s = "layers=";
        for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(layer_sizes[i]);
        }
        s += ";head=";
        s += head_kind_name(head);
        return s;
    }

    bool operator==(const MLPSpec&) const = default;
};

template <typename S>
struct ForwardCache {
    // act[0] is the observation; act[i] (i >= 1) the post-rectifier output
    // of hidden layer i. pre[i-1] is hidden layer i's pre-activation.
    std::vector<std::vector<S>> act;
    std::vector<std::vector<S>> pre;
};

template <typename S>
struct ForwardResult {
    std::vector<S> q;       // QValues
    std::vector<S> logits;  // PolicyValueShared (pre-softmax)
    std::vector<S> probs;   //   "
    S value{};              //   "
    std::vector<S> mu;      // GaussianPolicy
    S raw_sigma{};          //   " (pre-softplus)
    S sigma2{};             //   "
};

// Loss gradients with respect to head pre-activations. Unused blocks stay
// empty/zero.
template <typename S>
struct OutputGrads {
    std::vector<S> d_q;
    std::vector<S> d_logits;
    S d_value{};
    std::vector<S> d_mu;
    S d_raw_sigma{};
};

template <typename S>
struct GradientBuffers {
    std::vector<S> d_theta;
    std::vector<S> d_theta_v;

    explicit GradientBuffers(const MLPSpec& spec)
        : d_theta(spec.theta_count(), S(0)), d_theta_v(spec.theta_v_count(), S(0)) {}
    void clear() {
        std::fill(d_theta.begin(), d_theta.end(), S(0));
        std::fill(d_theta_v.begin(), d_theta_v.end(), S(0));
    }
};

// ---------------------------------------------------------------------------
// Scalar heads

template <typename S>
std::vector<S> softmax(std::span<const S> logits) {
    S zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<S> p(logits.size());
    S sum = 0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - zmax);
        sum += p[i];
    }
    for (S& v : p) v /= sum;
    return p;
}

template <typename S>
std::vector<S> softmax(const std::vector<S>& logits) {
    return softmax(std::span<const S>(logits));
}

// Entropy of a probability vector and its gradient with respect to the
// logits that produced it. 0*log(0) is taken as 0.
template <typename S>
std::pair<S, std::vector<S>> policy_entropy(std::span<const S> probs) {
    S h = 0;
    for (S p : probs)
        if (p > S(0)) h -= p * std::log(p);
    std::vector<S> d(probs.size(), S(0));
    for (std::size_t k = 0; k < probs.size(); ++k) {
        S p = probs[k];
        if (p > S(0)) d[k] = -p * (std::log(p) + h);
    }
    return {h, std::move(d)};
}

template <typename S>
std::pair<S, std::vector<S>> policy_entropy(const std::vector<S>& probs) {
    return policy_entropy(std::span<const S>(probs));
}

template <typename S>
S softplus(S x) {
    // log(1+exp(x)) without overflow; floors at the smallest normal so the
    // variance stays strictly positive in single precision.
    S sp = x > S(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    return std::max(sp, std::numeric_limits<S>::min());
}

template <typename S>
std::pair<std::vector<S>, S> gaussian_head(std::vector<S> mu, S raw_sigma) {
    return {std::move(mu), softplus(raw_sigma)};
}

// Log-density and differential entropy of a normal with spherical
// covariance sigma2 * I. Entropy is (log(2*pi*sigma2)+1)/2 per dimension.
template <typename S>
std::pair<S, S> gaussian_logprob_and_entropy(std::span<const S> mu, S sigma2,
                                             std::span<const S> action) {
    if (!(sigma2 > S(0))) throw std::domain_error("gaussian: sigma2 must be > 0");
    if (mu.size() != action.size())
        throw ConfigError("gaussian: action dimension mismatch");
    const S k = static_cast<S>(mu.size());
    const S two_pi = static_cast<S>(2) * static_cast<S>(M_PI);
    S sq = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        S d = action[i] - mu[i];
        sq += d * d;
    }
    S logp = -S(0.5) * k * std::log(two_pi * sigma2) - sq / (S(2) * sigma2);
    S entropy = S(0.5) * k * (std::log(two_pi * sigma2) + S(1));
    return {logp, entropy};
}

// ---------------------------------------------------------------------------
// Parameter layout

namespace detail {

// Offsets of the chained linear layers inside theta.
struct LayerOffsets {
    std::size_t w, b;
    int in, out;
};

inline std::vector<LayerOffsets> chain_offsets(const MLPSpec& spec) {
    std::vector<LayerOffsets> v;
    std::size_t off = 0;
    for (std::size_t i = 0; i + 1 < spec.layer_sizes.size(); ++i) {
        int in = spec.layer_sizes[i], out = spec.layer_sizes[i + 1];
        v.push_back({off, off + static_cast<std::size_t>(out) * in, in, out});
        off += static_cast<std::size_t>(out) * in + out;
    }
    return v;
}

// The gaussian raw-variance block sits after the chain: trunk_dim weights,
// then one bias.
inline std::size_t sigma_offset(const MLPSpec& spec) {
    std::size_t n = 0;
    for (std::size_t i = 0; i + 1 < spec.layer_sizes.size(); ++i)
        n += static_cast<std::size_t>(spec.layer_sizes[i + 1]) * spec.layer_sizes[i] +
             spec.layer_sizes[i + 1];
    return n;
}

template <typename S>
void linear(std::span<const S> params, std::size_t woff, std::size_t boff, int in, int out,
            std::span<const S> x, std::vector<S>& y) {
    y.assign(static_cast<std::size_t>(out), S(0));
    for (int r = 0; r < out; ++r) {
        S acc = params[boff + r];
        const S* wrow = params.data() + woff + static_cast<std::size_t>(r) * in;
        for (int c = 0; c < in; ++c) acc += wrow[c] * x[c];
        y[static_cast<std::size_t>(r)] = acc;
    }
}

}  // namespace detail

// Uniform +-1/sqrt(fan_in) per layer, drawn from the run's seeded generator.
template <typename S>
std::pair<std::vector<S>, std::vector<S>> init_params(const MLPSpec& spec, Rng& rng) {
    spec.validate();
    std::vector<S> theta(spec.theta_count());
    std::vector<S> theta_v(spec.theta_v_count());
    auto fill = [&rng](S* p, std::size_t n, int fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<S>(u(rng));
    };
    for (const auto& L : detail::chain_offsets(spec))
        fill(theta.data() + L.w, static_cast<std::size_t>(L.out) * L.in + L.out, L.in);
    if (spec.head == HeadKind::GaussianPolicy)
        fill(theta.data() + detail::sigma_offset(spec), static_cast<std::size_t>(spec.trunk_dim()) + 1,
             spec.trunk_dim());
    if (!theta_v.empty()) fill(theta_v.data(), theta_v.size(), spec.trunk_dim());
    return {std::move(theta), std::move(theta_v)};
}

// Forward pass. theta_v is only consulted for the shared policy/value head
// and may be empty otherwise.
template <typename S>
ForwardResult<S> forward(const MLPSpec& spec, std::span<const S> theta,
                         std::span<const S> theta_v, std::span<const S> obs,
                         ForwardCache<S>* cache = nullptr) {
    if (static_cast<int>(obs.size()) != spec.input_dim())
        throw ConfigError("forward: observation dimension mismatch");
    if (theta.size() != spec.theta_count())
        throw ConfigError("forward: theta length mismatch");
    if (theta_v.size() != spec.theta_v_count())
        throw ConfigError("forward: theta_v length mismatch");

    const auto layers = detail::chain_offsets(spec);
    const int nh = spec.num_hidden();

    if (cache) {
        cache->act.assign(1, std::vector<S>(obs.begin(), obs.end()));
        cache->pre.clear();
    }
    std::vector<S> x(obs.begin(), obs.end());
    std::vector<S> y;
    for (int i = 0; i < nh; ++i) {
        const auto& L = layers[static_cast<std::size_t>(i)];
        detail::linear<S>(theta, L.w, L.b, L.in, L.out, x, y);
        if (cache) cache->pre.push_back(y);
        for (S& v : y) v = v > S(0) ? v : S(0);
        if (cache) cache->act.push_back(y);
        x = y;
    }
    // x is now the trunk output the heads read from.
    ForwardResult<S> out;
    const auto& Lh = layers.back();
    std::vector<S> head;
    detail::linear<S>(theta, Lh.w, Lh.b, Lh.in, Lh.out, x, head);
    switch (spec.head) {
        case HeadKind::QValues:
            out.q = std::move(head);
            break;
        case HeadKind::PolicyValueShared: {
            out.logits = std::move(head);
            out.probs = softmax<S>(out.logits);
            S v = theta_v[theta_v.size() - 1];
            for (int c = 0; c < spec.trunk_dim(); ++c) v += theta_v[static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
            out.value = v;
            break;
        }
        case HeadKind::GaussianPolicy: {
            out.mu = std::move(head);
            const std::size_t so = detail::sigma_offset(spec);
            S rs = theta[so + static_cast<std::size_t>(spec.trunk_dim())];
            for (int c = 0; c < spec.trunk_dim(); ++c) rs += theta[so + static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
            out.raw_sigma = rs;
            out.sigma2 = softplus(rs);
            break;
        }
    }
    return out;
}

// Exact reverse-mode gradients of the scalar loss encoded by `grads` with
// respect to every parameter, added into `bufs`. Repeated calls sum.
// Partials land in the buffer that owns the parameter (trunk partials in
// d_theta, value-head partials in d_theta_v).
template <typename S>
void backward_accumulate(const MLPSpec& spec, std::span<const S> theta,
                         std::span<const S> theta_v, const ForwardCache<S>& cache,
                         const OutputGrads<S>& grads, GradientBuffers<S>& bufs) {
    if (bufs.d_theta.size() != spec.theta_count() || bufs.d_theta_v.size() != spec.theta_v_count())
        throw ConfigError("backward: gradient buffer shape mismatch");
    const auto layers = detail::chain_offsets(spec);
    const int nh = spec.num_hidden();
    const std::vector<S>& h = cache.act[static_cast<std::size_t>(nh)];
    const int hd = spec.trunk_dim();

    auto check = [](const std::vector<S>& g, std::size_t want, const char* name) {
        if (!g.empty() && g.size() != want)
            throw ConfigError(std::string("backward: bad shape for ") + name);
    };

    std::vector<S> d_h(static_cast<std::size_t>(hd), S(0));
    const auto& Lh = layers.back();

    auto head_linear = [&](std::span<const S> dy) {
        for (int r = 0; r < Lh.out; ++r) {
            S g = dy[static_cast<std::size_t>(r)];
            if (g == S(0)) continue;
            S* dwrow = bufs.d_theta.data() + Lh.w + static_cast<std::size_t>(r) * Lh.in;
            const S* wrow = theta.data() + Lh.w + static_cast<std::size_t>(r) * Lh.in;
            for (int c = 0; c < Lh.in; ++c) {
                dwrow[c] += g * h[static_cast<std::size_t>(c)];
                d_h[static_cast<std::size_t>(c)] += g * wrow[c];
            }
            bufs.d_theta[Lh.b + static_cast<std::size_t>(r)] += g;
        }
    };

    switch (spec.head) {
        case HeadKind::QValues:
            check(grads.d_q, static_cast<std::size_t>(spec.head_dim()), "d_q");
            if (!grads.d_q.empty()) head_linear(grads.d_q);
            break;
        case HeadKind::PolicyValueShared: {
            check(grads.d_logits, static_cast<std::size_t>(spec.head_dim()), "d_logits");
            if (!grads.d_logits.empty()) head_linear(grads.d_logits);
            if (grads.d_value != S(0)) {
                const S g = grads.d_value;
                for (int c = 0; c < hd; ++c) {
                    bufs.d_theta_v[static_cast<std::size_t>(c)] += g * h[static_cast<std::size_t>(c)];
                    d_h[static_cast<std::size_t>(c)] += g * theta_v[static_cast<std::size_t>(c)];
                }
                bufs.d_theta_v[static_cast<std::size_t>(hd)] += g;
            }
            break;
        }
        case HeadKind::GaussianPolicy: {
            check(grads.d_mu, static_cast<std::size_t>(spec.head_dim()), "d_mu");
            if (!grads.d_mu.empty()) head_linear(grads.d_mu);
            if (grads.d_raw_sigma != S(0)) {
                const S g = grads.d_raw_sigma;
                const std::size_t so = detail::sigma_offset(spec);
                for (int c = 0; c < hd; ++c) {
                    bufs.d_theta[so + static_cast<std::size_t>(c)] += g * h[static_cast<std::size_t>(c)];
                    d_h[static_cast<std::size_t>(c)] += g * theta[so + static_cast<std::size_t>(c)];
                }
                bufs.d_theta[so + static_cast<std::size_t>(hd)] += g;
            }
            break;
        }
    }

    // Trunk: rectifier gate, then each linear layer.
    std::vector<S> d_act = std::move(d_h);
    for (int i = nh - 1; i >= 0; --i) {
        const auto& L = layers[static_cast<std::size_t>(i)];
        const std::vector<S>& pre = cache.pre[static_cast<std::size_t>(i)];
        const std::vector<S>& below = cache.act[static_cast<std::size_t>(i)];
        std::vector<S> d_below(static_cast<std::size_t>(L.in), S(0));
        for (int r = 0; r < L.out; ++r) {
            if (pre[static_cast<std::size_t>(r)] <= S(0)) continue;
            S g = d_act[static_cast<std::size_t>(r)];
            if (g == S(0)) continue;
            S* dwrow = bufs.d_theta.data() + L.w + static_cast<std::size_t>(r) * L.in;
            const S* wrow = theta.data() + L.w + static_cast<std::size_t>(r) * L.in;
            for (int c = 0; c < L.in; ++c) {
                dwrow[c] += g * below[static_cast<std::size_t>(c)];
                d_below[static_cast<std::size_t>(c)] += g * wrow[c];
            }
            bufs.d_theta[L.b + static_cast<std::size_t>(r)] += g;
        }
        d_act = std::move(d_below);
    }
}

}  // namespace arl
