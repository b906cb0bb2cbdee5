#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "deckopt/errors.hpp"
#include "deckopt/json_util.hpp"
#include "deckopt/rng.hpp"

// A single-hidden-layer ReLU network with scalar output, used both as the
// action-value approximator and as the offline win-rate predictor. Plain
// double arithmetic; gradients are analytic.

namespace deckopt {

struct MlpParams {
    int input = 0;
    int hidden = 0;
    std::vector<double> w1; // hidden x input, row-major
    std::vector<double> b1; // hidden
    std::vector<double> w2; // hidden
    double b2 = 0.0;
};

/// Fresh parameters with fan-in scaled uniform weights and zero biases.
inline MlpParams init_mlp(int input, int hidden, std::uint64_t seed) {
    if (input < 1 || hidden < 1) throw InvalidArgument("init_mlp: bad shape");
    MlpParams p;
    p.input = input;
    p.hidden = hidden;
    p.w1.resize(static_cast<std::size_t>(hidden) * input);
    p.b1.assign(hidden, 0.0);
    p.w2.resize(hidden);
    Rng rng(derive_seed(seed, "mlp_init"));
    double s1 = 1.0 / std::sqrt(static_cast<double>(input));
    for (double& w : p.w1) w = (2.0 * rng.unit_real() - 1.0) * s1;
    double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (double& w : p.w2) w = (2.0 * rng.unit_real() - 1.0) * s2;
    return p;
}

inline bool all_finite(const MlpParams& p) {
    for (double w : p.w1)
        if (!std::isfinite(w)) return false;
    for (double w : p.b1)
        if (!std::isfinite(w)) return false;
    for (double w : p.w2)
        if (!std::isfinite(w)) return false;
    return std::isfinite(p.b2);
}

/// Hidden activations kept around so the backward pass can reuse them.
struct ForwardCache {
    std::vector<double> hidden; // post-ReLU
};

inline double q_forward_cached(const MlpParams& p, const double* phi,
                               std::size_t len, ForwardCache& cache) {
    if (static_cast<int>(len) != p.input)
        throw InvalidArgument("q_forward: feature length mismatch");
    cache.hidden.assign(p.hidden, 0.0);
    double out = p.b2;
    for (int j = 0; j < p.hidden; ++j) {
        const double* row = p.w1.data() + static_cast<std::size_t>(j) * p.input;
        double z = p.b1[j];
        for (int i = 0; i < p.input; ++i) z += row[i] * phi[i];
        if (z > 0.0) {
            cache.hidden[j] = z;
            out += p.w2[j] * z;
        }
    }
    return out;
}

inline double q_forward(const MlpParams& p, const std::vector<double>& phi) {
    ForwardCache cache;
    return q_forward_cached(p, phi.data(), phi.size(), cache);
}

/// Gradient of the scalar output with respect to every parameter, laid out
/// exactly like MlpParams.
struct MlpGrad {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    double b2 = 0.0;
};

inline MlpGrad zero_grad(const MlpParams& p) {
    MlpGrad g;
    g.w1.assign(p.w1.size(), 0.0);
    g.b1.assign(p.b1.size(), 0.0);
    g.w2.assign(p.w2.size(), 0.0);
    return g;
}

/// Adds scale * dQ/dtheta at phi into acc. Returns the forward value.
inline double accumulate_q_gradient(const MlpParams& p, const double* phi,
                                    std::size_t len, double scale, MlpGrad& acc) {
    ForwardCache cache;
    double out = q_forward_cached(p, phi, len, cache);
    for (int j = 0; j < p.hidden; ++j) {
        double h = cache.hidden[j];
        acc.w2[j] += scale * h;
        if (h > 0.0) {
            double up = scale * p.w2[j];
            acc.b1[j] += up;
            double* row = acc.w1.data() + static_cast<std::size_t>(j) * p.input;
            for (std::size_t i = 0; i < len; ++i) row[i] += up * phi[i];
        }
    }
    acc.b2 += scale;
    return out;
}

inline MlpGrad q_gradient(const MlpParams& p, const std::vector<double>& phi) {
    MlpGrad g = zero_grad(p);
    accumulate_q_gradient(p, phi.data(), phi.size(), 1.0, g);
    return g;
}

inline void add_scaled(MlpParams& p, const MlpGrad& g, double scale) {
    for (std::size_t i = 0; i < p.w1.size(); ++i) p.w1[i] += scale * g.w1[i];
    for (std::size_t i = 0; i < p.b1.size(); ++i) p.b1[i] += scale * g.b1[i];
    for (std::size_t i = 0; i < p.w2.size(); ++i) p.w2[i] += scale * g.w2[i];
    p.b2 += scale * g.b2;
}

/// One temporal-difference step: theta + learning_rate * delta * grad.
inline MlpParams apply_update(const MlpParams& theta, double delta,
                              const MlpGrad& grad, double learning_rate) {
    if (!std::isfinite(delta))
        throw TrainingDiverged("apply_update: non-finite TD error");
    MlpParams next = theta;
    add_scaled(next, grad, learning_rate * delta);
    if (!all_finite(next))
        throw TrainingDiverged("apply_update: parameters left the finite range");
    return next;
}

// ---------------------------------------------------------------------------
// JSON

inline json mlp_to_json(const MlpParams& p) {
    return json{{"input", p.input},
                {"hidden", p.hidden},
                {"weights", json{{"w1", p.w1}, {"w2", p.w2}}},
                {"biases", json{{"b1", p.b1}, {"b2", p.b2}}}};
}

inline MlpParams mlp_from_json(const json& j) {
    MlpParams p;
    p.input = j.at("input").get<int>();
    p.hidden = j.at("hidden").get<int>();
    if (p.input < 1 || p.hidden < 1) throw InvalidArgument("mlp: bad shape");
    const json& w = j.at("weights");
    const json& b = j.at("biases");
    p.w1 = w.at("w1").get<std::vector<double>>();
    p.w2 = w.at("w2").get<std::vector<double>>();
    p.b1 = b.at("b1").get<std::vector<double>>();
    p.b2 = b.at("b2").get<double>();
    if (p.w1.size() != static_cast<std::size_t>(p.input) * p.hidden ||
        p.w2.size() != static_cast<std::size_t>(p.hidden) ||
        p.b1.size() != static_cast<std::size_t>(p.hidden))
        throw InvalidArgument("mlp: weight array sizes do not match shape");
    return p;
}

} // namespace deckopt
