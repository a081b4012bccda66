#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ringworm/error.hpp"
#include "ringworm/features.hpp"
#include "ringworm/rng.hpp"

namespace ringworm {

// Single hidden layer, logistic sigmoid on every node, two output nodes
// (node 0 = positive class, node 1 = negative class).
struct MlpModel {
    int n_in = 0;
    int n_hidden = 0;
    int n_out = 2;
    std::vector<double> w_hidden; // n_hidden x n_in, row-major
    std::vector<double> b_hidden; // n_hidden
    std::vector<double> w_out;    // n_out x n_hidden
    std::vector<double> b_out;    // n_out
};

struct MlpTrainConfig {
    double eta = 0.8;       // learning rate
    double alpha = 0.7;     // momentum
    int hidden = 20;
    int max_epochs = 2000;
    double target_mse = 0.01;
    std::uint64_t seed = 1;

    void validate() const {
        if (!(eta >= 0.0)) throw std::invalid_argument("MlpTrainConfig: eta must be >= 0");
        if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("MlpTrainConfig: alpha must be in [0,1)");
        if (hidden < 1) throw std::invalid_argument("MlpTrainConfig: hidden size must be >= 1");
        if (max_epochs < 0) throw std::invalid_argument("MlpTrainConfig: max_epochs must be >= 0");
    }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline std::array<double, 2> one_hot_target(int label) {
    return label == kPositive ? std::array<double, 2>{1.0, 0.0}
                              : std::array<double, 2>{0.0, 1.0};
}

inline std::vector<double> mlp_hidden_activations(const MlpModel& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.n_in)
        throw std::invalid_argument("mlp_forward: dimension mismatch");
    std::vector<double> h(m.n_hidden);
    for (int j = 0; j < m.n_hidden; ++j) {
        double a = m.b_hidden[j];
        const double* w = &m.w_hidden[static_cast<std::size_t>(j) * m.n_in];
        for (int i = 0; i < m.n_in; ++i) a += w[i] * x[i];
        h[j] = sigmoid(a);
    }
    return h;
}

inline std::vector<double> mlp_output_activations(const MlpModel& m, const std::vector<double>& h) {
    std::vector<double> o(m.n_out);
    for (int k = 0; k < m.n_out; ++k) {
        double a = m.b_out[k];
        const double* w = &m.w_out[static_cast<std::size_t>(k) * m.n_hidden];
        for (int j = 0; j < m.n_hidden; ++j) a += w[j] * h[j];
        o[k] = sigmoid(a);
    }
    return o;
}

inline std::vector<double> mlp_forward(const MlpModel& m, const std::vector<double>& x) {
    return mlp_output_activations(m, mlp_hidden_activations(m, x));
}

// Per-sample squared error E = 1/2 sum_k (o_k - t_k)^2.
inline double mlp_sample_error(const MlpModel& m, const std::vector<double>& x,
                               const std::array<double, 2>& target) {
    const auto o = mlp_forward(m, x);
    double e = 0.0;
    for (int k = 0; k < m.n_out; ++k) e += (o[k] - target[k]) * (o[k] - target[k]);
    return 0.5 * e;
}

struct MlpGradients {
    std::vector<double> w_hidden, b_hidden, w_out, b_out;
};

// Backpropagated gradient of the per-sample squared error.
inline MlpGradients mlp_gradients(const MlpModel& m, const std::vector<double>& x,
                                  const std::array<double, 2>& target) {
    const auto h = mlp_hidden_activations(m, x);
    const auto o = mlp_output_activations(m, h);

    MlpGradients g;
    g.w_hidden.assign(m.w_hidden.size(), 0.0);
    g.b_hidden.assign(m.b_hidden.size(), 0.0);
    g.w_out.assign(m.w_out.size(), 0.0);
    g.b_out.assign(m.b_out.size(), 0.0);

    std::vector<double> delta_out(m.n_out);
    for (int k = 0; k < m.n_out; ++k) {
        delta_out[k] = (o[k] - target[k]) * o[k] * (1.0 - o[k]);
        g.b_out[k] = delta_out[k];
        for (int j = 0; j < m.n_hidden; ++j)
            g.w_out[static_cast<std::size_t>(k) * m.n_hidden + j] = delta_out[k] * h[j];
    }
    for (int j = 0; j < m.n_hidden; ++j) {
        double back = 0.0;
        for (int k = 0; k < m.n_out; ++k)
            back += delta_out[k] * m.w_out[static_cast<std::size_t>(k) * m.n_hidden + j];
        const double delta_h = back * h[j] * (1.0 - h[j]);
        g.b_hidden[j] = delta_h;
        for (int i = 0; i < m.n_in; ++i)
            g.w_hidden[static_cast<std::size_t>(j) * m.n_in + i] = delta_h * x[i];
    }
    return g;
}

// Mean per-sample squared error over a labeled set.
inline double mlp_mse(const MlpModel& m, const std::vector<FeatureVector>& samples) {
    if (samples.empty()) throw std::invalid_argument("mlp_mse: empty sample set");
    double total = 0.0;
    for (const auto& s : samples) total += mlp_sample_error(m, s.values, one_hot_target(s.label));
    return total / static_cast<double>(samples.size());
}

inline MlpModel mlp_init(int n_in, const MlpTrainConfig& cfg) {
    MlpModel m;
    m.n_in = n_in;
    m.n_hidden = cfg.hidden;
    m.n_out = 2;
    RngEngine rng(cfg.seed);
    auto init = [&](std::vector<double>& w, std::size_t n) {
        w.resize(n);
        for (double& v : w) v = uniform_real(rng, -0.5, 0.5);
    };
    init(m.w_hidden, static_cast<std::size_t>(m.n_hidden) * n_in);
    init(m.b_hidden, static_cast<std::size_t>(m.n_hidden));
    init(m.w_out, static_cast<std::size_t>(m.n_out) * m.n_hidden);
    init(m.b_out, static_cast<std::size_t>(m.n_out));
    return m;
}

// Online backpropagation with momentum: dw(t) = -eta * dE/dw + alpha * dw(t-1).
// Samples are reshuffled every epoch; training stops at max_epochs or once the
// epoch MSE (averaged over the pre-update forward passes) reaches target_mse.
inline MlpModel mlp_train(const std::vector<FeatureVector>& samples, const MlpTrainConfig& cfg) {
    cfg.validate();
    if (samples.empty()) throw TrainError("mlp_train: empty training set");
    for (const auto& s : samples)
        if (s.label != kNegative && s.label != kPositive)
            throw TrainError("mlp_train: sample without a binary label");

    const int n_in = static_cast<int>(samples.front().values.size());
    MlpModel m = mlp_init(n_in, cfg);

    MlpGradients vel; // momentum buffers
    vel.w_hidden.assign(m.w_hidden.size(), 0.0);
    vel.b_hidden.assign(m.b_hidden.size(), 0.0);
    vel.w_out.assign(m.w_out.size(), 0.0);
    vel.b_out.assign(m.b_out.size(), 0.0);

    RngEngine shuffle_rng(cfg.seed ^ 0x5DEECE66Dull);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto update = [&](std::vector<double>& w, std::vector<double>& v, const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            v[i] = -cfg.eta * g[i] + cfg.alpha * v[i];
            w[i] += v[i];
        }
    };

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        shuffle_in_place(order, shuffle_rng);
        double epoch_error = 0.0;
        for (std::size_t idx : order) {
            const auto& s = samples[idx];
            const auto target = one_hot_target(s.label);
            epoch_error += mlp_sample_error(m, s.values, target);
            const MlpGradients g = mlp_gradients(m, s.values, target);
            update(m.w_hidden, vel.w_hidden, g.w_hidden);
            update(m.b_hidden, vel.b_hidden, g.b_hidden);
            update(m.w_out, vel.w_out, g.w_out);
            update(m.b_out, vel.b_out, g.b_out);
        }
        if (epoch_error / static_cast<double>(samples.size()) <= cfg.target_mse) break;
    }
    return m;
}

// Argmax over the two output activations; ties go to the negative class.
inline int mlp_predict(const MlpModel& m, const FeatureVector& v) {
    const auto o = mlp_forward(m, v.values);
    return o[0] > o[1] ? kPositive : kNegative;
}

} // namespace ringworm
