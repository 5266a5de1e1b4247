#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tfrs/errors.hpp"
#include "tfrs/pca.hpp"
#include "tfrs/rng.hpp"

namespace tfrs {

/// Five layers: input, three hidden, output. All four trainable layers use
/// the tan-sigmoid activation.
struct MlpConfig {
    std::array<int, 5> layer_sizes{1, 32, 32, 32, 1};
    double learning_rate = 0.02;
    double momentum = 0.9;
    int epochs = 300;
    std::uint64_t seed = 0;
    double target_loss = 0.0;
};

struct MlpModel {
    MlpConfig config;
    std::vector<std::vector<double>> weights; // [l]: layer_sizes[l+1] x layer_sizes[l], row-major
    std::vector<std::vector<double>> biases;  // [l]: layer_sizes[l+1]
    std::vector<int> class_labels;            // output unit -> class label, first-appearance order

    // set by mlp_train
    double final_loss = 0.0;
    int epochs_run = 0;
};

struct MlpGradient {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    double loss = 0.0; // E = 1/2 sum over examples and outputs of (target - output)^2
};

inline constexpr int kMlpTrainableLayers = 4;

/// Layer activations, a[0] the input through a[4] the output.
using MlpActivations = std::array<std::vector<double>, 5>;

inline MlpActivations mlp_forward(const MlpModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.config.layer_sizes[0])
        throw SizeError("input length does not match the network input layer");
    MlpActivations a;
    a[0].assign(x.begin(), x.end());
    for (int l = 0; l < kMlpTrainableLayers; ++l) {
        const int n_in = model.config.layer_sizes[static_cast<std::size_t>(l)];
        const int n_out = model.config.layer_sizes[static_cast<std::size_t>(l) + 1];
        a[static_cast<std::size_t>(l) + 1].resize(static_cast<std::size_t>(n_out));
        for (int o = 0; o < n_out; ++o) {
            const double* w = model.weights[static_cast<std::size_t>(l)].data() +
                              static_cast<std::size_t>(o) * n_in;
            double z = model.biases[static_cast<std::size_t>(l)][static_cast<std::size_t>(o)];
            for (int i = 0; i < n_in; ++i) z += w[i] * a[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)];
            a[static_cast<std::size_t>(l) + 1][static_cast<std::size_t>(o)] = std::tanh(z);
        }
    }
    return a;
}

/// Index of the strongest output unit; ties go to the lowest unit.
inline int mlp_predict_unit(const MlpModel& model, std::span<const double> x) {
    const MlpActivations a = mlp_forward(model, x);
    const std::vector<double>& out = a[4];
    const std::size_t units =
        model.class_labels.empty() ? out.size()
                                   : std::min(out.size(), model.class_labels.size());
    std::size_t best = 0;
    for (std::size_t o = 1; o < units; ++o)
        if (out[o] > out[best]) best = o;
    return static_cast<int>(best);
}

inline int mlp_predict_label(const MlpModel& model, std::span<const double> x) {
    const int unit = mlp_predict_unit(model, x);
    if (model.class_labels.empty()) return unit;
    return model.class_labels[static_cast<std::size_t>(unit)];
}

namespace detail {

inline MlpGradient zero_gradient(const MlpConfig& cfg) {
    MlpGradient g;
    g.weights.resize(kMlpTrainableLayers);
    g.biases.resize(kMlpTrainableLayers);
    for (int l = 0; l < kMlpTrainableLayers; ++l) {
        const auto n_in = static_cast<std::size_t>(cfg.layer_sizes[static_cast<std::size_t>(l)]);
        const auto n_out = static_cast<std::size_t>(cfg.layer_sizes[static_cast<std::size_t>(l) + 1]);
        g.weights[static_cast<std::size_t>(l)].assign(n_in * n_out, 0.0);
        g.biases[static_cast<std::size_t>(l)].assign(n_out, 0.0);
    }
    return g;
}

} // namespace detail

/// Exact analytic gradient of E summed over the batch (full-batch rule).
inline MlpGradient mlp_gradient(const MlpModel& model,
                                const std::vector<std::vector<double>>& inputs,
                                const std::vector<std::vector<double>>& targets) {
    if (inputs.size() != targets.size())
        throw SizeError("batch inputs and targets differ in count");
    MlpGradient g = detail::zero_gradient(model.config);

    for (std::size_t e = 0; e < inputs.size(); ++e) {
        const MlpActivations a = mlp_forward(model, inputs[e]);
        const std::vector<double>& out = a[4];
        if (out.size() != targets[e].size())
            throw SizeError("target length does not match the output layer");

        // delta at the output: (o - t) * tanh'(z), tanh'(z) = 1 - o^2
        std::vector<double> delta(out.size());
        for (std::size_t o = 0; o < out.size(); ++o) {
            const double err = out[o] - targets[e][o];
            g.loss += 0.5 * (targets[e][o] - out[o]) * (targets[e][o] - out[o]);
            delta[o] = err * (1.0 - out[o] * out[o]);
        }

        for (int l = kMlpTrainableLayers - 1; l >= 0; --l) {
            const int n_in = model.config.layer_sizes[static_cast<std::size_t>(l)];
            const int n_out = model.config.layer_sizes[static_cast<std::size_t>(l) + 1];
            const std::vector<double>& below = a[static_cast<std::size_t>(l)];
            for (int o = 0; o < n_out; ++o) {
                double* gw = g.weights[static_cast<std::size_t>(l)].data() +
                             static_cast<std::size_t>(o) * n_in;
                for (int i = 0; i < n_in; ++i)
                    gw[i] += delta[static_cast<std::size_t>(o)] * below[static_cast<std::size_t>(i)];
                g.biases[static_cast<std::size_t>(l)][static_cast<std::size_t>(o)] +=
                    delta[static_cast<std::size_t>(o)];
            }
            if (l == 0) break;
            std::vector<double> next(static_cast<std::size_t>(n_in), 0.0);
            for (int i = 0; i < n_in; ++i) {
                double s = 0.0;
                for (int o = 0; o < n_out; ++o)
                    s += model.weights[static_cast<std::size_t>(l)]
                                      [static_cast<std::size_t>(o) * n_in + i] *
                         delta[static_cast<std::size_t>(o)];
                next[static_cast<std::size_t>(i)] =
                    s * (1.0 - below[static_cast<std::size_t>(i)] * below[static_cast<std::size_t>(i)]);
            }
            delta = std::move(next);
        }
    }
    return g;
}

/// Full-batch gradient descent with momentum. Targets are +0.9 for the true
/// class unit and -0.9 elsewhere. The velocity update is
/// dW(t) = mc * dW(t-1) - (1 - mc) * lr * grad, so mc = 0 steps exactly by
/// -lr * grad and mc = 1 repeats the previous change and ignores the
/// gradient entirely. Weights start uniform in [-0.5, 0.5] from the seeded
/// generator (per layer: all weights row-major, then biases); velocity
/// starts at zero. Training stops after `epochs` updates or once the batch
/// loss reaches target_loss.
inline MlpModel mlp_train(const FeatureMatrix& train, const MlpConfig& cfg) {
    if (train.rows < 1) throw SizeError("empty training set");
    if (train.cols != cfg.layer_sizes[0])
        throw SizeError("feature length does not match the network input layer");
    for (int s : cfg.layer_sizes)
        if (s < 1) throw SizeError("layer sizes must be >= 1");

    MlpModel model;
    model.config = cfg;
    const int n_units = cfg.layer_sizes[4];
    for (int label : train.labels) {
        bool known = false;
        for (int existing : model.class_labels) known = known || existing == label;
        if (!known) {
            if (static_cast<int>(model.class_labels.size()) == n_units)
                throw LabelError("more classes than output units");
            model.class_labels.push_back(label);
        }
    }

    Rng rng(cfg.seed);
    model.weights.resize(kMlpTrainableLayers);
    model.biases.resize(kMlpTrainableLayers);
    for (int l = 0; l < kMlpTrainableLayers; ++l) {
        const auto n_in = static_cast<std::size_t>(cfg.layer_sizes[static_cast<std::size_t>(l)]);
        const auto n_out = static_cast<std::size_t>(cfg.layer_sizes[static_cast<std::size_t>(l) + 1]);
        model.weights[static_cast<std::size_t>(l)].resize(n_in * n_out);
        for (double& w : model.weights[static_cast<std::size_t>(l)]) w = rng.uniform(-0.5, 0.5);
        model.biases[static_cast<std::size_t>(l)].resize(n_out);
        for (double& b : model.biases[static_cast<std::size_t>(l)]) b = rng.uniform(-0.5, 0.5);
    }

    std::vector<std::vector<double>> inputs(static_cast<std::size_t>(train.rows));
    std::vector<std::vector<double>> targets(static_cast<std::size_t>(train.rows));
    for (int i = 0; i < train.rows; ++i) {
        auto r = train.row(i);
        inputs[static_cast<std::size_t>(i)].assign(r.begin(), r.end());
        targets[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n_units), -0.9);
        for (std::size_t u = 0; u < model.class_labels.size(); ++u)
            if (model.class_labels[u] == train.labels[static_cast<std::size_t>(i)])
                targets[static_cast<std::size_t>(i)][u] = 0.9;
    }

    MlpGradient velocity = detail::zero_gradient(cfg);
    const double mc = cfg.momentum;
    const double lr = cfg.learning_rate;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        MlpGradient g = mlp_gradient(model, inputs, targets);
        model.final_loss = g.loss;
        if (g.loss <= cfg.target_loss) return model;
        for (int l = 0; l < kMlpTrainableLayers; ++l) {
            auto& vw = velocity.weights[static_cast<std::size_t>(l)];
            auto& vb = velocity.biases[static_cast<std::size_t>(l)];
            const auto& gw = g.weights[static_cast<std::size_t>(l)];
            const auto& gb = g.biases[static_cast<std::size_t>(l)];
            auto& w = model.weights[static_cast<std::size_t>(l)];
            auto& b = model.biases[static_cast<std::size_t>(l)];
            for (std::size_t i = 0; i < vw.size(); ++i) {
                vw[i] = mc * vw[i] - (1.0 - mc) * lr * gw[i];
                w[i] += vw[i];
            }
            for (std::size_t i = 0; i < vb.size(); ++i) {
                vb[i] = mc * vb[i] - (1.0 - mc) * lr * gb[i];
                b[i] += vb[i];
            }
        }
        model.epochs_run = epoch + 1;
    }
    // final loss after the last update
    model.final_loss = mlp_gradient(model, inputs, targets).loss;
    return model;
}

} // namespace tfrs
