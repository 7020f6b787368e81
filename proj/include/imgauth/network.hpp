#ifndef IMGAUTH_NETWORK_HPP
#define IMGAUTH_NETWORK_HPP

#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "imgauth/error.hpp"
#include "imgauth/rng.hpp"

namespace imgauth {

/// Dense layer: `weights` is out x in, row-major.
struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;
    std::vector<double> biases;

    double& w(std::size_t o, std::size_t i) { return weights[o * in + i]; }
    double w(std::size_t o, std::size_t i) const { return weights[o * in + i]; }
};

/// input -> hidden -> output perceptron with logistic sigmoid on both non-input layers.
struct Network {
    std::array<std::size_t, 3> layer_sizes{};
    std::array<Layer, 2> layers;

    std::size_t input_size() const noexcept { return layer_sizes[0]; }
    std::size_t hidden_size() const noexcept { return layer_sizes[1]; }
    std::size_t output_size() const noexcept { return layer_sizes[2]; }

    friend bool operator==(const Network& a, const Network& b) {
        if (a.layer_sizes != b.layer_sizes) return false;
        for (std::size_t l = 0; l < 2; ++l)
            if (a.layers[l].weights != b.layers[l].weights || a.layers[l].biases != b.layers[l].biases) return false;
        return true;
    }
};

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    double error_goal = 1e-3;
    std::size_t max_epochs = 5000;
    std::uint64_t seed = 1;
    double target_low = 0.1;
    double target_high = 0.9;
};

struct TrainRecord {
    std::size_t epoch = 0;
    double mse = 0.0;
    double wall_time = 0.0;  // seconds since training started
};

struct Gradients {
    std::array<std::vector<double>, 2> weights;
    std::array<std::vector<double>, 2> biases;
};

struct ForwardPass {
    std::vector<double> hidden;
    std::vector<double> output;
};

struct Prediction {
    std::size_t label = 0;
    double confidence = 0.0;
    std::vector<double> output_vector;
    bool rejected = false;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Glorot-uniform weights from Rng(seed), drawn layer by layer in row-major order; zero biases.
inline Network init_network(std::array<std::size_t, 3> sizes, std::uint64_t seed) {
    for (std::size_t s : sizes)
        if (s == 0) throw ParameterError("layer sizes must all be >= 1");
    Network net;
    net.layer_sizes = sizes;
    Rng rng(seed);
    for (std::size_t l = 0; l < 2; ++l) {
        Layer& layer = net.layers[l];
        layer.in = sizes[l];
        layer.out = sizes[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
        layer.weights.resize(layer.in * layer.out);
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
        layer.biases.assign(layer.out, 0.0);
    }
    return net;
}

namespace detail {
inline void dense_sigmoid(const Layer& layer, std::span<const double> in, std::vector<double>& out) {
    out.resize(layer.out);
    for (std::size_t o = 0; o < layer.out; ++o) {
        const double* row = &layer.weights[o * layer.in];
        double z = layer.biases[o];
        for (std::size_t i = 0; i < layer.in; ++i) z += row[i] * in[i];
        out[o] = sigmoid(z);
    }
}
}  // namespace detail

inline ForwardPass forward(const Network& net, std::span<const double> x) {
    if (x.size() != net.input_size())
        throw ParameterError("input length " + std::to_string(x.size()) + " does not match network input " +
                             std::to_string(net.input_size()));
    ForwardPass fp;
    detail::dense_sigmoid(net.layers[0], x, fp.hidden);
    detail::dense_sigmoid(net.layers[1], fp.hidden, fp.output);
    return fp;
}

/// Per-sample loss (1/C) sum_i (o_i - t_i)^2.
inline double sample_loss(std::span<const double> output, std::span<const double> target) {
    double e = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) e += (output[i] - target[i]) * (output[i] - target[i]);
    return e / static_cast<double>(output.size());
}

inline Gradients zero_gradients(const Network& net) {
    Gradients g;
    for (std::size_t l = 0; l < 2; ++l) {
        g.weights[l].assign(net.layers[l].weights.size(), 0.0);
        g.biases[l].assign(net.layers[l].biases.size(), 0.0);
    }
    return g;
}

/// Adds scale * dE/dparam for one sample into `g`, where E is sample_loss.
inline void accumulate_gradients(const Network& net, std::span<const double> x, std::span<const double> target,
                                 double scale, Gradients& g) {
    if (target.size() != net.output_size())
        throw ParameterError("target length " + std::to_string(target.size()) + " does not match network output " +
                             std::to_string(net.output_size()));
    const auto fp = forward(net, x);
    const Layer& l1 = net.layers[1];
    const std::size_t c = net.output_size();
    const std::size_t h = net.hidden_size();

    std::vector<double> delta_out(c);
    for (std::size_t o = 0; o < c; ++o) {
        const double y = fp.output[o];
        delta_out[o] = 2.0 * (y - target[o]) / static_cast<double>(c) * y * (1.0 - y) * scale;
    }
    std::vector<double> delta_hid(h, 0.0);
    for (std::size_t o = 0; o < c; ++o) {
        const double* row = &l1.weights[o * h];
        double* grow = &g.weights[1][o * h];
        for (std::size_t j = 0; j < h; ++j) {
            delta_hid[j] += row[j] * delta_out[o];
            grow[j] += delta_out[o] * fp.hidden[j];
        }
        g.biases[1][o] += delta_out[o];
    }
    const std::size_t d = net.input_size();
    for (std::size_t j = 0; j < h; ++j) {
        const double a = fp.hidden[j];
        const double dj = delta_hid[j] * a * (1.0 - a);
        double* grow = &g.weights[0][j * d];
        for (std::size_t i = 0; i < d; ++i) grow[i] += dj * x[i];
        g.biases[0][j] += dj;
    }
}

/// Exact gradient of sample_loss for a single example.
inline Gradients compute_gradients(const Network& net, std::span<const double> x, std::span<const double> target) {
    auto g = zero_gradients(net);
    accumulate_gradients(net, x, target, 1.0, g);
    return g;
}

/// Multiply-accumulates for one epoch: forward (D*H + H*C) plus backward (D*H + 2*H*C) per sample.
inline std::uint64_t macs_per_epoch(std::array<std::size_t, 3> sizes, std::size_t samples) {
    const std::uint64_t d = sizes[0], h = sizes[1], c = sizes[2];
    return static_cast<std::uint64_t>(samples) * (2 * d * h + 3 * h * c);
}

struct LabeledVector {
    std::vector<double> values;
    std::size_t label = 0;
};

/// Soft one-hot target; a single-output network encodes label 1 as high and 0 as low.
inline std::vector<double> encode_target(std::size_t label, std::size_t classes, const TrainConfig& cfg) {
    if (classes == 1) return {label == 1 ? cfg.target_high : cfg.target_low};
    std::vector<double> t(classes, cfg.target_low);
    t[label] = cfg.target_high;
    return t;
}

struct TrainResult {
    Network net;
    std::vector<TrainRecord> history;
    bool reached_goal = false;
};

inline double batch_mse(const Network& net, std::span<const LabeledVector> data, const TrainConfig& cfg) {
    double total = 0.0;
    for (const auto& ex : data) {
        const auto fp = forward(net, ex.values);
        total += sample_loss(fp.output, encode_target(ex.label, net.output_size(), cfg));
    }
    return total / static_cast<double>(data.size());
}

/// Full-batch gradient descent with momentum on the mean sample loss:
///   delta_t = -lr * grad + momentum * delta_{t-1}.
/// Epoch e records the loss after e updates; training stops once the loss is at or below
/// the goal, or after max_epochs updates.
inline TrainResult train(Network net, std::span<const LabeledVector> data, const TrainConfig& cfg) {
    if (!(cfg.learning_rate >= 0.0)) throw ParameterError("learning rate must be non-negative");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) throw ParameterError("momentum must be in [0,1)");
    if (!(cfg.error_goal > 0.0)) throw ParameterError("error goal must be positive");
    if (data.empty()) throw ParameterError("training set is empty");
    const std::size_t classes = net.output_size();
    const std::size_t label_space = classes == 1 ? 2 : classes;
    std::vector<bool> seen(label_space, false);
    for (const auto& ex : data) {
        if (ex.label >= label_space) throw ParameterError("label " + std::to_string(ex.label) + " outside 0.." + std::to_string(label_space - 1));
        if (ex.values.size() != net.input_size()) throw ParameterError("training vector length does not match network input");
        seen[ex.label] = true;
    }
    for (std::size_t c = 0; c < label_space; ++c)
        if (!seen[c]) throw ParameterError("class " + std::to_string(c) + " has no training examples");

    std::vector<std::vector<double>> targets;
    targets.reserve(data.size());
    for (const auto& ex : data) targets.push_back(encode_target(ex.label, classes, cfg));

    TrainResult res;
    auto velocity = zero_gradients(net);
    const auto start = std::chrono::steady_clock::now();
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (std::size_t epoch = 0;; ++epoch) {
        auto grad = zero_gradients(net);
        double mse = 0.0;
        for (std::size_t s = 0; s < data.size(); ++s) {
            const auto fp = forward(net, data[s].values);
            mse += sample_loss(fp.output, targets[s]);
            accumulate_gradients(net, data[s].values, targets[s], inv_n, grad);
        }
        mse *= inv_n;
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.history.push_back({epoch, mse, t});
        if (mse <= cfg.error_goal) {
            res.reached_goal = true;
            break;
        }
        if (epoch >= cfg.max_epochs) break;
        for (std::size_t l = 0; l < 2; ++l) {
            auto& layer = net.layers[l];
            for (std::size_t i = 0; i < layer.weights.size(); ++i) {
                velocity.weights[l][i] = -cfg.learning_rate * grad.weights[l][i] + cfg.momentum * velocity.weights[l][i];
                layer.weights[i] += velocity.weights[l][i];
            }
            for (std::size_t i = 0; i < layer.biases.size(); ++i) {
                velocity.biases[l][i] = -cfg.learning_rate * grad.biases[l][i] + cfg.momentum * velocity.biases[l][i];
                layer.biases[i] += velocity.biases[l][i];
            }
        }
    }
    res.net = std::move(net);
    return res;
}

/// argmax with lowest index on ties. A single-output network is read as a binary
/// classifier: label 1 when the output is at least 0.5, confidence max(o, 1 - o).
inline Prediction predict_from_output(std::vector<double> output, double reject_below) {
    Prediction p;
    if (output.size() == 1) {
        p.label = output[0] >= 0.5 ? 1 : 0;
        p.confidence = std::max(output[0], 1.0 - output[0]);
    } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < output.size(); ++i)
            if (output[i] > output[best]) best = i;
        p.label = best;
        p.confidence = output[best];
    }
    p.output_vector = std::move(output);
    p.rejected = p.confidence < reject_below;
    return p;
}

inline Prediction predict(const Network& net, std::span<const double> x, double reject_below) {
    return predict_from_output(forward(net, x).output, reject_below);
}

}  // namespace imgauth

#endif  // IMGAUTH_NETWORK_HPP
