#include "nesyv/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nesyv/rng.hpp"

namespace nesyv {

int argmax_index(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i)
        if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(best)])
            best = i;
    return best;
}

double accuracy(const Network& net, const Dataset& data) {
    if (data.size() == 0)
        return 0.0;
    int hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        Tensor y = forward(net, data.inputs[i]);
        if (argmax_index(y.data) == data.labels[i])
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

Network make_dense_classifier(const std::vector<int>& input_shape, std::span<const int> hidden,
                              int classes, std::uint64_t seed) {
    Rng rng(seed);
    Network net;
    net.input_shape = input_shape;
    net.layers.push_back(FlattenLayer{});
    int in = Tensor::numel_of(input_shape);
    auto push_dense = [&](int out) {
        DenseLayer d;
        d.out = out;
        d.in = in;
        double s = std::sqrt(6.0 / (in + out));
        d.weight.resize(static_cast<std::size_t>(out * in));
        for (double& w : d.weight)
            w = rng.uniform(-s, s);
        d.bias.assign(static_cast<std::size_t>(out), 0.0);
        net.layers.push_back(std::move(d));
        in = out;
    };
    for (int h : hidden) {
        push_dense(h);
        net.layers.push_back(ReluLayer{});
    }
    push_dense(classes);
    net.layers.push_back(SoftmaxLayer{});
    net.validate();
    return net;
}

namespace {

struct DenseRef {
    DenseLayer* layer;
    bool relu_after;
};

} // namespace

Network train_dense(const Network& net, const Dataset& data, const TrainConfig& cfg) {
    if (data.size() == 0)
        throw Error("train_dense: empty dataset");
    if (data.inputs.size() != data.labels.size())
        throw Error("train_dense: inputs/labels size mismatch");
    if (cfg.batch <= 0 || cfg.epochs < 0 || cfg.lr <= 0)
        throw Error("train_dense: bad hyperparameters");

    Network out = net;
    out.validate();

    // Trainer supports flatten/dense/relu with a terminal softmax only.
    std::vector<DenseRef> stack;
    for (std::size_t i = 0; i < out.layers.size(); ++i) {
        Layer& l = out.layers[i];
        if (auto* d = std::get_if<DenseLayer>(&l)) {
            bool relu_after =
                i + 1 < out.layers.size() && std::holds_alternative<ReluLayer>(out.layers[i + 1]);
            stack.push_back({d, relu_after});
        } else if (std::holds_alternative<ReluLayer>(l)) {
            if (i == 0 || !std::holds_alternative<DenseLayer>(out.layers[i - 1]))
                throw Error("train_dense: relu must directly follow a dense layer");
        } else if (!std::holds_alternative<FlattenLayer>(l) && !std::holds_alternative<SoftmaxLayer>(l)) {
            throw Error(std::string("train_dense: unsupported layer kind: ") + layer_name(l));
        }
    }
    if (stack.empty() || !std::holds_alternative<SoftmaxLayer>(out.layers.back()))
        throw Error("train_dense: network must end with dense layers and a softmax");
    if (stack.back().relu_after)
        throw Error("train_dense: relu between the last dense layer and the softmax is unsupported");

    int classes = stack.back().layer->out;
    for (int label : data.labels)
        if (label < 0 || label >= classes)
            throw Error("train_dense: label out of range");

    std::size_t n_samples = data.size();
    std::vector<std::vector<double>> flat(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (data.inputs[i].shape != out.input_shape)
            throw Error("train_dense: sample " + std::to_string(i) + " shape mismatch");
        flat[i] = data.inputs[i].data;
    }

    Rng rng(cfg.seed);
    std::vector<int> idx(n_samples);
    std::iota(idx.begin(), idx.end(), 0);

    std::size_t depth = stack.size();
    std::vector<std::vector<double>> acts(depth + 1); // activations entering each dense layer
    std::vector<std::vector<double>> pre(depth);      // pre-activation outputs
    std::vector<std::vector<double>> gw(depth), gb(depth);
    for (std::size_t k = 0; k < depth; ++k) {
        gw[k].assign(stack[k].layer->weight.size(), 0.0);
        gb[k].assign(stack[k].layer->bias.size(), 0.0);
    }

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(idx);
        for (std::size_t start = 0; start < n_samples; start += static_cast<std::size_t>(cfg.batch)) {
            std::size_t stop = std::min(n_samples, start + static_cast<std::size_t>(cfg.batch));
            for (std::size_t k = 0; k < depth; ++k) {
                std::fill(gw[k].begin(), gw[k].end(), 0.0);
                std::fill(gb[k].begin(), gb[k].end(), 0.0);
            }
            for (std::size_t s = start; s < stop; ++s) {
                const std::vector<double>& x = flat[static_cast<std::size_t>(idx[s])];
                int label = data.labels[static_cast<std::size_t>(idx[s])];

                acts[0] = x;
                for (std::size_t k = 0; k < depth; ++k) {
                    const DenseLayer& d = *stack[k].layer;
                    pre[k].assign(static_cast<std::size_t>(d.out), 0.0);
                    for (int o = 0; o < d.out; ++o) {
                        double v = d.bias[static_cast<std::size_t>(o)];
                        const double* row = d.weight.data() + static_cast<std::size_t>(o) * d.in;
                        for (int i2 = 0; i2 < d.in; ++i2)
                            v += row[i2] * acts[k][static_cast<std::size_t>(i2)];
                        pre[k][static_cast<std::size_t>(o)] = v;
                    }
                    acts[k + 1] = pre[k];
                    if (stack[k].relu_after)
                        for (double& v : acts[k + 1])
                            v = std::max(0.0, v);
                }

                // Softmax + cross-entropy: d(loss)/d(logit) = p - onehot.
                std::vector<double> grad = softmax(pre[depth - 1]);
                grad[static_cast<std::size_t>(label)] -= 1.0;

                for (std::size_t k = depth; k-- > 0;) {
                    const DenseLayer& d = *stack[k].layer;
                    for (int o = 0; o < d.out; ++o) {
                        double g = grad[static_cast<std::size_t>(o)];
                        gb[k][static_cast<std::size_t>(o)] += g;
                        double* wrow = gw[k].data() + static_cast<std::size_t>(o) * d.in;
                        for (int i2 = 0; i2 < d.in; ++i2)
                            wrow[i2] += g * acts[k][static_cast<std::size_t>(i2)];
                    }
                    if (k == 0)
                        break;
                    std::vector<double> prev(static_cast<std::size_t>(d.in), 0.0);
                    for (int o = 0; o < d.out; ++o) {
                        double g = grad[static_cast<std::size_t>(o)];
                        const double* row = d.weight.data() + static_cast<std::size_t>(o) * d.in;
                        for (int i2 = 0; i2 < d.in; ++i2)
                            prev[static_cast<std::size_t>(i2)] += g * row[i2];
                    }
                    if (stack[k - 1].relu_after)
                        for (int i2 = 0; i2 < d.in; ++i2)
                            if (pre[k - 1][static_cast<std::size_t>(i2)] <= 0.0)
                                prev[static_cast<std::size_t>(i2)] = 0.0;
                    grad = std::move(prev);
                }
            }

            double scale = cfg.lr / static_cast<double>(stop - start);
            for (std::size_t k = 0; k < depth; ++k) {
                DenseLayer& d = *stack[k].layer;
                for (std::size_t i2 = 0; i2 < d.weight.size(); ++i2)
                    d.weight[i2] -= scale * gw[k][i2];
                for (std::size_t i2 = 0; i2 < d.bias.size(); ++i2)
                    d.bias[i2] -= scale * gb[k][i2];
            }
        }
    }
    return out;
}

} // namespace nesyv
