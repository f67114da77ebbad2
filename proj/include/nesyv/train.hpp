#pragma once

#include <cstdint>
#include <span>

#include "nesyv/network.hpp"

namespace nesyv {

struct Dataset {
    std::vector<Tensor> inputs;
    std::vector<int> labels;

    std::size_t size() const { return inputs.size(); }
};

struct TrainConfig {
    double lr = 0.1;
    int epochs = 10;
    int batch = 16;
    std::uint64_t seed = 0;
};

// Mini-batch SGD with cross-entropy loss on a flatten/dense/relu/softmax
// network. Deterministic given the seed; single-threaded by design.
Network train_dense(const Network& net, const Dataset& data, const TrainConfig& cfg);

// Flatten -> (Dense -> Relu)* -> Dense -> Softmax with seeded uniform
// Glorot initialization.
Network make_dense_classifier(const std::vector<int>& input_shape, std::span<const int> hidden,
                              int classes, std::uint64_t seed);

int argmax_index(std::span<const double> v);
double accuracy(const Network& net, const Dataset& data);

} // namespace nesyv
