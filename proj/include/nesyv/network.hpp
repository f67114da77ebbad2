#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nesyv/tensor.hpp"

namespace nesyv {

struct DenseLayer {
    int out = 0, in = 0;
    std::vector<double> weight; // out x in, row-major
    std::vector<double> bias;   // out
};

struct Conv2dLayer {
    int out_c = 0, in_c = 0, kh = 0, kw = 0;
    int stride = 1, pad = 0; // zero padding
    std::vector<double> weight; // out_c x in_c x kh x kw, row-major
    std::vector<double> bias;   // out_c
};

struct MaxPool2dLayer {
    int kh = 0, kw = 0, stride = 1;
};

struct ReluLayer {};
struct SigmoidLayer {};
struct SoftmaxLayer {};
struct FlattenLayer {};

using Layer =
    std::variant<DenseLayer, Conv2dLayer, MaxPool2dLayer, ReluLayer, SigmoidLayer, SoftmaxLayer, FlattenLayer>;

const char* layer_name(const Layer& layer);

// Output shape of a layer for the given input shape; throws on mismatch.
std::vector<int> layer_output_shape(const Layer& layer, const std::vector<int>& in);

struct Network {
    std::vector<Layer> layers;
    std::vector<int> input_shape;

    // Checks parameter shapes, that layer shapes chain from input_shape,
    // and that softmax/sigmoid appear only as the terminal layer.
    void validate() const;
    std::vector<int> output_shape() const;
    int output_size() const;
};

Tensor forward(const Network& net, const Tensor& x);

// Interval bound propagation: affine layers use the center-radius rule
// (mu' = W mu + b, r' = |W| r), monotone activations apply endpoint-wise,
// max-pool takes per-endpoint window maxima, softmax uses softmax_bounds.
BoundedTensor forward_ibp(const Network& net, const BoundedTensor& bx);

// Sound per-class softmax bounds for logits boxed by [l, u]:
//   lower_i = 1 / (1 + sum_{j!=i} exp(u_j - l_i))
//   upper_i = 1 / (1 + sum_{j!=i} exp(l_j - u_i))
// computed in max-shifted form.
std::pair<std::vector<double>, std::vector<double>> softmax_bounds(std::span<const double> l,
                                                                   std::span<const double> u);

std::vector<double> softmax(std::span<const double> logits);

} // namespace nesyv
