#include "nesyv/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nesyv {

const char* layer_name(const Layer& layer) {
    struct Visitor {
        const char* operator()(const DenseLayer&) { return "dense"; }
        const char* operator()(const Conv2dLayer&) { return "conv2d"; }
        const char* operator()(const MaxPool2dLayer&) { return "maxpool2d"; }
        const char* operator()(const ReluLayer&) { return "relu"; }
        const char* operator()(const SigmoidLayer&) { return "sigmoid"; }
        const char* operator()(const SoftmaxLayer&) { return "softmax"; }
        const char* operator()(const FlattenLayer&) { return "flatten"; }
    };
    return std::visit(Visitor{}, layer);
}

namespace {

int checked_numel(const std::vector<int>& shape) { return Tensor::numel_of(shape); }

void check_conv_params(const Conv2dLayer& l) {
    if (l.out_c <= 0 || l.in_c <= 0 || l.kh <= 0 || l.kw <= 0 || l.stride <= 0 || l.pad < 0)
        throw Error("conv2d: bad parameters");
    if (static_cast<int>(l.weight.size()) != l.out_c * l.in_c * l.kh * l.kw)
        throw Error("conv2d: kernel array length mismatch");
    if (static_cast<int>(l.bias.size()) != l.out_c)
        throw Error("conv2d: bias length mismatch");
}

std::vector<int> conv_out_shape(const Conv2dLayer& l, const std::vector<int>& in) {
    if (in.size() != 3 || in[0] != l.in_c)
        throw Error("conv2d: expected input (C,H,W) with C=" + std::to_string(l.in_c) + ", got " +
                    shape_string(in));
    int h = (in[1] + 2 * l.pad - l.kh) / l.stride + 1;
    int w = (in[2] + 2 * l.pad - l.kw) / l.stride + 1;
    if (in[1] + 2 * l.pad < l.kh || in[2] + 2 * l.pad < l.kw)
        throw Error("conv2d: kernel larger than padded input");
    return {l.out_c, h, w};
}

std::vector<int> pool_out_shape(const MaxPool2dLayer& l, const std::vector<int>& in) {
    if (in.size() != 3)
        throw Error("maxpool2d: expected input (C,H,W), got " + shape_string(in));
    if (l.kh <= 0 || l.kw <= 0 || l.stride <= 0)
        throw Error("maxpool2d: bad parameters");
    if (in[1] < l.kh || in[2] < l.kw)
        throw Error("maxpool2d: window larger than input");
    return {in[0], (in[1] - l.kh) / l.stride + 1, (in[2] - l.kw) / l.stride + 1};
}

} // namespace

std::vector<int> layer_output_shape(const Layer& layer, const std::vector<int>& in) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
        if (d->out <= 0 || d->in <= 0)
            throw Error("dense: bad dimensions");
        if (static_cast<int>(d->weight.size()) != d->out * d->in)
            throw Error("dense: weight array length mismatch");
        if (static_cast<int>(d->bias.size()) != d->out)
            throw Error("dense: bias length mismatch");
        if (in.size() != 1 || in[0] != d->in)
            throw Error("dense: expected input (" + std::to_string(d->in) + "), got " +
                        shape_string(in));
        return {d->out};
    }
    if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
        check_conv_params(*c);
        return conv_out_shape(*c, in);
    }
    if (const auto* p = std::get_if<MaxPool2dLayer>(&layer))
        return pool_out_shape(*p, in);
    if (std::holds_alternative<SoftmaxLayer>(layer)) {
        if (in.size() != 1)
            throw Error("softmax: expected rank-1 input, got " + shape_string(in));
        return in;
    }
    if (std::holds_alternative<FlattenLayer>(layer))
        return {checked_numel(in)};
    return in; // relu / sigmoid keep the shape
}

void Network::validate() const {
    std::vector<int> shape = input_shape;
    checked_numel(shape);
    for (std::size_t i = 0; i < layers.size(); ++i) {
        bool terminal_only = std::holds_alternative<SoftmaxLayer>(layers[i]) ||
                             std::holds_alternative<SigmoidLayer>(layers[i]);
        if (terminal_only && i + 1 != layers.size())
            throw Error(std::string(layer_name(layers[i])) + " must be the terminal layer");
        shape = layer_output_shape(layers[i], shape);
    }
}

std::vector<int> Network::output_shape() const {
    std::vector<int> shape = input_shape;
    for (const Layer& l : layers)
        shape = layer_output_shape(l, shape);
    return shape;
}

int Network::output_size() const { return checked_numel(output_shape()); }

// ---------------------------------------------------------------------------
// Concrete forward pass

namespace {

std::vector<double> dense_apply(const DenseLayer& l, std::span<const double> x,
                                const std::vector<double>* weight_override = nullptr) {
    const std::vector<double>& w = weight_override ? *weight_override : l.weight;
    std::vector<double> y(static_cast<std::size_t>(l.out));
    for (int o = 0; o < l.out; ++o) {
        double s = l.bias[static_cast<std::size_t>(o)];
        const double* row = w.data() + static_cast<std::size_t>(o) * l.in;
        for (int i = 0; i < l.in; ++i)
            s += row[i] * x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(o)] = s;
    }
    return y;
}

// Plain direct convolution; shapes are desk-scale.
std::vector<double> conv_apply(const Conv2dLayer& l, std::span<const double> x,
                               const std::vector<int>& in_shape, bool abs_kernel, bool with_bias) {
    std::vector<int> out_shape = conv_out_shape(l, in_shape);
    int H = in_shape[1], W = in_shape[2];
    int OH = out_shape[1], OW = out_shape[2];
    std::vector<double> y(static_cast<std::size_t>(l.out_c * OH * OW), 0.0);
    for (int oc = 0; oc < l.out_c; ++oc) {
        for (int oy = 0; oy < OH; ++oy) {
            for (int ox = 0; ox < OW; ++ox) {
                double s = with_bias ? l.bias[static_cast<std::size_t>(oc)] : 0.0;
                for (int ic = 0; ic < l.in_c; ++ic) {
                    for (int ky = 0; ky < l.kh; ++ky) {
                        int iy = oy * l.stride + ky - l.pad;
                        if (iy < 0 || iy >= H)
                            continue;
                        for (int kx = 0; kx < l.kw; ++kx) {
                            int ix = ox * l.stride + kx - l.pad;
                            if (ix < 0 || ix >= W)
                                continue;
                            double wv = l.weight[static_cast<std::size_t>(
                                ((oc * l.in_c + ic) * l.kh + ky) * l.kw + kx)];
                            if (abs_kernel)
                                wv = std::abs(wv);
                            s += wv * x[static_cast<std::size_t>((ic * H + iy) * W + ix)];
                        }
                    }
                }
                y[static_cast<std::size_t>((oc * OH + oy) * OW + ox)] = s;
            }
        }
    }
    return y;
}

template <typename Reduce>
std::vector<double> pool_apply(const MaxPool2dLayer& l, std::span<const double> x,
                               const std::vector<int>& in_shape, Reduce reduce) {
    std::vector<int> out_shape = pool_out_shape(l, in_shape);
    int C = in_shape[0], H = in_shape[1], W = in_shape[2];
    int OH = out_shape[1], OW = out_shape[2];
    std::vector<double> y(static_cast<std::size_t>(C * OH * OW));
    for (int c = 0; c < C; ++c)
        for (int oy = 0; oy < OH; ++oy)
            for (int ox = 0; ox < OW; ++ox) {
                double m = -std::numeric_limits<double>::infinity();
                for (int ky = 0; ky < l.kh; ++ky)
                    for (int kx = 0; kx < l.kw; ++kx) {
                        int iy = oy * l.stride + ky;
                        int ix = ox * l.stride + kx;
                        m = reduce(m, x[static_cast<std::size_t>((c * H + iy) * W + ix)]);
                    }
                y[static_cast<std::size_t>((c * OH + oy) * OW + ox)] = m;
            }
    return y;
}

double sigmoid(double x) {
    if (x >= 0)
        return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

std::vector<double> softmax(std::span<const double> logits) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logits)
        m = std::max(m, v);
    double sum = 0;
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - m);
        sum += out[i];
    }
    for (double& v : out)
        v /= sum;
    return out;
}

std::pair<std::vector<double>, std::vector<double>> softmax_bounds(std::span<const double> l,
                                                                   std::span<const double> u) {
    if (l.size() != u.size())
        throw Error("softmax_bounds: size mismatch");
    std::size_t n = l.size();
    std::vector<double> lower(n), upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (l[i] > u[i])
            throw Error("softmax_bounds: lower > upper");
        // Worst case for class i: own logit at l_i, the others at their u_j.
        double m = l[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                m = std::max(m, u[j]);
        double denom = std::exp(l[i] - m);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                denom += std::exp(u[j] - m);
        lower[i] = std::exp(l[i] - m) / denom;

        // Best case: own logit at u_i, the others at their l_j.
        m = u[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                m = std::max(m, l[j]);
        denom = std::exp(u[i] - m);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                denom += std::exp(l[j] - m);
        upper[i] = std::exp(u[i] - m) / denom;
    }
    return {std::move(lower), std::move(upper)};
}

Tensor forward(const Network& net, const Tensor& x) {
    if (x.shape != net.input_shape)
        throw Error("forward: input shape " + shape_string(x.shape) + " does not match network " +
                    shape_string(net.input_shape));
    if (!x.finite())
        throw Error("forward: non-finite input");

    std::vector<int> shape = x.shape;
    std::vector<double> v = x.data;
    for (const Layer& layer : net.layers) {
        std::vector<int> next_shape = layer_output_shape(layer, shape);
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            v = dense_apply(*d, v);
        } else if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
            v = conv_apply(*c, v, shape, false, true);
        } else if (const auto* p = std::get_if<MaxPool2dLayer>(&layer)) {
            v = pool_apply(*p, v, shape, [](double a, double b) { return std::max(a, b); });
        } else if (std::holds_alternative<ReluLayer>(layer)) {
            for (double& t : v)
                t = std::max(0.0, t);
        } else if (std::holds_alternative<SigmoidLayer>(layer)) {
            for (double& t : v)
                t = sigmoid(t);
        } else if (std::holds_alternative<SoftmaxLayer>(layer)) {
            v = softmax(v);
        } // flatten: data unchanged
        shape = std::move(next_shape);
    }
    return Tensor(shape, std::move(v));
}

BoundedTensor forward_ibp(const Network& net, const BoundedTensor& bx) {
    if (bx.lower.shape != net.input_shape)
        throw Error("forward_ibp: input shape " + shape_string(bx.lower.shape) +
                    " does not match network " + shape_string(net.input_shape));

    std::vector<int> shape = bx.lower.shape;
    std::vector<double> lo = bx.lower.data;
    std::vector<double> hi = bx.upper.data;

    for (const Layer& layer : net.layers) {
        std::vector<int> next_shape = layer_output_shape(layer, shape);
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            std::size_t n = lo.size();
            std::vector<double> mu(n), r(n);
            for (std::size_t i = 0; i < n; ++i) {
                mu[i] = 0.5 * (lo[i] + hi[i]);
                r[i] = 0.5 * (hi[i] - lo[i]);
            }
            std::vector<double> abs_w(d->weight.size());
            for (std::size_t i = 0; i < abs_w.size(); ++i)
                abs_w[i] = std::abs(d->weight[i]);
            std::vector<double> y_mu = dense_apply(*d, mu);
            DenseLayer no_bias = *d;
            std::fill(no_bias.bias.begin(), no_bias.bias.end(), 0.0);
            std::vector<double> y_r = dense_apply(no_bias, r, &abs_w);
            lo.resize(y_mu.size());
            hi.resize(y_mu.size());
            for (std::size_t i = 0; i < y_mu.size(); ++i) {
                lo[i] = y_mu[i] - y_r[i];
                hi[i] = y_mu[i] + y_r[i];
            }
        } else if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
            std::size_t n = lo.size();
            std::vector<double> mu(n), r(n);
            for (std::size_t i = 0; i < n; ++i) {
                mu[i] = 0.5 * (lo[i] + hi[i]);
                r[i] = 0.5 * (hi[i] - lo[i]);
            }
            std::vector<double> y_mu = conv_apply(*c, mu, shape, false, true);
            std::vector<double> y_r = conv_apply(*c, r, shape, true, false);
            lo.resize(y_mu.size());
            hi.resize(y_mu.size());
            for (std::size_t i = 0; i < y_mu.size(); ++i) {
                lo[i] = y_mu[i] - y_r[i];
                hi[i] = y_mu[i] + y_r[i];
            }
        } else if (const auto* p = std::get_if<MaxPool2dLayer>(&layer)) {
            auto max2 = [](double a, double b) { return std::max(a, b); };
            lo = pool_apply(*p, lo, shape, max2);
            hi = pool_apply(*p, hi, shape, max2);
        } else if (std::holds_alternative<ReluLayer>(layer)) {
            for (double& t : lo)
                t = std::max(0.0, t);
            for (double& t : hi)
                t = std::max(0.0, t);
        } else if (std::holds_alternative<SigmoidLayer>(layer)) {
            for (double& t : lo)
                t = sigmoid(t);
            for (double& t : hi)
                t = sigmoid(t);
        } else if (std::holds_alternative<SoftmaxLayer>(layer)) {
            auto [l2, u2] = softmax_bounds(lo, hi);
            lo = std::move(l2);
            hi = std::move(u2);
        } // flatten: data unchanged
        shape = std::move(next_shape);
    }
    return BoundedTensor(Tensor(shape, std::move(lo)), Tensor(shape, std::move(hi)));
}

} // namespace nesyv
