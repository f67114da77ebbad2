#include "nesyv/tensor.hpp"

#include <algorithm>

namespace nesyv {

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape == b.shape; }

std::string shape_string(const std::vector<int>& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i)
            out += "x";
        out += std::to_string(shape[i]);
    }
    return out + ")";
}

BoundedTensor::BoundedTensor(Tensor lo, Tensor hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (!same_shape(lower, upper))
        throw Error("bounded tensor: lower/upper shape mismatch");
    for (int i = 0; i < lower.numel(); ++i)
        if (lower.data[static_cast<std::size_t>(i)] > upper.data[static_cast<std::size_t>(i)])
            throw Error("bounded tensor: lower > upper at element " + std::to_string(i));
}

BoundedTensor epsilon_ball(const Tensor& x, double eps, double domain_lo, double domain_hi) {
    if (eps < 0)
        throw std::invalid_argument("epsilon_ball: eps must be >= 0");
    if (domain_lo > domain_hi)
        throw std::invalid_argument("epsilon_ball: domain lo > hi");
    Tensor lo = x, hi = x;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        lo.data[i] = std::max(x.data[i] - eps, domain_lo);
        hi.data[i] = std::min(x.data[i] + eps, domain_hi);
    }
    return BoundedTensor(std::move(lo), std::move(hi));
}

} // namespace nesyv
