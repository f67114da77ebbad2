#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nesyv/error.hpp"

namespace nesyv {

// Row-major, batchless tensor of rank <= 4.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;

    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        data.assign(static_cast<std::size_t>(numel_of(shape)), 0.0);
    }

    Tensor(std::vector<int> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
        if (static_cast<int>(data.size()) != numel_of(shape))
            throw Error("tensor: data length does not match shape");
    }

    static int numel_of(const std::vector<int>& s) {
        if (s.empty() || s.size() > 4)
            throw Error("tensor: rank must be 1..4");
        int n = 1;
        for (int d : s) {
            if (d <= 0)
                throw Error("tensor: dimensions must be positive");
            n *= d;
        }
        return n;
    }

    int numel() const { return static_cast<int>(data.size()); }

    bool finite() const {
        for (double v : data)
            if (!std::isfinite(v))
                return false;
        return true;
    }
};

bool same_shape(const Tensor& a, const Tensor& b);
std::string shape_string(const std::vector<int>& shape);

// Element-wise lower/upper box around a tensor value.
struct BoundedTensor {
    Tensor lower;
    Tensor upper;

    BoundedTensor() = default;
    BoundedTensor(Tensor lo, Tensor hi);

    static BoundedTensor point(const Tensor& x) { return BoundedTensor(x, x); }
};

// Element-wise [max(x-eps, lo), min(x+eps, hi)]: the l-inf ball clamped
// to the valid input domain.
BoundedTensor epsilon_ball(const Tensor& x, double eps, double domain_lo, double domain_hi);

} // namespace nesyv
