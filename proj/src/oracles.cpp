#include "nesyv/oracles.hpp"

#include <bit>
#include <stdexcept>
#include <vector>

namespace nesyv {

namespace {

std::vector<int> free_indices(int num_vars, std::uint64_t assigned) {
    std::vector<int> free;
    for (int i = 0; i < num_vars; ++i)
        if (!((assigned >> i) & 1))
            free.push_back(i);
    return free;
}

} // namespace

std::uint64_t count_models(const FormulaPtr& f, int num_vars, const PartialAssignment& partial) {
    if (num_vars < 0 || num_vars > 63)
        throw std::invalid_argument("count_models: variable count out of range");
    if (partial.values & ~partial.mask)
        throw std::invalid_argument("count_models: values set outside assignment mask");
    if (num_vars < 64 && (partial.mask >> num_vars) != 0)
        throw std::invalid_argument("count_models: assignment references unknown variable");

    std::vector<int> free = free_indices(num_vars, partial.mask);
    if (static_cast<int>(free.size()) > kBruteVarGuard)
        throw std::invalid_argument("count_models: more than 24 free variables");

    std::uint64_t count = 0;
    std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t j = 0; j < total; ++j) {
        std::uint64_t bits = partial.values;
        for (std::size_t k = 0; k < free.size(); ++k)
            if ((j >> k) & 1)
                bits |= std::uint64_t{1} << free[k];
        if (eval_formula(f, bits))
            ++count;
    }
    return count;
}

double wmc_brute(const FormulaPtr& f, std::span<const double> weights) {
    int n = static_cast<int>(weights.size());
    if (n > kBruteVarGuard)
        throw std::invalid_argument("wmc_brute: more than 24 variables");
    for (double w : weights)
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("wmc_brute: weight outside [0,1]");

    double sum = 0.0;
    std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        if (!eval_formula(f, bits))
            continue;
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            p *= ((bits >> i) & 1) ? weights[i] : 1.0 - weights[i];
        sum += p;
    }
    return sum;
}

bool emajsat_brute(const FormulaPtr& f, int num_vars, std::span<const VarId> xs,
                   std::span<const VarId> ys) {
    if (num_vars < 0 || num_vars > kEmajsatVarGuard)
        throw std::invalid_argument("emajsat_brute: more than 20 variables");
    std::uint64_t x_mask = 0, y_mask = 0;
    for (VarId v : xs) {
        if (v.index < 0 || v.index >= num_vars)
            throw std::invalid_argument("emajsat_brute: x variable out of range");
        x_mask |= std::uint64_t{1} << v.index;
    }
    for (VarId v : ys) {
        if (v.index < 0 || v.index >= num_vars)
            throw std::invalid_argument("emajsat_brute: y variable out of range");
        y_mask |= std::uint64_t{1} << v.index;
    }
    if (std::popcount(x_mask) != static_cast<int>(xs.size()) ||
        std::popcount(y_mask) != static_cast<int>(ys.size()) || (x_mask & y_mask) != 0 ||
        (x_mask | y_mask) != (num_vars == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_vars) - 1))
        throw std::invalid_argument("emajsat_brute: xs and ys must partition the variables");

    int m = static_cast<int>(ys.size());
    std::uint64_t majority = std::uint64_t{1} << m; // compare 2*count >= 2^m
    std::uint64_t x_total = std::uint64_t{1} << xs.size();
    for (std::uint64_t xa = 0; xa < x_total; ++xa) {
        PartialAssignment partial;
        for (std::size_t k = 0; k < xs.size(); ++k)
            partial.set(xs[k], (xa >> k) & 1);
        std::uint64_t cnt = count_models(f, num_vars, partial);
        if (2 * cnt >= majority)
            return true;
    }
    return false;
}

} // namespace nesyv
