#pragma once

#include <cstdint>
#include <span>

#include "nesyv/formula.hpp"

namespace nesyv {

// Enumeration guards: worst-case oracle runs finish in seconds.
inline constexpr int kBruteVarGuard = 24;
inline constexpr int kEmajsatVarGuard = 20;

// Partial truth assignment over variable indices < 64.
struct PartialAssignment {
    std::uint64_t mask = 0;   // bit i set: variable i is assigned
    std::uint64_t values = 0; // its value (only meaningful where mask is set)

    void set(VarId v, bool value) {
        std::uint64_t bit = std::uint64_t{1} << v.index;
        mask |= bit;
        if (value)
            values |= bit;
        else
            values &= ~bit;
    }
};

// Number of completions of `partial` over the remaining of `num_vars`
// variables that satisfy f. Guard: free variables <= 24.
std::uint64_t count_models(const FormulaPtr& f, int num_vars, const PartialAssignment& partial = {});

// Weighted model count by full enumeration: sum over satisfying assignments
// of prod_i (w[i] if true else 1-w[i]). Weights must lie in [0,1].
double wmc_brute(const FormulaPtr& f, std::span<const double> weights);

// E-MAJSAT by enumeration: exists an assignment to xs such that at least
// half of the assignments to ys satisfy f (inclusive threshold).
// xs and ys must partition the pool's variables; |xs|+|ys| <= 20.
bool emajsat_brute(const FormulaPtr& f, int num_vars, std::span<const VarId> xs,
                   std::span<const VarId> ys);

} // namespace nesyv
