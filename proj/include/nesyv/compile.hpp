#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nesyv/circuit.hpp"
#include "nesyv/formula.hpp"

namespace nesyv {

// Decision-DNNF node store with structural hashing. Node 0 is False,
// node 1 is True. Invariants maintained by construction:
//   - decomposability: children of And mention disjoint variable sets
//   - determinism: a Decision node's branches condition on complementary
//     literals of its decision variable (the literal weights are implicit)
class DnnfManager {
public:
    static constexpr std::uint32_t kFalse = 0;
    static constexpr std::uint32_t kTrue = 1;
    static constexpr int kCompileVarGuard = 30;

    enum class Kind : std::uint8_t { False, True, Literal, Decision, And };

    struct Node {
        Kind kind = Kind::False;
        bool positive = true;            // Literal
        int var = -1;                    // Literal / Decision
        std::uint32_t hi = 0, lo = 0;    // Decision branches (var true / var false)
        std::vector<std::uint32_t> kids; // And
        std::uint64_t mask = 0;          // variables mentioned beneath this node
    };

    DnnfManager();

    std::uint32_t literal(VarId v, bool positive);
    std::uint32_t decision(VarId v, std::uint32_t hi, std::uint32_t lo);
    std::uint32_t conj(std::vector<std::uint32_t> kids);

    // Shannon-expansion compilation along `order` (a permutation of f's
    // variables; extra pool variables may be present and are ignored).
    // The result has exactly f's models, with unit propagation and a
    // sub-formula cache applied before each expansion.
    std::uint32_t compile(const FormulaPtr& f, std::span<const VarId> order);

    // Multiplies don't-care gadgets (v + !v) into decision branches until
    // both branches of every Decision mention the same variable set.
    // Already-smooth inputs come back unchanged (same node id).
    std::uint32_t smooth(std::uint32_t root);
    bool is_smooth(std::uint32_t root) const;

    // Model count over `num_vars` variables (unmentioned variables are free).
    std::uint64_t count_models(std::uint32_t root, int num_vars);

    const Node& node(std::uint32_t id) const { return nodes_[id]; }
    std::uint64_t var_mask(std::uint32_t id) const { return nodes_[id].mask; }
    std::size_t num_nodes() const { return nodes_.size(); }

private:
    std::uint32_t intern(Node n, const std::string& key);
    std::uint32_t compile_rec(const FormulaPtr& f);
    std::uint32_t smooth_rec(std::uint32_t id, std::unordered_map<std::uint32_t, std::uint32_t>& memo);
    std::uint32_t pad_missing(std::uint32_t id, std::uint64_t missing);

    std::vector<Node> nodes_;
    std::unordered_map<std::string, std::uint32_t> unique_;
    std::unordered_map<std::string, std::uint32_t> compile_cache_;
    std::vector<int> order_pos_; // current compile order, by variable index
};

// NAT-semiring translation of a smooth d-DNNF: And -> mul, Decision ->
// add of (literal weight x branch), negative literal -> 1 - leaf.
// Evaluating the result at a weight vector computes the WMC.
Circuit to_arith_circuit(const DnnfManager& m, std::uint32_t root, int num_leaves);

// First-appearance variable order (the default compile order).
std::vector<VarId> first_appearance_order(const FormulaPtr& f);

// Convenience: compile + smooth + translate over a pool of `num_vars` leaves.
Circuit compile_to_circuit(const FormulaPtr& f, int num_vars);

// Probability-of-sum circuit for `num_digits` categorical variables with
// `num_classes` classes each. Leaf d*num_classes+c holds P(digit d = c);
// output s computes P(sum of digits = s) by convolution, s in
// [0, num_digits*(num_classes-1)].
Circuit build_sum_circuit(int num_digits, int num_classes);

} // namespace nesyv
