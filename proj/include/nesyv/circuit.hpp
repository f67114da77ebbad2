#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nesyv/error.hpp"
#include "nesyv/interval.hpp"

namespace nesyv {

struct CircuitNode {
    enum class Op : std::uint8_t { Leaf, Const, Add, Mul, OneMinus };
    Op op = Op::Const;
    int leaf = -1;                  // Leaf
    double value = 0;               // Const
    std::vector<std::uint32_t> kids; // Add/Mul (arity >= 1), OneMinus (exactly 1)
};

// Arithmetic circuit in topological order (children precede parents).
// Instances can hold invalid data so that validate() can report it;
// evaluators assume a valid circuit.
class Circuit {
public:
    static constexpr int kVertexGuard = 20;

    Circuit() = default;
    Circuit(std::vector<CircuitNode> nodes, std::vector<std::uint32_t> outputs, int leaf_count)
        : nodes_(std::move(nodes)), outputs_(std::move(outputs)), leaf_count_(leaf_count) {}

    const std::vector<CircuitNode>& nodes() const { return nodes_; }
    const std::vector<std::uint32_t>& outputs() const { return outputs_; }
    int leaf_count() const { return leaf_count_; }
    std::size_t num_nodes() const { return nodes_.size(); }

    // Structural diagnostics; empty means every invariant holds.
    std::vector<std::string> validate() const;
    void require_valid() const; // throws Error with joined diagnostics

    // Concrete bottom-up evaluation; one value per declared output.
    std::vector<double> eval(std::span<const double> leaf_values) const;
    // Same pass writing node values into caller-owned scratch (size num_nodes()).
    void eval_into(std::span<const double> leaf_values, std::span<double> node_values) const;

    // Interval bound propagation over the same DAG. Bounds must lie in [0,1];
    // outputs are NOT clamped and may exceed [0,1].
    std::vector<Interval> eval_interval(std::span<const Interval> leaf_bounds) const;

    // Exact per-output min/max over the box, assuming the outputs are
    // multilinear in each leaf: extrema occur at box vertices, so all
    // 2^L vertices over the non-degenerate leaves that feed the outputs
    // are enumerated. Throws when L exceeds `max_enumerated`.
    std::vector<Interval> vertex_bounds(std::span<const Interval> leaf_bounds,
                                        int max_enumerated = kVertexGuard) const;

    // Leaves reachable from any declared output.
    std::vector<bool> used_leaves() const;

private:
    std::vector<CircuitNode> nodes_;
    std::vector<std::uint32_t> outputs_;
    int leaf_count_ = 0;
};

// Hash-consing constructor: structurally identical nodes get one id.
class CircuitBuilder {
public:
    std::uint32_t leaf(int index);
    std::uint32_t constant(double value);
    std::uint32_t add(std::vector<std::uint32_t> kids);
    std::uint32_t mul(std::vector<std::uint32_t> kids);
    std::uint32_t one_minus(std::uint32_t kid);
    Circuit finish(std::vector<std::uint32_t> outputs, int leaf_count);

private:
    std::uint32_t intern(CircuitNode node);

    std::vector<CircuitNode> nodes_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

// Does some weight vector inside the box push the circuit's (single)
// output to at least `threshold`? Max computed exactly via vertex_bounds.
bool e_wmc_decide(const Circuit& c, std::span<const Interval> interval_weights, double threshold);

// Line-oriented text format:
//   ac <num_leaves> <num_nodes> <num_outputs>
//   one node per line: "L <leaf>" | "C <value>" | "+ <k> <ids...>" |
//                      "* <k> <ids...>" | "~ <id>"
//   final line: the output ids
// Floats are serialized round-trip exactly; write(read(s)) == s for files
// produced by write_circuit.
std::string write_circuit(const Circuit& c);
Circuit read_circuit(std::string_view text);

} // namespace nesyv
