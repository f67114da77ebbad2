#include "nesyv/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "nesyv/text.hpp"

namespace nesyv {

std::vector<std::string> Circuit::validate() const {
    std::vector<std::string> diags;
    if (leaf_count_ < 0)
        diags.push_back("negative leaf count");
    if (outputs_.empty())
        diags.push_back("circuit declares no outputs");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const CircuitNode& n = nodes_[i];
        std::string at = "node " + std::to_string(i);
        switch (n.op) {
        case CircuitNode::Op::Leaf:
            if (n.leaf < 0 || n.leaf >= leaf_count_)
                diags.push_back(at + ": leaf out of range");
            break;
        case CircuitNode::Op::Const:
            if (!std::isfinite(n.value))
                diags.push_back(at + ": non-finite constant");
            break;
        case CircuitNode::Op::Add:
        case CircuitNode::Op::Mul:
            if (n.kids.empty())
                diags.push_back(at + ": add/mul arity must be >= 1");
            break;
        case CircuitNode::Op::OneMinus:
            if (n.kids.size() != 1)
                diags.push_back(at + ": one-minus arity must be 1");
            break;
        }
        for (std::uint32_t k : n.kids)
            if (k >= i)
                diags.push_back("topology violation at " + at);
    }
    for (std::uint32_t o : outputs_)
        if (o >= nodes_.size())
            diags.push_back("output id " + std::to_string(o) + " out of range");
    return diags;
}

void Circuit::require_valid() const {
    std::vector<std::string> diags = validate();
    if (diags.empty())
        return;
    std::string msg = "invalid circuit:";
    for (const auto& d : diags)
        msg += "\n  " + d;
    throw Error(msg);
}

void Circuit::eval_into(std::span<const double> leaf_values, std::span<double> node_values) const {
    if (static_cast<int>(leaf_values.size()) != leaf_count_)
        throw std::invalid_argument("eval: expected " + std::to_string(leaf_count_) + " leaf values");
    if (node_values.size() != nodes_.size())
        throw std::invalid_argument("eval: scratch buffer size mismatch");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const CircuitNode& n = nodes_[i];
        switch (n.op) {
        case CircuitNode::Op::Leaf:
            node_values[i] = leaf_values[static_cast<std::size_t>(n.leaf)];
            break;
        case CircuitNode::Op::Const:
            node_values[i] = n.value;
            break;
        case CircuitNode::Op::Add: {
            double s = 0;
            for (std::uint32_t k : n.kids)
                s += node_values[k];
            node_values[i] = s;
            break;
        }
        case CircuitNode::Op::Mul: {
            double p = 1;
            for (std::uint32_t k : n.kids)
                p *= node_values[k];
            node_values[i] = p;
            break;
        }
        case CircuitNode::Op::OneMinus:
            node_values[i] = 1.0 - node_values[n.kids[0]];
            break;
        }
    }
}

std::vector<double> Circuit::eval(std::span<const double> leaf_values) const {
    std::vector<double> vals(nodes_.size());
    eval_into(leaf_values, vals);
    std::vector<double> out;
    out.reserve(outputs_.size());
    for (std::uint32_t o : outputs_)
        out.push_back(vals[o]);
    return out;
}

namespace {
void check_unit_box(std::span<const Interval> bounds, int leaf_count) {
    if (static_cast<int>(bounds.size()) != leaf_count)
        throw std::invalid_argument("expected " + std::to_string(leaf_count) + " leaf bounds");
    for (const Interval& b : bounds)
        if (b.lo() < 0.0 || b.hi() > 1.0)
            throw std::invalid_argument("leaf bounds must lie within [0,1]");
}
} // namespace

std::vector<Interval> Circuit::eval_interval(std::span<const Interval> leaf_bounds) const {
    check_unit_box(leaf_bounds, leaf_count_);
    std::vector<Interval> vals(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const CircuitNode& n = nodes_[i];
        switch (n.op) {
        case CircuitNode::Op::Leaf:
            vals[i] = leaf_bounds[static_cast<std::size_t>(n.leaf)];
            break;
        case CircuitNode::Op::Const:
            vals[i] = Interval::point(n.value);
            break;
        case CircuitNode::Op::Add: {
            Interval s = vals[n.kids[0]];
            for (std::size_t k = 1; k < n.kids.size(); ++k)
                s = s + vals[n.kids[k]];
            vals[i] = s;
            break;
        }
        case CircuitNode::Op::Mul: {
            Interval p = vals[n.kids[0]];
            for (std::size_t k = 1; k < n.kids.size(); ++k)
                p = p * vals[n.kids[k]];
            vals[i] = p;
            break;
        }
        case CircuitNode::Op::OneMinus:
            vals[i] = one_minus(vals[n.kids[0]]);
            break;
        }
    }
    std::vector<Interval> out;
    out.reserve(outputs_.size());
    for (std::uint32_t o : outputs_)
        out.push_back(vals[o]);
    return out;
}

std::vector<bool> Circuit::used_leaves() const {
    std::vector<bool> reach(nodes_.size(), false);
    for (std::uint32_t o : outputs_)
        if (o < nodes_.size())
            reach[o] = true;
    std::vector<bool> used(static_cast<std::size_t>(std::max(leaf_count_, 0)), false);
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        if (!reach[i])
            continue;
        const CircuitNode& n = nodes_[i];
        if (n.op == CircuitNode::Op::Leaf && n.leaf >= 0 && n.leaf < leaf_count_)
            used[static_cast<std::size_t>(n.leaf)] = true;
        for (std::uint32_t k : n.kids)
            reach[k] = true;
    }
    return used;
}

std::vector<Interval> Circuit::vertex_bounds(std::span<const Interval> leaf_bounds,
                                             int max_enumerated) const {
    check_unit_box(leaf_bounds, leaf_count_);

    std::vector<bool> used = used_leaves();
    std::vector<int> free;
    for (int i = 0; i < leaf_count_; ++i)
        if (used[static_cast<std::size_t>(i)] && !leaf_bounds[static_cast<std::size_t>(i)].degenerate())
            free.push_back(i);
    if (static_cast<int>(free.size()) > max_enumerated)
        throw Error("vertex enumeration guard exceeded: " + std::to_string(free.size()) +
                    " non-degenerate leaves > " + std::to_string(max_enumerated));

    std::vector<double> leaves(static_cast<std::size_t>(leaf_count_));
    for (int i = 0; i < leaf_count_; ++i)
        leaves[static_cast<std::size_t>(i)] = leaf_bounds[static_cast<std::size_t>(i)].lo();

    std::vector<double> scratch(nodes_.size());
    std::vector<double> lo(outputs_.size()), hi(outputs_.size());
    std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t v = 0; v < total; ++v) {
        for (std::size_t k = 0; k < free.size(); ++k) {
            const Interval& b = leaf_bounds[static_cast<std::size_t>(free[k])];
            leaves[static_cast<std::size_t>(free[k])] = ((v >> k) & 1) ? b.hi() : b.lo();
        }
        eval_into(leaves, scratch);
        for (std::size_t j = 0; j < outputs_.size(); ++j) {
            double y = scratch[outputs_[j]];
            if (v == 0) {
                lo[j] = hi[j] = y;
            } else {
                lo[j] = std::min(lo[j], y);
                hi[j] = std::max(hi[j], y);
            }
        }
    }

    std::vector<Interval> out;
    out.reserve(outputs_.size());
    for (std::size_t j = 0; j < outputs_.size(); ++j)
        out.emplace_back(lo[j], hi[j]);
    return out;
}

// ---------------------------------------------------------------------------
// Builder

std::uint32_t CircuitBuilder::intern(CircuitNode node) {
    std::string key;
    key.push_back(static_cast<char>('0' + static_cast<int>(node.op)));
    switch (node.op) {
    case CircuitNode::Op::Leaf:
        key += std::to_string(node.leaf);
        break;
    case CircuitNode::Op::Const: {
        std::uint64_t bits;
        std::memcpy(&bits, &node.value, sizeof(bits));
        key += std::to_string(bits);
        break;
    }
    default:
        for (std::uint32_t k : node.kids) {
            key += std::to_string(k);
            key.push_back(',');
        }
    }
    auto it = index_.find(key);
    if (it != index_.end())
        return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(std::move(node));
    index_.emplace(std::move(key), id);
    return id;
}

std::uint32_t CircuitBuilder::leaf(int index) {
    if (index < 0)
        throw std::invalid_argument("leaf index must be non-negative");
    CircuitNode n;
    n.op = CircuitNode::Op::Leaf;
    n.leaf = index;
    return intern(std::move(n));
}

std::uint32_t CircuitBuilder::constant(double value) {
    if (!std::isfinite(value))
        throw std::invalid_argument("circuit constant must be finite");
    CircuitNode n;
    n.op = CircuitNode::Op::Const;
    n.value = value;
    return intern(std::move(n));
}

std::uint32_t CircuitBuilder::add(std::vector<std::uint32_t> kids) {
    if (kids.empty())
        throw std::invalid_argument("add requires at least one child");
    if (kids.size() == 1)
        return kids[0];
    CircuitNode n;
    n.op = CircuitNode::Op::Add;
    n.kids = std::move(kids);
    return intern(std::move(n));
}

std::uint32_t CircuitBuilder::mul(std::vector<std::uint32_t> kids) {
    if (kids.empty())
        throw std::invalid_argument("mul requires at least one child");
    if (kids.size() == 1)
        return kids[0];
    CircuitNode n;
    n.op = CircuitNode::Op::Mul;
    n.kids = std::move(kids);
    return intern(std::move(n));
}

std::uint32_t CircuitBuilder::one_minus(std::uint32_t kid) {
    CircuitNode n;
    n.op = CircuitNode::Op::OneMinus;
    n.kids = {kid};
    return intern(std::move(n));
}

Circuit CircuitBuilder::finish(std::vector<std::uint32_t> outputs, int leaf_count) {
    Circuit c(nodes_, std::move(outputs), leaf_count);
    c.require_valid();
    return c;
}

// ---------------------------------------------------------------------------
// E-WMC decision

bool e_wmc_decide(const Circuit& c, std::span<const Interval> interval_weights, double threshold) {
    if (c.outputs().size() != 1)
        throw std::invalid_argument("e_wmc_decide expects a single-output circuit");
    std::vector<Interval> box = c.vertex_bounds(interval_weights);
    return box[0].hi() >= threshold; // inclusive, matching E-MAJSAT's >=
}

// ---------------------------------------------------------------------------
// Text format

std::string write_circuit(const Circuit& c) {
    std::string out = "ac " + std::to_string(c.leaf_count()) + " " + std::to_string(c.num_nodes()) +
                      " " + std::to_string(c.outputs().size()) + "\n";
    for (const CircuitNode& n : c.nodes()) {
        switch (n.op) {
        case CircuitNode::Op::Leaf:
            out += "L " + std::to_string(n.leaf);
            break;
        case CircuitNode::Op::Const:
            out += "C " + format_double(n.value);
            break;
        case CircuitNode::Op::Add:
        case CircuitNode::Op::Mul:
            out += n.op == CircuitNode::Op::Add ? "+ " : "* ";
            out += std::to_string(n.kids.size());
            for (std::uint32_t k : n.kids)
                out += " " + std::to_string(k);
            break;
        case CircuitNode::Op::OneMinus:
            out += "~ " + std::to_string(n.kids[0]);
            break;
        }
        out += "\n";
    }
    bool first = true;
    for (std::uint32_t o : c.outputs()) {
        if (!first)
            out += " ";
        first = false;
        out += std::to_string(o);
    }
    out += "\n";
    return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        lines.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return lines;
}

} // namespace

Circuit read_circuit(std::string_view text) {
    std::vector<std::string_view> lines = split_lines(text);
    std::size_t li = 0;
    auto next_line = [&]() -> std::string_view {
        while (li < lines.size()) {
            std::string_view l = lines[li++];
            if (l.find_first_not_of(" \t\r") != std::string_view::npos)
                return l;
        }
        throw ParseError("circuit: unexpected end of file at line " + std::to_string(li));
    };

    Tokenizer header(next_line(), "circuit header");
    header.expect("ac");
    std::int64_t leaves = header.next_int("leaf count");
    std::int64_t num_nodes = header.next_int("node count");
    std::int64_t num_outputs = header.next_int("output count");
    if (leaves < 0 || num_nodes < 0 || num_outputs <= 0)
        throw ParseError("circuit: bad header counts");

    std::vector<CircuitNode> nodes;
    nodes.reserve(static_cast<std::size_t>(num_nodes));
    for (std::int64_t i = 0; i < num_nodes; ++i) {
        Tokenizer tok(next_line(), "circuit node " + std::to_string(i));
        std::string_view tag = tok.next("node tag");
        CircuitNode n;
        if (tag == "L") {
            n.op = CircuitNode::Op::Leaf;
            n.leaf = static_cast<int>(tok.next_int("leaf index"));
        } else if (tag == "C") {
            n.op = CircuitNode::Op::Const;
            n.value = tok.next_double("constant");
        } else if (tag == "+" || tag == "*") {
            n.op = tag == "+" ? CircuitNode::Op::Add : CircuitNode::Op::Mul;
            std::int64_t k = tok.next_int("arity");
            if (k <= 0)
                throw ParseError("circuit node " + std::to_string(i) + ": bad arity");
            for (std::int64_t j = 0; j < k; ++j)
                n.kids.push_back(static_cast<std::uint32_t>(tok.next_int("child id")));
        } else if (tag == "~") {
            n.op = CircuitNode::Op::OneMinus;
            n.kids.push_back(static_cast<std::uint32_t>(tok.next_int("child id")));
        } else {
            throw ParseError("circuit node " + std::to_string(i) + ": unknown tag '" +
                             std::string(tag) + "'");
        }
        if (!tok.done())
            throw ParseError("circuit node " + std::to_string(i) + ": trailing tokens");
        nodes.push_back(std::move(n));
    }

    Tokenizer tok(next_line(), "circuit outputs");
    std::vector<std::uint32_t> outputs;
    for (std::int64_t j = 0; j < num_outputs; ++j)
        outputs.push_back(static_cast<std::uint32_t>(tok.next_int("output id")));
    if (!tok.done())
        throw ParseError("circuit outputs: trailing tokens");

    Circuit c(std::move(nodes), std::move(outputs), static_cast<int>(leaves));
    c.require_valid();
    return c;
}

} // namespace nesyv
