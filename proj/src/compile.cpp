#include "nesyv/compile.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace nesyv {

DnnfManager::DnnfManager() {
    Node f;
    f.kind = Kind::False;
    nodes_.push_back(f);
    Node t;
    t.kind = Kind::True;
    nodes_.push_back(t);
}

std::uint32_t DnnfManager::intern(Node n, const std::string& key) {
    auto it = unique_.find(key);
    if (it != unique_.end())
        return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(std::move(n));
    unique_.emplace(key, id);
    return id;
}

std::uint32_t DnnfManager::literal(VarId v, bool positive) {
    if (v.index < 0 || v.index >= 64)
        throw std::invalid_argument("literal: variable index out of range");
    Node n;
    n.kind = Kind::Literal;
    n.var = v.index;
    n.positive = positive;
    n.mask = std::uint64_t{1} << v.index;
    return intern(std::move(n), (positive ? "l" : "n") + std::to_string(v.index));
}

std::uint32_t DnnfManager::decision(VarId v, std::uint32_t hi, std::uint32_t lo) {
    if (v.index < 0 || v.index >= 64)
        throw std::invalid_argument("decision: variable index out of range");
    std::uint64_t bit = std::uint64_t{1} << v.index;
    if ((nodes_[hi].mask | nodes_[lo].mask) & bit)
        throw std::invalid_argument("decision: branch mentions the decision variable");
    Node n;
    n.kind = Kind::Decision;
    n.var = v.index;
    n.hi = hi;
    n.lo = lo;
    n.mask = bit | nodes_[hi].mask | nodes_[lo].mask;
    return intern(std::move(n),
                  "d" + std::to_string(v.index) + "," + std::to_string(hi) + "," + std::to_string(lo));
}

std::uint32_t DnnfManager::conj(std::vector<std::uint32_t> kids) {
    std::vector<std::uint32_t> flat;
    for (std::uint32_t k : kids) {
        if (k == kFalse)
            return kFalse;
        if (k == kTrue)
            continue;
        if (nodes_[k].kind == Kind::And)
            flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
        else
            flat.push_back(k);
    }
    if (flat.empty())
        return kTrue;
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.size() == 1)
        return flat[0];

    std::uint64_t mask = 0;
    std::string key = "&";
    for (std::uint32_t k : flat) {
        if (mask & nodes_[k].mask)
            throw std::invalid_argument("conj: children must mention disjoint variables");
        mask |= nodes_[k].mask;
        key += std::to_string(k);
        key.push_back(',');
    }
    Node n;
    n.kind = Kind::And;
    n.kids = std::move(flat);
    n.mask = mask;
    return intern(std::move(n), key);
}

std::uint32_t DnnfManager::compile(const FormulaPtr& f, std::span<const VarId> order) {
    std::uint64_t fvars = formula_vars(f);
    if (std::popcount(fvars) > kCompileVarGuard)
        throw std::invalid_argument("compile: more than 30 variables");

    std::uint64_t seen = 0;
    int max_index = -1;
    for (VarId v : order) {
        if (v.index < 0 || v.index >= 64)
            throw std::invalid_argument("compile: order contains an invalid variable");
        std::uint64_t bit = std::uint64_t{1} << v.index;
        if (seen & bit)
            throw std::invalid_argument("compile: order is not a permutation (duplicate variable)");
        seen |= bit;
        max_index = std::max(max_index, v.index);
    }
    if (fvars & ~seen)
        throw std::invalid_argument("compile: order is not a permutation (missing variable)");

    order_pos_.assign(static_cast<std::size_t>(max_index) + 1, -1);
    int pos = 0;
    for (VarId v : order)
        order_pos_[static_cast<std::size_t>(v.index)] = pos++;

    compile_cache_.clear();
    return compile_rec(f);
}

std::uint32_t DnnfManager::compile_rec(const FormulaPtr& f) {
    if (f->kind() == Formula::Kind::ConstTrue)
        return kTrue;
    if (f->kind() == Formula::Kind::ConstFalse)
        return kFalse;
    if (f->kind() == Formula::Kind::Var)
        return literal(f->var(), true);
    if (f->kind() == Formula::Kind::Not && f->child(0)->kind() == Formula::Kind::Var)
        return literal(f->child(0)->var(), false);

    std::string key = formula_key(f);
    auto hit = compile_cache_.find(key);
    if (hit != compile_cache_.end())
        return hit->second;

    std::uint32_t result;

    // Unit propagation: literals at the top of a conjunction are forced.
    std::uint64_t forced_mask = 0, forced_values = 0;
    bool contradiction = false;
    if (f->kind() == Formula::Kind::And) {
        for (const auto& k : f->children()) {
            int var = -1;
            bool value = true;
            if (k->kind() == Formula::Kind::Var) {
                var = k->var().index;
            } else if (k->kind() == Formula::Kind::Not && k->child(0)->kind() == Formula::Kind::Var) {
                var = k->child(0)->var().index;
                value = false;
            }
            if (var < 0)
                continue;
            std::uint64_t bit = std::uint64_t{1} << var;
            if ((forced_mask & bit) && ((forced_values & bit) != 0) != value) {
                contradiction = true;
                break;
            }
            forced_mask |= bit;
            if (value)
                forced_values |= bit;
        }
    }

    if (contradiction) {
        result = kFalse;
    } else if (forced_mask != 0) {
        std::uint32_t rest = compile_rec(condition(f, forced_mask, forced_values));
        std::vector<std::uint32_t> kids{rest};
        for (int i = 0; i < 64; ++i)
            if ((forced_mask >> i) & 1)
                kids.push_back(literal(VarId{i}, (forced_values >> i) & 1));
        result = conj(std::move(kids));
    } else {
        // Branch on the earliest remaining variable in the compile order.
        std::uint64_t fvars = formula_vars(f);
        int branch_var = -1, best_pos = -1;
        for (int i = 0; i < 64; ++i) {
            if (!((fvars >> i) & 1))
                continue;
            int p = order_pos_[static_cast<std::size_t>(i)];
            if (branch_var < 0 || p < best_pos) {
                branch_var = i;
                best_pos = p;
            }
        }
        std::uint64_t bit = std::uint64_t{1} << branch_var;
        std::uint32_t hi = compile_rec(condition(f, bit, bit));
        std::uint32_t lo = compile_rec(condition(f, bit, 0));
        if (hi == lo) {
            result = hi; // branches agree: the variable is irrelevant here
        } else if (hi == kFalse) {
            result = conj({literal(VarId{branch_var}, false), lo});
        } else if (lo == kFalse) {
            result = conj({literal(VarId{branch_var}, true), hi});
        } else {
            result = decision(VarId{branch_var}, hi, lo);
        }
    }

    compile_cache_.emplace(std::move(key), result);
    return result;
}

std::uint32_t DnnfManager::pad_missing(std::uint32_t id, std::uint64_t missing) {
    if (missing == 0)
        return id;
    std::vector<std::uint32_t> kids;
    if (id != kTrue)
        kids.push_back(id);
    for (int i = 0; i < 64; ++i)
        if ((missing >> i) & 1)
            kids.push_back(decision(VarId{i}, kTrue, kTrue)); // v + !v gadget
    return conj(std::move(kids));
}

std::uint32_t DnnfManager::smooth_rec(std::uint32_t id,
                                      std::unordered_map<std::uint32_t, std::uint32_t>& memo) {
    const Node& n = nodes_[id];
    if (n.kind == Kind::False || n.kind == Kind::True || n.kind == Kind::Literal)
        return id;
    auto it = memo.find(id);
    if (it != memo.end())
        return it->second;

    std::uint32_t result;
    if (n.kind == Kind::And) {
        std::vector<std::uint32_t> kids;
        kids.reserve(n.kids.size());
        for (std::uint32_t k : n.kids)
            kids.push_back(smooth_rec(k, memo));
        result = conj(std::move(kids));
    } else {
        std::uint32_t hi = smooth_rec(nodes_[id].hi, memo);
        std::uint32_t lo = smooth_rec(nodes_[id].lo, memo);
        std::uint64_t mh = nodes_[hi].mask, ml = nodes_[lo].mask;
        std::uint32_t hi2 = pad_missing(hi, ml & ~mh);
        std::uint32_t lo2 = pad_missing(lo, mh & ~ml);
        result = decision(VarId{nodes_[id].var}, hi2, lo2);
    }
    memo.emplace(id, result);
    return result;
}

std::uint32_t DnnfManager::smooth(std::uint32_t root) {
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    return smooth_rec(root, memo);
}

bool DnnfManager::is_smooth(std::uint32_t root) const {
    std::vector<std::uint32_t> stack{root};
    std::vector<bool> seen(nodes_.size(), false);
    while (!stack.empty()) {
        std::uint32_t id = stack.back();
        stack.pop_back();
        if (seen[id])
            continue;
        seen[id] = true;
        const Node& n = nodes_[id];
        if (n.kind == Kind::Decision) {
            if (nodes_[n.hi].mask != nodes_[n.lo].mask)
                return false;
            stack.push_back(n.hi);
            stack.push_back(n.lo);
        } else if (n.kind == Kind::And) {
            for (std::uint32_t k : n.kids)
                stack.push_back(k);
        }
    }
    return true;
}

std::uint64_t DnnfManager::count_models(std::uint32_t root, int num_vars) {
    if (num_vars < 0 || num_vars > 63)
        throw std::invalid_argument("count_models: variable count out of range");
    std::uint32_t s = smooth(root);
    if (num_vars < 64 && (nodes_[s].mask >> num_vars) != 0)
        throw std::invalid_argument("count_models: node mentions variables beyond num_vars");

    std::unordered_map<std::uint32_t, std::uint64_t> memo;
    // Post-order accumulation over the smooth DAG.
    std::vector<std::pair<std::uint32_t, bool>> stack{{s, false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        if (memo.count(id))
            continue;
        const Node& n = nodes_[id];
        if (n.kind == Kind::False) {
            memo[id] = 0;
            continue;
        }
        if (n.kind == Kind::True || n.kind == Kind::Literal) {
            memo[id] = 1;
            continue;
        }
        if (!expanded) {
            stack.push_back({id, true});
            if (n.kind == Kind::And)
                for (std::uint32_t k : n.kids)
                    stack.push_back({k, false});
            else {
                stack.push_back({n.hi, false});
                stack.push_back({n.lo, false});
            }
            continue;
        }
        if (n.kind == Kind::And) {
            std::uint64_t p = 1;
            for (std::uint32_t k : n.kids)
                p *= memo[k];
            memo[id] = p;
        } else {
            memo[id] = memo[n.hi] + memo[n.lo];
        }
    }
    int unmentioned = num_vars - std::popcount(nodes_[s].mask);
    return memo[s] << unmentioned;
}

Circuit to_arith_circuit(const DnnfManager& m, std::uint32_t root, int num_leaves) {
    if (!m.is_smooth(root))
        throw Error("to_arith_circuit: input d-DNNF is not smooth");
    if (num_leaves < 64 && (m.var_mask(root) >> num_leaves) != 0)
        throw std::invalid_argument("to_arith_circuit: node mentions variables beyond leaf count");

    CircuitBuilder b;
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    // Recursive translation; DAGs are shallow at the supported scales.
    auto conv = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
        auto it = memo.find(id);
        if (it != memo.end())
            return it->second;
        const DnnfManager::Node& n = m.node(id);
        std::uint32_t out;
        switch (n.kind) {
        case DnnfManager::Kind::False:
            out = b.constant(0.0);
            break;
        case DnnfManager::Kind::True:
            out = b.constant(1.0);
            break;
        case DnnfManager::Kind::Literal:
            out = n.positive ? b.leaf(n.var) : b.one_minus(b.leaf(n.var));
            break;
        case DnnfManager::Kind::And: {
            std::vector<std::uint32_t> kids;
            kids.reserve(n.kids.size());
            for (std::uint32_t k : n.kids)
                kids.push_back(self(self, k));
            out = b.mul(std::move(kids));
            break;
        }
        case DnnfManager::Kind::Decision: {
            std::uint32_t hi = self(self, n.hi);
            std::uint32_t lo = self(self, n.lo);
            std::uint32_t pos = b.mul({b.leaf(n.var), hi});
            std::uint32_t neg = b.mul({b.one_minus(b.leaf(n.var)), lo});
            out = b.add({pos, neg});
            break;
        }
        default:
            throw Error("to_arith_circuit: corrupt node");
        }
        memo.emplace(id, out);
        return out;
    };
    std::uint32_t out = conv(conv, root);
    return b.finish({out}, num_leaves);
}

std::vector<VarId> first_appearance_order(const FormulaPtr& f) {
    std::vector<VarId> order;
    std::uint64_t seen = 0;
    auto walk = [&](auto&& self, const FormulaPtr& g) -> void {
        if (g->kind() == Formula::Kind::Var) {
            std::uint64_t bit = std::uint64_t{1} << g->var().index;
            if (!(seen & bit)) {
                seen |= bit;
                order.push_back(g->var());
            }
            return;
        }
        for (const auto& k : g->children())
            self(self, k);
    };
    walk(walk, f);
    return order;
}

Circuit compile_to_circuit(const FormulaPtr& f, int num_vars) {
    DnnfManager m;
    std::vector<VarId> order = first_appearance_order(f);
    std::uint32_t root = m.compile(f, order);
    return to_arith_circuit(m, m.smooth(root), num_vars);
}

Circuit build_sum_circuit(int num_digits, int num_classes) {
    if (num_digits < 1)
        throw std::invalid_argument("build_sum_circuit: need at least 1 digit");
    if (num_classes < 2)
        throw std::invalid_argument("build_sum_circuit: need at least 2 classes");
    if (num_digits * num_classes > 80)
        throw std::invalid_argument("build_sum_circuit: size guard exceeded (digits*classes > 80)");

    CircuitBuilder b;
    // P_1(s) = leaf[0][s]; P_k(s) = sum_c leaf[k-1][c] * P_{k-1}(s-c).
    std::vector<std::uint32_t> prev(static_cast<std::size_t>(num_classes));
    for (int c = 0; c < num_classes; ++c)
        prev[static_cast<std::size_t>(c)] = b.leaf(c);
    for (int k = 2; k <= num_digits; ++k) {
        int max_sum = k * (num_classes - 1);
        std::vector<std::uint32_t> cur(static_cast<std::size_t>(max_sum) + 1);
        for (int s = 0; s <= max_sum; ++s) {
            std::vector<std::uint32_t> terms;
            for (int c = 0; c < num_classes; ++c) {
                int rest = s - c;
                if (rest < 0 || rest > (k - 1) * (num_classes - 1))
                    continue;
                terms.push_back(
                    b.mul({b.leaf((k - 1) * num_classes + c), prev[static_cast<std::size_t>(rest)]}));
            }
            cur[static_cast<std::size_t>(s)] = b.add(std::move(terms));
        }
        prev = std::move(cur);
    }
    return b.finish(std::move(prev), num_digits * num_classes);
}

} // namespace nesyv
