#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nesyv/error.hpp"

namespace nesyv {

// Dense variable index inside a VariablePool.
struct VarId {
    int index = -1;
    friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
};

// Name <-> index mapping. Indices are dense in first-intern order.
class VariablePool {
public:
    VarId intern(std::string_view name);
    std::optional<VarId> find(std::string_view name) const;
    const std::string& name(VarId v) const;
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable propositional AST node. Connective arity follows the surface
// grammar: And/Or are n-ary, Implies/Iff binary, Not unary.
class Formula {
public:
    enum class Kind : std::uint8_t { ConstTrue, ConstFalse, Var, Not, And, Or, Implies, Iff };

    Kind kind() const { return kind_; }
    VarId var() const { return var_; }
    const std::vector<FormulaPtr>& children() const { return kids_; }
    const FormulaPtr& child(std::size_t i) const { return kids_[i]; }

    static FormulaPtr constant(bool value);
    static FormulaPtr make_var(VarId v);
    static FormulaPtr negate(FormulaPtr a);
    static FormulaPtr conj(std::vector<FormulaPtr> kids);
    static FormulaPtr disj(std::vector<FormulaPtr> kids);
    static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
    static FormulaPtr iff(FormulaPtr a, FormulaPtr b);

private:
    Formula(Kind kind, VarId var, std::vector<FormulaPtr> kids)
        : kind_(kind), var_(var), kids_(std::move(kids)) {}

    Kind kind_;
    VarId var_;
    std::vector<FormulaPtr> kids_;
};

// Bitmask of variable indices mentioned in the formula (indices must be < 64).
std::uint64_t formula_vars(const FormulaPtr& f);

// Truth value under a total assignment given as bits (bit i = variable i).
bool eval_formula(const FormulaPtr& f, std::uint64_t assignment);

// Substitutes the given variables and constant-folds the result.
FormulaPtr condition(const FormulaPtr& f, std::uint64_t mask, std::uint64_t values);

// Canonical serialization; equal strings iff structurally equal ASTs.
std::string formula_key(const FormulaPtr& f);

// Surface-syntax printer (parenthesized, for diagnostics).
std::string to_string(const FormulaPtr& f, const VariablePool& pool);

// Parses one expression in the surface grammar:
//   ident  := [A-Za-z_][A-Za-z0-9_]*        ("true"/"false" are constants)
//   unary  := '!' unary | ident | '(' expr ')'
//   expr   := precedence ! > & > | > -> > <->, '->' and '<->' right-associative
// Fresh identifiers are interned into `pool` in first-appearance order.
FormulaPtr parse_formula(std::string_view text, VariablePool& pool);

// Parses DIMACS CNF ("p cnf V C" header, clauses terminated by 0).
// Interns variables x1..xV so the pool size matches the declared count.
FormulaPtr parse_dimacs(std::string_view text, VariablePool& pool);

} // namespace nesyv
