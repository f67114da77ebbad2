#include "nesyv/formula.hpp"

#include <cctype>

#include "nesyv/text.hpp"

namespace nesyv {

VarId VariablePool::intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end())
        return VarId{it->second};
    int idx = static_cast<int>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), idx);
    return VarId{idx};
}

std::optional<VarId> VariablePool::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return VarId{it->second};
}

const std::string& VariablePool::name(VarId v) const {
    if (v.index < 0 || v.index >= size())
        throw Error("variable index out of range: " + std::to_string(v.index));
    return names_[static_cast<std::size_t>(v.index)];
}

FormulaPtr Formula::constant(bool value) {
    return FormulaPtr(new Formula(value ? Kind::ConstTrue : Kind::ConstFalse, VarId{}, {}));
}

FormulaPtr Formula::make_var(VarId v) {
    if (v.index < 0)
        throw Error("make_var: invalid variable id");
    return FormulaPtr(new Formula(Kind::Var, v, {}));
}

FormulaPtr Formula::negate(FormulaPtr a) {
    return FormulaPtr(new Formula(Kind::Not, VarId{}, {std::move(a)}));
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> kids) {
    return FormulaPtr(new Formula(Kind::And, VarId{}, std::move(kids)));
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> kids) {
    return FormulaPtr(new Formula(Kind::Or, VarId{}, std::move(kids)));
}

FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
    return FormulaPtr(new Formula(Kind::Implies, VarId{}, {std::move(a), std::move(b)}));
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
    return FormulaPtr(new Formula(Kind::Iff, VarId{}, {std::move(a), std::move(b)}));
}

std::uint64_t formula_vars(const FormulaPtr& f) {
    switch (f->kind()) {
    case Formula::Kind::ConstTrue:
    case Formula::Kind::ConstFalse:
        return 0;
    case Formula::Kind::Var:
        if (f->var().index >= 64)
            throw Error("formula_vars: variable index >= 64 unsupported");
        return std::uint64_t{1} << f->var().index;
    default: {
        std::uint64_t m = 0;
        for (const auto& k : f->children())
            m |= formula_vars(k);
        return m;
    }
    }
}

bool eval_formula(const FormulaPtr& f, std::uint64_t assignment) {
    switch (f->kind()) {
    case Formula::Kind::ConstTrue:
        return true;
    case Formula::Kind::ConstFalse:
        return false;
    case Formula::Kind::Var:
        return (assignment >> f->var().index) & 1;
    case Formula::Kind::Not:
        return !eval_formula(f->child(0), assignment);
    case Formula::Kind::And:
        for (const auto& k : f->children())
            if (!eval_formula(k, assignment))
                return false;
        return true;
    case Formula::Kind::Or:
        for (const auto& k : f->children())
            if (eval_formula(k, assignment))
                return true;
        return false;
    case Formula::Kind::Implies:
        return !eval_formula(f->child(0), assignment) || eval_formula(f->child(1), assignment);
    case Formula::Kind::Iff:
        return eval_formula(f->child(0), assignment) == eval_formula(f->child(1), assignment);
    }
    throw Error("eval_formula: corrupt node");
}

namespace {

bool is_const(const FormulaPtr& f, bool value) {
    return f->kind() == (value ? Formula::Kind::ConstTrue : Formula::Kind::ConstFalse);
}

FormulaPtr fold_not(FormulaPtr a) {
    if (is_const(a, true))
        return Formula::constant(false);
    if (is_const(a, false))
        return Formula::constant(true);
    if (a->kind() == Formula::Kind::Not)
        return a->child(0);
    return Formula::negate(std::move(a));
}

} // namespace

FormulaPtr condition(const FormulaPtr& f, std::uint64_t mask, std::uint64_t values) {
    switch (f->kind()) {
    case Formula::Kind::ConstTrue:
    case Formula::Kind::ConstFalse:
        return f;
    case Formula::Kind::Var: {
        std::uint64_t bit = std::uint64_t{1} << f->var().index;
        if (mask & bit)
            return Formula::constant((values & bit) != 0);
        return f;
    }
    case Formula::Kind::Not:
        return fold_not(condition(f->child(0), mask, values));
    case Formula::Kind::And: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : f->children()) {
            FormulaPtr c = condition(k, mask, values);
            if (is_const(c, false))
                return Formula::constant(false);
            if (!is_const(c, true))
                kids.push_back(std::move(c));
        }
        if (kids.empty())
            return Formula::constant(true);
        if (kids.size() == 1)
            return kids[0];
        return Formula::conj(std::move(kids));
    }
    case Formula::Kind::Or: {
        std::vector<FormulaPtr> kids;
        for (const auto& k : f->children()) {
            FormulaPtr c = condition(k, mask, values);
            if (is_const(c, true))
                return Formula::constant(true);
            if (!is_const(c, false))
                kids.push_back(std::move(c));
        }
        if (kids.empty())
            return Formula::constant(false);
        if (kids.size() == 1)
            return kids[0];
        return Formula::disj(std::move(kids));
    }
    case Formula::Kind::Implies: {
        FormulaPtr a = condition(f->child(0), mask, values);
        FormulaPtr b = condition(f->child(1), mask, values);
        if (is_const(a, false) || is_const(b, true))
            return Formula::constant(true);
        if (is_const(a, true))
            return b;
        if (is_const(b, false))
            return fold_not(std::move(a));
        return Formula::implies(std::move(a), std::move(b));
    }
    case Formula::Kind::Iff: {
        FormulaPtr a = condition(f->child(0), mask, values);
        FormulaPtr b = condition(f->child(1), mask, values);
        if (is_const(a, true))
            return b;
        if (is_const(a, false))
            return fold_not(std::move(b));
        if (is_const(b, true))
            return a;
        if (is_const(b, false))
            return fold_not(std::move(a));
        return Formula::iff(std::move(a), std::move(b));
    }
    }
    throw Error("condition: corrupt node");
}

namespace {
void key_rec(const FormulaPtr& f, std::string& out) {
    switch (f->kind()) {
    case Formula::Kind::ConstTrue:
        out += 'T';
        return;
    case Formula::Kind::ConstFalse:
        out += 'F';
        return;
    case Formula::Kind::Var:
        out += 'v';
        out += std::to_string(f->var().index);
        return;
    case Formula::Kind::Not:
        out += '!';
        key_rec(f->child(0), out);
        return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
        char tag = f->kind() == Formula::Kind::And       ? '&'
                   : f->kind() == Formula::Kind::Or      ? '|'
                   : f->kind() == Formula::Kind::Implies ? '>'
                                                         : '=';
        out += tag;
        out += '(';
        bool first = true;
        for (const auto& k : f->children()) {
            if (!first)
                out += ',';
            first = false;
            key_rec(k, out);
        }
        out += ')';
        return;
    }
    }
}
} // namespace

std::string formula_key(const FormulaPtr& f) {
    std::string out;
    key_rec(f, out);
    return out;
}

std::string to_string(const FormulaPtr& f, const VariablePool& pool) {
    switch (f->kind()) {
    case Formula::Kind::ConstTrue:
        return "true";
    case Formula::Kind::ConstFalse:
        return "false";
    case Formula::Kind::Var:
        return pool.name(f->var());
    case Formula::Kind::Not:
        return "!" + to_string(f->child(0), pool);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const char* op = f->kind() == Formula::Kind::And ? " & " : " | ";
        std::string out = "(";
        bool first = true;
        for (const auto& k : f->children()) {
            if (!first)
                out += op;
            first = false;
            out += to_string(k, pool);
        }
        return out + ")";
    }
    case Formula::Kind::Implies:
        return "(" + to_string(f->child(0), pool) + " -> " + to_string(f->child(1), pool) + ")";
    case Formula::Kind::Iff:
        return "(" + to_string(f->child(0), pool) + " <-> " + to_string(f->child(1), pool) + ")";
    }
    throw Error("to_string: corrupt node");
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

enum class Tok : std::uint8_t { Ident, LParen, RParen, Not, And, Or, Arrow, Iff, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t col;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_ws();
        std::size_t line = line_, col = col_;
        if (pos_ >= text_.size())
            return {Tok::End, "", line, col};
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                advance();
            return {Tok::Ident, std::string(text_.substr(start, pos_ - start)), line, col};
        }
        switch (c) {
        case '(':
            advance();
            return {Tok::LParen, "(", line, col};
        case ')':
            advance();
            return {Tok::RParen, ")", line, col};
        case '!':
            advance();
            return {Tok::Not, "!", line, col};
        case '&':
            advance();
            return {Tok::And, "&", line, col};
        case '|':
            advance();
            return {Tok::Or, "|", line, col};
        case '-':
            advance();
            if (pos_ < text_.size() && text_[pos_] == '>') {
                advance();
                return {Tok::Arrow, "->", line, col};
            }
            throw ParseError("syntax error: expected '->'", line, col);
        case '<':
            advance();
            if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
                advance();
                advance();
                return {Tok::Iff, "<->", line, col};
            }
            throw ParseError("syntax error: expected '<->'", line, col);
        default:
            throw ParseError(std::string("syntax error: unexpected character '") + c + "'", line, col);
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class ExprParser {
public:
    ExprParser(std::string_view text, VariablePool& pool) : lex_(text), pool_(pool) { bump(); }

    FormulaPtr parse() {
        if (cur_.kind == Tok::End)
            throw ParseError("syntax error: empty input", cur_.line, cur_.col);
        FormulaPtr f = parse_iff();
        if (cur_.kind != Tok::End)
            throw ParseError("syntax error: unexpected '" + cur_.text + "' after expression", cur_.line,
                             cur_.col);
        return f;
    }

private:
    void bump() { cur_ = lex_.next(); }

    FormulaPtr parse_iff() {
        FormulaPtr lhs = parse_implies();
        if (cur_.kind == Tok::Iff) {
            bump();
            return Formula::iff(std::move(lhs), parse_iff());
        }
        return lhs;
    }

    FormulaPtr parse_implies() {
        FormulaPtr lhs = parse_or();
        if (cur_.kind == Tok::Arrow) {
            bump();
            return Formula::implies(std::move(lhs), parse_implies());
        }
        return lhs;
    }

    FormulaPtr parse_or() {
        std::vector<FormulaPtr> kids;
        kids.push_back(parse_and());
        while (cur_.kind == Tok::Or) {
            bump();
            kids.push_back(parse_and());
        }
        if (kids.size() == 1)
            return kids[0];
        return Formula::disj(std::move(kids));
    }

    FormulaPtr parse_and() {
        std::vector<FormulaPtr> kids;
        kids.push_back(parse_unary());
        while (cur_.kind == Tok::And) {
            bump();
            kids.push_back(parse_unary());
        }
        if (kids.size() == 1)
            return kids[0];
        return Formula::conj(std::move(kids));
    }

    FormulaPtr parse_unary() {
        if (cur_.kind == Tok::Not) {
            bump();
            return Formula::negate(parse_unary());
        }
        return parse_atom();
    }

    FormulaPtr parse_atom() {
        if (cur_.kind == Tok::Ident) {
            std::string name = cur_.text;
            bump();
            if (name == "true")
                return Formula::constant(true);
            if (name == "false")
                return Formula::constant(false);
            return Formula::make_var(pool_.intern(name));
        }
        if (cur_.kind == Tok::LParen) {
            bump();
            FormulaPtr inner = parse_iff();
            if (cur_.kind != Tok::RParen)
                throw ParseError("syntax error: expected ')'", cur_.line, cur_.col);
            bump();
            return inner;
        }
        throw ParseError("syntax error: expected operand, got " +
                             (cur_.kind == Tok::End ? std::string("end of input") : "'" + cur_.text + "'"),
                         cur_.line, cur_.col);
    }

    Lexer lex_;
    VariablePool& pool_;
    Token cur_;
};

} // namespace

FormulaPtr parse_formula(std::string_view text, VariablePool& pool) {
    return ExprParser(text, pool).parse();
}

// ---------------------------------------------------------------------------
// DIMACS CNF

FormulaPtr parse_dimacs(std::string_view text, VariablePool& pool) {
    // Strip comment lines, keep everything else as one token stream.
    std::string body;
    body.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] != 'c') {
            body.append(line);
            body.push_back('\n');
        }
        pos = eol + 1;
    }

    Tokenizer tok(body, "dimacs");
    tok.expect("p");
    tok.expect("cnf");
    std::int64_t num_vars = tok.next_int("variable count");
    std::int64_t num_clauses = tok.next_int("clause count");
    if (num_vars < 0 || num_clauses < 0)
        throw ParseError("dimacs: negative counts in header");

    std::vector<VarId> vars;
    vars.reserve(static_cast<std::size_t>(num_vars));
    for (std::int64_t i = 1; i <= num_vars; ++i)
        vars.push_back(pool.intern("x" + std::to_string(i)));

    std::vector<FormulaPtr> clauses;
    std::vector<FormulaPtr> lits;
    while (!tok.done()) {
        std::int64_t lit = tok.next_int("literal");
        if (lit == 0) {
            if (lits.empty())
                clauses.push_back(Formula::constant(false));
            else if (lits.size() == 1)
                clauses.push_back(lits[0]);
            else
                clauses.push_back(Formula::disj(lits));
            lits.clear();
            continue;
        }
        std::int64_t v = lit < 0 ? -lit : lit;
        if (v > num_vars)
            throw ParseError("dimacs: literal " + std::to_string(lit) + " exceeds declared " +
                             std::to_string(num_vars) + " variables");
        FormulaPtr atom = Formula::make_var(vars[static_cast<std::size_t>(v - 1)]);
        lits.push_back(lit < 0 ? Formula::negate(std::move(atom)) : std::move(atom));
    }
    if (!lits.empty())
        throw ParseError("dimacs: missing clause terminator 0");
    if (static_cast<std::int64_t>(clauses.size()) != num_clauses)
        throw ParseError("dimacs: header declares " + std::to_string(num_clauses) + " clauses, found " +
                         std::to_string(clauses.size()));

    if (clauses.empty())
        return Formula::constant(true);
    if (clauses.size() == 1)
        return clauses[0];
    return Formula::conj(std::move(clauses));
}

} // namespace nesyv
