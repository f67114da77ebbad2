#include <doctest.h>

#include "nesyv/formula.hpp"

using namespace nesyv;

TEST_CASE("parser mirrors the grammar") {
    VariablePool pool;
    FormulaPtr f = parse_formula("(red_light | car_in_front) -> brake", pool);
    REQUIRE(f->kind() == Formula::Kind::Implies);
    CHECK(f->child(0)->kind() == Formula::Kind::Or);
    CHECK(f->child(1)->kind() == Formula::Kind::Var);
    // First-appearance interning order.
    CHECK(pool.find("red_light")->index == 0);
    CHECK(pool.find("car_in_front")->index == 1);
    CHECK(pool.find("brake")->index == 2);
}

TEST_CASE("parser precedence and associativity") {
    VariablePool pool;
    // ! binds tighter than &, & tighter than |.
    FormulaPtr f = parse_formula("!a & b | c", pool);
    REQUIRE(f->kind() == Formula::Kind::Or);
    REQUIRE(f->child(0)->kind() == Formula::Kind::And);
    CHECK(f->child(0)->child(0)->kind() == Formula::Kind::Not);

    // -> is right-associative.
    FormulaPtr g = parse_formula("a -> b -> c", pool);
    REQUIRE(g->kind() == Formula::Kind::Implies);
    CHECK(g->child(0)->kind() == Formula::Kind::Var);
    CHECK(g->child(1)->kind() == Formula::Kind::Implies);

    // <-> binds loosest.
    FormulaPtr h = parse_formula("a <-> b -> c", pool);
    CHECK(h->kind() == Formula::Kind::Iff);

    FormulaPtr k = parse_formula("a & !a", pool);
    REQUIRE(k->kind() == Formula::Kind::And);
    CHECK(k->children().size() == 2);
    CHECK(k->child(1)->kind() == Formula::Kind::Not);
}

TEST_CASE("parser error positions") {
    VariablePool pool;
    try {
        parse_formula("a |", pool);
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.column == 4);
    }
    CHECK_THROWS_AS(parse_formula("", pool), ParseError);
    CHECK_THROWS_AS(parse_formula("  \n ", pool), ParseError);
    CHECK_THROWS_AS(parse_formula("(a & b", pool), ParseError);
    CHECK_THROWS_AS(parse_formula("a b", pool), ParseError);
    try {
        parse_formula("a &\n& b", pool);
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 1);
    }
}

TEST_CASE("constants parse as keywords") {
    VariablePool pool;
    CHECK(parse_formula("true", pool)->kind() == Formula::Kind::ConstTrue);
    CHECK(parse_formula("false | x", pool)->kind() == Formula::Kind::Or);
    CHECK(pool.size() == 1);
}

TEST_CASE("dimacs basic forms") {
    VariablePool pool;
    FormulaPtr f = parse_dimacs("p cnf 2 1\n1 -2 0\n", pool);
    REQUIRE(f->kind() == Formula::Kind::Or);
    CHECK(f->child(0)->kind() == Formula::Kind::Var);
    CHECK(f->child(1)->kind() == Formula::Kind::Not);
    CHECK(pool.size() == 2);

    VariablePool pool2;
    FormulaPtr g = parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0\n", pool2);
    REQUIRE(g->kind() == Formula::Kind::And);
    CHECK(g->children().size() == 2);
    CHECK(pool2.size() == 1);
}

TEST_CASE("dimacs error cases") {
    VariablePool pool;
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n", pool), ParseError);     // literal out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n", pool), ParseError);     // clause count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -2\n", pool), ParseError);    // missing terminator
    CHECK_THROWS_AS(parse_dimacs("cnf 2 1\n1 0\n", pool), ParseError);       // bad header
}

TEST_CASE("condition folds constants") {
    VariablePool pool;
    FormulaPtr f = parse_formula("(a | b) -> (c <-> a)", pool);
    std::uint64_t a_bit = 1, b_bit = 2;
    FormulaPtr g = condition(f, a_bit | b_bit, a_bit); // a=1, b=0
    // (true | false) -> (c <-> true)  ==>  c
    CHECK(g->kind() == Formula::Kind::Var);
    CHECK(g->var().index == 2);

    FormulaPtr h = condition(f, a_bit | b_bit, 0); // a=0, b=0 => vacuous implication
    CHECK(h->kind() == Formula::Kind::ConstTrue);
}

TEST_CASE("formula_key is canonical per structure") {
    VariablePool pool;
    FormulaPtr f1 = parse_formula("a & (b | !c)", pool);
    FormulaPtr f2 = parse_formula("a & (b | !c)", pool);
    FormulaPtr f3 = parse_formula("(b | !c) & a", pool);
    CHECK(formula_key(f1) == formula_key(f2));
    CHECK(formula_key(f1) != formula_key(f3));
}
