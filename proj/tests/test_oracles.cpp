#include <doctest.h>

#include <cmath>

#include "nesyv/experiments.hpp"
#include "nesyv/oracles.hpp"
#include "nesyv/rng.hpp"

using namespace nesyv;

namespace {

// The worked driving-constraint example: (red_light | car_in_front) -> brake,
// accelerate <-> !brake. Weights keyed by name.
FormulaPtr worked_example(VariablePool& pool) {
    return parse_formula("((red_light | car_in_front) -> brake) & (accelerate <-> !brake)", pool);
}

std::vector<double> worked_example_weights(const VariablePool& pool) {
    std::vector<double> w(static_cast<std::size_t>(pool.size()));
    w[static_cast<std::size_t>(pool.find("red_light")->index)] = 0.6;
    w[static_cast<std::size_t>(pool.find("car_in_front")->index)] = 0.8;
    w[static_cast<std::size_t>(pool.find("brake")->index)] = 0.7;
    w[static_cast<std::size_t>(pool.find("accelerate")->index)] = 0.3;
    return w;
}

} // namespace

TEST_CASE("worked example has exactly 5 models") {
    VariablePool pool;
    FormulaPtr f = worked_example(pool);
    CHECK(count_models(f, pool.size()) == 5);
}

TEST_CASE("count_models with partial assignments") {
    VariablePool pool;
    FormulaPtr f = parse_formula("x & y", pool);
    PartialAssignment partial;
    partial.set(*pool.find("x"), true);
    CHECK(count_models(f, pool.size(), partial) == 1);
    CHECK(count_models(Formula::constant(false), 0) == 0);
    CHECK(count_models(Formula::constant(true), 3) == 8);
}

TEST_CASE("count_models guard") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a | b", pool);
    CHECK_THROWS_AS(count_models(f, 30), std::invalid_argument);
}

TEST_CASE("wmc of the worked example") {
    // Hand enumeration: brake=1 forces !accelerate and frees (r, c), mass
    // 0.7*0.7 = 0.49; brake=0 forces accelerate, !r, !c,
    // mass 0.3*0.3*0.4*0.2 = 0.0072. Total 0.4972.
    VariablePool pool;
    FormulaPtr f = worked_example(pool);
    double wmc = wmc_brute(f, worked_example_weights(pool));
    CHECK(wmc == doctest::Approx(0.4972).epsilon(1e-12));

    std::vector<double> half(4, 0.5);
    CHECK(wmc_brute(f, half) == doctest::Approx(0.3125).epsilon(1e-12)); // 5/16
    CHECK(wmc_brute(Formula::constant(true), half) == doctest::Approx(1.0));
}

TEST_CASE("wmc validates weights") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a", pool);
    std::vector<double> bad{1.5};
    CHECK_THROWS_AS(wmc_brute(f, bad), std::invalid_argument);
}

TEST_CASE("wmc at half weights equals count/2^n") {
    Rng rng(7);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng.uniform_int(12);
        std::vector<VarId> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 3);
        std::vector<double> half(static_cast<std::size_t>(n), 0.5);
        double expected = static_cast<double>(count_models(f, n)) / std::pow(2.0, n);
        CHECK(wmc_brute(f, half) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("wmc of f and not-f sum to one") {
    Rng rng(11);
    for (int round = 0; round < 60; ++round) {
        int n = 1 + rng.uniform_int(8);
        std::vector<VarId> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 3);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (double& v : w)
            v = rng.uniform();
        double total = wmc_brute(f, w) + wmc_brute(Formula::negate(f), w);
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("count is monotone under conjunction") {
    Rng rng(13);
    for (int round = 0; round < 40; ++round) {
        int n = 2 + rng.uniform_int(6);
        std::vector<VarId> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 2);
        FormulaPtr g = random_formula(rng, vars, 2);
        CHECK(count_models(Formula::conj({f, g}), n) <= count_models(f, n));
    }
}

TEST_CASE("emajsat on the spec instances") {
    // x & y: restriction x=1 leaves count 1 >= 2^1/2.
    VariablePool pool;
    FormulaPtr f = parse_formula("x & y", pool);
    std::vector<VarId> xs{*pool.find("x")}, ys{*pool.find("y")};
    CHECK(emajsat_brute(f, 2, xs, ys));

    // x xor y: both restrictions leave count 1 >= 1.
    VariablePool pool2;
    FormulaPtr g = parse_formula("(x | y) & !(x & y)", pool2);
    CHECK(emajsat_brute(g, 2, std::vector<VarId>{*pool2.find("x")},
                        std::vector<VarId>{*pool2.find("y")}));

    // !x & y1 & y2: counts are 1 (x=0) and 0 (x=1), both below 2.
    VariablePool pool3;
    FormulaPtr h = parse_formula("!x & y1 & y2", pool3);
    CHECK_FALSE(emajsat_brute(h, 3, std::vector<VarId>{*pool3.find("x")},
                              std::vector<VarId>{*pool3.find("y1"), *pool3.find("y2")}));
}

TEST_CASE("emajsat validates the partition") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a & b", pool);
    std::vector<VarId> xs{*pool.find("a")};
    std::vector<VarId> both{*pool.find("a"), *pool.find("b")};
    CHECK_THROWS_AS(emajsat_brute(f, 2, xs, xs), std::invalid_argument);   // overlap
    CHECK_THROWS_AS(emajsat_brute(f, 2, xs, {}), std::invalid_argument);   // not covering
    CHECK_NOTHROW(emajsat_brute(f, 2, xs, std::vector<VarId>{*pool.find("b")}));
    CHECK_NOTHROW(emajsat_brute(f, 2, both, {}));
}

TEST_CASE("emajsat is invariant under renaming and list order") {
    Rng rng(17);
    for (int round = 0; round < 25; ++round) {
        int n = 1 + rng.uniform_int(2), m = 1 + rng.uniform_int(3);
        std::vector<VarId> vars;
        for (int i = 0; i < n + m; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 3);
        std::vector<VarId> xs(vars.begin(), vars.begin() + n);
        std::vector<VarId> ys(vars.begin() + n, vars.end());
        bool base = emajsat_brute(f, n + m, xs, ys);

        // Reorder the lists.
        std::vector<VarId> xs_r(xs.rbegin(), xs.rend());
        std::vector<VarId> ys_r(ys.rbegin(), ys.rend());
        CHECK(emajsat_brute(f, n + m, xs_r, ys_r) == base);

        // Rename: shift every variable index up by one.
        auto rename = [&](const FormulaPtr& g, auto&& self) -> FormulaPtr {
            switch (g->kind()) {
            case Formula::Kind::Var:
                return Formula::make_var(VarId{g->var().index + 1});
            case Formula::Kind::Not:
                return Formula::negate(self(g->child(0), self));
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                std::vector<FormulaPtr> kids;
                for (const auto& k : g->children())
                    kids.push_back(self(k, self));
                return g->kind() == Formula::Kind::And ? Formula::conj(std::move(kids))
                                                       : Formula::disj(std::move(kids));
            }
            case Formula::Kind::Implies:
                return Formula::implies(self(g->child(0), self), self(g->child(1), self));
            case Formula::Kind::Iff:
                return Formula::iff(self(g->child(0), self), self(g->child(1), self));
            default:
                return g;
            }
        };
        FormulaPtr f2 = rename(f, rename);
        std::vector<VarId> xs2, ys2;
        for (VarId v : xs)
            xs2.push_back(VarId{v.index + 1});
        for (VarId v : ys)
            ys2.push_back(VarId{v.index + 1});
        ys2.push_back(VarId{0}); // index 0 becomes a fresh counting variable
        // Adding one unconstrained y variable doubles both the count and the
        // majority threshold, so the answer is unchanged.
        CHECK(emajsat_brute(f2, n + m + 1, xs2, ys2) == base);
    }
}
