#include <doctest.h>

#include <cmath>

#include "nesyv/compile.hpp"
#include "nesyv/experiments.hpp"
#include "nesyv/oracles.hpp"
#include "nesyv/rng.hpp"

using namespace nesyv;

namespace {

double circuit_wmc(const Circuit& c, std::span<const double> weights) {
    return c.eval(weights)[0];
}

} // namespace

TEST_CASE("shannon compilation of a | b") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a | b", pool);
    DnnfManager m;
    std::uint32_t root = m.compile(f, first_appearance_order(f));
    CHECK(m.node(root).kind == DnnfManager::Kind::Decision);
    CHECK(m.count_models(root, 2) == 3);
}

TEST_CASE("contradiction collapses to false") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a & !a", pool);
    DnnfManager m;
    CHECK(m.compile(f, first_appearance_order(f)) == DnnfManager::kFalse);
}

TEST_CASE("worked example compiles to 5 models") {
    VariablePool pool;
    FormulaPtr f =
        parse_formula("((red_light | car_in_front) -> brake) & (accelerate <-> !brake)", pool);
    DnnfManager m;
    std::uint32_t root = m.compile(f, first_appearance_order(f));
    CHECK(m.count_models(root, pool.size()) == 5);
}

TEST_CASE("compile rejects bad orders") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a & b", pool);
    std::vector<VarId> dup{*pool.find("a"), *pool.find("a")};
    CHECK_THROWS_AS((void)DnnfManager().compile(f, dup), std::invalid_argument);
    std::vector<VarId> missing{*pool.find("a")};
    CHECK_THROWS_AS((void)DnnfManager().compile(f, missing), std::invalid_argument);
}

TEST_CASE("smoothing balances decision branches and is idempotent") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a | b", pool);
    DnnfManager m;
    std::uint32_t root = m.compile(f, first_appearance_order(f));
    CHECK_FALSE(m.is_smooth(root)); // hi branch of the decision drops b
    std::uint32_t s = m.smooth(root);
    CHECK(m.is_smooth(s));
    CHECK(m.smooth(s) == s); // structurally unchanged
    CHECK(m.count_models(s, 2) == 3);
}

TEST_CASE("to_arith_circuit rejects non-smooth input") {
    VariablePool pool;
    FormulaPtr f = parse_formula("a | b", pool);
    DnnfManager m;
    std::uint32_t root = m.compile(f, first_appearance_order(f));
    CHECK_THROWS_AS(to_arith_circuit(m, root, 2), Error);
}

TEST_CASE("negative literal becomes one-minus of the leaf") {
    VariablePool pool;
    FormulaPtr f = parse_formula("!x", pool);
    Circuit c = compile_to_circuit(f, 1);
    std::vector<double> w{0.25};
    CHECK(circuit_wmc(c, w) == doctest::Approx(0.75).epsilon(1e-15));

    Circuit t = compile_to_circuit(Formula::constant(true), 0);
    CHECK(t.eval({})[0] == 1.0);
}

TEST_CASE("worked example circuit evaluates to 0.4972") {
    VariablePool pool;
    FormulaPtr f =
        parse_formula("((red_light | car_in_front) -> brake) & (accelerate <-> !brake)", pool);
    Circuit c = compile_to_circuit(f, pool.size());
    std::vector<double> w(4);
    w[static_cast<std::size_t>(pool.find("red_light")->index)] = 0.6;
    w[static_cast<std::size_t>(pool.find("car_in_front")->index)] = 0.8;
    w[static_cast<std::size_t>(pool.find("brake")->index)] = 0.7;
    w[static_cast<std::size_t>(pool.find("accelerate")->index)] = 0.3;
    CHECK(circuit_wmc(c, w) == doctest::Approx(0.4972).epsilon(1e-12));
    CHECK(std::abs(circuit_wmc(c, w) - wmc_brute(f, w)) < 1e-12);
}

TEST_CASE("random formulas: circuit wmc equals brute wmc") {
    Rng rng(101);
    for (int round = 0; round < 100; ++round) {
        int n = 1 + rng.uniform_int(12);
        std::vector<VarId> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 3);
        Circuit c = compile_to_circuit(f, n);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (double& v : w)
            v = rng.uniform();
        CHECK(std::abs(circuit_wmc(c, w) - wmc_brute(f, w)) < 1e-12);
    }
}

TEST_CASE("wmc is invariant across variable orders") {
    Rng rng(103);
    for (int round = 0; round < 20; ++round) {
        int n = 2 + rng.uniform_int(7);
        std::vector<VarId> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 3);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (double& v : w)
            v = rng.uniform();

        std::vector<VarId> order = first_appearance_order(f);
        double reference = std::nan("");
        for (int trial = 0; trial < 5; ++trial) {
            rng.shuffle(order);
            DnnfManager m;
            std::uint32_t root = m.compile(f, order);
            Circuit c = to_arith_circuit(m, m.smooth(root), n);
            double v = circuit_wmc(c, w);
            if (std::isnan(reference))
                reference = v;
            else
                CHECK(std::abs(v - reference) < 1e-12);
        }
    }
}

TEST_CASE("compiled circuits are multilinear in each leaf") {
    Rng rng(107);
    for (int round = 0; round < 25; ++round) {
        int n = 1 + rng.uniform_int(6);
        std::vector<VarId> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(VarId{i});
        FormulaPtr f = random_formula(rng, vars, 3);
        Circuit c = compile_to_circuit(f, n);
        std::vector<double> w(static_cast<std::size_t>(n));
        for (double& v : w)
            v = rng.uniform();
        int leaf = rng.uniform_int(n);
        auto eval_at = [&](double t) {
            std::vector<double> w2 = w;
            w2[static_cast<std::size_t>(leaf)] = t;
            return circuit_wmc(c, w2);
        };
        // Affine in the chosen leaf: midpoint value is the average.
        double mid = eval_at(0.5);
        CHECK(std::abs(mid - 0.5 * (eval_at(0.0) + eval_at(1.0))) < 1e-12);
    }
}

TEST_CASE("sum circuit base case and normalization") {
    Circuit c1 = build_sum_circuit(1, 10);
    CHECK(c1.outputs().size() == 10);
    std::vector<double> w(10, 0.0);
    w[7] = 1.0;
    std::vector<double> out = c1.eval(w);
    CHECK(out[7] == 1.0);
    CHECK(out[0] == 0.0);

    // Any per-digit distributions: outputs sum to 1.
    Rng rng(109);
    Circuit c3 = build_sum_circuit(3, 5);
    std::vector<double> leaves(15);
    for (int d = 0; d < 3; ++d) {
        double total = 0;
        for (int c = 0; c < 5; ++c) {
            leaves[static_cast<std::size_t>(d * 5 + c)] = rng.uniform(0.01, 1.0);
            total += leaves[static_cast<std::size_t>(d * 5 + c)];
        }
        for (int c = 0; c < 5; ++c)
            leaves[static_cast<std::size_t>(d * 5 + c)] /= total;
    }
    std::vector<double> sums = c3.eval(leaves);
    double total = 0;
    for (double s : sums)
        total += s;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2-digit uniform sum probabilities") {
    Circuit c = build_sum_circuit(2, 10);
    std::vector<double> uniform(20, 0.1);
    std::vector<double> out = c.eval(uniform);
    CHECK(out[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(out[9] == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(out[18] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("sum circuit matches enumeration over class tuples") {
    Rng rng(113);
    for (int digits = 2; digits <= 4; ++digits) {
        Circuit c = build_sum_circuit(digits, 10);
        std::vector<std::vector<double>> dist(static_cast<std::size_t>(digits));
        std::vector<double> leaves;
        for (auto& d : dist) {
            d.resize(10);
            double total = 0;
            for (double& v : d) {
                v = rng.uniform(0.0, 1.0);
                total += v;
            }
            for (double& v : d)
                v /= total;
            leaves.insert(leaves.end(), d.begin(), d.end());
        }
        std::vector<double> expected(static_cast<std::size_t>(digits * 9 + 1), 0.0);
        std::vector<int> tuple(static_cast<std::size_t>(digits), 0);
        while (true) {
            double p = 1;
            int sum = 0;
            for (int d = 0; d < digits; ++d) {
                p *= dist[static_cast<std::size_t>(d)][static_cast<std::size_t>(tuple[d])];
                sum += tuple[static_cast<std::size_t>(d)];
            }
            expected[static_cast<std::size_t>(sum)] += p;
            int k = digits - 1;
            while (k >= 0 && ++tuple[static_cast<std::size_t>(k)] == 10)
                tuple[static_cast<std::size_t>(k--)] = 0;
            if (k < 0)
                break;
        }
        std::vector<double> got = c.eval(leaves);
        REQUIRE(got.size() == expected.size());
        for (std::size_t s = 0; s < got.size(); ++s)
            CHECK(std::abs(got[s] - expected[s]) < 1e-9);
    }
}

TEST_CASE("sum circuit guards") {
    CHECK_THROWS_AS(build_sum_circuit(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(build_sum_circuit(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_sum_circuit(9, 10), std::invalid_argument);
}

TEST_CASE("boolean chain encoding agrees with the direct sum circuit") {
    // 2 digits x 3 classes via selector variables: class 0 = v1,
    // class 1 = !v1 & v2, class 2 = !v1 & !v2, with weights chosen so the
    // induced class distribution matches the given one.
    const double p0[3] = {0.5, 0.3, 0.2};
    const double p1[3] = {0.2, 0.5, 0.3};

    VariablePool pool;
    VarId a1 = pool.intern("a1"), a2 = pool.intern("a2");
    VarId b1 = pool.intern("b1"), b2 = pool.intern("b2");
    auto klass = [&](VarId v1, VarId v2, int c) -> FormulaPtr {
        FormulaPtr s1 = Formula::make_var(v1);
        FormulaPtr s2 = Formula::make_var(v2);
        if (c == 0)
            return s1;
        if (c == 1)
            return Formula::conj({Formula::negate(s1), s2});
        return Formula::conj({Formula::negate(s1), Formula::negate(s2)});
    };

    Circuit direct = build_sum_circuit(2, 3);
    std::vector<double> leaves{p0[0], p0[1], p0[2], p1[0], p1[1], p1[2]};
    std::vector<double> expected = direct.eval(leaves);

    std::vector<double> w(4);
    w[static_cast<std::size_t>(a1.index)] = p0[0];
    w[static_cast<std::size_t>(a2.index)] = p0[1] / (1.0 - p0[0]);
    w[static_cast<std::size_t>(b1.index)] = p1[0];
    w[static_cast<std::size_t>(b2.index)] = p1[1] / (1.0 - p1[0]);

    for (int s = 0; s <= 4; ++s) {
        std::vector<FormulaPtr> ways;
        for (int c0 = 0; c0 < 3; ++c0)
            for (int c1 = 0; c1 < 3; ++c1)
                if (c0 + c1 == s)
                    ways.push_back(Formula::conj({klass(a1, a2, c0), klass(b1, b2, c1)}));
        FormulaPtr f = ways.size() == 1 ? ways[0] : Formula::disj(std::move(ways));
        Circuit c = compile_to_circuit(f, pool.size());
        CHECK(std::abs(c.eval(w)[0] - expected[static_cast<std::size_t>(s)]) < 1e-12);
        CHECK(std::abs(wmc_brute(f, w) - expected[static_cast<std::size_t>(s)]) < 1e-12);
    }
}
