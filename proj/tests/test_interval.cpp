#include <doctest.h>

#include "nesyv/interval.hpp"
#include "nesyv/rng.hpp"

using nesyv::Interval;
using nesyv::Rng;

TEST_CASE("interval construction rejects bad endpoints") {
    CHECK_THROWS_AS(Interval(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(Interval(std::nan(""), 0.0), std::invalid_argument);
    Interval a(1.0, 1.0);
    CHECK(a.degenerate());
}

TEST_CASE("interval add endpoints") {
    CHECK(Interval(1, 2) + Interval(3, 4) == Interval(4, 6));
    CHECK(Interval(0, 0) + Interval(-3, 7) == Interval(-3, 7));
    CHECK(Interval(-1, 1) + Interval(-1, 1) == Interval(-2, 2));
}

TEST_CASE("interval mul endpoint products") {
    CHECK(Interval(2, 3) * Interval(4, 5) == Interval(8, 15));
    CHECK(Interval(-1, 2) * Interval(3, 4) == Interval(-4, 8));
    CHECK(Interval(0, 0) * Interval(-5, 9) == Interval(0, 0));
}

TEST_CASE("one_minus reflects") {
    CHECK(one_minus(Interval(0.2, 0.5)) == Interval(0.5, 0.8));
    CHECK(one_minus(Interval(0, 1)) == Interval(0, 1));
    CHECK(one_minus(Interval(1, 1)) == Interval(0, 0));
}

TEST_CASE("contains is closed and tolerance-free") {
    Interval u(0, 1);
    CHECK(u.contains(0.5));
    CHECK(u.contains(1.0));
    CHECK(u.contains(0.0));
    CHECK_FALSE(u.contains(1.0000001));
    CHECK_FALSE(u.contains(-1e-12));
}

TEST_CASE("soundness by sampling, exact containment") {
    Rng rng(20250810);
    for (int round = 0; round < 20; ++round) {
        double a1 = rng.uniform(-3, 3), a2 = rng.uniform(-3, 3);
        double b1 = rng.uniform(-3, 3), b2 = rng.uniform(-3, 3);
        Interval a(std::min(a1, a2), std::max(a1, a2));
        Interval b(std::min(b1, b2), std::max(b1, b2));
        for (int i = 0; i < 500; ++i) {
            double x = rng.uniform(a.lo(), a.hi());
            double y = rng.uniform(b.lo(), b.hi());
            CHECK((a + b).contains(x + y));
            CHECK((a * b).contains(x * y));
            CHECK(one_minus(a).contains(1.0 - x));
        }
    }
}

TEST_CASE("inclusion monotonicity") {
    Rng rng(42);
    for (int round = 0; round < 200; ++round) {
        double lo = rng.uniform(-2, 2), hi = lo + rng.uniform(0, 2);
        Interval a(lo, hi);
        Interval wider(lo - rng.uniform(0, 1), hi + rng.uniform(0, 1));
        double lo2 = rng.uniform(-2, 2), hi2 = lo2 + rng.uniform(0, 2);
        Interval b(lo2, hi2);
        Interval wider2(lo2 - rng.uniform(0, 1), hi2 + rng.uniform(0, 1));

        CHECK((wider + wider2).contains(a + b));
        CHECK((wider * wider2).contains(a * b));
        CHECK(one_minus(wider).contains(one_minus(a)));
    }
}

TEST_CASE("degenerate intervals behave like points") {
    Interval x = Interval::point(0.375);
    Interval y = Interval::point(-2.5);
    CHECK((x + y) == Interval::point(0.375 + -2.5));
    CHECK((x * y) == Interval::point(0.375 * -2.5));
    CHECK(one_minus(x) == Interval::point(1.0 - 0.375));
}
