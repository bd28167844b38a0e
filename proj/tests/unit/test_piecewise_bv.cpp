#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qid/errors.hpp"
#include "qid/piecewise_bv.hpp"

using namespace qid;

namespace {

// Example 1: G_n = 1_{[n,inf)} - 1_{[n+1,inf)}
PiecewiseBV example1(long n) {
    return PiecewiseBV({{double(n), 1.0}, {double(n + 1), -1.0}}, {});
}

// Example 2: G_n = n 1_{[0,inf)} - n 1_{[1/n^2,inf)}
PiecewiseBV example2(long n) {
    const double nd = double(n);
    return PiecewiseBV({{0.0, nd}, {1.0 / (nd * nd), -nd}}, {});
}

// Example 4: ramp of slope 1/n on [-n, n]
PiecewiseBV example4(long n) {
    return PiecewiseBV({}, {{-double(n), double(n), 1.0 / double(n)}});
}

PiecewiseBV random_bv(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> loc(-5.0, 5.0);
    std::uniform_real_distribution<double> weight(-2.0, 2.0);
    std::uniform_int_distribution<int> count(0, 4);
    std::vector<Atom> atoms;
    for (int i = count(rng); i > 0; --i) atoms.push_back({loc(rng), weight(rng)});
    std::vector<Segment> segments;
    double cursor = -6.0;
    for (int i = count(rng); i > 0; --i) {
        const double a = cursor + std::abs(loc(rng)) * 0.2;
        const double b = a + 0.1 + std::abs(loc(rng)) * 0.3;
        segments.push_back({a, b, weight(rng)});
        cursor = b;
    }
    return PiecewiseBV(std::move(atoms), std::move(segments));
}

}  // namespace

TEST_CASE("eval on the paper examples") {
    const PiecewiseBV g3 = example1(3);
    CHECK(g3.eval(3.5) == 1.0);
    CHECK(g3.eval(4.0) == 0.0);
    CHECK(g3.eval(3.0) == 1.0);   // right-continuous at the jump
    CHECK(g3.eval(2.999) == 0.0);

    CHECK(PiecewiseBV().eval(17.0) == 0.0);

    CHECK(example4(2).eval(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(example4(2).eval(-2.0) == 0.0);
    CHECK(example4(2).eval(5.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("total variation") {
    for (long n : {1L, 3L, 17L}) CHECK(example1(n).total_variation() == 2.0);
    for (long n : {1L, 2L, 8L}) CHECK(example2(n).total_variation() == 2.0 * double(n));
    CHECK(PiecewiseBV().total_variation() == 0.0);
    CHECK(example4(5).total_variation() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("variation function") {
    // oracle: direct enumeration of |jumps| up to x
    CHECK(example1(3).variation(3.5) == 1.0);
    CHECK(example2(2).variation(10.0) == 4.0);  // |2| + |-2|
    // non-decreasing G: |G|(x) == G(x)
    const PiecewiseBV g({{0.0, 1.0}, {2.0, 0.5}}, {{3.0, 4.0, 0.25}});
    for (double x : {-1.0, 0.0, 1.0, 2.5, 3.7, 10.0}) CHECK(g.variation(x) == g.eval(x));
}

TEST_CASE("limit at infinity") {
    for (long n : {1L, 4L}) CHECK(example1(n).limit_at_infinity() == 0.0);
    for (long n : {1L, 6L}) {
        CHECK(example4(n).limit_at_infinity() == doctest::Approx(2.0).epsilon(1e-15));
    }
    const PiecewiseBV nondec({{1.0, 0.5}}, {{2.0, 3.0, 1.5}});
    CHECK(nondec.limit_at_infinity() == nondec.total_variation());
}

TEST_CASE("construction normalizes") {
    // merge at identical locations, drop zeros
    const PiecewiseBV g({{1.0, 0.5}, {1.0, 0.5}, {2.0, 0.0}}, {});
    CHECK(g.atoms().size() == 1);
    CHECK(g.atoms()[0].weight == 1.0);

    CHECK_THROWS_AS(PiecewiseBV({}, {{1.0, 0.5, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseBV({}, {{0.0, 2.0, 1.0}, {1.0, 3.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("hahn-jordan decomposition") {
    SUBCASE("example 1 sign split") {
        const JordanPair jp = hahn_jordan(example1(1));
        CHECK(jp.positive == PiecewiseBV::step(1.0));
        CHECK(jp.negative == PiecewiseBV::step(2.0));
    }
    SUBCASE("non-negative G has empty negative part") {
        const PiecewiseBV g({{0.0, 1.0}}, {{1.0, 2.0, 0.5}});
        CHECK(hahn_jordan(g).negative.empty());
    }
    SUBCASE("example 2 masses") {
        const JordanPair jp = hahn_jordan(example2(3));
        CHECK(jp.positive.limit_at_infinity() == 3.0);
        CHECK(jp.negative.limit_at_infinity() == 3.0);
    }
}

TEST_CASE("combine") {
    const PiecewiseBV g = example1(1);
    CHECK(combine(1.0, g, -1.0, g).empty());

    const PiecewiseBV sum = combine(1.0, PiecewiseBV::step(0.0), 1.0, PiecewiseBV::step(0.0));
    CHECK(sum.atoms().size() == 1);
    CHECK(sum.atoms()[0].weight == 2.0);

    // example1 n=1 plus n=2: atom at 2 cancels
    const PiecewiseBV both = combine(1.0, example1(1), 1.0, example1(2));
    CHECK(both == PiecewiseBV({{1.0, 1.0}, {3.0, -1.0}}, {}));
}

TEST_CASE("stieltjes integral on the paper examples") {
    const double pi = std::numbers::pi;
    for (long n : {1L, 2L, 5L, 256L}) {
        const double expected = 2.0 * ((n % 2 == 0) ? 1.0 : -1.0);
        const double got =
            stieltjes_integral_real(example1(n), [pi](double x) { return std::cos(pi * x); });
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }

    auto hat = [](double x) {
        if (x < 0.0 || x > 2.0) return 0.0;
        return x <= 1.0 ? std::sqrt(x) : std::sqrt(2.0 - x);
    };
    for (long n : {1L, 2L, 7L, 100L}) {
        CHECK(stieltjes_integral_real(example2(n), hat) == doctest::Approx(-1.0).epsilon(1e-10));
    }

    // h == 1 integrates to the total mass
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        const PiecewiseBV g = random_bv(rng);
        const double mass = stieltjes_integral_real(g, [](double) { return 1.0; });
        CHECK(mass == doctest::Approx(g.limit_at_infinity()).epsilon(1e-12));
    }
}

TEST_CASE("variation inequalities and jordan identities on random functions") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> xs(-8.0, 8.0);
    for (int i = 0; i < 50; ++i) {
        const PiecewiseBV g = random_bv(rng);
        const JordanPair jp = hahn_jordan(g);
        CHECK(combine(1.0, jp.positive, -1.0, jp.negative) == g);
        const double norm = g.total_variation();
        for (int j = 0; j < 20; ++j) {
            const double x = xs(rng);
            const double var_x = g.variation(x);
            CHECK(std::abs(g.eval(x)) <= var_x + 1e-12);
            CHECK(var_x <= norm + 1e-12);
            CHECK(var_x ==
                  doctest::Approx(jp.positive.eval(x) + jp.negative.eval(x)).epsilon(1e-12));
        }
        CHECK(g.variation(1e9) == doctest::Approx(norm).epsilon(1e-12));
    }
}

TEST_CASE("stieltjes linearity") {
    std::mt19937_64 rng(3);
    auto h = [](double x) { return std::cos(x) + 0.1 * x; };
    for (int i = 0; i < 10; ++i) {
        const PiecewiseBV g = random_bv(rng);
        const PiecewiseBV k = random_bv(rng);
        const double a = 1.5, b = -0.75;
        const double lhs = stieltjes_integral_real(combine(a, g, b, k), h);
        const double rhs =
            a * stieltjes_integral_real(g, h) + b * stieltjes_integral_real(k, h);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}
