#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heightlab/fano.hpp"
#include "heightlab/height.hpp"
#include "heightlab/polynomial.hpp"
#include "heightlab/projective.hpp"
#include "heightlab/variety.hpp"

#include <random>
#include <sstream>

using namespace heightlab;

TEST_CASE("normalize reduces gcd and fixes sign") {
    CHECK(normalize(std::vector<i64>{2, 4, 6}).coords == std::vector<i64>{1, 2, 3});
    CHECK(normalize(std::vector<i64>{0, -3, 0}).coords == std::vector<i64>{0, 1, 0});
    CHECK(normalize(std::vector<i64>{-2, 4}).coords == std::vector<i64>{1, -2});
    CHECK_THROWS_AS(normalize(std::vector<i64>{0, 0, 0}), InvalidPoint);
}

TEST_CASE("normalize is idempotent and scale invariant") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> coord(-50, 50);
    std::uniform_int_distribution<i64> scale(1, 20);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<i64> v(4);
        bool zero = true;
        for (auto& c : v) {
            c = coord(rng);
            zero = zero && c == 0;
        }
        if (zero) v[1] = 3;
        i64 c = scale(rng) * (rng() % 2 ? 1 : -1);
        std::vector<i64> scaled(v);
        for (auto& s : scaled) s *= c;
        auto n1 = normalize(v);
        CHECK(normalize(scaled) == n1);
        CHECK(normalize(n1.coords) == n1);
    }
}

TEST_CASE("form evaluation on fixed cases") {
    auto fermat = fermat_hypersurface(4, 3); // x0^3+x1^3+x2^3-x3^3-x4^3
    const Form& f = fermat.forms()[0];
    CHECK(f.evaluate(normalize(std::vector<i64>{0, 1, 1, 1, 1})) == 0);

    Form g = Form::parse("x0^2 + x1^2", 2);
    CHECK(g.evaluate(std::vector<i64>{3, 4}) == 25);

    auto ct = ct_quadrics();
    std::vector<i64> p{1, 2, 1, 2, 0, 0};
    CHECK(ct.forms()[0].evaluate(p) == 0);
    CHECK(ct.forms()[1].evaluate(p) == 0);

    CHECK_THROWS_AS(g.evaluate(std::vector<i64>{1, 2, 3}), DimensionError);
}

TEST_CASE("form evaluation is exactly homogeneous, including wide inputs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> coord(-9, 9);
    auto ct = ct_quadrics();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<i64> x(6);
        for (auto& c : x) c = coord(rng);
        i64 s = 1 + static_cast<i64>(rng() % 5);
        std::vector<i64> sx(x);
        for (auto& c : sx) c *= s;
        for (const auto& f : ct.forms())
            CHECK(f.evaluate(sx) == big_pow(BigInt(s), 2) * f.evaluate(x));
    }
    // wide path: coordinates beyond any 128-bit certificate
    Form cube = Form::parse("x0^3", 1);
    std::vector<i64> big{1000000000000LL};
    CHECK(cube.evaluate(big) == BigInt("1000000000000000000000000000000000000"));
    Form mixed = Form::parse("x0^3 - 2*x0*x1^2", 2);
    std::vector<i64> w{400000000000LL, -300000000000LL};
    BigInt a(400000000000LL), b(-300000000000LL);
    CHECK(mixed.evaluate(w) == a * a * a - 2 * a * b * b);
}

TEST_CASE("contains checks every form") {
    auto quad = CompleteIntersection(3, {Form::parse("x0^2 + x1^2 - x2^2 - x3^2", 4)});
    CHECK(quad.contains(normalize(std::vector<i64>{1, 0, 1, 0})));
    auto x2 = fermat_hypersurface(4, 3);
    CHECK(x2.contains(normalize(std::vector<i64>{1, 0, 0, 1, 0})));
    CHECK_FALSE(x2.contains(normalize(std::vector<i64>{1, 1, 1, 1, 1})));
}

TEST_CASE("heights: weighted sup norm powers, exact") {
    HeightSpec h2(2, 2);
    CHECK(height(h2, normalize(std::vector<i64>{1, 0, 0, 0, 0})) == Rational(4));
    HeightSpec h5(2, 5);
    CHECK(height(h5, normalize(std::vector<i64>{0, 1, 1, 2, 2})) == Rational(4));
    HeightSpec h1(1, 1);
    CHECK(height(h1, normalize(std::vector<i64>{3, -7, 2})) == Rational(7));

    // rational lambda
    HeightSpec hr(2, Rational(3, 2));
    CHECK(height(hr, normalize(std::vector<i64>{1, 0, 0})) == Rational(9, 4));
}

TEST_CASE("height is projectively well defined and lambda-restricted on x0=0") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<i64> coord(-40, 40);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<i64> v(5);
        bool zero = true;
        for (auto& c : v) {
            c = coord(rng);
            zero = zero && c == 0;
        }
        if (zero) v[2] = 1;
        i64 s = 1 + static_cast<i64>(rng() % 7);
        std::vector<i64> sv(v);
        for (auto& c : sv) c *= (rng() % 2 ? s : -s);
        // same scalar for all coordinates
        sv = v;
        i64 c0 = (rng() % 2 ? s : -s);
        for (auto& c : sv) c *= c0;
        HeightSpec h(2, Rational(7, 3));
        CHECK(height(h, normalize(v)) == height(h, normalize(sv)));

        v[0] = 0;
        if (std::all_of(v.begin(), v.end(), [](i64 t) { return t == 0; })) v[1] = 2;
        auto p = normalize(v);
        CHECK(height(HeightSpec(2, 1), p) == height(HeightSpec(2, 1000), p));
    }
}

TEST_CASE("height ratio bound for lambda >= 1") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<i64> coord(-30, 30);
    const Rational lambda(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<i64> v(4);
        bool zero = true;
        for (auto& c : v) {
            c = coord(rng);
            zero = zero && c == 0;
        }
        if (zero) v[0] = 1;
        auto p = normalize(v);
        Rational hl = height(HeightSpec(3, lambda), p);
        Rational h1 = height(HeightSpec(3, 1), p);
        CHECK(hl >= h1);
        CHECK(hl <= rational_pow(lambda, 3) * h1);
    }
}

TEST_CASE("anticanonical exponent") {
    CHECK(fermat_hypersurface(4, 3).anticanonical_exponent() == 2);
    CHECK(ct_quadrics().anticanonical_exponent() == 2);
    auto quad4 = CompleteIntersection(4, {Form::parse("x0^2+x1^2-x2^2-x3^2+x4^2", 5)});
    CHECK(quad4.anticanonical_exponent() == 3);
    auto quartic = CompleteIntersection(3, {Form::parse("x0^4+x1^4+x2^4+x3^4", 4)});
    CHECK_THROWS_AS(quartic.anticanonical_exponent(), NotFano);
}

TEST_CASE("form parser round trips and rejects junk") {
    Form f = Form::parse("x0^3 + x1^3 + x2^3 - x3^3 - x4^3", 5);
    CHECK(f.degree() == 3);
    CHECK(f.terms().size() == 5);
    Form again = Form::parse(f.str(), 5);
    CHECK(again.terms() == f.terms());

    Form g = Form::parse("2*x0*x1 - 2*x2*x3 - x5^2", 6);
    CHECK(g.degree() == 2);
    CHECK(g.terms().size() == 3);

    CHECK_THROWS_AS(Form::parse("x0^2 + x1", 2), ParseError);
    CHECK_THROWS_AS(Form::parse("x9", 2), ParseError);
    CHECK_THROWS_AS(Form::parse("", 2), ParseError);
    CHECK_THROWS_AS(Form::parse("x0 + + x1", 2), ParseError);
}

TEST_CASE("variety files round trip") {
    auto ct = ct_quadrics();
    std::stringstream ss;
    write_variety(ss, ct);
    auto back = read_variety(ss);
    CHECK(back.n() == 5);
    REQUIRE(back.num_forms() == 2);
    CHECK(back.forms()[0].terms() == ct.forms()[0].terms());
    CHECK(back.forms()[1].terms() == ct.forms()[1].terms());

    std::stringstream bad("n=2\nx0^2 + x1\n");
    CHECK_THROWS_AS(read_variety(bad), ParseError);
    std::stringstream nohdr("x0^2\n");
    CHECK_THROWS_AS(read_variety(nohdr), ParseError);
}

TEST_CASE("linear subspaces: rank, membership, containment") {
    CHECK_THROWS_AS(LinearSubspace({{1, 2, 3}, {2, 4, 6}}), DegenerateSubspace);
    auto line = ct_quadrics_line();
    CHECK(line.r() == 1);
    CHECK(line.contained_in(ct_quadrics()));
    CHECK(line.contains(normalize(std::vector<i64>{1, 2, 1, 2, 0, 0})));
    CHECK_FALSE(line.contains(normalize(std::vector<i64>{1, 2, 1, 2, 1, 0})));

    auto fl = fermat_plane(4, 3);
    CHECK(fl.r() == 1);
    CHECK(fl.contained_in(fermat_hypersurface(4, 3)));
}

TEST_CASE("builtin names resolve") {
    CHECK(builtin_variety("pn:2").n() == 2);
    CHECK(builtin_variety("fermat:4:3").num_forms() == 1);
    CHECK(builtin_variety("ct-quadrics").num_forms() == 2);
    CHECK_THROWS_AS(builtin_variety("nope"), ParameterError);
    CHECK_THROWS_AS(builtin_variety("paper-bundle"), ParameterError);
}
