#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heightlab/fano.hpp"
#include "heightlab/growth.hpp"

#include <cmath>

using namespace heightlab;

namespace {

CountSeries synthetic_series(double c, double a, int steps) {
    CountSeries s;
    s.region = "synthetic";
    Rational B = 10;
    for (int k = 0; k < steps; ++k) {
        s.grid.push_back(B);
        s.counts.push_back(static_cast<u64>(std::llround(c * std::pow(to_double(B), a))));
        B *= 2;
    }
    return s;
}

const EnumStrategy kSolve{StrategyKind::SolveLast, 1};

} // namespace

TEST_CASE("fit recovers a noise-free power law to high precision") {
    // counts 7 B^2 are exact integers on this grid
    auto s = synthetic_series(7.0, 2.0, 8);
    auto fit = fit_growth(s, 0, 0);
    CHECK(std::fabs(fit.exponent - 2.0) < 1e-6);
    CHECK(std::fabs(fit.constant - 7.0) < 1e-4);
    CHECK(fit.residual_rms < 1e-9);
}

TEST_CASE("fit with the log factor recovers the exponent") {
    CountSeries s;
    Rational B = 64;
    for (int k = 0; k < 8; ++k) {
        double Bd = to_double(B);
        s.grid.push_back(B);
        s.counts.push_back(static_cast<u64>(std::llround(3.0 * Bd * std::log(Bd))));
        B *= 2;
    }
    auto fit = fit_growth(s, 1, 0);
    CHECK(std::fabs(fit.exponent - 1.0) < 1e-3);
    CHECK(std::fabs(fit.constant - 3.0) < 1e-2);
}

TEST_CASE("fit error conditions") {
    auto s = synthetic_series(7.0, 2.0, 5);
    CHECK_THROWS_AS(fit_growth(s, 0, 2), FitError); // 3 points left
    s.counts[3] = 0;
    CHECK_THROWS_AS(fit_growth(s, 0, 0), FitError);
    CHECK_THROWS_AS(fit_growth(synthetic_series(7, 2, 8), 2, 0), ParameterError);
}

TEST_CASE("zeta and the Schanuel reference") {
    CHECK(std::fabs(zeta(2.0) - 1.6449340668482264) < 1e-9);
    CHECK(std::fabs(zeta(3.0) - 1.2020569031595943) < 1e-9);
    CHECK(std::fabs(schanuel_reference(1, 1.0) - 1.2159) < 1e-4);
    CHECK_THROWS_AS(schanuel_reference(0, 10.0), ParameterError);
}

TEST_CASE("P^1 and P^2 counts track the Schanuel reference") {
    u64 c1 = count(projective_space(1), HeightSpec(1, 1), 1000, {});
    CHECK(std::fabs(static_cast<double>(c1) / schanuel_reference(1, 1000.0) - 1.0) < 0.03);
    u64 c2 = count(projective_space(2), HeightSpec(1, 1), 1000, {});
    CHECK(std::fabs(static_cast<double>(c2) / schanuel_reference(2, 1000.0) - 1.0) < 0.05);
}

TEST_CASE("P^2 growth exponent is 3 within 0.05") {
    auto series = count_series(projective_space(2), HeightSpec(1, 1),
                               geometric_grid(10, 2, 7), {});
    auto fit = fit_growth(series, 0, 2);
    CHECK(std::fabs(fit.exponent - 3.0) < 0.05);
}

TEST_CASE("fitted exponent is stable under drop_low changes") {
    auto series = count_series(projective_space(1), HeightSpec(1, 1),
                               geometric_grid(10, 2, 8), {});
    auto f1 = fit_growth(series, 0, 1);
    auto f2 = fit_growth(series, 0, 2);
    auto f3 = fit_growth(series, 0, 3);
    CHECK(std::fabs(f1.exponent - f2.exponent) < 0.05);
    CHECK(std::fabs(f3.exponent - f2.exponent) < 0.05);
}

TEST_CASE("Fermat line series fits exponent 1 under the anticanonical height") {
    auto L = fermat_plane(4, 3);
    auto series = subspace_series(L, HeightSpec(2, 1), geometric_grid(10, 2, 10));
    auto fit = fit_growth(series, 0, 2);
    CHECK(std::fabs(fit.exponent - 1.0) < 0.05);
}

TEST_CASE("parametrized curve exponents follow 2/(m e)") {
    // conic, m = 2, e = 1: exponent 1
    ParametrizedCurve conic{{Form::parse("x0^2", 2), Form::parse("x0*x1", 2),
                             Form::parse("x1^2", 2)}};
    auto cs = curve_series(conic, HeightSpec(1, 1), geometric_grid(10, 2, 10));
    CHECK(std::fabs(fit_growth(cs, 0, 2).exponent - 1.0) < 0.05);

    // twisted cubic, m = 3, e = 1: exponent 2/3
    ParametrizedCurve twisted{{Form::parse("x0^3", 2), Form::parse("x0^2*x1", 2),
                               Form::parse("x0*x1^2", 2), Form::parse("x1^3", 2)}};
    auto ts = curve_series(twisted, HeightSpec(1, 1), geometric_grid(64, 4, 6));
    CHECK(std::fabs(fit_growth(ts, 0, 1).exponent - 2.0 / 3.0) < 0.08);

    // line in the Fermat threefold under the e = 2 height: exponent 2/(1*2) = 1
    ParametrizedCurve line{{Form(2, 1, {}), Form::parse("x0", 2), Form::parse("x1", 2),
                            Form::parse("x0", 2), Form::parse("x1", 2)}};
    auto X = fermat_hypersurface(4, 3);
    for (const auto& f : X.forms()) CHECK(f.substitute_forms(line.components).is_zero());
    auto ls = curve_series(line, HeightSpec(2, 1), geometric_grid(10, 2, 10));
    CHECK(std::fabs(fit_growth(ls, 0, 2).exponent - 1.0) < 0.05);
}

TEST_CASE("saturation report on the Fermat cubic threefold with its line") {
    auto X = fermat_hypersurface(4, 3);
    auto L = fermat_plane(4, 3);
    auto grid = geometric_grid(10, 2, 7); // up to 640: a fast desk grid
    auto report = saturation_report(X, {{"line", Subvariety(L)}}, {},
                                    X.anticanonical_height(), grid, 1, kSolve);
    REQUIRE(report.strata.size() == 1);
    const auto& line = report.strata[0];
    CHECK(std::fabs(line.fit.exponent - 1.0) < 0.08);
    // partition: line + complement = total at every grid point
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(line.series.counts[i] + report.complement.series.counts[i] ==
              report.total.series.counts[i]);
    for (double s : line.shares) {
        CHECK(s > 0.0);
        CHECK(s <= 1.0);
    }
    CHECK(line.window_min > 0.0);
}

TEST_CASE("a line is not saturated in P^2: its share decays") {
    auto X = projective_space(2);
    LinearSubspace L({{0, 1, 0}, {0, 0, 1}});
    auto grid = geometric_grid(5, 2, 6); // to 160
    auto report = saturation_report(X, {{"line", Subvariety(L)}}, {}, HeightSpec(1, 1), grid, 1,
                                    {});
    const auto& line = report.strata[0];
    CHECK(std::fabs(line.fit.exponent - 2.0) < 0.1);
    CHECK(std::fabs(report.total.fit.exponent - 3.0) < 0.1);
    CHECK(line.shares.back() < 0.5 * line.shares.front());
}

TEST_CASE("saturation rejects subvarieties not contained in X") {
    auto X = fermat_hypersurface(4, 3);
    LinearSubspace wrong({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}});
    CHECK_THROWS_AS(saturation_report(X, {{"bad", Subvariety(wrong)}}, {},
                                      X.anticanonical_height(), geometric_grid(10, 2, 4), 1,
                                      kSolve),
                    NotContained);
}

TEST_CASE("lambda sweep: line series fixed, total series shrinks") {
    auto X = fermat_hypersurface(4, 3);
    auto L = fermat_plane(4, 3);
    auto grid = geometric_grid(10, 2, 7);
    auto r1 = saturation_report(X, {{"line", Subvariety(L)}}, {}, X.anticanonical_height(1),
                                grid, 1, kSolve);
    auto r10 = saturation_report(X, {{"line", Subvariety(L)}}, {}, X.anticanonical_height(10),
                                 grid, 1, kSolve);
    CHECK(r1.strata[0].series.counts == r10.strata[0].series.counts);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(r10.total.series.counts[i] <= r1.total.series.counts[i]);
    // excluded loci shrink the stratum
    auto r_excl = saturation_report(X, {{"line", Subvariety(L)}},
                                    {[](const ProjPoint& p) { return p.coords[1] == 0; }},
                                    X.anticanonical_height(1), grid, 1, kSolve);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(r_excl.strata[0].series.counts[i] <= r1.strata[0].series.counts[i]);
}

TEST_CASE("saturation report with a parametrized conic stratum") {
    // conic (u^2, uv, v^2) lies on the quadric x0 x2 = x1^2
    auto X = CompleteIntersection(2, {Form::parse("x0*x2 - x1^2", 3)});
    ParametrizedCurve conic{{Form::parse("x0^2", 2), Form::parse("x0*x1", 2),
                             Form::parse("x1^2", 2)}};
    auto grid = geometric_grid(5, 2, 6);
    auto report = saturation_report(X, {{"conic", Subvariety(conic)}}, {}, HeightSpec(1, 1),
                                    grid, 1, {});
    // the conic sweeps out the whole curve X here, so the complement is tiny
    CHECK(report.strata[0].series.counts.back() > 0);
    CHECK(report.complement.series.counts.back() <
          report.total.series.counts.back());
}
