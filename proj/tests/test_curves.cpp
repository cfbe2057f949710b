#include <doctest.h>

#include "bidiff/curves.hpp"

#include <cmath>
#include <random>

using namespace bidiff;

namespace {

double cdist(Cplx a, Cplx b) { return std::abs(a - b); }

// y^2 = x^5 - 5x^3 + 4x = x(x^2-1)(x^2-4), genus 2.
Curve genus2() { return make_hyperelliptic({0.0, 4.0, 0.0, -5.0, 0.0, 1.0}); }

// y^2 = x(x^2-1)(x^2-4)(x^2-9), genus 3.
Curve genus3() {
    return make_hyperelliptic({0.0, -36.0, 0.0, 49.0, 0.0, -14.0, 0.0, 1.0});
}

} // namespace

TEST_CASE("genus-2 model: roots, cuts, and scale data") {
    const Curve c = genus2();
    REQUIRE(c.genus == 2);
    REQUIRE(c.roots.size() == 5);
    const double expect[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
    for (int i = 0; i < 5; ++i) CHECK(cdist(c.roots[i], Cplx(expect[i])) < 1e-12);
    REQUIRE(c.cuts.size() == 2);
    CHECK(cdist(c.cuts[0].a, Cplx(-2.0)) < 1e-12);
    CHECK(cdist(c.cuts[0].b, Cplx(-1.0)) < 1e-12);
    CHECK(cdist(c.cuts[1].a, Cplx(0.0)) < 1e-12);
    CHECK(cdist(c.cuts[1].b, Cplx(1.0)) < 1e-12);
    CHECK(cdist(c.ray_start, Cplx(2.0)) < 1e-12);
    CHECK(c.min_gap == doctest::Approx(1.0));
    CHECK(c.scale == doctest::Approx(2.0));
}

TEST_CASE("genus-3 model comes out with interleaved cuts") {
    const Curve c = genus3();
    REQUIRE(c.genus == 3);
    REQUIRE(c.cuts.size() == 3);
    CHECK(cdist(c.cuts[0].a, Cplx(-3.0)) < 1e-11);
    CHECK(cdist(c.cuts[1].a, Cplx(-1.0)) < 1e-11);
    CHECK(cdist(c.cuts[2].b, Cplx(2.0)) < 1e-11);
    CHECK(cdist(c.ray_start, Cplx(3.0)) < 1e-11);
}

TEST_CASE("sheet +1 is the principal branch right of the last branch point") {
    const Curve c = genus2();
    const double y3 = std::sqrt(120.0); // P(3) = 243 - 135 + 12
    CHECK(cdist(point_on_sheet(c, Cplx(3.0, 0.0), +1).y, Cplx(y3)) < 1e-12);
    CHECK(cdist(point_on_sheet(c, Cplx(3.0, 0.0), -1).y, Cplx(-y3)) < 1e-12);
    CHECK(cdist(y_on_ray(c, 1.0, +1), Cplx(y3)) < 1e-12);
    CHECK(cdist(y_on_ray(c, 1.0, -1), Cplx(-y3)) < 1e-12);
}

TEST_CASE("y_plus squares to P off the cuts") {
    const Curve c = genus2();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.05, 2.0);
    for (int k = 0; k < 40; ++k) {
        const double s = (k % 2 == 0) ? 1.0 : -1.0;
        const Cplx x(re(rng), s * im(rng));
        const Cplx y = y_plus(c, x);
        const Cplx p = polyval(c.coeffs, x);
        CHECK(cdist(y * y, p) < 1e-11 * (1.0 + std::abs(p)));
    }
}

TEST_CASE("cut boundary values: opposite sides negate, upper side is continuous") {
    const Curve c = genus2();
    // On the cut [0,1]: P(0.5) = 1.40625 > 0 and the upper-side y is real.
    const double p_half = 1.40625;
    const Cplx up = y_on_cut(c, 1, 0.0, +1);
    const Cplx lo = y_on_cut(c, 1, 0.0, -1);
    CHECK(cdist(up, Cplx(-std::sqrt(p_half))) < 1e-12);
    CHECK(cdist(up, -lo) < 1e-13);
    CHECK(cdist(y_plus(c, Cplx(0.5, 0.0)), up) < 1e-13);
    CHECK(cdist(y_plus(c, Cplx(0.5, -0.0)), lo) < 1e-13);
    CHECK(cdist(y_plus(c, Cplx(0.5, 1e-9)), up) < 1e-6);
    CHECK(cdist(y_plus(c, Cplx(0.5, -1e-9)), lo) < 1e-6);
    // Same story on the ray.
    CHECK(cdist(y_on_ray(c, 0.7, +1), y_plus(c, Cplx(2.7, 1e-10))) < 1e-6);
    CHECK(cdist(y_on_ray(c, 0.7, +1), -y_on_ray(c, 0.7, -1)) < 1e-13);
    // In a gap there is no jump at all.
    CHECK(cdist(y_plus(c, Cplx(1.5, 1e-9)), y_plus(c, Cplx(1.5, -1e-9))) < 1e-6);
    CHECK(cdist(y_plus(c, Cplx(1.5, 0.0)), y_plus(c, Cplx(1.5, -0.0))) < 1e-13);
}

TEST_CASE("boundary side selection holds along the whole cut") {
    // Regression: near the cut ends (0.7 < |t| < 1) the product form of the
    // per-cut branch factor sits on its own branch cut, where complex
    // division used to destroy the signed zero that selects the side.
    const Curve c = genus2();
    for (int cut : {0, 1})
        for (double t : {-0.999, -0.95, -0.8, -0.5, 0.0, 0.5, 0.8, 0.95, 0.999})
            for (int side : {+1, -1}) {
                const CutSegment& s = c.cuts[cut];
                const Cplx x = 0.5 * (s.a + s.b) + t * 0.5 * (s.b - s.a);
                const Cplx limit = y_plus(c, Cplx(x.real(), side * 1e-13));
                CAPTURE(cut);
                CAPTURE(t);
                CAPTURE(side);
                CHECK(cdist(y_on_cut(c, cut, t, side), limit) < 1e-6);
                CHECK(cdist(y_plus(c, Cplx(x.real(), side > 0 ? 0.0 : -0.0)), limit) <
                      1e-6);
            }
}

TEST_CASE("sheet classification round-trips") {
    const Curve c = genus2();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(-2.5, 2.5), im(0.1, 1.5);
    for (int k = 0; k < 20; ++k) {
        const Cplx x(re(rng), (k % 2 ? -1.0 : 1.0) * im(rng));
        CHECK(sheet_of(c, point_on_sheet(c, x, +1)) == 1);
        CHECK(sheet_of(c, point_on_sheet(c, x, -1)) == -1);
    }
}

TEST_CASE("continue_y follows the sheet through the ray cut") {
    const Curve c = genus2();
    const SurfacePoint base = point_on_sheet(c, Cplx(3.0, 0.0), +1);
    // Staying on the upper side reproduces y_plus...
    CHECK(cdist(continue_y(c, Cplx(3.3, 0.0), base), y_plus(c, Cplx(3.3, 0.0))) < 1e-12);
    CHECK(cdist(continue_y(c, Cplx(3.0, 0.4), base), y_plus(c, Cplx(3.0, 0.4))) < 1e-12);
    // ...but crossing the ray keeps following the same analytic branch, which
    // is minus the cut-respecting y_plus there.
    CHECK(cdist(continue_y(c, Cplx(3.0, -0.4), base), -y_plus(c, Cplx(3.0, -0.4))) < 1e-12);
    CHECK_THROWS_AS(continue_y(c, Cplx(-3.0, 0.0), base), ChartDomain);
}

TEST_CASE("holomorphic basis evaluation in both x-charts") {
    const Curve c = genus2();
    const auto basis = holomorphic_basis(c);
    REQUIRE(basis.size() == 2);
    const SurfacePoint p = point_on_sheet(c, Cplx(3.0, 0.0), +1);
    const double y3 = std::sqrt(120.0);
    CHECK(cdist(eval_differential(c, basis[0], p), Cplx(1.0 / y3)) < 1e-12);
    CHECK(cdist(eval_differential(c, basis[1], p), Cplx(3.0 / y3)) < 1e-12);
    const Chart inv{ChartKind::InverseX, +1};
    CHECK(cdist(eval_differential(c, basis[0], p, inv), Cplx(-9.0 / y3)) < 1e-12);

    const Curve e = make_elliptic(Cplx(0.0, 1.0));
    const auto ebasis = holomorphic_basis(e);
    REQUIRE(ebasis.size() == 1);
    CHECK(cdist(eval_differential(e, ebasis[0], SurfacePoint{Cplx(0.2, 0.1), 0.0},
                                  Chart{ChartKind::FlatZ, +1}),
                Cplx(1.0)) < 1e-15);
}

TEST_CASE("chart derivatives compose to the identity") {
    const Curve c = genus2();
    const Chart aff{ChartKind::AffineX, +1}, inv{ChartKind::InverseX, +1};
    const Cplx x(2.0, 0.5);
    const Cplx dxi = chart_derivative(c, aff, inv, x);
    CHECK(cdist(dxi, -1.0 / (x * x)) < 1e-15);
    CHECK(cdist(dxi * chart_derivative(c, inv, aff, x), Cplx(1.0)) < 1e-15);
    CHECK(cdist(chart_derivative(c, aff, aff, x), Cplx(1.0)) < 1e-15);
}

TEST_CASE("curve construction rejects degenerate input") {
    CHECK_THROWS_AS(make_hyperelliptic({1.0, 0.0, 0.0, 0.0, 1.0}), DegenerateCurve); // even
    CHECK_THROWS_AS(make_hyperelliptic({0.0, -1.0, 0.0, 1.0}), DegenerateCurve); // genus 1
    // x^3 (x-1)^2: double root at 1.
    CHECK_THROWS_AS(make_hyperelliptic({0.0, 0.0, 0.0, 1.0, -2.0, 1.0}), DegenerateCurve);
    CHECK_THROWS_AS(make_elliptic(Cplx(0.3, -1.0)), BadModulus);
}

TEST_CASE("chart/kind mismatches throw ChartDomain") {
    const Curve c = genus2();
    const Curve e = make_elliptic(Cplx(0.0, 1.0));
    const auto basis = holomorphic_basis(c);
    const SurfacePoint p = point_on_sheet(c, Cplx(3.0, 0.0), +1);
    CHECK_THROWS_AS(eval_differential(c, basis[0], p, Chart{ChartKind::FlatZ, +1}),
                    ChartDomain);
    CHECK_THROWS_AS(
        eval_differential(e, holomorphic_basis(e)[0], SurfacePoint{Cplx(0.1, 0.1), 0.0},
                          Chart{ChartKind::AffineX, +1}),
        ChartDomain);
    CHECK_THROWS_AS(chart_derivative(e, Chart{ChartKind::AffineX, +1},
                                     Chart{ChartKind::InverseX, +1}, Cplx(2.0)),
                    ChartDomain);
    CHECK_THROWS_AS(y_plus(e, Cplx(0.5, 0.5)), ChartDomain);
}
