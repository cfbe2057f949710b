#include <doctest.h>

#include "bidiff/numerics.hpp"
#include "bidiff/projstruct.hpp"

#include <cmath>

using namespace bidiff;

namespace {

double cdist(Cplx a, Cplx b) { return std::abs(a - b); }

const Curve& g2() {
    static const Curve c = make_hyperelliptic({0.0, 4.0, 0.0, -5.0, 0.0, 1.0});
    return c;
}

const PeriodData& g2_pd() {
    static const PeriodData pd = period_matrices(g2(), holomorphic_basis(g2()));
    return pd;
}

const Kernel& g2_bergman() {
    static const Kernel b = a_normalize(base_kernel(g2()), g2_pd());
    return b;
}

const Kernel& g2_eta() {
    static const Kernel e = hodge_correct(g2_bergman(), g2_pd());
    return e;
}

Kernel elliptic_eta(Cplx tau) {
    const Curve e = make_elliptic(tau);
    const PeriodData pd = period_matrices(e, holomorphic_basis(e));
    return hodge_correct(a_normalize(base_kernel(e), pd), pd);
}

// closed form of the genus-1 corrected connection in the flat chart
Cplx S_closed(Cplx tau) {
    return 6.0 * (quasi_periods(Modulus(tau)).eta1 - pi / tau.imag());
}

} // namespace

TEST_CASE("schwarzian closed forms") {
    const auto moebius = [](Cplx w) { return (2.0 * w + 1.0) / (w + 3.0); };
    CHECK(std::abs(schwarzian(moebius, Cplx(0.7))) < 1e-12);

    const auto ex = [](Cplx w) { return std::exp(w); };
    CHECK(cdist(schwarzian(ex, Cplx(0.0)), Cplx(-0.5)) < 1e-10);
    CHECK(cdist(schwarzian(ex, Cplx(0.3, -0.2)), Cplx(-0.5)) < 1e-10);

    const Cplx w(1.3, 0.4);
    const auto sq = [](Cplx w) { return w * w; };
    CHECK(cdist(schwarzian(sq, w, 0.3), -1.5 / (w * w)) < 1e-10);

    CHECK_THROWS_AS((void)schwarzian(sq, Cplx(0.0), 0.3), CriticalPoint);
}

TEST_CASE("schwarzian chain rule") {
    // S(f o g) = (S(f) o g) g'^2 + S(g)
    const auto f = [](Cplx w) { return std::exp(w); };
    const auto g = [](Cplx w) { return (w - 0.5) / (2.0 * w + 1.0); };
    const auto fg = [&](Cplx w) { return f(g(w)); };
    const Cplx w(0.4, 0.3);
    const Cplx gp = num::derivatives_123(g, w, 0.2).d1;
    const Cplx lhs = schwarzian(fg, w, 0.2);
    const Cplx rhs = schwarzian(f, g(w), 0.2) * gp * gp + schwarzian(g, w, 0.2);
    CHECK(cdist(lhs, rhs) < 1e-8);
}

TEST_CASE("expansion identity fixes the Schwarzian sign") {
    const auto moebius = [](Cplx w) { return (2.0 * w + 1.0) / (w + 3.0); };
    // Moebius maps satisfy the identity exactly with no O(t^2) tail, so a
    // wide stencil (pure roundoff, no truncation) resolves the zero sharply
    CHECK(expansion_identity_check(moebius, Cplx(0.7), 0.5) < 1e-12);
    CHECK(expansion_identity_check(moebius, Cplx(0.7)) < 1e-9);

    const auto ex = [](Cplx w) { return std::exp(w); };
    CHECK(expansion_identity_check(ex, Cplx(0.0)) < 1e-10);

    // inline extraction of the finite part at x = 0 for f = exp:
    // f'(x1)f'(x2)/(f(x1)-f(x2))^2 = 1/(4 sinh^2(t/2)) = 1/t^2 - 1/12 + O(t^2),
    // i.e. the finite part is S(exp)/6 = -1/12, minus sign included.
    const auto fp = [&](double t) {
        const Cplx x1(0.5 * t), x2(-0.5 * t);
        const Cplx df = std::exp(x1) - std::exp(x2);
        return std::exp(x1) * std::exp(x2) / (df * df) - 1.0 / Cplx(t * t);
    };
    const Cplx extracted = (4.0 * fp(0.02) - fp(0.04)) / 3.0;
    CHECK(cdist(extracted, Cplx(-1.0 / 12.0)) < 1e-9);

    const auto sq = [](Cplx w) { return w * w; };
    CHECK(expansion_identity_check(sq, Cplx(1.1)) < 1e-8);
    CHECK_THROWS_AS((void)expansion_identity_check(sq, Cplx(0.0)), CriticalPoint);
}

TEST_CASE("genus-1 connection: closed form and the tau = i vanishing") {
    for (const Cplx tau : {Cplx(0.0, 1.0), Cplx(0.0, 2.0), Cplx(0.3, 1.2)}) {
        const Kernel eta = elliptic_eta(tau);
        const DiagonalJet jet =
            diagonal_jet(eta, Chart{ChartKind::FlatZ, +1}, {Cplx(0.23, 0.31), 0.0});
        CHECK(cdist(jet.biresidue, 1.0) < 1e-8);
        CHECK(std::abs(jet.residue_term) < 1e-8);
        CHECK(jet.err_estimate < 1e-7);
        CHECK(cdist(6.0 * jet.finite_part, S_closed(tau)) < 1e-7);
    }
    // eta1(i) = pi makes the connection vanish at the square lattice
    CHECK(std::abs(S_closed(Cplx(0.0, 1.0))) < 1e-12);
    CHECK(std::abs(S_closed(Cplx(0.0, 2.0))) > 0.1);
}

TEST_CASE("torus connection is translation invariant") {
    const Kernel eta = elliptic_eta(Cplx(0.2, 1.1));
    std::vector<SurfacePoint> pts;
    for (int i = 0; i < 10; ++i)
        pts.push_back({Cplx(0.03 + 0.09 * i, 0.02 + 0.07 * i), 0.0});
    const ConnectionSample cs =
        connection_from_kernel(eta, Chart{ChartKind::FlatZ, +1}, pts);
    for (const Cplx v : cs.values) CHECK(cdist(v, cs.values[0]) < 1e-8);
}

TEST_CASE("Bergman and corrected kernels differ by the closed-form quadratic term") {
    const Cplx x0(0.4, 1.3);
    const SurfacePoint p{x0, y_plus(g2(), x0)};
    const DiagonalJet jb = diagonal_jet(g2_bergman(), Chart{}, p);
    const DiagonalJet je = diagonal_jet(g2_eta(), Chart{}, p);
    CHECK(jb.err_estimate < 1e-7);
    CHECK(je.err_estimate < 1e-7);

    Eigen::VectorXcd u(2);
    for (int j = 0; j < 2; ++j)
        u(j) = eval_differential(g2(), holomorphic_basis(g2())[j], p);
    const Eigen::VectorXcd v = g2_pd().normalizer * u;
    const Eigen::MatrixXcd iminv = g2_pd().tau.imag().inverse().cast<Cplx>();
    const Cplx quad = (v.transpose() * (iminv * v))(0);
    CHECK(cdist(jb.finite_part - je.finite_part, pi * quad) < 1e-6);
}

TEST_CASE("connection cocycle across the AffineX/InverseX overlap") {
    const Cplx x0(5.0, 0.0);
    const std::vector<SurfacePoint> pts{{x0, y_plus(g2(), x0)}};
    const ConnectionSample aff = connection_from_kernel(g2_eta(), Chart{}, pts);
    const ConnectionSample inv =
        connection_from_kernel(g2_eta(), Chart{ChartKind::InverseX, +1}, pts);

    // x = f(xi) = 1/xi; Moebius, so the Schwarzian term is zero, but feed it
    // through the same formula the invariant states.
    const auto f = [](Cplx w) { return 1.0 / w; };
    const Cplx xi = 1.0 / x0;
    const Cplx fp = num::derivatives_123(f, xi, 0.05).d1;
    const Cplx expect = aff.values[0] * fp * fp + schwarzian(f, xi, 0.05);
    CHECK(cdist(inv.values[0], expect) < 1e-6 * (1.0 + std::abs(inv.values[0])));
}

TEST_CASE("kernel pullback through a non-Moebius chart obeys the cocycle") {
    // Pull the genus-1 corrected kernel back through z = g(w) and extract
    // the jet in w directly; this pins the + sign of the Schwarzian term at
    // kernel level, where chart transitions of the curve atlas (all Moebius)
    // cannot see it.
    const Cplx tau(0.3, 1.2);
    const Kernel eta = elliptic_eta(tau);
    const auto g = [](Cplx w) { return 0.3 * w + 0.05 * w * w; };
    const auto gp = [](Cplx w) { return 0.3 + 0.1 * w; };
    const Cplx w0(0.4, -0.2);

    const auto pulled = [&](Cplx t) {
        const Cplx w1 = w0 + t;
        return eval_kernel(eta, {g(w1), 0.0}, {g(w0), 0.0}, Chart{ChartKind::FlatZ, +1}) *
               gp(w1) * gp(w0);
    };
    // the nearest other singularity of t -> pulled(t) is several units away
    // (lattice translates of the diagonal, and the critical point of g), so
    // a generous radius keeps the pole's rounding noise negligible
    const num::LaurentJet jet = num::laurent_jet(pulled, 0.05);
    CHECK(cdist(jet.a, 1.0) < 1e-8);
    CHECK(std::abs(jet.b) < 1e-8);

    const Cplx S_flat = S_closed(tau);
    const Cplx S_g = schwarzian(g, w0, 0.3);
    CHECK(cdist(6.0 * jet.c, S_flat * gp(w0) * gp(w0) + S_g) < 1e-7);
}

TEST_CASE("connection differences transform as quadratic differentials") {
    const Cplx x0(5.0, 0.0);
    const std::vector<SurfacePoint> pts{{x0, y_plus(g2(), x0)}};
    const auto diff_in = [&](const Chart& ch) {
        return connection_difference(connection_from_kernel(g2_bergman(), ch, pts),
                                     connection_from_kernel(g2_eta(), ch, pts));
    };
    const QuadraticDifferentialSample qa = diff_in(Chart{});
    const QuadraticDifferentialSample qi = diff_in(Chart{ChartKind::InverseX, +1});
    const Cplx fp = -x0 * x0; // dx/dxi at xi = 1/x0
    CHECK(cdist(qi.values[0], qa.values[0] * fp * fp) <
          1e-6 * (1.0 + std::abs(qi.values[0])));
}

TEST_CASE("uniformizing structure of the torus and the isolated coincidence") {
    const std::vector<Cplx> pts{Cplx(0.2, 0.1), Cplx(0.5, 0.4)};
    const ConnectionSample flat = uniformization_genus1(Modulus(Cplx(0.0, 2.0)), pts);
    CHECK(flat.values[0] == Cplx(0.0));
    CHECK(flat.values[1] == Cplx(0.0));

    // tau = 2i: the corrected structure differs from the uniformizing one
    CHECK(std::abs(S_closed(Cplx(0.0, 2.0)) - 0.0) > 0.1);
    // tau = i: they coincide...
    CHECK(std::abs(S_closed(Cplx(0.0, 1.0)) - 0.0) < 1e-12);
    // ...but only there: neighbors in both directions are nonzero
    CHECK(std::abs(S_closed(Cplx(0.05, 1.0))) > 1e-2);
    CHECK(std::abs(S_closed(Cplx(0.0, 1.05))) > 1e-2);
    CHECK(std::abs(S_closed(Cplx(-0.04, 0.97))) > 1e-2);
}

TEST_CASE("jet extraction error paths") {
    // too close to a branch point
    const Cplx bad(1.0 + 1e-3, 0.0);
    CHECK_THROWS_AS(
        (void)diagonal_jet(g2_eta(), Chart{}, SurfacePoint{bad, y_plus(g2(), bad)}),
        ChartDomain);
    // chart/kind mismatches
    CHECK_THROWS_AS((void)diagonal_jet(g2_eta(), Chart{ChartKind::FlatZ, +1},
                                       SurfacePoint{Cplx(0.4, 1.3), 0.0}),
                    ChartDomain);
    const Kernel eta1k = elliptic_eta(Cplx(0.0, 1.0));
    CHECK_THROWS_AS(
        (void)diagonal_jet(eta1k, Chart{}, SurfacePoint{Cplx(0.2, 0.3), 0.0}),
        ChartDomain);
    // InverseX refuses the neighborhood of x = 0 (xi = infinity)
    const Cplx tiny(0.05, 0.0);
    CHECK_THROWS_AS((void)diagonal_jet(g2_eta(), Chart{ChartKind::InverseX, +1},
                                       SurfacePoint{tiny, y_plus(g2(), tiny)}),
                    ChartDomain);

    // mismatched samples cannot be subtracted
    ConnectionSample a, b;
    a.chart = Chart{};
    b.chart = Chart{ChartKind::InverseX, +1};
    a.points = {Cplx(1.0)};
    b.points = {Cplx(1.0)};
    a.values = {Cplx(0.0)};
    b.values = {Cplx(0.0)};
    CHECK_THROWS_AS((void)connection_difference(a, b), BadConfiguration);
}
