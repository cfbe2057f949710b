#include <doctest.h>

#include "bidiff/curves.hpp"
#include "bidiff/periods.hpp"

#include <cmath>
#include <complex>

using namespace bidiff;

namespace {

Curve genus2() { return make_hyperelliptic({0.0, 4.0, 0.0, -5.0, 0.0, 1.0}); }

Curve genus3() {
    // y^2 = x (x^2-1)(x^2-4)(x^2-9) = x^7 - 14 x^5 + 49 x^3 - 36 x
    return make_hyperelliptic({0.0, -36.0, 0.0, 49.0, 0.0, -14.0, 0.0, 1.0});
}

// Reference periods for y^2 = x^5 - 5x^3 + 4x, frozen from the independent
// 40-digit computation in tests/oracles/gen_periods_reference.py (mpmath,
// explicit real-axis branch values, trig-substitution quadrature).
const Cplx PA11{1.82697878174516166110242, 0.0};
const Cplx PA12{-2.749029499696190113760424, 0.0};
const Cplx PA21{-2.583738171311882386748351, 0.0};
const Cplx PA22{-1.303976630522193847208396, 0.0};
const Cplx PB11{0.0, 0.9220507179510284526580047};
const Cplx PB12{0.0, -1.82697878174516166110242};
const Cplx PB21{0.0, -3.887714801834076233956747};
const Cplx PB22{0.0, -2.583738171311882386748351};
const Cplx TAU11{0.0, 1.25352000707922034741366};
const Cplx TAU12{0.0, 0.4976678997540580727852637};
const Cplx TAU22{0.0, 0.9953357995081161455705275};

} // namespace

TEST_CASE("cycle basis shape") {
    const Curve c = genus2();
    const auto cycles = cycle_basis(c);
    REQUIRE(cycles.size() == 4);
    CHECK(cycles[0].name == "a1");
    CHECK(cycles[1].name == "a2");
    CHECK(cycles[2].name == "b1");
    CHECK(cycles[3].name == "b2");
    CHECK(cycles[0].segments.size() == 2); // two boundary sides of cut 1
    CHECK(cycles[2].segments.size() == 6); // gap, middle cut, gap, two legs each
    CHECK(cycles[3].segments.size() == 2); // single gap, two legs

    const Curve e = make_elliptic(Cplx(0.25, 1.5));
    const auto ec = cycle_basis(e);
    REQUIRE(ec.size() == 2);
    CHECK(ec[0].segments[0].kind == PathSegment::Kind::TorusLine);
    CHECK(ec[1].segments[0].x1 == e.tau);
}

TEST_CASE("elliptic periods are 1 and tau") {
    const Cplx tau(0.3, 1.2);
    const Curve e = make_elliptic(tau);
    const auto basis = holomorphic_basis(e);
    REQUIRE(basis.size() == 1);
    const PeriodVector pv = periods_of(e, basis[0]);
    CHECK(std::abs(pv.a(0) - 1.0) < 1e-12);
    CHECK(std::abs(pv.b(0) - tau) < 1e-12);

    const PeriodData pd = period_matrices(e, basis);
    CHECK(std::abs(pd.tau(0, 0) - tau) < 1e-12);
    CHECK(std::abs(pd.normalizer(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("genus-2 period matrices match the frozen reference") {
    const Curve c = genus2();
    const PeriodData pd = period_matrices(c, holomorphic_basis(c));

    CHECK(std::abs(pd.pi_a(0, 0) - PA11) < 1e-10);
    CHECK(std::abs(pd.pi_a(0, 1) - PA12) < 1e-10);
    CHECK(std::abs(pd.pi_a(1, 0) - PA21) < 1e-10);
    CHECK(std::abs(pd.pi_a(1, 1) - PA22) < 1e-10);

    CHECK(std::abs(pd.pi_b(0, 0) - PB11) < 1e-10);
    CHECK(std::abs(pd.pi_b(0, 1) - PB12) < 1e-10);
    CHECK(std::abs(pd.pi_b(1, 0) - PB21) < 1e-10);
    CHECK(std::abs(pd.pi_b(1, 1) - PB22) < 1e-10);

    CHECK(std::abs(pd.tau(0, 0) - TAU11) < 1e-10);
    CHECK(std::abs(pd.tau(0, 1) - TAU12) < 1e-10);
    CHECK(std::abs(pd.tau(1, 0) - TAU12) < 1e-10);
    CHECK(std::abs(pd.tau(1, 1) - TAU22) < 1e-10);

    // normalizer * pi_a = identity
    const Eigen::MatrixXcd id = pd.normalizer * pd.pi_a;
    CHECK((id - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("genus-3 period matrix is symmetric with positive definite Im") {
    const Curve c = genus3();
    const PeriodData pd = period_matrices(c, holomorphic_basis(c));
    CHECK((pd.tau - pd.tau.transpose()).norm() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(pd.tau.imag());
    CHECK(eig.eigenvalues()(0) > 0.0);
    // real-branch curves with this cut system have purely imaginary tau
    CHECK(pd.tau.real().norm() < 1e-9);
}

TEST_CASE("holomorphic cup products vanish") {
    const Curve c = genus2();
    const auto basis = holomorphic_basis(c);
    std::vector<PeriodVector> pvs;
    for (const auto& w : basis) pvs.push_back(periods_of(c, w));
    for (const auto& p1 : pvs)
        for (const auto& p2 : pvs) CHECK(std::abs(cup_product(p1, p2)) < 1e-9);
}

TEST_CASE("contractible rectangle integrates to zero") {
    const Curve c = genus2();
    const auto basis = holomorphic_basis(c);
    const Cplx k0(0.5, 1.0), k1(1.5, 1.0), k2(1.5, 2.0), k3(0.5, 2.0);
    Cycle loop{"rect",
               {PathSegment{PathSegment::Kind::Line, k0, k1, -1, +1, +1, 1.0},
                PathSegment{PathSegment::Kind::Line, k1, k2, -1, +1, +1, 1.0},
                PathSegment{PathSegment::Kind::Line, k2, k3, -1, +1, +1, 1.0},
                PathSegment{PathSegment::Kind::Line, k3, k0, -1, +1, +1, 1.0}}};
    for (const auto& w : basis)
        CHECK(std::abs(integrate_over_cycle(c, w, loop)) < 1e-11);
}

TEST_CASE("pole clearance guards the contour") {
    const Curve c = genus2();
    const auto basis = holomorphic_basis(c);
    const auto cycles = cycle_basis(c);
    // 0.5 sits on cut 2 ([0,1]); a2 passes through it, a1 stays far away.
    CHECK_THROWS_AS((void)integrate_over_cycle(c, basis[0], cycles[1], {Cplx(0.5, 0.0)}),
                    PoleOnPath);
    CHECK_NOTHROW((void)integrate_over_cycle(c, basis[0], cycles[0], {Cplx(0.5, 0.0)}));

    const Curve e = make_elliptic(Cplx(0.0, 1.0));
    const auto ec = cycle_basis(e);
    const auto eb = holomorphic_basis(e);
    // lattice-translated pole still hits the [0,1] contour on the torus
    CHECK_THROWS_AS((void)integrate_over_cycle(e, eb[0], ec[0], {Cplx(0.5, 1.0)}),
                    PoleOnPath);
    CHECK_NOTHROW((void)integrate_over_cycle(e, eb[0], ec[0], {Cplx(0.5, 0.5)}));
}

TEST_CASE("period matrix error conditions") {
    const Curve c = genus2();
    const auto basis = holomorphic_basis(c);
    CHECK_THROWS_AS((void)period_matrices(c, {basis[0]}), BadConfiguration);
    // two copies of the same differential make pi_a rank deficient
    CHECK_THROWS_AS((void)period_matrices(c, {basis[0], basis[0]}), SingularPiA);

    PeriodVector bad;
    bad.a.resize(2);
    bad.b.resize(1);
    PeriodVector good;
    good.a.resize(2);
    good.b.resize(2);
    CHECK_THROWS_AS((void)cup_product(bad, good), BadConfiguration);
}
