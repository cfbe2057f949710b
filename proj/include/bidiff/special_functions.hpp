#pragma once

#include "bidiff/common.hpp"

namespace bidiff {

// Period ratio of the lattice Z + tau*Z.
struct Modulus {
    Cplx tau;

    explicit Modulus(Cplx t) : tau(t) {
        if (!(t.imag() > 0.0))
            throw BadModulus("Im(tau) must be positive, got tau = (" +
                             std::to_string(t.real()) + ", " + std::to_string(t.imag()) + ")");
    }
};

// Increments of the Weierstrass zeta function over the lattice generators:
// eta1 = zeta(z+1) - zeta(z), eta2 = zeta(z+tau) - zeta(z).
// Convention check: eta1*tau - eta2 = 2*pi*i (Legendre relation).
struct QuasiPeriods {
    Cplx eta1;
    Cplx eta2;
};

// theta1 and its first three z-derivatives, evaluated together because the
// Weierstrass functions need the logarithmic derivatives.
struct Theta1Values {
    Cplx t1, dz1, dz2, dz3;
};

/// Odd Jacobi theta function
///   theta1(z|tau) = 2 * sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z),
/// q = exp(i pi tau). The series is truncated once the next term falls below
/// 1e-16 relative to the accumulated magnitude (two consecutive small terms
/// required). Zeros exactly on the lattice Z + tau*Z.
Cplx theta1(Cplx z, const Modulus& m);

Theta1Values theta1_with_derivatives(Cplx z, const Modulus& m);

/// Weierstrass elliptic function for the lattice Z + tau*Z, computed from
/// the theta representation
///   wp(z) = -(d^2/dz^2) log theta1(z|tau) + theta1'''(0)/(3 theta1'(0)).
/// tau is reduced to the fundamental domain (|Re| <= 1/2, |tau| >= 1) and z
/// to the centered cell before evaluation.
Cplx weierstrass_p(Cplx z, const Modulus& m);

/// Weierstrass zeta function (zeta' = -wp), same lattice and reduction.
Cplx weierstrass_zeta(Cplx z, const Modulus& m);

/// eta1 = 2 zeta(1/2), eta2 = 2 zeta(tau/2), both from the theta logarithmic
/// derivative at the reduced modulus and transported back along the modular
/// transformation. Legendre residual |eta1 tau - eta2 - 2 pi i| < 1e-10.
QuasiPeriods quasi_periods(const Modulus& m);

/// Independent oracle for wp(z): Eisenstein summation of the regularized
/// lattice series sum' [1/(z-w)^2 - 1/w^2] taken row by row, with the inner
/// (horizontal) sums evaluated in closed form:
///   wp(z) = pi^2/sin^2(pi z) - pi^2/3
///         + sum_{0<|n|<=shells} [pi^2/sin^2(pi(z-n tau)) - pi^2/sin^2(pi n tau)].
/// Shares no code with the theta path. Requires shells >= 50.
Cplx lattice_sum_oracle(Cplx z, const Modulus& m, int shells);

} // namespace bidiff
