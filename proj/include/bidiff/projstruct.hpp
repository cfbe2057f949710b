#pragma once

#include "bidiff/kernels.hpp"
#include "bidiff/special_functions.hpp"

#include <functional>
#include <vector>

namespace bidiff {

// Laurent data of a kernel restricted to the same-sheet diagonal in a chart:
//   K(x1, x2) = biresidue/t^2 + residue_term/t + finite_part + O(t),
// t = chart coordinate difference. Accepted kernels have biresidue 1 and
// residue_term 0; the finite part then transforms as a projective
// connection, and S = 6 * finite_part is our normalization of it.
struct DiagonalJet {
    Cplx biresidue;
    Cplx residue_term;
    Cplx finite_part;
    double err_estimate = 0.0;
};

// Projective-connection samples S(x) in one chart. Across a chart change
// x = f(w) the values obey S~(w) = S(f(w)) f'(w)^2 + Schwarzian(f)(w); the
// sign of the Schwarzian term is certified by expansion_identity_check.
struct ConnectionSample {
    Chart chart;
    std::vector<Cplx> points; // chart coordinates
    std::vector<Cplx> values; // S at each point
    std::vector<double> errors;
};

// Samples of a quadratic differential q (a difference of two projective
// connections): q~(w) = q(f(w)) f'(w)^2, no Schwarzian term.
struct QuadraticDifferentialSample {
    Chart chart;
    std::vector<Cplx> points;
    std::vector<Cplx> values;
};

/// Diagonal Laurent jet of the kernel at x in the given chart, extracted
/// from evaluations at offsets on circles of radius delta/2, delta, 2*delta
/// with Richardson extrapolation. The radius scales with the distance from
/// the base point to the nearest kernel singularity; a fixed radius would
/// either alias nearby branch-point structure or, if small, amplify the
/// rounding of x + t through the t^-2 pole (error ~ eps*|x|/delta^3).
/// Throws ChartDomain when x is within 1e-2 (relative) of a branch point or
/// outside the chart, IllConditionedFit when the error estimate exceeds
/// 1e-6.
DiagonalJet diagonal_jet(const Kernel& k, const Chart& ch, const SurfacePoint& x);

/// Schwarzian derivative f'''/f' - (3/2)(f''/f')^2 by circle stencils of
/// radius r around w (f must be analytic there). Throws CriticalPoint when
/// |f'(w)| < 1e-10.
Cplx schwarzian(const std::function<Cplx(Cplx)>& f, Cplx w, double r = 0.4);

/// Residual of the expansion identity
///   f'(x1) f'(x2) / (f(x1)-f(x2))^2 = 1/(x1-x2)^2 + Schwarzian(f)(x)/6 + O(t^2),
/// t = x1-x2 -> 0, measured by a cross-derivative stencil with arms scaled
/// by delta plus two Richardson levels. This identity fixes the sign of the
/// Schwarzian term in the connection cocycle. f must be analytic in a disk
/// of radius ~0.5 around x.
double expansion_identity_check(const std::function<Cplx(Cplx)>& f, Cplx x,
                                double delta = 0.1);

/// S = 6 * finite part of the kernel's diagonal jet at each point, all in
/// one chart. Verifies the 2-jet trivialization (biresidue 1, residue term
/// 0 to 1e-8) and throws ContractViolation otherwise.
ConnectionSample connection_from_kernel(const Kernel& k, const Chart& ch,
                                        const std::vector<SurfacePoint>& pts);

/// The uniformizing projective structure of C/(Z + tau Z): S = 0 in the
/// FlatZ chart (the plane is the universal cover).
ConnectionSample uniformization_genus1(const Modulus& m, const std::vector<Cplx>& pts);

/// Pointwise difference of two connection samples over the same chart and
/// points — a quadratic differential. Throws BadConfiguration on mismatch.
QuadraticDifferentialSample connection_difference(const ConnectionSample& s1,
                                                  const ConnectionSample& s2);

} // namespace bidiff
