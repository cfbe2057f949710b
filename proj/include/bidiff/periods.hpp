#pragma once

#include "bidiff/curves.hpp"
#include "bidiff/numerics.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace bidiff {

// One straight piece of an integration contour.
//  - Gap: segment between consecutive branch points, y continuous there.
//  - Cut: segment lying on a branch cut, integrated with a one-sided y.
//  - TorusLine: straight segment in the z-plane of an elliptic curve.
//  - Line: straight x-plane segment away from all cuts (y = sheet * y_plus).
// Gap and Cut segments end at branch points, where differentials of the form
// n(x)/y dx have inverse-square-root singularities; they are integrated with
// the Gauss-Chebyshev family, which absorbs exactly that endpoint behaviour.
// Cycles keep every boundary leg explicit (both sides of a cut, both
// sheets): legs that cancel for differentials odd in y do not cancel for
// general second-kind slices, which must integrate over the same basis.
struct PathSegment {
    enum class Kind { Gap, Cut, TorusLine, Line };
    Kind kind = Kind::Gap;
    Cplx x0, x1;
    int cut_index = -1; // Kind::Cut only
    int side = +1;      // boundary side of the cut (Kind::Cut only)
    int sheet = +1;     // y sign: y = sheet * (one-sided) y_plus
    double factor = 1.0; // direction and multiplicity
};

struct Cycle {
    std::string name;
    std::vector<PathSegment> segments;
};

// Row j = differential j; entries are its a- resp. b-periods.
struct PeriodData {
    Eigen::MatrixXcd pi_a, pi_b; // g x g, column k = cycle a_k resp. b_k
    Eigen::MatrixXcd tau;        // pi_a^{-1} pi_b, symmetric, Im positive definite
    Eigen::MatrixXcd normalizer; // pi_a^{-1}; rows give the a-normalized basis v_j
};

// All a- and b-periods of a single differential.
struct PeriodVector {
    Eigen::VectorXcd a, b;
};

/// Canonical homology basis a_1..a_g, b_1..b_g for the supported curves.
/// Hyperelliptic: a_i surrounds finite cut i; its contour is collapsed onto
/// the cut with one-sided boundary values of y (exact by shrinking the
/// surrounding loop). b_i runs from the right end of cut i to the start of
/// the infinite ray on sheet +1 and returns on sheet -1, which doubles the
/// one-sheet integral. Orientations give the intersection pairing
/// a_i . b_i = +1, certified by Im(tau) > 0. Elliptic: the z-segments
/// [0,1] and [0,tau].
std::vector<Cycle> cycle_basis(const Curve& c);

/// Integral of omega over the cycle. poles_x lists x-projections (z for
/// elliptic) of known singularities of omega; the path keeps a clearance of
/// 1e-2 * min root gap from them, else PoleOnPath.
Cplx integrate_over_cycle(const Curve& c, const Differential& omega, const Cycle& cycle,
                          const std::vector<Cplx>& poles_x = {},
                          const num::AdaptiveOptions& opt = {});

/// Period matrices of the given differentials (rows) over cycle_basis(c)
/// (columns), the normalized period matrix tau = pi_a^{-1} pi_b, and the
/// normalizing change of basis. Checks: pi_a well conditioned (else
/// SingularPiA), tau symmetric to 1e-8 (else ContractViolation), Im(tau)
/// positive definite (else SingularImTau).
PeriodData period_matrices(const Curve& c, const std::vector<Differential>& omegas,
                           const num::AdaptiveOptions& opt = {});

/// All periods of one differential over cycle_basis(c).
PeriodVector periods_of(const Curve& c, const Differential& omega,
                        const std::vector<Cplx>& poles_x = {},
                        const num::AdaptiveOptions& opt = {});

/// Topological cup pairing from periods: sum_i (A_i B'_i - B_i A'_i).
Cplx cup_product(const PeriodVector& w1, const PeriodVector& w2);

} // namespace bidiff
