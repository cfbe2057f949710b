#pragma once

#include "bidiff/curves.hpp"
#include "bidiff/periods.hpp"

#include <Eigen/Dense>

namespace bidiff {

enum class KernelBase { Genus1Weierstrass, KleinHyperelliptic };

// How far the kernel has been pushed along base -> Bergman -> corrected.
enum class KernelStage { Raw, ANormalized, HodgeCorrected };

// Symmetric second-kind bidifferential
//   K(x,y) = base(x,y) + sum_{jk} M_{jk} u_j(x) u_k(y),
// where u_1..u_g is holomorphic_basis(curve) and M = correction is
// symmetric. The base has biresidue 1 and no residue term at the diagonal,
// so the 2-jet on the diagonal is stage independent.
struct Kernel {
    Curve curve;
    KernelBase base = KernelBase::KleinHyperelliptic;
    Eigen::MatrixXcd correction; // g x g symmetric
    KernelStage stage = KernelStage::Raw;
    Cplx g1_eta1; // cached quasi-period, Genus1Weierstrass only
};

// O = B - conj(tau)^T A for a slice's periods; zero iff the slice class
// lies in the antiholomorphic span (pure type (0,1)).
struct ObstructionVector {
    Eigen::VectorXcd O;
};

/// Closed-form base kernel: (wp(z-w) + eta1) dz dw on genus 1 (already
/// a-normalized), the Klein kernel
///   [2 y1 y2 + F(x1,x2)] / [4 (x1-x2)^2 y1 y2] dx1 dx2,
///   F(x1,x2) = sum_{k=0}^{g} x1^k x2^k (2 lambda_{2k} + lambda_{2k+1}(x1+x2)),
/// on hyperelliptic curves (stage Raw). The diagonal expansion is checked at
/// construction: biresidue 1 and vanishing residue term to 1e-8, else
/// ContractViolation.
Kernel base_kernel(const Curve& c);

/// Coefficient of the bidifferential in the chart (applied to both points).
/// Throws DiagonalPole at coinciding chart coordinates, ChartDomain on
/// chart/curve mismatches.
Cplx eval_kernel(const Kernel& k, const SurfacePoint& x, const SurfacePoint& y,
                 const Chart& ch = Chart{});

/// The one-form y -> K(x, y) as an integrable Differential (coefficient in
/// the curve's natural chart: FlatZ on genus 1, AffineX otherwise).
Differential kernel_slice(const Kernel& k, const SurfacePoint& x);

/// Adds the symmetric correction M' that kills all slice a-periods, turning
/// the base into the Bergman kernel. Solved as a g x g linear system from
/// base-slice a-periods at g generic sample points against pi_a. Throws
/// AsymmetricSolution if the solved M' fails symmetry by more than 1e-6;
/// below that it is symmetrized.
Kernel a_normalize(const Kernel& k, const PeriodData& pd);

/// The intrinsic corrected kernel: subtracts
///   pi * v(x)^T (Im tau)^{-1} v(y),
/// v = a-normalized basis, which is the unique symmetric holomorphic
/// correction making every slice class pure (0,1). Requires stage
/// ANormalized.
Kernel hodge_correct(const Kernel& bergman, const PeriodData& pd);

/// a- and b-periods of the slice y -> K(x, y) over cycle_basis(k.curve).
/// The pole at y = x must clear the cycle supports (else PoleOnPath).
PeriodVector slice_periods(const Kernel& k, const SurfacePoint& x, const PeriodData& pd,
                           const num::AdaptiveOptions& opt = {});

/// O = B - conj(tau)^T A.
ObstructionVector obstruction(const PeriodVector& pv, const PeriodData& pd);

/// Kernel with correction increased by the symmetric matrix M (the affine
/// family sharing the diagonal 2-jet). Throws AsymmetricInput.
Kernel perturb(const Kernel& k, const Eigen::MatrixXcd& M);

/// Linear response of the slice obstruction to a symmetric correction
/// perturbation, in closed form: for M = E_jk + E_kj (j < k) or E_jj,
/// delta O(x) = (tau - conj(tau)) pi_a^T M u(x). Rows: one obstruction
/// component per probe point (component index cycling mod g); columns: the
/// g(g+1)/2 symmetric unit perturbations ordered (1,1),(1,2),..,(g,g).
/// Injectivity of M -> delta O certifies uniqueness of the correction.
Eigen::MatrixXcd obstruction_response(const Kernel& k, const PeriodData& pd,
                                      const std::vector<SurfacePoint>& probes);

} // namespace bidiff
