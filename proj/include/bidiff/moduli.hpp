#pragma once

#include "bidiff/projstruct.hpp"

#include <vector>

namespace bidiff {

/// One grid point of a genus-1 moduli scan: the flat-chart connection
/// coefficient c of the corrected kernel, its finite-difference
/// antiholomorphic derivative, and kappa = dbar_c * (Im tau)^2 (which the
/// scan shows to be the constant 3*pi*i, i.e. dbar of the section is a
/// fixed multiple of the invariant density (Im tau)^{-2}).
struct ModuliSample {
    Cplx tau;
    Cplx c;
    Cplx dbar_c;
    Cplx kappa;
    /// relative gap between the extrapolated derivative and the finer of
    /// the two one-step estimates it was built from
    double richardson_residual = 0.0;
};

/// Reference density of the invariant metric on the genus-1 moduli
/// parameter: (Im tau)^{-2}, positive on the upper half-plane.
struct SiegelReference {
    double density(Cplx tau) const;
};

/// Connection coefficient c(tau) of the corrected kernel in the flat chart,
/// computed through the full kernel pipeline (periods, a-normalization,
/// Hodge correction, diagonal jet) and cross-checked against the closed
/// form 6*(eta1(tau) - pi/Im tau); throws ContractViolation on mismatch.
Cplx eta_coefficient_genus1(Cplx tau);

/// Finite-difference dbar of c over a grid of moduli. At each grid point
/// the cross stencil
///   dc/dtaubar ~ [ (c(t+h) - c(t-h)) + i (c(t+ih) - c(t-ih)) ] / (4h)
/// is evaluated at steps h and h/2 and Richardson-extrapolated; the same
/// samples give the holomorphic derivative, which is checked finite.
/// Requires 0 < h <= 1e-3 and a grid in the upper half-plane; throws
/// StepTooLarge when the two estimates are not Richardson-consistent.
std::vector<ModuliSample> dbar_scan(const std::vector<Cplx>& tau_grid, double h);

/// A one-complex-parameter deformation of a hyperelliptic curve: the
/// polynomial coefficient lambda_{coeff_index} moves by eps * direction,
/// |eps| <= magnitude. A circle path samples eps on a full circle and can
/// isolate the antiholomorphic derivative; a segment path (circle = false)
/// walks eps through real multiples of direction only, which cannot.
struct PerturbationPath {
    int coeff_index = 0;
    Cplx direction{1.0, 0.0};
    double magnitude = 1e-3;
    bool circle = true;
};

struct TracePoint {
    Cplx eps;
    Cplx connection; // flat AffineX connection coefficient at the tracked point
};

struct Genus2Trace {
    std::vector<TracePoint> samples;
    Cplx dbar;                        // estimate of d(connection)/d(eps-bar)
    double richardson_residual = 0.0; // relative radius-r vs radius-r/2 gap
    bool inconclusive = false;        // true when the path cannot isolate dbar
};

/// Trace the connection coefficient of the corrected kernel at a tracked
/// base point while one polynomial coefficient moves along a small path,
/// and report a finite-difference antiholomorphic derivative in the path
/// parameter. Circle paths use a Fourier projection at radii m and m/2
/// with Richardson extrapolation; segment paths report the directional
/// derivative with the inconclusive flag set (a real path cannot separate
/// the holomorphic and antiholomorphic parts). Throws
/// ContourTopologyChanged when a perturbed curve's branch points no longer
/// match the base arrangement.
Genus2Trace genus2_section_trace(const Curve& base, const PerturbationPath& path,
                                 int steps);

} // namespace bidiff
