#pragma once

#include "bidiff/common.hpp"

#include <functional>
#include <vector>

namespace bidiff {

enum class CurveKind { Elliptic, Hyperelliptic };

enum class ChartKind {
    FlatZ,    // z on C/(Z + tau Z); elliptic curves only
    AffineX,  // x on the hyperelliptic model y^2 = P(x)
    InverseX, // xi = 1/x, for work near infinity (away from xi = 0 itself)
};

struct Chart {
    ChartKind kind = ChartKind::AffineX;
    int sheet = +1; // which y-branch the chart lives on (ignored for FlatZ)
};

// A point of the surface. Elliptic: x holds the z coordinate and y is unused.
// Hyperelliptic: (x, y) with y^2 = P(x); the y value selects the sheet.
struct SurfacePoint {
    Cplx x;
    Cplx y;
};

// Straight branch cut between two paired roots.
struct CutSegment {
    Cplx a, b;
};

struct Curve {
    CurveKind kind = CurveKind::Hyperelliptic;
    int genus = 0;

    // Elliptic data.
    Cplx tau;

    // Hyperelliptic data: P(x) = sum coeffs[k] x^k, odd degree 2g+1.
    std::vector<Cplx> coeffs;
    std::vector<Cplx> roots;   // sorted by (Re, Im)
    std::vector<CutSegment> cuts; // g finite cuts; one more runs from ray_start to +inf
    Cplx ray_start;            // rightmost root
    Cplx lead;                 // leading coefficient
    Cplx sqrt_lead;            // principal square root of lead
    double sigma = 1.0;        // overall sheet sign, fixed at the reference point
    double min_gap = 0.0;      // smallest pairwise root distance
    double scale = 1.0;        // max(1, largest |root|)
    double x_ref = 0.0;        // real reference abscissa right of all roots
};

// How a differential is represented. Slices of second-kind kernels carry an
// arbitrary evaluation rule so downstream modules can hand them back to the
// period integrator without a dependency cycle.
enum class DiffRep { EllipticConstant, HyperNumerator, SecondKindSlice };

struct Differential {
    DiffRep rep = DiffRep::HyperNumerator;
    Cplx constant{1.0, 0.0};              // EllipticConstant: constant * dz
    std::vector<Cplx> numer;              // HyperNumerator: (sum numer[k] x^k)/y * dx
    std::function<Cplx(const SurfacePoint&)> slice; // SecondKindSlice: AffineX coefficient
};

Cplx polyval(const std::vector<Cplx>& coeffs, Cplx x);
std::vector<Cplx> poly_derivative(const std::vector<Cplx>& coeffs);

/// Genus-1 curve C/(Z + tau Z).
Curve make_elliptic(Cplx tau);

/// Hyperelliptic curve y^2 = P(x) from ascending coefficients, deg P = 2g+1,
/// g >= 2. Roots come from the companion matrix, polished by Newton steps,
/// and are paired left to right into g finite branch cuts plus the ray from
/// the last root to +infinity. Throws DegenerateCurve for even degree,
/// genus < 2, (nearly) colliding roots, or crossing cuts.
Curve make_hyperelliptic(const std::vector<Cplx>& coeffs);

/// The sheet (+1) branch of y, analytic off the cuts, built as
/// sigma * sqrt(lead) * prod_i s_i(x) * f_inf(x) with one square-root factor
/// per cut so every branch jump happens exactly across its own cut. For real
/// x on a cut, passing Cplx(x, +0.0) yields the upper-side boundary value.
Cplx y_plus(const Curve& c, Cplx x);

/// y on the upper (+1) or lower (-1) side of finite cut cut_index,
/// parameterized by x = center + t*radius, t in (-1, 1). The side is taken
/// in the cut's own u-plane, which matches the x-plane upper/lower side for
/// real-branch curves and stays well defined for tilted cuts.
Cplx y_on_cut(const Curve& c, int cut_index, double t, int side);

/// y on either side of the infinite ray, at x = ray_start + s with s > 0.
Cplx y_on_ray(const Curve& c, double s, int side);

/// Point with the given x on the requested sheet (+1 or -1).
SurfacePoint point_on_sheet(const Curve& c, Cplx x, int sheet);

/// Which sheet a point lies on, by comparing y against y_plus(x).
int sheet_of(const Curve& c, const SurfacePoint& p);

/// Analytic continuation of y to x near base.x along the sheet of base:
/// y = base.y * sqrt(P(x)/P(base.x)). Valid while P stays away from zero and
/// the ratio from the negative real axis; intended for small stencil disks.
Cplx continue_y(const Curve& c, Cplx x, const SurfacePoint& base);

/// Basis of holomorphic differentials: dz for genus 1, x^{j-1}/y dx for
/// j = 1..g on hyperelliptic curves.
std::vector<Differential> holomorphic_basis(const Curve& c);

/// Coefficient of the differential in the given chart at the given point
/// (coefficient of d(chart coordinate)). Throws ChartDomain when the chart
/// does not apply to the curve kind or the point sits outside its domain.
Cplx eval_differential(const Curve& c, const Differential& omega, const SurfacePoint& p,
                       const Chart& chart = Chart{});

/// d(coordinate of `to`)/d(coordinate of `from`) at the point with AffineX
/// coordinate x (or FlatZ coordinate z for elliptic curves).
Cplx chart_derivative(const Curve& c, const Chart& from, const Chart& to, Cplx x);

} // namespace bidiff
