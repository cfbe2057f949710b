#include "bidiff/curves.hpp"

#include "bidiff/special_functions.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace bidiff {

Cplx polyval(const std::vector<Cplx>& coeffs, Cplx x) {
    Cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::vector<Cplx> poly_derivative(const std::vector<Cplx>& coeffs) {
    std::vector<Cplx> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k)
        d.push_back(static_cast<double>(k) * coeffs[k]);
    return d;
}

namespace {

std::vector<Cplx> polished_roots(const std::vector<Cplx>& coeffs) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, n - 1) = -coeffs[i] / coeffs[n];
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw DegenerateCurve("root finding failed on the companion matrix");
    std::vector<Cplx> roots(n);
    const std::vector<Cplx> dp = poly_derivative(coeffs);
    for (int i = 0; i < n; ++i) {
        Cplx r = es.eigenvalues()(i);
        for (int it = 0; it < 4; ++it) {
            const Cplx dpr = polyval(dp, r);
            if (std::abs(dpr) < 1e-300) break;
            r -= polyval(coeffs, r) / dpr;
        }
        roots[i] = r;
    }
    std::sort(roots.begin(), roots.end(), [](Cplx a, Cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

double point_seg_dist(Cplx p, Cplx a, Cplx b) {
    const Cplx ab = b - a;
    const double l2 = std::norm(ab);
    double t = 0.0;
    if (l2 > 0.0) {
        t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / l2;
        t = std::clamp(t, 0.0, 1.0);
    }
    return std::abs(p - (a + t * ab));
}

double seg_seg_dist(Cplx a1, Cplx b1, Cplx a2, Cplx b2) {
    const auto cross = [](Cplx u, Cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(b1 - a1, a2 - a1), d2 = cross(b1 - a1, b2 - a1);
    const double d3 = cross(b2 - a2, a1 - a2), d4 = cross(b2 - a2, b1 - a2);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != d2 && d3 != d4) return 0.0;
    return std::min(std::min(point_seg_dist(a2, a1, b1), point_seg_dist(b2, a1, b1)),
                    std::min(point_seg_dist(a1, a2, b2), point_seg_dist(b1, a2, b2)));
}

// One square-root factor per finite cut: s(x) = r u sqrt(1 - 1/u^2) with
// u = (x - center)/radius, whose only branch jump is across the segment.
// Near u = 0 that form hits inf*0; the equivalent +-i r sqrt(1 - u^2) takes
// over, with the sign picking the component above/below the cut.
Cplx cut_factor(Cplx r, Cplx u) {
    // On the cut itself (u real, |u| < 1) the product form below sits on its
    // own branch cut and complex division does not preserve the signed zero
    // of Im u, so take the side explicitly from the sign bit there. The
    // i*sqrt(1-u^2) form is also better conditioned for small |u|; the
    // product form carries the correct single-valued branch for large |u|.
    if (std::abs(u) < 0.7 || (u.imag() == 0.0 && std::abs(u.real()) < 1.0)) {
        const double side = std::signbit(u.imag()) ? -1.0 : 1.0;
        return side * I * r * std::sqrt(1.0 - u * u);
    }
    return r * u * std::sqrt(1.0 - 1.0 / (u * u));
}

// For a real ray start the subtraction must negate Im(x) explicitly:
// 0.0 - (+0.0) is +0.0 in IEEE arithmetic, which would silently move real x
// on the ray to the wrong side of the square-root cut.
Cplx ray_factor(Cplx ray_start, Cplx x) {
    const Cplx w = ray_start.imag() == 0.0
                       ? Cplx(ray_start.real() - x.real(), -x.imag())
                       : ray_start - x;
    return I * std::sqrt(w);
}

} // namespace

Curve make_elliptic(Cplx tau) {
    Modulus m(tau); // validates Im tau > 0
    Curve c;
    c.kind = CurveKind::Elliptic;
    c.genus = 1;
    c.tau = m.tau;
    c.min_gap = 1.0;
    c.scale = std::max(1.0, std::abs(tau));
    return c;
}

Curve make_hyperelliptic(const std::vector<Cplx>& coeffs) {
    if (coeffs.size() < 2 || std::abs(coeffs.back()) == 0.0)
        throw DegenerateCurve("leading coefficient must be nonzero");
    const int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree % 2 == 0) throw DegenerateCurve("only odd-degree models are supported");
    const int genus = (degree - 1) / 2;
    if (genus < 2)
        throw DegenerateCurve("hyperelliptic curves need genus >= 2 (degree >= 5)");

    Curve c;
    c.kind = CurveKind::Hyperelliptic;
    c.genus = genus;
    c.coeffs = coeffs;
    c.lead = coeffs.back();
    c.sqrt_lead = std::sqrt(c.lead);
    c.roots = polished_roots(coeffs);

    c.scale = 1.0;
    for (const Cplx r : c.roots) c.scale = std::max(c.scale, std::abs(r));

    // Imaginary parts below root-finder noise are junk; snapping them keeps
    // real-branch cuts exactly on the real axis, where the one-sided boundary
    // values rely on signed zeros. Genuine perturbations sit far above this.
    for (Cplx& r : c.roots)
        if (r.imag() != 0.0 && std::abs(r.imag()) < 1e-10 * c.scale) r = Cplx(r.real(), 0.0);
    c.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.roots.size(); ++i)
        for (std::size_t j = i + 1; j < c.roots.size(); ++j)
            c.min_gap = std::min(c.min_gap, std::abs(c.roots[i] - c.roots[j]));
    if (!(c.min_gap > 1e-8 * c.scale))
        throw DegenerateCurve("branch points coincide or nearly coincide");

    for (int i = 0; i < genus; ++i) c.cuts.push_back({c.roots[2 * i], c.roots[2 * i + 1]});
    c.ray_start = c.roots.back();

    // Cut disjointness, including against (a long finite stand-in for) the ray.
    const Cplx ray_end = c.ray_start + 4.0 * c.scale;
    for (int i = 0; i < genus; ++i) {
        for (int j = i + 1; j < genus; ++j)
            if (seg_seg_dist(c.cuts[i].a, c.cuts[i].b, c.cuts[j].a, c.cuts[j].b) <
                1e-3 * c.min_gap)
                throw DegenerateCurve("branch cuts intersect");
        if (seg_seg_dist(c.cuts[i].a, c.cuts[i].b, c.ray_start, ray_end) < 1e-3 * c.min_gap)
            throw DegenerateCurve("branch cut intersects the infinite ray");
    }

    double re_min = c.roots.front().real(), re_max = c.roots.back().real();
    c.x_ref = re_max + std::max(1.0, 0.25 * (re_max - re_min));

    // Fix sigma so that y at the reference point (upper side of the ray)
    // equals the principal square root of P there.
    c.sigma = 1.0;
    const Cplx xr(c.x_ref, 0.0);
    const Cplx prod = y_plus(c, xr);
    const Cplx want = std::sqrt(polyval(coeffs, xr));
    const Cplx ratio = want / prod;
    c.sigma = ratio.real() > 0.0 ? 1.0 : -1.0;
    if (std::abs(c.sigma * prod - want) > 1e-8 * (1.0 + std::abs(want)))
        throw ContractViolation("sheet calibration failed: y(x_ref)^2 != P(x_ref)");
    return c;
}

Cplx y_plus(const Curve& c, Cplx x) {
    if (c.kind != CurveKind::Hyperelliptic)
        throw ChartDomain("y_plus is defined for hyperelliptic curves only");
    Cplx prod = c.sqrt_lead;
    for (const CutSegment& s : c.cuts) {
        const Cplx center = 0.5 * (s.a + s.b);
        const Cplx radius = 0.5 * (s.b - s.a);
        const Cplx d = x - center;
        // componentwise division for real cuts keeps the signed zero of
        // Im x, which selects the boundary side on the cut itself
        const Cplx u = radius.imag() == 0.0
                           ? Cplx(d.real() / radius.real(), d.imag() / radius.real())
                           : d / radius;
        prod *= cut_factor(radius, u);
    }
    prod *= ray_factor(c.ray_start, x);
    return c.sigma * prod;
}

Cplx y_on_cut(const Curve& c, int cut_index, double t, int side) {
    if (c.kind != CurveKind::Hyperelliptic || cut_index < 0 || cut_index >= c.genus)
        throw BadConfiguration("y_on_cut: bad cut index");
    const CutSegment& s = c.cuts[cut_index];
    const Cplx center = 0.5 * (s.a + s.b);
    const Cplx radius = 0.5 * (s.b - s.a);
    const Cplx x = center + t * radius;
    Cplx prod = c.sqrt_lead;
    for (int j = 0; j < c.genus; ++j) {
        const Cplx cj = 0.5 * (c.cuts[j].a + c.cuts[j].b);
        const Cplx rj = 0.5 * (c.cuts[j].b - c.cuts[j].a);
        const Cplx u = (j == cut_index) ? Cplx(t, side > 0 ? 0.0 : -0.0) : (x - cj) / rj;
        prod *= cut_factor(rj, u);
    }
    prod *= ray_factor(c.ray_start, x);
    return c.sigma * prod;
}

Cplx y_on_ray(const Curve& c, double s, int side) {
    if (c.kind != CurveKind::Hyperelliptic)
        throw ChartDomain("y_on_ray is defined for hyperelliptic curves only");
    if (!(s > 0.0)) throw BadConfiguration("y_on_ray: s must be positive");
    const Cplx x = c.ray_start + s;
    Cplx prod = c.sqrt_lead;
    for (const CutSegment& seg : c.cuts) {
        const Cplx center = 0.5 * (seg.a + seg.b);
        const Cplx radius = 0.5 * (seg.b - seg.a);
        prod *= cut_factor(radius, (x - center) / radius);
    }
    // ray_start - x = -s exactly; the side selects the boundary value of the
    // principal square root across its cut on the negative reals.
    prod *= I * std::sqrt(Cplx(-s, side > 0 ? -0.0 : 0.0));
    return c.sigma * prod;
}

SurfacePoint point_on_sheet(const Curve& c, Cplx x, int sheet) {
    if (sheet != 1 && sheet != -1) throw BadConfiguration("sheet must be +1 or -1");
    if (c.kind == CurveKind::Elliptic) return {x, 0.0};
    const Cplx y = y_plus(c, x);
    return {x, sheet > 0 ? y : -y};
}

int sheet_of(const Curve& c, const SurfacePoint& p) {
    if (c.kind == CurveKind::Elliptic) return 1;
    const Cplx yp = y_plus(c, p.x);
    return std::abs(p.y - yp) <= std::abs(p.y + yp) ? 1 : -1;
}

Cplx continue_y(const Curve& c, Cplx x, const SurfacePoint& base) {
    if (c.kind != CurveKind::Hyperelliptic)
        throw ChartDomain("continue_y is defined for hyperelliptic curves only");
    const Cplx p0 = polyval(c.coeffs, base.x);
    if (std::abs(p0) < 1e-14 * std::pow(c.scale, 2 * c.genus + 1))
        throw CriticalPoint("continue_y: base point too close to a branch point");
    const Cplx ratio = polyval(c.coeffs, x) / p0;
    if (ratio.real() < 0.0 && std::abs(ratio.imag()) < 0.5 * std::abs(ratio.real()))
        throw ChartDomain("continue_y: continuation strayed too far from the base point");
    return base.y * std::sqrt(ratio);
}

std::vector<Differential> holomorphic_basis(const Curve& c) {
    std::vector<Differential> basis;
    if (c.kind == CurveKind::Elliptic) {
        Differential dz;
        dz.rep = DiffRep::EllipticConstant;
        dz.constant = 1.0;
        basis.push_back(std::move(dz));
        return basis;
    }
    for (int j = 1; j <= c.genus; ++j) {
        Differential u;
        u.rep = DiffRep::HyperNumerator;
        u.numer.assign(j, 0.0);
        u.numer.back() = 1.0;
        basis.push_back(std::move(u));
    }
    return basis;
}

Cplx eval_differential(const Curve& c, const Differential& omega, const SurfacePoint& p,
                       const Chart& chart) {
    if (c.kind == CurveKind::Elliptic) {
        if (chart.kind != ChartKind::FlatZ)
            throw ChartDomain("elliptic curves carry only the FlatZ chart");
    } else if (chart.kind == ChartKind::FlatZ) {
        throw ChartDomain("FlatZ chart applies to elliptic curves only");
    }

    Cplx coeff; // coefficient of dx (AffineX) resp. dz (FlatZ)
    switch (omega.rep) {
    case DiffRep::EllipticConstant:
        if (c.kind != CurveKind::Elliptic)
            throw ChartDomain("constant-dz differential on a non-elliptic curve");
        coeff = omega.constant;
        break;
    case DiffRep::HyperNumerator: {
        if (c.kind != CurveKind::Hyperelliptic)
            throw ChartDomain("numerator/y differential needs a hyperelliptic curve");
        if (std::abs(p.y) == 0.0)
            throw ChartDomain("differential evaluation at a branch point (y = 0)");
        coeff = polyval(omega.numer, p.x) / p.y;
        break;
    }
    case DiffRep::SecondKindSlice:
        coeff = omega.slice(p);
        break;
    }

    if (chart.kind == ChartKind::InverseX)
        coeff *= chart_derivative(c, Chart{ChartKind::InverseX, chart.sheet},
                                  Chart{ChartKind::AffineX, chart.sheet}, p.x);
    return coeff;
}

Cplx chart_derivative(const Curve& c, const Chart& from, const Chart& to, Cplx x) {
    const auto needs_hyper = [&](ChartKind k) {
        return k == ChartKind::AffineX || k == ChartKind::InverseX;
    };
    if (c.kind == CurveKind::Elliptic) {
        if (needs_hyper(from.kind) || needs_hyper(to.kind))
            throw ChartDomain("x-charts apply to hyperelliptic curves only");
        return 1.0; // FlatZ -> FlatZ
    }
    if (from.kind == ChartKind::FlatZ || to.kind == ChartKind::FlatZ)
        throw ChartDomain("FlatZ chart applies to elliptic curves only");
    if (from.kind == to.kind) return 1.0;
    if (std::abs(x) < 1e-10)
        throw ChartDomain("InverseX chart degenerates near x = 0");
    if (from.kind == ChartKind::AffineX) return -1.0 / (x * x); // d xi / d x
    return -x * x;                                              // d x / d xi
}

} // namespace bidiff
