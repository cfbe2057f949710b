#include "bidiff/projstruct.hpp"

#include "bidiff/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bidiff {

DiagonalJet diagonal_jet(const Kernel& k, const Chart& ch, const SurfacePoint& x) {
    const Curve& c = k.curve;
    std::function<Cplx(Cplx)> G;

    // Stencil radius: a fixed fraction of the distance to the nearest
    // singularity of t -> kernel(x + t, x) in the chart coordinate. Large
    // enough to sit above the rounding noise eps*|x|/rho^3 injected through
    // the double pole, small enough that the rho^8 aliasing of the circle
    // averages stays below the error target.
    double nearest = std::numeric_limits<double>::infinity();

    if (c.kind == CurveKind::Elliptic) {
        if (ch.kind != ChartKind::FlatZ)
            throw ChartDomain("elliptic curves carry only the FlatZ chart");
        for (int m = -1; m <= 1; ++m)
            for (int n = -1; n <= 1; ++n)
                if (m != 0 || n != 0)
                    nearest = std::min(nearest,
                                       std::abs(Cplx(m, 0) + double(n) * c.tau));
        const Cplx z0 = x.x;
        G = [&k, z0](Cplx t) {
            return eval_kernel(k, {z0 + t, 0.0}, {z0, 0.0}, Chart{ChartKind::FlatZ, +1});
        };
    } else {
        if (ch.kind == ChartKind::FlatZ)
            throw ChartDomain("FlatZ chart applies to elliptic curves only");
        const double clear = 1e-2 * std::max(1.0, c.scale);
        for (const Cplx& r : c.roots)
            if (std::abs(x.x - r) < clear)
                throw ChartDomain("jet base point too close to a branch point");
        if (ch.kind == ChartKind::AffineX) {
            for (const Cplx& r : c.roots)
                nearest = std::min(nearest, std::abs(x.x - r));
            G = [&k, x](Cplx t) {
                const Cplx xx = x.x + t;
                return eval_kernel(k, {xx, continue_y(k.curve, xx, x)}, x);
            };
        } else { // InverseX
            if (std::abs(x.x) < 10.0 * clear)
                throw ChartDomain("InverseX jet too close to x = 0");
            const Cplx xi0 = 1.0 / x.x;
            // xi = 0 (x = infinity) is a branch point of the odd-degree
            // model, as are the images 1/r of the finite roots
            nearest = std::abs(xi0);
            for (const Cplx& r : c.roots)
                if (std::abs(r) > 1e-12 * std::max(1.0, c.scale))
                    nearest = std::min(nearest, std::abs(xi0 - 1.0 / r));
            const Chart out{ChartKind::InverseX, ch.sheet};
            G = [&k, x, xi0, out](Cplx t) {
                const Cplx x1 = 1.0 / (xi0 + t);
                return eval_kernel(k, {x1, continue_y(k.curve, x1, x)}, x, out);
            };
        }
    }
    const double delta = 0.03 * nearest;

    const num::LaurentJet jet = num::laurent_jet(G, delta);
    if (jet.err_estimate > 1e-6)
        throw IllConditionedFit("diagonal jet error estimate " +
                                std::to_string(jet.err_estimate));
    return DiagonalJet{jet.a, jet.b, jet.c, jet.err_estimate};
}

Cplx schwarzian(const std::function<Cplx(Cplx)>& f, Cplx w, double r) {
    const num::Derivatives3 d = num::derivatives_123(f, w, r);
    if (std::abs(d.d1) < 1e-10)
        throw CriticalPoint("Schwarzian at a critical point (|f'| < 1e-10)");
    const Cplx ratio = d.d2 / d.d1;
    return d.d3 / d.d1 - 1.5 * ratio * ratio;
}

double expansion_identity_check(const std::function<Cplx(Cplx)>& f, Cplx x,
                                double delta) {
    const Cplx S = schwarzian(f, x, std::max(0.2, delta));

    // The finite part of f'(x1)f'(x2)/(f(x1)-f(x2))^2 - 1/(x1-x2)^2 at
    // x1 = x2 = x equals d^2/du dv of W(u,v) = log[(f(x+u)-f(x+v))/(u-v)]
    // at the origin, which needs no numerical derivatives of f itself.
    // Dividing out a crude slope estimate keeps the log argument near 1 so
    // the principal branch is taken consistently across the stencil.
    const Cplx f0 = (f(x + delta) - f(x - delta)) / (2.0 * delta);
    if (std::abs(f0) < 1e-14)
        throw CriticalPoint("expansion identity across a critical pair");
    const auto W = [&](double u, double v) {
        const Cplx df = f(x + u) - f(x + v);
        if (std::abs(df) < 1e-14)
            throw CriticalPoint("expansion identity across a critical pair");
        return std::log(df / ((u - v) * f0));
    };
    // unequal arms keep every sample off the diagonal u = v
    const auto cross = [&](double h) {
        const double a = h, b = 0.5 * h;
        return (W(a, b) - W(a, -b) - W(-a, b) + W(-a, -b)) / (4.0 * a * b);
    };

    // two Richardson levels remove the h^2 and h^4 stencil errors
    const Cplx d1 = cross(delta);
    const Cplx d2 = cross(0.5 * delta);
    const Cplx d4 = cross(0.25 * delta);
    const Cplx r1 = (4.0 * d2 - d1) / 3.0;
    const Cplx r2 = (4.0 * d4 - d2) / 3.0;
    const Cplx extracted = (16.0 * r2 - r1) / 15.0;
    return std::abs(extracted - S / 6.0);
}

ConnectionSample connection_from_kernel(const Kernel& k, const Chart& ch,
                                        const std::vector<SurfacePoint>& pts) {
    ConnectionSample cs;
    cs.chart = ch;
    cs.points.reserve(pts.size());
    cs.values.reserve(pts.size());
    cs.errors.reserve(pts.size());
    for (const SurfacePoint& p : pts) {
        const DiagonalJet jet = diagonal_jet(k, ch, p);
        if (std::abs(jet.biresidue - 1.0) > 1e-8 || std::abs(jet.residue_term) > 1e-8)
            throw ContractViolation("kernel 2-jet is not canonically trivialized");
        cs.points.push_back(ch.kind == ChartKind::InverseX ? 1.0 / p.x : p.x);
        cs.values.push_back(6.0 * jet.finite_part);
        cs.errors.push_back(jet.err_estimate);
    }
    return cs;
}

ConnectionSample uniformization_genus1(const Modulus&, const std::vector<Cplx>& pts) {
    ConnectionSample cs;
    cs.chart = Chart{ChartKind::FlatZ, +1};
    cs.points = pts;
    cs.values.assign(pts.size(), Cplx(0.0));
    cs.errors.assign(pts.size(), 0.0);
    return cs;
}

QuadraticDifferentialSample connection_difference(const ConnectionSample& s1,
                                                  const ConnectionSample& s2) {
    if (s1.chart.kind != s2.chart.kind || s1.points.size() != s2.points.size())
        throw BadConfiguration("connection samples live on different charts or grids");
    QuadraticDifferentialSample q;
    q.chart = s1.chart;
    q.points = s1.points;
    q.values.resize(s1.points.size());
    for (size_t i = 0; i < s1.points.size(); ++i) {
        if (std::abs(s1.points[i] - s2.points[i]) > 1e-12)
            throw BadConfiguration("connection samples use different points");
        q.values[i] = s1.values[i] - s2.values[i];
    }
    return q;
}

} // namespace bidiff
