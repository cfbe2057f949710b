#include "bidiff/periods.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bidiff {
namespace {

double point_segment_distance(Cplx p, Cplx a, Cplx b) {
    const Cplx ab = b - a;
    const double l2 = std::norm(ab);
    double t = 0.0;
    if (l2 > 0.0) {
        t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / l2;
        t = std::clamp(t, 0.0, 1.0);
    }
    return std::abs(p - (a + t * ab));
}

double torus_point_distance(Cplx d, Cplx tau) {
    const double q = d.imag() / tau.imag();
    const double p = d.real() - q * tau.real();
    const double k0 = std::round(q), n0 = std::round(p);
    double best = std::numeric_limits<double>::infinity();
    for (int dk = -1; dk <= 1; ++dk)
        for (int dn = -1; dn <= 1; ++dn)
            best = std::min(best, std::abs(d - (n0 + dn) - (k0 + dk) * tau));
    return best;
}

double torus_segment_distance(Cplx pole, Cplx a, Cplx b, Cplx tau) {
    double best = std::numeric_limits<double>::infinity();
    const int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const Cplx z = a + (static_cast<double>(i) / samples) * (b - a);
        best = std::min(best, torus_point_distance(pole - z, tau));
    }
    return best;
}

} // namespace

std::vector<Cycle> cycle_basis(const Curve& c) {
    std::vector<Cycle> cycles;
    if (c.kind == CurveKind::Elliptic) {
        Cycle a{"a1", {PathSegment{PathSegment::Kind::TorusLine, 0.0, 1.0, -1, +1, +1, 1.0}}};
        Cycle b{"b1", {PathSegment{PathSegment::Kind::TorusLine, 0.0, c.tau, -1, +1, +1, 1.0}}};
        cycles.push_back(std::move(a));
        cycles.push_back(std::move(b));
        return cycles;
    }
    const int g = c.genus;
    // a_i: both boundary legs of the loop collapsed onto cut i. The sign
    // convention (upper leg positive) together with the b-cycles below gives
    // Im tau > 0, i.e. the canonical pairing a_i . b_i = +1.
    for (int i = 0; i < g; ++i) {
        Cycle a{"a" + std::to_string(i + 1), {}};
        a.segments.push_back(
            {PathSegment::Kind::Cut, c.cuts[i].a, c.cuts[i].b, i, +1, +1, +1.0});
        a.segments.push_back(
            {PathSegment::Kind::Cut, c.cuts[i].a, c.cuts[i].b, i, -1, +1, -1.0});
        cycles.push_back(std::move(a));
    }
    // b_i: out from the right end of cut i to the ray start on sheet +1 just
    // above the axis; the ray crossing glues to the lower side of sheet -1
    // for the return. Over gaps the legs add; over intermediate cuts the
    // sheet -1 lower-side y equals the sheet +1 upper-side y, so those legs
    // cancel for odd-in-y integrands but are kept for general ones.
    for (int i = 0; i < g; ++i) {
        Cycle b{"b" + std::to_string(i + 1), {}};
        for (int k = 2 * i + 1; k < 2 * g; ++k) {
            const Cplx s0 = c.roots[k], s1 = c.roots[k + 1];
            if (k % 2 == 1) { // gap
                b.segments.push_back({PathSegment::Kind::Gap, s0, s1, -1, +1, +1, +1.0});
                b.segments.push_back({PathSegment::Kind::Gap, s0, s1, -1, -1, -1, -1.0});
            } else { // intermediate cut k/2
                b.segments.push_back({PathSegment::Kind::Cut, s0, s1, k / 2, +1, +1, +1.0});
                b.segments.push_back({PathSegment::Kind::Cut, s0, s1, k / 2, -1, -1, -1.0});
            }
        }
        cycles.push_back(std::move(b));
    }
    return cycles;
}

Cplx integrate_over_cycle(const Curve& c, const Differential& omega, const Cycle& cycle,
                          const std::vector<Cplx>& poles_x, const num::AdaptiveOptions& opt) {
    const double clearance = 1e-2 * c.min_gap;
    for (const PathSegment& seg : cycle.segments) {
        for (const Cplx q : poles_x) {
            const double d = seg.kind == PathSegment::Kind::TorusLine
                                 ? torus_segment_distance(q, seg.x0, seg.x1, c.tau)
                                 : point_segment_distance(q, seg.x0, seg.x1);
            if (d < clearance)
                throw PoleOnPath("pole within " + std::to_string(clearance) +
                                 " of contour " + cycle.name);
        }
    }

    Cplx total = 0.0;
    for (const PathSegment& seg : cycle.segments) {
        const Cplx mid = 0.5 * (seg.x0 + seg.x1);
        const Cplx half = 0.5 * (seg.x1 - seg.x0);
        Cplx part;
        switch (seg.kind) {
        case PathSegment::Kind::TorusLine:
            part = num::integrate_adaptive(
                [&](double t) {
                    const Cplx z = mid + t * half;
                    return eval_differential(c, omega, SurfacePoint{z, 0.0},
                                             Chart{ChartKind::FlatZ, +1}) *
                           half;
                },
                false, opt);
            break;
        case PathSegment::Kind::Line:
            part = num::integrate_adaptive(
                [&](double t) {
                    const Cplx x = mid + t * half;
                    const Cplx y = static_cast<double>(seg.sheet) * y_plus(c, x);
                    return eval_differential(c, omega, SurfacePoint{x, y}) * half;
                },
                false, opt);
            break;
        case PathSegment::Kind::Gap:
        case PathSegment::Kind::Cut:
            // x = mid + sin(theta) * half regularizes the endpoints: both the
            // inverse-square-root part of a differential (1/y) and any smooth
            // part become analytic in theta, so plain Gauss-Legendre
            // converges geometrically even for second-kind slices.
            part = num::integrate_adaptive(
                [&](double s) {
                    const double th = 0.5 * pi * s;
                    const double t = std::sin(th);
                    const Cplx x = mid + t * half;
                    Cplx y = seg.kind == PathSegment::Kind::Cut
                                 ? y_on_cut(c, seg.cut_index, t, seg.side)
                                 : y_plus(c, x);
                    y *= static_cast<double>(seg.sheet);
                    const Cplx val = eval_differential(c, omega, SurfacePoint{x, y});
                    return val * half * std::cos(th) * (0.5 * pi);
                },
                false, opt);
            break;
        }
        total += seg.factor * part;
    }
    return total;
}

PeriodVector periods_of(const Curve& c, const Differential& omega,
                        const std::vector<Cplx>& poles_x, const num::AdaptiveOptions& opt) {
    const auto cycles = cycle_basis(c);
    const int g = static_cast<int>(cycles.size()) / 2;
    PeriodVector pv;
    pv.a.resize(g);
    pv.b.resize(g);
    for (int k = 0; k < g; ++k) {
        pv.a(k) = integrate_over_cycle(c, omega, cycles[k], poles_x, opt);
        pv.b(k) = integrate_over_cycle(c, omega, cycles[g + k], poles_x, opt);
    }
    return pv;
}

PeriodData period_matrices(const Curve& c, const std::vector<Differential>& omegas,
                           const num::AdaptiveOptions& opt) {
    const int g = c.genus;
    if (static_cast<int>(omegas.size()) != g)
        throw BadConfiguration("period_matrices expects exactly genus-many differentials");
    const auto cycles = cycle_basis(c);
    PeriodData pd;
    pd.pi_a.resize(g, g);
    pd.pi_b.resize(g, g);
    for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k) {
            pd.pi_a(j, k) = integrate_over_cycle(c, omegas[j], cycles[k], {}, opt);
            pd.pi_b(j, k) = integrate_over_cycle(c, omegas[j], cycles[g + k], {}, opt);
        }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pd.pi_a);
    const auto& sv = svd.singularValues();
    if (!(sv(g - 1) > 1e-12 * sv(0)))
        throw SingularPiA("a-period matrix is numerically singular");

    pd.normalizer = pd.pi_a.fullPivLu().inverse();
    pd.tau = pd.normalizer * pd.pi_b;

    const double asym = (pd.tau - pd.tau.transpose()).norm();
    if (asym > 1e-8 * std::max(1.0, pd.tau.norm()))
        throw ContractViolation("normalized period matrix is not symmetric: residual " +
                                std::to_string(asym));
    pd.tau = 0.5 * (pd.tau + pd.tau.transpose()).eval();

    Eigen::MatrixXd im = pd.tau.imag();
    im = 0.5 * (im + im.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(im);
    if (eig.eigenvalues()(0) <= 0.0)
        throw SingularImTau("Im(tau) is not positive definite");
    return pd;
}

Cplx cup_product(const PeriodVector& w1, const PeriodVector& w2) {
    if (w1.a.size() != w2.a.size() || w1.b.size() != w2.b.size() ||
        w1.a.size() != w1.b.size())
        throw BadConfiguration("cup_product: mismatched period vector sizes");
    return (w1.a.array() * w2.b.array()).sum() - (w1.b.array() * w2.a.array()).sum();
}

} // namespace bidiff
