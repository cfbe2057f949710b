#include "bidiff/kernels.hpp"

#include "bidiff/numerics.hpp"
#include "bidiff/special_functions.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace bidiff {
namespace {

Chart natural_chart(const Curve& c) {
    return c.kind == CurveKind::Elliptic ? Chart{ChartKind::FlatZ, +1} : Chart{};
}

// F(x1,x2) = sum_{k=0}^{g} (x1 x2)^k (2 lam_{2k} + lam_{2k+1} (x1+x2));
// symmetric, with F(x,x) = 2 P(x), which pins the biresidue to 1.
Cplx klein_F(const std::vector<Cplx>& lam, int g, Cplx x1, Cplx x2) {
    const Cplx s = x1 + x2, q = x1 * x2;
    Cplx acc = 0.0, p = 1.0;
    for (int k = 0; k <= g; ++k) {
        acc += p * (2.0 * lam[2 * k] + lam[2 * k + 1] * s);
        p *= q;
    }
    return acc;
}

Cplx base_value(const Kernel& k, const SurfacePoint& x, const SurfacePoint& y) {
    if (k.base == KernelBase::Genus1Weierstrass) {
        try {
            return weierstrass_p(x.x - y.x, Modulus(k.curve.tau)) + k.g1_eta1;
        } catch (const LatticePole&) {
            throw DiagonalPole("kernel evaluated on the diagonal (z - w in lattice)");
        }
    }
    if (std::abs(x.x - y.x) < 1e-12 * k.curve.scale)
        throw DiagonalPole("kernel evaluated at coinciding x-coordinates");
    if (std::abs(x.y) == 0.0 || std::abs(y.y) == 0.0)
        throw ChartDomain("kernel evaluation at a branch point (y = 0)");
    const Cplx dx = x.x - y.x;
    const Cplx num = 2.0 * x.y * y.y + klein_F(k.curve.coeffs, k.curve.genus, x.x, y.x);
    return num / (4.0 * dx * dx * x.y * y.y);
}

// Values u_1(p)..u_g(p) of the holomorphic basis in the natural chart.
Eigen::VectorXcd u_vector(const Curve& c, const SurfacePoint& p) {
    Eigen::VectorXcd u(c.genus);
    if (c.kind == CurveKind::Elliptic) {
        u(0) = 1.0;
        return u;
    }
    if (std::abs(p.y) == 0.0)
        throw ChartDomain("basis evaluation at a branch point (y = 0)");
    Cplx mono = 1.0;
    for (int j = 0; j < c.genus; ++j) {
        u(j) = mono / p.y;
        mono *= p.x;
    }
    return u;
}

// Generic off-contour sample points, one sheet, pairwise distinct.
std::vector<SurfacePoint> sample_points(const Curve& c, int n) {
    std::vector<SurfacePoint> pts;
    pts.reserve(n);
    if (c.kind == CurveKind::Elliptic) {
        for (int s = 0; s < n; ++s) {
            const double f = 0.31 + 0.23 * s / n;
            const double h = 0.43 + 0.19 * s / n;
            pts.push_back({f + h * c.tau, 0.0});
        }
    } else {
        const double m = std::max(1.0, 0.5 * c.scale);
        for (int s = 0; s < n; ++s) {
            const Cplx x(c.x_ref, (0.8 + 0.6 * s) * m);
            pts.push_back({x, y_plus(c, x)});
        }
    }
    return pts;
}

void check_diagonal_jet(const Kernel& k) {
    std::function<Cplx(Cplx)> G;
    double delta = 1e-3;
    if (k.curve.kind == CurveKind::Elliptic) {
        G = [&k](Cplx t) { return base_value(k, {t, 0.0}, {Cplx(0.0), 0.0}); };
    } else {
        const Cplx x0(k.curve.x_ref, std::max(1.0, 0.5 * k.curve.scale));
        const SurfacePoint p0{x0, y_plus(k.curve, x0)};
        G = [&k, x0, p0](Cplx t) {
            const Cplx xx = x0 + t;
            return base_value(k, {xx, continue_y(k.curve, xx, p0)}, p0);
        };
        delta = 1e-3 * std::max(1.0, k.curve.scale);
    }
    const num::LaurentJet jet = num::laurent_jet(G, delta);
    if (std::abs(jet.a - 1.0) > 1e-8)
        throw ContractViolation("base kernel biresidue is " + std::to_string(jet.a.real()) +
                                "+" + std::to_string(jet.a.imag()) + "i, expected 1");
    if (std::abs(jet.b) > 1e-8)
        throw ContractViolation("base kernel has a residue term of size " +
                                std::to_string(std::abs(jet.b)));
}

} // namespace

Kernel base_kernel(const Curve& c) {
    Kernel k;
    k.curve = c;
    k.correction = Eigen::MatrixXcd::Zero(c.genus, c.genus);
    if (c.kind == CurveKind::Elliptic) {
        k.base = KernelBase::Genus1Weierstrass;
        k.stage = KernelStage::ANormalized; // wp + eta1 has vanishing a-period
        k.g1_eta1 = quasi_periods(Modulus(c.tau)).eta1;
    } else {
        k.base = KernelBase::KleinHyperelliptic;
        k.stage = KernelStage::Raw;
    }
    check_diagonal_jet(k);
    return k;
}

Cplx eval_kernel(const Kernel& k, const SurfacePoint& x, const SurfacePoint& y,
                 const Chart& ch) {
    const Curve& c = k.curve;
    if (c.kind == CurveKind::Elliptic) {
        if (ch.kind != ChartKind::FlatZ)
            throw ChartDomain("elliptic curves carry only the FlatZ chart");
    } else if (ch.kind == ChartKind::FlatZ) {
        throw ChartDomain("FlatZ chart applies to elliptic curves only");
    }

    Cplx coeff = base_value(k, x, y);
    if (k.correction.size() > 0 && k.correction.cwiseAbs().maxCoeff() > 0.0) {
        const Eigen::VectorXcd ux = u_vector(c, x), uy = u_vector(c, y);
        coeff += (k.correction.array() * (ux * uy.transpose()).array()).sum();
    }

    if (ch.kind == ChartKind::InverseX)
        coeff *= chart_derivative(c, Chart{ChartKind::InverseX, ch.sheet},
                                  Chart{ChartKind::AffineX, ch.sheet}, x.x) *
                 chart_derivative(c, Chart{ChartKind::InverseX, ch.sheet},
                                  Chart{ChartKind::AffineX, ch.sheet}, y.x);
    return coeff;
}

Differential kernel_slice(const Kernel& k, const SurfacePoint& x) {
    Differential d;
    d.rep = DiffRep::SecondKindSlice;
    const Chart ch = natural_chart(k.curve);
    d.slice = [k, x, ch](const SurfacePoint& q) { return eval_kernel(k, x, q, ch); };
    return d;
}

PeriodVector slice_periods(const Kernel& k, const SurfacePoint& x, const PeriodData& pd,
                           const num::AdaptiveOptions& opt) {
    if (pd.pi_a.rows() != k.curve.genus)
        throw BadConfiguration("period data does not match the kernel's curve");
    return periods_of(k.curve, kernel_slice(k, x), {x.x}, opt);
}

Kernel a_normalize(const Kernel& k, const PeriodData& pd) {
    if (k.stage == KernelStage::HodgeCorrected)
        throw BadConfiguration("a_normalize expects a Raw or ANormalized kernel");
    const int g = k.curve.genus;
    const auto pts = sample_points(k.curve, g);

    // A(x)^T = u(x)^T (C + M Pi_a) for the current kernel; sampling at g
    // generic points gives R = U C, so M = -U^{-1} R Pi_a^{-1} kills every
    // slice a-period at once.
    Eigen::MatrixXcd U(g, g), R(g, g);
    for (int s = 0; s < g; ++s) {
        const PeriodVector pv = slice_periods(k, pts[s], pd);
        R.row(s) = pv.a.transpose();
        U.row(s) = u_vector(k.curve, pts[s]).transpose();
    }
    Eigen::MatrixXcd delta = -(U.fullPivLu().solve(R)) * pd.normalizer;

    const double scale = std::max(1.0, delta.cwiseAbs().maxCoeff());
    const double asym = (delta - delta.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-6 * scale)
        throw AsymmetricSolution("a-normalization produced an asymmetric correction "
                                 "(residual " +
                                 std::to_string(asym) + ")");
    Kernel out = k;
    out.correction += 0.5 * (delta + delta.transpose()).eval();
    out.stage = KernelStage::ANormalized;
    return out;
}

Kernel hodge_correct(const Kernel& bergman, const PeriodData& pd) {
    if (bergman.stage != KernelStage::ANormalized)
        throw BadConfiguration("hodge_correct expects an a-normalized kernel");
    Eigen::MatrixXd im = pd.tau.imag();
    im = 0.5 * (im + im.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(im);
    if (eig.eigenvalues()(0) <= 0.0)
        throw SingularImTau("Im(tau) is not positive definite");

    const Eigen::MatrixXcd iminv =
        im.llt().solve(Eigen::MatrixXd::Identity(im.rows(), im.cols())).cast<Cplx>();
    Eigen::MatrixXcd delta = -pi * (pd.normalizer.transpose() * iminv * pd.normalizer);
    Kernel out = bergman;
    out.correction += 0.5 * (delta + delta.transpose()).eval();
    out.stage = KernelStage::HodgeCorrected;
    return out;
}

ObstructionVector obstruction(const PeriodVector& pv, const PeriodData& pd) {
    ObstructionVector ov;
    ov.O = pv.b - pd.tau.adjoint() * pv.a;
    return ov;
}

Kernel perturb(const Kernel& k, const Eigen::MatrixXcd& M) {
    const int g = k.curve.genus;
    if (M.rows() != g || M.cols() != g)
        throw BadConfiguration("perturbation matrix has the wrong size");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw AsymmetricInput("perturbation matrix must be symmetric");
    Kernel out = k;
    out.correction += M;
    return out;
}

Eigen::MatrixXcd obstruction_response(const Kernel& k, const PeriodData& pd,
                                      const std::vector<SurfacePoint>& probes) {
    const int g = k.curve.genus;
    const int m = g * (g + 1) / 2;
    if (static_cast<int>(probes.size()) != m)
        throw BadConfiguration("obstruction_response needs g(g+1)/2 probe points");

    const Eigen::MatrixXcd lead = (pd.tau - pd.tau.conjugate()) * pd.pi_a.transpose();
    Eigen::MatrixXcd resp(m, m);
    int col = 0;
    for (int j = 0; j < g; ++j)
        for (int l = j; l < g; ++l, ++col) {
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(g, g);
            if (j == l)
                M(j, j) = 1.0;
            else
                M(j, l) = M(l, j) = 1.0;
            for (int s = 0; s < m; ++s) {
                const Eigen::VectorXcd dO = lead * (M * u_vector(k.curve, probes[s]));
                resp(s, col) = dO(s % g);
            }
        }
    return resp;
}

} // namespace bidiff
