#include "bidiff/moduli.hpp"

#include "bidiff/special_functions.hpp"

#include <cmath>
#include <string>

namespace bidiff {

namespace {

// both Wirtinger derivatives from one cross of samples at step s
struct CrossDerivatives {
    Cplx dbar, dtau;
};

// corrected-kernel pipeline for one elliptic modulus
Kernel eta_kernel_genus1(Cplx tau) {
    const Curve e = make_elliptic(tau);
    const PeriodData pd = period_matrices(e, holomorphic_basis(e));
    return hodge_correct(a_normalize(base_kernel(e), pd), pd);
}

// perturb one coefficient and rebuild, demanding the same branch-point
// arrangement as the base curve
Curve perturbed_curve(const Curve& base, int index, Cplx eps) {
    std::vector<Cplx> coeffs = base.coeffs;
    coeffs[static_cast<std::size_t>(index)] += eps;
    Curve c;
    try {
        c = make_hyperelliptic(coeffs);
    } catch (const DegenerateCurve& e) {
        throw ContourTopologyChanged(std::string("perturbed curve degenerated: ") +
                                     e.what());
    }
    for (std::size_t j = 0; j < c.roots.size(); ++j)
        if (std::abs(c.roots[j] - base.roots[j]) > 0.3 * base.min_gap)
            throw ContourTopologyChanged(
                "a branch point moved by a large fraction of the base gap");
    return c;
}

// flat AffineX connection coefficient of the corrected kernel at a tracked
// point held fixed in the x-coordinate across the deformation
Cplx traced_connection(const Curve& base, int index, Cplx eps, Cplx x_track) {
    const Curve c = perturbed_curve(base, index, eps);
    const PeriodData pd = period_matrices(c, holomorphic_basis(c));
    const Kernel eta = hodge_correct(a_normalize(base_kernel(c), pd), pd);
    const DiagonalJet jet =
        diagonal_jet(eta, Chart{}, SurfacePoint{x_track, y_plus(c, x_track)});
    return 6.0 * jet.finite_part;
}

// projection of S(zeta) onto the zeta-bar component over a symmetric sample
// family: sum S_k zeta_k / sum |zeta_k|^2. On a circle this is the Fourier
// coefficient of e^{-i theta}; on a symmetric segment along unit direction p
// it returns dbar + dtau * p^2 - the advertised contamination of line paths.
Cplx antiholomorphic_projection(const std::vector<Cplx>& values,
                                const std::vector<Cplx>& offsets) {
    Cplx num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        num += values[k] * offsets[k];
        den += std::norm(offsets[k]);
    }
    return num / den;
}

} // namespace

double SiegelReference::density(Cplx tau) const {
    if (!(tau.imag() > 0.0))
        throw BadConfiguration("Siegel density is defined on the upper half-plane");
    return 1.0 / (tau.imag() * tau.imag());
}

Cplx eta_coefficient_genus1(Cplx tau) {
    const Kernel eta = eta_kernel_genus1(tau);
    const DiagonalJet jet =
        diagonal_jet(eta, Chart{ChartKind::FlatZ, +1}, SurfacePoint{Cplx(0.23, 0.31), 0.0});
    const Cplx c = 6.0 * jet.finite_part;
    const Cplx closed = 6.0 * (quasi_periods(Modulus(tau)).eta1 - pi / tau.imag());
    if (std::abs(c - closed) > 1e-6 * (1.0 + std::abs(c)))
        throw ContractViolation(
            "jet-extracted connection coefficient disagrees with the closed form");
    return c;
}

std::vector<ModuliSample> dbar_scan(const std::vector<Cplx>& tau_grid, double h) {
    if (tau_grid.empty()) throw BadConfiguration("empty moduli grid");
    if (!(h > 0.0) || h > 1e-3)
        throw StepTooLarge("dbar step must satisfy 0 < h <= 1e-3");

    std::vector<ModuliSample> out;
    out.reserve(tau_grid.size());
    for (const Cplx tau : tau_grid) {
        if (!(tau.imag() > h))
            throw BadConfiguration("grid point too close to the real axis");

        const auto cross = [&](double s) {
            const Cplx cxp = eta_coefficient_genus1(tau + s);
            const Cplx cxm = eta_coefficient_genus1(tau - s);
            const Cplx cyp = eta_coefficient_genus1(tau + Cplx(0.0, s));
            const Cplx cym = eta_coefficient_genus1(tau - Cplx(0.0, s));
            const Cplx dx = cxp - cxm, dy = cyp - cym;
            return CrossDerivatives{(dx + I * dy) / (4.0 * s),
                                    (dx - I * dy) / (4.0 * s)};
        };
        const CrossDerivatives coarse = cross(h);
        const CrossDerivatives fine = cross(0.5 * h);
        if (!std::isfinite(std::abs(fine.dtau)))
            throw NoConvergence("holomorphic derivative of the section overflowed");

        ModuliSample ms;
        ms.tau = tau;
        ms.c = eta_coefficient_genus1(tau);
        ms.dbar_c = (4.0 * fine.dbar - coarse.dbar) / 3.0; // removes the h^2 error
        ms.kappa = ms.dbar_c * tau.imag() * tau.imag();
        ms.richardson_residual =
            std::abs(fine.dbar - ms.dbar_c) / (1.0 + std::abs(ms.dbar_c));
        if (ms.richardson_residual > 1e-6)
            throw StepTooLarge("dbar estimates at h and h/2 are not consistent");
        out.push_back(ms);
    }
    return out;
}

Genus2Trace genus2_section_trace(const Curve& base, const PerturbationPath& path,
                                 int steps) {
    if (base.kind != CurveKind::Hyperelliptic)
        throw BadConfiguration("section trace needs a hyperelliptic base curve");
    if (path.coeff_index < 0 ||
        path.coeff_index >= static_cast<int>(base.coeffs.size()))
        throw BadConfiguration("perturbed coefficient index out of range");
    if (!(path.magnitude >= 0.0))
        throw BadConfiguration("perturbation magnitude must be nonnegative");
    if (path.circle && steps < 4)
        throw BadConfiguration("circle paths need at least 4 samples per radius");

    const double dn = std::abs(path.direction);
    const Cplx p = dn > 0.0 ? path.direction / dn : Cplx(0.0);
    const Cplx x_track(base.x_ref, 1.0);

    Genus2Trace tr;
    tr.inconclusive = !path.circle;

    const auto sample = [&](Cplx eps) {
        const Cplx s = traced_connection(base, path.coeff_index, eps, x_track);
        tr.samples.push_back(TracePoint{eps, s});
        return s;
    };
    sample(Cplx(0.0));

    // one symmetric family of offsets per scale; circle paths can separate
    // the two Wirtinger components, segments cannot
    const auto family = [&](double r) {
        std::vector<Cplx> offs;
        if (path.circle) {
            offs.reserve(static_cast<std::size_t>(steps));
            for (int k = 0; k < steps; ++k)
                offs.push_back(r * p * std::polar(1.0, 2.0 * pi * k / steps));
        } else {
            offs = {r * p, -r * p};
        }
        return offs;
    };
    const auto projection_at = [&](double r) {
        const std::vector<Cplx> offs = family(r);
        std::vector<Cplx> vals;
        vals.reserve(offs.size());
        for (const Cplx eps : offs) vals.push_back(sample(eps));
        return antiholomorphic_projection(vals, offs);
    };

    if (path.magnitude == 0.0 || p == Cplx(0.0)) {
        tr.dbar = 0.0; // zero path: no variation by construction
        return tr;
    }
    const Cplx coarse = projection_at(path.magnitude);
    const Cplx fine = projection_at(0.5 * path.magnitude);
    tr.dbar = (4.0 * fine - coarse) / 3.0;
    tr.richardson_residual = std::abs(fine - coarse) / (1e-12 + std::abs(tr.dbar));
    return tr;
}

} // namespace bidiff
