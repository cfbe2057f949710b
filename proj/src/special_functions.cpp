#include "bidiff/special_functions.hpp"

#include <cmath>

namespace bidiff {
namespace {

struct ThetaVals {
    Cplx t1, d1, d2, d3;
};

// Raw q-series at the given tau. Assumes z already reduced to a cell around
// the origin; callers handle quasi-periodicity factors.
ThetaVals theta_series(Cplx z, Cplx tau) {
    const Cplx iptau = I * pi * tau;
    ThetaVals v{0.0, 0.0, 0.0, 0.0};
    double abs_scale = 0.0;
    int small_streak = 0;
    const int n_max = 4000;
    for (int n = 0; n < n_max; ++n) {
        const double half = n + 0.5;
        const Cplx base = 2.0 * (n % 2 == 0 ? 1.0 : -1.0) * std::exp(iptau * (half * half));
        const double k = (2 * n + 1) * pi;
        const Cplx s = std::sin(k * z), c = std::cos(k * z);
        v.t1 += base * s;
        v.d1 += base * k * c;
        v.d2 -= base * k * k * s;
        v.d3 -= base * k * k * k * c;
        const double mag =
            std::abs(base) * std::max(std::abs(s), std::abs(c)) * std::max(1.0, k * k * k);
        abs_scale = std::max(abs_scale, mag);
        if (mag < 1e-16 * abs_scale) {
            if (++small_streak >= 2) return v;
        } else {
            small_streak = 0;
        }
    }
    throw NoConvergence("theta1 series needs more than 4000 terms; Im(tau) too small");
}

// Modular reduction tau -> (a tau + b)/(c tau + d) into the fundamental
// domain |Re| <= 1/2, |tau| >= 1. mu = c tau + d rescales the lattice:
// Z + tau Z = mu (Z + tau_red Z).
struct TauRed {
    Cplx tau_red;
    Cplx mu;
    long a, b, c, d;
};

TauRed reduce_tau(Cplx tau) {
    long a = 1, b = 0, c = 0, d = 1;
    Cplx t = tau;
    for (int iter = 0; iter < 256; ++iter) {
        const double nr = std::round(t.real());
        const long n = static_cast<long>(nr);
        t -= nr;
        a -= n * c;
        b -= n * d;
        if (std::abs(t) >= 1.0 - 1e-14) {
            const Cplx mu = static_cast<double>(c) * tau + static_cast<double>(d);
            return {t, mu, a, b, c, d};
        }
        t = -1.0 / t;
        const long oa = a, ob = b;
        a = -c;
        b = -d;
        c = oa;
        d = ob;
    }
    throw NoConvergence("modular reduction of tau did not terminate");
}

// z = z0 + n + k tau with z0 in the centered cell.
struct ZRed {
    Cplx z0;
    long n, k;
};

ZRed reduce_z(Cplx z, Cplx tau) {
    const double q = z.imag() / tau.imag();
    const double p = z.real() - q * tau.real();
    const long k = std::lround(q);
    const long n = std::lround(p);
    return {z - static_cast<double>(n) - static_cast<double>(k) * tau, n, k};
}

double lattice_distance(Cplx z0, Cplx tau) {
    double best = std::abs(z0);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j)
            best = std::min(best,
                            std::abs(z0 - static_cast<double>(i) - static_cast<double>(j) * tau));
    return best;
}

void check_not_on_lattice(Cplx z0, Cplx tau, const char* who) {
    if (lattice_distance(z0, tau) < 1e-12)
        throw LatticePole(std::string(who) + ": z within 1e-12 of a lattice point");
}

// theta1'''(0)/(3 theta1'(0)); equals -eta1 at the same tau.
Cplx theta_c3(Cplx tau) {
    const ThetaVals t0 = theta_series(Cplx(0.0), tau);
    return t0.d3 / (3.0 * t0.d1);
}

} // namespace

Theta1Values theta1_with_derivatives(Cplx z, const Modulus& m) {
    const ZRed zr = reduce_z(z, m.tau);
    const ThetaVals th = theta_series(zr.z0, m.tau);
    if (zr.n == 0 && zr.k == 0) return {th.t1, th.d1, th.d2, th.d3};
    // theta1(z0 + n + k tau) = (-1)^{n+k} exp(-i pi k^2 tau - 2 pi i k z0) theta1(z0)
    const double sgn = ((zr.n + zr.k) % 2 == 0) ? 1.0 : -1.0;
    const double kk = static_cast<double>(zr.k);
    const Cplx lambda = -two_pi_i * kk;
    const Cplx C = sgn * std::exp(-I * pi * kk * kk * m.tau + lambda * zr.z0);
    Theta1Values out;
    out.t1 = C * th.t1;
    out.dz1 = C * (th.d1 + lambda * th.t1);
    out.dz2 = C * (th.d2 + 2.0 * lambda * th.d1 + lambda * lambda * th.t1);
    out.dz3 = C * (th.d3 + 3.0 * lambda * th.d2 + 3.0 * lambda * lambda * th.d1 +
                   lambda * lambda * lambda * th.t1);
    return out;
}

Cplx theta1(Cplx z, const Modulus& m) { return theta1_with_derivatives(z, m).t1; }

Cplx weierstrass_p(Cplx z, const Modulus& m) {
    const TauRed R = reduce_tau(m.tau);
    const ZRed zr = reduce_z(z / R.mu, R.tau_red);
    check_not_on_lattice(zr.z0, R.tau_red, "weierstrass_p");
    const ThetaVals th = theta_series(zr.z0, R.tau_red);
    const Cplx l1 = th.d1 / th.t1;
    const Cplx wp_red = -(th.d2 / th.t1 - l1 * l1) + theta_c3(R.tau_red);
    return wp_red / (R.mu * R.mu);
}

Cplx weierstrass_zeta(Cplx z, const Modulus& m) {
    const TauRed R = reduce_tau(m.tau);
    const ZRed zr = reduce_z(z / R.mu, R.tau_red);
    check_not_on_lattice(zr.z0, R.tau_red, "weierstrass_zeta");
    const ThetaVals th = theta_series(zr.z0, R.tau_red);
    const Cplx c3 = theta_c3(R.tau_red);
    const Cplx zeta0 = th.d1 / th.t1 - c3 * zr.z0;
    // Quasi-periods of the reduced lattice restore the removed cell shifts.
    const Cplx eta1p = -c3;
    const ThetaVals thh = theta_series(0.5 * R.tau_red, R.tau_red);
    const Cplx eta2p = 2.0 * thh.d1 / thh.t1 - c3 * R.tau_red;
    const Cplx val =
        zeta0 + static_cast<double>(zr.n) * eta1p + static_cast<double>(zr.k) * eta2p;
    return val / R.mu;
}

QuasiPeriods quasi_periods(const Modulus& m) {
    const TauRed R = reduce_tau(m.tau);
    const Cplx c3 = theta_c3(R.tau_red);
    const Cplx eta1p = -c3;
    const ThetaVals thh = theta_series(0.5 * R.tau_red, R.tau_red);
    const Cplx eta2p = 2.0 * thh.d1 / thh.t1 - c3 * R.tau_red;
    // Periods 1 and tau of the original lattice are mu^{-1}(a - c tau_red)
    // and mu^{-1}(-b + d tau_red) in the reduced one; quasi-periods are
    // additive over the period lattice.
    const double a = static_cast<double>(R.a), b = static_cast<double>(R.b);
    const double c = static_cast<double>(R.c), d = static_cast<double>(R.d);
    QuasiPeriods qp;
    qp.eta1 = (a * eta1p - c * eta2p) / R.mu;
    qp.eta2 = (-b * eta1p + d * eta2p) / R.mu;
    return qp;
}

Cplx lattice_sum_oracle(Cplx z, const Modulus& m, int shells) {
    if (shells < 50)
        throw ConfigError("lattice_sum_oracle: shells must be >= 50, got " +
                          std::to_string(shells));
    const ZRed zr = reduce_z(z, m.tau);
    check_not_on_lattice(zr.z0, m.tau, "lattice_sum_oracle");
    // Exact horizontal row sums: sum_m 1/(u - m)^2 = pi^2 / sin^2(pi u).
    const auto inv_sin2 = [](Cplx w) -> Cplx {
        if (std::abs(w.imag()) > 300.0) return 0.0; // |1/sin^2| < 1e-260, avoids overflow
        const Cplx s = std::sin(w);
        return 1.0 / (s * s);
    };
    const double pi2 = pi * pi;
    const Cplx pz = pi * z;
    Cplx acc = pi2 * inv_sin2(pz) - pi2 / 3.0;
    for (int n = 1; n <= shells; ++n) {
        const Cplx wn = pi * static_cast<double>(n) * m.tau;
        acc += pi2 * (inv_sin2(pz - wn) + inv_sin2(pz + wn) - 2.0 * inv_sin2(wn));
    }
    return acc;
}

} // namespace bidiff
