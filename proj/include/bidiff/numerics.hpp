#pragma once

#include <functional>
#include <vector>

#include "bidiff/common.hpp"

namespace bidiff::num {

struct QuadratureRule {
    std::vector<double> nodes;   // in (-1, 1)
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1,1]. Nodes by Newton iteration on P_n; results
// are cached per n (thread safe).
const QuadratureRule& gauss_legendre(int n);

// Gauss-Chebyshev (first kind) rule for \int_{-1}^{1} g(t)/sqrt(1-t^2) dt.
// All weights equal pi/n; returned weights already include that factor.
const QuadratureRule& gauss_chebyshev(int n);

struct AdaptiveOptions {
    double rel_tol = 1e-11;
    int start_nodes = 16;
    int max_nodes = 1 << 16;
};

// Integrates f over the rule family, doubling the node count until two
// successive estimates differ by less than rel_tol*(1+|I|). The mixed
// absolute/relative criterion keeps genuinely zero integrals convergent.
// chebyshev=true means f is the reduced integrand g(t) of
// \int g(t)/sqrt(1-t^2) dt; otherwise plain \int f(t) dt.
Cplx integrate_adaptive(const std::function<Cplx(double)>& f, bool chebyshev,
                        const AdaptiveOptions& opt);

// Laurent data of a kernel-like function F(t) = a/t^2 + b/t + c + O(t),
// extracted from samples of g(t) = t^2 F(t) at t = rho*{1,i,-1,-i} for
// rho in {delta/2, delta, 2 delta} with Richardson extrapolation in rho^4.
struct LaurentJet {
    Cplx a;  // biresidue
    Cplx b;  // residue term
    Cplx c;  // finite part
    double err_estimate;
};

LaurentJet laurent_jet(const std::function<Cplx(Cplx)>& F, double delta);

// First three derivatives of an analytic map by an 8-point circle stencil
// with Richardson extrapolation (radii r and r/2).
struct Derivatives3 {
    Cplx d1, d2, d3;
};

Derivatives3 derivatives_123(const std::function<Cplx(Cplx)>& f, Cplx w, double r);

// Discrete Wirtinger d/d(conj z) via the 4-point stencil
// [(F(x+h)-F(x-h)) + i(F(x+ih)-F(x-ih))]/(4h); vanishes on holomorphic F
// up to O(h^2 f''').
Cplx dbar_stencil(const std::function<Cplx(Cplx)>& F, Cplx x, double h);

} // namespace bidiff::num
