#!/usr/bin/env python3
"""Reference periods for the genus-2 model y^2 = x^5 - 5x^3 + 4x.

Computes the a/b-period matrices of the differentials x^{j-1}/y dx over the
collapsed-cut contours (cuts [-2,-1], [0,1], ray from 2; a_k twice over cut k
with upper-side y; b_k twice over the gaps between the right end of cut k and
the ray start -- the legs over intermediate cuts cancel).

Upper-side branch values on the real axis, for sigma = +1 and positive
leading coefficient:
    on cut j   : y = (-1)^(g-j) sqrt(|P|)
    on the gap following cut j : y = i (-1)^(g-1-j) sqrt(|P|)

Each segment integral is regularized by x = c + r cos(theta), which removes
the inverse-square-root endpoint singularities exactly.

Run: python3 gen_periods_reference.py   (requires mpmath)
The printed constants are pasted into test_periods.cpp.
"""

from mpmath import mp, mpf, mpc, sqrt, cos, pi, quad, matrix, nstr

mp.dps = 40

ROOTS = [mpf(-2), mpf(-1), mpf(0), mpf(1), mpf(2)]
G = 2
LEAD = mpf(1)


def reduced_abs_sqrt_p(a, b, x):
    """sqrt(|P(x)| / ((x-a)(b-x))) for x in segment [a, b] of consecutive roots."""
    acc = abs(LEAD)
    for r in ROOTS:
        if r != a and r != b:
            acc *= abs(x - r)
    return sqrt(acc)


def segment_period(j, a, b, unit):
    """2 * integral_a^b x^{j-1}/y dx with y = unit * sqrt(|P|) on [a, b].

    Substituting x = c + r cos(t) turns 1/sqrt((x-a)(b-x)) dx into dt, so the
    endpoint singularities of 1/y disappear analytically.
    """
    c = (a + b) / 2
    r = (b - a) / 2

    def g(t):
        x = c + r * cos(t)
        return x ** (j - 1) / (unit * reduced_abs_sqrt_p(a, b, x))

    return 2 * quad(g, [0, pi])


def cut_unit(j):
    return (-1) ** (G - j)


def gap_unit(j):  # gap [e_{2j+1}, e_{2j+2}]
    return 1j * (-1) ** (G - 1 - j)


def a_period(j, k):
    return segment_period(j, ROOTS[2 * k], ROOTS[2 * k + 1], cut_unit(k))


def b_period(j, k):
    # The b-cycle runs out on sheet + above the axis and returns on sheet -
    # below it (the ray crossing glues upper+ to lower-). Over gaps the legs
    # add; over intermediate cuts the lower-side sheet-minus y equals the
    # upper-side sheet-plus y, so those segments cancel exactly.
    total = mpc(0)
    for seg in range(2 * k + 1, 2 * G, 2):
        a, b = ROOTS[seg], ROOTS[seg + 1]
        total += segment_period(j, a, b, gap_unit((seg - 1) // 2))
    return total


def main():
    pa = matrix(G, G)
    pb = matrix(G, G)
    for j in range(1, G + 1):
        for k in range(G):
            pa[j - 1, k] = a_period(j, k)
            pb[j - 1, k] = b_period(j, k)
    tau = pa ** -1 * pb
    print("pi_a:")
    for j in range(G):
        print("  ", [nstr(pa[j, k], 25) for k in range(G)])
    print("pi_b:")
    for j in range(G):
        print("  ", [nstr(pb[j, k], 25) for k in range(G)])
    print("tau:")
    for j in range(G):
        print("  ", [nstr(tau[j, k], 25) for k in range(G)])
    print("tau symmetry residual:", nstr(abs(tau[0, 1] - tau[1, 0]), 5))
    print("Im tau eigen sign check: det Im =",
          nstr(tau[0, 0].imag * tau[1, 1].imag - tau[0, 1].imag * tau[1, 0].imag, 10),
          " Im tau_11 =", nstr(tau[0, 0].imag, 10))


if __name__ == "__main__":
    main()
