"""Regenerate ``frozen.json``: reference values from sympy/mpmath.

Nothing here imports dahlres.  The tau method is solved directly from its
definition (Chebyshev expansion of z, zero the low residual coefficients),
RK stability functions come from 1 + mu b^T (I - mu A)^-1 1, and residuals
are evaluated in 50-digit arithmetic with an explicit scan over branches.

    python tests/oracles/generate_frozen.py
"""
import json
from pathlib import Path

import mpmath as mp
import sympy as sp

mp.mp.dps = 50
mu = sp.symbols("mu")
OUT = Path(__file__).with_name("frozen.json")


def coeffs(expr):
    """Numerator/denominator coefficient strings (lowest power first), denominator made monic."""
    num, den = sp.fraction(sp.together(sp.simplify(expr)))
    pn, pd = sp.Poly(sp.expand(num), mu), sp.Poly(sp.expand(den), mu)
    lead = pd.LC()
    n = [sp.nsimplify(c / lead) for c in reversed(pn.all_coeffs())]
    d = [sp.nsimplify(c / lead) for c in reversed(pd.all_coeffs())]
    return [str(c) for c in n], [str(c) for c in d]


def tau_direct(n):
    # z(theta) = sum_{k<=n+1} a_k T_k(theta), theta = -1 + 2t/h, mu = lambda h
    th = sp.symbols("theta")
    a = sp.symbols(f"a0:{n + 2}")
    z = sum(a[k] * sp.chebyshevt(k, th) for k in range(n + 2))
    resid = sp.expand(2 * sp.diff(z, th) - mu * z)  # h * (z' - lambda z)
    eqs = [sp.Eq(z.subs(th, -1), 1)]
    poly = sp.Poly(resid, th)
    # Chebyshev coefficients of the residual via orthogonality-free change of basis
    cheb = sp.symbols(f"c0:{n + 2}")
    basis = sum(cheb[k] * sp.chebyshevt(k, th) for k in range(n + 2))
    sol_c = sp.solve(sp.Poly(sp.expand(basis - resid), th).all_coeffs(), cheb, dict=True)[0]
    eqs += [sp.Eq(sol_c[cheb[k]], 0) for k in range(n + 1)]
    sol = sp.solve(eqs, a, dict=True)[0]
    return sp.factor(sp.simplify(z.subs(sol).subs(th, 1)))


def rk_direct(A, b):
    A, b = sp.Matrix(A), sp.Matrix(b)
    s = A.shape[0]
    one = sp.ones(s, 1)
    return sp.simplify(1 + mu * (b.T * (sp.eye(s) - mu * A).LUsolve(one))[0])


RKF_A = [[0, 0, 0, 0, 0, 0],
         [sp.Rational(1, 4), 0, 0, 0, 0, 0],
         [sp.Rational(3, 32), sp.Rational(9, 32), 0, 0, 0, 0],
         [sp.Rational(1932, 2197), sp.Rational(-7200, 2197), sp.Rational(7296, 2197), 0, 0, 0],
         [sp.Rational(439, 216), -8, sp.Rational(3680, 513), sp.Rational(-845, 4104), 0, 0],
         [sp.Rational(-8, 27), 2, sp.Rational(-3544, 2565), sp.Rational(1859, 4104), sp.Rational(-11, 40), 0]]
RKF_B4 = [sp.Rational(25, 216), 0, sp.Rational(1408, 2565), sp.Rational(2197, 4104), sp.Rational(-1, 5), 0]
RKF_B5 = [sp.Rational(16, 135), 0, sp.Rational(6656, 12825), sp.Rational(28561, 56430),
          sp.Rational(-9, 50), sp.Rational(2, 55)]


def mp_delta(r_num, r_den, z):
    """Optimal delta at complex z by scanning branches |k| <= 12 in 50 digits."""
    z = mp.mpc(z)
    R = sum(mp.mpf(sp.Rational(c).p) / sp.Rational(c).q * z**j for j, c in enumerate(r_num)) / \
        sum(mp.mpf(sp.Rational(c).p) / sp.Rational(c).q * z**j for j, c in enumerate(r_den))
    best = None
    for k in sorted(range(-12, 13), key=lambda k: (abs(k), k)):
        d = (mp.log(R) + 2j * mp.pi * k) / z - 1
        if best is None or abs(d) < abs(best[1]) * (1 - mp.mpf(10) ** -40):
            best = (k, d)
    return best[0], [str(best[1].real), str(best[1].imag)], str(abs(best[1])), [str(R.real), str(R.imag)]


def delta_series_sym(expr, n):
    s = sp.series(sp.log(expr) / mu - 1, mu, 0, n).removeO()
    return [str(sp.nsimplify(s.coeff(mu, j))) for j in range(n)]


def pade_sym(m, n):
    # independent route: sympy's own rational interpolation of the exp series
    from sympy import exp
    t = sp.series(exp(mu), mu, 0, m + n + 1).removeO()
    pc = [t.coeff(mu, j) for j in range(m + n + 1)]
    q = sp.symbols(f"q1:{n + 1}")
    den = [1, *q]
    eqs = [sum(den[i] * pc[j - i] for i in range(n + 1) if 0 <= j - i) for j in range(m + 1, m + n + 1)]
    sol = sp.solve(eqs, q, dict=True)[0] if n else {}
    den = [sp.nsimplify(sp.sympify(d).subs(sol)) for d in den]
    num = [sum(den[i] * pc[j - i] for i in range(min(j, n) + 1)) for j in range(m + 1)]
    return coeffs(sum(c * mu**j for j, c in enumerate(num)) / sum(c * mu**j for j, c in enumerate(den)))


def main():
    out = {}
    out["tau"] = {str(n): coeffs(tau_direct(n)) for n in range(1, 5)}
    out["tau1_delta_series"] = delta_series_sym(tau_direct(1), 7)
    g = sp.symbols("gamma")
    sd = rk_direct([[g, 0], [1 - 2 * g, g]], [sp.Rational(1, 2), sp.Rational(1, 2)])
    out["sdirk_symbolic"] = str(sp.factor(sd))
    out["sdirk"] = {}
    for name, gv in (("large", (3 + sp.sqrt(3)) / 6), ("small", (3 - sp.sqrt(3)) / 6)):
        num, den = sp.fraction(sp.together(sd.subs(g, gv)))
        pn, pd = sp.Poly(sp.expand(num), mu), sp.Poly(sp.expand(den), mu)
        lead = pd.LC()
        out["sdirk"][name] = {
            "num": [str(sp.N(c / lead, 30)) for c in reversed(pn.all_coeffs())],
            "den": [str(sp.N(c / lead, 30)) for c in reversed(pd.all_coeffs())],
            "series": [str(sp.N(c, 30)) for c in
                       [sp.series(sd.subs(g, gv), mu, 0, 5).removeO().coeff(mu, j) for j in range(5)]],
        }
    out["rkf4"] = coeffs(rk_direct(RKF_A, RKF_B4))
    out["rkf5"] = coeffs(rk_direct(RKF_A, RKF_B5))
    out["pade"] = {f"{m},{n}": pade_sym(m, n) for m, n in [(1, 1), (2, 2), (0, 1), (3, 0), (2, 3), (4, 4)]}
    out["delta_series"] = {
        "theta:0": delta_series_sym(1 + mu, 6),
        "pade:2,2": delta_series_sym((1 + mu / 2 + mu**2 / 12) / (1 - mu / 2 + mu**2 / 12), 8),
        "rk:rkf4": delta_series_sym(sp.sympify(rk_direct(RKF_A, RKF_B4)), 7),
    }
    # pointwise residuals
    euler = (["1", "1"], ["1"])
    mid = (["1", "1/2"], ["1", "-1/2"])
    tau1 = out["tau"]["1"]
    p16 = pade_sym(16, 16)
    out["pade16"] = p16
    pts = {
        "euler@-2": (euler, -2),
        "euler@-1.9": (euler, -1.9),
        "euler@-0.5": (euler, -0.5),
        "euler@1+3j": (euler, 1 + 3j),
        "midpoint@0.2": (mid, 0.2),
        "midpoint@-3+7j": (mid, -3 + 7j),
        "tau1@0.1": (tau1, 0.1),
        "tau1@-1e-4": (tau1, -1e-4),
        "pade16@10j": (p16, 10j),
        "pade16@-5+25j": (p16, -5 + 25j),
        "pade16@2-17j": (p16, 2 - 17j),
    }
    out["points"] = {}
    for key, ((n_, d_), z) in pts.items():
        k, d, ad, R = mp_delta(n_, d_, z)
        out["points"][key] = {"mu": [z.real if isinstance(z, complex) else z,
                                     z.imag if isinstance(z, complex) else 0.0],
                              "k": k, "delta": d, "abs_delta": ad, "R": R}
    out["alpha_1_1_2"] = str(abs(1 - mp.log(2)))
    out["alpha_euler_half"] = str(abs(mp.log(mp.mpf("0.5")) / mp.mpf("-0.5") - 1))
    OUT.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
