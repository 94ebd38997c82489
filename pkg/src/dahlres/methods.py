"""Catalog of one-step methods and their stability functions.

A method is described by a :class:`MethodSpec`, usually parsed from a short
string such as ``"theta:0.5"``, ``"pade:4,4"`` or ``"tau:1"``; see
:func:`parse_spec` for the grammar.  :func:`resolve` turns a spec into the
rational function ``R(mu)`` with ``y_{n+1} = R(mu) y_n`` on ``y' = lambda*y``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Union

from .errors import BadParams, DegenerateSystem, UnknownBuiltin
from .ratfun import (
    ButcherTableau,
    Polynomial,
    RationalFunction,
    exact_series,
    pade_exp,
    pade_exp_fractions,
    series,
    stability_function,
)

__all__ = [
    "MethodSpec",
    "MethodInfo",
    "parse_spec",
    "resolve",
    "resolve_string",
    "exact_coefficients",
    "tau_stability_function",
    "tau_interpolant",
    "builtin_specs",
    "RKF4",
    "RKF5",
    "sdirk3_tableau",
    "ALIASES",
]

FAMILIES = ("theta", "taylor", "pade", "rk_tableau", "sdirk3", "tau")

ALIASES = {
    "euler": "theta:0",
    "midpoint": "theta:0.5",
    "backward-euler": "theta:1",
}

# Fehlberg 4(5) pair
_F = Fraction
_RKF_A = [
    [0, 0, 0, 0, 0, 0],
    [_F(1, 4), 0, 0, 0, 0, 0],
    [_F(3, 32), _F(9, 32), 0, 0, 0, 0],
    [_F(1932, 2197), _F(-7200, 2197), _F(7296, 2197), 0, 0, 0],
    [_F(439, 216), -8, _F(3680, 513), _F(-845, 4104), 0, 0],
    [_F(-8, 27), 2, _F(-3544, 2565), _F(1859, 4104), _F(-11, 40), 0],
]
_RKF_B4 = [_F(25, 216), 0, _F(1408, 2565), _F(2197, 4104), _F(-1, 5), 0]
_RKF_B5 = [_F(16, 135), 0, _F(6656, 12825), _F(28561, 56430), _F(-9, 50), _F(2, 55)]

RKF4 = ButcherTableau(_RKF_A, _RKF_B4, label="RKF45, 4th order weights")
RKF5 = ButcherTableau(_RKF_A, _RKF_B5, label="RKF45, 5th order weights")

_BUILTIN_TABLEAUS = {"rkf4": (RKF4, 4), "rkf5": (RKF5, 5)}
_RKF_WEIGHTS = {"rkf4": _RKF_B4, "rkf5": _RKF_B5}


def sdirk3_tableau(variant: str) -> ButcherTableau:
    """Two-stage third-order SDIRK; ``gamma = (3 +/- sqrt(3))/6``."""
    if variant == "large":
        g = (3 + math.sqrt(3)) / 6
    elif variant == "small":
        g = (3 - math.sqrt(3)) / 6
    else:
        raise BadParams(f"sdirk3 variant must be 'large' or 'small', got {variant!r}")
    return ButcherTableau([[g, 0.0], [1 - 2 * g, g]], [0.5, 0.5], label=f"SDIRK3 gamma={g:.6f}")


@dataclass(frozen=True)
class MethodSpec:
    family: str
    params: tuple
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadParams(f"unknown method family {self.family!r}")
        if not self.label:
            object.__setattr__(self, "label", self.canonical())

    def canonical(self) -> str:
        f, p = self.family, self.params
        if f == "theta":
            return f"theta:{_fmt_float(p[0])}"
        if f == "pade":
            return f"pade:{p[0]},{p[1]}"
        if f == "rk_tableau":
            return f"rk:{p[0]}" if isinstance(p[0], str) else f"rk:@{p[0].label or 'custom'}"
        return f"{f}:{p[0]}"

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class MethodInfo:
    spec: MethodSpec
    r: RationalFunction
    nominal_order: int


def _fmt_float(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise BadParams(f"{what} must be an integer, got {text!r}") from None


def load_tableau(path: Union[str, Path]) -> ButcherTableau:
    data = json.loads(Path(path).read_text())
    try:
        return ButcherTableau(data["a"], data["b"], label=data.get("label", Path(path).stem))
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParams(f"bad tableau file {path}: {exc}") from None


def parse_spec(text: str) -> MethodSpec:
    """Parse a method-spec string.

    Grammar::

        theta:<float>  taylor:<int>  pade:<int>,<int>  tau:<int>
        rk:rkf4  rk:rkf5  rk:@<tableau.json>  sdirk3:large  sdirk3:small

    plus the aliases ``euler``, ``midpoint`` and ``backward-euler``.
    """
    text = text.strip()
    text = ALIASES.get(text, text)
    family, sep, arg = text.partition(":")
    if not sep or not arg:
        raise BadParams(f"method spec must look like family:params, got {text!r}")
    if family == "theta":
        try:
            theta = float(arg)
        except ValueError:
            raise BadParams(f"theta must be a number, got {arg!r}") from None
        if not 0.0 <= theta <= 1.0:
            raise BadParams("theta must lie in [0, 1]")
        return MethodSpec("theta", (theta,))
    if family == "taylor":
        p = _int(arg, "taylor order")
        if not 1 <= p <= 64:
            raise BadParams("taylor order must be in 1..64")
        return MethodSpec("taylor", (p,))
    if family == "pade":
        parts = arg.split(",")
        if len(parts) != 2:
            raise BadParams("pade spec must be pade:<m>,<n>")
        m, n = (_int(x, "pade degree") for x in parts)
        if m < 0 or n < 0 or m + n < 1 or m + n > 64:
            raise BadParams("pade degrees must be >= 0 with 1 <= m+n <= 64")
        return MethodSpec("pade", (m, n))
    if family == "rk":
        if arg.startswith("@"):
            return MethodSpec("rk_tableau", (load_tableau(arg[1:]),))
        if arg not in _BUILTIN_TABLEAUS:
            raise UnknownBuiltin(f"unknown builtin tableau {arg!r}")
        return MethodSpec("rk_tableau", (arg,))
    if family == "sdirk3":
        if arg not in ("large", "small"):
            raise BadParams("sdirk3 variant must be 'large' or 'small'")
        return MethodSpec("sdirk3", (arg,))
    if family == "tau":
        n = _int(arg, "tau degree")
        if not 1 <= n <= 20:
            raise BadParams("tau degree must be in 1..20")
        return MethodSpec("tau", (n,))
    raise UnknownBuiltin(f"unknown method family {family!r}")


def _measured_order(coeffs, tol: float = 1e-10) -> int:
    p = -1
    for j, c in enumerate(coeffs):
        exact = 1.0 / math.factorial(j)
        if abs(c - exact) > tol * exact:
            break
        p = j
    return p


def resolve(spec: MethodSpec) -> MethodInfo:
    f, p = spec.family, spec.params
    if f == "theta":
        theta = float(p[0])
        r = RationalFunction([1, 1 - theta], [1, -theta])
        order = 2 if theta == 0.5 else 1
    elif f == "taylor":
        r = pade_exp(p[0], 0)
        order = p[0]
    elif f == "pade":
        r = pade_exp(p[0], p[1])
        order = p[0] + p[1]
    elif f == "rk_tableau":
        if isinstance(p[0], str):
            if p[0] not in _BUILTIN_TABLEAUS:
                raise UnknownBuiltin(f"unknown builtin tableau {p[0]!r}")
            tab, order = _BUILTIN_TABLEAUS[p[0]]
            r = stability_function(tab)
        else:
            r = stability_function(p[0])
            order = _measured_order(series(r, p[0].s + 2))
            if order < 1:
                raise BadParams("tableau is not consistent (R'(0) != 1)")
    elif f == "sdirk3":
        r = stability_function(sdirk3_tableau(p[0]))
        order = 3
    elif f == "tau":
        r = tau_stability_function(p[0])
        order = _tau_order(p[0])
    else:  # pragma: no cover - MethodSpec validates the family
        raise BadParams(f)
    return MethodInfo(spec, r, order)


def exact_coefficients(spec: MethodSpec):
    """``(num, den)`` of R as lists of Fractions, or None when R has irrational coefficients."""
    f, p = spec.family, spec.params
    if f == "theta":
        theta = Fraction(repr(float(p[0])))  # the decimal the user wrote
        return [Fraction(1), 1 - theta], [Fraction(1), -theta]
    if f == "taylor":
        return pade_exp_fractions(p[0], 0)
    if f == "pade":
        return pade_exp_fractions(p[0], p[1])
    if f == "tau":
        num, den = _tau_exact(p[0])
        return [Fraction(c) for c in num], [Fraction(c) for c in den]
    if f == "rk_tableau" and isinstance(p[0], str):
        # explicit: R = 1 + sum_j mu^j b A^(j-1) 1
        a, b = _RKF_A, _RKF_WEIGHTS[p[0]]
        v = [Fraction(1)] * len(b)
        num = [Fraction(1)]
        for _ in range(len(b)):
            num.append(sum(Fraction(bi) * vi for bi, vi in zip(b, v)))
            v = [sum(Fraction(a[i][j]) * v[j] for j in range(len(v))) for i in range(len(v))]
        return num, [Fraction(1)]
    return None


def resolve_string(text: str) -> MethodInfo:
    return resolve(parse_spec(text))


def builtin_specs() -> list[MethodSpec]:
    names = ["theta:0", "theta:0.5", "theta:1", "rk:rkf4", "rk:rkf5",
             "sdirk3:large", "sdirk3:small", "tau:1"]
    names += [f"taylor:{p}" for p in range(1, 17)]
    names += [f"pade:{n},{n}" for n in range(1, 17)]
    return [parse_spec(s) for s in names]


# --- Lanczos tau method -----------------------------------------------------
#
# Exact arithmetic over Z[mu]: polynomials are lists of Python ints, lowest
# power first.

def _ztrim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _zsub(a, b):
    n = max(len(a), len(b))
    return _ztrim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _zmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _zdiv_exact(a, b):
    """a / b in Z[mu]; the division must be exact."""
    a = list(a)
    if not a:
        return []
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        coef, rem = divmod(a[i + len(b) - 1], lead)
        if rem:
            raise DegenerateSystem("inexact division in fraction-free elimination")
        q[i] = coef
        if coef:
            for j, y in enumerate(b):
                a[i + j] -= coef * y
    if any(a):
        raise DegenerateSystem("inexact division in fraction-free elimination")
    return _ztrim(q)


def _bareiss_det(mat):
    """Determinant of a square matrix over Z[mu] (fraction-free elimination)."""
    m = [[list(e) for e in row] for row in mat]
    n = len(m)
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return []
        piv = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                m[i][j] = _zdiv_exact(_zsub(_zmul(m[i][j], piv), _zmul(mik, m[k][j])), prev)
            m[i][k] = []
        prev = piv
    det = m[n - 1][n - 1]
    return [sign * c for c in det]


def _cheb_antiderivatives(n: int) -> list[list[Fraction]]:
    """Chebyshev coefficients (length n+2) of an antiderivative of T_k, k = 0..n."""
    out = []
    for k in range(n + 1):
        c = [Fraction(0)] * (n + 2)
        if k == 0:
            c[1] = Fraction(1)
        elif k == 1:
            c[2] = Fraction(1, 4)
            c[0] = Fraction(1, 4)
        else:
            c[k + 1] = Fraction(1, 2 * k + 2)
            c[k - 1] = -Fraction(1, 2 * k - 2)
        out.append(c)
    return out


@lru_cache(maxsize=None)
def _tau_system(n: int):
    """Exact data of the degree-n tau method.

    With ``theta = -1 + 2t/h`` and ``h*y'(t)/y0 = sum_k d_k T_k(theta)`` the
    Chebyshev coefficients of ``y/y0`` are ``e_0 + B d``.  Requiring the
    T_0..T_n coefficients of ``y' - lambda*y`` to vanish gives
    ``(I - mu*B[:n+1]) d = mu*e_0``.
    """
    anti = _cheb_antiderivatives(n)
    at_minus_one = [sum(c * (-1) ** j for j, c in enumerate(col)) for col in anti]
    bmat = [[Fraction(1, 2) * (anti[k][j] - (at_minus_one[k] if j == 0 else 0))
             for k in range(n + 1)] for j in range(n + 2)]
    return bmat


def _lcm_den(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def _tau_ratio(n: int, weights: list[Fraction], offset: Fraction):
    """Exact ``offset + weights . d`` as (num, den) integer polynomials in mu."""
    bmat = _tau_system(n)
    size = n + 1
    scale = _lcm_den(x for row in bmat[:size] for x in row)
    # rows of [I - mu B | mu e0] scaled by `scale`; the bordered row by `wscale`
    rows = []
    for j in range(size):
        row = []
        for k in range(size):
            row.append(_ztrim([scale if j == k else 0, int(-bmat[j][k] * scale)]))
        row.append([0, scale] if j == 0 else [])
        rows.append(row)
    wscale = _lcm_den(list(weights) + [offset])
    border = [_ztrim([int(-w * wscale)]) for w in weights] + [_ztrim([int(offset * wscale)])]
    den = _bareiss_det([r[:size] for r in rows])
    if not den:
        raise DegenerateSystem(f"tau system of degree {n} is singular")
    num = _bareiss_det(rows + [border])
    den = [c * wscale for c in den]
    return num, den


def _to_rf(num, den) -> RationalFunction:
    d0 = den[0]
    return RationalFunction(Polynomial(Fraction(c, d0) for c in num),
                            Polynomial(Fraction(c, d0) for c in den))


@lru_cache(maxsize=None)
def _tau_exact(n: int):
    if not 1 <= n <= 20:
        raise BadParams("tau degree must be in 1..20")
    anti = _cheb_antiderivatives(n)
    # y(h)/y0 = 1 + (1/2) sum_k d_k (I_k(1) - I_k(-1)), T_j(1) = 1, T_j(-1) = (-1)^j
    weights = [Fraction(1, 2) * sum(c * (1 - (-1) ** j) for j, c in enumerate(col)) for col in anti]
    return _tau_ratio(n, weights, Fraction(1))


def tau_stability_function(n: int) -> RationalFunction:
    """Stability function of the Lanczos tau method with Chebyshev degree ``n``.

    Built exactly over the rationals and converted to floating point once.
    """
    num, den = _tau_exact(n)
    return _to_rf(num, den)


def tau_interpolant(n: int) -> list[RationalFunction]:
    """Chebyshev coefficients (in ``theta``) of the tau interpolant ``z/y0``, T_0..T_{n+1}."""
    if not 1 <= n <= 20:
        raise BadParams("tau degree must be in 1..20")
    bmat = _tau_system(n)
    out = []
    for j in range(n + 2):
        num, den = _tau_ratio(n, list(bmat[j]), Fraction(1 if j == 0 else 0))
        if not num:
            out.append(RationalFunction([0], [1]))
        else:
            out.append(_to_rf(num, den))
    return out


@lru_cache(maxsize=None)
def _tau_order(n: int) -> int:
    num, den = _tau_exact(n)
    coeffs = exact_series([Fraction(c) for c in num], [Fraction(c) for c in den], 2 * n + 4)
    p = -1
    for j, c in enumerate(coeffs):
        if c != Fraction(1, math.factorial(j)):
            break
        p = j
    return p

