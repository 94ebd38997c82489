"""Complex polynomials and rational functions in one variable.

Coefficients are stored densely, lowest power first.  Everything here is
immutable, so instances can be shared freely between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import PoleAtPoint, SeriesAtPole

__all__ = [
    "Polynomial",
    "RationalFunction",
    "ButcherTableau",
    "eval_rf",
    "series",
    "pade_exp",
    "stability_function",
    "POLE_TOL",
]

#: |den(mu)| below this is treated as a pole
POLE_TOL = 1e-300
#: default chop level for coefficients produced by floating-point determinants
CHOP_TOL = 1e-14


def _as_complex(c) -> complex:
    if isinstance(c, Fraction):
        c = float(c)
    c = complex(c)
    # drop signed zeros so that Horner on real data keeps +0 imaginary parts
    return complex(c.real + 0.0, c.imag + 0.0)


class Polynomial:
    """Dense polynomial with complex coefficients, ``coeffs[j]`` multiplies ``mu**j``.

    Trailing coefficients that are exactly zero are dropped on construction;
    use :meth:`chop` to drop roundoff-level noise as well.  The empty tuple is
    the zero polynomial.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    def chop(self, tol: float = CHOP_TOL) -> "Polynomial":
        """Zero out coefficients with modulus <= tol (then trim)."""
        return Polynomial(0j if abs(c) <= tol else c for c in self.coeffs)

    def __call__(self, mu: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * mu + c
        return acc

    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0j,) * (n - len(self.coeffs))
        b = other.coeffs + (0j,) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        out = Polynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.complex128)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial([x])


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """``num(mu) / den(mu)`` with a monic denominator.

    The constructor accepts polynomials or plain coefficient sequences and
    rescales both parts so that the leading denominator coefficient is 1.
    """

    num: Polynomial
    den: Polynomial

    def __init__(self, num, den=(1,)):
        num = num if isinstance(num, Polynomial) else Polynomial(num)
        den = den if isinstance(den, Polynomial) else Polynomial(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        lead = den.leading
        if lead != 1:
            num = Polynomial(c / lead for c in num.coeffs)
            den = Polynomial(c / lead for c in den.coeffs)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __call__(self, mu: complex) -> complex:
        return eval_rf(self, mu)

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def series(self, n_terms: int) -> list[complex]:
        return series(self, n_terms)

    def minus_one(self) -> Polynomial:
        """Numerator of ``R - 1`` over the same denominator."""
        return self.num - self.den

    def cross_difference(self, other: "RationalFunction") -> Polynomial:
        """``num*other.den - other.num*den``; zero iff the functions agree."""
        return self.num * other.den - other.num * self.den

    def close_to(self, other: "RationalFunction", tol: float = 1e-12) -> bool:
        return self.cross_difference(other).max_abs_coeff() <= tol

    def reflect(self) -> "RationalFunction":
        """The function ``mu -> R(-mu)``."""
        flip = lambda p: Polynomial(c * (-1) ** j for j, c in enumerate(p.coeffs))
        return RationalFunction(flip(self.num), flip(self.den))

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __repr__(self) -> str:
        return f"RationalFunction(num={list(self.num.coeffs)!r}, den={list(self.den.coeffs)!r})"


def eval_rf(rf: RationalFunction, mu: complex) -> complex:
    """Evaluate ``rf`` at ``mu``; raises :class:`PoleAtPoint` on a pole."""
    d = rf.den(mu)
    if abs(d) < POLE_TOL:
        raise PoleAtPoint(f"mu={mu!r} is a pole")
    return rf.num(mu) / d


def _series_division(a: Sequence, d: Sequence, n_terms: int, zero):
    out = []
    d0 = d[0]
    for j in range(n_terms):
        acc = a[j] if j < len(a) else zero
        for i in range(1, min(j, len(d) - 1) + 1):
            acc -= d[i] * out[j - i]
        out.append(acc / d0)
    return out


def series(rf: RationalFunction, n_terms: int) -> list[complex]:
    """First ``n_terms`` Maclaurin coefficients of ``rf`` by long division."""
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    if not rf.den.coeffs or rf.den.coeffs[0] == 0:
        raise SeriesAtPole("denominator vanishes at mu = 0")
    return _series_division(rf.num.coeffs, rf.den.coeffs, n_terms, 0j)


def exact_series(num: Sequence[Fraction], den: Sequence[Fraction], n_terms: int) -> list[Fraction]:
    """Same recursion over exact rationals."""
    if not den or den[0] == 0:
        raise SeriesAtPole("denominator vanishes at mu = 0")
    return _series_division(list(num), list(den), n_terms, Fraction(0))


def pade_exp_fractions(m: int, n: int) -> tuple[list[Fraction], list[Fraction]]:
    """Exact coefficients of the (m, n) Pade approximant of exp, ``den[0] == 1``."""
    f = math.factorial
    tot = f(m + n)
    num = [Fraction(f(m + n - j) * f(m), tot * f(j) * f(m - j)) for j in range(m + 1)]
    den = [Fraction((-1) ** j * f(m + n - j) * f(n), tot * f(j) * f(n - j)) for j in range(n + 1)]
    return num, den


def pade_exp(m: int, n: int) -> RationalFunction:
    """(m, n) Pade approximant of ``exp(mu)``, numerator degree m, denominator degree n."""
    if m < 0 or n < 0:
        raise ValueError("degrees must be nonnegative")
    if m + n > 64:
        raise ValueError("m + n must not exceed 64")
    num, den = pade_exp_fractions(m, n)
    return RationalFunction(Polynomial(num), Polynomial(den))


@dataclass(frozen=True)
class ButcherTableau:
    a: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        a = tuple(tuple(float(x) for x in row) for row in self.a)
        b = tuple(float(x) for x in self.b)
        s = len(b)
        if s == 0 or len(a) != s or any(len(row) != s for row in a):
            raise ValueError("tableau must have a square s x s matrix a and len(b) == s")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def s(self) -> int:
        return len(self.b)

    @property
    def c(self) -> tuple[float, ...]:
        return tuple(sum(row) for row in self.a)

    @property
    def is_explicit(self) -> bool:
        return all(self.a[i][j] == 0.0 for i in range(self.s) for j in range(i, self.s))


def _det_poly(m: np.ndarray) -> list[float]:
    """Coefficients of ``det(I - mu*M)`` via Faddeev-LeVerrier."""
    s = m.shape[0]
    eye = np.eye(s)
    coeffs = [1.0]
    nmat = eye
    for k in range(1, s + 1):
        am = m @ nmat
        ck = -np.trace(am) / k
        coeffs.append(float(ck))
        nmat = am + ck * eye
    return coeffs


def stability_function(tab: ButcherTableau) -> RationalFunction:
    """``det(I - mu*A + mu*1*b^T) / det(I - mu*A)`` for a Runge-Kutta tableau."""
    a = np.array(tab.a, dtype=float)
    b = np.array(tab.b, dtype=float)
    ones = np.ones(tab.s)
    if tab.is_explicit:
        # R = 1 + sum_j b^T A^(j-1) 1 mu^j; A is nilpotent so the sum is finite
        coeffs = [1.0]
        v = ones
        for _ in range(tab.s):
            coeffs.append(float(b @ v))
            v = a @ v
        return RationalFunction(Polynomial(coeffs), Polynomial([1.0]))
    num = Polynomial(_det_poly(a - np.outer(ones, b))).chop()
    den = Polynomial(_det_poly(a)).chop()
    return RationalFunction(num, den)
