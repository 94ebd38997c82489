"""Optimal relative backward error of a one-step method on ``y' = lambda*y``.

A method advancing ``y_{n+1} = R(mu) y_n`` with ``mu = lambda*h`` is, over
one step, the exact solution of ``z' = lambda*(1 + delta)*z`` with the
constant

    delta = (ln R(mu) + 2*pi*i*k) / mu - 1,

and no interpolant from ``y_n`` to ``y_{n+1}`` has a smaller sup-norm
relative residual.  The integer ``k`` selects the branch of the logarithm
that makes ``|delta|`` smallest; see :func:`unwinding_k`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import (
    InconsistentMethod,
    PoleAtPoint,
    SingularInRange,
    SingularTarget,
    ZeroArgument,
    ZeroLambda,
    ZeroMu,
    ZeroStart,
)
from .ratfun import RationalFunction, exact_series, series

__all__ = [
    "OrderStar",
    "ResidualSample",
    "SampleArrays",
    "SkeletonStep",
    "OptimalInterpolant",
    "principal_log",
    "log_branch",
    "round_half_toward_zero",
    "unwinding_k",
    "optimal_delta",
    "evaluate",
    "optimal_interpolant",
    "alpha_from_skeleton",
    "measure_order",
    "delta_series",
    "exact_delta_series",
]

TWO_PI = 2.0 * math.pi


class OrderStar(IntEnum):
    """Side of the order star ``|R(mu) e^-mu| = 1``."""

    A_minus = -1
    A_zero = 0
    A_plus = 1


@dataclass(frozen=True)
class ResidualSample:
    mu: complex
    k: int
    delta: complex
    abs_delta: float
    r_value: complex
    classical_inside: bool
    orderstar_class: OrderStar
    singular: bool


class SampleArrays(NamedTuple):
    """Kernel output for many points at once, see :mod:`dahlres._pykernel`."""

    k: np.ndarray
    delta: np.ndarray
    r: np.ndarray
    abs_delta: np.ndarray
    classical: np.ndarray
    orderstar: np.ndarray
    singular: np.ndarray


@dataclass(frozen=True)
class SkeletonStep:
    t_i: float
    t_ip1: float
    y_i: complex
    y_ip1: complex
    lam: complex

    @property
    def h(self) -> float:
        return self.t_ip1 - self.t_i

    @property
    def mu(self) -> complex:
        return self.lam * self.h


@dataclass(frozen=True)
class OptimalInterpolant:
    """``z(t) = y_start * exp(lambda_eff * t)`` on ``0 <= t <= h``."""

    y_start: complex
    lambda_eff: complex
    h: float

    def __call__(self, t):
        return self.y_start * np.exp(self.lambda_eff * np.asarray(t))

    def relative_residual(self, lam: complex) -> complex:
        # z' = lambda_eff z = lam (1 + delta) z
        return self.lambda_eff / lam - 1.0


def principal_log(z: complex) -> complex:
    """``ln z`` with imaginary part in (-pi, pi]; a negative zero imaginary part counts as +0."""
    z = complex(z)
    return cmath.log(complex(z.real, z.imag + 0.0))


def log_branch(z: complex, k: int) -> complex:
    """``ln_k z = ln z + 2 pi i k``."""
    return principal_log(z) + complex(0.0, TWO_PI * k)


def round_half_toward_zero(a: float) -> int:
    return int(math.copysign(math.ceil(abs(a) - 0.5), a))


def unwinding_k(mu: complex, r_value: complex) -> int:
    """Branch index minimizing ``|ln_k(r_value)/mu - 1|``.

    ``k = [Im(mu - ln r_value) / 2 pi]``, half-integers rounded toward zero.
    """
    if mu == 0 or r_value == 0:
        raise ZeroArgument("mu and r_value must be nonzero")
    a = (complex(mu).imag - principal_log(r_value).imag) / TWO_PI
    return round_half_toward_zero(a)


def _coeff_arrays(r: RationalFunction):
    return r.num.as_array(), r.den.as_array(), r.minus_one().as_array()


def evaluate(r: RationalFunction, mu, backend: str | None = None) -> SampleArrays:
    """Vectorised :func:`optimal_delta` over an array of nonzero ``mu``."""
    mu = np.asarray(mu, dtype=np.complex128)
    if np.any(mu == 0):
        raise ZeroMu("mu = 0 is excluded")
    out = kernels.get(backend).sample(*_coeff_arrays(r), mu.ravel())
    return SampleArrays(*(a.reshape(mu.shape) for a in out))


def optimal_delta(mu: complex, r: RationalFunction) -> ResidualSample:
    """Optimal relative backward error of ``R`` at one point ``mu``."""
    mu = complex(mu)
    if mu == 0:
        raise ZeroMu("mu = 0 is excluded")
    out = evaluate(r, np.array([mu]))
    return ResidualSample(
        mu=mu,
        k=int(out.k[0]),
        delta=complex(out.delta[0]),
        abs_delta=float(out.abs_delta[0]),
        r_value=complex(out.r[0]),
        classical_inside=bool(out.classical[0]),
        orderstar_class=OrderStar(int(out.orderstar[0])),
        singular=bool(out.singular[0]),
    )


def optimal_interpolant(step: SkeletonStep, r: RationalFunction) -> OptimalInterpolant:
    """Constant-residual interpolant through ``(t_i, y_i)`` and ``(t_ip1, R(mu) y_i)``."""
    if step.h <= 0:
        raise ValueError("t_ip1 must exceed t_i")
    if step.y_i == 0:
        raise ZeroStart("y_i = 0")
    mu = step.mu
    if mu == 0:
        raise ZeroMu("lambda*h = 0")
    sample = optimal_delta(mu, r)
    if sample.singular:
        if math.isinf(abs(sample.r_value)):
            raise PoleAtPoint(f"mu={mu!r} is a pole of R")
        raise SingularTarget("R(mu) = 0: the interpolant would have to reach zero")
    return OptimalInterpolant(complex(step.y_i), step.lam * (1.0 + sample.delta), step.h)


def alpha_from_skeleton(step: SkeletonStep) -> float:
    """Smallest sup-norm relative residual of any interpolant of one skeleton step."""
    if step.y_i == 0:
        raise ZeroStart("y_i = 0")
    if step.lam == 0:
        raise ZeroLambda("lambda = 0")
    if step.h <= 0:
        raise ValueError("t_ip1 must exceed t_i")
    if step.y_ip1 == 0:
        return math.inf
    mu = complex(step.mu)
    ratio = complex(step.y_ip1) / complex(step.y_i)
    k = unwinding_k(mu, ratio)
    return abs(log_branch(ratio, k) / mu - 1.0)


def measure_order(r: RationalFunction, h_values: Sequence[float]) -> float:
    """Least-squares slope of ``log|delta(-h)|`` against ``log h``."""
    hs = np.asarray(h_values, dtype=float)
    if hs.size < 4:
        raise ValueError("need at least 4 step sizes")
    if np.any(hs <= 0) or np.any(hs > 0.5):
        raise ValueError("step sizes must lie in (0, 0.5]")
    if np.any(np.diff(hs) >= 0):
        raise ValueError("step sizes must be strictly decreasing")
    out = evaluate(r, -hs.astype(np.complex128))
    if np.any(out.singular):
        raise SingularInRange(f"R vanishes or has a pole at mu = {-hs[out.singular][0]}")
    if np.any(out.abs_delta == 0):
        raise ValueError("backward error is exactly zero; order is undefined")
    slope, _ = np.polyfit(np.log(hs), np.log(out.abs_delta), 1)
    return float(slope)


def _delta_from_series(s, n_terms: int, zero):
    # L = ln s satisfies s L' = s'; delta = L/mu - 1
    logc = [zero] * (n_terms + 1)
    for j in range(1, n_terms + 1):
        acc = j * s[j]
        for i in range(1, j):
            acc -= i * logc[i] * s[j - i]
        logc[j] = acc / j
    out = logc[1:]
    out[0] -= 1
    return out


def delta_series(r: RationalFunction, n_terms: int) -> list[complex]:
    """Maclaurin coefficients of ``delta(mu) = ln R(mu)/mu - 1`` (branch k = 0)."""
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    s = series(r, n_terms + 1)
    if abs(s[0] - 1) > 1e-12:
        raise InconsistentMethod(f"R(0) = {s[0]!r} != 1")
    s[0] = 1.0
    return _delta_from_series(s, n_terms, 0j)


def exact_delta_series(num: Sequence[Fraction], den: Sequence[Fraction], n_terms: int) -> list[Fraction]:
    """:func:`delta_series` over exact rationals, for ``R = num/den``."""
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    s = exact_series(num, den, n_terms + 1)
    if s[0] != 1:
        raise InconsistentMethod(f"R(0) = {s[0]} != 1")
    return _delta_from_series(s, n_terms, Fraction(0))
