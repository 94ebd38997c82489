"""Brute-force checks of the optimality claims.

Neither routine here uses the closed-form branch choice: :func:`scan_k`
enumerates branches, and :func:`min_max_control` searches directly over
piecewise-constant relative residuals that still connect ``y_n`` to
``y_{n+1}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backward_error
from .errors import NoFeasibleControl, ZeroArgument
from .methods import builtin_specs, resolve

__all__ = ["scan_k", "scan_k_array", "min_max_control", "verify", "VerifyReport"]

TWO_PI = 2.0 * math.pi
# relative slack under which two branch values count as a tie
_TIE = 8 * np.finfo(float).eps


def _branch_values(mu, log_r, ks):
    return np.abs((log_r + 1j * TWO_PI * ks) / mu - 1.0)


def _toward_zero_order(k_range: int) -> np.ndarray:
    ks = np.arange(-k_range, k_range + 1)
    return ks[np.lexsort((ks, np.abs(ks)))]


def scan_k(mu: complex, r_value: complex, k_range: int) -> int:
    """``argmin_k |(ln r_value + 2 pi i k)/mu - 1|`` over ``|k| <= k_range``; ties go toward 0."""
    if mu == 0 or r_value == 0:
        raise ZeroArgument("mu and r_value must be nonzero")
    if k_range < 1:
        raise ValueError("k_range must be positive")
    ks = _toward_zero_order(k_range)
    vals = _branch_values(complex(mu), backward_error.principal_log(r_value), ks)
    best = 0
    for i in range(1, len(ks)):
        if vals[i] < vals[best] * (1 - _TIE):
            best = i
    return int(ks[best])


def scan_k_array(mu, r_value, k_range: int) -> np.ndarray:
    """Vectorised :func:`scan_k` for arrays of points."""
    mu = np.asarray(mu, dtype=np.complex128)
    r_value = np.asarray(r_value, dtype=np.complex128)
    r_value = r_value.real + 1j * (r_value.imag + 0.0)
    log_r = np.log(r_value)
    ks = _toward_zero_order(k_range)
    best_k = np.zeros(mu.shape, dtype=np.int64)
    best_v = _branch_values(mu, log_r, 0)
    for k in ks[1:]:
        v = _branch_values(mu, log_r, k)
        better = v < best_v * (1 - _TIE)
        best_k = np.where(better, k, best_k)
        best_v = np.where(better, v, best_v)
    return best_k


def min_max_control(
    mu: complex,
    target_ratio: complex,
    pieces: int = 8,
    iterations: int = 200,
    restarts: int = 20,
    seed: int = 0,
    constant_start: bool = True,
) -> float:
    """Smallest ``max_j |u_j|`` found over piecewise-constant controls.

    The control ``u`` is constant on each of ``pieces`` equal subintervals
    of the step, and ``z' = lambda (1 + u) z`` must carry ``z(0) = 1`` to
    ``z(h) = target_ratio``, i.e. ``exp(mu (1 + mean(u))) = target_ratio``.
    For every branch ``k`` of the logarithm this fixes ``mean(u)``; the
    search runs projected pairwise coordinate descent (moves along
    ``e_j - e_l``, which keep the mean) from the constant start and from
    ``restarts`` seeded random starts, on every branch in a window.
    ``constant_start=False`` drops the constant start, leaving a purely
    random search.
    """
    if target_ratio == 0:
        raise NoFeasibleControl("target ratio 0 cannot be reached")
    if mu == 0:
        raise ZeroArgument("mu must be nonzero")
    if not 1 <= pieces <= 64:
        raise ValueError("pieces must be in 1..64")
    mu = complex(mu)
    k_range = 8 + int(abs(mu) // TWO_PI)
    ks = np.arange(-k_range, k_range + 1)
    means = (backward_error.principal_log(target_ratio) + 1j * TWO_PI * ks) / mu - 1.0

    rng = np.random.default_rng(seed)
    nb = ks.size
    scale = 1.0 + np.abs(means)[:, None, None]
    noise = rng.standard_normal((nb, restarts, pieces)) + 1j * rng.standard_normal((nb, restarts, pieces))
    u = scale * noise
    if constant_start:
        u = np.concatenate([np.zeros((nb, 1, pieces), complex), u], axis=1)
    u += (means[:, None] - u.mean(axis=-1))[..., None]

    if pieces > 1:
        rows = np.arange(u.shape[0] * u.shape[1])
        flat = u.reshape(-1, pieces)
        last = np.inf
        for it in range(iterations):
            if it % 16 == 15:
                # stop once the best objective has settled
                best = np.abs(flat).max(axis=1).min()
                if last - best <= 1e-15 * (1.0 + best):
                    break
                last = best
            j = np.argmax(np.abs(flat), axis=1)
            uj = flat[rows, j]
            pair = np.abs(uj[:, None] + flat)
            pair[rows, j] = np.inf
            l = np.argmin(pair, axis=1)
            avg = 0.5 * (uj + flat[rows, l])
            flat[rows, j] = avg
            flat[rows, l] = avg
        u = flat.reshape(u.shape)
        u += (means[:, None] - u.mean(axis=-1))[..., None]
    objective = np.abs(u).max(axis=-1)
    return float(objective.min())


@dataclass
class VerifyReport:
    passed: bool
    checked: int
    skipped: int
    counterexample: str | None = None


def verify(
    samples: int,
    seed: int,
    pieces: int = 8,
    restarts: int = 20,
    iterations: int = 200,
    bound_tol: float = 1e-6,
) -> VerifyReport:
    """Check branch choice and constant-residual optimality on random instances.

    Instance ``i`` uses builtin method ``i mod len(catalog)`` and a ``mu``
    drawn uniformly from ``[-20, 20]^2``.  Stops at the first failure.
    """
    rng = np.random.default_rng(seed)
    infos = [resolve(s) for s in builtin_specs()]
    checked = skipped = 0
    for i in range(samples):
        info = infos[i % len(infos)]
        mu = complex(rng.uniform(-20, 20), rng.uniform(-20, 20))
        if abs(mu) < 1e-3:
            skipped += 1
            continue
        sample = backward_error.optimal_delta(mu, info.r)
        if sample.singular:
            skipped += 1
            continue
        k_closed = backward_error.unwinding_k(mu, sample.r_value)
        k_scan = scan_k(mu, sample.r_value, 8)
        if k_closed != k_scan:
            return VerifyReport(False, checked, skipped,
                                f"{info.spec}: mu={mu!r}: unwinding_k={k_closed} but scan_k={k_scan}")
        best = min_max_control(mu, sample.r_value, pieces, iterations, restarts, seed + i)
        if not (sample.abs_delta - bound_tol <= best <= sample.abs_delta + bound_tol):
            return VerifyReport(False, checked, skipped,
                                f"{info.spec}: mu={mu!r}: min-max control {best!r} "
                                f"vs |delta|={sample.abs_delta!r}")
        checked += 1
    return VerifyReport(True, checked, skipped)
