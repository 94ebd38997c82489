"""Sampling the optimal backward error over rectangular windows of the mu-plane."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import backward_error
from .backward_error import OrderStar, ResidualSample
from .methods import MethodInfo, MethodSpec, parse_spec, resolve
from .ratfun import RationalFunction

__all__ = ["GridSpec", "Field", "sample_field", "BLOCK_ROWS"]

#: rows per work unit; fixed so results never depend on the worker count
BLOCK_ROWS = 16

SOURCES = ("abs_delta", "abs_R", "orderstar")


@dataclass(frozen=True)
class GridSpec:
    """``nx`` by ``ny`` cell-centred nodes covering a window of the mu-plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("grid window must have re_min < re_max and im_min < im_max")
        if self.nx < 8 or self.ny < 8:
            raise ValueError("grid needs at least 8 nodes per direction")
        xs, ys = self.re_nodes(), self.im_nodes()
        if np.any(xs == 0) and np.any(ys == 0):
            raise ValueError("grid would place a node at mu = 0; change the resolution or window")

    @classmethod
    def square(cls, window, res: int) -> "GridSpec":
        a, b, c, d = window
        return cls(float(a), float(b), float(c), float(d), int(res), int(res))

    @property
    def dx(self) -> float:
        return (self.re_max - self.re_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.im_max - self.im_min) / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    def re_nodes(self) -> np.ndarray:
        return self.re_min + (np.arange(self.nx) + 0.5) * self.dx

    def im_nodes(self) -> np.ndarray:
        return self.im_min + (np.arange(self.ny) + 0.5) * self.dy

    def mu(self) -> np.ndarray:
        """Node values, shape ``(ny, nx)``; row index runs along Im(mu)."""
        xs, ys = self.re_nodes(), self.im_nodes()
        return xs[None, :] + 1j * ys[:, None]

    def nearest(self, mu: complex) -> tuple[int, int]:
        """``(row, col)`` of the node nearest to ``mu``."""
        col = int(np.clip(np.floor((mu.real - self.re_min) / self.dx), 0, self.nx - 1))
        row = int(np.clip(np.floor((mu.imag - self.im_min) / self.dy), 0, self.ny - 1))
        return row, col


@dataclass(frozen=True, eq=False)
class Field:
    """Per-node results of :func:`sample_field`, all arrays shaped ``(ny, nx)``."""

    grid: GridSpec
    label: str
    mu: np.ndarray
    k: np.ndarray
    delta: np.ndarray
    r: np.ndarray
    abs_delta: np.ndarray
    classical: np.ndarray
    orderstar: np.ndarray
    singular: np.ndarray

    def sample(self, row: int, col: int) -> ResidualSample:
        return ResidualSample(
            mu=complex(self.mu[row, col]),
            k=int(self.k[row, col]),
            delta=complex(self.delta[row, col]),
            abs_delta=float(self.abs_delta[row, col]),
            r_value=complex(self.r[row, col]),
            classical_inside=bool(self.classical[row, col]),
            orderstar_class=OrderStar(int(self.orderstar[row, col])),
            singular=bool(self.singular[row, col]),
        )

    def values(self, source: str) -> np.ndarray:
        """Scalar field for contouring; non-finite entries mean 'above every level'."""
        if source == "abs_delta":
            return self.abs_delta
        if source == "abs_R":
            return np.abs(self.r)
        if source == "orderstar":
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                return np.exp(np.log(np.abs(self.r)) - self.mu.real)
        raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")

    def area(self, mask: np.ndarray) -> float:
        """Node-counting area of a boolean region."""
        return float(np.count_nonzero(mask)) * self.grid.cell_area


MethodLike = Union[str, MethodSpec, MethodInfo, RationalFunction]


def _as_rf(method: MethodLike) -> tuple[RationalFunction, str]:
    if isinstance(method, RationalFunction):
        return method, "custom"
    if isinstance(method, str):
        method = parse_spec(method)
    if isinstance(method, MethodSpec):
        method = resolve(method)
    return method.r, method.spec.label


def sample_field(method: MethodLike, grid: GridSpec, workers: int = 1,
                 backend: str | None = None) -> Field:
    """Evaluate the optimal backward error at every node of ``grid``.

    Rows are processed in fixed blocks of :data:`BLOCK_ROWS`; ``workers``
    only changes how many blocks run at once, never the numbers produced.
    """
    r, label = _as_rf(method)
    mu = grid.mu()
    ny, nx = mu.shape
    out = {
        "k": np.empty((ny, nx), np.int64),
        "delta": np.empty((ny, nx), np.complex128),
        "r": np.empty((ny, nx), np.complex128),
        "abs_delta": np.empty((ny, nx), np.float64),
        "classical": np.empty((ny, nx), bool),
        "orderstar": np.empty((ny, nx), np.int8),
        "singular": np.empty((ny, nx), bool),
    }
    blocks = [(s, min(s + BLOCK_ROWS, ny)) for s in range(0, ny, BLOCK_ROWS)]

    def run(block):
        lo, hi = block
        res = backward_error.evaluate(r, mu[lo:hi], backend=backend)
        for name, arr in zip(res._fields, res):
            out[name][lo:hi] = arr

    if workers <= 1:
        for b in blocks:
            run(b)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))
    return Field(grid=grid, label=label, mu=mu, **out)
