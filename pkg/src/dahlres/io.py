"""CSV and SVG output for sampled fields, and the figure-window presets."""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .contour import ContourSet
from .errors import IoFailure
from .field import Field, GridSpec

__all__ = ["CSV_COLUMNS", "emit_csv", "read_csv", "emit_svg", "Preset", "load_presets"]

CSV_COLUMNS = ("mu_re", "mu_im", "k", "delta_re", "delta_im", "abs_delta",
               "abs_R", "classical", "orderstar", "singular")


def _g(x: float) -> str:
    return format(x, ".17g")


def emit_csv(field: Field, path) -> None:
    """One row per node, row-major (rows run along Im(mu)), 17 significant digits."""
    cols = [
        field.mu.real.ravel().tolist(),
        field.mu.imag.ravel().tolist(),
        field.k.ravel().tolist(),
        field.delta.real.ravel().tolist(),
        field.delta.imag.ravel().tolist(),
        field.abs_delta.ravel().tolist(),
        np.abs(field.r).ravel().tolist(),
        field.classical.ravel().astype(int).tolist(),
        field.orderstar.ravel().astype(int).tolist(),
        field.singular.ravel().astype(int).tolist(),
    ]
    lines = [",".join(CSV_COLUMNS)]
    for mr, mi, k, dr, di, ad, ar, c, o, s in zip(*cols):
        lines.append(f"{_g(mr)},{_g(mi)},{k},{_g(dr)},{_g(di)},{_g(ad)},{_g(ar)},{c},{o},{s}")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a file written by :func:`emit_csv`."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected header {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


# |delta| colour ramp over the twenty 5% bands; |delta| > 1 stays white
_RAMP = ["#08306b", "#0b4083", "#105195", "#1764ab", "#2171b5", "#2f7fbc", "#3e8ec4",
         "#519ccc", "#62a8d3", "#75b4d8", "#8cc0dd", "#a0cbe2", "#b2d2e8", "#c2ddec",
         "#d0e3f0", "#dbe9f6", "#e3eef8", "#eaf2fa", "#f1f6fc", "#f7fbff"]


def _runs(mask_row: np.ndarray):
    """(start, stop) index pairs of True runs."""
    padded = np.concatenate([[False], mask_row, [False]])
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    return zip(edges[::2], edges[1::2])


def emit_svg(field: Field, contour_sets, path, width: int = 600, overlay: str = "classical") -> None:
    """Static SVG 1.1 picture of a field.

    Nodes are filled by 5% band of ``|delta|`` (white where ``|delta| > 1``),
    the classical region ``|R| <= 1`` (or the order-star region A_minus with
    ``overlay="orderstar"``) is shaded grey on top, and each contour set is
    stroked.  Contour polylines carry ``data-source`` and ``data-level``.
    """
    g = field.grid
    height = int(round(width * (g.im_max - g.im_min) / (g.re_max - g.re_min)))
    sx = width / (g.re_max - g.re_min)
    sy = height / (g.im_max - g.im_min)
    cw, ch = g.dx * sx, g.dy * sy

    def px(re, im):
        return (re - g.re_min) * sx, (g.im_max - im) * sy

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" data-window="{g.re_min},{g.re_max},{g.im_min},{g.im_max}">',
        f"<title>{field.label}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        '<g id="residual" shape-rendering="crispEdges">',
    ]
    ad = field.abs_delta
    band = np.where(ad > 1.0, -1, np.minimum(np.floor(np.where(np.isfinite(ad), ad, 0) / 0.05), 19)).astype(int)
    for i in range(g.ny):
        y = (g.ny - 1 - i) * ch
        for b in range(20):
            for a, e in _runs(band[i] == b):
                out.append(f'<rect x="{a * cw:.3f}" y="{y:.3f}" width="{(e - a) * cw:.3f}" '
                           f'height="{ch:.3f}" fill="{_RAMP[b]}"/>')
    out.append("</g>")

    if overlay:
        shade = field.classical if overlay == "classical" else field.orderstar < 0
        out.append(f'<g id="{overlay}" fill="#000000" fill-opacity="0.25" shape-rendering="crispEdges">')
        for i in range(g.ny):
            y = (g.ny - 1 - i) * ch
            for a, e in _runs(shade[i]):
                out.append(f'<rect x="{a * cw:.3f}" y="{y:.3f}" width="{(e - a) * cw:.3f}" height="{ch:.3f}"/>')
        out.append("</g>")

    for cs in contour_sets:
        dash = ' stroke-dasharray="3,2"' if cs.source != "abs_delta" else ""
        out.append(f'<g class="contours" data-source="{cs.source}" fill="none" stroke="#000000" '
                   f'stroke-width="0.6"{dash}>')
        for level, lines in zip(cs.levels, cs.polylines):
            for line in lines:
                pts = " ".join("%.3f,%.3f" % px(re, im) for re, im in line)
                out.append(f'<polyline data-level="{level:g}" points="{pts}"/>')
        out.append("</g>")
    out.append("</svg>")
    try:
        Path(path).write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


@dataclass(frozen=True)
class Preset:
    name: str
    method: str
    window: tuple
    res: int
    source: str = "abs_delta"
    description: str = ""

    def grid(self) -> GridSpec:
        return GridSpec.square(self.window, self.res)


def load_presets(path=None) -> dict[str, Preset]:
    """Figure windows from the shipped ``presets.ini`` (or another INI file)."""
    cp = configparser.ConfigParser()
    if path is None:
        cp.read_string(resources.files("dahlres").joinpath("presets.ini").read_text())
    else:
        if not cp.read(path):
            raise IoFailure(f"cannot read presets file {path}")
    presets = {}
    for name in cp.sections():
        sec = cp[name]
        window = tuple(float(x) for x in sec["window"].split(","))
        if len(window) != 4 or not all(math.isfinite(x) for x in window):
            raise ValueError(f"preset {name}: window needs four numbers")
        presets[name] = Preset(name, sec["method"], window, sec.getint("res", 256),
                               sec.get("source", "abs_delta"), sec.get("description", ""))
    return presets
