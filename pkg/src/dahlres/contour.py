"""Level-set polylines by marching squares on node-sampled fields."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import EmptyLevels

__all__ = ["ContourSet", "DEFAULT_LEVELS", "marching_squares", "contours"]

DEFAULT_LEVELS = tuple(round(0.05 * i, 2) for i in range(1, 21))

# corner order in a cell: 0 (i, j), 1 (i, j+1), 2 (i+1, j+1), 3 (i+1, j)
# edge e joins corners _EDGE_CORNERS[e]
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))
# pairing of crossed edges for the non-ambiguous cases
_PAIRS = {}
for _case in range(1, 15):
    if _case in (5, 10):
        continue
    _bits = [(_case >> c) & 1 for c in range(4)]
    _crossed = [e for e, (p, q) in enumerate(_EDGE_CORNERS) if _bits[p] != _bits[q]]
    _PAIRS[_case] = (tuple(_crossed),)
# saddles, keyed by (case, centre above?)
_SADDLE = {
    (5, True): ((0, 1), (2, 3)),
    (5, False): ((3, 0), (1, 2)),
    (10, True): ((3, 0), (1, 2)),
    (10, False): ((0, 1), (2, 3)),
}


@dataclass(frozen=True, eq=False)
class ContourSet:
    levels: tuple
    polylines: list  # per level: list of (m, 2) arrays of (re, im)
    source: str
    bounds: tuple = dc_field(default=(0.0, 1.0, 0.0, 1.0))

    def closed(self, level_index: int) -> list[bool]:
        return [bool(np.array_equal(p[0], p[-1])) and len(p) > 2 for p in self.polylines[level_index]]


def _edge_key(i, j, e):
    # global edge id: ('h', row, col) joins (row,col)-(row,col+1); ('v', row, col) joins (row,col)-(row+1,col)
    if e == 0:
        return ("h", i, j)
    if e == 1:
        return ("v", i, j + 1)
    if e == 2:
        return ("h", i + 1, j)
    return ("v", i, j)


def marching_squares(values: np.ndarray, xs: np.ndarray, ys: np.ndarray, level: float) -> list[np.ndarray]:
    """Polylines where ``values`` crosses ``level``.

    ``values[i, j]`` sits at ``(xs[j], ys[i])``.  A node is *above* when its
    value is strictly greater than ``level`` or not finite, so a field equal
    to the level everywhere produces nothing.  Crossings are linearly
    interpolated along cell edges, except on edges touching a non-finite
    node, where the edge midpoint is used.  Closed polylines repeat their
    first point at the end.
    """
    v = np.asarray(values, dtype=float)
    finite = np.isfinite(v)
    above = ~finite | (v > level)
    ny, nx = v.shape
    case = (above[:-1, :-1].astype(np.int8)
            | above[:-1, 1:] << 1
            | above[1:, 1:] << 2
            | above[1:, :-1] << 3)
    rows, cols = np.nonzero((case != 0) & (case != 15))

    points: dict = {}

    def point(key):
        if key not in points:
            kind, i, j = key
            i2, j2 = (i, j + 1) if kind == "h" else (i + 1, j)
            a, b = v[i, j], v[i2, j2]
            if finite[i, j] and finite[i2, j2] and a != b:
                t = (level - a) / (b - a)
            else:
                t = 0.5
            points[key] = (xs[j] + t * (xs[j2] - xs[j]), ys[i] + t * (ys[i2] - ys[i]))
        return key

    segments = []
    for i, j in zip(rows.tolist(), cols.tolist()):
        c = int(case[i, j])
        if c in (5, 10):
            quad = v[i:i + 2, j:j + 2]
            centre_above = (not np.all(np.isfinite(quad))) or quad.mean() > level
            pairs = _SADDLE[(c, bool(centre_above))]
        else:
            pairs = _PAIRS[c]
        for e1, e2 in pairs:
            segments.append((point(_edge_key(i, j, e1)), point(_edge_key(i, j, e2))))

    adjacency: dict = {}
    for s, (a, b) in enumerate(segments):
        adjacency.setdefault(a, []).append(s)
        adjacency.setdefault(b, []).append(s)

    used = [False] * len(segments)

    def walk(start_key, first_seg):
        keys = [start_key]
        seg, cur = first_seg, start_key
        while seg is not None and not used[seg]:
            used[seg] = True
            a, b = segments[seg]
            cur = b if a == cur else a
            keys.append(cur)
            seg = next((s for s in adjacency[cur] if not used[s]), None)
        return keys

    lines = []
    # open polylines start at an edge used by only one segment (the grid border)
    for s, (a, b) in enumerate(segments):
        if used[s]:
            continue
        for end in (a, b):
            if len(adjacency[end]) == 1:
                lines.append(walk(end, s))
                break
    for s, (a, b) in enumerate(segments):
        if not used[s]:
            lines.append(walk(a, s))
    return [np.array([points[k] for k in keys]) for keys in lines]


def contours(field, source: str = "abs_delta", levels=DEFAULT_LEVELS) -> ContourSet:
    """Contour a :class:`~dahlres.field.Field` at each level."""
    levels = tuple(float(x) for x in levels)
    if not levels:
        raise EmptyLevels("no contour levels given")
    if any(x <= 0 for x in levels) or any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be positive and strictly increasing")
    values = field.values(source)
    g = field.grid
    xs, ys = g.re_nodes(), g.im_nodes()
    polylines = [marching_squares(values, xs, ys, lev) for lev in levels]
    return ContourSet(levels, polylines, source, (g.re_min, g.re_max, g.im_min, g.im_max))
