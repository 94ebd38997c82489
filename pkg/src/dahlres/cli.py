"""Command-line front end: ``dahlres {list,field,order,audit,verify}``.

Exit codes: 0 success, 2 usage error, 3 numerical failure or counterexample,
4 I/O failure.  Relative output paths are resolved against
``$DAHLRES_OUTPUT_DIR`` when it is set.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import oracle
from .backward_error import (
    SkeletonStep,
    alpha_from_skeleton,
    delta_series,
    evaluate,
    exact_delta_series,
    measure_order,
)
from .contour import DEFAULT_LEVELS, contours
from .errors import BadParams, DahlresError, EmptyLevels, IoFailure, SingularInRange, UnknownBuiltin
from .field import GridSpec, sample_field
from .io import emit_csv, emit_svg, load_presets
from .methods import ALIASES, builtin_specs, exact_coefficients, parse_spec, resolve

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

OUTPUT_DIR_ENV = "DAHLRES_OUTPUT_DIR"

# step sizes for the order fit; the coarse set is used when |delta| on the
# fine one falls to rounding level (high-order methods)
H_FINE = (0.1, 0.05, 0.025, 0.0125)
H_COARSE = tuple(0.5 * 2 ** (-j / 2) for j in range(4))
_DELTA_FLOOR = 1e-13
_DELTA_UNRESOLVED = 1e-14

# options whose values may begin with '-'
_SIGNED_OPTS = ("--window", "--lambda", "--levels")


class UsageError(Exception):
    pass


def _out_path(p: str) -> Path:
    path = Path(p)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _floats(text: str, n: int | None, what: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{what}: expected {n} numbers, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{what}: values must be finite")
    return vals


def _res(text: str) -> tuple[int, int]:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--res: expected N or NX,NY, got {text!r}") from None
    if len(parts) == 1:
        parts *= 2
    if len(parts) != 2:
        raise UsageError("--res: expected N or NX,NY")
    return parts[0], parts[1]


# --- subcommands -------------------------------------------------------------

def cmd_list(args) -> int:
    rows = []
    for spec in builtin_specs():
        info = resolve(spec)
        rows.append({"spec": str(spec), "family": spec.family, "order": info.nominal_order,
                     "num_degree": info.r.num.degree, "den_degree": info.r.den.degree})
    if args.json:
        print(json.dumps(rows, indent=1))
        return EXIT_OK
    width = max(len(r["spec"]) for r in rows)
    for r in rows:
        print(f"{r['spec']:<{width}}  order {r['order']:>2}  "
              f"R degree {r['num_degree']}/{r['den_degree']}")
    print("aliases: " + ", ".join(f"{k} = {v}" for k, v in ALIASES.items()))
    return EXIT_OK


def _field_setup(args):
    preset = None
    if args.preset:
        presets = load_presets()
        if args.preset not in presets:
            raise UsageError(f"unknown preset {args.preset!r}; known: {', '.join(presets)}")
        preset = presets[args.preset]
    method = args.method or (preset.method if preset else None)
    if method is None:
        raise UsageError("field needs a METHOD or --preset")
    if args.window:
        window = _floats(args.window, 4, "--window")
    elif preset:
        window = list(preset.window)
    else:
        window = [-6.0, 6.0, -6.0, 6.0]
    if args.res:
        nx, ny = _res(args.res)
    else:
        nx = ny = preset.res if preset else 256
    try:
        grid = GridSpec(*window, nx, ny)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    source = preset.source if preset else "abs_delta"
    return method, grid, source


def cmd_field(args) -> int:
    method, grid, source = _field_setup(args)
    if args.levels is None:
        levels = DEFAULT_LEVELS
    elif not args.levels.strip():
        raise EmptyLevels("--levels: no contour levels given")
    else:
        levels = _floats(args.levels, None, "--levels")
    info = resolve(parse_spec(method))
    f = sample_field(info, grid, workers=args.workers)

    if args.out:
        emit_csv(f, _out_path(args.out))
    if args.svg:
        sets = [contours(f, "abs_delta", levels)]
        if source != "abs_delta":
            sets.append(contours(f, source, [1.0]))
        emit_svg(f, sets, _out_path(args.svg), overlay="orderstar" if source == "orderstar" else "classical")

    finite = np.isfinite(f.abs_delta)
    small = finite & (f.abs_delta < 0.05)
    print(f"method {info.spec}  grid {grid.nx}x{grid.ny} on "
          f"[{grid.re_min:g},{grid.re_max:g}]x[{grid.im_min:g},{grid.im_max:g}]")
    print(f"nodes {f.abs_delta.size}  singular {int(f.singular.sum())}  "
          f"|delta|>1 {int((~finite | (f.abs_delta > 1)).sum())}")
    print(f"classical area {f.area(f.classical):.6g}  |delta|<0.05 area {f.area(small):.6g}")
    if small.any():
        im = f.mu.imag[small]
        print(f"|delta|<0.05 spans Im(mu) in [{im.min():.6g}, {im.max():.6g}]  "
              f"nonzero k there: {int((f.k[small] != 0).sum())} nodes")
    return EXIT_OK


def cmd_order(args) -> int:
    info = resolve(parse_spec(args.method))
    r = info.r
    print(f"method {info.spec}  nominal order {info.nominal_order}")
    hs = H_FINE
    try:
        if evaluate(r, -np.array(hs, complex)).abs_delta.min() < _DELTA_FLOOR:
            hs = H_COARSE
        low = evaluate(r, -np.array(hs, complex)).abs_delta.min()
        h_text = ", ".join(f"{h:.6g}" for h in hs)
        if low < _DELTA_UNRESOLVED:
            print(f"fitted slope: unresolved (|delta| reaches {low:.3g} on h = {h_text}, "
                  "below double-precision resolution)")
        else:
            print(f"fitted slope {measure_order(r, hs):.4f} over h = {h_text}")
    except SingularInRange as exc:
        print(f"fitted slope: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    n_terms = info.nominal_order + 6
    exact = exact_coefficients(info.spec)
    if exact is not None:
        coeffs = exact_delta_series(*exact, n_terms)
        nonzero = [(j, c) for j, c in enumerate(coeffs) if c != 0]
        kind = "exact"
    else:
        coeffs = delta_series(r, n_terms)
        nonzero = [(j, c) for j, c in enumerate(coeffs) if abs(c) > 1e-10 / math.factorial(j + 1)]
        kind = "floating point"
    if not nonzero:
        print(f"delta series ({kind}) vanishes through mu^{n_terms - 1}")
        return EXIT_OK
    print(f"series order {nonzero[0][0]} ({kind} delta series)")
    print("leading delta-series coefficients:")
    for j, c in nonzero[:2]:
        if isinstance(c, Fraction):
            print(f"  mu^{j}: {float(c):.12g} (= {c})")
        elif c.imag == 0:
            print(f"  mu^{j}: {c.real:.12g}")
        else:
            print(f"  mu^{j}: {c:.12g}")
    return EXIT_OK


def _read_skeleton(path: Path) -> list[tuple[float, complex]]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"cannot read skeleton {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != ["t", "y_re", "y_im"]:
        raise IoFailure(f"{path}: header must be t,y_re,y_im")
    out = []
    for n, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            t, yr, yi = (float(x) for x in row)
        except ValueError:
            raise IoFailure(f"{path}:{n}: expected three numbers") from None
        if out and t <= out[-1][0]:
            raise IoFailure(f"{path}:{n}: t must be strictly increasing")
        out.append((t, complex(yr, yi)))
    if len(out) < 2:
        raise IoFailure(f"{path}: need at least two skeleton points")
    return out


def cmd_audit(args) -> int:
    lam_parts = _floats(args.lam, None, "--lambda")
    if len(lam_parts) not in (1, 2):
        raise UsageError("--lambda: expected re or re,im")
    lam = complex(lam_parts[0], lam_parts[1] if len(lam_parts) == 2 else 0.0)
    if lam == 0:
        raise UsageError("--lambda must be nonzero")
    if not args.warn_level > 0:
        raise UsageError("--warn-level must be positive")
    pts = _read_skeleton(Path(args.skeleton))

    warn = fail = infinite = 0
    zero_start = None
    print("step,t_i,t_ip1,alpha,status")
    for i, ((t0, y0), (t1, y1)) in enumerate(zip(pts, pts[1:])):
        if y0 == 0:
            zero_start = i
            print(f"{i},{t0!r},{t1!r},nan,zero-start")
            break
        alpha = alpha_from_skeleton(SkeletonStep(t0, t1, y0, y1, lam))
        if math.isinf(alpha):
            status = "infinite"
            infinite += 1
        elif alpha > 1:
            status = "fail"
            fail += 1
        elif alpha > args.warn_level:
            status = "warn"
            warn += 1
        else:
            status = "ok"
        print(f"{i},{t0!r},{t1!r},{alpha!r},{status}")
    print(f"# steps {len(pts) - 1}  warn(>{args.warn_level:g}) {warn}  fail(>1) {fail}  "
          f"infinite {infinite}" + (f"  zero start at step {zero_start}" if zero_start is not None else ""),
          file=sys.stderr)
    return EXIT_NUMERIC if (fail or infinite or zero_start is not None) else EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    rep = oracle.verify(args.samples, args.seed, pieces=args.pieces, restarts=args.restarts)
    if rep.passed:
        print(f"PASS  checked {rep.checked}  skipped {rep.skipped}")
        return EXIT_OK
    print(f"FAIL  after {rep.checked} checks: {rep.counterexample}")
    return EXIT_NUMERIC


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    alias_text = ", ".join(f"{k} -> {v}" for k, v in ALIASES.items())
    p = argparse.ArgumentParser(
        prog="dahlres",
        description="Optimal relative backward error of one-step methods on y' = lambda*y.",
        epilog=("METHOD is one of theta:<t>, taylor:<p>, pade:<m>,<n>, rk:rkf4, rk:rkf5, "
                f"rk:@<tableau.json>, sdirk3:large, sdirk3:small, tau:<n>; aliases {alias_text}. "
                f"Relative output paths are placed under ${OUTPUT_DIR_ENV} when set."),
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list", help="list builtin methods and their orders")
    s.add_argument("--json", action="store_true", help="machine-readable output")
    s.set_defaults(func=cmd_list)

    s = sub.add_parser("field", help="sample |delta| over a window; write CSV and/or SVG")
    s.add_argument("method", nargs="?", help="method spec (optional with --preset)")
    s.add_argument("--window", help="re_min,re_max,im_min,im_max (default -6,6,-6,6)")
    s.add_argument("--res", help="N or NX,NY nodes (default 256)")
    s.add_argument("--preset", help="named figure window from the shipped presets")
    s.add_argument("--out", help="CSV output path")
    s.add_argument("--svg", help="SVG output path")
    s.add_argument("--levels", help="comma-separated contour levels (default 0.05..1.00)")
    s.add_argument("--workers", type=int, default=1, help="sampling threads (output is identical)")
    s.set_defaults(func=cmd_field)

    s = sub.add_parser("order", help="fit the order of accuracy and expand delta")
    s.add_argument("method")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("audit", help="optimal backward error of each step of a skeleton")
    s.add_argument("--skeleton", required=True, help="CSV with header t,y_re,y_im")
    s.add_argument("--lambda", dest="lam", required=True, help="re,im (or re)")
    s.add_argument("--warn-level", type=float, default=0.05, help="flag threshold (default 0.05)")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("verify", help="check branch choice and optimality against brute force")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--pieces", type=int, default=8)
    s.add_argument("--restarts", type=int, default=20)
    s.set_defaults(func=cmd_verify)
    return p


def _glue_signed(argv: list[str]) -> list[str]:
    # "--window -6,6,-6,6" would otherwise read -6,... as an option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_OPTS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_signed(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, BadParams, UnknownBuiltin, EmptyLevels) as exc:
        print(f"dahlres: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:  # IoFailure included
        print(f"dahlres: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DahlresError as exc:
        print(f"dahlres: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"dahlres: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
