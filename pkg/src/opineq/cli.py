"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from contextlib import nullcontext
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import scalar_analysis as sa
from . import scalar_bounds as sb
from .testing import perturbed_m_factor
from .verifier.generators import TrialConfig
from .verifier.rng import MASK64
from .verifier.runner import (
    DEFAULT_DIMS,
    TrialReport,
    format_report,
    no_ordering_probe,
    run_suite,
    suite_ids,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

H_OF_C_REFERENCE = -0.0000354367
H_OF_C_TOL = 1e-8


class UsageError(Exception):
    pass


def _g(x: float, digits: int = 6) -> str:
    return f"{x + 0.0:+.{digits}g}"


def _csv_num(x) -> str:
    return f"{float(x) + 0.0:.17g}"


# ---------------------------------------------------------------- repro


def cmd_repro(args, out) -> int:
    """Reproduce the four no-ordering gaps and the sign constant h(c)."""
    c = Fraction(127, 625)
    fault = perturbed_m_factor() if args.inject_fault else nullcontext()
    if args.inject_fault:
        c = Fraction(128, 625)
    with fault:
        rows = no_ordering_probe()
    ok = True
    print(f"{'point':<16} {'gap':<22} {'reference':>10}  verdict", file=out)
    for r in rows:
        point = f"(v={r.v:g},x={r.x:g})"
        verdict = "PASS" if r.ok else "FAIL"
        ok &= r.ok
        print(f"{point:<16} {r.label} {_g(r.gap):>12} {r.reference:>+10.3g}  {verdict}", file=out)
        if not r.ok:
            print(f"    diff from reference {_g(r.gap - r.reference)}; expected sign "
                  f"{'+' if r.expected_sign > 0 else '-'}", file=out)
    h = float(sa.log_gap(float(c)))
    h_ok = abs(h - H_OF_C_REFERENCE) <= H_OF_C_TOL
    ok &= h_ok
    print(f"h(c)={h:+.10f} reference={H_OF_C_REFERENCE:+.10f} c={c} "
          f"{'PASS' if h_ok else 'FAIL'}", file=out)
    if not h_ok:
        print(f"    diff from reference {_g(h - H_OF_C_REFERENCE)}", file=out)
    pattern = "".join("+" if r.gap > 0 else "-" for r in rows)
    print(f"sign pattern {pattern} (expected +-+-)", file=out)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- verify

_CSV_HEAD = ["id", "dim", "attempted", "passed", "failed", "skipped", "worst_margin", "status"]


def _report_rows(reports: list[TrialReport]):
    for r in reports:
        yield [r.id, "" if r.dim is None else r.dim, r.attempted, r.passed, r.failed,
               r.skipped, _csv_num(r.worst_margin), r.status]


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_verify(args, out) -> int:
    dims = args.dim or list(DEFAULT_DIMS)
    kw = {"seed": args.seed & MASK64, "tol": args.tol}
    if args.samples is not None:
        kw["samples"] = args.samples
    cfg = TrialConfig(dim=dims[0], **kw)
    out_dir = Path(args.out) if args.out else None
    if out_dir is not None:
        _ensure_dir(out_dir)
    reports = run_suite(suite_ids(args.scope), cfg, dims=dims, out_dir=out_dir)
    text = format_report(reports)
    gating = [r for r in reports if r.gating_failure]
    review = [r for r in reports if r.status == "REVIEW"]
    summary = (f"{len(reports)} reports, {len(gating)} failing, {len(review)} flagged for review; "
               f"seed={cfg.seed} samples={cfg.samples} scalar_samples={cfg.scalar_count} "
               f"dims={','.join(map(str, dims))}\n")
    out.write(text + summary)
    if out_dir is not None:
        with open(out_dir / "report.txt", "w", newline="\n") as fh:
            fh.write(text + summary)
        _write_csv(out_dir / "report.csv", _CSV_HEAD, _report_rows(reports))
    return EXIT_FAIL if gating else EXIT_OK


def _ensure_dir(path: Path) -> None:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {path}: {exc}") from None


# ---------------------------------------------------------------- sweep


def _m_minus_kr(v, x):
    return sb.m_factor(v, x) - sb.kantorovich(x) ** np.minimum(v, 1 - v)


def _kr_minus_m(v, x):
    return sb.kantorovich(x) ** np.maximum(v, 1 - v) - sb.M_factor(v, x)


_EXTRA_TARGETS = {
    "m_minus_Kr": (("v", "x"), _m_minus_kr),
    "KR_minus_M": (("v", "x"), _kr_minus_m),
    "m_factor": (("v", "x"), sb.m_factor),
    "M_factor": (("v", "x"), sb.M_factor),
}


def sweep_targets() -> dict:
    targets = {name: (e.params, e.func) for name, e in sa.CATALOG.items()}
    targets.update(_EXTRA_TARGETS)
    return targets


_GRID_RE = re.compile(r"^(\w+)=([^:]+):([^:]+):(\d+)(?::(lin|log))?$")


def parse_grid(text: str):
    """``name=lo:hi:count[:log]`` -> (name, lo, hi, count, spacing)."""
    m = _GRID_RE.match(text.strip())
    if not m:
        raise UsageError(f"bad grid spec {text!r}; expected name=lo:hi:count[:log]")
    name, lo, hi, count, spacing = m.groups()
    try:
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise UsageError(f"bad grid bounds in {text!r}") from None
    count = int(count)
    spacing = spacing or "lin"
    if count < 2:
        raise UsageError(f"grid {name}: count must be at least 2")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise UsageError(f"grid {name}: need finite lo < hi")
    if spacing == "log" and lo <= 0:
        raise UsageError(f"grid {name}: log spacing needs lo > 0")
    return name, lo, hi, count, spacing


def _axis(lo, hi, count, spacing):
    if spacing == "log":
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def cmd_sweep(args, out) -> int:
    targets = sweep_targets()
    if args.target not in targets:
        raise UsageError(f"unknown target {args.target!r}; choose from {', '.join(sorted(targets))}")
    params, func = targets[args.target]
    grids = {}
    for text in args.grid:
        name, *rest = parse_grid(text)
        if name not in params:
            raise UsageError(f"target {args.target} has no parameter {name!r} (has {', '.join(params)})")
        if name in grids:
            raise UsageError(f"parameter {name!r} given twice")
        grids[name] = rest
    missing = [p for p in params if p not in grids]
    if missing:
        raise UsageError(f"missing grid for {', '.join(missing)}")
    axes = [_axis(*grids[p]) for p in params]
    mesh = np.meshgrid(*axes, indexing="ij")
    with np.errstate(all="ignore"):
        values = np.asarray(func(*mesh), dtype=float)
    header = ["target", *params, "value", "sign"]
    pts = [m.ravel() for m in mesh]
    vals = values.ravel()

    def rows():
        for k in range(vals.size):
            val = vals[k]
            sign = "nan" if not math.isfinite(val) else ("+" if val > 0 else "-" if val < 0 else "0")
            yield [args.target, *(_csv_num(p[k]) for p in pts), _csv_num(val), sign]

    if args.out in (None, "-"):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows())
    else:
        path = Path(args.out)
        try:
            _write_csv(path, header, rows())
        except OSError as exc:
            raise UsageError(f"cannot write {path}: {exc}") from None
        finite = vals[np.isfinite(vals)]
        lo = _g(float(finite.min())) if finite.size else "nan"
        hi = _g(float(finite.max())) if finite.size else "nan"
        print(f"wrote {vals.size} rows to {path}; value range [{lo}, {hi}]", file=out)
    return EXIT_OK


# ---------------------------------------------------------------- hh / scan


_HH_PLAIN = {"square": lambda x: x * x, "identity": lambda x: x, "exp": np.exp}
_HH_PARAM = {"lemma21_f": sa.lemma21_f, "lemma22_g": sa.lemma22_g}
_FUNC_RE = re.compile(r"^(\w+)(?:\((\w+)=([^)]+)\))?$")


def resolve_function(text: str):
    """``square`` or ``lemma21_f(v=0.5)`` -> callable."""
    m = _FUNC_RE.match(text.strip())
    if not m:
        raise UsageError(f"cannot parse function {text!r}")
    name, key, val = m.groups()
    if name in _HH_PLAIN and key is None:
        return _HH_PLAIN[name]
    if name in _HH_PARAM:
        if key != "v":
            raise UsageError(f"{name} needs a weight, e.g. {name}(v=0.5)")
        try:
            v = float(val)
        except ValueError:
            raise UsageError(f"bad weight {val!r}") from None
        if not 0.0 <= v <= 1.0:
            raise UsageError("weight must lie in [0, 1]")
        return _HH_PARAM[name](v)
    known = sorted(_HH_PLAIN) + [f"{k}(v=...)" for k in sorted(_HH_PARAM)]
    raise UsageError(f"unknown function {text!r}; known: {', '.join(known)}")


def _interval(lo, hi):
    try:
        return sa.Interval(lo, hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_hh(args, out) -> int:
    f = resolve_function(args.func)
    iv = _interval(args.lo, args.hi)
    rep = sa.hh_verify(f, iv, args.shape)
    rel = "<=" if args.shape == "convex" else ">="
    verdict = "OK" if rep.chain_holds else "VIOLATED"
    print(f"{rep.midpoint_value:.6g} {rel} {rep.mean_integral:.6g} {rel} "
          f"{rep.endpoint_average:.6g} {verdict}", file=out)
    print(f"midpoint={rep.midpoint_value:.17g} mean={rep.mean_integral:.17g} "
          f"endpoints={rep.endpoint_average:.17g} error_estimate={rep.quadrature_error_estimate:.3g} "
          f"panels={rep.panels}", file=out)
    return EXIT_OK if rep.chain_holds else EXIT_FAIL


def cmd_scan(args, out) -> int:
    f = resolve_function(args.func)
    iv = _interval(args.lo, args.hi)
    verdict = sa.convexity_scan(f, iv, args.grid)
    line = verdict.kind
    if verdict.witness is not None:
        line += f" (sign change near {verdict.witness:.6g})"
    print(line, file=out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dim(text):
    try:
        d = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 2 <= d <= 32:
        raise argparse.ArgumentTypeError(f"dim must lie in [2, 32], got {d}")
    return d


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _nonneg_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(x) and x >= 0):
        raise argparse.ArgumentTypeError("must be a finite nonnegative number")
    return x


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opineq", description="Check refined Young-type inequalities numerically.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("repro", help="reproduce the reference gap values and h(c)")
    r.add_argument("--inject-fault", action="store_true",
                   help="negative control: perturb the m_v constant and c; must exit 1")
    r.set_defaults(handler=cmd_repro)

    v = sub.add_parser("verify", help="run randomized verification suites")
    v.add_argument("--scope", choices=("scalar", "matrix", "all"), default="all")
    v.add_argument("--samples", type=_positive_int, default=None,
                   help="trials per case (default 500 matrix, 100000 scalar)")
    v.add_argument("--dim", type=_dim, action="append",
                   help="matrix dimension, repeatable (default 2, 4, 8)")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=_nonneg_float, default=None,
                   help="normalized margin tolerance (default 1e-8 matrix, 1e-12 scalar)")
    v.add_argument("--out", help="directory for report.txt, report.csv and witness files")
    v.set_defaults(handler=cmd_verify)

    s = sub.add_parser("sweep", help="evaluate a target function on a grid and write CSV")
    s.add_argument("--target", required=True)
    s.add_argument("--grid", action="append", required=True, metavar="name=lo:hi:count[:log]")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(handler=cmd_sweep)

    h = sub.add_parser("hh", help="check the Hermite-Hadamard chain for a function")
    h.add_argument("func", help="square, identity, exp, lemma21_f(v=..), lemma22_g(v=..)")
    h.add_argument("lo", type=float)
    h.add_argument("hi", type=float)
    h.add_argument("shape", nargs="?", choices=("convex", "concave"), default="convex")
    h.set_defaults(handler=cmd_hh)

    c = sub.add_parser("scan", help="classify convexity by second differences")
    c.add_argument("func")
    c.add_argument("lo", type=float)
    c.add_argument("hi", type=float)
    c.add_argument("--grid", type=int, default=200)
    c.set_defaults(handler=cmd_scan)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args, out)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
