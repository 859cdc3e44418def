"""Verification runs.

A run draws every trial of a case from its own counter-based stream, so a
report depends only on the :class:`TrialConfig` and never on batching.
Margins are normalized, ``margin / scale``, and a pair passes when the
normalized margin is at least ``-tol``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .. import scalar_analysis as sa
from .. import scalar_bounds as sb
from ..matrix.linalg import format_matrix, symmetrize
from .catalog import CASES, MATRIX_IDS, SCALAR_IDS, get_case
from .generators import TrialConfig
from .rng import derive_seed, trial_seeds, uniform_block

__all__ = [
    "TrialReport",
    "PairMargin",
    "GapRow",
    "AUX_PREFIX",
    "DEFAULT_DIMS",
    "MATRIX_TOL",
    "SCALAR_TOL",
    "pair_margins",
    "check_case",
    "run_case",
    "run_aux",
    "run_suite",
    "suite_ids",
    "no_ordering_probe",
    "format_report",
]

MATRIX_TOL = 1e-8
SCALAR_TOL = 1e-12
DEFAULT_DIMS = (2, 4, 8)
AUX_PREFIX = "AUX:"
_CHUNK = 256
_SCALAR_CHUNK = 50_000


@dataclass(frozen=True)
class TrialReport:
    id: str
    kind: str
    dim: int | None
    attempted: int
    passed: int
    failed: int
    skipped: int
    worst_margin: float
    witness: dict | None = None
    elapsed: float = 0.0
    review: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def status(self) -> str:
        if self.failed == 0:
            return "PASS"
        return "REVIEW" if self.review else "FAIL"

    @property
    def gating_failure(self) -> bool:
        return self.failed > 0 and not self.review


class PairMargin(NamedTuple):
    label: str
    margin: np.ndarray  # raw: lambda_min(rhs - lhs) or rhs - lhs
    scale: np.ndarray


def _tol(case_kind: str, cfg: TrialConfig) -> float:
    if cfg.tol is not None:
        return cfg.tol
    return MATRIX_TOL if case_kind == "matrix" else SCALAR_TOL


def pair_margins(case_id: str, instance: dict) -> tuple[list[PairMargin], dict]:
    """Raw margins of every chain link; also returns the prepared instance."""
    case = get_case(case_id)
    inst = case.prepare(dict(instance))
    return _margins(case, inst), inst


def _margins(case, inst) -> list[PairMargin]:
    out = []
    for label, lhs, rhs in case.pairs(inst):
        if case.kind == "matrix":
            lam = np.linalg.eigvalsh(symmetrize(rhs - lhs))
            margin = lam[..., 0]
            scale = 1.0 + np.abs(lam).max(axis=-1)
        else:
            lhs, rhs = np.asarray(lhs, float), np.asarray(rhs, float)
            margin = rhs - lhs
            scale = 1.0 + np.maximum(np.abs(lhs), np.abs(rhs))
        out.append(PairMargin(label, margin, scale))
    return out


def _batch(inst: dict, kind: str) -> dict:
    """Promote a single instance to a batch of one."""
    out = {}
    for k, val in inst.items():
        arr = np.asarray(val, dtype=float)
        if kind == "matrix" and k in ("A", "B", "V"):
            out[k] = arr if arr.ndim == 3 else arr[None]
        else:
            out[k] = np.atleast_1d(arr)
    return out


def check_case(case_id: str, instance: dict, params: dict | None = None,
               tol: float | None = None) -> TrialReport:
    """Check one instance (``A``, ``B`` for matrix cases, or scalars).

    ``params`` are merged into the instance; for matrix cases it usually
    carries ``v`` and optionally sandwich levels.
    """
    case = get_case(case_id)
    inst = _batch({**instance, **(params or {})}, case.kind)
    cfg = TrialConfig(samples=1, tol=tol)
    t0 = time.perf_counter()
    rep = _evaluate(case, inst, _tol(case.kind, cfg), np.arange(len(inst["v"])), None)
    notes = _notes(rep.pop("asymmetry"))
    dim = inst["A"].shape[-1] if case.kind == "matrix" else None
    return TrialReport(case.id, case.kind, dim, elapsed=time.perf_counter() - t0, notes=notes, **rep)


def _evaluate(case, inst, tol, trial_idx, worst_so_far):
    prepared = case.prepare(dict(inst))
    ok = np.asarray(case.predicate(prepared), dtype=bool)
    pairs = _margins(case, prepared)
    stacked = np.stack([p.margin / p.scale for p in pairs])
    norm, which = stacked.min(axis=0), stacked.argmin(axis=0)
    norm = np.where(ok, norm, np.inf)
    failed = int(np.sum(ok & (norm < -tol)))
    skipped = int(np.sum(~ok))
    attempted = len(ok)
    asym = float(np.max(prepared["_asymmetry"])) if "_asymmetry" in prepared else None
    worst, witness = math.inf, None
    if attempted - skipped:
        j = int(np.argmin(norm))
        worst = float(norm[j])
        if worst_so_far is None or worst < worst_so_far:
            witness = _witness(case, prepared, j, int(trial_idx[j]), pairs[int(which[j])].label)
    return {"attempted": attempted, "passed": attempted - skipped - failed, "failed": failed,
            "skipped": skipped, "worst_margin": worst, "witness": witness,
            "review": case.review, "asymmetry": asym}


def _notes(asym):
    if asym is None:
        return ()
    return (f"max relative asymmetry of printed products {asym:.3g}",)


def _witness(case, inst, j, trial, label):
    params = {"trial": trial, "pair": label}
    for k, val in inst.items():
        if k.startswith("_") or k in ("A", "B", "V"):
            continue
        params[k] = float(np.asarray(val)[j])
    mats = {k: np.asarray(inst[k][j]) for k in ("A", "B") if k in inst}
    return {"params": params, "matrices": mats}


def _param_line(case_id, dim, params):
    items = " ".join(f"{k}={v!r}" if isinstance(v, str) else f"{k}={v:.17g}"
                     for k, v in params.items())
    return f"# id={case_id} dim={dim} {items}\n"


def _dump_witness(out_dir: Path, case_id: str, dim, witness: dict) -> str:
    out_dir.mkdir(parents=True, exist_ok=True)
    name = f"{case_id}_n{dim}.txt" if dim else f"{case_id}.txt"
    path = out_dir / name
    body = [_param_line(case_id, dim, witness["params"])]
    body += [format_matrix(M) for M in witness["matrices"].values()]
    with open(path, "w", newline="\n") as fh:
        fh.write("".join(body))
    return name


def _count(case, cfg: TrialConfig) -> int:
    return cfg.samples if case.kind == "matrix" else cfg.scalar_count


def run_case(case_id: str, cfg: TrialConfig, dim: int | None = None) -> TrialReport:
    case = get_case(case_id)
    n = (dim or cfg.dim) if case.kind == "matrix" else None
    tol = _tol(case.kind, cfg)
    total = _count(case, cfg)
    base = derive_seed(cfg.seed, case.id, n or 0)
    draws = case.draws(n or 0)
    chunk = _CHUNK if case.kind == "matrix" else _SCALAR_CHUNK
    t0 = time.perf_counter()
    agg = {"attempted": 0, "passed": 0, "failed": 0, "skipped": 0}
    worst, witness, asym = math.inf, None, None
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        u = uniform_block(trial_seeds(base, start, count), draws)
        inst = case.build(u, n, cfg)
        rep = _evaluate(case, inst, tol, np.arange(start, start + count), worst)
        for k in agg:
            agg[k] += rep[k]
        if rep["worst_margin"] < worst:
            worst, witness = rep["worst_margin"], rep["witness"]
        if rep["asymmetry"] is not None:
            asym = max(asym or 0.0, rep["asymmetry"])
    return TrialReport(case.id, case.kind, n, worst_margin=worst, witness=witness,
                       elapsed=time.perf_counter() - t0, review=case.review, notes=_notes(asym),
                       **agg)


def run_aux(name: str, count: int = 200) -> TrialReport:
    t0 = time.perf_counter()
    rep = sa.check_sign_region(name, sa.default_grid(name, count))
    witness = {"params": dict(rep.witness), "matrices": {}} if rep.witness else None
    notes = ("observation",) if rep.observation else ()
    return TrialReport(AUX_PREFIX + name, "grid", None, rep.attempted, rep.passed, rep.failed, 0,
                       rep.worst_margin, witness, time.perf_counter() - t0, False, notes)


def suite_ids(scope: str) -> list[str]:
    if scope == "matrix":
        return list(MATRIX_IDS)
    aux = [AUX_PREFIX + name for name in sa.aux_names()]
    if scope == "scalar":
        return list(SCALAR_IDS) + aux
    if scope == "all":
        return list(SCALAR_IDS) + aux + list(MATRIX_IDS)
    raise ValueError(f"unknown scope {scope!r}")


def run_suite(ids: Iterable[str], cfg: TrialConfig, dims: Iterable[int] | None = None,
              out_dir: str | Path | None = None) -> list[TrialReport]:
    """Run ``ids`` (matrix cases once per dimension in ``dims``, default
    ``cfg.dim``).  With ``out_dir``, worst-case witnesses of failing or
    review cases are written there as matrix files."""
    ids = list(ids)
    if not ids:
        raise ValueError("no case ids given")
    for case_id in ids:
        if not case_id.startswith(AUX_PREFIX):
            get_case(case_id)
        elif case_id[len(AUX_PREFIX):] not in sa.CATALOG:
            raise KeyError(f"unknown case id {case_id!r}")
    dims = list(dims) if dims is not None else [cfg.dim]
    for d in dims:
        cfg.with_dim(d)  # validates
    reports = []
    for case_id in ids:
        if case_id.startswith(AUX_PREFIX):
            reports.append(run_aux(case_id[len(AUX_PREFIX):]))
            continue
        case_dims = dims if CASES[case_id].kind == "matrix" else [None]
        for d in case_dims:
            rep = run_case(case_id, cfg, d)
            if out_dir is not None and rep.failed and rep.witness:
                name = _dump_witness(Path(out_dir), rep.id, rep.dim, rep.witness)
                rep = replace(rep, witness={**rep.witness, "path": name})
            reports.append(rep)
    return reports


def _sig(x: float, digits: int = 6) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x + 0.0:+.{digits}g}"


def format_report(reports: list[TrialReport]) -> str:
    """Fixed-width table; elapsed time is left out so output is reproducible."""
    head = f"{'id':<34} {'dim':>3} {'attempted':>9} {'passed':>8} {'failed':>7} {'skipped':>7} {'worst':>13}  status"
    lines = [head]
    for r in reports:
        dim = "-" if r.dim is None else str(r.dim)
        lines.append(f"{r.id:<34} {dim:>3} {r.attempted:>9} {r.passed:>8} {r.failed:>7} "
                     f"{r.skipped:>7} {_sig(r.worst_margin):>13}  {r.status}")
        if r.failed and r.witness:
            params = " ".join(f"{k}={_sig(v) if isinstance(v, float) else v}"
                              for k, v in r.witness["params"].items())
            where = f" [{r.witness['path']}]" if "path" in r.witness else ""
            lines.append(f"    witness: {params}{where}")
        for note in r.notes:
            if note != "observation":
                lines.append(f"    note: {note}")
    return "\n".join(lines) + "\n"


class GapRow(NamedTuple):
    label: str
    v: float
    x: float
    gap: float
    reference: float
    expected_sign: int

    @property
    def ok(self) -> bool:
        return (math.copysign(1, self.gap) == self.expected_sign
                and abs(self.gap - self.reference) <= 0.02)


_PROBE = (
    ("m_v - K^r", 0.3, 0.7, 0.002, +1),
    ("m_v - K^r", 0.7, 0.1, -0.15, -1),
    ("K^R - M_v", 0.2, 0.4, 0.08, +1),
    ("K^R - M_v", 0.6, 0.3, -0.17, -1),
)


def no_ordering_probe() -> list[GapRow]:
    """The four signed gaps showing neither bound dominates the other."""
    rows = []
    for label, v, x, ref, sign in _PROBE:
        r, R = min(v, 1 - v), max(v, 1 - v)
        if label.startswith("m_v"):
            gap = sb.m_factor(v, x) - sb.kantorovich(x) ** r
        else:
            gap = sb.kantorovich(x) ** R - sb.M_factor(v, x)
        rows.append(GapRow(label, v, x, float(gap), ref, sign))
    return rows
