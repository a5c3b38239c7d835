"""Table and figure reproductions, judged against the shipped tolerances.

Every target writes CSV files (header line first) plus ``<target>.json``, a
summary listing each acceptance check with its measured value and verdict.
Nothing here is random, so repeated runs give byte-identical files.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import catalog
from .apps import FDDiskProblem, fd_disk_laplacian
from .graphs import build
from .rearrangement import Rearrangement, rearrange, sample_symbol, theta_grid
from .spectral import Spectrum, extreme_gap, gap_ratio, outliers, sym_eigs, weyl_errors
from .symbol import TrigSymbol, image_intervals, scalar_extremes, symbol_of

TARGETS = ("table1", "table2", "table3", "fd-table",
           "fig-example1", "fig-example2", "fig-example3", "fd-fig")


def load_acceptance() -> dict:
    return json.loads(resources.files("gridspec").joinpath("data/acceptance.json").read_text())


def load_schema() -> dict:
    return json.loads(resources.files("gridspec").joinpath("data/summary.schema.json").read_text())


def worker_count() -> int:
    """Worker cap from GRIDSPEC_THREADS (default 1)."""
    raw = os.environ.get("GRIDSPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"GRIDSPEC_THREADS must be an integer, got {raw!r}") from None


def run_sweep(fn: Callable, items: Sequence) -> list:
    """Map fn over items; results keep the input order whatever the worker count."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# ----------------------------------------------------------- verdicts

def judge(check: dict, value, reference=None) -> dict:
    kind = check["kind"]
    target = check.get("target", reference)
    tol = check.get("tol")
    if value is None or not np.isfinite(value):
        ok = False
    elif kind == "factor":
        ok = target / tol <= value <= target * tol
    elif kind == "rel":
        ok = abs(value / target - 1.0) <= tol
    elif kind == "max":
        ok = value <= tol
    elif kind == "min":
        ok = value >= tol
    elif kind == "eq":
        ok = value == target
    else:
        raise ValueError(f"unknown check kind {kind!r}")
    return {"name": check["name"], "kind": kind,
            "value": None if value is None else float(value),
            "target": None if target is None else float(target),
            "tol": None if tol is None else float(tol), "passed": bool(ok)}


# ------------------------------------------------------------ helpers

def _fmt(v) -> str:
    return f"{float(v):.10e}"


def _write(out: Path, name: str, text: str, files: list) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_bytes(text.encode())
    files.append(name)


def table_csv(rows: dict, columns: Sequence[int]) -> str:
    lines = ["row," + ",".join(f"n={c}" for c in columns)]
    for key, vals in rows.items():
        lines.append(key + "," + ",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def curve_csv(r: Rearrangement, s: Spectrum) -> str:
    """g~(k/d) next to lambda_k for k = 1..d."""
    d = s.dim
    x = np.arange(1, d + 1) / d
    g = r.quantile(x)
    lines = ["k,x,gtilde,lambda"]
    lines += [f"{k},{_fmt(a)},{_fmt(b)},{_fmt(c)}"
              for k, (a, b, c) in enumerate(zip(x, g, s.eigenvalues), start=1)]
    return "\n".join(lines) + "\n"


def _row_key(x: float) -> str:
    return "1" if x == 1 else f"{x:g}"


@dataclass
class ColumnResult:
    n: int
    dim: int
    errors: dict
    gap: float
    gap_ratio_error: float | None = None
    extra: dict = field(default_factory=dict)


def spectral_column(matrix, predicted, n: int, quantiles, counts=None,
                    ratio: bool = False, closed: bool = False,
                    positions: str = "right") -> ColumnResult:
    s = sym_eigs(matrix)
    cloud = sample_symbol(predicted, n if counts is None else counts, closed=closed)
    r = rearrange(cloud, positions=positions)
    errs = {_row_key(e.x): e.rel_error for e in weyl_errors(s, r, quantiles, n=n)}
    gr = gap_ratio(s, r, denominator="sample").ratio_error if ratio else None
    return ColumnResult(n, s.dim, errs, extreme_gap(s), gr,
                        {"lambda_min": float(s[0]), "lambda_max": float(s[-1])})


def _finish(target: str, out: Path, files: list, checks: list, data: dict,
            columns=None) -> dict:
    summary = {"target": target, "passed": all(c["passed"] for c in checks),
               "checks": checks, "files": sorted(files + [f"{target}.json"]), "data": data}
    if columns is not None:
        summary["columns"] = [int(c) for c in columns]
    _write(out, f"{target}.json", json.dumps(summary, indent=2, sort_keys=True) + "\n", [])
    return summary


def _table_checks(cfg: dict, lookup: Callable[[str, int], float]) -> list:
    out = []
    for chk in cfg["checks"]:
        ref = None
        if chk["row"] in cfg["reference"] and chk["n"] in cfg["columns"]:
            ref = cfg["reference"][chk["row"]][cfg["columns"].index(chk["n"])]
        out.append(judge(chk, lookup(chk["row"], chk["n"]), ref))
    return out


# ------------------------------------------------------------- tables

def _scalar_table(target: str, out: Path, make: Callable[[int], tuple], gap_row: str) -> dict:
    cfg = load_acceptance()[target]
    qs = cfg["quantiles"]
    ns = list(cfg["columns"])
    extra = [n for n in cfg.get("extra_columns", []) if n not in ns]
    ratio = gap_row == "gap_ratio_error"
    closed = cfg.get("grid", "interior") == "closed"
    positions = cfg.get("positions", "right")

    def column(n):
        matrix, predicted = make(n)
        return spectral_column(matrix, predicted, n, qs, ratio=ratio,
                               closed=closed, positions=positions)

    results = dict(zip(ns + extra, run_sweep(column, ns + extra)))
    rows = {_row_key(x): [results[n].errors[_row_key(x)] for n in ns] for x in qs}
    rows[gap_row] = [results[n].gap_ratio_error if ratio else results[n].gap for n in ns]
    files: list = []
    _write(out, f"{target}.csv", table_csv(rows, ns), files)

    def lookup(row, n):
        c = results[n]
        if row == "gap":
            return c.gap
        if row == "gap_ratio_error":
            return c.gap_ratio_error
        return c.errors[row]

    data = {"rows": rows, "dims": {str(n): results[n].dim for n in ns + extra},
            "raw_gaps": {str(n): results[n].gap for n in ns + extra}}
    if ratio:
        data["gap_ratio_errors"] = {str(n): results[n].gap_ratio_error for n in ns + extra}
    return _finish(target, out, files, _table_checks(cfg, lookup), data, ns)


def _graph_case(spec_fn):
    def make(n):
        spec = spec_fn(n)
        return build(spec), symbol_of(spec)
    return make


def table1(out: Path) -> dict:
    return _scalar_table("table1", out, _graph_case(catalog.example1), "gap")


def table2(out: Path) -> dict:
    return _scalar_table("table2", out, _graph_case(catalog.example2), "gap_ratio_error")


def table3(out: Path) -> dict:
    return _scalar_table("table3", out, _graph_case(catalog.example3), "gap")


def fd_table(out: Path) -> dict:
    cfg = load_acceptance()["fd-table"]
    qs, ns = cfg["quantiles"], list(cfg["columns"])

    def column(n):
        res = fd_disk_laplacian(FDDiskProblem(n))
        col = spectral_column(res.delta, res.predicted, n, qs)
        lo, hi = col.extra["lambda_min"], col.extra["lambda_max"]
        col.extra["range_violation"] = max(0.0, -lo, hi - 10.0)
        col.extra["kappa_classes"] = res.kappa_classes
        return col

    results = dict(zip(ns, run_sweep(column, ns)))
    rows = {_row_key(x): [results[n].errors[_row_key(x)] for n in ns] for x in qs}
    files: list = []
    _write(out, "fd-table.csv", table_csv(rows, ns), files)

    def lookup(row, n):
        c = results[n]
        if row == "dim":
            return c.dim
        if row == "range_violation":
            return c.extra["range_violation"]
        return c.errors[row]

    data = {"rows": rows, "dims": {str(n): results[n].dim for n in ns},
            "extremes": {str(n): [results[n].extra["lambda_min"], results[n].extra["lambda_max"]]
                         for n in ns},
            "kappa_classes": {str(n): results[n].extra["kappa_classes"] for n in ns}}
    return _finish("fd-table", out, files, _table_checks(cfg, lookup), data, ns)


# ------------------------------------------------------------ figures

def _symbol_csv(sym: TrigSymbol, theta: np.ndarray) -> str:
    B = sym.eig(theta.reshape(-1, 1))
    head = "theta," + ",".join(f"lambda{j + 1}" for j in range(B.shape[1]))
    lines = [head] + [_fmt(t) + "," + ",".join(_fmt(v) for v in row) for t, row in zip(theta, B)]
    return "\n".join(lines) + "\n"


def _containment(s: Spectrum, lo: float, hi: float) -> float:
    return max(0.0, lo - float(s[0]), float(s[-1]) - hi)


def fig_example1(out: Path) -> dict:
    cfg = load_acceptance()["fig-example1"]
    n = cfg["n"]
    spec = catalog.example1(n)
    f = symbol_of(spec)
    s = sym_eigs(build(spec))
    r = rearrange(sample_symbol(f, cfg["samples"]))
    files: list = []
    _write(out, "fig-example1-symbol.csv", _symbol_csv(f, theta_grid(cfg["samples"])), files)
    _write(out, "fig-example1-eigs.csv", curve_csv(r, s), files)
    lo, hi = scalar_extremes(f)
    checks = [judge({"name": "eigenvalues in [min f, max f]", "kind": "max", "tol": 1e-9},
                    _containment(s, lo, hi))]
    return _finish("fig-example1", out, files, checks,
                   {"n": n, "min_f": lo, "max_f": hi, "lambda_min": float(s[0]),
                    "lambda_max": float(s[-1])})


def fig_example2(out: Path) -> dict:
    n = load_acceptance()["fig-example2"]["n"]
    spec = catalog.example2(n)
    f = symbol_of(spec)
    s = sym_eigs(build(spec))
    r = rearrange(sample_symbol(f, n))
    files: list = []
    _write(out, "fig-example2-eigs.csv", curve_csv(r, s), files)
    lo, hi = scalar_extremes(f)
    checks = [judge({"name": "eigenvalues in [min f, max f]", "kind": "max", "tol": 1e-9},
                    _containment(s, lo, hi))]
    return _finish("fig-example2", out, files, checks,
                   {"n": n, "dim": s.dim, "min_f": lo, "max_f": hi})


def fig_example3(out: Path) -> dict:
    cfg = load_acceptance()["fig-example3"]
    n = cfg["n"]
    spec = catalog.example3(n)
    f = symbol_of(spec)
    s = sym_eigs(build(spec))
    r = rearrange(sample_symbol(f, n))
    iv = image_intervals(f)
    out_vals = outliers(s, iv)
    files: list = []
    _write(out, "fig-example3-symbol.csv", _symbol_csv(f, theta_grid(1000)), files)
    _write(out, "fig-example3-eigs.csv", curve_csv(r, s), files)
    idx = np.flatnonzero(np.isin(s.eigenvalues, out_vals)) + 1
    _write(out, "fig-example3-outliers.csv",
           "k,lambda\n" + "".join(f"{k},{_fmt(s[k - 1])}\n" for k in idx), files)
    checks = [judge({"name": "outlier count", "kind": "eq", "target": cfg["outliers"]},
                    len(out_vals)),
              judge({"name": "image intervals", "kind": "eq", "target": 4}, len(iv))]
    return _finish("fig-example3", out, files, checks,
                   {"n": n, "dim": s.dim, "intervals": [list(v) for v in iv],
                    "outliers": [float(v) for v in out_vals]})


def fd_fig(out: Path) -> dict:
    cfg = load_acceptance()["fd-fig"]
    n = cfg["n"]
    res = fd_disk_laplacian(FDDiskProblem(n))
    s = sym_eigs(res.delta)
    r = rearrange(sample_symbol(res.predicted, n))
    files: list = []
    _write(out, "fd-fig-eigs.csv", curve_csv(r, s), files)
    checks = [judge({"name": "dimension", "kind": "eq", "target": cfg["dim"]}, s.dim)]
    return _finish("fd-fig", out, files, checks,
                   {"n": n, "dim": s.dim, "samples": r.N, "kappa_classes": res.kappa_classes})


REPRODUCERS = {
    "table1": table1, "table2": table2, "table3": table3, "fd-table": fd_table,
    "fig-example1": fig_example1, "fig-example2": fig_example2,
    "fig-example3": fig_example3, "fd-fig": fd_fig,
}


def reproduce(target: str, out) -> dict:
    if target not in REPRODUCERS:
        raise KeyError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    return REPRODUCERS[target](Path(out))
