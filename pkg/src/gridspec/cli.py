"""gridspec command line.

    gridspec build     --spec S --out DIR [--n N]
    gridspec eigs      --spec S --out DIR [--n N]
    gridspec symbol    --spec S --out DIR
    gridspec rearrange --spec S --out DIR [--samples-per-axis K]
    gridspec compare   --spec S --out DIR [--quantiles ...] [--samples-per-axis K]
    gridspec gap       --spec S --out DIR
    gridspec reproduce TARGET --out DIR [--strict]

S is a graph spec (kind toeplitz/dlevel/diamond) or an application
descriptor {"app": "fd-disk" | "fem-q2" | "iga-c3", "n": ...}.
Exit codes: 0 success, 1 numerical failure (or a failed check with --strict),
2 configuration error.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import apps, experiments
from .graphs import SpecError, build, export_matrix_market, node_edge_counts, spec_from_dict
from .rearrangement import rearrange, sample_symbol
from .spectral import NumericalError, cdf_distance, extreme_gap, gap_ratio, sym_eigs, weyl_errors
from .symbol import SymbolError, TrigSymbol, WeightedSymbol, image_intervals, symbol_of

COMMANDS = ("build", "eigs", "symbol", "rearrange", "compare", "gap", "reproduce")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec_path: Optional[Path] = None
    output_dir: Path = Path("out")
    n_override: Optional[tuple] = None
    quantiles: tuple = (0.1, 0.5, 0.8, 1.0)
    sample_counts: Optional[tuple] = None
    target: Optional[str] = None
    strict: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.command == "reproduce":
            if self.target not in experiments.TARGETS:
                raise ConfigError(f"unknown target {self.target!r}; "
                                  f"choose from {', '.join(experiments.TARGETS)}")
            return
        if self.spec_path is None:
            raise ConfigError(f"{self.command} needs --spec")
        if not Path(self.spec_path).is_file():
            raise ConfigError(f"spec file {self.spec_path} not found")
        if not self.quantiles or any(not 0 < q <= 1 for q in self.quantiles):
            raise ConfigError("quantiles must lie in (0, 1]")
        if self.n_override is not None and any(n < 1 for n in self.n_override):
            raise ConfigError("--n must be positive")
        if self.sample_counts is not None and any(m < 1 for m in self.sample_counts):
            raise ConfigError("--samples-per-axis must be positive")


@dataclass(frozen=True, eq=False)
class Problem:
    """A matrix together with the symbol predicting its spectrum."""
    matrix: object
    predicted: object
    n: tuple
    label: str
    spec: object = None
    extra: dict = field(default_factory=dict)


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(a) for a in text.split(",") if a.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(a) for a in text.split(",") if a.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def load_problem(path, n_override=None) -> Problem:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    if "app" in obj:
        app = obj["app"]
        n = int(n_override[0] if n_override else obj.get("n", 0))
        if app == "fd-disk":
            res = apps.fd_disk_laplacian(apps.FDDiskProblem(n))
            return Problem(res.delta, res.predicted, (n, n), app,
                           extra={"kappa_classes": res.kappa_classes})
        if app == "fem-q2":
            res = apps.fem_quadratic_stiffness(n)
            # spectrum of (1/n) A_n is predicted by the 2x2 symbol
            return Problem(res.A.matrix / n, res.predicted, (n,), app, res.spec)
        if app == "iga-c3":
            A, f = apps.iga_cubic_stiffness(n)
            return Problem(A.matrix, f, (n,), app)
        raise ConfigError(f"unknown app {app!r}")
    spec = spec_from_dict(obj)
    if n_override:
        spec = spec.with_n(n_override if len(n_override) > 1 else n_override[0])
    s = spec.structure()
    return Problem(build(spec), symbol_of(spec), tuple(s.n), obj["kind"], spec)


def _counts(cfg: RunConfig, prob: Problem):
    if cfg.sample_counts:
        return cfg.sample_counts[0] if len(cfg.sample_counts) == 1 else list(cfg.sample_counts)
    return list(prob.n)


def _dump(path: Path, obj) -> None:
    path.write_bytes((json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())


def _frequency(pred) -> TrigSymbol:
    return pred.frequency if isinstance(pred, WeightedSymbol) else pred


def pipeline(cfg: RunConfig) -> dict:
    """Run one command; returns a small report dict and writes files into the output dir."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.command == "reproduce":
        return experiments.reproduce(cfg.target, out)
    prob = load_problem(cfg.spec_path, cfg.n_override)
    report: dict = {"command": cfg.command, "problem": prob.label, "n": list(prob.n)}

    if cfg.command == "build":
        export_matrix_market(prob.matrix, out / "matrix.mtx")
        report["dim"] = int(prob.matrix.shape[0])
        report["nnz"] = int(prob.matrix.nnz)
        if prob.spec is not None and not prob.label.startswith(("fem", "iga", "fd")):
            report["nodes"], report["edges"] = node_edge_counts(prob.spec)
        _dump(out / "build.json", report)
        return report

    if cfg.command == "symbol":
        f = _frequency(prob.predicted)
        _dump(out / "symbol.json", f.to_json())
        report["intervals"] = [list(v) for v in image_intervals(f)]
        report["reflection_invariant"] = f.reflection_invariant()
        _dump(out / "symbol-summary.json", report)
        return report

    if cfg.command == "rearrange":
        r = rearrange(sample_symbol(prob.predicted, _counts(cfg, prob)))
        (out / "rearrangement.csv").write_bytes(r.to_csv().encode())
        report["samples"] = r.N
        report["range"] = [float(r.sorted[0]), float(r.sorted[-1])]
        _dump(out / "rearrange.json", report)
        return report

    s = sym_eigs(prob.matrix)
    if cfg.command == "eigs":
        (out / "eigenvalues.csv").write_bytes(s.to_csv().encode())
        report.update({"dim": s.dim, "lambda_min": float(s[0]), "lambda_max": float(s[-1]),
                       "method": s.method})
        _dump(out / "eigs.json", report)
        return report

    r = rearrange(sample_symbol(prob.predicted, _counts(cfg, prob)))
    if cfg.command == "compare":
        errs = weyl_errors(s, r, cfg.quantiles, n=list(prob.n))
        lines = ["x,k,lambda,gtilde,rel_error"]
        lines += [f"{e.x:.6g},{e.k},{e.lam:.17g},{e.gtilde:.17g},{e.rel_error:.17g}" for e in errs]
        (out / "weyl_errors.csv").write_bytes(("\n".join(lines) + "\n").encode())
        report.update({"dim": s.dim, "samples": r.N,
                       "errors": [e.to_json() for e in errs],
                       "max_rel_error": max(e.rel_error for e in errs),
                       "cdf_distance": cdf_distance(s, r)})
        _dump(out / "compare.json", report)
        return report

    # gap
    g = gap_ratio(s, r, denominator="sample")
    report.update({"dim": s.dim, "extreme_gap": extreme_gap(s), "gap_ratio": g.to_json()})
    _dump(out / "gap.json", report)
    return report


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gridspec", description="Spectra of Toeplitz-type graphs.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name == "reproduce":
            p.add_argument("target", help=", ".join(experiments.TARGETS))
            p.add_argument("--strict", action="store_true",
                           help="exit 1 when an acceptance check fails")
        else:
            p.add_argument("--spec", required=True, type=Path)
            p.add_argument("--n", type=_int_list, default=None)
            p.add_argument("--quantiles", type=_float_list, default=(0.1, 0.5, 0.8, 1.0))
            p.add_argument("--samples-per-axis", type=_int_list, default=None)
        p.add_argument("--out", type=Path, default=Path("out"))
    return ap


def config_from_args(args) -> RunConfig:
    if args.command == "reproduce":
        return RunConfig("reproduce", output_dir=args.out, target=args.target, strict=args.strict)
    return RunConfig(args.command, args.spec, args.out, args.n, tuple(args.quantiles),
                     args.samples_per_axis)


def _thread_limit():
    if "GRIDSPEC_THREADS" not in os.environ:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=experiments.worker_count())


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        cfg.validate()
        with _thread_limit():
            report = pipeline(cfg)
    except (NumericalError, np.linalg.LinAlgError, MemoryError) as exc:
        # LinAlgError derives from ValueError, so it must be caught first
        print(f"gridspec: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, SpecError, SymbolError, KeyError, TypeError, ValueError,
            FileNotFoundError) as exc:
        print(f"gridspec: error: {exc}", file=sys.stderr)
        return 2
    if cfg.command == "reproduce":
        for c in report["checks"]:
            print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}: {c['value']:.6g}")
        if cfg.strict and not report["passed"]:
            return 1
    else:
        print(json.dumps(report, sort_keys=True, default=float))
    return 0


if __name__ == "__main__":
    sys.exit(main())
