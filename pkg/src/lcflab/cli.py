"""Command-line front end.

Exit codes: 0 success, 1 verdict-level failure (calibration failure, or a
classification in 4..8 that does not reproduce the expected families),
2 usage error (bad flags, malformed config or metric spec).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import __version__
from .calibration import format_table, run_calibration
from .metric_lab import (
    GuardError,
    MetricSpecError,
    StepSizeError,
    codazzi_residual,
    cspace_scan,
    load_field,
    random_points,
    ricci_constancy_scan,
    ricci_spectrum,
    weyl_norm_at,
)
from .spectrum_classifier import classify
from .spectrum_classifier.classify import PROVEN_RANGE

COMMANDS = ("calibrate", "check-metric", "cspace-scan", "ricci-scan", "classify")
SEED_MAX = 2**64 - 1


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec: str | None = None
    dim: int | None = None
    l_max: int | None = None
    tol: float = 1e-5
    weyl_tol: float = 1e-4
    codazzi_tol: float = 1e-4
    h: float = 0.01
    steps: int = 100
    geodesics: int = 20
    points: int = 10
    seed: int = 0
    out: str | None = None

    def validate(self) -> None:
        for name in ("tol", "weyl_tol", "codazzi_tol", "h"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be > 0")
        for name in ("steps", "geodesics", "points"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be >= 1")
        if not 0 <= self.seed <= SEED_MAX:
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.command in ("check-metric", "cspace-scan", "ricci-scan") and not self.spec:
            raise UsageError(f"{self.command} requires --spec")
        if self.command == "classify":
            if self.dim is None:
                raise UsageError("classify requires --dim")
            if self.dim < 4:
                raise UsageError("--dim must be >= 4")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key, value):
    kind = _FIELD_TYPES[key]
    try:
        if "int" in kind and not isinstance(value, bool):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if "float" in kind and not isinstance(value, bool):
            return float(value)
        if "str" in kind and isinstance(value, str):
            return value
    except (TypeError, ValueError):
        pass
    raise UsageError(f"config key {key!r}: bad value {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcflab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lcflab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scan=False, metric=False):
        p.add_argument("--config", help="JSON file with default values for flags")
        p.add_argument("--out", help="write the JSON report here (default: stdout)")
        p.add_argument("--seed", type=int)
        if metric:
            p.add_argument("--spec", help="metric spec JSON file")
            p.add_argument("--points", type=int, help="number of seeded sample points")
        if scan:
            p.add_argument("--tol", type=float)

    p = sub.add_parser("calibrate", help="run the calibration suite")
    common(p)
    p = sub.add_parser("check-metric", help="Weyl norm, Codazzi residual, Ricci spectra")
    common(p, metric=True)
    p.add_argument("--weyl-tol", dest="weyl_tol", type=float)
    p.add_argument("--codazzi-tol", dest="codazzi_tol", type=float)
    p = sub.add_parser("cspace-scan", help="Jacobi spectra along random geodesics")
    common(p, scan=True, metric=True)
    p.add_argument("--h", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--geodesics", type=int)
    p = sub.add_parser("ricci-scan", help="Ricci spectra at random points")
    common(p, scan=True, metric=True)
    p = sub.add_parser("classify", help="exact classification of constant Ricci spectra")
    common(p)
    p.add_argument("--dim", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    return parser


def parse_config(argv) -> RunConfig:
    """Resolve flags over config-file values over defaults."""
    args = build_parser().parse_args(argv)
    values = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in _FIELD_TYPES or key == "command":
                raise UsageError(f"unknown config key {key!r}")
            values[key] = _coerce(key, value)
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        values[key] = value
    config = RunConfig(command=args.command, **values)
    config.validate()
    return config


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _envelope(config: RunConfig, result: dict) -> dict:
    return {
        "tool": "lcflab",
        "version": __version__,
        "command": config.command,
        "config": config.echo(),
        "seed": config.seed,
        "tolerances": {
            "tol": config.tol,
            "weyl_tol": config.weyl_tol,
            "codazzi_tol": config.codazzi_tol,
        },
        "result": result,
    }


def _check_metric(config: RunConfig, field) -> dict:
    samples = []
    for p in random_points(field, config.points, config.seed):
        entry = {"point": p.tolist()}
        try:
            entry["weyl_norm"] = weyl_norm_at(field, p) if field.dim >= 4 else None
            entry["codazzi_residual"] = codazzi_residual(field, p)
            entry["ricci_eigenvalues"] = ricci_spectrum(field, p).eigenvalues.tolist()
        except GuardError as exc:
            entry["error"] = str(exc)
        samples.append(entry)
    ok = [s for s in samples if "error" not in s]
    weyl = [s["weyl_norm"] for s in ok if s["weyl_norm"] is not None]
    weyl_max = max(weyl) if weyl else None
    codazzi_max = max((s["codazzi_residual"] for s in ok), default=None)
    return {
        "metric": field.to_spec(),
        "weyl_max": weyl_max,
        "codazzi_max": codazzi_max,
        "weyl_vanishes": None if weyl_max is None else weyl_max < config.weyl_tol,
        "codazzi_holds": None if codazzi_max is None else codazzi_max < config.codazzi_tol,
        "samples": samples,
    }


def run(config: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    status = 0
    if config.command == "calibrate":
        rows = run_calibration(config.seed)
        print(format_table(rows), file=sys.stderr if config.out is None else stdout)
        status = 0 if all(r.passed for r in rows) else 1
        result = {"checks": [r.to_dict() for r in rows], "passed": status == 0}
    elif config.command == "classify":
        report = classify(config.dim, config.l_max)
        result = report.to_dict()
        if config.dim in PROVEN_RANGE and (config.l_max or config.dim) >= config.dim:
            status = 0 if report.matches_classification() else 1
    else:
        field = load_field(config.spec)
        try:
            if config.command == "check-metric":
                result = _check_metric(config, field)
            elif config.command == "cspace-scan":
                result = cspace_scan(
                    field, config.geodesics, config.seed, config.h, config.steps, config.tol
                ).to_dict()
            else:
                result = ricci_constancy_scan(
                    field, count=config.points, seed=config.seed, tol=config.tol
                ).to_dict()
        except (GuardError, StepSizeError) as exc:
            result = {"metric": field.to_spec(), "error": f"{type(exc).__name__}: {exc}"}

    text = json.dumps(_envelope(config, result), indent=2, sort_keys=True) + "\n"
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return status


def main(argv=None) -> int:
    try:
        config = parse_config(argv)
        return run(config)
    except UsageError as exc:
        print(f"lcflab: error: {exc}", file=sys.stderr)
        return 2
    except MetricSpecError as exc:
        print(f"lcflab: error: malformed metric spec: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lcflab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

