"""Calibration suite: sign conventions, closed-form spectra and algebraic identities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tensor_core as tc
from .metric_lab import (
    Conformal,
    SpaceForm,
    form_times_line,
    ricci_spectrum,
    riemann_at,
    sphere_times_hyperbolic,
    sphere_times_sphere,
    weyl_norm_at,
)
from .spectrum_classifier import classify


@dataclass
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    relation: str = "<"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "relation": self.relation,
            "passed": self.passed,
        }


def _below(name, value, threshold):
    return CheckResult(name, float(value), threshold, bool(value < threshold))


def _above(name, value, threshold):
    return CheckResult(name, float(value), threshold, bool(value > threshold), ">")


def _sphere_sectional(seed):
    rng = np.random.default_rng(seed)
    field = SpaceForm(4, 1)
    worst = 0.0
    for _ in range(3):
        p = rng.uniform(-0.5, 0.5, 4)
        R = riemann_at(field, p)
        g = field.metric(p[None, :])[0]
        for _ in range(5):
            x, y = rng.standard_normal((2, 4))
            worst = max(worst, abs(tc.sectional(R, x, y, g) - 1.0))
    return worst


def _spectrum_error(field, expected, p):
    return float(np.abs(ricci_spectrum(field, p).eigenvalues - expected).max())


def _algebra(seed, dims=range(4, 9), count=20):
    rng = np.random.default_rng(seed)
    roundtrip = split = trace = 0.0
    for n in dims:
        for _ in range(count):
            g = tc.random_metric(rng, n)
            a = rng.standard_normal((n, n))
            ric0 = a + a.T
            R = tc.lcf_curvature_from_ricci(ric0, None, g)
            ric, s = tc.ricci_contract(R, g)
            roundtrip = max(roundtrip, np.abs(ric - ric0).max() / np.abs(ric0).max())

            Rr = tc.random_curvature_tensor(rng, n)
            scale = np.abs(Rr).max()
            ric_r, s_r = tc.ricci_contract(Rr, g)
            rebuilt = tc.weyl_tensor(Rr, g) + tc.lcf_curvature_from_ricci(ric_r, s_r, g)
            split = max(split, np.abs(rebuilt - Rr).max() / scale)

            x = rng.standard_normal(n)
            x /= np.sqrt(x @ g @ x)
            jac = tc.jacobi_operator(Rr, x, g)
            trace = max(trace, abs(np.trace(jac) - x @ ric_r @ x) / scale)
    return roundtrip, split, trace


def run_calibration(seed: int = 0) -> list[CheckResult]:
    p = np.array([0.1, -0.2, 0.15, 0.05])
    roundtrip, split, trace = _algebra(seed)
    rows = [
        _below("sphere sectional curvature = 1", _sphere_sectional(seed), 1e-6),
        _below(
            "S2(1)xH2(-1) Ricci spectrum (-1,-1,1,1)",
            _spectrum_error(sphere_times_hyperbolic(), [-1, -1, 1, 1], p), 1e-6,
        ),
        _below("M3(1)xR Ricci spectrum (0,2,2,2)",
               _spectrum_error(form_times_line(4), [0, 2, 2, 2], p), 1e-6),
        _below("Ricci <-> curvature roundtrip (relative)", roundtrip, 1e-10),
        _below("Weyl split (relative)", split, 1e-9),
        _below("Jacobi trace = Ric(x,x) (relative)", trace, 1e-9),
        _below("Weyl norm, S2(1)xH2(-1)", weyl_norm_at(sphere_times_hyperbolic(), p), 1e-6),
        _below("Weyl norm, conformal quadratic",
               weyl_norm_at(Conformal(4, "quadratic", [1, 0, 0, 0]), p), 1e-6),
        _above("Weyl norm, S2(1)xS2(1)", weyl_norm_at(sphere_times_sphere(), p), 0.1),
    ]
    bad = [n for n in range(4, 9) if not classify(n).matches_classification()]
    rows.append(CheckResult("classification n = 4..8", float(len(bad)), 1.0, not bad))
    return rows


def format_table(rows: list[CheckResult]) -> str:
    width = max(len(r.name) for r in rows)
    lines = []
    for r in rows:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name:<{width}}  {r.value:.3e} {r.relation} {r.threshold:.0e}")
    return "\n".join(lines)
