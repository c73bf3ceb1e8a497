"""Geodesic integration and spectral constancy scans."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .. import tensor_core as tc
from .fields import GuardError, MetricField
from .geometry import christoffel, fd_step, riemann_at, ricci_spectrum

MAX_DRIFT = 1e-3


class StepSizeError(RuntimeError):
    """Speed drift along an integrated geodesic exceeded ``MAX_DRIFT``."""


@dataclass(frozen=True)
class GeodesicState:
    position: np.ndarray
    velocity: np.ndarray
    t: float


@dataclass
class GeodesicPath:
    states: list[GeodesicState]
    speed_drift: float
    exited_guard: bool = False


def speed(field: MetricField, x, v) -> float:
    g = field.metric(np.asarray(x, dtype=float)[None, :])[0]
    return float(np.sqrt(v @ g @ v))


def _acceleration(field, x, v):
    gamma = christoffel(field, x)
    return -np.einsum("kij,i,j->k", gamma, v, v)


def integrate_geodesic(
    field: MetricField, state0: GeodesicState, h: float, steps: int
) -> GeodesicPath:
    """Classical fourth-order Runge-Kutta on ``x'' = -Gamma(x)(x', x')``.

    Returns ``steps + 1`` states including the initial one. If the path
    (with its finite-difference stencil) leaves the chart, the states
    computed so far are returned with ``exited_guard`` set.
    """
    x = np.array(state0.position, dtype=float)
    v = np.array(state0.velocity, dtype=float)
    t = float(state0.t)
    s0 = speed(field, x, v)
    states = [GeodesicState(x.copy(), v.copy(), t)]
    drift = 0.0
    for _ in range(steps):
        try:
            k1x, k1v = v, _acceleration(field, x, v)
            k2x = v + 0.5 * h * k1v
            k2v = _acceleration(field, x + 0.5 * h * k1x, k2x)
            k3x = v + 0.5 * h * k2v
            k3v = _acceleration(field, x + 0.5 * h * k2x, k3x)
            k4x = v + h * k3v
            k4v = _acceleration(field, x + h * k3x, k4x)
        except GuardError:
            return GeodesicPath(states, drift, exited_guard=True)
        x = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t += h
        if not field.inside(x, 4.0 * fd_step(x)):
            return GeodesicPath(states, drift, exited_guard=True)
        drift = max(drift, abs(speed(field, x, v) - s0) / s0)
        if drift > MAX_DRIFT:
            raise StepSizeError(f"speed drift {drift:.3g} exceeds {MAX_DRIFT}; reduce h")
        states.append(GeodesicState(x.copy(), v.copy(), t))
    return GeodesicPath(states, drift)


# --------------------------------------------------------------------------
# scans
# --------------------------------------------------------------------------

def scan_workers() -> int:
    try:
        return max(1, int(os.environ.get("LCFLAB_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class ScanReport:
    metric: dict
    kind: str
    seed: int | None
    h: float | None
    steps: int | None
    tol: float
    samples: list[dict]
    deviation: float
    verdict: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def default_start_radius(field: MetricField) -> float:
    return min(0.5, 0.25 * field.guard_radius)


def random_points(field: MetricField, count: int, seed: int, radius: float | None = None):
    """Seeded points uniform in a ball of ``radius`` about the chart origin."""
    rng = np.random.default_rng(seed)
    radius = default_start_radius(field) if radius is None else radius
    pts = []
    for _ in range(count):
        d = rng.standard_normal(field.dim)
        d /= np.linalg.norm(d)
        pts.append(radius * rng.uniform() ** (1.0 / field.dim) * d)
    return pts


def random_unit_states(field: MetricField, count: int, seed: int, radius: float | None = None):
    """Seeded starting points with velocities uniform on the unit g-sphere."""
    rng = np.random.default_rng(seed)
    radius = default_start_radius(field) if radius is None else radius
    states = []
    n = field.dim
    for _ in range(count):
        d = rng.standard_normal(n)
        x = radius * rng.uniform() ** (1.0 / n) * d / np.linalg.norm(d)
        w = rng.standard_normal(n)
        w /= np.linalg.norm(w)
        low = np.linalg.cholesky(field.metric(x[None, :])[0])
        states.append(GeodesicState(x, np.linalg.solve(low.T, w), 0.0))
    return states


def jacobi_spectrum_at(field: MetricField, x, v) -> np.ndarray:
    g = field.metric(np.asarray(x)[None, :])[0]
    R = riemann_at(field, x)
    return tc.sym_eigen(tc.jacobi_operator(R, v, g), g).eigenvalues


def _scan_one_geodesic(field, state, h, steps, stride):
    path = integrate_geodesic(field, state, h, steps)
    ref = None
    deviation = 0.0
    trace = []
    for k, st in enumerate(path.states):
        eig = jacobi_spectrum_at(field, st.position, st.velocity)
        if ref is None:
            ref = eig
        deviation = max(deviation, float(np.abs(eig - ref).max()))
        if k % stride == 0 or k == len(path.states) - 1:
            trace.append({"t": st.t, "eigenvalues": eig.tolist()})
    return {
        "position": np.asarray(state.position).tolist(),
        "velocity": np.asarray(state.velocity).tolist(),
        "steps_completed": len(path.states) - 1,
        "exited_guard": path.exited_guard,
        "speed_drift": path.speed_drift,
        "deviation": deviation,
        "trace": trace,
    }


def cspace_scan(
    field: MetricField,
    geodesics: int = 20,
    seed: int = 0,
    h: float = 0.01,
    steps: int = 100,
    tol: float = 1e-5,
    initial_states: list[GeodesicState] | None = None,
    sample_stride: int = 10,
    workers: int | None = None,
) -> ScanReport:
    """Jacobi-operator spectra along seeded random geodesics.

    The verdict is "constant" when every geodesic's sorted eigenvalues stay
    within ``tol`` of their starting values, at sampled resolution only.
    """
    if initial_states is None:
        initial_states = random_unit_states(field, geodesics, seed)
    workers = scan_workers() if workers is None else workers
    samples = _ordered_map(
        lambda st: _scan_one_geodesic(field, st, h, steps, sample_stride), initial_states, workers
    )
    deviation = max((s["deviation"] for s in samples), default=0.0)
    notes = ["verdict holds at sampled resolution only"]
    if any(s["exited_guard"] for s in samples):
        notes.append("some geodesics left the chart guard and were truncated")
    return ScanReport(
        metric=field.to_spec(),
        kind="cspace",
        seed=seed,
        h=h,
        steps=steps,
        tol=tol,
        samples=samples,
        deviation=deviation,
        verdict="constant" if deviation < tol else "non-constant",
        notes=notes,
    )


def ricci_constancy_scan(
    field: MetricField,
    points=None,
    count: int = 20,
    seed: int = 0,
    tol: float = 1e-5,
    workers: int | None = None,
) -> ScanReport:
    """Sorted Ricci-operator eigenvalues at sample points.

    ``deviation`` is the largest spread of any sorted eigenvalue slot across
    the points (equivalently the max pairwise sup-distance).
    """
    if points is None:
        points = random_points(field, count, seed)
    workers = scan_workers() if workers is None else workers
    spectra = _ordered_map(lambda p: ricci_spectrum(field, p), list(points), workers)
    eig = np.array([sp.eigenvalues for sp in spectra])
    deviation = float((eig.max(axis=0) - eig.min(axis=0)).max()) if len(eig) else 0.0
    samples = [
        {"point": np.asarray(p).tolist(), "eigenvalues": sp.eigenvalues.tolist(),
         "multiplicities": list(sp.multiplicities)}
        for p, sp in zip(points, spectra)
    ]
    return ScanReport(
        metric=field.to_spec(),
        kind="ricci",
        seed=seed,
        h=None,
        steps=None,
        tol=tol,
        samples=samples,
        deviation=deviation,
        verdict="constant" if deviation < tol else "non-constant",
        notes=["verdict holds at sampled resolution only"],
    )
