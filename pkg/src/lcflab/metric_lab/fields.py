"""Catalog of coordinate-chart metrics.

Every field evaluates its metric on a batch of points: ``metric(points)``
takes an array of shape ``(..., n)`` and returns ``(..., n, n)``. All charts
are either globally conformally flat or block diagonal, so the geometry of
each catalog entry is known in closed form.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

DEFAULT_GUARD = 10.0


class MetricSpecError(ValueError):
    """Malformed metric specification. ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class GuardError(ValueError):
    """A point (or a finite-difference stencil around it) left the chart."""


def _as_number(value, key: str) -> float:
    if isinstance(value, bool):
        raise MetricSpecError(key, "expected a number")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            pass
    raise MetricSpecError(key, f"expected a number or 'p/q' string, got {value!r}")


class MetricField:
    kind = "abstract"

    def __init__(self, dim: int, guard_radius: float = DEFAULT_GUARD):
        if dim < 1:
            raise MetricSpecError("dim", "must be >= 1")
        self.dim = dim
        self.guard_radius = float(guard_radius)

    def metric(self, points) -> np.ndarray:
        raise NotImplementedError

    def inside(self, p, margin: float = 0.0) -> bool:
        """True when the closed ball of radius ``margin`` about p is in the chart."""
        return float(np.linalg.norm(p)) + margin < self.guard_radius

    def params(self) -> dict:
        return {}

    def to_spec(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "params": self.params()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({json.dumps(self.params(), sort_keys=True)}, dim={self.dim})"


def _identity(points, n):
    points = np.asarray(points, dtype=float)
    return np.broadcast_to(np.eye(n), points.shape[:-1] + (n, n)).copy()


class Flat(MetricField):
    kind = "flat"

    def metric(self, points):
        return _identity(points, self.dim)


class SpaceForm(MetricField):
    """Constant curvature ``K`` in the chart ``(1 + K|x|^2/4)^-2 * delta``."""

    kind = "space_form"

    def __init__(self, dim: int, K, guard_radius: float | None = None):
        if isinstance(K, (Fraction, int, str)):
            self.K_exact = Fraction(K)
        else:
            self.K_exact = Fraction(K).limit_denominator(10**12)
        self.K = float(self.K_exact)
        if guard_radius is None:
            guard_radius = 2.0 / math.sqrt(-self.K) if self.K < 0 else DEFAULT_GUARD
        elif self.K < 0:
            guard_radius = min(guard_radius, 2.0 / math.sqrt(-self.K))
        super().__init__(dim, guard_radius)

    def metric(self, points):
        points = np.asarray(points, dtype=float)
        r2 = np.sum(points * points, axis=-1)
        factor = (1.0 + 0.25 * self.K * r2) ** -2
        return factor[..., None, None] * _identity(points, self.dim)

    def params(self):
        k = self.K_exact
        return {"K": str(k) if k.denominator != 1 else int(k)}


class Conformal(MetricField):
    """``exp(2 f(x)) * delta`` for a catalog profile ``f``.

    Profiles:
      * ``linear``: ``f = c . x`` (``coefficients`` has length n)
      * ``quadratic``: ``f = sum_i a_i x_i^2`` (``coefficients`` has length n)
      * ``gaussian``: ``f = A exp(-b |x|^2)`` (``coefficients = [A, b]``)
    """

    kind = "conformal"
    profiles = ("linear", "quadratic", "gaussian")

    def __init__(self, dim: int, profile: str, coefficients, guard_radius: float = DEFAULT_GUARD):
        super().__init__(dim, guard_radius)
        if profile not in self.profiles:
            raise MetricSpecError("params.profile", f"unknown profile {profile!r}")
        coefficients = [float(c) for c in coefficients]
        expected = 2 if profile == "gaussian" else dim
        if len(coefficients) != expected:
            raise MetricSpecError(
                "params.coefficients", f"profile {profile!r} needs {expected} coefficients"
            )
        self.profile = profile
        self.coefficients = np.array(coefficients)

    def f(self, points):
        x = np.asarray(points, dtype=float)
        c = self.coefficients
        if self.profile == "linear":
            return x @ c
        if self.profile == "quadratic":
            return (x * x) @ c
        return c[0] * np.exp(-c[1] * np.sum(x * x, axis=-1))

    def metric(self, points):
        factor = np.exp(2.0 * self.f(points))
        return factor[..., None, None] * _identity(points, self.dim)

    def params(self):
        return {"profile": self.profile, "coefficients": self.coefficients.tolist()}


class Perturbation(MetricField):
    """``delta + eps * x_1^2 * dx_2^2``: a warped, non-conformally-flat chart."""

    kind = "perturbation"

    def __init__(self, dim: int, epsilon: float, guard_radius: float = DEFAULT_GUARD):
        if dim < 2:
            raise MetricSpecError("dim", "perturbation needs dim >= 2")
        super().__init__(dim, guard_radius)
        self.epsilon = float(epsilon)
        if self.epsilon < 0:
            # keeps g_22 = 1 + eps x_1^2 positive inside the guard
            self.guard_radius = min(self.guard_radius, 0.99 / math.sqrt(-self.epsilon))

    def metric(self, points):
        points = np.asarray(points, dtype=float)
        g = _identity(points, self.dim)
        g[..., 1, 1] += self.epsilon * points[..., 0] ** 2
        return g

    def params(self):
        return {"epsilon": self.epsilon}


class Product(MetricField):
    """Riemannian product; coordinates are the factors' coordinates in order."""

    kind = "product"

    def __init__(self, factors: list[MetricField]):
        if not factors:
            raise MetricSpecError("params.factors", "product needs at least one factor")
        self.factors = list(factors)
        dims = [f.dim for f in self.factors]
        self.slices = []
        start = 0
        for d in dims:
            self.slices.append(slice(start, start + d))
            start += d
        super().__init__(start, min(f.guard_radius for f in self.factors))

    def metric(self, points):
        points = np.asarray(points, dtype=float)
        g = np.zeros(points.shape[:-1] + (self.dim, self.dim))
        for f, sl in zip(self.factors, self.slices):
            g[..., sl, sl] = f.metric(points[..., sl])
        return g

    def inside(self, p, margin: float = 0.0) -> bool:
        p = np.asarray(p, dtype=float)
        return all(f.inside(p[sl], margin) for f, sl in zip(self.factors, self.slices))

    def params(self):
        return {"factors": [f.to_spec() for f in self.factors]}


def metric_at(field: MetricField, p) -> np.ndarray:
    """Point metric of ``field`` at ``p``, checked against the chart guard."""
    p = np.asarray(p, dtype=float)
    if not field.inside(p):
        raise GuardError(f"point {p.tolist()} outside chart guard")
    return field.metric(p[None, :])[0]


# --------------------------------------------------------------------------
# spec files
# --------------------------------------------------------------------------

_PARAM_KEYS = {
    "flat": {"guard_radius"},
    "space_form": {"K", "guard_radius"},
    "conformal": {"profile", "coefficients", "guard_radius"},
    "perturbation": {"epsilon", "guard_radius"},
    "product": {"factors"},
}


def field_from_spec(spec: dict, path: str = "") -> MetricField:
    """Build a field from ``{"kind": ..., "dim": n, "params": {...}}``."""
    if not isinstance(spec, dict):
        raise MetricSpecError(path or "<root>", "expected an object")
    unknown = set(spec) - {"kind", "dim", "params"}
    if unknown:
        raise MetricSpecError(path + sorted(unknown)[0], "unknown key")
    kind = spec.get("kind")
    if kind not in _PARAM_KEYS:
        raise MetricSpecError(path + "kind", f"unknown kind {kind!r}")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise MetricSpecError(path + "params", "expected an object")
    bad = set(params) - _PARAM_KEYS[kind]
    if bad:
        raise MetricSpecError(path + "params." + sorted(bad)[0], "unknown key")

    if kind == "product":
        factors = params.get("factors")
        if not isinstance(factors, list) or not factors:
            raise MetricSpecError(path + "params.factors", "expected a non-empty list")
        field = Product(
            [field_from_spec(f, f"{path}params.factors[{i}].") for i, f in enumerate(factors)]
        )
        if "dim" in spec and spec["dim"] != field.dim:
            raise MetricSpecError(path + "dim", f"factor dims sum to {field.dim}")
        return field

    dim = spec.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MetricSpecError(path + "dim", "expected a positive integer")
    extra = {}
    if "guard_radius" in params:
        extra["guard_radius"] = _as_number(params["guard_radius"], path + "params.guard_radius")
    if kind == "flat":
        return Flat(dim, **extra)
    if kind == "space_form":
        if "K" not in params:
            raise MetricSpecError(path + "params.K", "missing")
        k = params["K"]
        _as_number(k, path + "params.K")
        k = Fraction(k) if isinstance(k, (int, str)) else Fraction(k).limit_denominator(10**12)
        return SpaceForm(dim, k, **extra)
    if kind == "conformal":
        coeffs = params.get("coefficients")
        if not isinstance(coeffs, list):
            raise MetricSpecError(path + "params.coefficients", "expected a list")
        coeffs = [_as_number(c, f"{path}params.coefficients[{i}]") for i, c in enumerate(coeffs)]
        return Conformal(dim, params.get("profile"), coeffs, **extra)
    if "epsilon" not in params:
        raise MetricSpecError(path + "params.epsilon", "missing")
    return Perturbation(dim, _as_number(params["epsilon"], path + "params.epsilon"), **extra)


def load_field(path) -> MetricField:
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MetricSpecError("<file>", f"invalid JSON ({exc})") from exc
    return field_from_spec(spec)


# named catalog entries used by the calibration suite and tests

def sphere_times_hyperbolic(k: float = 1.0) -> Product:
    return Product([SpaceForm(2, k), SpaceForm(2, -k)])


def sphere_times_sphere() -> Product:
    return Product([SpaceForm(2, 1), SpaceForm(2, 1)])


def form_times_line(n: int = 4, k: float = 1.0) -> Product:
    return Product([SpaceForm(n - 1, k), Flat(1)])
