"""Numeric exploration of the residual system beyond the exact filters."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .constraints import CandidateError, frac_str, residual_system

NUMERIC_FLAG = "numeric candidate - no exactness claim"


def _residual(u, m, n):
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, np.inf)
    return (n - m) - 2.0 * u * np.sum(m[None, :] / diff, axis=1)


def _jacobian(u, m):
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, np.inf)
    s1 = np.sum(m[None, :] / diff, axis=1)
    s2 = np.sum(m[None, :] / diff**2, axis=1)
    jac = -2.0 * u[:, None] * m[None, :] / diff**2
    np.fill_diagonal(jac, -2.0 * s1 + 2.0 * u * s2)
    return jac


def _newton(u, m, n, iters: int):
    for _ in range(iters):
        f = _residual(u, m, n)
        norm = np.linalg.norm(f)
        if not np.isfinite(norm):
            return None
        if norm < 1e-13:
            break
        step = np.linalg.lstsq(_jacobian(u, m), -f, rcond=None)[0]
        lam = 1.0
        while lam > 1e-6:
            trial = u + lam * step
            trial /= np.linalg.norm(trial)
            fn = np.linalg.norm(_residual(trial, m, n))
            if np.isfinite(fn) and fn < norm:
                u = trial
                break
            lam /= 2.0
        else:
            return u
    return u


def _rational_guess(ratios, max_den: int):
    return [Fraction(float(x)).limit_denominator(max_den) for x in ratios]


def search_candidates(
    n: int, m, trials: int = 1000, seed: int = 0, iters: int = 60, max_den: int = 10_000
) -> list[dict]:
    """Damped Gauss-Newton on the residual system from seeded random starts.

    Returns distinct numeric near-solutions (max residual below 1e-10, u
    nonzero and pairwise separated), each scaled so that ``u[0] = 1`` and
    paired with a rational reconstruction that is re-checked exactly. The
    search decides nothing: an empty list is not a proof and a hit is flagged
    as numeric.
    """
    m_arr = np.array(m, dtype=float)
    if len(m) < 2 or sum(m) != n:
        raise CandidateError(f"need a partition of {n} into at least two parts, got {m}")
    rng = np.random.default_rng(seed)
    found: dict[tuple, dict] = {}
    for _ in range(trials):
        u0 = rng.standard_normal(len(m))
        u0 /= np.linalg.norm(u0)
        u = _newton(u0, m_arr, n, iters)
        if u is None:
            continue
        f = _residual(u, m_arr, n)
        if not np.all(np.isfinite(f)) or np.abs(f).max() >= 1e-10:
            continue
        scale = np.abs(u).max()
        gaps = np.abs(u[:, None] - u[None, :])[~np.eye(len(m), dtype=bool)]
        if np.abs(u).min() < 1e-6 * scale or gaps.min() < 1e-6 * scale:
            continue
        ratios = u / u[0]
        key = tuple(np.round(ratios, 8))
        if key in found:
            continue
        guess = _rational_guess(ratios, max_den)
        try:
            exact = all(x == 0 for x in residual_system(guess, list(m), n))
        except CandidateError:
            exact = False
        found[key] = {
            "m": list(m),
            "u": ratios.tolist(),
            "max_residual": float(np.abs(f).max()),
            "rational_guess": [frac_str(x) for x in guess],
            "exact_verified": exact,
            "flag": NUMERIC_FLAG,
        }
    return [found[k] for k in sorted(found)]
