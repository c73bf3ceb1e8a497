"""Exact multiplicity constraint system for constant Ricci spectra.

A conformally flat metric with constant Ricci eigenvalues ``r_k`` of
multiplicities ``m_k`` (``sum m_k = n``) and scalar curvature
``s = sum m_k r_k`` is studied through the shifted values

    u_k = 2 r_k - s / (n - 1).

For three or more distinct eigenvalues they must satisfy, for every k,

    n - m_k = 2 u_k * sum_{j != k} m_j / (u_k - u_j).

All arithmetic here is exact (``fractions.Fraction``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class CandidateError(ValueError):
    pass


def frac_str(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s)


def _check_partition(m: Sequence[int], n: int) -> list[int]:
    m = list(m)
    if any((not isinstance(k, int)) or k < 1 for k in m):
        raise CandidateError(f"multiplicities must be positive integers, got {m}")
    if sum(m) != n:
        raise CandidateError(f"multiplicities {m} sum to {sum(m)}, expected n = {n}")
    return m


def _check_u(u: Sequence, m: Sequence[int]) -> list[Fraction]:
    u = [Fraction(x) for x in u]
    if len(u) != len(m):
        raise CandidateError("u and m have different lengths")
    if any(x == 0 for x in u):
        raise CandidateError("u values must be nonzero")
    if len(set(u)) != len(u):
        raise CandidateError("u values must be pairwise distinct")
    return u


@dataclass(frozen=True)
class SpectrumCandidate:
    n: int
    m: tuple[int, ...]
    u: tuple[Fraction, ...] | None = None
    r: tuple[Fraction, ...] | None = None
    s: Fraction | None = None

    def __post_init__(self):
        if self.n < 4:
            raise CandidateError("n must be >= 4")
        _check_partition(self.m, self.n)
        if self.u is not None:
            _check_u(self.u, self.m)
        if self.r is not None and len(set(self.r)) != len(self.r):
            raise CandidateError("r values must be pairwise distinct")

    @property
    def l(self) -> int:
        return len(self.m)

    def ratios(self, ref: int = 0) -> tuple[Fraction, ...]:
        """``u_i / u_ref``, the scale-free view of the spectrum."""
        if self.u is None:
            raise CandidateError("candidate has no u values")
        return tuple(x / self.u[ref] for x in self.u)

    def to_dict(self) -> dict:
        d = {"n": self.n, "l": self.l, "m": list(self.m)}
        for key in ("u", "r"):
            vals = getattr(self, key)
            if vals is not None:
                d[key] = [frac_str(x) for x in vals]
        if self.s is not None:
            d["s"] = frac_str(self.s)
        return d


def to_u(r: Sequence, m: Sequence[int], n: int) -> list[Fraction]:
    m = _check_partition(m, n)
    r = [Fraction(x) for x in r]
    if len(r) != len(m):
        raise CandidateError("r and m have different lengths")
    s = sum(mk * rk for mk, rk in zip(m, r))
    return [2 * rk - s / (n - 1) for rk in r]


def residual_system(u: Sequence, m: Sequence[int], n: int) -> list[Fraction]:
    """``(n - m_k) - 2 u_k sum_{j != k} m_j / (u_k - u_j)`` for each k."""
    m = _check_partition(m, n)
    u = _check_u(u, m)
    if len(m) < 2:
        raise CandidateError("residual system needs at least two classes")
    out = []
    for k, uk in enumerate(u):
        acc = sum(Fraction(m[j]) / (uk - u[j]) for j in range(len(u)) if j != k)
        out.append((n - m[k]) - 2 * uk * acc)
    return out


@dataclass(frozen=True)
class IdentityReport:
    """Exact values of the identities implied by the residual system.

    ``A = sum (n - m_k) m_k u_k`` and ``B = sum (n - m_k) m_k / u_k``;
    ``C[k]`` is the residual of the rearranged form
    ``n - m_k = 2 sum_{j != k} m_j u_j / (u_j - u_k)``; and
    ``D = sum (n - 2 m_k) m_k u_k^2 + (sum m_k u_k)^2``.
    """

    A: Fraction
    B: Fraction
    C: tuple[Fraction, ...]
    D: Fraction

    def all_zero(self) -> bool:
        return self.A == 0 and self.B == 0 and self.D == 0 and all(c == 0 for c in self.C)

    def to_dict(self) -> dict:
        return {
            "A": frac_str(self.A),
            "B": frac_str(self.B),
            "C": [frac_str(c) for c in self.C],
            "D": frac_str(self.D),
        }


def check_identities(u: Sequence, m: Sequence[int], n: int) -> IdentityReport:
    m = _check_partition(m, n)
    u = _check_u(u, m)
    a = sum((n - mk) * mk * uk for mk, uk in zip(m, u))
    b = sum(Fraction((n - mk) * mk) / uk for mk, uk in zip(m, u))
    c = []
    for k, uk in enumerate(u):
        acc = sum(m[j] * u[j] / (u[j] - uk) for j in range(len(u)) if j != k)
        c.append((n - m[k]) - 2 * acc)
    total = sum(mk * uk for mk, uk in zip(m, u))
    d = sum((n - 2 * mk) * mk * uk * uk for mk, uk in zip(m, u)) + total * total
    return IdentityReport(Fraction(a), Fraction(b), tuple(c), Fraction(d))


def product_spectrum(kind: str, n: int, m: int | None = None, K=1) -> SpectrumCandidate:
    """Exact Ricci spectrum of a product of space forms.

    ``form_times_line``: an (n-1)-dimensional space form of curvature K times
    a line. ``opposite_forms``: an m-dimensional form of curvature K times an
    (n-m)-dimensional form of curvature -K.
    """
    K = Fraction(K)
    if K == 0:
        raise CandidateError("K must be nonzero (K = 0 is flat, a single class)")
    if kind == "form_times_line":
        if n < 4:
            raise CandidateError("form_times_line needs n >= 4")
        r = (Fraction(n - 2) * K, Fraction(0))
        mult = (n - 1, 1)
    elif kind == "opposite_forms":
        if m is None or not 2 <= m <= n - 2:
            raise CandidateError(f"opposite_forms needs 2 <= m <= n-2, got m={m}")
        r = ((m - 1) * K, -(n - m - 1) * K)
        mult = (m, n - m)
    else:
        raise CandidateError(f"unknown product kind {kind!r}")
    s = sum(mk * rk for mk, rk in zip(mult, r))
    u = tuple(to_u(r, mult, n))
    return SpectrumCandidate(n=n, m=mult, u=u, r=r, s=s)
