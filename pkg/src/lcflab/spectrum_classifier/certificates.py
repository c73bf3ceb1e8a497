"""Rejection and admission certificates for multiplicity shapes.

Every rule produces a :class:`Certificate` whose ``witness`` holds the exact
numbers the decision rests on, serialized as JSON-ready values (integers
as ints, rationals as ``"p/q"`` strings). :mod:`.verify` re-checks these
witnesses without calling back into this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .constraints import (
    CandidateError,
    SpectrumCandidate,
    _check_partition,
    check_identities,
    frac_str,
    product_spectrum,
    residual_system,
)
from .poly import RationalPoly, sign_changes, signs_at_infinity, square_free_part, sturm_chain

ADMITTED = "admitted"
REJECTED = "rejected"
UNDECIDED = "undecided"

REJECTION_RULES = (
    "l3_quadratic",
    "dominant_multiplicity",
    "l_bound",
    "cubic_root_count",
    "residual_nonzero",
)
ADMISSION_RULES = ("einstein", "product_witness")


@dataclass
class Certificate:
    candidate: SpectrumCandidate
    verdict: str
    rule: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "l": self.candidate.l,
            "m": list(self.candidate.m),
            "verdict": self.verdict,
            "rule": self.rule,
            "witness": self.witness,
        }


# --------------------------------------------------------------------------
# three classes
# --------------------------------------------------------------------------

def l3_coefficients(n: int, m_odd: int, m2: int, m3: int) -> tuple[int, int]:
    """Coefficients ``(P, Q)`` of ``P (x2 - x3)^2 + Q x2 x3`` for one labeling.

    ``m_odd`` is the multiplicity of the class whose u has the sign opposite
    to the other two.
    """
    p = (n - m2) * m2 * (n - m3) * m3
    q = 4 * m_odd * m2 * m3 * (n - m_odd) + 4 * m2 * m2 * m3 * m3
    return p, q


def exclude_l3(n: int, m: Sequence[int]) -> Certificate:
    """Reject every spectrum with exactly three distinct classes.

    With ``A = 0`` the three u's cannot share a sign, so one class (the odd
    one) has the opposite sign and the ratios ``x2, x3`` of the other two to it
    satisfy ``x2 x3 > 0``. Eliminating between ``A = 0`` and ``B = 0`` gives
    ``P (x2 - x3)^2 + Q x2 x3 = 0`` with ``P, Q > 0``, which is impossible.
    All three choices of the odd class are certified.
    """
    m = _check_partition(m, n)
    if len(m) != 3 or n < 4:
        raise CandidateError(f"exclude_l3 needs a 3-part partition of n >= 4, got {m}")
    labelings = []
    for odd in range(3):
        m2, m3 = [m[k] for k in range(3) if k != odd]
        p, q = l3_coefficients(n, m[odd], m2, m3)
        # elimination identity: Q == (a + b)^2 - c^2 with the A-coefficients
        a, b, c = (n - m2) * m2, (n - m3) * m3, (n - m[odd]) * m[odd]
        if q != (a + b) ** 2 - c * c or p != a * b:
            raise AssertionError("elimination identity failed")
        labelings.append({"odd_class": odd, "P": p, "Q": q})
    ok = all(lab["P"] > 0 and lab["Q"] > 0 for lab in labelings)
    if not ok:
        raise AssertionError(f"non-positive l=3 coefficients for {m}")
    return Certificate(
        SpectrumCandidate(n=n, m=tuple(m)),
        REJECTED,
        "l3_quadratic",
        {"n": n, "m": list(m), "labelings": labelings},
    )


# --------------------------------------------------------------------------
# multiplicity filters
# --------------------------------------------------------------------------

def l_upper_bound(n: int) -> int:
    return n // 2 if n % 2 == 0 else (n + 1) // 2


def multiplicity_filters(n: int, l: int, m: Sequence[int]) -> Certificate | None:
    """Apply the multiplicity filters for ``l >= 3``; ``None`` means pass.

    Order: three classes are rejected outright; then the bound on ``l``
    (``l <= n/2`` or ``(n+1)/2``, and ``l >= 4`` only for ``n >= 7``); then
    the requirement of exactly one class with ``m_k > n/2``.
    """
    m = _check_partition(m, n)
    if len(m) != l:
        raise CandidateError(f"partition {m} does not have {l} parts")
    if l < 3:
        return None
    cand = SpectrumCandidate(n=n, m=tuple(m))
    if l == 3:
        return exclude_l3(n, m)
    bound = l_upper_bound(n)
    if l > bound or n < 7:
        return Certificate(
            cand, REJECTED, "l_bound",
            {"n": n, "l": l, "l_max": bound, "min_n_for_l_ge_4": 7},
        )
    dominant = [k for k in m if 2 * k > n]
    if len(dominant) != 1:
        return Certificate(
            cand, REJECTED, "dominant_multiplicity",
            {"n": n, "m": list(m), "dominant_count": len(dominant)},
        )
    return None


# --------------------------------------------------------------------------
# dominant class plus three simple classes
# --------------------------------------------------------------------------

def simple_triple_chain(n: int) -> dict[str, Fraction]:
    """Elementary symmetric values of ``x_i = u_i / u_dom`` for shape (n-3, 1, 1, 1).

    Works in the ratios directly (the system is scale invariant):

    * ``A = 0`` gives ``e1 = -c`` with ``c = 3(n-3)/(n-1)``,
    * ``B = 0`` gives ``sum 1/x_i = -c``, so ``e2 = -c e3``,
    * the dominant-class equation cleared of denominators reads
      ``3 - e1 - e2 + 3 e3 = 0``, whence ``e3 = (e1 - 3)/(c + 3) = -1``.
    """
    if n < 4:
        raise CandidateError("simple_triple_cubic needs n >= 4")
    m_dom = n - 3
    c = Fraction((n - m_dom) * m_dom, (n - 1) * 1)
    e1 = -c
    inv_sum = -c
    factor = 3 - inv_sum  # coefficient of e3 after substituting e2 = inv_sum * e3
    if factor == 0:
        raise AssertionError("degenerate elimination")
    e3 = (e1 - 3) / factor
    e2 = inv_sum * e3
    if 3 - e1 - e2 + 3 * e3 != 0:
        raise AssertionError("dominant-class equation not satisfied")
    return {"c": c, "e1": e1, "e2": e2, "e3": e3}


def simple_triple_cubic(n: int) -> RationalPoly:
    """Monic cubic whose roots would be the three ratios ``u_i / u_dom``."""
    ch = simple_triple_chain(n)
    poly = RationalPoly([1, -ch["e1"], ch["e2"], -ch["e3"]])
    c = Fraction(3 * (n - 3), n - 1)
    if poly.coeffs != (1, c, c, 1):
        raise AssertionError("cubic coefficients disagree with the closed form")
    return poly


def is_simple_triple(m: Sequence[int]) -> bool:
    return len(m) == 4 and sorted(m)[:3] == [1, 1, 1]


def cubic_exclusion(n: int, m: Sequence[int]) -> Certificate:
    """Certificate for shape (n-3, 1, 1, 1): rejected iff the cubic has one real root."""
    m = _check_partition(m, n)
    if not is_simple_triple(m):
        raise CandidateError(f"cubic exclusion applies to (n-3, 1, 1, 1), got {m}")
    poly = simple_triple_cubic(n)
    sq = square_free_part(poly)
    chain, quotients = sturm_chain(sq)
    minus, plus = signs_at_infinity(chain)
    count = sign_changes(minus) - sign_changes(plus)
    witness = {
        "n": n,
        "m": list(m),
        "cubic": [frac_str(c) for c in poly.coeffs],
        "square_free": [frac_str(c) for c in sq.coeffs],
        "sturm_chain": [[frac_str(c) for c in q.coeffs] for q in chain],
        "quotients": [[frac_str(c) for c in q.coeffs] for q in quotients],
        "signs_minus_inf": minus,
        "signs_plus_inf": plus,
        "real_root_count": count,
    }
    verdict = REJECTED if count < 3 else UNDECIDED
    return Certificate(SpectrumCandidate(n=n, m=tuple(m)), verdict, "cubic_root_count", witness)


# --------------------------------------------------------------------------
# admissions and explicit candidates
# --------------------------------------------------------------------------

def einstein_certificate(n: int) -> Certificate:
    return Certificate(
        SpectrumCandidate(n=n, m=(n,)), ADMITTED, "einstein",
        {"family": "real space form", "n": n},
    )


def product_certificate(n: int, m: Sequence[int], K=1) -> Certificate:
    """Admit a two-class shape with its exact product-of-space-forms spectrum.

    This is a witness check: the exact spectrum also happens to satisfy the
    residual system, which is recorded but is not the admission criterion.
    """
    a, b = sorted(m, reverse=True)
    if b == 1:
        cand = product_spectrum("form_times_line", n, K=K)
        family = "form_times_line"
    else:
        cand = product_spectrum("opposite_forms", n, a, K=K)
        family = "opposite_forms"
    res = residual_system(cand.u, cand.m, n)
    ident = check_identities(cand.u, cand.m, n)
    return Certificate(
        cand, ADMITTED, "product_witness",
        {
            "family": family,
            "K": frac_str(Fraction(K)),
            "r": [frac_str(x) for x in cand.r],
            "u": [frac_str(x) for x in cand.u],
            "residuals": [frac_str(x) for x in res],
            "identities": ident.to_dict(),
            "note": "witness check, not a criterion",
        },
    )


def check_candidate(cand: SpectrumCandidate) -> Certificate:
    """Decide an explicit candidate spectrum from its exact u values."""
    if cand.u is None:
        raise CandidateError("candidate needs u values")
    res = residual_system(cand.u, cand.m, cand.n)
    witness = {
        "n": cand.n,
        "m": list(cand.m),
        "u": [frac_str(x) for x in cand.u],
        "residuals": [frac_str(x) for x in res],
    }
    if any(x != 0 for x in res):
        return Certificate(cand, REJECTED, "residual_nonzero", witness)
    return Certificate(cand, UNDECIDED, "residual_zero", witness)
