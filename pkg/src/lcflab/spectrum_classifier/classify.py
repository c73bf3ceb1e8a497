"""Per-dimension classification of constant Ricci spectra of conformally flat metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .certificates import (
    REJECTED,
    UNDECIDED,
    Certificate,
    cubic_exclusion,
    einstein_certificate,
    is_simple_triple,
    multiplicity_filters,
    product_certificate,
)
from .constraints import CandidateError, SpectrumCandidate

PROVEN_RANGE = range(4, 9)


def partitions(n: int, l: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` into exactly ``l`` parts, descending lexicographic order."""
    if max_part is None:
        max_part = n
    if l == 0:
        if n == 0:
            yield ()
        return
    if n < l:
        return
    hi = min(max_part, n - (l - 1))
    lo = -(-n // l)
    for first in range(hi, lo - 1, -1):
        for rest in partitions(n - first, l - 1, first):
            yield (first,) + rest


@dataclass
class ClassificationReport:
    n: int
    l_max: int
    admitted: list[Certificate] = field(default_factory=list)
    rejected: list[Certificate] = field(default_factory=list)
    undecided: list[Certificate] = field(default_factory=list)

    @property
    def enumerated(self) -> int:
        return len(self.admitted) + len(self.rejected) + len(self.undecided)

    def admitted_shapes(self) -> list[tuple[int, ...]]:
        return [c.candidate.m for c in self.admitted]

    def expected_admitted(self) -> list[tuple[int, ...]]:
        shapes = [(self.n,)] if self.l_max >= 1 else []
        if self.l_max >= 2:
            shapes += list(partitions(self.n, 2))
        return shapes

    def matches_classification(self) -> bool:
        """Admitted shapes are exactly Einstein, form x line and opposite forms."""
        return not self.undecided and self.admitted_shapes() == self.expected_admitted()

    def summary(self) -> dict:
        out = {
            "enumerated": self.enumerated,
            "admitted": len(self.admitted),
            "rejected": len(self.rejected),
            "undecided": len(self.undecided),
        }
        if self.n in PROVEN_RANGE:
            out["matches_classification"] = self.matches_classification()
            out["statement"] = (
                "locally isometric to a real space form, a space form times a line, "
                "or a product of two space forms with opposite curvatures"
            )
        else:
            out["statement"] = "exploration mode: undecided shapes are beyond the exact filters"
        return out

    def to_dict(self) -> dict:
        def admitted_entry(c: Certificate):
            d = c.to_dict()
            d["family"] = c.witness.get("family")
            return d

        return {
            "n": self.n,
            "l_max": self.l_max,
            "admitted": [admitted_entry(c) for c in self.admitted],
            "rejected": [c.to_dict() for c in self.rejected],
            "undecided": [c.to_dict() for c in self.undecided],
            "summary": self.summary(),
        }


def classify_shape(n: int, m: tuple[int, ...]) -> Certificate:
    l = len(m)
    if l == 1:
        return einstein_certificate(n)
    if l == 2:
        return product_certificate(n, m)
    cert = multiplicity_filters(n, l, m)
    if cert is not None:
        return cert
    if is_simple_triple(m):
        return cubic_exclusion(n, m)
    return Certificate(
        SpectrumCandidate(n=n, m=m), UNDECIDED, "beyond_exact_filters",
        {"note": "passes all exact filters; not decided by this method"},
    )


def classify(n: int, l_max: int | None = None) -> ClassificationReport:
    if n < 4:
        raise CandidateError("classification needs n >= 4")
    l_max = n if l_max is None else min(l_max, n)
    report = ClassificationReport(n, l_max)
    for l in range(1, l_max + 1):
        for m in partitions(n, l):
            cert = classify_shape(n, m)
            if cert.verdict == REJECTED:
                report.rejected.append(cert)
            elif cert.verdict == UNDECIDED:
                report.undecided.append(cert)
            else:
                report.admitted.append(cert)
    return report
