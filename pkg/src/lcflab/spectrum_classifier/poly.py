"""Exact univariate polynomials over the rationals and Sturm root counting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _strip(coeffs: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(coeffs) - 1 and coeffs[i] == 0:
        i += 1
    return coeffs[i:]


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with Fraction coefficients, highest degree first.

    ``RationalPoly([1, 2, 2, 1])`` is ``x^3 + 2x^2 + 2x + 1``. Leading zeros
    are stripped; the zero polynomial is ``RationalPoly([0])``.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs):
        cs = _strip([Fraction(c) for c in coeffs] or [Fraction(0)])
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    def monic(self) -> RationalPoly:
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic form")
        return RationalPoly([c / self.leading for c in self.coeffs])

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def derivative(self) -> RationalPoly:
        d = self.degree
        if d <= 0:
            return RationalPoly([0])
        return RationalPoly([c * (d - i) for i, c in enumerate(self.coeffs[:-1])])

    def __neg__(self) -> RationalPoly:
        return RationalPoly([-c for c in self.coeffs])

    def __add__(self, other: RationalPoly) -> RationalPoly:
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        b = [Fraction(0)] * (len(a) - len(b)) + b
        return RationalPoly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: RationalPoly) -> RationalPoly:
        return self + (-other)

    def __mul__(self, other: RationalPoly) -> RationalPoly:
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPoly(out)

    def divmod(self, other: RationalPoly) -> tuple[RationalPoly, RationalPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        if dq < 0:
            return RationalPoly([0]), self
        quot = []
        for i in range(dq + 1):
            factor = rem[i] / other.leading
            quot.append(factor)
            for j, c in enumerate(other.coeffs):
                rem[i + j] -= factor * c
        return RationalPoly(quot), RationalPoly(rem[dq + 1 :] or [0])

    def __str__(self) -> str:
        terms = []
        d = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0 and d > 0:
                continue
            p = d - i
            mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
            if mono and c == 1:
                terms.append(f"+ {mono}")
            elif mono and c == -1:
                terms.append(f"- {mono}")
            else:
                sign = "-" if c < 0 else "+"
                terms.append(f"{sign} {abs(c)}{'*' + mono if mono else ''}")
        s = " ".join(terms) or "0"
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def poly_gcd(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    """Monic greatest common divisor (Euclid)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def square_free_part(p: RationalPoly) -> RationalPoly:
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree <= 0:
        return p.monic()
    return p.divmod(poly_gcd(p, p.derivative()))[0].monic()


def sturm_chain(p: RationalPoly) -> tuple[list[RationalPoly], list[RationalPoly]]:
    """Sturm sequence ``p, p', -rem(p_{i-1}, p_i), ...`` and the quotients used.

    ``quotients[i]`` satisfies ``chain[i] = quotients[i] * chain[i+1] - chain[i+2]``.
    """
    chain = [p, p.derivative()]
    quotients = []
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        q, r = chain[-2].divmod(chain[-1])
        quotients.append(q)
        chain.append(-r)
    if chain[-1].is_zero():
        chain.pop()
    return chain, quotients


def sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signs_at_infinity(chain: list[RationalPoly]) -> tuple[list[int], list[int]]:
    def sign(c):
        return 1 if c > 0 else -1

    plus = [sign(q.leading) for q in chain]
    minus = [sign(q.leading) * (-1) ** q.degree for q in chain]
    return minus, plus


def sturm_real_root_count(p: RationalPoly) -> int:
    """Number of distinct real roots of ``p``, computed exactly."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    q = square_free_part(p)
    if q.degree <= 0:
        return 0
    minus, plus = signs_at_infinity(sturm_chain(q)[0])
    return sign_changes(minus) - sign_changes(plus)
