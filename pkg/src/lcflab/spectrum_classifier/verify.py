"""Stand-alone re-checking of serialized certificates.

Only ``fractions`` is used: each check recomputes the decision from the
witness numbers (and the shape ``n, m``) with plain arithmetic, so a
certificate can be validated without the pipeline that produced it.
"""

from __future__ import annotations

from fractions import Fraction


class CertificateInvalid(AssertionError):
    pass


def _require(cond, msg):
    if not cond:
        raise CertificateInvalid(msg)


def _poly(cs):
    return [Fraction(c) for c in cs]


def _strip(p):
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
    return p


def _mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _sub(a, b):
    n = max(len(a), len(b))
    a = [Fraction(0)] * (n - len(a)) + list(a)
    b = [Fraction(0)] * (n - len(b)) + list(b)
    return _strip([x - y for x, y in zip(a, b)])


def _deriv(p):
    d = len(p) - 1
    return _strip([c * (d - i) for i, c in enumerate(p[:-1])]) if d > 0 else [Fraction(0)]


def _changes(signs):
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _check_l3(w, n, m):
    _require(len(m) == 3, "l3 certificate needs three classes")
    seen = set()
    for lab in w["labelings"]:
        odd = lab["odd_class"]
        seen.add(odd)
        m2, m3 = [m[k] for k in range(3) if k != odd]
        p = (n - m2) * m2 * (n - m3) * m3
        q = 4 * m[odd] * m2 * m3 * (n - m[odd]) + 4 * (m2 * m3) ** 2
        _require(p == lab["P"] and q == lab["Q"], f"P/Q mismatch for odd class {odd}")
        _require(p > 0 and q > 0, "coefficients must be positive")
    _require(seen == {0, 1, 2}, "all three labelings must be certified")


def _check_l_bound(w, n, m):
    l = len(m)
    bound = n // 2 if n % 2 == 0 else (n + 1) // 2
    _require(w["l_max"] == bound, "wrong l bound")
    _require(l > bound or (l >= 4 and n < 7), "shape does not violate the l bound")


def _check_dominant(w, n, m):
    count = sum(1 for k in m if 2 * k > n)
    _require(count == w["dominant_count"], "dominant count mismatch")
    _require(count != 1, "shape has exactly one dominant class")


def _check_cubic(w, n, m):
    _require(sorted(m)[:3] == [1, 1, 1] and len(m) == 4, "cubic rule needs (n-3,1,1,1)")
    c = Fraction(3 * (n - 3), n - 1)
    cubic = _poly(w["cubic"])
    _require(cubic == [1, c, c, 1], "cubic coefficients disagree with closed form")
    chain = [_poly(q) for q in w["sturm_chain"]]
    quots = [_poly(q) for q in w["quotients"]]
    sq = _poly(w["square_free"])
    # square-free part divides the cubic and the chain ends in a constant
    _require(chain[0] == sq and chain[1] == _deriv(sq), "chain must start with p, p'")
    _require(len(chain[-1]) == 1 and chain[-1][0] != 0, "chain must end in a nonzero constant")
    _require(len(quots) == len(chain) - 2, "quotient count mismatch")
    for i, q in enumerate(quots):
        lhs = chain[i]
        rhs = _sub(_mul(q, chain[i + 1]), chain[i + 2])
        _require(_sub(lhs, rhs) == [0], f"division step {i} does not hold")
        _require(len(chain[i + 2]) < len(chain[i + 1]), "remainder degree must drop")
    # cubic = sq * k for some polynomial k: compare after scaling is enough when degrees match
    if len(sq) == len(cubic):
        ratio = cubic[0] / sq[0]
        _require([ratio * x for x in sq] == cubic, "square-free part inconsistent")
    plus = [1 if p[0] > 0 else -1 for p in chain]
    minus = [s * (-1) ** (len(p) - 1) for s, p in zip(plus, chain)]
    count = _changes(minus) - _changes(plus)
    _require(count == w["real_root_count"], "root count mismatch")
    _require(count < 3, "three distinct real ratios are possible")


def _check_residual(w, n, m):
    u = [Fraction(x) for x in w["u"]]
    res = []
    for k, uk in enumerate(u):
        acc = sum(Fraction(m[j]) / (uk - u[j]) for j in range(len(u)) if j != k)
        res.append((n - m[k]) - 2 * uk * acc)
    _require(res == [Fraction(x) for x in w["residuals"]], "residual mismatch")
    _require(any(x != 0 for x in res), "residuals all vanish")


_CHECKS = {
    "l3_quadratic": _check_l3,
    "l_bound": _check_l_bound,
    "dominant_multiplicity": _check_dominant,
    "cubic_root_count": _check_cubic,
    "residual_nonzero": _check_residual,
}


def verify_rejection(cert: dict, n: int) -> bool:
    """Re-check a serialized rejection; raises :class:`CertificateInvalid`."""
    m = list(cert["m"])
    _require(sum(m) == n and all(k >= 1 for k in m), "malformed partition")
    _require(cert.get("verdict", "rejected") == "rejected", "not a rejection")
    check = _CHECKS.get(cert["rule"])
    _require(check is not None, f"unknown rule {cert['rule']!r}")
    check(cert["witness"], n, m)
    return True
