import json
from fractions import Fraction as F
from itertools import combinations

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from lcflab.spectrum_classifier import (
    CandidateError,
    CertificateInvalid,
    RationalPoly,
    SpectrumCandidate,
    check_identities,
    classify,
    cubic_exclusion,
    exclude_l3,
    frac_str,
    l3_coefficients,
    multiplicity_filters,
    partitions,
    product_spectrum,
    residual_system,
    search_candidates,
    simple_triple_chain,
    simple_triple_cubic,
    square_free_part,
    sturm_chain,
    sturm_real_root_count,
    to_u,
    verify_rejection,
)


def count_partitions(n, l):
    """Brute force: choose l - 1 cut points in 1..n-1 and keep the nonincreasing part lists."""
    total = 0
    for cuts in combinations(range(1, n), l - 1):
        parts = [b - a for a, b in zip((0,) + cuts, cuts + (n,))]
        total += all(x >= y for x, y in zip(parts, parts[1:]))
    return total


# ---------------------------------------------------------------- u-transform and residuals

def test_to_u_examples():
    assert to_u([2, 0], [3, 1], 4) == [2, -2]
    assert to_u([1, -1], [2, 2], 4) == [2, -2]
    assert to_u([1, -2], [2, 3], 5) == [3, -3]
    with pytest.raises(CandidateError):
        to_u([1, 2], [2, 1], 4)


def test_residual_examples():
    assert residual_system([2, -2], [3, 1], 4) == [0, 0]
    assert residual_system([3, -3], [2, 3], 5) == [0, 0]
    res = residual_system([2, -1], [2, 2], 4)
    assert res[0] == F(-2, 3) and res[1] != 0
    for bad in ([1, 1], [0, 2]):
        with pytest.raises(CandidateError):
            residual_system(bad, [2, 2], 4)


def test_identity_examples():
    rep = check_identities([2, -2], [3, 1], 4)
    assert (rep.A, rep.B, tuple(rep.C), rep.D) == (0, 0, (0, 0), 0)
    assert check_identities([3, -3], [2, 3], 5).all_zero()
    rep = check_identities([1, -2], [2, 2], 4)
    assert rep.A == -4 and not rep.all_zero()
    assert any(residual_system([1, -2], [2, 2], 4))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=50), min_size=2, max_size=5, unique=True),
       st.fractions(min_value=-9, max_value=9, max_denominator=9))
def test_residual_scale_invariance(u, c):
    if 0 in u or c == 0:
        return
    m = list(range(1, len(u) + 1))
    n = sum(m)
    assert residual_system([c * x for x in u], m, n) == residual_system(u, m, n)


@pytest.mark.parametrize("K", [F(1), F(2), F(1, 3)])
def test_witness_identities_for_products(K):
    for n in range(4, 9):
        cands = [product_spectrum("form_times_line", n, K=K)]
        cands += [product_spectrum("opposite_forms", n, m, K=K) for m in range(2, n - 1)]
        for c in cands:
            assert all(x == 0 for x in residual_system(c.u, c.m, n))
            assert check_identities(c.u, c.m, n).all_zero()


def test_product_spectrum_examples():
    c = product_spectrum("form_times_line", 4, K=1)
    assert (c.r, c.m, c.u) == ((2, 0), (3, 1), (2, -2))
    c = product_spectrum("opposite_forms", 4, 2, K=1)
    assert (c.r, c.m, c.u) == ((1, -1), (2, 2), (2, -2))
    c = product_spectrum("opposite_forms", 5, 2, K=1)
    assert (c.r, c.m, c.u) == ((1, -2), (2, 3), (3, -3))
    with pytest.raises(CandidateError):
        product_spectrum("opposite_forms", 5, 4)
    with pytest.raises(CandidateError):
        product_spectrum("opposite_forms", 5, 1)


def test_candidate_invariants():
    with pytest.raises(CandidateError):
        SpectrumCandidate(n=4, m=(2, 1))
    with pytest.raises(CandidateError):
        SpectrumCandidate(n=4, m=(2, 2), u=(F(1), F(1)))
    with pytest.raises(CandidateError):
        SpectrumCandidate(n=4, m=(2, 2), u=(F(0), F(1)))
    c = SpectrumCandidate(n=4, m=(3, 1), u=(F(2), F(-2)))
    assert c.ratios() == (1, -1)
    assert json.loads(json.dumps(c.to_dict()))["u"] == ["2/1", "-2/1"]


def test_frac_str_is_exact():
    assert frac_str(F(-15, 7)) == "-15/7"
    assert frac_str(F(3)) == "3/1"


# ---------------------------------------------------------------- l = 3

def test_exclude_l3_examples():
    for n, m, pq in [(4, (2, 1, 1), (9, 20)), (5, (3, 1, 1), (16, 28)), (8, (3, 3, 2), (180, 504))]:
        cert = exclude_l3(n, m)
        assert cert.verdict == "rejected" and cert.rule == "l3_quadratic"
        first = cert.witness["labelings"][0]
        assert (first["P"], first["Q"]) == pq
        assert len(cert.witness["labelings"]) == 3
    with pytest.raises(CandidateError):
        exclude_l3(5, (2, 1, 1))


def test_l3_coefficients_factor():
    # P = a*b and Q = (a + b)^2 - c^2 with a = (n-m2)m2, b = (n-m3)m3, c = (n-m1)m1
    n, m1, m2, m3 = sp.symbols("n m1 m2 m3")
    P = (n - m2) * m2 * (n - m3) * m3
    Q = 4 * m1 * m2 * m3 * (n - m1) + 4 * m2**2 * m3**2
    a, b = (n - m2) * m2, (n - m3) * m3
    c = (n - m1) * m1
    assert sp.expand((Q - ((a + b) ** 2 - c**2)).subs(n, m1 + m2 + m3)) == 0
    assert sp.expand(P - a * b) == 0
    assert l3_coefficients(8, 3, 3, 2) == (180, 504)


# ---------------------------------------------------------------- filters

def test_multiplicity_filter_examples():
    assert multiplicity_filters(8, 4, (4, 2, 1, 1)).rule == "dominant_multiplicity"
    assert multiplicity_filters(7, 4, (4, 1, 1, 1)) is None
    assert multiplicity_filters(6, 4, (3, 1, 1, 1)).rule == "l_bound"
    assert multiplicity_filters(5, 4, (2, 1, 1, 1)).rule == "l_bound"


# ---------------------------------------------------------------- cubic and Sturm

def test_cubic_examples():
    assert simple_triple_cubic(7) == RationalPoly([1, 2, 2, 1])
    assert str(simple_triple_cubic(7)) == "x^3 + 2*x^2 + 2*x + 1"
    assert simple_triple_cubic(8) == RationalPoly([1, F(15, 7), F(15, 7), 1])
    assert simple_triple_cubic(4) == RationalPoly([1, 1, 1, 1])


def test_cubic_chain_symmetric_functions():
    for n in range(4, 40):
        chain = simple_triple_chain(n)
        c = F(3 * (n - 3), n - 1)
        assert chain["e1"] == -c and chain["e2"] == c and chain["e3"] == -1


def test_sturm_examples():
    assert sturm_real_root_count(RationalPoly([1, 0, 1])) == 0
    assert sturm_real_root_count(RationalPoly([1, 2, 2, 1])) == 1
    assert sturm_real_root_count(RationalPoly([1, -6, 11, -6])) == 3
    # repeated root counts once
    assert sturm_real_root_count(RationalPoly([1, -2, 1])) == 1
    assert square_free_part(RationalPoly([1, -2, 1])) == RationalPoly([1, -1])
    with pytest.raises(ValueError):
        sturm_real_root_count(RationalPoly([0]))


def test_sturm_chain_quotient_identities():
    chain, quotients = sturm_chain(RationalPoly([1, 2, 2, 1]))
    for i, q in enumerate(quotients):
        assert chain[i] == q * chain[i + 1] - chain[i + 2]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=7))
def test_sturm_matches_sympy(coeffs):
    if coeffs[0] == 0:
        return
    x = sp.Symbol("x")
    expected = len(set(sp.real_roots(sp.Poly(coeffs, x))))
    assert sturm_real_root_count(RationalPoly(coeffs)) == expected


def test_cubic_has_one_real_root_sympy_oracle():
    x = sp.Symbol("x")
    for n in range(4, 201, 7):
        c = sp.Rational(3 * (n - 3), n - 1)
        assert len(set(sp.real_roots(sp.Poly(x**3 + c * x**2 + c * x + 1, x)))) == 1


def test_cubic_exclusion_certificate():
    cert = cubic_exclusion(8, (5, 1, 1, 1))
    assert cert.verdict == "rejected" and cert.rule == "cubic_root_count"
    assert cert.witness["real_root_count"] == 1
    assert verify_rejection(json.loads(json.dumps(cert.to_dict())), 8)


# ---------------------------------------------------------------- classification

def test_partitions_order_and_count():
    assert list(partitions(4, 2)) == [(3, 1), (2, 2)]
    assert list(partitions(7, 3)) == [(5, 1, 1), (4, 2, 1), (3, 3, 1), (3, 2, 2)]
    for n in range(1, 13):
        for l in range(1, n + 1):
            assert len(list(partitions(n, l))) == count_partitions(n, l)


def test_classify_4():
    rep = classify(4)
    assert rep.admitted_shapes() == [(4,), (3, 1), (2, 2)]
    assert not rep.undecided
    rules = {c.candidate.m: c.rule for c in rep.rejected}
    assert rules == {(2, 1, 1): "l3_quadratic", (1, 1, 1, 1): "l_bound"}


def test_classify_7_and_8():
    rep = classify(7)
    rules = {c.candidate.m: c.rule for c in rep.rejected}
    for m in [(5, 1, 1), (4, 2, 1), (3, 3, 1), (3, 2, 2)]:
        assert rules[m] == "l3_quadratic"
    assert rules[(4, 1, 1, 1)] == "cubic_root_count"
    assert all(rules[m] == "l_bound" for m in rules if len(m) >= 5)
    rep = classify(8)
    cert = next(c for c in rep.rejected if c.candidate.m == (5, 1, 1, 1))
    assert cert.witness["cubic"] == ["1/1", "15/7", "15/7", "1/1"]
    assert not rep.undecided


@pytest.mark.parametrize("n", range(4, 13))
def test_classification_is_total_and_sound(n):
    rep = classify(n)
    assert rep.enumerated == sum(count_partitions(n, l) for l in range(1, n + 1))
    for cert in rep.rejected:
        assert verify_rejection(json.loads(json.dumps(cert.to_dict())), n)
    if n <= 8:
        assert rep.matches_classification()


def test_n9_reports_undecided_not_admitted():
    rep = classify(9)
    assert [c.candidate.m for c in rep.undecided] == [(5, 2, 1, 1), (5, 1, 1, 1, 1)]
    assert rep.admitted_shapes() == rep.expected_admitted()
    assert "matches_classification" not in rep.summary()


def test_classify_l_max():
    rep = classify(6, l_max=2)
    assert rep.enumerated == 4 and rep.matches_classification()


def test_tampered_certificate_fails_verification():
    cert = exclude_l3(5, (3, 1, 1)).to_dict()
    cert["witness"]["labelings"][0]["Q"] = -1
    with pytest.raises(CertificateInvalid):
        verify_rejection(cert, 5)
    cert = cubic_exclusion(7, (4, 1, 1, 1)).to_dict()
    cert["witness"]["real_root_count"] = 3
    with pytest.raises(CertificateInvalid):
        verify_rejection(cert, 7)


# ---------------------------------------------------------------- numeric search

def test_search_examples():
    assert search_candidates(7, (4, 1, 1, 1), trials=200, seed=0) == []
    hits = search_candidates(4, (3, 1), trials=50, seed=0)
    assert [h["rational_guess"] for h in hits] == [["1/1", "-1/1"]]
    assert hits[0]["exact_verified"]
    assert "no exactness claim" in hits[0]["flag"]
    hits = search_candidates(5, (2, 3), trials=50, seed=0)
    assert [h["rational_guess"] for h in hits] == [["1/1", "-1/1"]]
