import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import hilbert_by_search, is_sum_of_two_squares
from qfcomm import (
    DiagonalForm,
    delete_entries,
    direct_sum,
    global_invariants,
    hasse_variants,
    hilbert_symbol,
    order_form,
    rediagonalize,
    scale,
)
from qfcomm.arith import as_place
from qfcomm.errors import DimensionTooSmall, EmptyResult, ZeroInput, ZeroScalar
from qfcomm.forms import hasse_c_om
from qfcomm.global_theory import union_support
from strategies import forms, nonzero_rationals, places

F = DiagonalForm.of


def oracle_hasse(entries, p):
    c = 1
    for a, b in itertools.combinations(entries, 2):
        c *= hilbert_by_search(a, b, p)
    return c


def test_zero_entry_rejected():
    with pytest.raises(ZeroInput):
        F(1, 0, 2)


def test_profile_examples():
    prof = global_invariants(F(1, 1, 3, 3, -5))
    assert prof.det.value == -5
    assert prof.hasse(3) == -1 == oracle_hasse([1, 1, 3, 3, -5], 3)
    prof = global_invariants(F(1, 1, 1, 3, 3, -1))
    assert prof.det.value == -1
    assert prof.hasse(3) == -1
    one = global_invariants(F(Fraction(-7, 3)))
    assert one.hasse_minus == frozenset()


def test_profile_json_shape():
    doc = global_invariants(F(1, 1, 3, 3, -5)).to_json()
    assert doc == {"dim": 5, "det": -5, "disc": -5, "signature": [4, 1], "hasse": {"2": -1, "3": -1}}


def test_hasse_variant_examples():
    for v in ["inf", 2, 3, 5]:
        assert hasse_variants(F(1, -1, 1, -1), v)[2] == 1
    for a in (3, -1, 2, Fraction(-5, 7)):
        for v in ["inf", 2, 3, 7]:
            assert hasse_c_om(F(a), v) == (1, hilbert_symbol(-1, a, v))
    c, c_om, _ = hasse_variants(F(1, 1, 3, 3), 3)
    assert (c, c_om) == (-1, -1)
    assert oracle_hasse([1, 1, 3, 3], 3) == -1
    with pytest.raises(DimensionTooSmall):
        hasse_variants(F(1, 1, 1), 3)


def test_scale_examples():
    for lam in (2, -3, Fraction(5, 7), -1):
        assert global_invariants(scale(F(1, -1), lam)) == global_invariants(F(1, -1))
    assert F(1, 1).hasse(2) == 1
    assert scale(F(1, 1), -1).hasse(2) == -1 == oracle_hasse([-1, -1], 2)
    # odd case: the factor is (2, -1)_2, which is +1, so c_2 does not move
    assert hilbert_symbol(2, -1, 2) == 1 == hilbert_by_search(2, -1, 2)
    assert scale(F(1, 1, 1), 2).hasse(2) == F(1, 1, 1).hasse(2) == 1
    with pytest.raises(ZeroScalar):
        scale(F(1), 0)


def test_direct_sum_examples():
    assert global_invariants(direct_sum(F(1), F(1))).hasse_minus == frozenset()
    assert direct_sum(F(3), F(3)).hasse(3) == -1 == hilbert_by_search(3, 3, 3)
    assert direct_sum(F(1, 1, 1), F(1, -5)) == F(1, 1, 1, 1, -5)


def test_delete_examples():
    assert delete_entries(F(1, 1, 1, 1, -5), {3}) == F(1, 1, 1, -5)
    assert delete_entries(F(7, 11), {1}) == F(7)
    assert delete_entries(F(1, 1, 1, 3, 3, -1), {0, 1}) == F(1, 3, 3, -1)
    with pytest.raises(EmptyResult):
        delete_entries(F(1, 2), {0, 1})


def test_rediagonalize_examples():
    for seed in range(20):
        a, b = rediagonalize(F(1, 1), seed).entries
        assert is_sum_of_two_squares(a) and is_sum_of_two_squares(b)
        assert rediagonalize(F(1, -1), seed).det.value == -1


def test_order_form_examples():
    lam, q = order_form(F(-1, -1, -1, 1))
    assert lam == -1 and q.signature == (3, 1)
    assert order_form(F(1, 1))[0] == 1
    assert order_form(F(1, -1))[0] == 1


@given(forms(max_dim=6), st.integers(0, 10**6))
def test_profile_survives_rediagonalization(q, seed):
    assert global_invariants(rediagonalize(q, seed)) == global_invariants(q)


@given(forms(max_dim=7))
def test_hasse_product_formula(q):
    prod = 1
    for v in q.support:
        prod *= q.hasse(v)
    assert prod == 1


@given(forms(max_dim=4), forms(max_dim=4))
def test_direct_sum_law(q1, q2):
    s = direct_sum(q1, q2)
    for v in union_support(q1, q2):
        assert s.hasse(v) == q1.hasse(v) * q2.hasse(v) * hilbert_symbol(q1.det.value, q2.det.value, v)


@given(forms(max_dim=6), nonzero_rationals(500))
def test_scaling_law(q, lam):
    m = q.dim
    t = (-1) ** (m * (m - 1) // 2) * q.det.value ** (m - 1)
    s = scale(q, lam)
    for v in union_support(q, s):
        assert s.hasse(v) == hilbert_symbol(lam, t, v) * q.hasse(v)


@given(forms(max_dim=6), st.randoms(use_true_random=False))
def test_permutation_invariance(q, rnd):
    entries = list(q.entries)
    rnd.shuffle(entries)
    assert global_invariants(DiagonalForm(entries)) == global_invariants(q)


@given(forms(min_dim=1, max_dim=3), places())
def test_hasse_is_pairwise_product(q, v):
    c = 1
    for a, b in itertools.combinations(q.entries, 2):
        c *= hilbert_symbol(a, b, v)
    assert q.hasse(v) == c
    assert q.hasse(as_place(v)) == global_invariants(q).hasse(v) or as_place(v) not in q.support


def test_hasse_matches_hensel_search():
    rng = random.Random(7)
    for _ in range(40):
        entries = [rng.choice([-1, 1]) * rng.randint(1, 20) for _ in range(rng.randint(2, 4))]
        for p in (2, 3, 5):
            assert F(*entries).hasse(p) == oracle_hasse(entries, p), (entries, p)
