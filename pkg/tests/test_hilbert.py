import pytest
from hypothesis import given

from oracles import hilbert_by_search
from qfcomm import INF, Place, hilbert_support, hilbert_symbol, nonsquare_partner
from qfcomm.errors import IsSquare, ZeroInput
from qfcomm.hilbert import symbol_candidates
from strategies import nonzero_rationals, places


def test_examples():
    assert hilbert_symbol(-1, -1, "inf") == -1
    assert hilbert_symbol(-1, -1, 3) == 1
    assert hilbert_symbol(3, 3, 3) == -1
    with pytest.raises(ZeroInput):
        hilbert_symbol(0, 1, 2)


def test_examples_against_hensel_search():
    assert hilbert_by_search(3, 3, 3) == -1
    assert hilbert_by_search(-1, -1, 3) == 1
    assert hilbert_by_search(3, 3, 2) == -1


def test_support_examples():
    assert hilbert_support(-1, -1) == {INF, Place(2)}
    assert hilbert_support(1, 7) == frozenset()
    assert hilbert_support(3, 3) == {Place(2), Place(3)}


def test_nonsquare_partner_examples():
    assert nonsquare_partner(-1, "inf") == -1
    assert nonsquare_partner(5, 3) == 3
    b = nonsquare_partner(2, 2)
    assert b in (-1, 5, -5, 2, -2, 10, -10)
    assert hilbert_symbol(2, b, 2) == -1
    assert hilbert_by_search(2, b, 2) == -1
    with pytest.raises(IsSquare):
        nonsquare_partner(17, 2)


def test_dyadic_formula_against_hensel_search():
    reps = [1, -1, 5, -5, 2, -2, 10, -10, 3, 6, 7, 14]
    for a in reps:
        for b in reps:
            assert hilbert_symbol(a, b, 2) == hilbert_by_search(a, b, 2), (a, b)


def test_odd_formula_against_hensel_search():
    for p in (3, 5, 7):
        vals = [1, 2, 3, 5, 6, 7, 10, 15, 21, -1, -3, -p, 2 * p]
        for a in vals:
            for b in vals:
                assert hilbert_symbol(a, b, p) == hilbert_by_search(a, b, p), (a, b, p)


@given(nonzero_rationals(), nonzero_rationals(), nonzero_rationals(), places())
def test_square_class_invariance(a, b, c, v):
    assert hilbert_symbol(a, b * c * c, v) == hilbert_symbol(a, b, v)


@given(nonzero_rationals(), nonzero_rationals(), places())
def test_symmetry(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@given(nonzero_rationals(), nonzero_rationals(), nonzero_rationals(), places())
def test_bimultiplicative(a1, a2, b, v):
    assert hilbert_symbol(a1 * a2, b, v) == hilbert_symbol(a1, b, v) * hilbert_symbol(a2, b, v)


@given(nonzero_rationals(), places())
def test_norm_identity(a, v):
    assert hilbert_symbol(a, -a, v) == 1


@given(nonzero_rationals(), nonzero_rationals())
def test_product_formula(a, b):
    prod = 1
    for v in symbol_candidates(a, b):
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1
    assert len(hilbert_support(a, b)) % 2 == 0


@given(nonzero_rationals(), places())
def test_partner_exists_for_nonsquares(a, v):
    from qfcomm import is_local_square

    if is_local_square(a, v):
        return
    assert hilbert_symbol(a, nonsquare_partner(a, v), v) == -1
