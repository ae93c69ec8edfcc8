import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import factorint as sympy_factorint
from sympy import isprime

from oracles import quadratic_residues
from qfcomm import Place, is_local_square, legendre_symbol, padic_valuation, squarefree_part
from qfcomm.arith import as_place, factor, local_class, local_class_reps
from qfcomm.errors import NotCoprime, NotPrime, ZeroInput
from strategies import nonzero_rationals, places


def test_squarefree_examples():
    assert squarefree_part(4).value == 1
    assert squarefree_part(-5).value == -5
    # 18/25 = 2 * (3/5)^2
    assert squarefree_part(Fraction(18, 25)).value == 2


def test_squarefree_rejects_zero():
    with pytest.raises(ZeroInput):
        squarefree_part(0)


def test_valuation_examples():
    assert padic_valuation(12, 2) == 2
    assert padic_valuation(Fraction(1, 3), 3) == -1
    assert padic_valuation(-5, 7) == 0
    with pytest.raises(ZeroInput):
        padic_valuation(0, 3)


def test_legendre_examples_match_residue_tables():
    assert 2 in quadratic_residues(7) and legendre_symbol(2, 7) == 1
    assert 2 not in quadratic_residues(3) and legendre_symbol(2, 3) == -1
    assert legendre_symbol(1, 11) == 1
    with pytest.raises(NotCoprime):
        legendre_symbol(9, 3)


def test_local_square_examples():
    assert is_local_square(-5, 3)
    assert is_local_square(17, 2)
    assert not is_local_square(-1, "inf")


def test_places():
    assert as_place("inf").is_infinite
    assert Place(2).is_dyadic
    assert str(as_place(7)) == "7"
    with pytest.raises(NotPrime):
        Place(15)
    with pytest.raises(NotPrime):
        Place(2**63 + 1)


def test_local_class_representatives_are_distinct_classes():
    for v in ["inf", 2, 3, 5, 7]:
        reps = local_class_reps(v)
        assert [local_class(r, v) for r in reps] == list(reps)
        for a in reps:
            for b in reps:
                assert is_local_square(Fraction(a, b), v) == (a == b)


@given(nonzero_rationals(), nonzero_rationals())
def test_squarefree_ignores_squares(x, y):
    assert squarefree_part(x * y * y) == squarefree_part(x)


@given(nonzero_rationals(), places())
def test_squares_are_local_squares(x, v):
    assert is_local_square(x * x, v)


@given(st.integers(1, 10**6), st.sampled_from([3, 5, 7, 11, 13, 101]))
def test_unit_square_test_matches_legendre(u, p):
    if u % p == 0:
        return
    assert is_local_square(u, p) == (legendre_symbol(u % p, p) == 1)
    assert is_local_square(u, p) == (u % p in quadratic_residues(p))


@given(nonzero_rationals(), nonzero_rationals(), st.sampled_from([2, 3, 5, 7]))
def test_valuation_is_additive(x, y, p):
    assert padic_valuation(x * y, p) == padic_valuation(x, p) + padic_valuation(y, p)


@given(nonzero_rationals(), places())
def test_local_class_is_in_the_same_class(x, v):
    assert is_local_square(x / local_class(x, v), v)


def test_factor_merges_repeated_primes():
    # this product once came back with 45673 listed twice
    n = 5161354422597468672567053922143954187022
    f = factor(n)
    assert f[45673] == 2
    assert f == sympy_factorint(n)


@given(st.integers(2, 10**30))
def test_factor_matches_sympy(n):
    f = factor(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(isprime(p) for p in f)
