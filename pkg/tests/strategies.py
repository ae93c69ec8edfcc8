"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from qfcomm import DiagonalForm


def nonzero_rationals(bound: int = 10**4):
    num = st.integers(-bound, bound).filter(lambda n: n != 0)
    den = st.integers(1, bound)
    return st.builds(Fraction, num, den)


def small_nonzero_ints(bound: int = 60):
    return st.integers(-bound, bound).filter(lambda n: n != 0)


def forms(min_dim=1, max_dim=6, entries=None):
    if entries is None:
        entries = nonzero_rationals(200)
    return st.lists(entries, min_size=min_dim, max_size=max_dim).map(DiagonalForm)


def places(max_prime=50):
    from sympy import primerange

    return st.sampled_from(["inf"] + list(primerange(2, max_prime + 1)))
