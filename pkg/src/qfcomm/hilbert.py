"""Hilbert symbols over R and Q_p."""

from __future__ import annotations

from .arith import (
    INF,
    Place,
    _nonzero,
    as_place,
    legendre_symbol,
    local_class_reps,
    prime_divisors,
    sorted_places,
)
from .errors import IsSquare
from .arith import is_local_square


def _split(n: int, p: int):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _hilbert_int(a: int, b: int, p: int | None) -> int:
    if p is None:
        return -1 if a < 0 and b < 0 else 1
    alpha, u = _split(a, p)
    beta, w = _split(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    s = 1
    if alpha * beta * ((p - 1) // 2) % 2:
        s = -s
    if beta % 2 and legendre_symbol(u, p) == -1:
        s = -s
    if alpha % 2 and legendre_symbol(w, p) == -1:
        s = -s
    return s


def hilbert_symbol(a, b, v) -> int:
    """(a, b)_v in {+1, -1}."""
    v = as_place(v)
    return _hilbert_int(_integral_class(a), _integral_class(b), v.prime)


def _integral_class(x) -> int:
    # x = n/d and n*d share a square class
    if type(x) is int and x:
        return x
    x = _nonzero(x)
    return x.numerator * x.denominator


def symbol_candidates(*xs) -> list:
    """Places outside which every symbol of the ``xs`` is trivial."""
    places = {INF, Place(2)}
    for x in xs:
        places.update(Place(p) for p in prime_divisors(x))
    return sorted_places(places)


def hilbert_support(a, b) -> frozenset:
    """Places where (a, b)_v = -1; always finite and of even size."""
    return frozenset(v for v in symbol_candidates(a, b) if hilbert_symbol(a, b, v) == -1)


def nonsquare_partner(a, v):
    """Some b with (a, b)_v = -1, for a nonsquare in Q_v."""
    v = as_place(v)
    if is_local_square(a, v):
        raise IsSquare(f"{a} is a square in Q_{v}")
    for b in local_class_reps(v):
        if hilbert_symbol(a, b, v) == -1:
            return b
    raise AssertionError("nondegeneracy of the Hilbert symbol failed")  # pragma: no cover
