"""Rationals, square classes, places of Q and local square tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Union

from flint import fmpz
from sympy import isprime

from .errors import NotCoprime, NotPrime, ZeroInput

RationalLike = Union[int, Fraction, str]

# Places are verified with a deterministic primality test; the test is only
# trusted below this bound.
MAX_PRIME = 2**63


def to_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _nonzero(x: RationalLike) -> Fraction:
    x = to_rational(x)
    if x == 0:
        raise ZeroInput("zero is not allowed here")
    return x


@lru_cache(maxsize=1 << 16)
def factor(n: int) -> dict:
    """Prime factorisation of ``|n|`` (cached)."""
    if n == 0:
        raise ZeroInput("cannot factor zero")
    out = {}
    # flint may report one prime in several pieces, so exponents are summed
    for p, e in fmpz(abs(n)).factor():
        out[int(p)] = out.get(int(p), 0) + int(e)
    return out


def prime_divisors(x: RationalLike) -> frozenset:
    """Primes dividing the numerator or denominator of ``x``."""
    x = _nonzero(x)
    return frozenset(factor(x.numerator)) | frozenset(factor(x.denominator))


@dataclass(frozen=True)
class Place:
    """A place of Q: ``Place(None)`` is the real place, ``Place(p)`` a prime."""

    prime: int | None = None

    def __post_init__(self):
        p = self.prime
        if p is None:
            return
        if not isinstance(p, int) or isinstance(p, bool):
            raise NotPrime(f"place must be an integer prime, got {p!r}")
        if p >= MAX_PRIME:
            raise NotPrime(f"{p} exceeds the supported prime range")
        if not isprime(p):
            raise NotPrime(f"{p} is not prime")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    @property
    def is_dyadic(self) -> bool:
        return self.prime == 2

    def sort_key(self):
        return (-1 if self.prime is None else self.prime)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)

    def __repr__(self):
        return f"Place({self})"


INF = Place(None)


def as_place(v) -> Place:
    """Coerce ``"inf"``, ``None``, an int prime or a :class:`Place`."""
    if isinstance(v, Place):
        return v
    if v is None or (isinstance(v, str) and v.strip().lower() in ("inf", "oo", "infinity")):
        return INF
    if isinstance(v, str):
        v = int(v.strip())
    return Place(v)


def sorted_places(places: Iterable[Place]) -> list:
    return sorted(set(places), key=Place.sort_key)


@dataclass(frozen=True)
class SquareClass:
    """A class in Q^x/(Q^x)^2, stored as a signed squarefree integer."""

    sign: int
    squarefree: int

    @classmethod
    def of(cls, x: RationalLike) -> "SquareClass":
        return squarefree_part(x)

    @property
    def value(self) -> int:
        return self.sign * self.squarefree

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        return SquareClass(self.sign * other.sign, squarefree_product(self.squarefree, other.squarefree))

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def _core(n: int) -> int:
    core = 1
    for p, e in factor(n).items():
        if e % 2:
            core *= p
    return core


def squarefree_part(x: RationalLike) -> SquareClass:
    x = _nonzero(x)
    core = squarefree_product(_core(x.numerator), _core(x.denominator))
    return SquareClass(1 if x > 0 else -1, core)


def squarefree_product(a: int, b: int) -> int:
    """Squarefree part of a * b for squarefree integers a, b; no factoring needed."""
    g = math.gcd(a, b)
    return (a // g) * (b // g)


def padic_valuation(x: RationalLike, p: int) -> int:
    x = _nonzero(x)
    if p < 2:
        raise NotPrime(f"{p} is not prime")

    def v(n):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        return k

    return v(x.numerator) - v(x.denominator)


def unit_part(x: RationalLike, p: int) -> Fraction:
    """``x / p^v_p(x)``, a p-adic unit."""
    x = _nonzero(x)
    return x / Fraction(p) ** padic_valuation(x, p)


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p and ``gcd(a, p) = 1``."""
    if a % p == 0:
        raise NotCoprime(f"{a} is divisible by {p}")
    return 1 if pow(a % p, (p - 1) // 2, p) == 1 else -1


def _unit_residue(u: Fraction, modulus: int) -> int:
    """Residue of the p-adic unit ``u`` modulo ``modulus``."""
    return u.numerator * pow(u.denominator, -1, modulus) % modulus


def is_local_square(x: RationalLike, v) -> bool:
    x = _nonzero(x)
    v = as_place(v)
    if v.is_infinite:
        return x > 0
    p = v.prime
    if padic_valuation(x, p) % 2:
        return False
    u = unit_part(x, p)
    if p == 2:
        return _unit_residue(u, 8) == 1
    return legendre_symbol(_unit_residue(u, p), p) == 1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    a = 2
    while legendre_symbol(a, p) == 1:
        a += 1
    return a


_DYADIC_UNIT_REP = {1: 1, 7: -1, 5: 5, 3: -5}


def local_class(x: RationalLike, v) -> int:
    """Canonical representative of the class of ``x`` in Q_v^x/(Q_v^x)^2.

    Representatives: ``±1`` at infinity; ``1, u, p, up`` at odd p with u the
    least quadratic nonresidue; ``±1, ±5, ±2, ±10`` at 2.
    """
    x = _nonzero(x)
    v = as_place(v)
    if v.is_infinite:
        return 1 if x > 0 else -1
    p = v.prime
    e = padic_valuation(x, p) % 2
    u = unit_part(x, p)
    if p == 2:
        return _DYADIC_UNIT_REP[_unit_residue(u, 8)] * 2**e
    unit = 1 if legendre_symbol(_unit_residue(u, p), p) == 1 else smallest_nonresidue(p)
    return unit * p**e


def local_class_reps(v) -> tuple:
    v = as_place(v)
    if v.is_infinite:
        return (1, -1)
    p = v.prime
    if p == 2:
        return (1, -1, 5, -5, 2, -2, 10, -10)
    u = smallest_nonresidue(p)
    return (1, u, p, u * p)
