"""Diagonal quadratic forms over Q and their classical invariants."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .arith import (
    INF,
    Place,
    SquareClass,
    as_place,
    prime_divisors,
    sorted_places,
    squarefree_part,
    squarefree_product,
    to_rational,
)
from .errors import DimensionTooSmall, EmptyResult, ZeroInput, ZeroScalar
from .hilbert import hilbert_symbol


@dataclass(frozen=True)
class DiagonalForm:
    """The form <a_1, ..., a_m> = a_1 x_1^2 + ... + a_m x_m^2."""

    entries: tuple

    def __init__(self, entries: Iterable):
        entries = tuple(to_rational(a) for a in entries)
        if not entries:
            raise EmptyResult("a form needs at least one entry")
        if any(a == 0 for a in entries):
            raise ZeroInput("form entries must be nonzero (regular forms only)")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries) -> "DiagonalForm":
        return cls(entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return "<" + ", ".join(str(a) for a in self.entries) + ">"

    @property
    def dim(self) -> int:
        return len(self.entries)

    @cached_property
    def det(self) -> SquareClass:
        prod = Fraction(1)
        for a in self.entries:
            prod *= a
        return squarefree_part(prod)

    @cached_property
    def disc(self) -> SquareClass:
        m = self.dim
        sign = -1 if (m * (m - 1) // 2) % 2 else 1
        return squarefree_part(sign * self.det.value)

    @cached_property
    def signature(self) -> tuple:
        pos = sum(1 for a in self.entries if a > 0)
        return (pos, self.dim - pos)

    @cached_property
    def support(self) -> tuple:
        """{inf, 2} together with every odd prime dividing some entry."""
        places = {INF, Place(2)}
        for a in self.entries:
            places.update(Place(p) for p in prime_divisors(a))
        return tuple(sorted_places(places))

    @cached_property
    def _classes(self) -> tuple:
        return tuple(squarefree_part(a).value for a in self.entries)

    @cached_property
    def _symbol_pairs(self) -> tuple:
        # (a_1 ... a_{i-1}, a_i) up to squares, for i >= 2
        out, partial = [], 1
        for a in self._classes:
            if partial != 1:
                out.append((partial, a))
            partial = squarefree_product(partial, a)
        return tuple(out)

    def hasse(self, v) -> int:
        """c_v(q) = prod_{i<j} (a_i, a_j)_v."""
        v = as_place(v)
        c = 1
        for x, a in self._symbol_pairs:
            c *= hilbert_symbol(x, a, v)
        return c


@dataclass(frozen=True)
class InvariantProfile:
    """dim, det, disc, signature and the Hasse invariants of a form.

    ``hasse_minus`` holds exactly the places where the Hasse invariant is -1;
    every other place carries +1.
    """

    dim: int
    det: SquareClass
    disc: SquareClass
    signature: tuple
    hasse_minus: frozenset = field(default_factory=frozenset)

    def hasse(self, v) -> int:
        return -1 if as_place(v) in self.hasse_minus else 1

    @property
    def finite_minus(self) -> frozenset:
        return frozenset(v for v in self.hasse_minus if not v.is_infinite)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "det": self.det.value,
            "disc": self.disc.value,
            "signature": list(self.signature),
            "hasse": {str(v): -1 for v in sorted_places(self.hasse_minus)},
        }


def global_invariants(q: DiagonalForm) -> InvariantProfile:
    minus = frozenset(v for v in q.support if q.hasse(v) == -1)
    return InvariantProfile(q.dim, q.det, q.disc, q.signature, minus)


def hilbert_m1(x, v) -> int:
    """(-1, x)_v."""
    return hilbert_symbol(-1, x, v)


def hasse_variants(q: DiagonalForm, v) -> tuple:
    """(c, c_OM, eps_HW) at ``v``; eps_HW needs dim >= 4."""
    v = as_place(v)
    m = q.dim
    c = q.hasse(v)
    det = q.det.value
    c_om = c * hilbert_m1(det, v)
    if m < 4:
        raise DimensionTooSmall("the split-normalised Hasse invariant needs dim >= 4")
    mm = hilbert_symbol(-1, -1, v)
    n = m // 2
    if m % 2 == 0:
        eps = c * mm ** ((n * (n - 1) // 2) % 2)
    else:
        eps = c * mm ** ((n * (n - 3) // 2) % 2) * hilbert_m1(det, v) ** (n % 2)
    return c, c_om, eps


def hasse_c_om(q: DiagonalForm, v) -> tuple:
    """(c, c_OM) at ``v``, defined in every dimension."""
    c = q.hasse(v)
    return c, c * hilbert_m1(q.det.value, v)


def scale(q: DiagonalForm, lam) -> DiagonalForm:
    lam = to_rational(lam)
    if lam == 0:
        raise ZeroScalar("cannot scale a form by zero")
    return DiagonalForm(lam * a for a in q.entries)


def direct_sum(q1: DiagonalForm, q2: DiagonalForm) -> DiagonalForm:
    return DiagonalForm(q1.entries + q2.entries)


def delete_entries(q: DiagonalForm, idx) -> DiagonalForm:
    idx = set(idx)
    bad = [i for i in idx if not 0 <= i < q.dim]
    if bad:
        raise IndexError(f"positions {sorted(bad)} out of range for a {q.dim}-dim form")
    kept = [a for i, a in enumerate(q.entries) if i not in idx]
    if not kept:
        raise EmptyResult("deleting every entry leaves no form")
    return DiagonalForm(kept)


def gram_matrix(q: DiagonalForm) -> list:
    m = q.dim
    return [[q.entries[i] if i == j else Fraction(0) for j in range(m)] for i in range(m)]


def _random_unimodular(m: int, rng: random.Random) -> list:
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    if m == 1:
        u[0][0] = rng.choice((1, -1))
        return u
    for _ in range(2 * m):
        i, j = rng.sample(range(m), 2)
        k = rng.choice((-2, -1, 1, 2))
        # column operation col_i += k * col_j keeps det = 1
        for r in range(m):
            u[r][i] += k * u[r][j]
    return u


def diagonalize_gram(g: list) -> list:
    """Symmetric Gaussian elimination over Q; returns the diagonal entries."""
    g = [[Fraction(x) for x in row] for row in g]
    m = len(g)
    out = []
    for k in range(m):
        if g[k][k] == 0:
            j = next((j for j in range(k + 1, m) if g[j][j] != 0), None)
            if j is not None:
                g[k], g[j] = g[j], g[k]
                for row in g:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, m) if g[k][j] != 0), None)
                if j is None:
                    raise ZeroInput("degenerate Gram matrix")
                # e_k <- e_k + e_j: new diagonal entry is 2 g[k][j] != 0
                for r in range(m):
                    g[r][k] += g[r][j]
                for c in range(m):
                    g[k][c] += g[j][c]
        piv = g[k][k]
        out.append(piv)
        for i in range(k + 1, m):
            f = g[i][k] / piv
            if f:
                for c in range(k, m):
                    g[i][c] -= f * g[k][c]
        for i in range(k + 1, m):
            g[k][i] = Fraction(0)
            g[i][k] = Fraction(0)
    return out


def rediagonalize(q: DiagonalForm, seed: int) -> DiagonalForm:
    """An isometric diagonal form reached through a random change of basis."""
    rng = random.Random(seed)
    m = q.dim
    u = _random_unimodular(m, rng)
    a = q.entries
    # G' = U^T diag(a) U
    g = [[sum(u[r][i] * a[r] * u[r][j] for r in range(m)) for j in range(m)] for i in range(m)]
    return DiagonalForm(diagonalize_gram(g))


def order_form(q: DiagonalForm) -> tuple:
    """(lam, lam*q) with lam = ±1 and m_+ >= m_- (ties keep lam = +1)."""
    pos, neg = q.signature
    if neg > pos:
        return -1, scale(q, -1)
    return 1, q


def signature_fits(inner: tuple, outer: tuple) -> bool:
    return inner[0] <= outer[0] and inner[1] <= outer[1]
