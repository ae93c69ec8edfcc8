"""Global decision procedures over Q and synthesis of forms from invariants."""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from sympy import sieve, symbols
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from .arith import (
    INF,
    Place,
    SquareClass,
    as_place,
    is_local_square,
    legendre_symbol,
    local_class,
    local_class_reps,
    prime_divisors,
    sorted_places,
    squarefree_part,
    to_rational,
)
from .errors import (
    DimensionExceeded,
    InvalidProfile,
    PreconditionViolated,
    SearchExhausted,
    VerificationFailed,
)
from .forms import DiagonalForm, InvariantProfile, global_invariants, scale
from .hilbert import hilbert_symbol
from .local_theory import local_form_exists, local_isometric, local_isotropic, local_subform

DEFAULT_SEARCH_BOUND = 10**6

_X, _Y, _Z = symbols("x y z", integer=True)


def search_bound() -> int:
    """Upper limit for prime scans; ``QFCOMM_SEARCH_BOUND`` overrides it."""
    raw = os.environ.get("QFCOMM_SEARCH_BOUND")
    return int(raw) if raw else DEFAULT_SEARCH_BOUND


def union_support(*forms: DiagonalForm) -> list:
    places = set()
    for q in forms:
        places.update(q.support)
    return sorted_places(places)


def globally_isometric(q1: DiagonalForm, q2: DiagonalForm) -> bool:
    if q1.dim != q2.dim or q1.det != q2.det:
        return False
    return all(local_isometric(q1, q2, v) for v in union_support(q1, q2))


# Small splitting values tried before the local-global construction.
_SMALL_SPLIT_BOUND = 60


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def _coprime_squarefree(coeffs):
    """Rewrite <c_1, c_2, c_3> as lam * <s_1, s_2, s_3>, s_i squarefree and pairwise coprime.

    Returns (s, m): a zero z of <s_i> gives the zero x_i = z_i / m_i of the original.
    """
    s, m = [], []
    for c in coeffs:
        k = squarefree_part(c).value
        s.append(k)
        m.append(_rational_sqrt(Fraction(c) / k))
    changed = True
    while changed:
        changed = False
        for i, j in itertools.combinations(range(3), 2):
            g = math.gcd(s[i], s[j])
            if g == 1:
                continue
            k = 3 - i - j
            # scale the whole form by g and pull g^2 out of positions i, j
            s[i] //= g
            s[j] //= g
            m[i] *= g
            m[j] *= g
            core = squarefree_part(s[k] * g).value
            m[k] *= _rational_sqrt(Fraction(s[k] * g, core))
            s[k] = core
            changed = True
    return s, m


def _ternary_zero(coeffs):
    """A nonzero zero of the ternary form, or None when it is anisotropic."""
    t = DiagonalForm(coeffs)
    if not all(local_isotropic(t, v) for v in t.support):
        return None
    (a, b, c), m = _coprime_squarefree(t.entries)
    sol = diop_ternary_quadratic_normal(a * _X**2 + b * _Y**2 + c * _Z**2)
    if sol[0] is None:
        raise VerificationFailed(f"no zero returned for the isotropic form {t}")
    return tuple(Fraction(int(x)) / mi for x, mi in zip(sol, m))


def _locally_isotropic_everywhere(entries) -> bool:
    q = DiagonalForm(entries)
    return all(local_isotropic(q, v) for v in q.support)


def _split_values(q: DiagonalForm):
    head, (b, c) = list(q.entries[:-2]), q.entries[-2:]
    seen = set()
    for t in (squarefree_part(b).value, squarefree_part(c).value):
        seen.add(t)
        yield t
    for n in range(1, _SMALL_SPLIT_BOUND + 1):
        for t in (n, -n):
            if t not in seen and squarefree_part(t).value == t:
                yield t
    # Pick a working class t_v at each bad place and realise all of them at
    # once.  A single extra prime in t is harmless: both ternaries are then
    # isotropic away from one place, hence everywhere by reciprocity.  Extra
    # primes in a product must keep each ternary split.
    wanted = {}
    for v in q.support:
        for t in local_class_reps(v):
            if local_isotropic(DiagonalForm([b, c, -t]), v) and local_isotropic(DiagonalForm(head + [t]), v):
                wanted[v] = t
                break
    split = [squarefree_part(-b * c).value]
    if len(head) == 2:
        split.append(squarefree_part(-head[0] * head[1]).value)
    try:
        yield square_existence(wanted, split_in=split)
    except SearchExhausted:
        return


def find_zero(q: DiagonalForm):
    """A nonzero rational vector with q(x) = 0, or None.

    Dimensions 2 and 3 are exact.  Above that q is split as q1 + <a, b> and a
    value t is chosen with <a, b, -t> and q1 + <t> both isotropic; the zeros of
    the two smaller forms then glue together.
    """
    a = q.entries
    m = q.dim
    if m == 1:
        return None
    if m == 2:
        root = _rational_sqrt(-a[0] / a[1])
        return None if root is None else (Fraction(1), root)
    if m == 3:
        return _ternary_zero(a)
    if not _locally_isotropic_everywhere(a):
        return None
    head, (b, c) = list(a[:-2]), a[-2:]
    for t in _split_values(q):
        if not _locally_isotropic_everywhere([b, c, -t]):
            continue
        if not _locally_isotropic_everywhere(head + [t]):
            continue
        z = find_zero(DiagonalForm(head + [t]))
        if z is None:
            continue
        if z[-1] == 0:
            return z[:-1] + (Fraction(0), Fraction(0))
        w = _ternary_zero([b, c, -t])
        if w[2] == 0:
            return (Fraction(0),) * (m - 2) + w[:2]
        return tuple(x * w[2] for x in z[:-1]) + tuple(y * z[-1] for y in w[:2])
    return None


def globally_isotropic(q: DiagonalForm) -> tuple:
    """(verdict, witness); the witness is searched for in dim <= 6 only."""
    verdict = all(local_isotropic(q, v) for v in q.support)
    witness = None
    if verdict and q.dim <= 6:
        witness = _primitive(find_zero(q))
    return verdict, witness


def _primitive(x):
    """The same projective point as a primitive integer vector."""
    if x is None:
        return None
    den = math.lcm(*(c.denominator for c in x))
    ints = [int(c * den) for c in x]
    g = math.gcd(*ints)
    return tuple(Fraction(c // g) for c in ints)


@dataclass(frozen=True)
class SquareClassConstraint:
    place: Place
    target: int

    def __init__(self, place, target):
        place = as_place(place)
        object.__setattr__(self, "place", place)
        object.__setattr__(self, "target", local_class(target, place))


def _constraint_map(constraints) -> dict:
    if isinstance(constraints, dict):
        constraints = [SquareClassConstraint(v, t) for v, t in constraints.items()]
    out = {}
    for con in constraints:
        if not isinstance(con, SquareClassConstraint):
            con = SquareClassConstraint(*con)
        if con.place in out:
            raise PreconditionViolated(f"two constraints at {con.place}")
        out[con.place] = con.target
    return out


# Primes tried one at a time before combining several.
_SINGLE_PRIME_SCAN = 20000


def _character_bits(x, primes) -> int:
    """Square class of the unit part of x at each prime, packed into bits.

    ``x`` may also be a mapping prime -> value, read at its own prime.
    """
    bits, k = 0, 0
    for p in primes:
        y = to_rational(x[p] if isinstance(x, dict) else x)
        # n/d and n*d share a square class
        n = y.numerator * y.denominator
        while n % p == 0:
            n //= p
        if p == 2:
            r = n % 8
            bits |= (r % 4 == 3) << k
            bits |= (r in (3, 5)) << (k + 1)
            k += 2
        else:
            bits |= (pow(n % p, (p - 1) // 2, p) != 1) << k
            k += 1
    return bits


def _combine_primes(need: int, excluded: set, primes: list, bound: int, split_in=()):
    """Distinct primes whose characters multiply to ``need``, or None.

    Elimination over F2 on the character vectors: ``basis`` maps a leading
    bit to (vector, product of the primes behind it).
    """
    basis = {}

    def reduce(vec, prod):
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                return vec, prod
            bvec, bprod = basis[top]
            vec ^= bvec
            prod = prod * bprod // math.gcd(prod, bprod) ** 2
        return vec, prod

    for ell in sieve.primerange(3, bound + 1):
        if ell in excluded or any(x % ell == 0 or legendre_symbol(x, ell) == -1 for x in split_in):
            continue
        vec, prod = reduce(_character_bits(ell, primes), ell)
        if vec:
            basis[vec.bit_length() - 1] = (vec, prod)
            rest, w = reduce(need, 1)
            if not rest:
                return w
    return None


def square_existence(constraints, split_in=()) -> int:
    """A squarefree integer lying in each prescribed local square class.

    ``constraints`` is a mapping place -> class (any rational in the class) or
    an iterable of :class:`SquareClassConstraint`.  The answer is
    sign * s0 * w with s0 fixing the valuations and w either 1, a single prime
    found by scanning, or a product of primes found by linear algebra over F2.

    A lone extra prime is invisible to Hilbert symbols by reciprocity; a
    product is not, so every prime in a product is odd and has each integer of
    ``split_in`` as a nonzero square modulo it.
    """
    split_in = [int(x) for x in split_in]
    targets = _constraint_map(constraints)
    sign = targets.get(INF, 1)
    finite = {v.prime: t for v, t in targets.items() if not v.is_infinite}
    primes = sorted(finite)
    s0 = 1
    for p, t in finite.items():
        if t % p == 0:
            s0 *= p
    base = sign * s0
    need = _character_bits(base, primes) ^ _character_bits(finite, primes)
    bound = search_bound()
    w = None
    if need == 0:
        w = 1
    else:
        for ell in sieve.primerange(2, min(bound, _SINGLE_PRIME_SCAN) + 1):
            if ell not in finite and _character_bits(ell, primes) == need:
                w = ell
                break
    if w is None:
        w = _combine_primes(need, set(finite), primes, bound, split_in)
    if w is None:
        raise SearchExhausted(f"no product of primes below {bound} met the constraints")
    s = base * w
    if not all(local_class(s, p) == t for p, t in finite.items()):
        raise VerificationFailed(f"{s} misses a prescribed square class")
    return s


@dataclass(frozen=True)
class SynthesisProfile:
    dim: int
    det: int
    signature: tuple
    minus_set: frozenset = field(default_factory=frozenset)

    def __init__(self, dim, det, signature, minus_set=()):
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "det", squarefree_part(det).value)
        object.__setattr__(self, "signature", tuple(signature))
        object.__setattr__(self, "minus_set", frozenset(as_place(v) for v in minus_set))

    @classmethod
    def of_form(cls, q: DiagonalForm) -> "SynthesisProfile":
        prof = global_invariants(q)
        return cls(q.dim, q.det.value, q.signature, prof.finite_minus)

    @property
    def real_hasse(self) -> int:
        neg = self.signature[1]
        return -1 if (neg * (neg - 1) // 2) % 2 else 1

    def hasse(self, v) -> int:
        v = as_place(v)
        if v.is_infinite:
            return self.real_hasse
        return -1 if v in self.minus_set else 1

    def violations(self) -> list:
        m, (pos, neg) = self.dim, self.signature
        out = []
        if m < 1:
            out.append("dimension must be positive")
        if pos < 0 or neg < 0 or pos + neg != m:
            out.append("signature does not add up to the dimension")
        if (self.det < 0) != (neg % 2 == 1):
            out.append("sign of the determinant disagrees with the signature")
        if any(v.is_infinite for v in self.minus_set):
            out.append("the real Hasse invariant is fixed by the signature")
        if (len(self.finite_minus) + (self.real_hasse == -1)) % 2:
            out.append("odd number of places with Hasse invariant -1")
        for v in sorted_places(self.finite_minus):
            if not local_form_exists(m, self.det, -1, v):
                out.append(f"no local form with these invariants exists at {v}")
        return out

    @property
    def finite_minus(self) -> frozenset:
        return frozenset(v for v in self.minus_set if not v.is_infinite)

    def matches(self, q: DiagonalForm) -> bool:
        return (
            q.dim == self.dim
            and q.det.value == self.det
            and q.signature == self.signature
            and global_invariants(q).finite_minus == self.finite_minus
        )

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "det": self.det,
            "signature": list(self.signature),
            "minus_set": [v.prime for v in sorted_places(self.finite_minus)],
        }


def _places_of(*xs) -> set:
    places = {INF, Place(2)}
    for x in xs:
        places.update(Place(p) for p in prime_divisors(x))
    return places


def _solve_symbol(a: int, targets: dict, sign: int) -> int:
    """An integer y of sign ``sign`` with (a, y)_v = targets[v] for every v listed.

    Places not listed must carry +1 and ``targets`` must multiply to +1.
    """
    cons = {INF: sign}
    for v, eps in targets.items():
        if v.is_infinite:
            continue
        for rep in local_class_reps(v):
            if hilbert_symbol(a, rep, v) == eps:
                cons[v] = rep
                break
        else:
            raise InvalidProfile(f"no local class at {v} realises the symbol")
    return square_existence(cons, split_in=[squarefree_part(a).value])


def _synthesize_binary(p: SynthesisProfile) -> DiagonalForm:
    # <x, x d> has Hasse invariant (x, -d)
    d = p.det
    sign = -1 if p.signature[0] == 0 else 1
    places = _places_of(d) | set(p.finite_minus)
    targets = {v: p.hasse(v) for v in places}
    x = _solve_symbol(-d, targets, sign)
    return DiagonalForm([x, x * d])


def _synthesize_ternary_tail(d_t: int, targets: dict, neg: int) -> DiagonalForm:
    """<x, y, x y d_t> with prescribed Hasse values and ``neg`` negative entries.

    With e = -d_t, X = x e and Y = y e the Hasse invariant is (X, Y)(e, -1).
    """
    e = -d_t
    sx = -1 if neg >= 2 else 1
    sy = -1 if neg >= 1 else 1
    sign_x = sx * (1 if e > 0 else -1)
    sign_y = sy * (1 if e > 0 else -1)
    places = set(targets) | _places_of(e)
    eps = {v: targets.get(v, 1) * hilbert_symbol(e, -1, v) for v in places}
    bad = {v for v, s in eps.items() if s == -1}
    core = 1
    for v in bad:
        if not v.is_infinite and not v.is_dyadic:
            core *= v.prime
    for w in itertools.chain((1, 2), sieve.primerange(3, 200)):
        if w > 2 and w in (v.prime for v in bad):
            continue
        X = sign_x * core * w
        if any(is_local_square(X, v) for v in bad):
            continue
        cons = {v: eps.get(v, 1) for v in places | _places_of(X)}
        try:
            Y = _solve_symbol(X, cons, sign_y)
        except InvalidProfile:
            continue
        x, y = X * e, Y * e
        return DiagonalForm([x, y, x * y * d_t])
    raise SearchExhausted("no ternary tail found")


def synthesize_form(profile: SynthesisProfile) -> DiagonalForm:
    """A diagonal form realising ``profile`` exactly."""
    problems = profile.violations()
    if problems:
        raise InvalidProfile("; ".join(problems))
    m = profile.dim
    pos, neg = profile.signature
    d = profile.det
    if m == 1:
        return DiagonalForm([d])
    if m == 2:
        q = _synthesize_binary(profile)
    else:
        t_neg = min(neg, 3)
        b = neg - t_neg
        prefix = [1] * (pos - (3 - t_neg)) + [-1] * b
        det_p = -1 if b % 2 else 1
        d_t = d * det_p
        places = _places_of(d) | set(profile.finite_minus)
        targets = {}
        for v in places:
            c_p = hilbert_symbol(-1, -1, v) ** ((b * (b - 1) // 2) % 2)
            targets[v] = profile.hasse(v) * c_p * hilbert_symbol(det_p, d_t, v)
        tail = _synthesize_ternary_tail(d_t, targets, t_neg)
        q = DiagonalForm(prefix + list(tail.entries))
    if not profile.matches(q):
        raise VerificationFailed(f"synthesised {q} does not reproduce the profile")
    return q


def is_subform(r: DiagonalForm, q: DiagonalForm) -> bool:
    if r.dim > q.dim:
        raise DimensionExceeded(f"a {r.dim}-dim form cannot sit inside a {q.dim}-dim one")
    if q.dim - r.dim >= 3:
        return local_subform(r, q, INF)
    return all(local_subform(r, q, v) for v in union_support(r, q))


def similar(q1: DiagonalForm, q2: DiagonalForm) -> SquareClass | None:
    """Some lam with lam * q1 isometric to q2, or None."""
    if q1.dim != q2.dim:
        return None
    if q1.dim % 2:
        lam = q2.det * q1.det
        return lam if globally_isometric(scale(q1, lam.value), q2) else None
    if q1.det != q2.det:
        return None
    disc = q1.disc.value
    places = union_support(q1, q2)
    eps = {v: q1.hasse(v) * q2.hasse(v) for v in places if not v.is_infinite}
    for v, e in eps.items():
        if e == -1 and is_local_square(disc, v):
            return None
    p1, n1 = q1.signature
    signs = []
    if (p1, n1) == q2.signature:
        signs.append(1)
    if (n1, p1) == q2.signature:
        signs.append(-1)
    for sign in signs:
        # (lam, disc)_v = eps_v at each finite place
        try:
            lam = _solve_symbol(disc, eps, sign)
        except InvalidProfile:
            continue
        if globally_isometric(scale(q1, lam), q2):
            return squarefree_part(lam)
    return None


class Isogroupy(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN_EVEN_DIM = "UnknownEvenDim"


@dataclass(frozen=True)
class IsogroupyVerdict:
    verdict: Isogroupy
    lam: SquareClass | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value}
        if self.lam is not None:
            out["lambda"] = self.lam.value
        return out


def _lorentzian(q: DiagonalForm) -> bool:
    return q.dim >= 3 and min(q.signature) == 1


def isogroupic(q1: DiagonalForm, q2: DiagonalForm) -> IsogroupyVerdict:
    if q1.dim != q2.dim:
        return IsogroupyVerdict(Isogroupy.NO)
    lam = similar(q1, q2)
    if lam is not None:
        return IsogroupyVerdict(Isogroupy.YES, lam)
    if q1.dim % 2 or (_lorentzian(q1) and _lorentzian(q2)):
        return IsogroupyVerdict(Isogroupy.NO)
    return IsogroupyVerdict(Isogroupy.UNKNOWN_EVEN_DIM)


def profile_of(q: DiagonalForm) -> InvariantProfile:
    return global_invariants(q)
