"""Standard arithmetic hyperbolic orbifolds over Q, read off their quadratic forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from sympy import sieve

from .arith import INF, Place, is_local_square, local_class_reps
from .errors import (
    DimensionOrder,
    DimensionTooSmall,
    EvenDimension,
    NotAdmissible,
    NotComparable,
    ParityViolation,
    PreconditionViolated,
    SearchExhausted,
    VerificationFailed,
)
from .forms import DiagonalForm, delete_entries, order_form, scale, signature_fits
from .global_theory import (
    SynthesisProfile,
    search_bound,
    similar,
    square_existence,
    synthesize_form,
    union_support,
)
from .hilbert import hilbert_support, nonsquare_partner
from .local_theory import local_subform, same_local_group, split_hasse_odd, tits_index
from .subforms import (
    SubformCertificate,
    distinguishing_subform_even_codim1,
    distinguishing_subform_even_codim2,
    distinguishing_subform_odd,
    even_codim2_hypotheses_hold,
    similar_subform_search,
    transfer_subform,
)

# Degree of Q over itself and the number of dyadic places where (-1,-1) ramifies.
DEGREE_Q = 1
DELTA_Q = 1


def is_admissible(q: DiagonalForm) -> bool:
    if q.dim < 3:
        raise DimensionTooSmall("admissible pairs need dim >= 3")
    return min(q.signature) == 1


def _require_admissible(*forms: DiagonalForm):
    for q in forms:
        if not is_admissible(q):
            raise NotAdmissible(f"{q} has signature {q.signature}, not Lorentzian")


def commensurable(q1: DiagonalForm, q2: DiagonalForm) -> bool:
    _require_admissible(q1, q2)
    if q1.dim != q2.dim:
        return False
    return similar(q1, q2) is not None


def _scan_order(places) -> list:
    # odd primes first, then 2
    finite = [v for v in places if not v.is_infinite]
    return sorted(finite, key=lambda v: (v.is_dyadic, v.prime))


def _det_normalised(q: DiagonalForm) -> DiagonalForm:
    return scale(q, q.det.value) if q.dim % 2 else q


def distinguishing_place(q1: DiagonalForm, q2: DiagonalForm) -> Place | None:
    """A finite place where SO(q1) and SO(q2) differ, or None if commensurable."""
    if q1.dim != q2.dim:
        raise NotComparable("forms of different dimension")
    _require_admissible(q1, q2)
    if commensurable(q1, q2):
        return None
    a, b = _det_normalised(q1), _det_normalised(q2)
    for v in _scan_order(union_support(a, b)):
        if not same_local_group(a, b, v):
            return v
    return None


@dataclass(frozen=True)
class DichotomyReport:
    dims_equal: bool
    commensurable: bool
    hyperbolic_dim: int
    shared_range: tuple
    codim1_witness: SubformCertificate | None = None
    codim2_witness: SubformCertificate | None = None
    transfer_checked: int = 0
    transfer_verified: bool | None = None

    def to_json(self) -> dict:
        return {
            "dims_equal": self.dims_equal,
            "commensurable": self.commensurable,
            "hyperbolic_dim": self.hyperbolic_dim,
            "shared_range": {"above": self.shared_range[0], "below": self.shared_range[1]},
            "codim1_witness": self.codim1_witness.to_json() if self.codim1_witness else None,
            "codim2_witness": self.codim2_witness.to_json() if self.codim2_witness else None,
            "transfer_checked": self.transfer_checked,
            "transfer_verified": self.transfer_verified,
        }


def _odd_witness(a: DiagonalForm, b: DiagonalForm):
    v0 = distinguishing_place(a, b)
    scaled = []
    for q in (a, b):
        s = square_existence({v0: q.det.value, INF: 1})
        scaled.append(scale(q, s))
    a, b = scaled
    return distinguishing_subform_odd(a, b, v0)[1]


def _even_equal_det_witness(a: DiagonalForm, b: DiagonalForm):
    for v in _scan_order(union_support(a, b)):
        if not is_local_square(a.disc.value, v):
            continue
        ta, tb = tits_index(a, v), tits_index(b, v)
        if ta.split != tb.split:
            if ta.split:
                return distinguishing_subform_even_codim1(a, b, v)[1]
            return distinguishing_subform_even_codim1(b, a, v)[1]
    return None


def _disc_split_place(a: DiagonalForm, b: DiagonalForm) -> Place:
    """A finite place where exactly one of the discriminants is a local square."""
    da, db = a.disc.value, b.disc.value
    candidates = itertools.chain(
        _scan_order(union_support(a, b)),
        (Place(p) for p in sieve.primerange(3, search_bound() + 1)),
    )
    for v in candidates:
        if is_local_square(da, v) != is_local_square(db, v):
            return v
    raise SearchExhausted("no place separates the discriminants")


def _even_codim2_witness(a: DiagonalForm, b: DiagonalForm):
    v0 = _disc_split_place(a, b)
    if not is_local_square(a.disc.value, v0):
        a, b = b, a
    if not even_codim2_hypotheses_hold(a, b, v0):
        # flip c(b) at v0 by a positive scalar with (lam, disc b)_{v0} = -1
        lam = square_existence({v0: nonsquare_partner(b.disc.value, v0), INF: 1})
        b = scale(b, lam)
    return distinguishing_subform_even_codim2(a, b, v0)[1]


def _deletion_subforms(q: DiagonalForm, dims) -> list:
    seen = {}
    for k in dims:
        for keep in itertools.combinations(range(q.dim), k):
            r = delete_entries(q, set(range(q.dim)) - set(keep))
            seen.setdefault(tuple(sorted(r.entries)), r)
    return list(seen.values())


def check_shared_subforms(a: DiagonalForm, b: DiagonalForm, dims) -> tuple:
    """Transfer every deletion subform of either form (of the given dims) to the other."""
    count, ok = 0, True
    for src, dst in ((a, b), (b, a)):
        for r in _deletion_subforms(src, dims):
            try:
                transfer_subform(r, dst)
            except (VerificationFailed, SearchExhausted, PreconditionViolated):
                ok = False
            count += 1
    return count, ok


def dichotomy_report(q1: DiagonalForm, q2: DiagonalForm, check_transfer: bool = True) -> DichotomyReport:
    _require_admissible(q1, q2)
    if min(q1.dim, q2.dim) < 5:
        raise DimensionTooSmall("the dichotomy report needs dim >= 5")
    n = q1.dim - 1
    shared = (1, n - 2)
    if q1.dim != q2.dim:
        return DichotomyReport(False, False, n, shared)
    if commensurable(q1, q2):
        return DichotomyReport(True, True, n, shared)
    a, b = order_form(q1)[1], order_form(q2)[1]
    m = a.dim
    codim1 = codim2 = None
    if m % 2:
        codim1 = _odd_witness(a, b)
    elif a.det == b.det:
        codim1 = _even_equal_det_witness(a, b)
    else:
        codim2 = _even_codim2_witness(a, b)
    checked, verified = 0, None
    if check_transfer:
        checked, verified = check_shared_subforms(a, b, range(2, m - 2))
    return DichotomyReport(True, False, n, shared, codim1, codim2, checked, verified)


class Containment(str, Enum):
    YES = "Yes"
    NO = "No"
    INCONCLUSIVE = "InconclusiveCodimLE2"


@dataclass(frozen=True)
class ContainmentVerdict:
    verdict: Containment
    lam: int | None = None
    place: Place | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value}
        if self.lam is not None:
            out["lambda"] = self.lam
        if self.place is not None:
            out["place"] = str(self.place)
        return out


def _local_obstruction(q1: DiagonalForm, q2: DiagonalForm) -> Place | None:
    """A place where no multiple of q1 is a local subform of q2."""
    for v in _scan_order(union_support(q1, q2)):
        if q1.dim % 2 == 0:
            if is_local_square(q1.disc.value, v) and not local_subform(q1, q2, v):
                return v
        else:
            if not any(local_subform(scale(q1, lam), q2, v) for lam in local_class_reps(v)):
                return v
    return None


def contains_as_subspace(q1: DiagonalForm, q2: DiagonalForm) -> ContainmentVerdict:
    """Whether the orbifold of q1 is commensurable to a totally geodesic subspace of that of q2."""
    _require_admissible(q1, q2)
    if q1.dim >= q2.dim:
        raise DimensionOrder("q1 must have smaller dimension than q2")
    if q2.dim - q1.dim >= 3:
        for lam in (1, -1):
            if signature_fits(scale(q1, lam).signature, q2.signature):
                return ContainmentVerdict(Containment.YES, lam)
        return ContainmentVerdict(Containment.NO)
    v = _local_obstruction(q1, q2)
    if v is not None:
        return ContainmentVerdict(Containment.NO, place=v)
    lam = similar_subform_search(q1, q2)
    if lam is not None:
        return ContainmentVerdict(Containment.YES, lam)
    return ContainmentVerdict(Containment.INCONCLUSIVE)


def maclachlan_parity(n: int, degree: int = DEGREE_Q) -> int:
    """Required parity of the number of primes for H^{2n} over a field of the given degree."""
    return {0: 0, 1: (degree - 1) % 2, 2: degree % 2, 3: 1}[n % 4]


def maclachlan_parity_ok(n: int, r: int) -> bool:
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    return r % 2 == maclachlan_parity(n)


def dyadic_ramification_count() -> int:
    """Number of dyadic places where (-1,-1) ramifies over Q, recomputed."""
    return sum(1 for v in hilbert_support(-1, -1) if v.is_dyadic)


@dataclass(frozen=True)
class MaclachlanClass:
    n: int
    primes: frozenset
    witness: DiagonalForm | None = None
    audit: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "primes": sorted(self.primes),
            "witness": [str(a) for a in self.witness.entries] if self.witness else None,
        }


def _split_value(n: int, v: Place) -> int:
    # Hasse invariant of the split form of dimension 2n+1 and determinant 1
    return split_hasse_odd(n, 1, v)


def maclachlan_form_to_primes(q: DiagonalForm) -> MaclachlanClass:
    if q.dim % 2 == 0:
        raise EvenDimension("the parametrisation covers odd-dimensional forms")
    _require_admissible(q)
    n = q.dim // 2
    w = scale(q, q.det.value)
    primes = set()
    f_s = f_r = e_s = e_r = 0
    for v in w.support:
        if v.is_infinite:
            continue
        c = w.hasse(v)
        nonsplit = c != _split_value(n, v)
        if nonsplit:
            primes.add(v.prime)
        if v.is_dyadic:
            f_r += c == -1
            e_r += nonsplit
        else:
            f_s += c == -1
            e_s += nonsplit
    expected_f_r = e_r if n % 4 in (0, 3) else DELTA_Q - e_r
    audit = {
        "f_s": f_s,
        "f_r": f_r,
        "e_s": e_s,
        "e_r": e_r,
        "f_s_equals_e_s": f_s == e_s,
        "f_r_matches": f_r == expected_f_r,
        "product_formula": (n + f_s + f_r) % 2 == 0,
    }
    return MaclachlanClass(n, frozenset(primes), w, audit)


def maclachlan_primes_to_form(n: int, primes) -> DiagonalForm:
    primes = frozenset(int(p) for p in primes)
    if not maclachlan_parity_ok(n, len(primes)):
        raise ParityViolation(f"{len(primes)} primes has the wrong parity for n = {n}")
    places = {Place(2)} | {Place(p) for p in primes}
    minus = {v for v in places if _split_value(n, v) * (-1 if v.prime in primes else 1) == -1}
    return synthesize_form(SynthesisProfile(2 * n + 1, 1, (1, 2 * n), minus))


def maclachlan_enumerate(n: int, prime_bound: int) -> list:
    ps = list(sieve.primerange(2, prime_bound + 1))
    out = []
    for k in range(len(ps) + 1):
        if not maclachlan_parity_ok(n, k):
            continue
        for subset in itertools.combinations(ps, k):
            out.append(MaclachlanClass(n, frozenset(subset), maclachlan_primes_to_form(n, subset)))
    return out
