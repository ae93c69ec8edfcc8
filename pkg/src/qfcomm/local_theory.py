"""Decision procedures over a single completion Q_v."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .arith import Place, as_place, is_local_square, local_class, local_class_reps
from .errors import DimensionExceeded, DimensionTooSmall
from .forms import DiagonalForm, direct_sum
from .hilbert import hilbert_symbol


@dataclass(frozen=True)
class LocalInvariants:
    place: Place
    dim: int
    det_class: int
    hasse: int
    signature: tuple | None = None

    def key(self):
        if self.place.is_infinite:
            return (self.dim, self.signature)
        return (self.dim, self.det_class, self.hasse)


class Family(str, Enum):
    B = "B"
    D_INNER = "D_inner"
    D_OUTER = "D_outer"


@dataclass(frozen=True)
class TitsIndex:
    family: Family
    n: int
    witt_index: int
    split: bool
    place: Place

    @property
    def symbol(self) -> str:
        if self.family is Family.B:
            head = "B"
        elif self.place.is_infinite:
            head = "D"
        else:
            head = "1D" if self.family is Family.D_INNER else "2D"
        return f"{head}_{{{self.n},{self.witt_index}}}"

    def __str__(self):
        return self.symbol

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "n": self.n,
            "witt_index": self.witt_index,
            "split": self.split,
            "symbol": self.symbol,
        }


def local_invariants(q: DiagonalForm, v) -> LocalInvariants:
    v = as_place(v)
    det = local_class(q.det.value, v)
    sig = q.signature if v.is_infinite else None
    return LocalInvariants(v, q.dim, det, q.hasse(v), sig)


def local_isometric(q1: DiagonalForm, q2: DiagonalForm, v) -> bool:
    v = as_place(v)
    return local_invariants(q1, v).key() == local_invariants(q2, v).key()


def _split_sign(v) -> int:
    return hilbert_symbol(-1, -1, v)


def isotropic_from_invariants(dim: int, det, c: int, v) -> bool:
    """Isotropy of the (unique) form over Q_p with invariants (dim, det, c)."""
    v = as_place(v)
    if dim <= 1:
        return False
    if dim == 2:
        return is_local_square(-det, v)
    if dim == 3:
        return c == hilbert_symbol(-1, -det, v)
    if dim == 4:
        return not (is_local_square(det, v) and c == -_split_sign(v))
    return True


def local_isotropic(q: DiagonalForm, v) -> bool:
    v = as_place(v)
    if v.is_infinite:
        pos, neg = q.signature
        return pos > 0 and neg > 0
    return isotropic_from_invariants(q.dim, q.det.value, q.hasse(v), v)


def witt_index_from_invariants(dim: int, det, c: int, v) -> int:
    v = as_place(v)
    r = 0
    d = det
    while isotropic_from_invariants(dim, d, c, v):
        # q = H + q' with det q' = -det q and c(q) = c(q') (-1, det q')
        d = -d
        c = c * hilbert_symbol(-1, d, v)
        dim -= 2
        r += 1
    return r


def local_witt_index(q: DiagonalForm, v) -> int:
    v = as_place(v)
    if v.is_infinite:
        return min(q.signature)
    return witt_index_from_invariants(q.dim, q.det.value, q.hasse(v), v)


def local_form_exists(dim: int, det, c: int, v) -> bool:
    """Whether Q_v carries a form of dimension ``dim``, determinant ``det``, Hasse ``c``."""
    v = as_place(v)
    if dim == 0:
        return local_class(det, v) == 1 and c == 1
    if dim == 1:
        return c == 1
    if dim == 2 and is_local_square(-det, v):
        return c == 1
    return True


def realize_local(dim: int, det, c: int, v) -> DiagonalForm | None:
    """A diagonal form over Q whose Q_v-invariants are (dim, det, c)."""
    v = as_place(v)
    if not local_form_exists(dim, det, c, v) or dim == 0:
        return None
    d = local_class(det, v)
    if dim == 1:
        return DiagonalForm([d])
    reps = local_class_reps(v)
    pad = [1] * (dim - 2)
    for a in reps:
        cand = DiagonalForm(pad + [a, a * d])
        if cand.hasse(v) == c:
            return cand
    pad = [1] * (dim - 3)
    for a, b in itertools.product(reps, repeat=2):
        cand = DiagonalForm(pad + [a, b, a * b * d])
        if cand.hasse(v) == c:
            return cand
    raise AssertionError("local existence without a realisation")  # pragma: no cover


def forced_complement(r: DiagonalForm, q: DiagonalForm, v) -> tuple:
    """(dim, det, c) any t with r + t = q must have at the finite place ``v``."""
    v = as_place(v)
    det_t = q.det.value * r.det.value
    c_t = q.hasse(v) * r.hasse(v) * hilbert_symbol(r.det.value, det_t, v)
    return q.dim - r.dim, det_t, c_t


def local_subform(r: DiagonalForm, q: DiagonalForm, v) -> bool:
    v = as_place(v)
    if r.dim > q.dim:
        raise DimensionExceeded(f"a {r.dim}-dim form cannot sit inside a {q.dim}-dim one")
    if v.is_infinite:
        (rp, rn), (qp, qn) = r.signature, q.signature
        return rp <= qp and rn <= qn
    if r.dim == q.dim:
        return local_isometric(r, q, v)
    dim_t, det_t, c_t = forced_complement(r, q, v)
    if not local_form_exists(dim_t, det_t, c_t, v):
        return False
    if dim_t == 2:
        t = realize_local(dim_t, det_t, c_t, v)
        return local_isometric(direct_sum(r, t), q, v)
    return True


def split_hasse_odd(n: int, det, v) -> int:
    """The Hasse invariant of the split form of dimension 2n+1 and determinant ``det``."""
    mm = _split_sign(v)
    e1 = (n * (n - 3) // 2) % 2
    return mm**e1 * hilbert_symbol(-1, det, v) ** (n % 2)


def split_hasse_even(n: int, v) -> int:
    """The Hasse invariant of the split form of dimension 2n and trivial discriminant."""
    return _split_sign(v) ** ((n * (n - 1) // 2) % 2)


def tits_index(q: DiagonalForm, v) -> TitsIndex:
    v = as_place(v)
    m = q.dim
    if m < 3:
        raise DimensionTooSmall("the Tits index is defined here for dim >= 3")
    n = m // 2
    if v.is_infinite:
        r = min(q.signature)
        if m % 2:
            fam = Family.B
        else:
            fam = Family.D_INNER if q.disc.value > 0 else Family.D_OUTER
        return TitsIndex(fam, n, r, r == n, v)
    c = q.hasse(v)
    if m % 2:
        split = c == split_hasse_odd(n, q.det.value, v)
        return TitsIndex(Family.B, n, n if split else n - 1, split, v)
    if is_local_square(q.disc.value, v):
        split = c == split_hasse_even(n, v)
        return TitsIndex(Family.D_INNER, n, n if split else n - 2, split, v)
    return TitsIndex(Family.D_OUTER, n, n - 1, False, v)


def same_local_group(q1: DiagonalForm, q2: DiagonalForm, v) -> bool:
    """Whether SO(q1) and SO(q2) share their Q_v-form, read off index and discriminant."""
    v = as_place(v)
    t1, t2 = tits_index(q1, v), tits_index(q2, v)
    if (t1.family, t1.n, t1.witt_index) != (t2.family, t2.n, t2.witt_index):
        return False
    if t1.family is Family.D_OUTER:
        return local_class(q1.disc.value, v) == local_class(q2.disc.value, v)
    return True
