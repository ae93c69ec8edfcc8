"""Distinguishing subforms and replayable certificates for them.

Each construction returns a subform ``r`` of one form together with a
certificate.  The certificate stores only quantities that can be recomputed
from the three forms at one place; :func:`verify_certificate` recomputes them
and re-derives the local contradiction showing that ``r`` is not isogroupic to
any subform of the other form.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum

from .arith import INF, Place, as_place, is_local_square, local_class, local_class_reps
from .errors import (
    HypothesesViolated,
    NotApplicable,
    PreconditionViolated,
    QFError,
    VerificationFailed,
)
from .forms import DiagonalForm, delete_entries, direct_sum, order_form, scale, signature_fits
from .global_theory import (
    SynthesisProfile,
    globally_isometric,
    is_subform,
    square_existence,
    synthesize_form,
    union_support,
)
from .hilbert import hilbert_symbol
from .local_theory import local_isometric, split_hasse_odd, tits_index


class CertificateKind(str, Enum):
    ODD_CODIM1 = "OddCodim1"
    EVEN_CODIM1 = "EvenCodim1"
    EVEN_CODIM2 = "EvenCodim2"
    REAL_PLACE = "RealPlace"


@dataclass(frozen=True)
class SubformCertificate:
    kind: CertificateKind
    q1: DiagonalForm
    q2: DiagonalForm
    r: DiagonalForm
    v0: Place
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "q1": [str(a) for a in self.q1.entries],
            "q2": [str(a) for a in self.q2.entries],
            "r": [str(a) for a in self.r.entries],
            "v0": str(self.v0),
            "data": self.data,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc: dict) -> "SubformCertificate":
        return cls(
            CertificateKind(doc["kind"]),
            DiagonalForm(doc["q1"]),
            DiagonalForm(doc["q2"]),
            DiagonalForm(doc["r"]),
            as_place(doc["v0"]),
            dict(doc["data"]),
        )

    def with_data(self, **changes) -> "SubformCertificate":
        return SubformCertificate(self.kind, self.q1, self.q2, self.r, self.v0, {**self.data, **changes})


# Recomputable data for each certificate kind.  Verification compares a
# fresh call of the same function with the stored dictionary, then checks the
# contradiction on the fresh values.


def _forced_hasse(r: DiagonalForm, ambient: DiagonalForm, v) -> int:
    """c(q) as forced by r when the complement contributes nothing: c(r) (det r, det q / det r)."""
    return r.hasse(v) * hilbert_symbol(r.det.value, ambient.det.value * r.det.value, v)


def _odd_data(q1, q2, r, v0) -> dict:
    return {
        "dim_r": r.dim,
        "dim_q2": q2.dim,
        "disc_r": local_class(r.disc.value, v0),
        "det_r": local_class(r.det.value, v0),
        "det_q1": local_class(q1.det.value, v0),
        "det_q2": local_class(q2.det.value, v0),
        "hasse_r": r.hasse(v0),
        "hasse_q1": q1.hasse(v0),
        "hasse_q2": q2.hasse(v0),
        "predicted_hasse_q2": _forced_hasse(r, q2, v0),
    }


def _odd_contradiction(d: dict, q1, q2, r) -> bool:
    return (
        d["dim_r"] == d["dim_q2"] - 1
        and d["dim_r"] % 2 == 0
        and d["disc_r"] == 1
        and d["predicted_hasse_q2"] != d["hasse_q2"]
        and is_subform(r, q1)
    )


def _codim1_indices(q: DiagonalForm, v0: Place) -> dict:
    """Witt index of each codimension-one subform of q at v0, by deleted class."""
    n = q.dim // 2
    out = {}
    for delta in local_class_reps(v0):
        det_r = q.det.value * delta
        c_r = q.hasse(v0) * hilbert_symbol(det_r, delta, v0)
        split = c_r == split_hasse_odd(n - 1, det_r, v0)
        out[str(delta)] = n - 1 if split else n - 2
    return out


def _even1_data(q1, q2, r, v0) -> dict:
    t1, t2, tr = tits_index(q1, v0), tits_index(q2, v0), tits_index(r, v0)
    return {
        "dim_r": r.dim,
        "dim_q1": q1.dim,
        "tits_q1": t1.symbol,
        "tits_q2": t2.symbol,
        "tits_r": tr.symbol,
        "witt_r": tr.witt_index,
        "hasse_q2": q2.hasse(v0),
        "det_q2": local_class(q2.det.value, v0),
        "codim1_witt_q2": _codim1_indices(q2, v0),
    }


def _even1_contradiction(d: dict, q1, q2, r) -> bool:
    n = d["dim_q1"] // 2
    return (
        d["dim_q1"] % 2 == 0
        and d["dim_r"] == d["dim_q1"] - 1
        and d["witt_r"] == n - 1
        and all(w == n - 2 for w in d["codim1_witt_q2"].values())
        and is_subform(r, q1)
    )


def _even2_data(q1, q2, r, v0) -> dict:
    return {
        "dim_r": r.dim,
        "dim_q1": q1.dim,
        "disc_r": local_class(r.disc.value, v0),
        "disc_q1": local_class(q1.disc.value, v0),
        "disc_q2": local_class(q2.disc.value, v0),
        "det_r": local_class(r.det.value, v0),
        "det_q1": local_class(q1.det.value, v0),
        "complement_det": local_class(q1.det.value * r.det.value, v0),
        "hasse_r": r.hasse(v0),
        "hasse_q1": q1.hasse(v0),
        "hasse_q2": q2.hasse(v0),
        "predicted_hasse_q1": _forced_hasse(r, q1, v0),
    }


def _even2_contradiction(d: dict, q1, q2, r, v0) -> bool:
    # a binary complement of determinant -1 is a hyperbolic plane, so its Hasse invariant is 1
    return (
        d["dim_r"] == d["dim_q1"] - 2
        and d["disc_r"] == 1
        and d["complement_det"] == local_class(-1, v0)
        and d["predicted_hasse_q1"] != d["hasse_q1"]
        and is_subform(r, q2)
    )


def _real_data(q1, q2, r, which) -> dict:
    other = q1 if which == 2 else q2
    return {
        "which": which,
        "sig_r": list(r.signature),
        "sig_other": list(other.signature),
    }


def _real_contradiction(d: dict, q1, q2, r) -> bool:
    a, b = d["sig_r"]
    other = tuple(d["sig_other"])
    ambient = q2 if d["which"] == 2 else q1
    return (
        a > 0
        and b > 0
        and not signature_fits((a, b), other)
        and not signature_fits((b, a), other)
        and is_subform(r, ambient)
    )


def verify_certificate(cert: SubformCertificate) -> bool:
    """Recompute every stored quantity and replay the local contradiction."""
    try:
        q1, q2, r, v0 = cert.q1, cert.q2, cert.r, cert.v0
        d = cert.data
        if cert.kind is CertificateKind.REAL_PLACE:
            if not v0.is_infinite or d.get("which") not in (1, 2):
                return False
            return d == _real_data(q1, q2, r, d["which"]) and _real_contradiction(d, q1, q2, r)
        if v0.is_infinite:
            return False
        if cert.kind is CertificateKind.ODD_CODIM1:
            return d == _odd_data(q1, q2, r, v0) and _odd_contradiction(d, q1, q2, r)
        if cert.kind is CertificateKind.EVEN_CODIM1:
            return d == _even1_data(q1, q2, r, v0) and _even1_contradiction(d, q1, q2, r)
        if cert.kind is CertificateKind.EVEN_CODIM2:
            return d == _even2_data(q1, q2, r, v0) and _even2_contradiction(d, q1, q2, r, v0)
    except (QFError, KeyError, TypeError, ValueError):
        return False
    return False


def certify_odd(q1, q2, r, v0) -> SubformCertificate:
    v0 = as_place(v0)
    return SubformCertificate(CertificateKind.ODD_CODIM1, q1, q2, r, v0, _odd_data(q1, q2, r, v0))


def certify_even_codim1(q1, q2, r, v0) -> SubformCertificate:
    v0 = as_place(v0)
    return SubformCertificate(CertificateKind.EVEN_CODIM1, q1, q2, r, v0, _even1_data(q1, q2, r, v0))


def certify_even_codim2(q1, q2, r, v0) -> SubformCertificate:
    v0 = as_place(v0)
    return SubformCertificate(CertificateKind.EVEN_CODIM2, q1, q2, r, v0, _even2_data(q1, q2, r, v0))


def certify_real(q1, q2, r, which: int) -> SubformCertificate:
    return SubformCertificate(CertificateKind.REAL_PLACE, q1, q2, r, INF, _real_data(q1, q2, r, which))


def _is_ordered(q: DiagonalForm) -> bool:
    pos, neg = q.signature
    return pos >= neg


def _common_hypotheses(q1, q2, v0, parity: int, min_dim: int):
    v0 = as_place(v0)
    if v0.is_infinite:
        raise HypothesesViolated("v0 must be a finite place")
    m = q1.dim
    if q2.dim != m:
        raise HypothesesViolated("the forms must have the same dimension")
    if m % 2 != parity or m < min_dim:
        kind = "odd" if parity else "even"
        raise HypothesesViolated(f"needs {kind} dimension >= {min_dim}, got {m}")
    if not (_is_ordered(q1) and _is_ordered(q2)):
        raise HypothesesViolated("both forms must be ordered at infinity")
    if not local_isometric(q1, q2, INF):
        raise HypothesesViolated("the forms must be isometric at infinity")
    return v0


def _complement_profile(ambient: DiagonalForm, t: DiagonalForm, s: int) -> SynthesisProfile:
    """Profile of r with r + t = ambient, where det r = s."""
    pos, neg = ambient.signature
    tp, tn = t.signature
    det_t = t.det.value
    places = set(union_support(ambient, t))
    minus = set()
    for v in places:
        if v.is_infinite:
            continue
        c = ambient.hasse(v) * t.hasse(v) * hilbert_symbol(s, det_t, v)
        if c == -1:
            minus.add(v)
    return SynthesisProfile(ambient.dim - t.dim, s, (pos - tp, neg - tn), minus)


def _build_complement(ambient: DiagonalForm, t: DiagonalForm, s: int) -> DiagonalForm:
    r = synthesize_form(_complement_profile(ambient, t, s))
    if not globally_isometric(direct_sum(r, t), ambient):
        raise VerificationFailed(f"{r} + {t} is not isometric to {ambient}")
    return r


def _sign(x) -> int:
    return 1 if x > 0 else -1


def distinguishing_subform_odd(q1: DiagonalForm, q2: DiagonalForm, v0) -> tuple:
    """A codimension-one subform r of q1 with trivial discriminant at v0."""
    v0 = _common_hypotheses(q1, q2, v0, 1, 5)
    if not (is_local_square(q1.det.value, v0) and is_local_square(q2.det.value, v0)):
        raise HypothesesViolated(f"both determinants must be squares at {v0}")
    if q1.hasse(v0) == q2.hasse(v0):
        raise HypothesesViolated(f"the Hasse invariants agree at {v0}")
    n = q1.dim // 2
    d1 = q1.det.value
    s = square_existence({v0: (-1) ** n, INF: _sign(d1)})
    t = DiagonalForm([d1 * s])
    r = _build_complement(q1, t, s)
    cert = certify_odd(q1, q2, r, v0)
    if not verify_certificate(cert):
        raise VerificationFailed("constructed certificate does not verify")
    return r, cert


def distinguishing_subform_even_codim1(q1: DiagonalForm, q2: DiagonalForm, v0) -> tuple:
    """A codimension-one subform r of q1 whose group is split at v0."""
    v0 = _common_hypotheses(q1, q2, v0, 0, 4)
    t1, t2 = tits_index(q1, v0), tits_index(q2, v0)
    if not (is_local_square(q1.disc.value, v0) and is_local_square(q2.disc.value, v0)):
        raise HypothesesViolated(f"both discriminants must be squares at {v0}")
    if not t1.split or t2.split:
        raise HypothesesViolated(f"need q1 split and q2 non-split at {v0}, got {t1} and {t2}")
    d1 = q1.det.value
    s = square_existence({v0: d1, INF: _sign(d1)})
    t = DiagonalForm([d1 * s])
    r = _build_complement(q1, t, s)
    cert = certify_even_codim1(q1, q2, r, v0)
    if not verify_certificate(cert):
        raise VerificationFailed("constructed certificate does not verify")
    return r, cert


def even_codim2_hypotheses_hold(q1: DiagonalForm, q2: DiagonalForm, v0) -> bool:
    v0 = as_place(v0)
    m = q1.dim
    if not is_local_square(q1.disc.value, v0) or is_local_square(q2.disc.value, v0):
        return False
    twist = hilbert_symbol(-1, q2.disc.value, v0) ** (((m - 2) // 2) % 2)
    return q1.hasse(v0) != q2.hasse(v0) * twist


def distinguishing_subform_even_codim2(q1: DiagonalForm, q2: DiagonalForm, v0) -> tuple:
    """A codimension-two subform r of q2 with trivial discriminant at v0."""
    v0 = _common_hypotheses(q1, q2, v0, 0, 6)
    if not even_codim2_hypotheses_hold(q1, q2, v0):
        raise HypothesesViolated(f"the discriminant/Hasse hypotheses fail at {v0}")
    m = q1.dim
    d2 = q2.det.value
    s = square_existence({v0: (-1) ** ((m - 2) // 2), INF: _sign(d2)})
    t = DiagonalForm([1, d2 * s])
    r = _build_complement(q2, t, s)
    cert = certify_even_codim2(q1, q2, r, v0)
    if not verify_certificate(cert):
        raise VerificationFailed("constructed certificate does not verify")
    return r, cert


def real_distinguishing_subform(q1: DiagonalForm, q2: DiagonalForm, j: int) -> tuple:
    """(which, deleted positions, certificate) from signatures alone.

    ``which`` names the form that is cut down; the resulting j-dim subform is
    isotropic at infinity and neither it nor its negative fits in the other form.
    """
    m = q1.dim
    if q2.dim != m or m < 5:
        raise NotApplicable("needs two forms of the same dimension >= 5")
    o1 = order_form(q1)[1]
    o2 = order_form(q2)[1]
    if o1.signature == o2.signature:
        raise NotApplicable("the real signatures are similar")
    swapped = o1.signature[0] < o2.signature[0]
    a, b = (o2, o1) if swapped else (o1, o2)
    (m1, n1), n2 = a.signature, b.signature[1]
    if n1 + n2 < j < m:
        # cut m - j positive entries from the second form
        pos = [i for i, x in enumerate(b.entries) if x > 0]
        idx = tuple(pos[len(pos) - (m - j):])
        which = 1 if swapped else 2
    elif n1 > 0 and m1 < j < m:
        neg = [i for i, x in enumerate(a.entries) if x < 0]
        idx = tuple(neg[len(neg) - (m - j):])
        which = 2 if swapped else 1
    else:
        raise NotApplicable(f"j = {j} lies outside both admissible ranges")
    target = q1 if which == 1 else q2
    r = delete_entries(target, idx)
    cert = certify_real(q1, q2, r, which)
    if not verify_certificate(cert):
        raise VerificationFailed("real-place certificate does not verify")
    return which, idx, cert


def transfer_subform(r: DiagonalForm, q2: DiagonalForm) -> DiagonalForm:
    """A complement t with r + t isometric to q2, when codim >= 3 and signatures allow it."""
    if r.dim >= q2.dim - 2:
        raise PreconditionViolated("transfer needs dim r < dim q2 - 2")
    if not signature_fits(r.signature, q2.signature):
        raise PreconditionViolated(f"signature {r.signature} does not fit in {q2.signature}")
    d_t = q2.det.value * r.det.value
    sig = (q2.signature[0] - r.signature[0], q2.signature[1] - r.signature[1])
    minus = set()
    for v in union_support(r, q2):
        if v.is_infinite:
            continue
        c = q2.hasse(v) * r.hasse(v) * hilbert_symbol(r.det.value, d_t, v)
        if c == -1:
            minus.add(v)
    t = synthesize_form(SynthesisProfile(q2.dim - r.dim, d_t, sig, minus))
    if not globally_isometric(direct_sum(r, t), q2):
        raise VerificationFailed(f"{r} + {t} is not isometric to {q2}")
    return t


def similar_subform_search(r: DiagonalForm, q: DiagonalForm, max_primes: int = 12):
    """Some lam with lam * r a subform of q, searching lam over a bounded set.

    lam ranges over products of subsets of {-1} and the primes of r and q
    (2 always included).  A None result is inconclusive.
    """
    primes = sorted({2} | {v.prime for v in union_support(r, q) if not v.is_infinite})
    primes = primes[:max_primes]
    gens = [-1] + primes
    for k in range(len(gens) + 1):
        for combo in itertools.combinations(gens, k):
            lam = 1
            for g in combo:
                lam *= g
            if is_subform(scale(r, lam), q):
                return lam
    return None
