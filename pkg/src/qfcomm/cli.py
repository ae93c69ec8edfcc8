"""Command-line front end.  Every command prints one JSON object.

Exit status: 0 when a decision was computed (whatever its value), 1 on a
malformed request, 2 when the inputs violate a precondition, 3 when a bounded
search ran out.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .arith import as_place
from .errors import ParseError, QFError, SearchExhausted
from .forms import DiagonalForm, global_invariants
from .global_theory import (
    SynthesisProfile,
    globally_isometric,
    globally_isotropic,
    is_subform,
    isogroupic,
    similar,
    square_existence,
    synthesize_form,
)
from .hilbert import hilbert_symbol
from .hyperbolic import (
    commensurable,
    contains_as_subspace,
    dichotomy_report,
    distinguishing_place,
    maclachlan_enumerate,
    maclachlan_form_to_primes,
    maclachlan_primes_to_form,
)
from .local_theory import (
    local_isometric,
    local_isotropic,
    local_subform,
    local_witt_index,
    tits_index,
)
from .subforms import (
    SubformCertificate,
    distinguishing_subform_even_codim1,
    distinguishing_subform_even_codim2,
    distinguishing_subform_odd,
    real_distinguishing_subform,
    transfer_subform,
    verify_certificate,
)

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")


def parse_rational(text: str, offset: int = 0) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(f"not a rational number: {text.strip()!r}", offset)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ParseError("zero denominator", offset)
    return Fraction(num, den)


def _form_from_items(items, origin: str) -> DiagonalForm:
    if not items:
        raise ParseError(f"empty form in {origin}", 0)
    out = []
    for i, item in enumerate(items):
        x = parse_rational(str(item), i)
        if x == 0:
            raise ParseError(f"zero entry at position {i} of {origin}", i)
        out.append(x)
    return DiagonalForm(out)


def parse_form(text: str) -> DiagonalForm:
    """``1,1,-5/2`` or ``@path`` to a JSON array (or {"entries": [...]})."""
    text = text.strip()
    if text.startswith("@"):
        path = text[1:]
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read form file {path}: {exc}") from exc
        if isinstance(doc, dict):
            doc = doc.get("entries")
        if not isinstance(doc, list):
            raise ParseError(f"{path} does not hold an array of rationals")
        return _form_from_items(doc, path)
    if not text:
        raise ParseError("empty form", 0)
    items, pos = [], 0
    for part in text.split(","):
        x = parse_rational(part, pos)
        if x == 0:
            raise ParseError(f"zero entry at character {pos}", pos)
        items.append(x)
        pos += len(part) + 1
    return DiagonalForm(items)


def parse_place(text: str):
    text = text.strip()
    if text.lower() == "inf":
        return as_place("inf")
    if not text.isdigit():
        raise ParseError(f"place must be 'inf' or a prime, got {text!r}", 0)
    return as_place(int(text))


def parse_int_list(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _form_json(q: DiagonalForm) -> list:
    return [str(a) for a in q.entries]


def _place_arg(sub, name="place"):
    sub.add_argument(name, type=str)


def _cmd_invariants(a):
    return global_invariants(parse_form(a.form)).to_json(), None


def _cmd_hilbert(a):
    x, y = parse_rational(a.a), parse_rational(a.b)
    return hilbert_symbol(x, y, parse_place(a.place)), None


def _cmd_isometric(a):
    q1, q2 = parse_form(a.q1), parse_form(a.q2)
    if a.place:
        return local_isometric(q1, q2, parse_place(a.place)), None
    return globally_isometric(q1, q2), None


def _cmd_isotropic(a):
    q = parse_form(a.form)
    if a.place:
        return local_isotropic(q, parse_place(a.place)), None
    verdict, witness = globally_isotropic(q)
    return {"isotropic": verdict, "witness": [str(x) for x in witness] if witness else None}, None


def _cmd_witt(a):
    return local_witt_index(parse_form(a.form), parse_place(a.place)), None


def _cmd_tits(a):
    return tits_index(parse_form(a.form), parse_place(a.place)).to_json(), None


def _cmd_similar(a):
    lam = similar(parse_form(a.q1), parse_form(a.q2))
    return {"similar": lam is not None, "lambda": lam.value if lam else None}, None


def _cmd_isogroupic(a):
    return isogroupic(parse_form(a.q1), parse_form(a.q2)).to_json(), None


def _cmd_subform(a):
    r, q = parse_form(a.r), parse_form(a.q)
    if a.place:
        return local_subform(r, q, parse_place(a.place)), None
    return is_subform(r, q), None


def _witness(fn):
    def run(a):
        r, cert = fn(parse_form(a.q1), parse_form(a.q2), parse_place(a.place))
        return {"r": _form_json(r)}, cert.to_json()

    return run


def _cmd_witness_real(a):
    which, idx, cert = real_distinguishing_subform(parse_form(a.q1), parse_form(a.q2), a.j)
    return {"which": which, "deleted": list(idx), "r": _form_json(cert.r)}, cert.to_json()


def _cmd_verify(a):
    src = a.certificate
    try:
        if src == "-":
            doc = json.load(sys.stdin)
        else:
            with open(src.lstrip("@")) as fh:
                doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read certificate: {exc}") from exc
    if isinstance(doc, dict) and "certificate" in doc:
        doc = doc["certificate"]
    try:
        cert = SubformCertificate.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from exc
    return verify_certificate(cert), None


def _cmd_transfer(a):
    t = transfer_subform(parse_form(a.r), parse_form(a.q))
    return {"complement": _form_json(t)}, None


def _cmd_commensurable(a):
    q1, q2 = parse_form(a.q1), parse_form(a.q2)
    result = commensurable(q1, q2)
    if a.place and not result and q1.dim == q2.dim:
        v = distinguishing_place(q1, q2)
        return {"commensurable": result, "place": str(v) if v else None}, None
    return result, None


def _cmd_dichotomy(a):
    rep = dichotomy_report(parse_form(a.q1), parse_form(a.q2), check_transfer=not a.no_transfer)
    doc = rep.to_json()
    cert = doc["codim1_witness"] or doc["codim2_witness"]
    return doc, cert


def _cmd_contains(a):
    return contains_as_subspace(parse_form(a.q1), parse_form(a.q2)).to_json(), None


def _class_json(cls) -> dict:
    doc = cls.to_json()
    if cls.audit:
        doc["audit"] = cls.audit
    return doc


def _cmd_maclachlan(a):
    if a.action == "to-primes":
        return _class_json(maclachlan_form_to_primes(parse_form(a.form))), None
    if a.action == "to-form":
        q = maclachlan_primes_to_form(a.n, parse_int_list(a.primes))
        return {"form": _form_json(q)}, None
    classes = maclachlan_enumerate(a.n, a.prime_bound)
    return {"count": len(classes), "classes": [c.to_json() for c in classes]}, None


def _cmd_synthesize(a):
    sig = parse_int_list(a.signature)
    if len(sig) != 2:
        raise ParseError("signature must be 'p,n'")
    prof = SynthesisProfile(a.dim, parse_rational(a.det), sig, parse_int_list(a.minus))
    return {"form": _form_json(synthesize_form(prof))}, None


def _cmd_square(a):
    cons = {}
    for item in a.constraints:
        place, sep, cls = item.partition("=")
        if not sep:
            raise ParseError(f"constraint must be PLACE=CLASS, got {item!r}")
        v = parse_place(place)
        if v in cons:
            raise ParseError(f"two constraints at {v}")
        cons[v] = parse_rational(cls)
    return square_existence(cons), None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qfcomm", description="Quadratic forms over Q and commensurability of hyperbolic orbifolds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, fn, *args, help=None):
        s = sub.add_parser(name, help=help)
        for arg in args:
            s.add_argument(arg)
        s.set_defaults(run=fn)
        return s

    cmd("invariants", _cmd_invariants, "form", help="global invariant profile")
    cmd("hilbert", _cmd_hilbert, "a", "b", "place", help="Hilbert symbol (a,b)_v")
    cmd("isometric", _cmd_isometric, "q1", "q2").add_argument("--place")
    cmd("isotropic", _cmd_isotropic, "form").add_argument("--place")
    cmd("witt", _cmd_witt, "form", "place")
    cmd("tits-index", _cmd_tits, "form", "place")
    cmd("similar", _cmd_similar, "q1", "q2")
    cmd("isogroupic", _cmd_isogroupic, "q1", "q2")
    cmd("subform", _cmd_subform, "r", "q").add_argument("--place")
    cmd("witness-odd", _witness(distinguishing_subform_odd), "q1", "q2", "place")
    cmd("witness-even1", _witness(distinguishing_subform_even_codim1), "q1", "q2", "place")
    cmd("witness-even2", _witness(distinguishing_subform_even_codim2), "q1", "q2", "place")
    cmd("witness-real", _cmd_witness_real, "q1", "q2").add_argument("--j", type=int, required=True)
    cmd("verify-cert", _cmd_verify, "certificate", help="path to a certificate JSON file, or - for stdin")
    cmd("transfer", _cmd_transfer, "r", "q")
    cmd("commensurable", _cmd_commensurable, "q1", "q2").add_argument(
        "--place", action="store_true", help="also report a distinguishing place"
    )
    cmd("dichotomy", _cmd_dichotomy, "q1", "q2").add_argument("--no-transfer", action="store_true")
    cmd("contains", _cmd_contains, "q1", "q2")

    mac = cmd("maclachlan", _cmd_maclachlan)
    mac.add_argument("action", choices=["to-primes", "to-form", "enumerate"])
    mac.add_argument("form", nargs="?")
    mac.add_argument("--n", type=int)
    mac.add_argument("--primes", default="")
    mac.add_argument("--prime-bound", type=int, default=10)

    syn = cmd("synthesize", _cmd_synthesize)
    syn.add_argument("--dim", type=int, required=True)
    syn.add_argument("--det", required=True)
    syn.add_argument("--signature", required=True)
    syn.add_argument("--minus", default="")

    sq = cmd("square-exists", _cmd_square)
    sq.add_argument("constraints", nargs="+", help="PLACE=CLASS, e.g. inf=1 3=2")
    return p


def _shield_negatives(argv):
    # "-1,1" or "-5" are data, not options
    return [" " + a if re.match(r"^-\d", a) else a for a in argv]


def _check_maclachlan(args):
    if args.command != "maclachlan":
        return
    if args.action == "to-primes" and not args.form:
        raise ParseError("to-primes needs a form")
    if args.action in ("to-form", "enumerate") and args.n is None:
        raise ParseError(f"{args.action} needs --n")


def run(argv) -> tuple:
    """(exit status, JSON document) for one command line."""
    try:
        args = build_parser().parse_args(_shield_negatives(argv))
        _check_maclachlan(args)
        result, cert = args.run(args)
    except ParseError as exc:
        err = {"type": "ParseError", "message": str(exc)}
        if exc.position is not None:
            err["position"] = exc.position
        return 1, {"ok": False, "error": err}
    except SearchExhausted as exc:
        return 3, {"ok": False, "error": {"type": "SearchExhausted", "message": str(exc)}}
    except QFError as exc:
        return 2, {"ok": False, "error": {"type": type(exc).__name__, "message": str(exc)}}
    doc = {"ok": True, "result": result}
    if cert is not None:
        doc["certificate"] = cert
    return 0, doc


def main(argv=None) -> int:
    status, doc = run(sys.argv[1:] if argv is None else argv)
    print(json.dumps(doc, sort_keys=True))
    return status


if __name__ == "__main__":
    sys.exit(main())
