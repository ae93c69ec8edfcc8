import json
import pathlib
import subprocess
import sys

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from qfcomm.cli import main, run

SCHEMAS = pathlib.Path(__file__).resolve().parent.parent / "schemas"


def _load(name):
    return json.loads((SCHEMAS / name).read_text())


REGISTRY = Registry().with_resources(
    (f"qfcomm/{p.name}", Resource.from_contents(json.loads(p.read_text()))) for p in SCHEMAS.glob("*.json")
)
ENVELOPE = Draft202012Validator(_load("envelope.schema.json"), registry=REGISTRY)
INVARIANTS = Draft202012Validator(_load("invariants.schema.json"))
FORM = Draft202012Validator(_load("form.schema.json"))


def cli(*argv):
    status, doc = run(list(argv))
    ENVELOPE.validate(doc)
    return status, doc


def test_schemas_are_valid():
    for p in SCHEMAS.glob("*.json"):
        Draft202012Validator.check_schema(json.loads(p.read_text()))


def test_invariants_golden(capsys):
    assert main(["invariants", "1,1,3,3,-5"]) == 0
    out = capsys.readouterr().out
    assert out == (
        '{"ok": true, "result": {"det": -5, "dim": 5, "disc": -5, '
        '"hasse": {"2": -1, "3": -1}, "signature": [4, 1]}}\n'
    )
    INVARIANTS.validate(json.loads(out)["result"])


def test_commensurable_golden():
    assert cli("commensurable", "1,1,1,1,-5", "1,1,3,3,-5") == (0, {"ok": True, "result": False})
    status, doc = cli("commensurable", "--place", "1,1,1,1,-5", "1,1,3,3,-5")
    assert doc["result"] == {"commensurable": False, "place": "3"}


def test_enumerate_golden():
    status, doc = cli("maclachlan", "enumerate", "--n", "2", "--prime-bound", "10")
    assert status == 0 and doc["result"]["count"] == 8
    assert sorted(c["primes"] for c in doc["result"]["classes"])[0] == [2]


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["hilbert", "-1", "-1", "inf"], -1),
        (["hilbert", "3", "3", "3"], -1),
        (["isometric", "1,1", "2,2"], True),
        (["isometric", "--place", "3", "1,1,1,1,-5", "1,1,3,3,-5"], False),
        (["isotropic", "--place", "3", "1,1,3,3"], False),
        (["witt", "1,1,1,1,-5", "3"], 2),
        (["tits-index", "1,1,3,3", "3"], {"family": "D_inner", "n": 2, "witt_index": 0, "split": False, "symbol": "1D_{2,0}"}),
        (["similar", "1,1,1", "2,2,2"], {"similar": True, "lambda": 2}),
        (["similar", "1,1,1,1,-5", "1,1,3,3,-5"], {"similar": False, "lambda": None}),
        (["isogroupic", "1,1,1,1,-5", "1,1,3,3,-5"], {"verdict": "No"}),
        (["isogroupic", "1,2", "1,3"], {"verdict": "UnknownEvenDim"}),
        (["subform", "1,1,1,-5", "1,1,1,1,-5"], True),
        (["subform", "-1", "1,1"], False),
        (["contains", "1,1,1,-5", "1,1,1,3,3,-1"], {"verdict": "No", "place": "3"}),
        (["square-exists", "inf=1", "3=2"], 2),
        (["square-exists", "inf=-1"], -1),
        (["maclachlan", "to-primes", "1,-1,-1,-3,-3"], None),
    ],
)
def test_command_results(argv, expected):
    status, doc = cli(*argv)
    assert status == 0
    if expected is not None:
        assert doc["result"] == expected


def test_isotropic_witness_is_rational():
    status, doc = cli("isotropic", "1,1,1,1,-5")
    assert doc["result"]["isotropic"] is True
    FORM.validate([w if w != "0" else "1" for w in doc["result"]["witness"]])


def test_maclachlan_to_primes_audit():
    status, doc = cli("maclachlan", "to-primes", "1,-1,-1,-3,-3")
    res = doc["result"]
    assert res["n"] == 2 and res["primes"] == [3]
    assert res["audit"]["product_formula"] and res["audit"]["f_s_equals_e_s"]


@pytest.mark.parametrize(
    "cmd, q1, q2",
    [
        ("witness-odd", "1,1,1,1,-5", "1,1,3,3,-5"),
        ("witness-even1", "1,1,5,-1", "3,3,5,-1"),
        ("witness-even2", "1,1,1,3,3,-1", "1,1,1,1,1,-5"),
    ],
)
def test_witnesses_verify(cmd, q1, q2, tmp_path):
    status, doc = cli(cmd, q1, q2, "3")
    assert status == 0
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(doc))
    assert cli("verify-cert", str(path)) == (0, {"ok": True, "result": True})
    doc["certificate"]["data"]["dim_r"] += 1
    path.write_text(json.dumps(doc["certificate"]))
    assert cli("verify-cert", str(path)) == (0, {"ok": True, "result": False})


def test_real_witness_verifies(tmp_path):
    status, doc = cli("witness-real", "1,1,1,1,-1", "1,1,1,-1,-1", "--j", "4")
    assert status == 0 and doc["certificate"]["kind"] == "RealPlace"
    path = tmp_path / "cert.json"
    path.write_text(json.dumps(doc["certificate"]))
    assert cli("verify-cert", str(path))[1]["result"] is True


def test_dichotomy_certificate():
    status, doc = cli("dichotomy", "1,1,1,3,3,-1", "1,1,1,1,1,-5")
    res = doc["result"]
    assert res["commensurable"] is False and res["transfer_verified"] is True
    assert doc["certificate"]["kind"] == "EvenCodim2"


def test_synthesize_then_invariants():
    status, doc = cli("synthesize", "--dim", "5", "--det", "1", "--signature", "1,4", "--minus", "2,3")
    assert status == 0
    form = ",".join(doc["result"]["form"])
    inv = cli("invariants", form)[1]["result"]
    assert inv["dim"] == 5 and inv["det"] == 1 and inv["signature"] == [1, 4]
    assert inv["hasse"] == {"2": -1, "3": -1}


def test_transfer_and_form_files(tmp_path):
    (tmp_path / "q.json").write_text(json.dumps({"entries": ["1", "1", "1", "1", "1", "-5"]}))
    status, doc = cli("transfer", "1,-1", f"@{tmp_path / 'q.json'}")
    assert status == 0
    t = ",".join(doc["result"]["complement"])
    assert cli("isometric", "1,-1," + t, "1,1,1,1,1,-5")[1]["result"] is True


@pytest.mark.parametrize(
    "argv, status, kind",
    [
        (["invariants", "1,0,2"], 1, "ParseError"),
        (["invariants", "1,x"], 1, "ParseError"),
        (["invariants", "1/0"], 1, "ParseError"),
        (["hilbert", "1", "2", "15"], 2, "NotPrime"),
        (["nonsense"], 1, "ParseError"),
        (["maclachlan", "to-form", "--n", "2", "--primes", ""], 2, "ParityViolation"),
        (["witness-odd", "1,1,1,1,-5", "1,1,1,1,-5", "3"], 2, "HypothesesViolated"),
        (["tits-index", "1,1", "3"], 2, "DimensionTooSmall"),
        (["square-exists", "3=3", "3=1"], 1, "ParseError"),
    ],
)
def test_error_statuses(argv, status, kind):
    got, doc = cli(*argv)
    assert got == status and doc["error"]["type"] == kind


def test_parse_error_position():
    status, doc = cli("invariants", "1,2,0")
    assert doc["error"]["position"] == 4


def test_search_exhausted_exit_code(monkeypatch):
    monkeypatch.setenv("QFCOMM_SEARCH_BOUND", "3")
    status, doc = cli("square-exists", "inf=1", "3=2", "5=2", "7=3")
    assert status == 3 and doc["error"]["type"] == "SearchExhausted"


def test_output_is_byte_stable():
    argv = ["dichotomy", "--no-transfer", "1,1,1,1,-5", "1,1,3,3,-5"]
    outs = {
        subprocess.run([sys.executable, "-m", "qfcomm", *argv], capture_output=True, text=True, check=True).stdout
        for _ in range(2)
    }
    assert len(outs) == 1
    ENVELOPE.validate(json.loads(outs.pop()))


def test_console_script_exit_codes():
    ok = subprocess.run(["qfcomm", "commensurable", "1,1,1,1,-5", "1,1,3,3,-5"], capture_output=True, text=True)
    assert ok.returncode == 0 and json.loads(ok.stdout)["result"] is False
    bad = subprocess.run(["qfcomm", "invariants", "1,0"], capture_output=True, text=True)
    assert bad.returncode == 1


def test_verify_cert_from_stdin():
    status, doc = run(["witness-odd", "1,1,1,1,-5", "1,1,3,3,-5", "3"])
    proc = subprocess.run(
        [sys.executable, "-m", "qfcomm", "verify-cert", "-"],
        input=json.dumps(doc["certificate"]),
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"] is True
