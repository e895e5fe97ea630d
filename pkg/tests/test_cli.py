import json
import subprocess
import sys

import numpy as np
import pytest

from qfunctions import classical as cl
from qfunctions import jsonio, qfun, qrel, vnalg
from qfunctions import matkernel as mk
from qfunctions.cli import main
from qfunctions.qfun import Homomorphism
from qfunctions.sampling import random_homomorphism


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        p = tmp_path / name
        p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(p)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def cert_of(doc):
    return doc["certificate"] if "certificate" in doc else doc


def assert_certificate_shape(cert):
    assert set(cert) >= {"command", "inputs_digest", "checks", "overall", "tolerances"}
    assert cert["overall"] == all(c["passed"] for c in cert["checks"])
    assert all(c["residual"] >= 0 for c in cert["checks"])


# -- commutant ---------------------------------------------------------------------------

def test_commutant_full_m2(capsys, write):
    code, doc, _ = run(capsys, "commutant", write("a.json", {"blocks": [{"n": 2, "m": 1}]}))
    cert = doc["certificate"]
    assert code == 0 and cert["overall"]
    assert_certificate_shape(cert)
    s = jsonio.subspace_from_json(doc["result"])
    assert mk.subspace_eq(s, mk.subspace_of([np.eye(2)]))


def test_commutant_dimension_reported(capsys, write):
    code, doc, _ = run(capsys, "commutant", write("a.json", {"blocks": [{"n": 2, "m": 3}]}))
    assert code == 0 and doc["certificate"]["info"]["commutant_dim"] == 9


def test_commutant_from_generators(capsys, write):
    gens = [jsonio.matrix_to_json(np.diag([1.0, 2.0, 3.0]))]
    code, doc, _ = run(capsys, "commutant", write("a.json", {"dim": 3, "generators": gens}))
    assert code == 0 and doc["certificate"]["info"]["commutant_dim"] == 3


def test_malformed_json_has_position(capsys, write):
    code, doc, err = run(capsys, "commutant", write("bad.json", '{"blocks": [\n  {"n": 2,, "m": 1}]}'))
    assert code == 2 and doc is None
    assert "line 2 column" in err


def test_schema_violation_is_input_error(capsys, write):
    code, _, err = run(capsys, "commutant", write("bad.json", {"blocks": [{"n": 0, "m": 1}]}))
    assert code == 2 and "invalid algebra" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "commutant", str(tmp_path / "nope.json"))
    assert code == 2 and "nope.json" in err


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["selftest", "--tol-eq", "-1"]) == 2
    capsys.readouterr()


# -- relprops ------------------------------------------------------------------------------

def test_relprops_diagonal(capsys, write):
    r = qrel.diagonal(vnalg.from_blocks([(1, 1), (2, 1)]))
    code, cert, _ = run(capsys, "relprops", write("r.json", jsonio.relation_to_json(r)))
    assert code == 0
    assert all(p["holds"] for p in cert["info"]["properties"].values())


def test_relprops_strict_order_matches_classical(capsys, write):
    f = cl.ClassicalRelation(3, 3, frozenset({(1, 0), (2, 0), (2, 1)}))
    code, cert, _ = run(capsys, "relprops", write("r.json", jsonio.relation_to_json(cl.relation_to_quantum(f))))
    assert code == 0
    got = {k: v["holds"] for k, v in cert["info"]["properties"].items()}
    assert got == cl.classical_predicates(f).as_dict()


def test_relprops_invalid_bimodule(capsys, write):
    l2 = cl.diag_algebra(2)
    r = qrel.relation(l2, l2, [mk.matrix_unit(0, 0, 2) + mk.matrix_unit(0, 1, 2)])
    code, cert, _ = run(capsys, "relprops", write("r.json", jsonio.relation_to_json(r)))
    assert code == 1 and not cert["overall"]
    assert cert["info"]["properties"] is None


# -- gmap / ginv / roundtrip / dilate --------------------------------------------------------

def test_gmap_then_ginv(capsys, write, tmp_path):
    pi = random_homomorphism(np.random.default_rng(5), 4)
    hom_file = write("h.json", jsonio.hom_to_json(pi))
    out = tmp_path / "rel.json"
    code, cert, _ = run(capsys, "gmap", hom_file, "--output", str(out))
    assert code == 0 and cert["command"] == "gmap"
    r = jsonio.relation_from_json(json.loads(out.read_text()))
    assert mk.subspace_eq(r.space, qfun.g_forward(pi).space)

    fam = tmp_path / "fam.json"
    code, doc, _ = run(capsys, "ginv", str(out), "--family", str(fam))
    assert code == 0
    back = jsonio.hom_from_json(doc["result"])
    assert qfun.hom_distance(back, pi) < 1e-8
    assert jsonio.family_from_json(json.loads(fam.read_text())).is_valid()


def test_gmap_rejects_non_homomorphism(capsys, write):
    m2 = vnalg.full_matrices(2)
    bad = Homomorphism(m2, m2, 1.1 * m2.algebra.basis)
    code, cert, err = run(capsys, "gmap", write("h.json", jsonio.hom_to_json(bad)))
    assert code == 1 and not cert["overall"] and "homomorphism" in err


def test_ginv_names_violated_inclusion(capsys, write):
    f = cl.ClassicalRelation(2, 2, frozenset({(0, 0), (1, 0), (1, 1)}))
    code, cert, err = run(capsys, "ginv", write("r.json", jsonio.relation_to_json(cl.relation_to_quantum(f))))
    assert code == 1
    assert cert["info"]["error"] == "not a quantum function"
    assert cert["info"]["violated"] == ["quantum function: " + qfun.INCLUSION_NAMES["single_valued"]]
    assert "V V* <= target commutant" in err


def test_ginv_totality_failure(capsys, write):
    f = cl.ClassicalRelation(2, 2, frozenset({(0, 0)}))
    code, cert, _ = run(capsys, "ginv", write("r.json", jsonio.relation_to_json(cl.relation_to_quantum(f))))
    assert code == 1
    assert cert["info"]["violated"] == ["quantum function: " + qfun.INCLUSION_NAMES["totality"]]


def test_roundtrip_command(capsys, write):
    pi = random_homomorphism(np.random.default_rng(9), 5)
    code, cert, _ = run(capsys, "roundtrip", write("h.json", jsonio.hom_to_json(pi)))
    assert code == 0
    check = [c for c in cert["checks"] if c["name"].startswith("roundtrip")][0]
    assert check["residual"] <= 1e-8


def test_dilate_with_generation(capsys, write):
    pi = random_homomorphism(np.random.default_rng(11), 4)
    code, doc, _ = run(capsys, "dilate", write("h.json", jsonio.hom_to_json(pi)), "--generation", "--pretty")
    assert code == 0
    names = [c["name"] for c in doc["certificate"]["checks"]]
    assert any(n.startswith("generation") for n in names)
    w = jsonio.isometry_from_json(doc["result"])
    assert qfun.compression_residual(w, pi) < 1e-8


def test_dilate_without_generation(capsys, write):
    pi = cl.function_to_hom(cl.ClassicalFunction(2, 2, (1, 1)))
    code, doc, _ = run(capsys, "dilate", write("h.json", jsonio.hom_to_json(pi)))
    assert code == 0
    assert not any(c["name"].startswith("generation") for c in doc["certificate"]["checks"])


def test_tolerance_flags_are_echoed(capsys, write):
    code, doc, _ = run(capsys, "commutant", write("a.json", {"blocks": [{"n": 1, "m": 2}]}),
                       "--tol-rank", "1e-11", "--tol-membership", "1e-7", "--tol-eq", "1e-8")
    assert doc["certificate"]["tolerances"] == {"rank_tol": 1e-11, "membership_tol": 1e-7, "eq_tol": 1e-8}


def test_certificate_is_canonical(capsys, write):
    path = write("a.json", {"blocks": [{"n": 2, "m": 1}]})
    main(["commutant", path])
    text = capsys.readouterr().out
    assert text == jsonio.canonical_dumps(json.loads(text)) + "\n"


# -- selftest ---------------------------------------------------------------------------

def test_selftest_degenerate(capsys):
    code, cert, _ = run(capsys, "selftest", "--max-dim", "1", "--count", "20", "--pairs", "10")
    assert code == 0 and cert["overall"]
    assert_certificate_shape(cert)


def test_selftest_corrupted_fixture(capsys):
    code, cert, _ = run(capsys, "selftest", "--max-dim", "2", "--count", "5", "--pairs", "5", "--corrupt")
    assert code == 1 and not cert["overall"]
    failed = [c["name"] for c in cert["checks"] if not c["passed"]]
    assert failed and all(n.startswith("fixture") for n in failed)


def test_selftest_rejects_bad_dim(capsys):
    assert main(["selftest", "--max-dim", "0"]) == 2
    capsys.readouterr()


def test_module_entry_point(tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps({"blocks": [{"n": 2, "m": 1}]}))
    proc = subprocess.run([sys.executable, "-m", "qfunctions", "commutant", str(p), "-o", str(tmp_path / "c.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["overall"] is True
    assert (tmp_path / "c.json").exists()
