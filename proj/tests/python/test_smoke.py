import json
import os

import pytest

import zzsg


def test_parse_examples():
    assert zzsg.parse("lambda+ * lambda-") == "alpha"
    assert zzsg.parse("v+ * v-") == "1"
    assert "degree (0,1)" in zzsg.describe("lambda+")
    with pytest.raises(zzsg.Error, match="line 1, col 5"):
        zzsg.parse("sin()")


def test_parse_print_round_trip():
    for s in zzsg.expand_series("minus", 4) + [eq[2] for eq in zzsg.component_equations()]:
        assert zzsg.parse(s) == s


def test_field_equations():
    assert zzsg.euler_lagrange() == "2*D- D+ Phi + alpha*sin(1/2*Phi)"
    eqs = {lead: res for _, lead, res in zzsg.component_equations()}
    assert eqs["psi+_{+}"] == "psi+_{+} + 1/2*alpha*psi-*cos(1/2*X)"


def test_series():
    c = zzsg.expand_series("minus", 2)
    assert c[0] == "Phi"
    assert c[1] == "-4*lambda-*v+*D+ Phi"


def test_run_check_is_schema_shaped():
    rep = zzsg.run_check("currents")
    assert rep["check"] == "currents"
    assert rep["status"] == "pass"
    schema_path = os.environ.get("ZZSG_SCHEMA")
    if schema_path:
        jsonschema = pytest.importorskip("jsonschema")
        with open(schema_path) as f:
            jsonschema.validate(rep, json.load(f))


def test_run_exit_codes():
    rc, out, _ = zzsg.run(["derive-eom"])
    assert rc == 0 and out.startswith("[pass] derive-eom")
    rc, _, _ = zzsg.run(["verify-bt"], sabotage=True)
    assert rc == 1
    rc, _, _ = zzsg.run(["nope"])
    assert rc == 2
    rc, out, _ = zzsg.run(["components"], format="json")
    assert json.loads(out)[0]["status"] == "pass"


def test_numerics():
    assert zzsg.kink(0.0) == pytest.approx(3.141592653589793)
    assert zzsg.kink_energy() == pytest.approx(8, abs=1e-6)
    assert zzsg.kink_energy(0.6) == pytest.approx(10, abs=1e-5)
    assert zzsg.static_kink_residual() < 1e-8
    assert len(zzsg.graded_table()) == 16
