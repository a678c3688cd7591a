import json
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from realtheta import periodfile
from realtheta.cli import main
from realtheta.intmat import RealType
from realtheta.periodfile import PeriodFileError
from realtheta.siegel import RiemannMatrix, random_real_tau


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


@pytest.fixture
def files(tmp_path):
    return {
        "crit": write(tmp_path, "crit.json", {"g": 2, "re2": [[0, 1], [1, 0]], "im": [[3.0, 0.0], [0.0, 3.0]]}),
        "nc": write(tmp_path, "nc.json", {"g": 2, "re2": [[1, 0], [0, 0]], "im": [[3.0, 0.0], [0.0, 3.0]]}),
        "g1": write(tmp_path, "g1.json", {"g": 1, "re2": [[0]], "im": [[1.0]]}),
        "asym": write(tmp_path, "asym.json",
                      '{"g": 2,\n "re2": [[0, 1], [1, 0]],\n "im": [[3.0, 0.5], [0.0, 3.0]]}\n'),
    }


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_critical(files, capsys):
    code, out, _ = run(["classify", files["crit"]], capsys)
    assert code == 0 and out.startswith("NoRealPoints")


def test_classify_non_critical(files, capsys):
    code, out, _ = run(["classify", files["nc"]], capsys)
    assert code == 0
    assert out.splitlines()[0] == "HasRealPoints (non-critical type (2,1,0))"


def test_classify_bad_file(files, capsys):
    code, out, err = run(["classify", files["asym"]], capsys)
    assert code == 1 and out == ""
    assert "line 3" in err and "not symmetric" in err


def test_classify_indeterminate_exit_code(files, capsys):
    code, out, err = run(["classify", files["crit"], "--tol-classify", "5"], capsys)
    assert code == 2 and out.startswith("Indeterminate") and err


def test_classify_json_schema_and_all(files, capsys):
    code, out, _ = run(["classify", files["crit"], "--json", "--all"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "realtheta.classify/1"
    assert doc["decision"] == "NoRealPoints"
    assert abs(doc["witness_value"] - 0.99968) < 1e-4
    assert set(doc["families"]) == {"O", "E"}


def test_theta_examples(files, capsys):
    code, out, _ = run(["theta", "--file", files["g1"], "--json"], capsys)
    doc = json.loads(out)
    assert code == 0 and abs(doc["value"][0] - 1.0864348112133) < 1e-12 and doc["abs_error"] <= 1e-12
    code, out, _ = run(["theta", "--file", files["crit"], "--beta", "1,1"], capsys)
    assert code == 0 and out.startswith("value: 0.99967")
    assert "abs_error:" in out and "terms_used:" in out
    code, out, _ = run(["theta", "--file", files["g1"], "--alpha", "1", "--beta", "1", "--json"], capsys)
    assert abs(complex(*json.loads(out)["value"])) < 1e-12


def test_theta_argument_errors(files, capsys):
    code, _, err = run(["theta", "--file", files["crit"], "--beta", "1"], capsys)
    assert code == 1 and "--beta" in err
    code, _, err = run(["theta", "--file", files["crit"], "--z", "nope,0"], capsys)
    assert code == 1 and "--z" in err


def test_theta_with_z(files, capsys):
    code, out, _ = run(["theta", "--file", files["g1"], "--z", "0.1+0.2j", "--json"], capsys)
    assert code == 0 and json.loads(out)["terms_used"] > 0


def test_sets(capsys):
    code, out, _ = run(["sets", "--g", "2", "--lambda", "2", "--eps", "1", "--set", "O"], capsys)
    assert code == 0 and out == "(1,1)\ncardinality: 1\n"
    code, out, _ = run(["sets", "--g", "4", "--lambda", "4", "--eps", "1", "--set", "B"], capsys)
    lines = out.splitlines()
    assert len(lines) == 10 and lines[-1] == "cardinality: 9" and lines[:-1] == sorted(lines[:-1])
    code, out, err = run(["sets", "--g", "2", "--lambda", "1", "--eps", "1"], capsys)
    assert code == 1 and "λ must be even when ε=1" in err


def test_verify_examples(capsys):
    code, out, _ = run(["verify", "--g", "2", "--lambda", "2", "--trials", "10", "--seed", "42"], capsys)
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(["verify", "--g", "3", "--lambda", "2", "--trials", "10", "--seed", "7"], capsys)
    assert code == 0 and "PASS  aux_T sign flip" in out
    code, out, _ = run(["verify", "--g", "4", "--lambda", "4", "--trials", "4", "--seed", "1"], capsys)
    assert code == 0 and "skipped: λ=g" in out


def test_verify_rejects_inadmissible(capsys):
    code, _, err = run(["verify", "--g", "3", "--lambda", "3"], capsys)
    assert code == 1 and "λ must be even" in err


def test_verify_json_is_deterministic(capsys):
    argv = ["verify", "--g", "2", "--lambda", "2", "--trials", "5", "--seed", "3", "--json"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b and json.loads(a)["schema"] == "realtheta.verify/1"


def test_env_tolerance_and_flag_precedence(files, capsys, monkeypatch):
    monkeypatch.setenv("REALTHETA_TOL", "1e-6")
    _, out, _ = run(["classify", files["crit"], "--json"], capsys)
    assert json.loads(out)["tolerances"]["tol"] == 1e-6
    _, out, _ = run(["classify", files["crit"], "--json", "--tol", "1e-10"], capsys)
    assert json.loads(out)["tolerances"]["tol"] == 1e-10
    monkeypatch.setenv("REALTHETA_TOL", "abc")
    code, _, err = run(["classify", files["crit"]], capsys)
    assert code == 1 and "REALTHETA_TOL" in err


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "realtheta.cli", "classify", files["nc"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("HasRealPoints")


# --- period-matrix files ---------------------------------------------------------

@pytest.mark.parametrize("text, needle, line", [
    ('{"g": 2, "re2": [[0, 1], [1, 0]]}', "missing required field 'im'", None),
    ('{"g": 2,\n"re2": [[0, 1], [1, 0]],\n"im": [[1.0, 0.0]]}', "2x2", 3),
    ('{"g": 2,\n"re2": [[0, 1.5], [1.5, 0]],\n"im": [[1.0, 0.0], [0.0, 1.0]]}', "non-integer", 2),
    ('{"g": 2,\n"re2": [[0, 1], [2, 0]],\n"im": [[1.0, 0.0], [0.0, 1.0]]}', "'re2' is not symmetric", 2),
    ('{"g": 2,\n"re2": [[0, 1], [1, 0]],\n"im": [[1.0, 2.0], [2.0, 1.0]]}', "positive definite", 3),
    ('{"g": 0, "re2": [], "im": []}', "positive integer", 1),
    ('{"g": 1,\n"re2": [[0]],\n"im": [[1.0]],,}', "malformed JSON", 3),
    ('[1, 2]', "top level", 1),
])
def test_parse_diagnostics(text, needle, line):
    with pytest.raises(PeriodFileError) as info:
        periodfile.parse(text)
    assert needle in str(info.value)
    assert info.value.line == line


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_round_trip_is_bit_exact(g, seed):
    rng = np.random.default_rng(seed)
    tau = random_real_tau(RealType(g, 2 * (g // 2), 1), rng)
    pm = periodfile.from_riemann(tau, label="random")
    back = periodfile.parse(periodfile.dumps(pm))
    assert back.re2 == pm.re2 and back.label == "random"
    assert back.im.tobytes() == np.asarray(tau.im).tobytes()


def test_write_and_read(tmp_path):
    pm = periodfile.from_riemann(RiemannMatrix.real(RealType(2, 2, 1), np.eye(2) * 0.1 + 0.2))
    p = tmp_path / "x.json"
    periodfile.write(p, pm)
    assert periodfile.read(p).im.tobytes() == pm.im.tobytes()
