import numpy as np

from realtheta.intmat import RealType
from realtheta.verify import PropertyResult, ill_conditioned_tau, orthosymmetric_types, run_suite


def test_ill_conditioned_tau_smallest_eigenvalue():
    tau = ill_conditioned_tau(RealType(3, 2, 1), np.random.default_rng(0))
    assert abs(np.linalg.eigvalsh(tau.im)[0] - 0.05) < 1e-12


def test_orthosymmetric_types():
    assert [str(t) for t in orthosymmetric_types(3, positive_lambda=True)] == ["(2,2,1)", "(3,2,1)"]


def test_run_suite_is_deterministic_and_passes():
    a = [r.to_dict() for r in run_suite(RealType(2, 2, 1), 3, seed=4)]
    b = [r.to_dict() for r in run_suite(RealType(2, 2, 1), 3, seed=4)]
    assert a == b
    assert all(r["passed"] for r in a)


def test_property_result_lines():
    assert PropertyResult("x", True, 1).line().startswith("PASS  x")
    assert PropertyResult("x", False, 1, failures=1).line().startswith("FAIL  x")
    assert PropertyResult("x", True, 0, skipped="λ=g").line() == "SKIP  x: skipped: λ=g"
