"""Command-line interface: ``realtheta {classify,theta,sets,verify}``.

Exit codes: 0 success or decided, 1 input or numerical error, 2 undecided
classification.  Human output goes to stdout, diagnostics to stderr.  With
``--json`` stdout carries one JSON document with a ``schema`` field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import characteristics as chars
from . import classify as cls
from . import intmat, periodfile
from .errors import RealThetaError
from .intmat import RealType
from .theta import EvalConfig, theta
from .verify import run_suite

ENV_TOL = "REALTHETA_TOL"
DEFAULT_SEED = 0

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(int(x)) for x in v) + ")"


def _emit_json(kind: str, payload: dict) -> None:
    doc = {"schema": f"realtheta.{kind}/1", **payload}
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def _default_tol() -> float:
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return EvalConfig().tol
    try:
        return float(raw)
    except ValueError:
        raise RealThetaError(f"{ENV_TOL}={raw!r} is not a number") from None


def _config(args) -> EvalConfig:
    tol = args.tol if args.tol is not None else _default_tol()
    return EvalConfig(tol=tol)


def _int_vector(text: str, g: int, name: str) -> list:
    try:
        v = [int(x) for x in text.split(",")]
    except ValueError:
        raise RealThetaError(f"--{name}: expected comma-separated integers, got {text!r}") from None
    if len(v) != g:
        raise RealThetaError(f"--{name}: expected {g} entries, got {len(v)}")
    return v


def _complex_vector(text: str, g: int) -> np.ndarray:
    try:
        v = [complex(x.replace(" ", "")) for x in text.split(",")]
    except ValueError:
        raise RealThetaError(f"--z: cannot parse {text!r} as complex numbers") from None
    if len(v) != g:
        raise RealThetaError(f"--z: expected {g} entries, got {len(v)}")
    return np.array(v, dtype=complex)


# --- commands ------------------------------------------------------------------

def cmd_classify(args) -> int:
    pm = periodfile.read(args.file)
    cfg = _config(args)
    report = cls.classify(pm.riemann_matrix(), cfg, args.tol_classify, all_families=args.all)
    if args.json:
        payload = report.to_dict()
        payload["label"] = pm.label
        _emit_json("classify", payload)
    else:
        out = sys.stdout
        if report.witness_beta is not None:
            g = report.input_type.g
            out.write(f"{report.decision} (witness theta[{_fmt_vec([0] * g)};"
                      f"{_fmt_vec(report.witness_beta)}] = {report.witness_value:.12g}"
                      f" +/- {report.witness_error:.1e})\n")
        else:
            out.write(f"{report.decision} ({report.reason})\n")
        out.write(f"  real type: {report.input_type}  critical: {report.critical}\n")
        tops = ", ".join(f"({tt.g},{tt.k},{tt.delta})" for tt in report.topological_types)
        out.write(f"  topological types compatible with the type: {tops}\n")
        out.write(f"  reason: {report.reason}\n")
        if report.consistency is not None:
            c = report.consistency["counts"]
            out.write(f"  family O consistency: {report.consistency['status']} "
                      f"(negative={c['negative']} positive={c['positive']} near-zero={c['near-zero']})\n")
        for kind, fam in report.families.items():
            for beta, (v, e) in fam.entries.items():
                out.write(f"  {kind} {_fmt_vec(beta)}: {v:.15g} +/- {e:.1e}\n")
        out.write(f"  theta evaluations: {report.theta_evaluations}  tol={report.tol:g}"
                  f"  tol_classify={report.tol_classify:g}\n")
    if report.decision == cls.INDETERMINATE:
        print(f"undecided: {report.reason}", file=sys.stderr)
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_theta(args) -> int:
    pm = periodfile.read(args.file)
    g = pm.g
    z = _complex_vector(args.z, g) if args.z else np.zeros(g, dtype=complex)
    alpha = _int_vector(args.alpha, g, "alpha") if args.alpha else [0] * g
    beta = _int_vector(args.beta, g, "beta") if args.beta else [0] * g
    v = theta(z, pm.riemann_matrix(), chars.ThetaCharacteristic(alpha, beta), _config(args))
    value = complex(v.value)
    if args.json:
        _emit_json("theta", {"value": [value.real, value.imag], "abs_error": v.abs_error,
                             "terms_used": v.terms_used, "radius": v.radius,
                             "alpha": alpha, "beta": beta, "z": [[c.real, c.imag] for c in z]})
    else:
        print(f"value: {value.real:.16g} {'+' if value.imag >= 0 else '-'} {abs(value.imag):.16g}i")
        print(f"abs_error: {v.abs_error:.3e}")
        print(f"terms_used: {v.terms_used}")
    return EXIT_OK


_SETS = {"O": chars.enumerate_O, "E": chars.enumerate_E, "T": chars.enumerate_T, "B": chars.enumerate_B}


def cmd_sets(args) -> int:
    t = intmat.check_real_type(RealType(args.g, args.lam, args.eps))
    members = sorted(_SETS[args.set](t))
    if args.json:
        _emit_json("sets", {"type": list(t), "set": args.set,
                            "members": [list(b) for b in members], "cardinality": len(members)})
    else:
        for b in members:
            print(_fmt_vec(b))
        print(f"cardinality: {len(members)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    t = intmat.check_real_type(RealType(args.g, args.lam, 1))
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    results = run_suite(t, args.trials, seed, _config(args))
    ok = all(r.passed for r in results)
    if args.json:
        _emit_json("verify", {"type": list(t), "trials": args.trials, "seed": seed,
                              "passed": ok, "properties": [r.to_dict() for r in results]})
    else:
        print(f"type {t}  trials={args.trials}  seed={seed}")
        for r in results:
            print(r.line())
    return EXIT_OK if ok else EXIT_ERROR


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"truncation tolerance (default 1e-12, or ${ENV_TOL})")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="realtheta", description="Real theta constants and real points.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="decide whether a real period matrix has real points")
    c.add_argument("file")
    c.add_argument("--tol-classify", type=float, default=cls.DEFAULT_TOL_CLASSIFY)
    c.add_argument("--all", action="store_true", help="evaluate the full families")
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("theta", parents=[common], help="evaluate a theta function")
    t.add_argument("--file", required=True)
    t.add_argument("--z", help="comma-separated complex entries, e.g. 0.1+0.2j,0")
    t.add_argument("--alpha", help="comma-separated integers")
    t.add_argument("--beta", help="comma-separated integers")
    t.set_defaults(func=cmd_theta)

    s = sub.add_parser("sets", parents=[common], help="list a characteristic set")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=int, required=True)
    s.add_argument("--eps", type=int, required=True, choices=(0, 1))
    s.add_argument("--set", default="O", choices=sorted(_SETS))
    s.set_defaults(func=cmd_sets)

    v = sub.add_parser("verify", parents=[common], help="run the property suites for one type")
    v.add_argument("--g", type=int, required=True)
    v.add_argument("--lambda", dest="lam", type=int, required=True)
    v.add_argument("--trials", type=int, default=20)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RealThetaError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except RuntimeError as exc:
        seed = getattr(exc, "seed", None)
        extra = f" (seed {seed})" if seed is not None else ""
        print(f"error: {exc}{extra}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
