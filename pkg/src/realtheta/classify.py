"""Invariant families of real theta constants and the real-points criterion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import characteristics as chars
from . import intmat
from .errors import (CriterionNotApplicable, DiasymmetricInput, NonIntegralDoubledRealPart,
                     NotInSiegel, NotStandardForm, PreconditionViolated)
from .intmat import RealType, SymIntMatrix
from .siegel import RiemannMatrix, require_riemann, validate_real_siegel
from .theta import EvalConfig, ThetaValue, real_theta_constant, theta

HAS_REAL_POINTS = "HasRealPoints"
NO_REAL_POINTS = "NoRealPoints"
INDETERMINATE = "Indeterminate"

CONSISTENT = "consistent"
INCONSISTENT = "NotAJacobianOrNumericalIssue"

DEFAULT_TOL_CLASSIFY = 1e-8


@dataclass(frozen=True)
class IndexedFamily:
    """Theta constants indexed by characteristic classes, in lexicographic order."""

    kind: str
    t: RealType
    entries: dict

    def values(self) -> list:
        return [v for v, _ in self.entries.values()]

    def __len__(self):
        return len(self.entries)


def _standard_real_tau(tau: RiemannMatrix) -> RealType:
    require_riemann(tau)
    if tau.re2 is None:
        raise NotInSiegel("a real Riemann matrix needs an exact doubled real part")
    t = tau.real_type()
    if t.eps != 1:
        raise DiasymmetricInput(f"families O/E are defined here for orthosymmetric types, got {t}")
    if not validate_real_siegel(tau, t):
        raise NotStandardForm(f"2 Re(tau) is not the standard form of type {t}")
    return t


def _family(kind: str, tau: RiemannMatrix, cfg: Optional[EvalConfig]) -> IndexedFamily:
    t = _standard_real_tau(tau)
    index = chars.enumerate_O(t) if kind == "O" else chars.enumerate_E(t)
    entries = {}
    for beta in index:
        v = real_theta_constant(tau, beta, cfg)
        entries[beta] = (float(v.value), v.abs_error)
    return IndexedFamily(kind=kind, t=t, entries=entries)


def family_O(tau: RiemannMatrix, cfg: Optional[EvalConfig] = None) -> IndexedFamily:
    return _family("O", tau, cfg)


def family_E(tau: RiemannMatrix, cfg: Optional[EvalConfig] = None) -> IndexedFamily:
    return _family("E", tau, cfg)


def verify_positivity(tau: RiemannMatrix, cfg: Optional[EvalConfig] = None) -> ThetaValue:
    """Sum of ``Theta(beta/2, tau)`` over the B-set; positive for every real tau of the type."""
    t = _standard_real_tau(tau)
    if t.lam == 0:
        raise PreconditionViolated("the B-set sum needs lambda > 0")
    total, err, terms = [], 0.0, 0
    for beta in chars.enumerate_B(t):
        v = real_theta_constant(tau, beta, cfg)
        total.append(float(v.value))
        err += v.abs_error
        terms += v.terms_used
    return ThetaValue(value=math.fsum(total), abs_error=err, terms_used=terms)


@dataclass(frozen=True)
class SignCheck:
    sign_lhs: int
    sign_rhs: int
    expected_relation: int
    consistent: bool
    resolved: bool
    lhs: ThetaValue
    rhs: ThetaValue


def _sgn(x: float) -> int:
    return (x > 0) - (x < 0)


def sign_translation_check(tau: RiemannMatrix, beta: Sequence[int],
                           cfg: Optional[EvalConfig] = None, margin: float = 10.0) -> SignCheck:
    """Compare signs of ``Theta(tau(-M beta) + beta/2)`` and ``Theta(beta/2)``.

    They agree iff ``beta^T M beta = 0 mod 4`` and are opposite iff it is 2
    mod 4.  ``resolved`` is False when either value is within ``margin``
    times its error bound of zero; ``consistent`` is then vacuously True.
    """
    t = _standard_real_tau(tau)
    marr = intmat.standard_form(t).array
    b = np.array([int(x) for x in beta], dtype=object)
    mb = marr @ b
    if not (marr @ mb == b).all():
        raise PreconditionViolated("M (M beta) != beta")
    qf = int(b @ mb)
    relation = 1 if qf % 4 == 0 else -1
    half_beta = np.array([float(x) for x in b]) / 2.0
    z_lhs = tau.tau @ (-np.array([float(x) for x in mb])) + half_beta
    lhs = theta(z_lhs, tau, None, cfg)
    rhs = theta(half_beta, tau, None, cfg)
    lv, rv = float(np.real(lhs.value)), float(np.real(rhs.value))
    resolved = abs(lv) > margin * lhs.abs_error and abs(rv) > margin * rhs.abs_error
    s_l, s_r = _sgn(lv), _sgn(rv)
    consistent = (not resolved) or s_l == relation * s_r
    return SignCheck(s_l, s_r, relation, consistent, resolved, lhs, rhs)


@dataclass
class ClassificationReport:
    input_type: RealType
    critical: bool
    decision: str
    reason: str
    topological_types: list = field(default_factory=list)
    witness_beta: Optional[tuple] = None
    witness_value: Optional[float] = None
    witness_error: Optional[float] = None
    consistency: Optional[dict] = None
    theta_evaluations: int = 0
    tol: float = 0.0
    tol_classify: float = DEFAULT_TOL_CLASSIFY
    families: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        fam = {k: [{"beta": list(b), "value": v, "abs_error": e}
                   for b, (v, e) in f.entries.items()] for k, f in self.families.items()}
        return {
            "input_type": list(self.input_type),
            "critical": self.critical,
            "decision": self.decision,
            "reason": self.reason,
            "topological_types": [list(tt) for tt in self.topological_types],
            "witness_beta": list(self.witness_beta) if self.witness_beta is not None else None,
            "witness_value": self.witness_value,
            "witness_error": self.witness_error,
            "consistency": self.consistency,
            "theta_evaluations": self.theta_evaluations,
            "tolerances": {"tol": self.tol, "tol_classify": self.tol_classify},
            "families": fam,
        }


def _sign_category(v: float, tol_classify: float) -> str:
    if v < -tol_classify:
        return "negative"
    if v > tol_classify:
        return "positive"
    return "near-zero"


def family_consistency(fam: IndexedFamily, tol_classify: float) -> dict:
    """All entries negative, or all nonnegative (near-zero counts as nonnegative)."""
    cats = {b: _sign_category(v, tol_classify) for b, (v, _) in fam.entries.items()}
    counts = {c: sum(1 for x in cats.values() if x == c)
              for c in ("negative", "positive", "near-zero")}
    ok = counts["negative"] in (0, len(cats))
    return {"status": CONSISTENT if ok else INCONSISTENT, "counts": counts,
            "signs": {"".join(map(str, b)): c for b, c in cats.items()}}


def _doubled_real_part(tau: RiemannMatrix) -> SymIntMatrix:
    if tau.re2 is not None:
        return tau.re2
    re2 = 2.0 * np.asarray(tau.re)
    rounded = np.round(re2)
    if np.max(np.abs(re2 - rounded), initial=0.0) > 1e-12:
        raise NonIntegralDoubledRealPart("2 Re(tau) is not an integral matrix")
    return SymIntMatrix(rounded.astype(np.int64).tolist())


def classify(tau_or_m: Union[RiemannMatrix, SymIntMatrix, Sequence], cfg: Optional[EvalConfig] = None,
             tol_classify: float = DEFAULT_TOL_CLASSIFY, all_families: bool = False) -> ClassificationReport:
    """Decide whether a real Riemann surface has real points.

    Accepts either a reflection matrix alone (enough outside the critical
    type) or a real period matrix.  The result is conditional on the input
    being the period matrix of a curve; that is never checked.
    """
    cfg = cfg or EvalConfig()
    if isinstance(tau_or_m, RiemannMatrix):
        tau = tau_or_m
        require_riemann(tau)
        re2 = _doubled_real_part(tau)
        if tau.re2 is None:
            tau = RiemannMatrix(im=tau.im, re2=re2)
    else:
        tau, re2 = None, SymIntMatrix.coerce(tau_or_m)
    t = intmat.real_type_of(re2)
    report = ClassificationReport(input_type=t, critical=t.critical, decision=INDETERMINATE,
                                  reason="", tol=cfg.tol, tol_classify=tol_classify)

    if not t.critical:
        report.decision = HAS_REAL_POINTS
        report.topological_types = intmat.real_to_topological_candidates(t)
        report.reason = f"non-critical type {t}"
        if all_families and tau is not None and t.eps == 1 and validate_real_siegel(tau, t):
            _attach_families(report, tau, cfg, tol_classify, with_E=True)
        return report

    report.topological_types = intmat.real_to_topological_candidates(t)
    if t.g < 2:
        raise CriterionNotApplicable("the theta-constant criterion needs genus g >= 2")
    if tau is None:
        raise CriterionNotApplicable(
            f"critical type {t}: a real period matrix (re2 and im) is required")
    if not validate_real_siegel(tau, t):
        raise NotStandardForm(
            f"critical type {t} but 2 Re(tau) is not the standard form; "
            "supply a period matrix in a real basis of cycles")

    beta = chars.enumerate_O(t)[0]
    w = real_theta_constant(tau, beta, cfg)
    report.theta_evaluations = 1
    report.witness_beta = beta
    report.witness_value = float(w.value)
    report.witness_error = w.abs_error
    if w.value < -tol_classify:
        report.decision = HAS_REAL_POINTS
        report.reason = "witness theta constant is negative"
    elif w.value > tol_classify:
        report.decision = NO_REAL_POINTS
        report.reason = "witness theta constant is positive"
    else:
        report.decision = INDETERMINATE
        report.reason = (f"|witness| <= tol_classify={tol_classify:g}: a vanishing theta "
                         "constant is allowed without real points, so the sign cannot be resolved")
    _attach_families(report, tau, cfg, tol_classify, with_E=all_families)
    return report


def _attach_families(report: ClassificationReport, tau: RiemannMatrix, cfg: EvalConfig,
                     tol_classify: float, with_E: bool = False) -> None:
    fam = family_O(tau, cfg)
    report.families["O"] = fam
    report.theta_evaluations += len(fam)
    report.consistency = family_consistency(fam, tol_classify)
    if with_E:
        fam_e = family_E(tau, cfg)
        report.families["E"] = fam_e
        report.theta_evaluations += len(fam_e)
