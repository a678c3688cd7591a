"""Seeded property suites: the structural identities checked numerically end to end.

Every check returns a :class:`PropertyResult` carrying the worst residual seen;
the CLI ``verify`` command and the acceptance tests both drive these.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import characteristics as chars
from . import intmat
from .classify import (family_E, family_O, sign_translation_check, verify_positivity)
from .intmat import RealType
from .siegel import (RiemannMatrix, apply_modular, random_real_modular, random_real_tau)
from .theta import EvalConfig, aux_T, theta


@dataclass
class PropertyResult:
    name: str
    passed: bool
    trials: int
    worst: float = 0.0
    threshold: float = 0.0
    failures: int = 0
    skipped: Optional[str] = None
    detail: str = ""

    def line(self) -> str:
        if self.skipped:
            return f"SKIP  {self.name}: skipped: {self.skipped}"
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name}: trials={self.trials} failures={self.failures} "
                f"worst={self.worst:.3e} threshold={self.threshold:.1e}"
                + (f" {self.detail}" if self.detail else ""))

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "trials": self.trials,
                "worst": self.worst, "threshold": self.threshold,
                "failures": self.failures, "skipped": self.skipped, "detail": self.detail}


class _Tracker:
    def __init__(self, name: str, threshold: float):
        self.r = PropertyResult(name, True, 0, 0.0, threshold)

    def add(self, residual: float, ok: Optional[bool] = None) -> None:
        self.r.trials += 1
        residual = float(residual)
        if not math.isfinite(residual):
            residual = math.inf
        self.r.worst = max(self.r.worst, residual)
        if ok is None:
            ok = residual < self.r.threshold
        if not ok:
            self.r.failures += 1
            self.r.passed = False

    def done(self) -> PropertyResult:
        return self.r


# --- samplers ----------------------------------------------------------------

def random_general_tau(g: int, rng: np.random.Generator, delta: float = 0.1) -> RiemannMatrix:
    """Generic Riemann matrix: symmetric real part in [-1, 1], Im = Q^T Q + delta Id."""
    re = rng.uniform(-1.0, 1.0, size=(g, g))
    re = np.triu(re) + np.triu(re, 1).T
    q = rng.uniform(-1.0, 1.0, size=(g, g))
    im = q.T @ q + delta * np.eye(g)
    return RiemannMatrix(im=0.5 * (im + im.T), re=re)


def ill_conditioned_tau(t: RealType, rng: np.random.Generator, smallest: float = 0.05) -> RiemannMatrix:
    """Real tau whose imaginary part has smallest eigenvalue exactly ``smallest``."""
    g = t.g
    basis, _ = np.linalg.qr(rng.normal(size=(g, g)))
    eig = rng.uniform(smallest, 2.0, size=g)
    eig[rng.integers(g)] = smallest
    im = basis @ np.diag(eig) @ basis.T
    return RiemannMatrix.real(t, 0.5 * (im + im.T))


def random_element(t: RealType, rng: np.random.Generator, max_budget: int = 5):
    return random_real_modular(t, int(rng.integers(2**31)), int(rng.integers(1, max_budget + 1)))


def orthosymmetric_types(g_max: int, g_min: int = 1, positive_lambda: bool = False) -> list:
    return [t for g in range(g_min, g_max + 1) for t in intmat.admissible_real_types(g)
            if t.eps == 1 and (t.lam > 0 or not positive_lambda)]


# --- properties --------------------------------------------------------------

def check_quasi_periodicity(g: int, trials: int, rng: np.random.Generator,
                            cfg: Optional[EvalConfig] = None, threshold: float = 1e-9,
                            tau_factory: Optional[Callable] = None) -> PropertyResult:
    """``Theta(z + tau l + mu) = exp(-2 pi i l.z - pi i l.tau.l) Theta(z)``, l, mu in [-3, 3]^g."""
    tr = _Tracker(f"quasi-periodicity g={g}", threshold)
    for _ in range(trials):
        tau = tau_factory(rng) if tau_factory else random_general_tau(g, rng)
        z = rng.uniform(-1, 1, g) + 1j * rng.uniform(-1, 1, g)
        lam = rng.integers(-3, 4, size=g)
        mu = rng.integers(-3, 4, size=g)
        t = tau.tau
        lhs = theta(z + t @ lam + mu, tau, None, cfg)
        rhs = theta(z, tau, None, cfg)
        log_f = -2j * math.pi * (lam @ z) - 1j * math.pi * (lam @ t @ lam)
        # compare after dividing by the lhs Gaussian prefactor
        pred = cmath.exp(log_f - lhs.log_scale) * rhs.value
        tr.add(abs(lhs.normalized - pred))
    return tr.done()


def check_conjugation(t: RealType, trials: int, rng: np.random.Generator,
                      cfg: Optional[EvalConfig] = None, threshold: float = 1e-9) -> PropertyResult:
    """``conj(Theta(z, tau)) = Theta(conj(z), tau)`` on orthosymmetric real Siegel spaces."""
    tr = _Tracker(f"conjugation symmetry {t}", threshold)
    for _ in range(trials):
        tau = random_real_tau(t, rng)
        z = rng.uniform(-1, 1, t.g) + 1j * rng.uniform(-0.5, 0.5, t.g)
        a = theta(z, tau, None, cfg)
        b = theta(np.conj(z), tau, None, cfg)
        tr.add(abs(np.conj(a.value) - b.value) / max(a.scale, b.scale))
    return tr.done()


def check_transport(t: RealType, trials: int, rng: np.random.Generator,
                    cfg: Optional[EvalConfig] = None, threshold: float = 1e-9,
                    with_z: bool = True) -> PropertyResult:
    """``Theta[0; A(G, beta)](A z, M(G, tau)) = Theta[0; beta](z, tau)`` for G in the real group."""
    tr = _Tracker(f"theta-constant transport {t}", threshold)
    for _ in range(trials):
        gm = random_element(t, rng)
        tau = random_real_tau(t, rng)
        tau2 = apply_modular(gm, tau)
        beta = tuple(int(x) for x in rng.integers(-2, 3, size=t.g))
        beta2 = chars.act_reduced(gm, beta)
        c1 = chars.ThetaCharacteristic.zero_alpha(beta)
        c2 = chars.ThetaCharacteristic.zero_alpha(beta2)
        zero = np.zeros(t.g)
        v1 = theta(zero, tau, c1, cfg)
        v2 = theta(zero, tau2, c2, cfg)
        res = abs(v1.value - v2.value) / max(v1.scale, v2.scale)
        if with_z:
            z = rng.uniform(-1, 1, t.g) + 1j * rng.uniform(-0.3, 0.3, t.g)
            az = np.array(gm.a, dtype=float) @ z
            w1 = theta(z, tau, c1, cfg)
            w2 = theta(az, tau2, c2, cfg)
            res = max(res, abs(w1.value - w2.value) / max(w1.scale, w2.scale))
        tr.add(res)
    return tr.done()


def check_set_invariance(t: RealType, trials: int, rng: np.random.Generator) -> PropertyResult:
    """The reduced characteristic action permutes the O-set and the E-set (exact)."""
    tr = _Tracker(f"O/E set invariance {t}", 0.5)
    o = set(chars.enumerate_O(t))
    e = set(chars.enumerate_E(t))
    for _ in range(trials):
        gm = random_element(t, rng, max_budget=8)
        img_o = {chars.act_reduced(gm, b) for b in o}
        img_e = {chars.act_reduced(gm, b) for b in e}
        ok = img_o == o and img_e == e
        tr.add(0.0 if ok else 1.0, ok)
    return tr.done()


def check_family_invariance(t: RealType, trials: int, rng: np.random.Generator,
                            cfg: Optional[EvalConfig] = None, threshold: float = 1e-9) -> PropertyResult:
    """Families O and E of ``M(G, tau)`` are those of ``tau`` permuted by the reduced action."""
    tr = _Tracker(f"family invariance {t}", threshold)
    for _ in range(trials):
        gm = random_element(t, rng)
        tau = random_real_tau(t, rng)
        tau2 = apply_modular(gm, tau)
        worst, ok = 0.0, True
        for fam_fn in (family_O, family_E):
            f1, f2 = fam_fn(tau, cfg), fam_fn(tau2, cfg)
            perm = {b: chars.act_reduced(gm, b) for b in f1.entries}
            if sorted(perm.values()) != sorted(f2.entries):
                ok = False
                continue
            for b, b2 in perm.items():
                worst = max(worst, abs(f1.entries[b][0] - f2.entries[b2][0]))
            v1, v2 = sorted(f1.values()), sorted(f2.values())
            worst = max(worst, max((abs(x - y) for x, y in zip(v1, v2)), default=0.0))
        tr.add(worst, ok and worst < threshold)
    return tr.done()


def check_positivity(t: RealType, trials: int, rng: np.random.Generator,
                     cfg: Optional[EvalConfig] = None, ill_conditioned_every: int = 2) -> PropertyResult:
    """B-set sum of ``Theta(beta/2, tau)`` is positive and exceeds its error bound."""
    tr = _Tracker(f"B-sum positivity {t}", 0.0)
    if t.lam == 0:
        tr.r.skipped = "λ=0"
        return tr.done()
    smallest, ratio = math.inf, math.inf
    for k in range(trials):
        if ill_conditioned_every and k % ill_conditioned_every == 1:
            tau = ill_conditioned_tau(t, rng)
        else:
            tau = random_real_tau(t, rng)
        v = verify_positivity(tau, cfg)
        smallest = min(smallest, float(v.value))
        ratio = min(ratio, float(v.value) / v.abs_error if v.abs_error > 0 else math.inf)
        tr.r.trials += 1
        if not float(v.value) > v.abs_error:
            tr.r.failures += 1
            tr.r.passed = False
    tr.r.detail = f"min_sum={smallest:.6g} min_sum/abs_error={ratio:.3g}"
    return tr.done()


def check_counting_bound(lam0: int, m_range: int = 3) -> PropertyResult:
    """N^-(m) <= (3^lam0 - 1)/2 and sum of symbols > 0 for all m in [-r, r]^lambda."""
    t = RealType(2 * lam0, 2 * lam0, 1)
    bound = (3 ** lam0 - 1) // 2
    betas = np.array(chars.enumerate_B(t), dtype=np.int64)
    tr = _Tracker(f"counting bound λ0={lam0}", 0.5)
    ms = np.array(list(itertools.product(range(-m_range, m_range + 1), repeat=t.lam)), dtype=np.int64)
    for chunk in np.array_split(ms, max(1, len(ms) // 20000)):
        table = chars.sign_symbol_table(chunk, betas, t)
        neg = (table == -1).sum(axis=1)
        for n in neg:
            tr.r.trials += 1
            tr.r.worst = max(tr.r.worst, float(n))
            if n > bound or 3 ** lam0 - 2 * n <= 0:
                tr.r.failures += 1
                tr.r.passed = False
    tr.r.threshold = float(bound)
    return tr.done()


def check_sign_translation(t: RealType, trials: int, rng: np.random.Generator,
                           cfg: Optional[EvalConfig] = None) -> PropertyResult:
    """Sign relation between ``Theta(tau(-M beta) + beta/2)`` and ``Theta(beta/2)``."""
    tr = _Tracker(f"sign translation {t}", 0.5)
    betas = chars.enumerate_O(t) + chars.enumerate_E(t)
    unresolved = 0
    for _ in range(trials):
        tau = random_real_tau(t, rng)
        for b in betas:
            chk = sign_translation_check(tau, b, cfg)
            unresolved += not chk.resolved
            tr.add(0.0 if chk.consistent else 1.0, chk.consistent)
    tr.r.detail = f"unresolved={unresolved}"
    return tr.done()


def check_aux_flip(t: RealType, trials: int, rng: np.random.Generator,
                   cfg: Optional[EvalConfig] = None, threshold: float = 1e-9) -> PropertyResult:
    """``T(x + e_s) = -T(x)`` whenever ``q.s = 1``."""
    tr = _Tracker(f"aux_T sign flip {t}", threshold)
    k = t.g - t.lam
    if k == 0:
        tr.r.skipped = "λ=g"
        return tr.done()
    nonzero = [q for q in itertools.product((0, 1), repeat=k) if any(q)]
    for _ in range(trials):
        tau = random_real_tau(t, rng)
        q = nonzero[rng.integers(len(nonzero))]
        s_choices = [s for s in itertools.product((0, 1), repeat=k)
                     if sum(a * b for a, b in zip(q, s)) == 1]
        s = s_choices[rng.integers(len(s_choices))]
        e_s = np.array((0,) * t.lam + s, dtype=float)
        x = rng.uniform(-1, 1, t.g)
        a = aux_T(x, tau, q, cfg)
        b = aux_T(x + e_s, tau, q, cfg)
        tr.add(abs(a.value + b.value) / max(a.scale, b.scale))
    return tr.done()


def run_suite(t: RealType, trials: int, seed: int, cfg: Optional[EvalConfig] = None) -> list:
    """All property checks for one orthosymmetric type, deterministic in ``seed``."""
    t = intmat.check_real_type(t)
    rng = np.random.default_rng(seed)
    factory = lambda r: random_real_tau(t, r)  # noqa: E731
    results = [
        check_quasi_periodicity(t.g, trials, rng, cfg, tau_factory=factory),
        check_conjugation(t, trials, rng, cfg),
        check_transport(t, trials, rng, cfg),
        check_set_invariance(t, trials, rng),
        check_family_invariance(t, trials, rng, cfg),
        check_positivity(t, trials, rng, cfg),
        check_sign_translation(t, max(1, trials // 5), rng, cfg),
        check_aux_flip(t, trials, rng, cfg),
    ]
    return results
