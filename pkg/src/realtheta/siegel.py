"""Riemann matrices, real Siegel upper-half spaces and the real modular group.

Real parts of (semi-)real Riemann matrices are carried exactly as the integer
matrix ``re2 = 2 Re(tau)``; only the imaginary part is floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import intmat
from .errors import (CongruenceViolated, DimensionMismatch, NotInSiegel, NotSymmetric,
                     NotSymplectic, NotUnimodular, SamplingExhausted, TypeMismatch)
from .intmat import RealType, SymIntMatrix

DEFAULT_TOL = 1e-12
RETRY_CAP = 1000


@dataclass(frozen=True, eq=False)
class RiemannMatrix:
    """Complex symmetric ``g x g`` matrix ``tau = Re + i Im``.

    Exactly one of ``re2`` (integer matrix equal to ``2 Re(tau)``) or ``re``
    (floating real part) is set.  Construction does not validate positive
    definiteness; see :func:`validate_riemann`.
    """

    im: np.ndarray
    re2: Optional[SymIntMatrix] = None
    re: Optional[np.ndarray] = None

    def __post_init__(self):
        im = np.array(self.im, dtype=float)
        if im.ndim != 2 or im.shape[0] != im.shape[1]:
            raise DimensionMismatch(f"imaginary part must be square, got {im.shape}")
        im.setflags(write=False)
        object.__setattr__(self, "im", im)
        if (self.re2 is None) == (self.re is None):
            if self.re2 is None and self.re is None:
                object.__setattr__(self, "re2", SymIntMatrix(intmat.int_zeros(im.shape[0])))
            else:
                raise ValueError("give either re2 or re, not both")
        if self.re2 is not None:
            re2 = SymIntMatrix.coerce(self.re2)
            object.__setattr__(self, "re2", re2)
            n = re2.g
        else:
            re = np.array(self.re, dtype=float)
            re.setflags(write=False)
            object.__setattr__(self, "re", re)
            n = re.shape[0] if re.ndim == 2 and re.shape[0] == re.shape[1] else -1
        if n != im.shape[0]:
            raise DimensionMismatch("real and imaginary parts have different shapes")

    @classmethod
    def real(cls, t: RealType, im) -> "RiemannMatrix":
        """``tau = M/2 + i*im`` with ``M`` the standard form of ``t``."""
        return cls(im=im, re2=intmat.standard_form(t))

    @property
    def g(self) -> int:
        return self.im.shape[0]

    @property
    def real_part(self) -> np.ndarray:
        if self.re2 is not None:
            return np.array(self.re2.entries, dtype=float) / 2.0
        return np.array(self.re)

    @property
    def tau(self) -> np.ndarray:
        return self.real_part + 1j * self.im

    @property
    def semi_real(self) -> bool:
        return self.re2 is not None

    def real_type(self) -> RealType:
        if self.re2 is None:
            raise NotInSiegel("real type needs an exact doubled real part")
        return intmat.real_type_of(self.re2)


def validate_riemann(tau: RiemannMatrix, tol: float = DEFAULT_TOL) -> bool:
    """Symmetry within ``tol`` and a Cholesky factorization of Im with pivots > tol.

    The pivot threshold is relative to the largest diagonal entry of Im.
    """
    im = tau.im
    if tau.re is not None and tau.re.shape != im.shape:
        raise DimensionMismatch("real and imaginary parts have different shapes")
    if not np.all(np.isfinite(im)):
        return False
    if np.max(np.abs(im - im.T), initial=0.0) > tol:
        return False
    if tau.re is not None and np.max(np.abs(tau.re - tau.re.T), initial=0.0) > tol:
        return False
    return _cholesky_pivots_ok(im, tol)


def _cholesky_pivots_ok(im: np.ndarray, tol: float) -> bool:
    a = 0.5 * (im + im.T)
    g = a.shape[0]
    scale = max(float(np.max(np.diag(a))), 0.0)
    if scale <= 0.0:
        return False
    thresh = tol * scale
    low = np.zeros_like(a)
    for j in range(g):
        d = a[j, j] - low[j, :j] @ low[j, :j]
        if not d > thresh:
            return False
        low[j, j] = np.sqrt(d)
        for i in range(j + 1, g):
            low[i, j] = (a[i, j] - low[i, :j] @ low[j, :j]) / low[j, j]
    return True


def validate_real_siegel(tau: RiemannMatrix, t) -> bool:
    """True iff ``2 Re(tau)`` equals the standard form of ``t`` exactly."""
    t = intmat.check_real_type(t)
    if tau.re2 is None:
        re2 = 2.0 * np.asarray(tau.re)
        if not np.array_equal(re2, np.round(re2)):
            return False
        return np.array_equal(re2, np.array(intmat.standard_form(t).entries, dtype=float))
    return tau.re2 == intmat.standard_form(t)


def require_riemann(tau: RiemannMatrix, tol: float = DEFAULT_TOL) -> None:
    if not validate_riemann(tau, tol):
        raise NotInSiegel("matrix is not symmetric with positive definite imaginary part")


@dataclass(frozen=True, eq=False)
class RealModularElement:
    """Element of the real modular group, encoded by its upper-left block ``a``.

    ``b = (M - a M a^T)(a^T)^{-1} / 2`` is integral and cached.
    """

    a: np.ndarray
    m: SymIntMatrix
    b: np.ndarray = field(repr=False)

    @property
    def g(self) -> int:
        return self.m.g

    @property
    def t(self) -> RealType:
        return intmat.real_type_of(self.m)

    @property
    def half_defect(self) -> np.ndarray:
        """``(M - a M a^T)/2`` which equals ``b a^T``."""
        return self.b @ self.a.T

    def block(self) -> np.ndarray:
        """The ``2g x 2g`` symplectic matrix ``[[a, b], [0, (a^T)^{-1}]]``."""
        g = self.g
        out = np.empty((2 * g, 2 * g), dtype=object)
        out.fill(0)
        out[:g, :g] = self.a
        out[:g, g:] = self.b
        out[g:, g:] = intmat.inverse_unimodular(self.a.T)
        return out

    def __eq__(self, other):
        if not isinstance(other, RealModularElement):
            return NotImplemented
        return self.m == other.m and intmat.as_tuple(self.a) == intmat.as_tuple(other.a)

    def __hash__(self):
        return hash((self.m, intmat.as_tuple(self.a)))


def _congruent_mod2(x: np.ndarray, y: np.ndarray) -> bool:
    return all(int(u - v) % 2 == 0 for u, v in zip(x.flat, y.flat))


def make_real_modular(a, t) -> RealModularElement:
    t = intmat.check_real_type(t)
    m = intmat.standard_form(t)
    a = intmat.int_matrix(a)
    if a.shape[0] != t.g:
        raise DimensionMismatch(f"a is {a.shape[0]}x{a.shape[0]} but the type has g={t.g}")
    d = intmat.det(a)
    if d not in (1, -1):
        raise NotUnimodular(f"det(a) = {d}, expected ±1")
    marr = m.array
    ama = a @ marr @ a.T
    if not _congruent_mod2(ama, marr):
        raise CongruenceViolated("a M a^T is not congruent to M modulo 2")
    half = (marr - ama) // 2
    b = half @ intmat.inverse_unimodular(a.T)
    a.setflags(write=False)
    b.setflags(write=False)
    return RealModularElement(a=a, m=m, b=b)


def identity_element(t) -> RealModularElement:
    t = intmat.check_real_type(t)
    return make_real_modular(intmat.int_identity(t.g), t)


def compose(g2: RealModularElement, g1: RealModularElement) -> RealModularElement:
    """``g2 ∘ g1`` (block-matrix product ``G2 @ G1``)."""
    if g1.m != g2.m:
        raise TypeMismatch("elements belong to different real modular groups")
    return make_real_modular(g2.a @ g1.a, g1.t)


def apply_modular(gmod: RealModularElement, tau: RiemannMatrix) -> RiemannMatrix:
    """``a tau a^T + b a^T``: exact on the real part, floating on the imaginary part."""
    if tau.re2 is None or tau.re2 != gmod.m:
        raise TypeMismatch("tau is not in the real Siegel space of the element's type")
    a = gmod.a
    re2 = a @ tau.re2.array @ a.T + 2 * gmod.half_defect
    af = np.array(a, dtype=float)
    im = af @ tau.im @ af.T
    return RiemannMatrix(im=0.5 * (im + im.T), re2=SymIntMatrix(re2))


def transform_reflection(a, b, m) -> SymIntMatrix:
    """Reflection matrix after a change of semi-real basis: ``a m a^T + 2 b a^T``."""
    a = intmat.int_matrix(a)
    b = intmat.int_matrix(b)
    m = SymIntMatrix.coerce(m)
    if intmat.det(a) not in (1, -1):
        raise NotUnimodular("det(a) must be ±1")
    if not (a @ b.T == b @ a.T).all():
        raise NotSymmetric("a b^T must equal b a^T")
    return SymIntMatrix(a @ m.array @ a.T + 2 * (b @ a.T))


# --- samplers ----------------------------------------------------------------

def _random_elementary(g: int, rng: np.random.Generator) -> np.ndarray:
    e = intmat.int_identity(g)
    kind = rng.integers(3) if g > 1 else 2
    if kind == 0:
        i, j = rng.choice(g, size=2, replace=False)
        c = int(rng.choice([-2, -1, 1, 2]))
        e[i, j] = c
    elif kind == 1:
        i, j = rng.choice(g, size=2, replace=False)
        e[i, i] = e[j, j] = 0
        e[i, j] = e[j, i] = 1
    else:
        i = int(rng.integers(g))
        e[i, i] = -1
    return e


def random_real_modular(t, seed: int, size_budget: int) -> RealModularElement:
    """Product of ``size_budget`` random elementary factors lying in the group.

    Each factor (transvection with coefficient in ``{-2,...,2}``, coordinate
    swap or sign flip) is drawn until it satisfies the mod-2 congruence; the
    total number of draws is capped at ``RETRY_CAP``.
    """
    t = intmat.check_real_type(t)
    rng = np.random.default_rng(seed)
    marr = intmat.standard_form(t).array
    a = intmat.int_identity(t.g)
    draws = 0
    for _ in range(size_budget):
        while True:
            draws += 1
            if draws > RETRY_CAP:
                raise SamplingExhausted(
                    f"no admissible factor within {RETRY_CAP} draws (type {t}, seed {seed})",
                    cap=RETRY_CAP, seed=seed)
            e = _random_elementary(t.g, rng)
            if _congruent_mod2(e @ marr @ e.T, marr):
                break
        a = e @ a
    return make_real_modular(a, t)


def random_real_tau(t, rng: np.random.Generator, delta: float = 0.1) -> RiemannMatrix:
    """``M/2 + i (Q^T Q + delta Id)`` with ``Q`` uniform in ``[-1, 1]^{g x g}``."""
    t = intmat.check_real_type(t)
    q = rng.uniform(-1.0, 1.0, size=(t.g, t.g))
    im = q.T @ q + delta * np.eye(t.g)
    return RiemannMatrix.real(t, 0.5 * (im + im.T))


def symplectic_form(g: int) -> np.ndarray:
    j = np.zeros((2 * g, 2 * g), dtype=object)
    for i in range(g):
        j[i, g + i] = 1
        j[g + i, i] = -1
    return j


def is_symplectic(G) -> bool:
    G = np.asarray(G, dtype=object)
    n = G.shape[0]
    if n % 2 or G.shape != (n, n):
        return False
    j = symplectic_form(n // 2)
    return bool((G @ j @ G.T == j).all())


def random_symplectic(g: int, rng: np.random.Generator, length: int = 6) -> np.ndarray:
    """Random element of Sp(2g, Z) as a product of standard generators."""
    G = intmat.int_identity(2 * g)
    j = symplectic_form(g)
    for _ in range(length):
        kind = rng.integers(4)
        h = intmat.int_identity(2 * g)
        if kind == 0:
            s = rng.integers(-2, 3, size=(g, g))
            s = np.triu(s) + np.triu(s, 1).T
            h[:g, g:] = s.astype(object)
        elif kind == 1:
            s = rng.integers(-2, 3, size=(g, g))
            s = np.triu(s) + np.triu(s, 1).T
            h[g:, :g] = s.astype(object)
        elif kind == 2:
            a = _random_elementary(g, rng)
            h[:g, :g] = a
            h[g:, g:] = intmat.inverse_unimodular(a.T)
        else:
            h = j.copy()
        G = h @ G
    if not is_symplectic(G):  # pragma: no cover - generators are symplectic
        raise NotSymplectic("generator product left Sp(2g, Z)")
    return G
