"""Error-controlled evaluation of theta functions with integral characteristics.

The lattice sum runs over the points of an ellipsoid centred at the peak of
the Gaussian weight.  For a centred quadratic form ``Q(n) = (n-c)^T T (n-c)``
and any ``0 < s < 1`` the discarded tail satisfies

    sum_{Q(n) > R^2} exp(-pi Q(n))
        <= exp(-pi (1-s) R^2) * prod_k sum_{n_k} exp(-pi s lam_min (n_k - c_k)^2)
        <= exp(-pi (1-s) R^2) * (1 + 1/sqrt(s lam_min))^g

with ``lam_min`` the smallest eigenvalue of ``T``.  The bound is minimised
over a grid of ``s``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import intmat
from .characteristics import ThetaCharacteristic
from .errors import (DimensionMismatch, InvalidQ, NotInSiegel, RadiusCapHit,
                     RealityViolated)
from .siegel import RiemannMatrix, require_riemann, validate_real_siegel

_U = np.finfo(float).eps
_S_GRID = np.concatenate([np.logspace(-6, -1, 41), np.linspace(0.11, 0.99, 45)])


@dataclass(frozen=True)
class EvalConfig:
    tol: float = 1e-12
    max_radius: float = 12.0
    tol_real: float = 1e-9

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not self.max_radius >= 1:
            raise ValueError("max_radius must be at least 1")

    def with_tol(self, tol: float) -> "EvalConfig":
        return replace(self, tol=tol)


@dataclass(frozen=True)
class ThetaValue:
    """A theta value with a certified bound on its absolute error.

    ``scale`` is the Gaussian prefactor ``exp(pi y^T T^{-1} y)`` (``y`` the
    imaginary part of the shifted argument); truncation targets ``tol * scale``.
    """

    value: complex
    abs_error: float
    terms_used: int
    scale: float = 1.0
    radius: float = 0.0
    log_scale: float = 0.0

    @property
    def normalized(self) -> complex:
        """``value / scale`` without overflow."""
        return complex(self.value) / self.scale

    def __complex__(self):
        return complex(self.value)

    def __float__(self):
        return float(np.real(self.value))


def tail_bound(radius: float, lam_min: float, g: int) -> float:
    """Upper bound on the Gaussian lattice-sum tail outside ``Q <= radius**2``."""
    s = _S_GRID
    logs = -math.pi * (1.0 - s) * radius * radius + g * np.log1p(1.0 / np.sqrt(s * lam_min))
    return float(np.exp(np.min(logs)))


def truncation_radius(T, center=None, tol: float = 1e-12, max_radius: float = 12.0) -> float:
    """Smallest radius (to 0.1% by doubling then bisection) whose tail bound is < tol.

    ``center`` is accepted for interface symmetry; the bound is uniform in it.
    """
    T = np.asarray(T, dtype=float)
    g = T.shape[0]
    lam_min = float(np.linalg.eigvalsh(T)[0])
    if not lam_min > 0:
        raise NotInSiegel("matrix is not positive definite")
    if tail_bound(max_radius, lam_min, g) >= tol:
        raise RadiusCapHit(f"tail bound at the radius cap {max_radius} exceeds {tol:g}",
                           radius=max_radius, bound=tail_bound(max_radius, lam_min, g))
    hi = 1.0
    while tail_bound(hi, lam_min, g) >= tol:
        hi = min(2.0 * hi, max_radius)
    lo = hi / 2.0 if hi > 1.0 else 0.0
    while hi - lo > 1e-3 * hi:
        mid = 0.5 * (lo + hi)
        if tail_bound(mid, lam_min, g) < tol:
            hi = mid
        else:
            lo = mid
    return hi


def ellipsoid_points(T, center, radius: float):
    """Integer points ``m`` with ``(m-c)^T T (m-c) <= radius**2``.

    Returns ``(points, q)`` with ``points`` an ``(N, g)`` int64 array and ``q``
    the corresponding quadratic-form values.  Enumeration is level by level
    on the upper Cholesky factor (Fincke-Pohst), vectorised across branches.
    """
    T = np.asarray(T, dtype=float)
    c = np.asarray(center, dtype=float)
    g = T.shape[0]
    up = np.linalg.cholesky(T).T
    r2 = radius * radius
    pts = np.zeros((1, 0), dtype=np.int64)
    acc = np.zeros(1)
    for i in range(g - 1, -1, -1):
        u = (pts - c[i + 1:]) @ up[i, i + 1:]
        half = np.sqrt(np.maximum(r2 - acc, 0.0)) / up[i, i]
        mid = c[i] - u / up[i, i]
        lo = np.ceil(mid - half).astype(np.int64)
        hi = np.floor(mid + half).astype(np.int64)
        counts = np.maximum(hi - lo + 1, 0)
        rep = np.repeat(np.arange(len(counts)), counts)
        starts = np.cumsum(counts) - counts
        ni = lo[rep] + (np.arange(rep.size) - starts[rep])
        acc = acc[rep] + (up[i, i] * (ni - c[i]) + u[rep]) ** 2
        pts = np.column_stack([ni, pts[rep]])
    keep = acc <= r2
    return pts[keep], acc[keep]


def _cispi(phi: np.ndarray) -> np.ndarray:
    """``exp(i pi phi)`` with ``phi`` reduced mod 2 and exact values at multiples of 1/2."""
    r = np.mod(phi, 2.0)
    out = np.exp(1j * np.pi * r)
    k2 = 2.0 * r
    exact = k2 == np.round(k2)
    if exact.any():
        table = np.array([1, 1j, -1, -1j, 1])
        out[exact] = table[np.round(k2[exact]).astype(int)]
    return out


def _as_char(c, g: int) -> ThetaCharacteristic:
    if c is None:
        return ThetaCharacteristic((0,) * g, (0,) * g)
    if not isinstance(c, ThetaCharacteristic):
        c = ThetaCharacteristic(*c)
    if c.g != g:
        raise DimensionMismatch(f"characteristic has length {c.g}, expected {g}")
    return c


def theta(z, tau: RiemannMatrix, c=None, cfg: Optional[EvalConfig] = None) -> ThetaValue:
    """``Theta[alpha; beta](z, tau)`` with a certified truncation bound.

    Raises :class:`RadiusCapHit` (carrying the best value) when the radius
    needed for ``cfg.tol`` exceeds ``cfg.max_radius``.
    """
    cfg = cfg or EvalConfig()
    require_riemann(tau)
    g = tau.g
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape != (g,):
        raise DimensionMismatch(f"z has length {z.size}, expected {g}")
    ch = _as_char(c, g)
    a_half = np.array(ch.alpha, dtype=float) / 2.0
    w = z + np.array(ch.beta, dtype=float) / 2.0
    T = np.asarray(tau.im)
    y = w.imag
    tinv_y = np.linalg.solve(T, y)
    log_scale = math.pi * float(y @ tinv_y)
    # n = m + alpha/2 is centred at -T^{-1} y
    center_m = -tinv_y - a_half

    lam_min = float(np.linalg.eigvalsh(T)[0])
    capped = False
    try:
        radius = truncation_radius(T, center_m, 0.5 * cfg.tol, cfg.max_radius)
    except RadiusCapHit:
        radius, capped = cfg.max_radius, True
    tail = tail_bound(radius, lam_min, g)

    m, q = ellipsoid_points(T, center_m, radius)
    n = m + a_half
    phi = 2.0 * (n @ w.real)
    phi_err = np.abs(phi)
    if tau.re2 is not None:
        # n^T (re2/2) n = (2n)^T re2 (2n) / 8, exact in integers
        twice_n = 2 * m + np.array(ch.alpha, dtype=np.int64)
        re2 = np.array(tau.re2.entries, dtype=np.int64)
        quad = np.einsum("ij,jk,ik->i", twice_n, re2, twice_n)
        phi = np.mod(phi, 2.0) + np.mod(quad, 16) / 8.0
    else:
        quad = np.einsum("ij,jk,ik->i", n, np.asarray(tau.re), n)
        phi = phi + quad
        phi_err = phi_err + np.abs(quad)
    mag = np.exp(-math.pi * q)
    terms = mag * _cispi(phi)
    total = complex(math.fsum(terms.real), math.fsum(terms.imag))
    sum_abs = float(mag.sum())
    roundoff = _U * (float(np.sum(mag * (4.0 + math.pi * (q + phi_err))))
                     + (2.0 + log_scale) * sum_abs)
    scale = math.exp(log_scale)
    out = ThetaValue(value=total * scale, abs_error=float(scale * (tail + roundoff)),
                     terms_used=int(m.shape[0]), scale=scale, radius=radius,
                     log_scale=log_scale)
    if capped:
        raise RadiusCapHit(
            f"radius cap {cfg.max_radius} reached; error bound {out.abs_error:.3g} > tol",
            radius=radius, bound=tail, value=out)
    return out


def reduce_argument(z, tau: RiemannMatrix):
    """Split ``z = z0 + tau n + mu`` so that ``Theta(z) = exp(log_factor) Theta(z0)``."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    t = tau.tau
    n = np.round(np.linalg.solve(np.asarray(tau.im), z.imag)).astype(np.int64)
    z1 = z - t @ n
    mu = np.round(z1.real).astype(np.int64)
    z0 = z1 - mu
    log_factor = -2j * math.pi * (n @ z0) - 1j * math.pi * (n @ t @ n)
    return z0, n, mu, complex(log_factor)


def _orthosymmetric_re2(tau: RiemannMatrix):
    if tau.re2 is None:
        raise NotInSiegel("a real Riemann matrix needs an exact doubled real part")
    t = tau.real_type()
    if t.eps != 1:
        raise NotInSiegel(f"real type {t} is not orthosymmetric")
    return t


def _project_real(v: ThetaValue, cfg: EvalConfig, what: str) -> ThetaValue:
    re, im = float(np.real(v.value)), float(np.imag(v.value))
    if abs(im) > cfg.tol_real * (abs(re) + cfg.tol * v.scale) + v.abs_error:
        raise RealityViolated(f"{what}: imaginary part {im:.3e} vs real part {re:.3e}")
    return replace(v, value=re, abs_error=v.abs_error + abs(im))


def real_theta_constant(tau: RiemannMatrix, beta: Sequence[int],
                        cfg: Optional[EvalConfig] = None) -> ThetaValue:
    """``Theta[0; beta](0, tau)`` on an orthosymmetric real Siegel space, as a real number."""
    cfg = cfg or EvalConfig()
    _orthosymmetric_re2(tau)
    beta = tuple(int(b) for b in beta)
    v = theta(np.zeros(tau.g), tau, ThetaCharacteristic.zero_alpha(beta), cfg)
    return _project_real(v, cfg, f"theta constant beta={beta}")


def aux_T(x, tau: RiemannMatrix, q: Sequence[int], cfg: Optional[EvalConfig] = None) -> ThetaValue:
    """``exp(pi i e_q^T x) Theta(x + tau e_q / 2, tau)`` with ``e_q = (0, ..., 0, q)``."""
    cfg = cfg or EvalConfig()
    t = _orthosymmetric_re2(tau)
    if not validate_real_siegel(tau, t):
        raise NotInSiegel("tau is not in the standard real Siegel space of its type")
    q = tuple(int(v) for v in q)
    if t.lam >= t.g:
        raise InvalidQ(f"type {t} has lambda = g; the auxiliary function needs lambda < g")
    if len(q) != t.g - t.lam or any(v not in (0, 1) for v in q) or not any(q):
        raise InvalidQ(f"q must be a nonzero 0/1 vector of length {t.g - t.lam}")
    e_q = np.array((0,) * t.lam + q, dtype=float)
    x = np.asarray(x, dtype=float).reshape(-1)
    w = x + 0.5 * (tau.tau @ e_q)
    v = theta(w, tau, None, cfg)
    phase = np.exp(1j * math.pi * float(e_q @ x))
    return _project_real(replace(v, value=phase * v.value), cfg, f"aux_T q={q}")
