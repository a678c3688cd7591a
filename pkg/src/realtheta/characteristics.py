"""Theta characteristics modulo 2, the real odd/even sets and the characteristic actions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import intmat
from .errors import DiasymmetricInput, DimensionMismatch, NotSymplectic, TypeMismatch
from .intmat import RealType
from .siegel import RealModularElement, is_symplectic


@dataclass(frozen=True)
class ThetaCharacteristic:
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.alpha)
        b = tuple(int(x) for x in self.beta)
        if len(a) != len(b):
            raise DimensionMismatch("alpha and beta must have the same length")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def zero_alpha(cls, beta) -> "ThetaCharacteristic":
        beta = tuple(beta)
        return cls((0,) * len(beta), beta)

    @property
    def g(self) -> int:
        return len(self.alpha)

    def reduced(self) -> "ThetaCharacteristic":
        return ThetaCharacteristic(intmat.mod2(self.alpha), intmat.mod2(self.beta))


def canonical(beta: Sequence[int]) -> tuple:
    """Class ``[beta]_2`` as a tuple with entries in {0, 1}."""
    return intmat.mod2(beta)


def parity(c: ThetaCharacteristic) -> str:
    return "odd" if sum(a * b for a, b in zip(c.alpha, c.beta)) % 2 else "even"


def _candidates(t: RealType):
    """Vectors in {0,1}^g with zeros past position lambda, in lexicographic order."""
    tail = (0,) * (t.g - t.lam)
    for head in itertools.product((0, 1), repeat=t.lam):
        yield head + tail


def _quad_mod4(t: RealType, beta) -> int:
    m = intmat.standard_form(t).entries
    return intmat.quad_form(m, beta) % 4


def enumerate_O(t) -> list:
    t = intmat.check_real_type(t)
    return [b for b in _candidates(t) if _quad_mod4(t, b) == 2]


def enumerate_E(t) -> list:
    t = intmat.check_real_type(t)
    return [b for b in _candidates(t) if _quad_mod4(t, b) == 0]


def _require_ortho(t) -> RealType:
    t = intmat.check_real_type(t)
    if t.eps != 1:
        raise DiasymmetricInput(f"type {t} is diasymmetric; this set needs ε=1")
    return t


def _paired_products_even(t: RealType, beta) -> bool:
    return all(beta[j] * beta[j + t.lam0] % 2 == 0 for j in range(t.lam0))


def enumerate_T(t) -> list:
    t = _require_ortho(t)
    return [b for b in enumerate_E(t) if _paired_products_even(t, b)]


def enumerate_B(t) -> list:
    """{0,1}-vectors with ``beta_k beta_{lam0+k} = 0`` and zero tail; ``3**lam0`` of them."""
    t = _require_ortho(t)
    return [b for b in _candidates(t) if _paired_products_even(t, b)]


def act_full(G, c: ThetaCharacteristic) -> ThetaCharacteristic:
    """Action of Sp(2g, Z) on characteristics, reduced mod 2."""
    G = np.asarray(G, dtype=object)
    g = c.g
    if G.shape != (2 * g, 2 * g):
        raise DimensionMismatch(f"expected a {2 * g}x{2 * g} matrix")
    if not is_symplectic(G):
        raise NotSymplectic("G J G^T != J")
    A, B, C, D = G[:g, :g], G[:g, g:], G[g:, :g], G[g:, g:]
    alpha = np.array(c.alpha, dtype=object)
    beta = np.array(c.beta, dtype=object)
    new_alpha = D @ alpha - C @ beta + np.diag(C @ D.T)
    new_beta = -B @ alpha + A @ beta + np.diag(A @ B.T)
    return ThetaCharacteristic(intmat.mod2(new_alpha), intmat.mod2(new_beta))


def act_reduced(gmod: RealModularElement, beta: Sequence[int]) -> tuple:
    """``[a beta - diag(M - a M a^T)/2]_2``."""
    if len(beta) != gmod.g:
        raise TypeMismatch("characteristic and group element have different dimensions")
    shift = np.diag(gmod.half_defect)
    return intmat.mod2(gmod.a @ np.array(beta, dtype=object) - shift)


def sign_symbol(m: Sequence[int], beta: Sequence[int], t) -> int:
    """``exp(pi i (m^T M m / 2 + m^T beta))`` for an orthosymmetric type, exactly."""
    t = _require_ortho(t)
    mm = intmat.standard_form(t).entries
    q = intmat.quad_form(mm, m)
    # even diagonal makes q even
    e = q // 2 + sum(int(x) * int(y) for x, y in zip(m, beta))
    return -1 if e % 2 else 1


def sign_symbol_table(ms, betas, t) -> np.ndarray:
    """Vectorised :func:`sign_symbol`: entry ``[i, j]`` is the symbol of ``(ms[i], betas[j])``."""
    t = _require_ortho(t)
    mm = np.array(intmat.standard_form(t).entries, dtype=np.int64)
    ms = np.asarray(ms, dtype=np.int64).reshape(-1, t.g)
    betas = np.asarray(betas, dtype=np.int64).reshape(-1, t.g)
    half_q = np.einsum("ij,jk,ik->i", ms, mm, ms) // 2
    e = half_q[:, None] + ms @ betas.T
    return np.where(e % 2 == 1, -1, 1)


def negative_count(m: Sequence[int], t) -> int:
    """Number of ``beta`` in the B-set with ``sign_symbol(m, beta) == -1``."""
    return sum(sign_symbol(m, b, t) == -1 for b in enumerate_B(t))
