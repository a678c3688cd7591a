"""Exact integer and GF(2) linear algebra for reflection matrices and real types.

All integer matrices are handled with Python ints (numpy ``object`` arrays
where a matrix product is needed), so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InadmissibleType, NotSymmetric


def int_matrix(rows) -> np.ndarray:
    """Return ``rows`` as a square numpy object array of Python ints."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        iv = int(v)
        if iv != v:
            raise ValueError(f"non-integral entry {v!r} at {idx}")
        out[idx] = iv
    return out


def int_identity(g: int) -> np.ndarray:
    out = np.zeros((g, g), dtype=object)
    for i in range(g):
        out[i, i] = 1
    return out


def int_zeros(g: int) -> np.ndarray:
    out = np.empty((g, g), dtype=object)
    out.fill(0)
    return out


def as_tuple(arr) -> tuple:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(arr, dtype=object))


class SymIntMatrix:
    """Immutable symmetric matrix with arbitrary-precision integer entries."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = int_matrix(entries)
        if not (arr == arr.T).all():
            raise NotSymmetric("integer matrix is not symmetric")
        object.__setattr__(self, "entries", as_tuple(arr))

    def __setattr__(self, name, value):
        raise AttributeError("SymIntMatrix is immutable")

    @classmethod
    def coerce(cls, m) -> "SymIntMatrix":
        return m if isinstance(m, cls) else cls(m)

    @property
    def g(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        """A fresh object-dtype copy of the entries."""
        return int_matrix(self.entries)

    def diagonal(self) -> tuple:
        return tuple(self.entries[k][k] for k in range(self.g))

    def __eq__(self, other):
        if isinstance(other, SymIntMatrix):
            return self.entries == other.entries
        return NotImplemented

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"SymIntMatrix({[list(r) for r in self.entries]})"


@dataclass(frozen=True, order=True)
class RealType:
    """Real type ``(g, lambda, epsilon)`` of a reflection matrix."""

    g: int
    lam: int
    eps: int

    def __iter__(self):
        return iter((self.g, self.lam, self.eps))

    @property
    def lam0(self) -> int:
        return self.lam // 2

    @property
    def orthosymmetric(self) -> bool:
        return self.eps == 1

    @property
    def critical(self) -> bool:
        return self.lam == 2 * (self.g // 2) and self.eps == 1

    def __str__(self):
        return f"({self.g},{self.lam},{self.eps})"


@dataclass(frozen=True, order=True)
class TopologicalType:
    """Topological type ``(g, k, delta)``: genus, number of ovals, separatedness."""

    g: int
    k: int
    delta: int

    def __iter__(self):
        return iter((self.g, self.k, self.delta))

    def __str__(self):
        return f"({self.g},{self.k},{self.delta})"


def rank_mod2(m) -> int:
    """Rank over GF(2) of an integer matrix (Gaussian elimination on bitmasks)."""
    entries = m.entries if isinstance(m, SymIntMatrix) else int_matrix(m)
    rows = [sum((int(v) & 1) << j for j, v in enumerate(row)) for row in entries]
    return _rank_bitrows(rows)


def _rank_bitrows(rows: list) -> int:
    rank = 0
    rows = list(rows)
    while rows:
        pivot = rows.pop()
        if pivot == 0:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def real_type_of(m) -> RealType:
    m = SymIntMatrix.coerce(m)
    eps = int(all(d % 2 == 0 for d in m.diagonal()))
    return RealType(m.g, rank_mod2(m.entries), eps)


def _real_type_violation(t: RealType) -> str | None:
    g, lam, eps = t
    if g < 1:
        return "g must be at least 1"
    if eps not in (0, 1):
        return "ε must be 0 or 1"
    if not 0 <= lam <= g:
        return "λ must satisfy 0 ≤ λ ≤ g"
    if eps == 1 and lam % 2:
        return "λ must be even when ε=1"
    if eps == 0 and lam < 1:
        return "λ must be at least 1 when ε=0"
    return None


def is_admissible_real_type(t: RealType) -> bool:
    return _real_type_violation(t) is None


def check_real_type(t) -> RealType:
    """Return ``t`` as a RealType, raising InadmissibleType naming the violated constraint."""
    t = t if isinstance(t, RealType) else RealType(*t)
    why = _real_type_violation(t)
    if why:
        raise InadmissibleType(f"inadmissible real type {t}: {why}")
    return t


def _topological_violation(t: TopologicalType) -> str | None:
    g, k, delta = t
    if g < 1:
        return "g must be at least 1"
    if delta == 1:
        if not 1 <= k <= g + 1:
            return "separated types need 1 ≤ k ≤ g+1"
        if (k - g - 1) % 2:
            return "separated types need k ≡ g+1 (mod 2)"
        return None
    if delta == 0:
        return None if 0 <= k <= g else "non-separated types need 0 ≤ k ≤ g"
    return "δ must be 0 or 1"


def is_admissible_topological_type(t: TopologicalType) -> bool:
    return _topological_violation(t) is None


def topological_to_real(t) -> RealType:
    t = t if isinstance(t, TopologicalType) else TopologicalType(*t)
    why = _topological_violation(t)
    if why:
        raise InadmissibleType(f"inadmissible topological type {t}: {why}")
    if t.k > 0:
        return RealType(t.g, t.g + 1 - t.k, t.delta)
    return RealType(t.g, 2 * (t.g // 2), 1)


def real_to_topological_candidates(t) -> list:
    """All admissible topological types whose real type is ``t`` (sorted)."""
    t = check_real_type(t)
    found = []
    for k in range(t.g + 2):
        for delta in (0, 1):
            tt = TopologicalType(t.g, k, delta)
            if is_admissible_topological_type(tt) and topological_to_real(tt) == t:
                found.append(tt)
    return sorted(found)


def standard_form(t) -> SymIntMatrix:
    t = check_real_type(t)
    m = int_zeros(t.g)
    if t.eps == 1:
        for j in range(t.lam0):
            m[j, j + t.lam0] = m[j + t.lam0, j] = 1
    else:
        for j in range(t.lam):
            m[j, j] = 1
    return SymIntMatrix(m)


def admissible_real_types(g: int) -> list:
    return [t for lam in range(g + 1) for eps in (0, 1)
            if is_admissible_real_type(t := RealType(g, lam, eps))]


# --- small exact helpers shared by the other modules -------------------------

def det(a) -> int:
    """Exact determinant (Bareiss fraction-free elimination)."""
    m = [[int(x) for x in row] for row in np.asarray(a, dtype=object)]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse_unimodular(a) -> np.ndarray:
    """Exact inverse of an integer matrix with determinant ±1."""
    a = np.asarray(a, dtype=object)
    n = a.shape[0]
    aug = [[Fraction(int(a[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            v = aug[i][n + j]
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular")
            out[i, j] = int(v)
    return out


def mod2(v: Iterable[int]) -> tuple:
    return tuple(int(x) % 2 for x in v)


def quad_form(m: Sequence[Sequence[int]], v: Sequence[int]) -> int:
    """Exact ``v^T m v``."""
    return sum(int(m[i][j]) * int(v[i]) * int(v[j])
               for i in range(len(v)) for j in range(len(v)))
