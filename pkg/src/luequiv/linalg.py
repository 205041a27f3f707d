"""Linear algebra over F2 (bit-packed int rows) and over Z/2^r (Howell form)."""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np


# -- F2 ------------------------------------------------------------------------


def _low_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def f2_rref(rows: Iterable[int], ncols: int) -> dict[int, int]:
    """Reduced row echelon form as a map pivot column -> row.

    Rows may carry extra bits at positions ``>= ncols`` (an augmented right-hand
    side); those are never chosen as pivots. An inconsistent augmented row shows
    up as the key ``-1``.
    """
    colmask = (1 << ncols) - 1
    pivots: dict[int, int] = {}
    pivmask = 0
    for r in dict.fromkeys(rows):  # duplicates add nothing
        if not r:
            continue
        hit = r & pivmask
        while hit:
            c = _low_bit(hit)
            r ^= pivots[c]
            hit = r & pivmask
        if not r & colmask:
            if r:
                pivots[-1] = r
            continue
        c = _low_bit(r & colmask)
        for c2, p in pivots.items():
            if c2 >= 0 and (p >> c) & 1:
                pivots[c2] = p ^ r
        pivots[c] = r
        pivmask |= 1 << c
    return pivots


def f2_solve_affine(rows: Sequence[int], rhs: Sequence[int], ncols: int) -> tuple[Optional[int], list[int]]:
    """Solve ``A x = b`` over F2.

    ``rows[i]`` is the bitmask of row ``i`` (bit ``j`` = entry in column ``j``)
    and ``rhs[i]`` its right-hand side bit. Returns ``(particular, kernel)``;
    ``particular`` is None when the system is inconsistent. The kernel basis
    spans the homogeneous solutions.
    """
    if len(rows) != len(rhs):
        raise ValueError("row count and right-hand side length differ")
    aug = [row | ((b & 1) << ncols) for row, b in zip(rows, rhs)]
    piv = f2_rref(aug, ncols)
    if -1 in piv:
        return None, f2_kernel_from_rref(piv, ncols)
    x = 0
    for c, p in piv.items():
        if (p >> ncols) & 1:
            x |= 1 << c
    return x, f2_kernel_from_rref(piv, ncols)


def f2_kernel_from_rref(piv: dict[int, int], ncols: int) -> list[int]:
    pivcols = {c for c in piv if c >= 0}
    basis = []
    for f in range(ncols):
        if f in pivcols:
            continue
        x = 1 << f
        for c in pivcols:
            if (piv[c] >> f) & 1:
                x |= 1 << c
        basis.append(x)
    return basis


def f2_kernel(rows: Sequence[int], ncols: int) -> list[int]:
    return f2_kernel_from_rref(f2_rref(rows, ncols), ncols)


def f2_basis_from_generators(vectors: Iterable[int]) -> list[int]:
    """Reduced basis of the span, ordered by pivot (lowest set bit)."""
    vectors = list(vectors)
    width = max((v.bit_length() for v in vectors), default=0)
    piv = f2_rref(vectors, width)
    return [piv[c] for c in sorted(piv)]


def f2_rank(vectors: Iterable[int]) -> int:
    return len(f2_basis_from_generators(vectors))


class F2Span:
    """Incrementally built span supporting membership tests."""

    def __init__(self, vectors: Iterable[int] = ()):
        self._piv: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        for c, p in self._piv.items():
            if (v >> c) & 1:
                v ^= p
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        c = _low_bit(r)
        for c2, p in self._piv.items():
            if (p >> c) & 1:
                self._piv[c2] = p ^ r
        self._piv[c] = r
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def dim(self) -> int:
        return len(self._piv)

    def basis(self) -> list[int]:
        return [self._piv[c] for c in sorted(self._piv)]


def independent_subset(vectors: Sequence[int]) -> list[int]:
    """Indices of a greedy maximal independent subfamily (first-come order)."""
    span = F2Span()
    return [i for i, v in enumerate(vectors) if span.add(v)]


# -- Z/2^r -----------------------------------------------------------------------


def _valuation(a: int) -> int:
    return (a & -a).bit_length() - 1


def howell_form(matrix, r: int) -> np.ndarray:
    """Howell normal form of an integer matrix over Z/2^r.

    Column by column: pivot on the entry of least 2-adic valuation, scale the
    pivot to a power of two, clear below exactly and reduce above modulo the
    pivot, then append the annihilator row ``2^(r-v) * pivot_row`` so that the
    span of the rows below every pivot is closed as the Howell property demands.
    """
    modulus = 1 << r
    M = np.array(matrix, dtype=np.int64) % modulus
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows = [M[i].copy() for i in range(M.shape[0])]
    ncols = M.shape[1]
    k = 0
    for j in range(ncols):
        best, best_v = None, r
        for i in range(k, len(rows)):
            a = int(rows[i][j])
            if a:
                v = _valuation(a)
                if v < best_v:
                    best, best_v = i, v
                    if v == 0:
                        break
        if best is None:
            continue
        rows[k], rows[best] = rows[best], rows[k]
        a = int(rows[k][j])
        inv = pow(a >> best_v, -1, modulus)
        rows[k] = (rows[k] * inv) % modulus
        p = 1 << best_v
        pr = rows[k]
        for i in range(len(rows)):
            if i != k:
                e = int(rows[i][j])
                if e:
                    rows[i] = (rows[i] - (e // p) * pr) % modulus
        if best_v:
            ann = (pr << (r - best_v)) % modulus
            if ann.any():
                rows.append(ann)
        k += 1
    if k == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(rows[:k], dtype=np.int64)


def howell_kernel(A, r: int) -> list[np.ndarray]:
    """Generating set of ``{x : A x = 0 mod 2^r}``, at most ``cols(A)`` vectors.

    Uses the Howell form of ``[A^T | I]``: the rows whose left block vanishes
    span exactly the solution module.
    """
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d coefficient matrix")
    m, n = A.shape
    if n == 0:
        return []
    aug = np.concatenate([A.T % (1 << r), np.eye(n, dtype=np.int64)], axis=1)
    H = howell_form(aug, r)
    gens = [row[m:].copy() for row in H if not row[:m].any() and row[m:].any()]
    return gens


def mod_matvec(A, x, r: int) -> np.ndarray:
    return (np.asarray(A, dtype=np.int64) @ np.asarray(x, dtype=np.int64)) % (1 << r)
