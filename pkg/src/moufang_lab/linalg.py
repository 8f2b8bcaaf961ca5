"""Exact Gaussian elimination over a :class:`~moufang_lab.scalars.ScalarRing`.

Vectors are tuples of raw ring values. Pivoting takes the first nonzero
column; among candidate rows the lowest index pivots first.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import ScalarRing


def rref(rows: Sequence[Sequence], ring: ScalarRing) -> tuple[list[tuple], list[int]]:
    """Reduced row echelon form. Returns ``(nonzero rows, pivot columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    is_zero = ring.is_zero
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if not is_zero(m[i][col])), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = ring.inv(m[rank][col])
        prow = [ring.mul(inv, v) for v in m[rank]]
        m[rank] = prow
        for i in range(len(m)):
            if i != rank and not is_zero(m[i][col]):
                f = m[i][col]
                m[i] = [ring.sub(a, ring.mul(f, b)) if not is_zero(b) else a for a, b in zip(m[i], prow)]
        pivots.append(col)
        rank += 1
        if rank == len(m):
            break
    out = [tuple(r) for r in m[:rank]]
    return out, pivots


def reduce(vec: Sequence, basis: Sequence[Sequence], pivots: Sequence[int], ring: ScalarRing) -> tuple:
    """Remainder of ``vec`` modulo the span of a reduced echelon ``basis``."""
    v = list(vec)
    for row, col in zip(basis, pivots):
        f = v[col]
        if not ring.is_zero(f):
            v = [ring.sub(a, ring.mul(f, b)) for a, b in zip(v, row)]
    return tuple(v)


def in_span(vec, basis, pivots, ring) -> bool:
    return all(ring.is_zero(c) for c in reduce(vec, basis, pivots, ring))


def span_coordinates(vec, basis, pivots, ring) -> tuple | None:
    """Coefficients of ``vec`` in a reduced echelon basis, or None if outside the span."""
    if not in_span(vec, basis, pivots, ring):
        return None
    return tuple(vec[c] for c in pivots)


def solve(matrix: Sequence[Sequence], rhs: Sequence, ring: ScalarRing) -> tuple | None:
    """One solution of ``matrix @ z = rhs`` (free variables set to 0), or None if inconsistent."""
    ncols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug, ring)
    if pivots and pivots[-1] == ncols:
        return None
    z = [ring.zero] * ncols
    for row, col in zip(red, pivots):
        z[col] = row[ncols]
    return tuple(z)


def rank(rows, ring) -> int:
    return len(rref(rows, ring)[1])


def determinant(matrix: Sequence[Sequence], ring: ScalarRing):
    m = [list(r) for r in matrix]
    n = len(m)
    det = ring.one
    for col in range(n):
        piv = next((i for i in range(col, n) if not ring.is_zero(m[i][col])), None)
        if piv is None:
            return ring.zero
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = ring.neg(det)
        det = ring.mul(det, m[col][col])
        inv = ring.inv(m[col][col])
        for i in range(col + 1, n):
            f = ring.mul(m[i][col], inv)
            if not ring.is_zero(f):
                m[i] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(m[i], m[col])]
    return det
