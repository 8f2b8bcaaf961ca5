"""Vectorized arithmetic for algebras over a prime field GF(p).

Elements are encoded as integers in lexicographic coordinate order (first
coordinate most significant), the same order used by ``itertools.product``.
All arithmetic is exact integer arithmetic reduced mod p.
"""

from __future__ import annotations

import numpy as np


class PrimeFieldEngine:
    def __init__(self, p: int, constants: np.ndarray, unit: np.ndarray):
        self.p = p
        self.dim = constants.shape[0]
        self.C = np.asarray(constants, dtype=np.int64) % p
        self._Cflat = self.C.reshape(self.dim, self.dim * self.dim)
        self.unit = np.asarray(unit, dtype=np.int64) % p
        self.size = p**self.dim
        self.weights = p ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)
        self.inv_table = np.array([0] + [pow(a, -1, p) for a in range(1, p)], dtype=np.int64)
        self._table: np.ndarray | None = None

    # encoding
    def decode(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights) % self.p

    def encode(self, X) -> np.ndarray:
        return (np.asarray(X, dtype=np.int64) % self.p) @ self.weights

    def all_elements(self) -> np.ndarray:
        return self.decode(np.arange(self.size, dtype=np.int64))

    # products
    def left_mats(self, X) -> np.ndarray:
        """Matrices M with ``x*y = y @ M`` for each row x of X."""
        X = np.atleast_2d(X)
        return (X @ self._Cflat).reshape(-1, self.dim, self.dim) % self.p

    def right_mats(self, Y) -> np.ndarray:
        """Matrices M with ``x*y = x @ M`` for each row y of Y."""
        Y = np.atleast_2d(Y)
        return np.einsum("nb,abk->nak", Y, self.C) % self.p

    def mul(self, X, Y) -> np.ndarray:
        """Row-wise products of two equally shaped coordinate arrays."""
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        step = max(1, 2**22 // (self.dim * self.dim))
        out = np.empty(np.broadcast_shapes(X.shape, Y.shape), dtype=np.int64)
        X, Y = np.broadcast_to(X, out.shape), np.broadcast_to(Y, out.shape)
        for s in range(0, len(out), step):
            L = (X[s : s + step] @ self._Cflat).reshape(-1, self.dim, self.dim)
            out[s : s + step] = np.einsum("nb,nbk->nk", Y[s : s + step], L) % self.p
        return out

    def mul_idx(self, U: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Products U[a] * U[b]; multiplication matrices are built once per distinct operand."""
        a, b = np.asarray(a).ravel(), np.asarray(b).ravel()
        ua, ia = np.unique(a, return_inverse=True)
        ub, ib = np.unique(b, return_inverse=True)
        if min(len(ua), len(ub)) * 4 > len(a):
            return self.mul(U[a], U[b])
        if len(ua) <= len(ub):
            mats, idx, other = self.left_mats(U[ua]), ia, U[b]  # x*y = y @ L_x
        else:
            mats, idx, other = self.right_mats(U[ub]), ib, U[a]  # x*y = x @ R_y
        out = np.empty((len(a), self.dim), dtype=np.int64)
        order = np.argsort(idx, kind="stable")
        counts = np.bincount(idx, minlength=len(mats))
        if (counts == counts[0]).all():
            grouped = other[order].reshape(len(mats), counts[0], self.dim)
            # float64 products are exact here: entries stay far below 2**53
            prod = np.rint(grouped.astype(np.float64) @ mats.astype(np.float64)).astype(np.int64)
            out[order] = prod.reshape(-1, self.dim) % self.p
        else:
            starts = np.concatenate([[0], np.cumsum(counts)])
            for g in range(len(mats)):
                rows = order[starts[g] : starts[g + 1]]
                out[rows] = (other[rows] @ mats[g]) % self.p
        return out

    def mul_left(self, x, Y) -> np.ndarray:
        """x times every row of Y."""
        M = self.left_mats(np.asarray(x)[None, :])[0]
        return (np.atleast_2d(Y) @ M) % self.p

    def mul_right(self, X, y) -> np.ndarray:
        """Every row of X times y."""
        M = self.right_mats(np.asarray(y)[None, :])[0]
        return (np.atleast_2d(X) @ M) % self.p

    def product_table(self, chunk: int = 64) -> np.ndarray:
        """Full index multiplication table; callers bound ``size`` beforehand."""
        if self._table is None:
            n = self.size
            dtype = np.int32 if n < 2**31 else np.int64
            allx = self.all_elements()
            table = np.empty((n, n), dtype=dtype)
            for s in range(0, n, chunk):
                L = self.left_mats(allx[s : s + chunk])
                prods = np.einsum("mb,cbk->cmk", allx, L) % self.p
                table[s : s + chunk] = prods @ self.weights
            self._table = table
        return self._table

    # linear algebra
    def solve_batch(self, A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Solve ``A[n] @ z = b[n]`` for a batch of systems mod p.

        Returns ``(solvable mask, solutions)``; free variables are set to 0.
        """
        p = self.p
        A = np.asarray(A, dtype=np.int64) % p
        b = np.asarray(b, dtype=np.int64) % p
        N, m, d = A.shape
        M = np.concatenate([A, b[:, :, None]], axis=2)
        rank = np.zeros(N, dtype=np.int64)
        pivcol_of_row = np.full((N, m), -1, dtype=np.int64)
        rows = np.arange(m)
        ar = np.arange(N)
        for col in range(d):
            cand = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
            has = cand.any(axis=1)
            if not has.any():
                continue
            piv = np.argmax(cand, axis=1)
            sel = ar[has]
            r_dst = rank[has]
            r_src = piv[has]
            src = M[sel, r_src].copy()
            M[sel, r_src] = M[sel, r_dst]
            inv = self.inv_table[src[:, col]]
            src = (src * inv[:, None]) % p
            M[sel, r_dst] = src
            factors = M[sel, :, col].copy()
            factors[np.arange(len(sel)), r_dst] = 0
            M[sel] = (M[sel] - factors[:, :, None] * src[:, None, :]) % p
            pivcol_of_row[sel, r_dst] = col
            rank[has] += 1
        coeff_zero = ~(M[:, :, :d] != 0).any(axis=2)
        inconsistent = (coeff_zero & (M[:, :, d] != 0)).any(axis=1)
        z = np.zeros((N, d), dtype=np.int64)
        rr, cc = np.nonzero(pivcol_of_row >= 0)
        z[rr, pivcol_of_row[rr, cc]] = M[rr, cc, d]
        return ~inconsistent, z

    def reduce_rows(self, X, basis: np.ndarray, pivots) -> np.ndarray:
        """Remainders of rows of X modulo a reduced echelon basis."""
        R = np.array(X, dtype=np.int64) % self.p
        for row, col in zip(basis, pivots):
            f = R[:, col].copy()
            R = (R - f[:, None] * row[None, :]) % self.p
        return R
