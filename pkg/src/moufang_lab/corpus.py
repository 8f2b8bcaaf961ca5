"""Small test-bed loops: cyclic and dihedral groups, products, Chein doubles, and exhaustive order-n loops."""

from __future__ import annotations

from typing import Callable, Hashable, Iterator, Sequence

import numpy as np

from .loops import FiniteLoop, validate_loop


def loop_from_elements(elements: Sequence[Hashable], mul: Callable, identity: Hashable) -> FiniteLoop:
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    return validate_loop(table, index[identity], [str(e) for e in elements])


def group_closure(gens: Sequence[Hashable], mul: Callable, identity: Hashable) -> list:
    elems = [identity]
    seen = {identity}
    queue = list(elems)
    while queue:
        a = queue.pop(0)
        for g in gens:
            c = mul(a, g)
            if c not in seen:
                seen.add(c)
                elems.append(c)
                queue.append(c)
    return elems


def cyclic(n: int) -> FiniteLoop:
    return validate_loop([[(i + j) % n for j in range(n)] for i in range(n)], 0)


def direct_product(A: FiniteLoop, B: FiniteLoop) -> FiniteLoop:
    na, nb = A.order, B.order
    T = np.empty((na * nb, na * nb), dtype=np.int64)
    for a1 in range(na):
        for b1 in range(nb):
            T[a1 * nb + b1] = (A.table[a1][:, None] * nb + B.table[b1][None, :]).ravel()
    return validate_loop(T, A.identity * nb + B.identity)


def _perm_mul(p, q):
    # apply p then q
    return tuple(q[i] for i in p)


def permutation_group(gens: Sequence[Sequence[int]]) -> FiniteLoop:
    gens = [tuple(g) for g in gens]
    ident = tuple(range(len(gens[0])))
    elems = group_closure(gens, _perm_mul, ident)
    return loop_from_elements(elems, _perm_mul, ident)


def dihedral(n: int) -> FiniteLoop:
    """Symmetry group of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return permutation_group([rot, ref])


def symmetric(k: int) -> FiniteLoop:
    gens = [tuple([1, 0] + list(range(2, k))), tuple(list(range(1, k)) + [0])]
    return permutation_group(gens)


def alternating(k: int) -> FiniteLoop:
    """Alternating group, generated by the 3-cycles (0 1 i)."""
    gens = []
    for i in range(2, k):
        p = list(range(k))
        p[0], p[1], p[i] = 1, i, 0
        gens.append(tuple(p))
    return permutation_group(gens)


def quaternion_group() -> FiniteLoop:
    # unit quaternions +-1, +-i, +-j, +-k as (sign, axis)
    mult = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(a, b):
        s, ax = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, ax)

    elems = [(s, ax) for ax in range(4) for s in (1, -1)]
    return loop_from_elements(elems, mul, (1, 0))


def sl2_3() -> FiniteLoop:
    """SL(2, 3), order 24."""

    def mul(a, b):
        return (
            (a[0] * b[0] + a[1] * b[2]) % 3,
            (a[0] * b[1] + a[1] * b[3]) % 3,
            (a[2] * b[0] + a[3] * b[2]) % 3,
            (a[2] * b[1] + a[3] * b[3]) % 3,
        )

    ident = (1, 0, 0, 1)
    elems = group_closure([(1, 1, 0, 1), (1, 0, 1, 1)], mul, ident)
    return loop_from_elements(elems, mul, ident)


def chein_double(G: FiniteLoop) -> FiniteLoop:
    """Chein's Moufang loop M(G, 2) on G x {0, 1}; nonassociative iff G is nonabelian."""
    n = G.order
    T, inv = G.table, G.right_inverse

    def idx(g, s):
        return g + n * s

    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            table[idx(g, 0), idx(h, 0)] = idx(T[g, h], 0)
            table[idx(g, 0), idx(h, 1)] = idx(T[h, g], 1)
            table[idx(g, 1), idx(h, 0)] = idx(T[g, inv[h]], 1)
            table[idx(g, 1), idx(h, 1)] = idx(T[inv[h], g], 0)
    return validate_loop(table, G.identity)


def normalized_loops(n: int) -> Iterator[FiniteLoop]:
    """All loops on 0..n-1 with identity 0, in lexicographic order of the row-major table."""
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        table[0][i] = i
        table[i][0] = i
    cells = [(r, c) for r in range(1, n) for c in range(1, n)]
    rows = [set(range(n)) - {r} for r in range(n)]
    cols = [set(range(n)) - {c} for c in range(n)]

    def fill(k):
        if k == len(cells):
            yield validate_loop([row[:] for row in table], 0)
            return
        r, c = cells[k]
        for v in sorted(rows[r] & cols[c]):
            table[r][c] = v
            rows[r].discard(v)
            cols[c].discard(v)
            yield from fill(k + 1)
            rows[r].add(v)
            cols[c].add(v)

    yield from fill(0)


def standard_corpus(max_order: int = 24) -> dict[str, FiniteLoop]:
    """Named loops of order <= max_order used for cross-validation."""
    out: dict[str, FiniteLoop] = {}
    for n in range(1, max_order + 1):
        out[f"C{n}"] = cyclic(n)
    for n in range(3, max_order // 2 + 1):
        out[f"D{2 * n}"] = dihedral(n)
    out["C2xC2"] = direct_product(cyclic(2), cyclic(2))
    out["C2xC2xC2"] = direct_product(out["C2xC2"], cyclic(2))
    out["C3xC3"] = direct_product(cyclic(3), cyclic(3))
    out["C2xC6"] = direct_product(cyclic(2), cyclic(6))
    out["Q8"] = quaternion_group()
    out["A4"] = alternating(4)
    out["S4"] = symmetric(4)
    out["SL(2,3)"] = sl2_3()
    out["M(S3,2)"] = chein_double(dihedral(3))
    out["M(D8,2)"] = chein_double(dihedral(4))
    out["M(Q8,2)"] = chein_double(out["Q8"])
    out["M(A4,2)"] = chein_double(out["A4"])
    out["M(D12,2)"] = chein_double(dihedral(6))
    out["M(S3,2)xC2"] = direct_product(out["M(S3,2)"], cyclic(2))
    for i, L in enumerate(normalized_loops(5)):
        out[f"L5_{i}"] = L
    return {k: v for k, v in out.items() if v.order <= max_order}
