"""Brute-force oracles on plain Python sets, shared by several test modules."""

import itertools


def naive_normal(L, members):
    K = set(members)
    elems = range(L.order)
    m = lambda a, b: int(L.table[a, b])
    coset_l = {x: frozenset(m(x, k) for k in K) for x in elems}
    for x in elems:
        if coset_l[x] != frozenset(m(k, x) for k in K):
            return False
    for x, y in itertools.product(elems, repeat=2):
        if frozenset(m(x, m(y, k)) for k in K) != coset_l[m(x, y)]:
            return False
        if frozenset(m(m(k, x), y) for k in K) != frozenset(m(k, m(x, y)) for k in K):
            return False
    return True


def naive_subloops(L):
    """Every subloop, by closing each known subloop with one more element until nothing new appears."""

    def close(S):
        while True:
            new = {int(L.table[x, y]) for x in S for y in S}
            new |= {int(L.ldiv[x, y]) for x in S for y in S} | {int(L.rdiv[x, y]) for x in S for y in S}
            if new <= S:
                return frozenset(S)
            S = S | new

    found = {close({L.identity})}
    frontier = set(found)
    while frontier:
        grown = {close(set(S) | {g}) for S in frontier for g in range(L.order) if g not in S}
        frontier = grown - found
        found |= frontier
    return found


def naive_simple(L):
    """Simplicity by enumerating every subloop and testing normality set-wise."""
    if L.order == 1:
        return False
    proper = [S for S in naive_subloops(L) if 1 < len(S) < L.order]
    return not any(naive_normal(L, sorted(S)) for S in proper)
