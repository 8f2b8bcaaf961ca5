"""Finite loops given by Cayley tables.

Elements are the indices ``0..n-1``. Every array-valued helper is vectorized
with numpy fancy indexing; ``L.mul(a, b)`` broadcasts like ``table[a, b]``.

Division conventions: ``left_div(a, b)`` is the x with ``a*x = b`` and
``right_div(a, b)`` is the y with ``y*a = b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, ResourceError, StructureError
from .reports import VerificationReport, digest, timed

TABLE_CAP = 5000
DEFAULT_TRIPLE_BOUND = 10**9
DEFAULT_NODE_CAP = 10**7


class LoopError(StructureError):
    """A table fails the loop axioms; the message names the offending row/column/cell."""


class FiniteLoop:
    def __init__(self, table, identity: int = 0, labels: Sequence[str] | None = None):
        T = np.array(table, dtype=np.int32 if len(table) < 2**31 else np.int64)
        T.setflags(write=False)
        self.table = T
        self.identity = int(identity)
        self.labels = tuple(labels) if labels is not None else None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def mul(self, a, b):
        return self.table[a, b]

    @cached_property
    def ldiv(self) -> np.ndarray:
        """ldiv[a, b] = a \\ b."""
        n = self.order
        out = np.empty_like(self.table)
        rows = np.arange(n)[:, None]
        out[rows, self.table] = np.arange(n)[None, :]
        return out

    @cached_property
    def rdiv(self) -> np.ndarray:
        """rdiv[b, a] = b / a, i.e. the y with y*a = b."""
        n = self.order
        out = np.empty_like(self.table)
        cols = np.arange(n)[None, :]
        # table[y, a] = b  =>  out[b, a] = y
        out[self.table, cols] = np.arange(n)[:, None]
        return out

    @cached_property
    def right_inverse(self) -> np.ndarray:
        return self.ldiv[:, self.identity]

    @cached_property
    def left_inverse(self) -> np.ndarray:
        return self.rdiv[self.identity, :]

    def inv(self, a):
        return self.right_inverse[a]

    @cached_property
    def digest(self) -> str:
        return digest({"id": self.identity, "table": self.table.tolist()})

    def to_json(self) -> dict:
        out = {"order": self.order, "id": self.identity, "table": self.table.tolist()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    def __repr__(self):
        return f"<FiniteLoop order={self.order}>"


def validate_loop(table, identity: int | None = None, labels=None) -> FiniteLoop:
    """Check the Latin-square and identity axioms and wrap the table."""
    try:
        T = np.array(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise LoopError(f"table is not a rectangular integer array: {exc}") from exc
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise LoopError(f"table must be a non-empty square array, got shape {T.shape}")
    n = T.shape[0]
    if n > TABLE_CAP:
        raise ResourceError(f"order {n} exceeds the table cap {TABLE_CAP}")
    bad = (T < 0) | (T >= n)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        raise LoopError(f"cell ({r},{c}) holds {T[r, c]}, outside 0..{n - 1}")
    ref = np.arange(n)
    for axis, name in ((1, "row"), (0, "column")):
        srt = np.sort(T, axis=axis)
        ok = (srt == (ref[None, :] if axis == 1 else ref[:, None])).all(axis=axis)
        if not ok.all():
            i = int(np.argmin(ok))
            line = T[i] if axis == 1 else T[:, i]
            vals, counts = np.unique(line, return_counts=True)
            raise LoopError(f"{name} {i} repeats value {int(vals[counts > 1][0])}")
    ids = [e for e in range(n) if (T[e] == ref).all() and (T[:, e] == ref).all()]
    if identity is None:
        if not ids:
            raise LoopError("no two-sided identity element")
        identity = ids[0]
    elif identity not in ids:
        raise LoopError(f"element {identity} is not a two-sided identity")
    return FiniteLoop(T, identity, labels)


def left_div(L: FiniteLoop, a, b):
    return L.ldiv[a, b]


def right_div(L: FiniteLoop, a, b):
    """The y with y*a = b."""
    return L.rdiv[b, a]


# ---------------------------------------------------------------------------
# identities


def check_ip(L: FiniteLoop) -> VerificationReport:
    """Inverse property x^-1(xy) = y and (yx)x^-1 = y."""
    with timed() as t:
        T, n = L.table, L.order
        r, l = L.right_inverse, L.left_inverse
        diff = np.nonzero(r != l)[0]
        if len(diff):
            x = int(diff[0])
            rep = VerificationReport(
                "ip", False, "exhaustive", 0,
                {"reason": "left and right inverses differ", "x": x, "right": int(r[x]), "left": int(l[x])},
            )
        else:
            X = np.arange(n)
            left_bad = T[r[:, None], T] != X[None, :]
            right_bad = T[T.T, r[:, None]] != X[None, :]
            rep = VerificationReport("ip", True, "exhaustive", n * n)
            for law, bad in (("x^-1(xy) = y", left_bad), ("(yx)x^-1 = y", right_bad)):
                hit = np.argwhere(bad)
                if len(hit):
                    x, y = (int(v) for v in hit[0])
                    rep = VerificationReport("ip", False, "exhaustive", n * n, {"law": law, "x": x, "y": y})
                    break
    rep.ms = t.ms
    return rep


MOUFANG_FORMS = {
    "M1": "(xy)(zx) = (x(yz))x",
    "M2": "(xy)(zx) = x((yz)x)",
    "left": "((xy)x)z = x(y(xz))",
    "right": "((zx)y)x = z(x(yx))",
}


def _moufang_sides(mul, form, x, y, z):
    if form == "M1":
        return mul(mul(x, y), mul(z, x)), mul(mul(x, mul(y, z)), x)
    if form == "M2":
        return mul(mul(x, y), mul(z, x)), mul(x, mul(mul(y, z), x))
    if form == "left":
        return mul(mul(mul(x, y), x), z), mul(x, mul(y, mul(x, z)))
    if form == "right":
        return mul(mul(mul(z, x), y), x), mul(z, mul(x, mul(y, x)))
    raise ValueError(f"unknown Moufang form {form!r}")


def check_moufang(
    L,
    mode: str = "exhaustive",
    samples: int = 100_000,
    seed: int = 42,
    triple_bound: int = DEFAULT_TRIPLE_BOUND,
    form: str = "M1",
) -> VerificationReport:
    """One Moufang identity over all (or sampled) triples; default (xy)(zx) = (x(yz))x."""
    n = L.order
    with timed() as t:
        if mode == "exhaustive":
            if n**3 > triple_bound:
                raise ResourceError(f"{n}^3 triples exceed the bound {triple_bound}; use sampled mode")
            rep = VerificationReport("moufang-loop", True, "exhaustive", n**3, details={"form": MOUFANG_FORMS[form]})
            Y = np.arange(n)[:, None]
            Z = np.arange(n)[None, :]
            for x in range(n):
                lhs, rhs = _moufang_sides(L.mul, form, x, Y, Z)
                bad = lhs != rhs
                if bad.any():
                    y, z = (int(v) for v in np.argwhere(bad)[0])
                    rep = VerificationReport(
                        "moufang-loop", False, "exhaustive", x * n * n + y * n + z + 1,
                        {"x": x, "y": y, "z": z}, {"form": MOUFANG_FORMS[form]},
                    )
                    break
        elif mode == "sampled":
            rng = np.random.default_rng(seed)
            x, y, z = (rng.integers(0, n, size=samples) for _ in range(3))
            lhs, rhs = _moufang_sides(L.mul, form, x, y, z)
            bad = np.nonzero(lhs != rhs)[0]
            details = {"form": MOUFANG_FORMS[form], "seed": seed}
            if len(bad):
                i = int(bad[0])
                rep = VerificationReport(
                    "moufang-loop", False, "sampled", i + 1, {"x": int(x[i]), "y": int(y[i]), "z": int(z[i])}, details
                )
            else:
                rep = VerificationReport("moufang-loop", True, "sampled", samples, details=details)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    rep.ms = t.ms
    return rep


def check_associative(L: FiniteLoop) -> VerificationReport:
    T, n = L.table, L.order
    Y = np.arange(n)[:, None]
    Z = np.arange(n)[None, :]
    for x in range(n):
        bad = T[T[x, Y], Z] != T[x, T[Y, Z]]
        if bad.any():
            y, z = (int(v) for v in np.argwhere(bad)[0])
            return VerificationReport("associative", False, "exhaustive", witness={"x": x, "y": y, "z": z})
    return VerificationReport("associative", True, "exhaustive", n**3)


def element_order(L: FiniteLoop, x: int) -> int | None:
    """Least k with the left-nested power ((x x) x ...) x (k factors) equal to the identity."""
    p, k = x, 1
    while p != L.identity:
        p = int(L.table[p, x])
        k += 1
        if k > L.order:
            return None
    return k


# ---------------------------------------------------------------------------
# subloops


@dataclass(frozen=True, eq=False)
class Subloop:
    parent: object
    members: tuple

    def __post_init__(self):
        m = tuple(sorted({int(v) for v in self.members}))
        object.__setattr__(self, "members", m)
        if self.parent.identity not in m:
            raise StructureError("subloop must contain the identity")
        arr = np.array(m)
        mask = self.mask
        if isinstance(self.parent, FiniteLoop) or len(arr) <= 3000:
            prods = self.parent.mul(arr[:, None], arr[None, :])
        else:
            # implicit parents with large member sets: a fixed-seed sample of pairs
            rng = np.random.default_rng(0)
            a, b = rng.choice(arr, 100_000), rng.choice(arr, 100_000)
            prods = self.parent.mul(a, b)
        if not mask[prods].all():
            raise StructureError("member set is not closed under the product")
        if isinstance(self.parent, FiniteLoop):
            for div in (self.parent.ldiv, self.parent.rdiv):
                if not mask[div[np.ix_(arr, arr)]].all():
                    raise StructureError("member set is not closed under division")

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[list(self.members)] = True
        return mask

    @property
    def array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    @property
    def size(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return bool(self.mask[int(x)])

    def __eq__(self, other):
        return isinstance(other, Subloop) and other.parent is self.parent and other.members == self.members

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def as_loop(self) -> tuple[FiniteLoop, np.ndarray]:
        """The subloop as a standalone loop; returns ``(loop, members)`` with members[i] the parent index of i."""
        arr = self.array
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[arr] = np.arange(len(arr))
        sub = pos[self.parent.mul(arr[:, None], arr[None, :])]
        return FiniteLoop(sub, int(pos[self.parent.identity])), arr

    def to_json(self) -> dict:
        return {"parent": getattr(self.parent, "digest", None), "members": list(self.members)}

    def __repr__(self):
        return f"<Subloop size={self.size} of order {self.parent.order}>"


def _close(L: FiniteLoop, mask: np.ndarray, frontier: np.ndarray | None = None) -> np.ndarray:
    """Closure of a member mask under product and both divisions."""
    mask = mask.copy()
    mask[L.identity] = True
    F = np.nonzero(mask)[0] if frontier is None else np.asarray(frontier)
    T, ld, rd = L.table, L.ldiv, L.rdiv
    while len(F):
        S = np.nonzero(mask)[0]
        cand = np.concatenate(
            [
                T[np.ix_(F, S)].ravel(), T[np.ix_(S, F)].ravel(),
                ld[np.ix_(F, S)].ravel(), ld[np.ix_(S, F)].ravel(),
                rd[np.ix_(F, S)].ravel(), rd[np.ix_(S, F)].ravel(),
            ]
        )
        cand = np.unique(cand)
        F = cand[~mask[cand]]
        mask[F] = True
    return mask


def subloop_generated(L: FiniteLoop, gens: Iterable[int]) -> Subloop:
    mask = np.zeros(L.order, dtype=bool)
    mask[[int(g) for g in gens]] = True
    return Subloop(L, tuple(np.nonzero(_close(L, mask))[0]))


def all_subloops(L: FiniteLoop) -> list[Subloop]:
    """Every subloop, by adjoining one element at a time to subloops already found."""
    start = subloop_generated(L, [])
    seen = {start.members: start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for g in range(L.order):
                if g in S:
                    continue
                mask = S.mask.copy()
                mask[g] = True
                m = tuple(np.nonzero(_close(L, mask, np.array([g])))[0])
                if m not in seen:
                    seen[m] = Subloop(L, m)
                    nxt.append(seen[m])
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.size, s.members))


# ---------------------------------------------------------------------------
# normality


def is_normal(
    L, K: Subloop, mode: str = "exhaustive", samples: int = 10_000, seed: int = 42, shortcut: bool = True
) -> VerificationReport:
    """Set-wise normality: xK = Kx, x(yK) = (xy)K and (Kx)y = K(xy) for all x, y.

    The report is truthy iff K is normal; a failing (x, y) pair is the witness.
    With ``shortcut`` the subloops {e} and L are accepted without evaluation.
    """
    if K.parent is not L:
        raise StructureError("subloop of a different loop")
    with timed() as t:
        if shortcut and K.size in (1, L.order):
            rep = VerificationReport("normal", True, mode, 0, details={"size": K.size, "trivial": True})
        elif mode == "exhaustive":
            if not isinstance(L, FiniteLoop):
                raise ResourceError("exhaustive normality needs an explicit table; use sampled mode")
            rep = _normal_exhaustive(L, K)
        elif mode == "sampled":
            rep = _normal_sampled(L, K, samples, seed)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    rep.ms = t.ms
    return rep


def _block_ids(rows: np.ndarray) -> np.ndarray:
    """Equal ids for rows holding the same set."""
    _, ids = np.unique(np.sort(rows, axis=1), axis=0, return_inverse=True)
    return ids.ravel().astype(np.int32)


def _normal_exhaustive(L: FiniteLoop, K: Subloop) -> VerificationReport:
    """Set-wise normality in O(n^2).

    Once the left cosets yK partition L, x(yK) = (xy)K for all y says exactly
    that left multiplication by x maps each coset into a single coset, which is
    a column comparison on the matrix of coset ids of products. Right cosets
    are handled the same way.
    """
    T, n = L.table, L.order
    Ka = K.array
    total = n * (2 * n + 1)

    def fail(law, x, y, checked):
        return VerificationReport("normal", False, "exhaustive", checked, {"law": law, "x": int(x), "y": int(y)})

    left, right = T[:, Ka], T[Ka, :].T  # row y: yK and Ky
    same = (np.sort(left, axis=1) == np.sort(right, axis=1)).all(axis=1)
    if not same.all():
        x = int(np.argmin(same))
        return fail("xK = Kx", x, L.identity, x + 1)
    lid, rid = _block_ids(left), _block_ids(right)
    # cosets must partition L: z in yK forces zK = yK
    bad = lid[left] != lid[:, None]
    if bad.any():
        y, j = np.argwhere(bad)[0]
        return fail("x(yK) = (xy)K", y, Ka[j], n + 1)
    bad = rid[right] != rid[:, None]
    if bad.any():
        y, j = np.argwhere(bad)[0]
        return fail("(Kx)y = K(xy)", Ka[j], y, n + 1)
    _, first = np.unique(lid, return_index=True)
    lrep = first[lid]  # a representative y with z in yK
    _, first = np.unique(rid, return_index=True)
    rrep = first[rid]
    M = lid[T]  # M[x, z] = id of (xz)K
    bad = M != M[:, lrep]
    if bad.any():
        x, z = np.argwhere(bad)[0]
        return fail("x(yK) = (xy)K", x, lrep[z], total // 2)
    M = rid[T]  # M[z, y] = id of K(zy)
    bad = M != M[rrep, :]
    if bad.any():
        z, y = np.argwhere(bad)[0]
        return fail("(Kx)y = K(xy)", rrep[z], y, total)
    return VerificationReport("normal", True, "exhaustive", total, details={"size": len(Ka)})


def _normal_sampled(L, K: Subloop, samples: int, seed: int) -> VerificationReport:
    """The three set-wise laws at ``samples`` random (x, y) pairs, evaluated in batches."""
    rng = np.random.default_rng(seed)
    Ka = K.array[None, :]
    mul = L.mul
    xs = rng.integers(0, L.order, size=samples)
    ys = rng.integers(0, L.order, size=samples)
    step = max(1, 2**18 // K.size)
    laws = ("xK = Kx", "x(yK) = (xy)K", "(Kx)y = K(xy)")
    for s in range(0, samples, step):
        x, y = xs[s : s + step, None], ys[s : s + step, None]
        xy = mul(x, y)
        pairs = (
            (mul(x, Ka), mul(Ka, x)),
            (mul(x, mul(y, Ka)), mul(xy, Ka)),
            (mul(mul(Ka, x), y), mul(Ka, xy)),
        )
        bad = np.stack([(np.sort(a, axis=1) != np.sort(b, axis=1)).any(axis=1) for a, b in pairs])
        if bad.any():
            i = int(np.nonzero(bad.any(axis=0))[0][0])
            law = laws[int(np.argmax(bad[:, i]))]
            return VerificationReport(
                "normal", False, "sampled", s + i + 1, {"law": law, "x": int(xs[s + i]), "y": int(ys[s + i])}, {"seed": seed}
            )
    return VerificationReport("normal", True, "sampled", samples, details={"seed": seed, "size": K.size})


def _inner_raw(L: FiniteLoop, m: int) -> np.ndarray:
    T, ld, rd = L.table, L.ldiv, L.rdiv
    X = np.arange(L.order)
    t_img = ld[X, T[m, X]]  # x \ (m x)
    r_img = rd[T[T[m, :], :], T]  # ((m x) y) / (x y)
    xm = T[:, m]
    l_img = ld[T.T, T[:, xm].T]  # (y x) \ (y (x m))
    return np.concatenate([t_img, r_img.ravel(), l_img.ravel()])


def inner_images(L: FiniteLoop, m: int) -> np.ndarray:
    """Images of m under every T_x, R_{x,y}, L_{x,y}, as a sorted unique array."""
    return np.unique(_inner_raw(L, m))


def normal_closure(L: FiniteLoop, S: Iterable[int]) -> Subloop:
    """Smallest normal subloop containing S.

    Subloop closure alternates with adding inner-mapping images of members.
    Whenever the closure grows it is tested with the set-wise normality check,
    which is cheaper than sweeping the images of every remaining member.
    """
    n = L.order
    mask = np.zeros(n, dtype=bool)
    mask[[int(s) for s in S]] = True
    mask = _close(L, mask)
    processed = np.zeros(n, dtype=bool)
    grew = True
    while not mask.all():
        if grew:
            members = tuple(np.nonzero(mask)[0])
            if _normal_exhaustive(L, Subloop(L, members)).verdict:
                break
            grew = False
        todo = np.nonzero(mask & ~processed)[0]
        if not len(todo):
            break
        m = int(todo[0])
        processed[m] = True
        img = _inner_raw(L, m)
        new = np.unique(img[~mask[img]])
        if len(new):
            mask[new] = True
            mask = _close(L, mask, new)
            grew = True
    return Subloop(L, tuple(np.nonzero(mask)[0]))


def normal_product(L: FiniteLoop, K1: Subloop, K2: Subloop) -> Subloop:
    """Smallest normal subloop containing the normal subloops K1 and K2."""
    for K in (K1, K2):
        rep = is_normal(L, K)
        if not rep:
            raise ContractError(f"normal_product needs normal subloops; {K!r} fails {rep.witness}")
    return normal_closure(L, set(K1.members) | set(K2.members))


def setwise_product(L, K1: Subloop, K2: Subloop) -> np.ndarray:
    """{k1 k2} as a sorted array (brute force)."""
    return np.unique(L.mul(K1.array[:, None], K2.array[None, :]))


# ---------------------------------------------------------------------------
# homomorphisms and quotients


@dataclass(frozen=True, eq=False)
class LoopHom:
    source: object
    target: object
    map: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "map", np.asarray(self.map, dtype=np.int64))
        if self.map.shape != (self.source.order,):
            raise StructureError("map must assign an image to every source element")

    def __call__(self, x):
        return self.map[x]

    def verify(self) -> VerificationReport:
        """Homomorphism law on all pairs and identity preservation."""
        m = self.map
        if (m < 0).any() or (m >= self.target.order).any():
            return VerificationReport("hom", False, witness={"reason": "image index out of range"})
        if m[self.source.identity] != self.target.identity:
            return VerificationReport("hom", False, witness={"reason": "identity not preserved"})
        n = self.source.order
        X = np.arange(n)
        bad = m[self.source.mul(X[:, None], X[None, :])] != self.target.mul(m[:, None], m[None, :])
        if bad.any():
            x, y = (int(v) for v in np.argwhere(bad)[0])
            return VerificationReport("hom", False, "exhaustive", n * n, {"reason": "map(xy) != map(x)map(y)", "x": x, "y": y})
        return VerificationReport("hom", True, "exhaustive", n * n)

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == len(self.map)

    def to_json(self) -> dict:
        return {
            "source": getattr(self.source, "digest", None),
            "target": getattr(self.target, "digest", None),
            "map": self.map.tolist(),
        }


def quotient_loop(L: FiniteLoop, K: Subloop) -> tuple[FiniteLoop, LoopHom]:
    """L/K on left cosets xK; the table is checked to be independent of representatives."""
    T, n = L.table, L.order
    C = T[:, K.array]  # row x is the coset xK
    label = C.min(axis=1)
    if not (label[C] == label[:, None]).all():
        raise ContractError("cosets do not partition the loop; K is not normal")
    reps, proj = np.unique(label, return_inverse=True)
    Qt = proj[T[np.ix_(reps, reps)]]
    X = np.arange(n)
    if not (proj[T] == Qt[proj[X][:, None], proj[X][None, :]]).all():
        raise ContractError("coset product depends on representatives; K is not normal")
    Q = validate_loop(Qt, int(proj[L.identity]))
    return Q, LoopHom(L, Q, proj)


def center_loop(L: FiniteLoop) -> Subloop:
    """Elements that commute and associate with every pair."""
    T, n = L.table, L.order
    comm = (T == T.T).all(axis=0)
    X = np.arange(n)[:, None]
    Y = np.arange(n)[None, :]
    members = []
    for c in np.nonzero(comm)[0]:
        if (
            (T[c, T[X, Y]] == T[T[c, X], Y]).all()
            and (T[X, T[c, Y]] == T[T[X, c], Y]).all()
            and (T[T[X, Y], c] == T[X, T[Y, c]]).all()
        ):
            members.append(int(c))
    return Subloop(L, tuple(members))


# ---------------------------------------------------------------------------
# simplicity


@dataclass
class SimplicityCertificate:
    simple: bool
    order: int
    reason: str
    closure_sizes: dict = field(default_factory=dict)
    derived_from: dict = field(default_factory=dict)
    closures: list = field(default_factory=list)
    witness: Subloop | None = None

    def __bool__(self):
        return self.simple

    def to_dict(self) -> dict:
        return {
            "simple": self.simple,
            "order": self.order,
            "reason": self.reason,
            "closure_sizes": {str(k): v for k, v in sorted(self.closure_sizes.items())},
            "computed_closures": len(self.closures),
            "full_closures": sum(1 for v in self.closure_sizes.values() if v == self.order),
            "witness": None if self.witness is None else list(self.witness.members),
        }


def is_simple(L: FiniteLoop, share_orbits: bool = True) -> SimplicityCertificate:
    """True iff the normal closure of every non-identity element is the whole loop.

    With ``share_orbits`` an element reached from g by one inner mapping (or
    inversion) inherits g's closure: normal subloops are invariant under inner
    mappings, so such elements generate the same normal subloop.
    """
    n = L.order
    if n > TABLE_CAP:
        raise ResourceError(f"order {n} exceeds the table cap")
    if n == 1:
        return SimplicityCertificate(False, 1, "trivial loop: simplicity needs a nontrivial loop")
    cert = SimplicityCertificate(True, n, "every non-identity element has normal closure equal to the loop")
    for g in range(n):
        if g == L.identity or g in cert.closure_sizes:
            continue
        K = normal_closure(L, [g])
        cert.closures.append(K)
        cert.closure_sizes[g] = K.size
        if K.size < n:
            cert.simple = False
            cert.witness = K
            cert.reason = f"normal closure of {g} is a proper normal subloop of order {K.size}"
            return cert
        if share_orbits:
            related = np.union1d(inner_images(L, g), [int(L.right_inverse[g])])
            for h in related:
                h = int(h)
                if h != L.identity and h not in cert.closure_sizes:
                    cert.closure_sizes[h] = K.size
                    cert.derived_from[h] = g
    return cert


# ---------------------------------------------------------------------------
# embeddings


@dataclass
class EmbeddingResult:
    status: str  # "found" | "exhausted" | "inconclusive"
    hom: LoopHom | None
    nodes: int
    generators: list
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "nodes": self.nodes,
            "generators": self.generators,
            "reason": self.reason,
            "map": None if self.hom is None else self.hom.map.tolist(),
        }


def greedy_generators(L: FiniteLoop) -> list[int]:
    """A small generating set: repeatedly add the element enlarging the generated subloop most."""
    gens: list[int] = []
    mask = _close(L, np.zeros(L.order, dtype=bool))
    while not mask.all():
        best, best_mask = -1, None
        for g in np.nonzero(~mask)[0]:
            m = mask.copy()
            m[g] = True
            m = _close(L, m, np.array([g]))
            if best_mask is None or m.sum() > best_mask.sum():
                best, best_mask = int(g), m
        gens.append(best)
        mask = best_mask
    return gens


def _expansion_plan(Q: FiniteLoop, gens: list[int]):
    """Per generator level: new elements as products (elem, left, right) of already reached elements."""
    T = Q.table
    reached = [Q.identity]
    seen = np.zeros(Q.order, dtype=bool)
    seen[Q.identity] = True
    plans, levels = [], []
    for g in gens:
        plan = []
        if not seen[g]:
            seen[g] = True
            reached.append(g)
            queue = [g]
            while queue:
                a = queue.pop(0)
                for b in list(reached):
                    for left, right in ((a, b), (b, a)):
                        c = int(T[left, right])
                        if not seen[c]:
                            seen[c] = True
                            reached.append(c)
                            queue.append(c)
                            plan.append((c, left, right))
        plans.append(plan)
        levels.append(np.array(reached, dtype=np.int64))
    return plans, levels


def find_embedding(Q: FiniteLoop, L: FiniteLoop, node_cap: int = DEFAULT_NODE_CAP) -> EmbeddingResult:
    """Backtracking search for an injective homomorphism Q -> L.

    Generator images are tried in increasing index order, so the first
    embedding found (and the node count) is reproducible.
    """
    if Q.order > L.order:
        return EmbeddingResult("exhausted", None, 0, [], f"|Q| = {Q.order} > |L| = {L.order}")
    gens = greedy_generators(Q)
    plans, levels = _expansion_plan(Q, gens)
    q_orders = {g: element_order(Q, g) for g in gens}
    l_orders = np.array([element_order(L, x) or 0 for x in range(L.order)])
    Qt, Lt = Q.table, L.table
    image = np.full(Q.order, -1, dtype=np.int64)
    used = np.zeros(L.order, dtype=bool)
    image[Q.identity] = L.identity
    used[L.identity] = True
    nodes = 0

    def extend(level: int) -> bool | None:
        nonlocal nodes
        if level == len(gens):
            return True
        g = gens[level]
        candidates = np.nonzero((l_orders == (q_orders[g] or 0)) & ~used)[0]
        for c in candidates:
            nodes += 1
            if nodes > node_cap:
                return None
            assigned = [g]
            image[g] = c
            used[c] = True
            ok = True
            for elem, left, right in plans[level]:
                v = Lt[image[left], image[right]]
                if used[v]:
                    ok = False
                    break
                image[elem] = v
                used[v] = True
                assigned.append(elem)
            if ok:
                S = levels[level]
                ok = bool((image[Qt[np.ix_(S, S)]] == Lt[np.ix_(image[S], image[S])]).all())
            if ok:
                res = extend(level + 1)
                if res is None or res:
                    return res
            for e in assigned:
                used[image[e]] = False
                image[e] = -1
        return False

    res = extend(0)
    if res is None:
        return EmbeddingResult("inconclusive", None, nodes, gens, f"node cap {node_cap} reached")
    if not res:
        return EmbeddingResult("exhausted", None, nodes, gens, "search space exhausted")
    hom = LoopHom(Q, L, image.copy())
    if not hom.verify() or not hom.is_injective:
        raise ContractError("embedding search returned an invalid map")
    return EmbeddingResult("found", hom, nodes, gens)
