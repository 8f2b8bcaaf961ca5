"""Finite-dimensional algebras given by structure constants.

An algebra over a :class:`~moufang_lab.scalars.ScalarRing` is described by
``constants[i][j][k]`` with ``e_i * e_j = sum_k constants[i][j][k] e_k`` and a
unit vector. Besides products and associators the module provides the unit
set, two-sided ideals and their sums, quotients, and the set of quasiregular
elements. Algebras over a prime field get a vectorized numpy fast path for
exhaustive sweeps; every other ring falls back to exact Python arithmetic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from ._engine import PrimeFieldEngine
from .errors import ContractError, ResourceError, StructureError, UnsupportedError
from .reports import VerificationReport, digest, timed
from .scalars import PrimeField, Scalar, ScalarRing

DEFAULT_ELEMENT_BOUND = 10**6
DEFAULT_TRIPLE_BOUND = 10**9
# largest algebra for which a full |A| x |A| index product table is materialized
TABLE_BOUND = 4096


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    ring: ScalarRing
    dim: int
    constants: tuple
    unit: tuple
    labels: tuple | None = None
    model: dict = field(default_factory=dict)

    def __post_init__(self):
        ring, d = self.ring, self.dim
        if d < 1:
            raise StructureError("dimension must be positive")
        try:
            table = tuple(
                tuple(tuple(ring.parse(c) for c in self.constants[i][j]) for j in range(d)) for i in range(d)
            )
            unit = tuple(ring.parse(c) for c in self.unit)
        except (IndexError, TypeError) as exc:
            raise StructureError(f"constants table does not have shape {d}x{d}x{d}: {exc}") from exc
        if any(len(table[i][j]) != d for i in range(d) for j in range(d)) or len(self.constants) != d:
            raise StructureError(f"constants table does not have shape {d}x{d}x{d}")
        if len(unit) != d:
            raise StructureError(f"unit has length {len(unit)}, expected {d}")
        object.__setattr__(self, "constants", table)
        object.__setattr__(self, "unit", unit)
        if self.labels is not None:
            if len(self.labels) != d:
                raise StructureError("labels must name every basis element")
            object.__setattr__(self, "labels", tuple(self.labels))
        for i in range(d):
            e = self._basis_raw(i)
            if self.mul_raw(unit, e) != e:
                raise StructureError(f"unit*e_{i} != e_{i}: unit fails at basis index {i}")
            if self.mul_raw(e, unit) != e:
                raise StructureError(f"e_{i}*unit != e_{i}: unit fails at basis index {i}")

    # construction helpers
    @cached_property
    def _sparse(self) -> list[list[list[tuple[int, object]]]]:
        z = self.ring.is_zero
        return [
            [[(k, c) for k, c in enumerate(self.constants[i][j]) if not z(c)] for j in range(self.dim)]
            for i in range(self.dim)
        ]

    def _basis_raw(self, i: int) -> tuple:
        r = self.ring
        return tuple(r.one if k == i else r.zero for k in range(self.dim))

    @cached_property
    def engine(self) -> PrimeFieldEngine | None:
        if not isinstance(self.ring, PrimeField):
            return None
        C = np.array(self.constants, dtype=np.int64)
        return PrimeFieldEngine(self.ring.p, C, np.array(self.unit, dtype=np.int64))

    @property
    def is_finite(self) -> bool:
        return self.ring.is_finite

    @property
    def size(self) -> int | None:
        q = self.ring.size
        return None if q is None else q**self.dim

    @cached_property
    def digest(self) -> str:
        return digest({"ring": self.ring.descriptor(), "table": self.constants_json(), "unit": self.unit_json()})

    def constants_json(self) -> list:
        tj = self.ring.to_json
        return [[[tj(c) for c in self.constants[i][j]] for j in range(self.dim)] for i in range(self.dim)]

    def unit_json(self) -> list:
        return [self.ring.to_json(c) for c in self.unit]

    def to_spec(self) -> dict:
        spec = {
            "kind": "constants",
            "ring": self.ring.descriptor(),
            "dim": self.dim,
            "table": self.constants_json(),
            "unit": self.unit_json(),
        }
        if self.labels:
            spec["labels"] = list(self.labels)
        if self.model:
            spec["model"] = self.model
        return spec

    # arithmetic on raw coordinate tuples
    def mul_raw(self, x: Sequence, y: Sequence) -> tuple:
        ring = self.ring
        add, mul, z = ring.add, ring.mul, ring.is_zero
        out = [ring.zero] * self.dim
        sp = self._sparse
        for i, xi in enumerate(x):
            if z(xi):
                continue
            row = sp[i]
            for j, yj in enumerate(y):
                if z(yj):
                    continue
                f = mul(xi, yj)
                for k, c in row[j]:
                    out[k] = add(out[k], mul(f, c))
        return tuple(out)

    def add_raw(self, x, y) -> tuple:
        return tuple(self.ring.add(a, b) for a, b in zip(x, y))

    def sub_raw(self, x, y) -> tuple:
        return tuple(self.ring.sub(a, b) for a, b in zip(x, y))

    def scale_raw(self, s, x) -> tuple:
        return tuple(self.ring.mul(s, a) for a in x)

    def left_matrix(self, x) -> list[list]:
        """Matrix L with (x*y)_k = sum_j L[k][j] y_j."""
        ring, d = self.ring, self.dim
        L = [[ring.zero] * d for _ in range(d)]
        for i, xi in enumerate(x):
            if ring.is_zero(xi):
                continue
            for j in range(d):
                for k, c in self._sparse[i][j]:
                    L[k][j] = ring.add(L[k][j], ring.mul(xi, c))
        return L

    def right_matrix(self, y) -> list[list]:
        """Matrix R with (x*y)_k = sum_i R[k][i] x_i."""
        ring, d = self.ring, self.dim
        R = [[ring.zero] * d for _ in range(d)]
        for j, yj in enumerate(y):
            if ring.is_zero(yj):
                continue
            for i in range(d):
                for k, c in self._sparse[i][j]:
                    R[k][i] = ring.add(R[k][i], ring.mul(yj, c))
        return R

    # elements
    def element(self, coords: Iterable) -> "AlgElement":
        return AlgElement(self, tuple(self.ring.parse(c) for c in coords))

    def basis(self, i: int) -> "AlgElement":
        return AlgElement(self, self._basis_raw(i))

    def zero(self) -> "AlgElement":
        return AlgElement(self, (self.ring.zero,) * self.dim)

    def one(self) -> "AlgElement":
        return AlgElement(self, self.unit)

    def _require_finite(self, bound: int) -> int:
        if not self.is_finite:
            raise UnsupportedError(f"exhaustive mode needs a finite ring, got {self.ring}")
        if self.size > bound:
            raise ResourceError(f"|A| = {self.size} exceeds the element bound {bound}")
        return self.size

    def coords_iter(self) -> Iterator[tuple]:
        """All coordinate tuples in lexicographic order."""
        return itertools.product(list(self.ring.elements()), repeat=self.dim)

    def index_of(self, coords: Sequence) -> int:
        q, idx = self.ring.size, 0
        for c in coords:
            idx = idx * q + self.ring.index(c)
        return idx

    def coords_at(self, idx: int) -> tuple:
        q = self.ring.size
        elems = list(self.ring.elements())
        out = []
        for _ in range(self.dim):
            idx, r = divmod(idx, q)
            out.append(elems[r])
        return tuple(reversed(out))

    def random_raw(self, rng: random.Random) -> tuple:
        return tuple(self.ring.random(rng) for _ in range(self.dim))

    def format(self, coords) -> str:
        names = self.labels or tuple(f"e{i}" for i in range(self.dim))
        tj = self.ring.to_json
        terms = [f"{tj(c)}*{n}" for c, n in zip(coords, names) if not self.ring.is_zero(c)]
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        name = self.model.get("kind", "algebra")
        return f"<StructureAlgebra {name} dim={self.dim} over {self.ring}>"


@dataclass(frozen=True)
class AlgElement:
    algebra: StructureAlgebra
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise StructureError(f"element has {len(self.coords)} coordinates, algebra has dim {self.algebra.dim}")

    def _same(self, other: "AlgElement"):
        if not isinstance(other, AlgElement) or other.algebra is not self.algebra:
            raise StructureError("elements belong to different algebras")

    def __add__(self, other):
        self._same(other)
        return AlgElement(self.algebra, self.algebra.add_raw(self.coords, other.coords))

    def __sub__(self, other):
        self._same(other)
        return AlgElement(self.algebra, self.algebra.sub_raw(self.coords, other.coords))

    def __neg__(self):
        ring = self.algebra.ring
        return AlgElement(self.algebra, tuple(ring.neg(c) for c in self.coords))

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return multiply(self.algebra, self, other)
        s = self.algebra.ring.parse(other)
        return AlgElement(self.algebra, self.algebra.scale_raw(s, self.coords))

    def __rmul__(self, other):
        s = self.algebra.ring.parse(other)
        return AlgElement(self.algebra, self.algebra.scale_raw(s, self.coords))

    def is_zero(self) -> bool:
        return all(self.algebra.ring.is_zero(c) for c in self.coords)

    @property
    def scalars(self) -> tuple[Scalar, ...]:
        return tuple(Scalar(self.algebra.ring, c) for c in self.coords)

    def to_json(self) -> list:
        return [self.algebra.ring.to_json(c) for c in self.coords]

    def __repr__(self):
        return f"AlgElement({self.algebra.format(self.coords)})"


def _check_owner(A: StructureAlgebra, *xs: AlgElement):
    for x in xs:
        if x.algebra is not A:
            raise StructureError("element does not belong to this algebra")


def multiply(A: StructureAlgebra, x: AlgElement, y: AlgElement) -> AlgElement:
    _check_owner(A, x, y)
    return AlgElement(A, A.mul_raw(x.coords, y.coords))


def associator(A: StructureAlgebra, x: AlgElement, y: AlgElement, z: AlgElement) -> AlgElement:
    """(x*y)*z - x*(y*z)."""
    _check_owner(A, x, y, z)
    m = A.mul_raw
    return AlgElement(A, A.sub_raw(m(m(x.coords, y.coords), z.coords), m(x.coords, m(y.coords, z.coords))))


# ---------------------------------------------------------------------------
# identity checks


def index_table(A: StructureAlgebra) -> np.ndarray:
    """Multiplication table on lexicographic element indices (finite A, |A| <= TABLE_BOUND)."""
    n = A._require_finite(TABLE_BOUND)
    if A.engine is not None:
        return A.engine.product_table()
    elems = list(A.coords_iter())
    T = np.empty((n, n), dtype=np.int64)
    for a, x in enumerate(elems):
        for b, y in enumerate(elems):
            T[a, b] = A.index_of(A.mul_raw(x, y))
    return T


def _first_true(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    return None if len(hits) == 0 else tuple(int(v) for v in hits[0])


def _check_mode(mode: str):
    if mode not in ("exhaustive", "sampled"):
        raise UnsupportedError(f"unknown mode {mode!r}; use 'exhaustive' or 'sampled'")


def check_alternative(
    A: StructureAlgebra,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 42,
    bound: int = DEFAULT_ELEMENT_BOUND,
) -> VerificationReport:
    """Left and right alternative laws (x,x,y) = 0 = (y,x,x)."""
    _check_mode(mode)
    with timed() as t:
        if mode == "sampled":
            rep = _alternative_sampled(A, samples, seed)
        else:
            n = A._require_finite(bound)
            if n <= TABLE_BOUND:
                rep = _alternative_table(A, index_table(A))
            elif A.engine is not None:
                rep = _alternative_engine(A)
            else:
                rep = _alternative_generic(A)
    rep.ms = t.ms
    return rep


def _alternative_table(A, T) -> VerificationReport:
    n = T.shape[0]
    X = np.arange(n)
    XX = T[X, X]
    left_bad = T[XX[:, None], X[None, :]] != T[X[:, None], T]
    right_bad = T[T.T, X[:, None]] != T[X[None, :], XX[:, None]]
    witness = None
    for law, bad in (("left", left_bad), ("right", right_bad)):
        hit = _first_true(bad)
        if hit is not None:
            x, y = hit
            witness = {"law": law, "x": A.coords_at(x), "y": A.coords_at(y)}
            break
    return VerificationReport("alternative", witness is None, "exhaustive", n * n, _json_witness(A, witness))


def _alternative_engine(A, chunk: int = 4096) -> VerificationReport:
    """Exhaustive over all pairs via linearity in y: (x,x,y) = 0 for every y iff
    L_x L_x = L_{x^2}, and (y,x,x) = 0 for every y iff R_x R_x = R_{x^2}.
    A failing row j of the matrices gives the witness y = e_j."""
    eng = A.engine
    n, p = A.size, A.ring.p
    for s in range(0, n, chunk):
        X = eng.decode(np.arange(s, min(n, s + chunk)))
        XX = eng.mul(X, X)
        for law, mats in (("left", eng.left_mats), ("right", eng.right_mats)):
            M, M2 = mats(X), mats(XX)
            bad = ((M @ M) % p != M2).any(axis=2)
            if bad.any():
                i, j = (int(v) for v in np.argwhere(bad)[0])
                y = tuple(A.ring.one if k == j else A.ring.zero for k in range(A.dim))
                w = {"law": law, "x": A.coords_at(s + i), "y": y}
                return VerificationReport("alternative", False, "exhaustive", (s + i) * n + A.index_of(y) + 1, _json_witness(A, w))
    return VerificationReport("alternative", True, "exhaustive", n * n)


def _alternative_pair(A, x, y) -> str | None:
    m = A.mul_raw
    xx = m(x, x)
    if m(xx, y) != m(x, m(x, y)):
        return "left"
    if m(m(y, x), x) != m(y, xx):
        return "right"
    return None


def _alternative_generic(A) -> VerificationReport:
    elems = list(A.coords_iter())
    count = 0
    for x in elems:
        for y in elems:
            count += 1
            law = _alternative_pair(A, x, y)
            if law:
                return VerificationReport("alternative", False, "exhaustive", count, _json_witness(A, {"law": law, "x": x, "y": y}))
    return VerificationReport("alternative", True, "exhaustive", count)


def _alternative_sampled(A, samples, seed) -> VerificationReport:
    rng = random.Random(seed)
    for i in range(samples):
        x, y = A.random_raw(rng), A.random_raw(rng)
        law = _alternative_pair(A, x, y)
        if law:
            return VerificationReport(
                "alternative", False, "sampled", i + 1, _json_witness(A, {"law": law, "x": x, "y": y}), {"seed": seed}
            )
    return VerificationReport("alternative", True, "sampled", samples, details={"seed": seed})


def _json_witness(A, w):
    if w is None:
        return None
    return {k: ([A.ring.to_json(c) for c in v] if isinstance(v, tuple) else v) for k, v in w.items()}


def check_moufang_algebra(
    A: StructureAlgebra,
    mode: str = "exhaustive",
    samples: int = 1000,
    seed: int = 42,
    bound: int = DEFAULT_ELEMENT_BOUND,
    triple_bound: int = DEFAULT_TRIPLE_BOUND,
) -> VerificationReport:
    """The Moufang identity (x*y)*(z*x) = (x*(y*z))*x."""
    _check_mode(mode)
    with timed() as t:
        if mode == "sampled":
            rng = random.Random(seed)
            m = A.mul_raw
            rep = VerificationReport("moufang-algebra", True, "sampled", samples, details={"seed": seed})
            for i in range(samples):
                x, y, z = (A.random_raw(rng) for _ in range(3))
                if m(m(x, y), m(z, x)) != m(m(x, m(y, z)), x):
                    rep = VerificationReport(
                        "moufang-algebra", False, "sampled", i + 1,
                        _json_witness(A, {"x": x, "y": y, "z": z}), {"seed": seed},
                    )
                    break
        else:
            n = A._require_finite(bound)
            if n**3 > triple_bound:
                raise ResourceError(f"|A|^3 = {n**3} exceeds the triple bound {triple_bound}")
            rep = _moufang_table(A, index_table(A))
    rep.ms = t.ms
    return rep


def _moufang_table(A, T) -> VerificationReport:
    n = T.shape[0]
    for x in range(n):
        lhs = T[T[x, :][:, None], T[:, x][None, :]]
        rhs = T[T[x][T], x]
        bad = lhs != rhs
        if bad.any():
            y, z = _first_true(bad)
            w = {"x": A.coords_at(x), "y": A.coords_at(y), "z": A.coords_at(z)}
            return VerificationReport("moufang-algebra", False, "exhaustive", x * n * n + y * n + z + 1, _json_witness(A, w))
    return VerificationReport("moufang-algebra", True, "exhaustive", n**3)


# ---------------------------------------------------------------------------
# units


def _inverse_raw(A: StructureAlgebra, x: Sequence) -> tuple | None:
    # a common solution of x*z = 1 and z*x = 1
    L = A.left_matrix(x)
    R = A.right_matrix(x)
    return linalg.solve(L + R, list(A.unit) + list(A.unit), A.ring)


def inverse(A: StructureAlgebra, x: AlgElement) -> AlgElement | None:
    """Two-sided inverse of x, or None when x is not invertible."""
    _check_owner(A, x)
    z = _inverse_raw(A, x.coords)
    return None if z is None else AlgElement(A, z)


def unit_indices(A: StructureAlgebra, bound: int = DEFAULT_ELEMENT_BOUND, chunk: int = 2048) -> np.ndarray:
    """Lexicographic indices of all invertible elements of a finite algebra."""
    n = A._require_finite(bound)
    eng = A.engine
    if eng is None:
        return np.array([i for i, x in enumerate(A.coords_iter()) if _inverse_raw(A, x) is not None], dtype=np.int64)
    found = []
    rhs = np.concatenate([eng.unit, eng.unit])
    for s in range(0, n, chunk):
        X = eng.decode(np.arange(s, min(n, s + chunk)))
        L = np.transpose(eng.left_mats(X), (0, 2, 1))
        R = np.transpose(eng.right_mats(X), (0, 2, 1))
        ok, _ = eng.solve_batch(np.concatenate([L, R], axis=1), np.broadcast_to(rhs, (len(X), 2 * A.dim)))
        found.append(np.arange(s, s + len(X))[ok])
    return np.concatenate(found)


def enumerate_units(A: StructureAlgebra, bound: int = DEFAULT_ELEMENT_BOUND) -> list[AlgElement]:
    """All elements with a two-sided inverse, in lexicographic coordinate order."""
    idx = unit_indices(A, bound)
    if A.engine is not None:
        return [AlgElement(A, tuple(int(c) for c in row)) for row in A.engine.decode(idx)]
    return [AlgElement(A, A.coords_at(int(i))) for i in idx]


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class Ideal:
    """Two-sided ideal with a reduced echelon basis; closure is certified on construction."""

    algebra: StructureAlgebra
    basis: tuple
    pivots: tuple

    def __post_init__(self):
        bad = _closure_failure(self.algebra, self.basis, self.pivots)
        if bad is not None:
            raise StructureError(f"subspace is not a two-sided ideal: {bad}")

    @classmethod
    def from_rows(cls, A: StructureAlgebra, rows: Iterable[Sequence]) -> "Ideal":
        basis, piv = linalg.rref([tuple(r) for r in rows], A.ring)
        return cls(A, tuple(basis), tuple(piv))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def proper(self) -> bool:
        return self.rank < self.algebra.dim

    def contains(self, x: AlgElement | Sequence) -> bool:
        coords = x.coords if isinstance(x, AlgElement) else tuple(x)
        return linalg.in_span(coords, self.basis, self.pivots, self.algebra.ring)

    def verify_closure(self) -> bool:
        return _closure_failure(self.algebra, self.basis, self.pivots) is None

    def elements(self) -> list[tuple]:
        """All members (finite rings only)."""
        ring = self.algebra.ring
        out = []
        for coeffs in itertools.product(list(ring.elements()), repeat=self.rank):
            v = (ring.zero,) * self.algebra.dim
            for c, row in zip(coeffs, self.basis):
                v = self.algebra.add_raw(v, self.algebra.scale_raw(c, row))
            out.append(v)
        return out

    def to_json(self) -> dict:
        tj = self.algebra.ring.to_json
        return {"rank": self.rank, "proper": self.proper, "basis": [[tj(c) for c in r] for r in self.basis]}

    def __repr__(self):
        return f"<Ideal rank={self.rank} of dim {self.algebra.dim}>"


def _closure_failure(A, basis, pivots):
    for bi, b in enumerate(basis):
        for i in range(A.dim):
            e = A._basis_raw(i)
            if not linalg.in_span(A.mul_raw(e, b), basis, pivots, A.ring):
                return f"e_{i} * basis[{bi}] leaves the span"
            if not linalg.in_span(A.mul_raw(b, e), basis, pivots, A.ring):
                return f"basis[{bi}] * e_{i} leaves the span"
    return None


def zero_ideal(A: StructureAlgebra) -> Ideal:
    return Ideal(A, (), ())


def whole_ideal(A: StructureAlgebra) -> Ideal:
    return Ideal.from_rows(A, [A._basis_raw(i) for i in range(A.dim)])


def ideal_generated(A: StructureAlgebra, S: Iterable[AlgElement | Sequence]) -> Ideal:
    """Smallest two-sided ideal containing S."""
    rows = [s.coords if isinstance(s, AlgElement) else tuple(s) for s in S]
    basis, piv = linalg.rref(rows, A.ring)
    queue = list(basis)
    while queue and len(basis) < A.dim:
        b = queue.pop()
        for i in range(A.dim):
            e = A._basis_raw(i)
            for prod in (A.mul_raw(e, b), A.mul_raw(b, e)):
                r = linalg.reduce(prod, basis, piv, A.ring)
                if any(not A.ring.is_zero(c) for c in r):
                    basis, piv = linalg.rref(basis + [r], A.ring)
                    queue.append(r)
    return Ideal(A, tuple(basis), tuple(piv))


def ideal_sum(I1: Ideal, I2: Ideal) -> Ideal:
    if I1.algebra is not I2.algebra:
        raise StructureError("ideals of different algebras")
    return Ideal.from_rows(I1.algebra, list(I1.basis) + list(I2.basis))


def projective_points(A: StructureAlgebra) -> Iterator[tuple]:
    """One vector per line through 0: first nonzero coordinate equal to 1, lexicographic order."""
    ring = A.ring
    elems = list(ring.elements())
    for lead in range(A.dim):
        head = (ring.zero,) * lead + (ring.one,)
        for tail in itertools.product(elems, repeat=A.dim - lead - 1):
            yield head + tail


def sum_proper_ideals(A: StructureAlgebra, bound: int = DEFAULT_ELEMENT_BOUND) -> Ideal:
    """Sum of all proper ideals, as the sum of the proper principal ideals.

    Generators already inside the running sum are skipped: their principal
    ideal is contained in it.
    """
    if not A.is_finite:
        raise UnsupportedError("sum_proper_ideals needs a finite ring")
    q = A.ring.size
    passes = (q**A.dim - 1) // (q - 1)
    if passes > bound:
        raise ResourceError(f"{passes} generator passes exceed the bound {bound}")
    S = zero_ideal(A)
    for v in projective_points(A):
        if S.contains(v):
            continue
        I = ideal_generated(A, [v])
        if I.proper:
            S = ideal_sum(S, I)
    return S


def principal_ideals(A: StructureAlgebra, bound: int = DEFAULT_ELEMENT_BOUND) -> list[Ideal]:
    """Distinct principal ideals, in order of first generator."""
    if not A.is_finite:
        raise UnsupportedError("principal_ideals needs a finite ring")
    q = A.ring.size
    if (q**A.dim - 1) // (q - 1) > bound:
        raise ResourceError("too many generators")
    seen: dict[tuple, Ideal] = {}
    for v in projective_points(A):
        I = ideal_generated(A, [v])
        seen.setdefault(I.basis, I)
    return list(seen.values())


def all_ideals(A: StructureAlgebra, limit: int = 100_000) -> list[Ideal]:
    """Every ideal of a finite algebra: sums of principal ideals, closed under +."""
    prin = principal_ideals(A)
    found: dict[tuple, Ideal] = {(): zero_ideal(A)}
    frontier = [zero_ideal(A)]
    while frontier:
        nxt = []
        for I in frontier:
            for P in prin:
                J = ideal_sum(I, P)
                if J.basis not in found:
                    found[J.basis] = J
                    nxt.append(J)
                    if len(found) > limit:
                        raise ResourceError(f"more than {limit} ideals")
        frontier = nxt
    return sorted(found.values(), key=lambda I: (I.rank, I.basis))


@dataclass(frozen=True, eq=False)
class Quotient:
    algebra: StructureAlgebra
    source: StructureAlgebra
    ideal: Ideal
    complement: tuple

    def project_raw(self, coords: Sequence) -> tuple:
        r = linalg.reduce(coords, self.ideal.basis, self.ideal.pivots, self.source.ring)
        return tuple(r[c] for c in self.complement)

    def project(self, x: AlgElement) -> AlgElement:
        _check_owner(self.source, x)
        return AlgElement(self.algebra, self.project_raw(x.coords))

    def lift_raw(self, coords: Sequence) -> tuple:
        ring = self.source.ring
        out = [ring.zero] * self.source.dim
        for c, col in zip(coords, self.complement):
            out[col] = c
        return tuple(out)


def quotient_algebra(A: StructureAlgebra, I: Ideal) -> Quotient:
    """A/I with constants on the standard basis vectors outside I's pivot columns."""
    if I.algebra is not A:
        raise StructureError("ideal of a different algebra")
    if not I.proper:
        raise StructureError("degenerate quotient: the ideal is the whole algebra")
    comp = tuple(c for c in range(A.dim) if c not in I.pivots)

    def proj(v):
        r = linalg.reduce(v, I.basis, I.pivots, A.ring)
        return tuple(r[c] for c in comp)

    table = [[proj(A.mul_raw(A._basis_raw(a), A._basis_raw(b))) for b in comp] for a in comp]
    labels = tuple(A.labels[c] for c in comp) if A.labels else None
    Qa = StructureAlgebra(
        A.ring, len(comp), table, proj(A.unit), labels, {"kind": "quotient", "source": A.digest, "ideal_rank": I.rank}
    )
    quo = Quotient(Qa, A, I, comp)
    for i in range(A.dim):
        for j in range(A.dim):
            ei, ej = A._basis_raw(i), A._basis_raw(j)
            if quo.project_raw(A.mul_raw(ei, ej)) != Qa.mul_raw(quo.project_raw(ei), quo.project_raw(ej)):
                raise ContractError(f"projection is not multiplicative on (e_{i}, e_{j})")
    return quo


# ---------------------------------------------------------------------------
# quasiregular elements


def is_quasiregular(A: StructureAlgebra, x: AlgElement) -> bool:
    """x is quasiregular iff unit - x is invertible."""
    return inverse(A, A.one() - x) is not None


@dataclass
class SmileySet:
    elements: list
    is_ideal: bool
    is_subspace: bool
    span_rank: int
    closed: bool

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "is_ideal": self.is_ideal,
            "is_subspace": self.is_subspace,
            "span_rank": self.span_rank,
            "closed_under_products": self.closed,
        }


def smiley_set(A: StructureAlgebra, bound: int = DEFAULT_ELEMENT_BOUND) -> SmileySet:
    """All quasiregular elements, with a literal measurement of whether they form an ideal."""
    units = unit_indices(A, bound)
    if A.engine is not None:
        U = A.engine.decode(units)
        Qr = (A.engine.unit[None, :] - U) % A.ring.p
        order = np.argsort(A.engine.encode(Qr))
        coords = [tuple(int(c) for c in row) for row in Qr[order]]
    else:
        coords = sorted((A.sub_raw(A.unit, A.coords_at(int(i))) for i in units), key=A.index_of)
    elements = [AlgElement(A, c) for c in coords]
    basis, piv = linalg.rref(coords, A.ring) if coords else ([], [])
    is_subspace = len(coords) == A.ring.size ** len(basis)
    closed = _closure_failure(A, basis, piv) is None
    return SmileySet(elements, is_subspace and closed, is_subspace, len(basis), closed)


# ---------------------------------------------------------------------------
# builders


def direct_sum(A: StructureAlgebra, B: StructureAlgebra) -> StructureAlgebra:
    if A.ring != B.ring:
        raise StructureError("direct sum needs a common ring")
    ring, da, db = A.ring, A.dim, B.dim
    d = da + db
    z = ring.zero
    table = [[[z] * d for _ in range(d)] for _ in range(d)]
    for i in range(da):
        for j in range(da):
            for k in range(da):
                table[i][j][k] = A.constants[i][j][k]
    for i in range(db):
        for j in range(db):
            for k in range(db):
                table[da + i][da + j][da + k] = B.constants[i][j][k]
    la = A.labels or tuple(f"e{i}" for i in range(da))
    lb = B.labels or tuple(f"e{i}" for i in range(db))
    labels = tuple(f"({n},0)" for n in la) + tuple(f"(0,{n})" for n in lb)
    return StructureAlgebra(ring, d, table, A.unit + B.unit, labels, {"kind": "direct_sum", "parts": [A.model, B.model]})


def dual_extension(A: StructureAlgebra) -> StructureAlgebra:
    """A[eps] with eps central and eps^2 = 0; basis e_i then eps*e_i."""
    ring, d = A.ring, A.dim
    D = 2 * d
    z = ring.zero
    table = [[[z] * D for _ in range(D)] for _ in range(D)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                c = A.constants[i][j][k]
                table[i][j][k] = c
                table[i][d + j][d + k] = c
                table[d + i][j][d + k] = c
    names = A.labels or tuple(f"e{i}" for i in range(d))
    labels = tuple(names) + tuple(f"eps*{n}" for n in names)
    unit = A.unit + (z,) * d
    return StructureAlgebra(ring, D, table, unit, labels, {"kind": "dual", "base": A.model})


def group_algebra(ring: ScalarRing, n: int) -> StructureAlgebra:
    """Group algebra of the cyclic group of order n; basis g^0, ..., g^(n-1)."""
    z, one = ring.zero, ring.one
    table = [[[one if k == (i + j) % n else z for k in range(n)] for j in range(n)] for i in range(n)]
    labels = tuple("1" if i == 0 else ("g" if i == 1 else f"g^{i}") for i in range(n))
    unit = tuple(one if k == 0 else z for k in range(n))
    return StructureAlgebra(ring, n, table, unit, labels, {"kind": "group_algebra", "ring": ring.descriptor(), "n": n})


def nil_unitization(ring: ScalarRing, m: int, products: Callable[[int, int], dict] | None = None) -> StructureAlgebra:
    """F*1 + N where N has basis n_1..n_m and n_i*n_j = products(i, j) (default 0).

    ``products`` returns ``{k: coefficient}`` over the nil basis (1-based).
    """
    d = m + 1
    z = ring.zero
    table = [[[z] * d for _ in range(d)] for _ in range(d)]
    for i in range(d):
        table[0][i][i] = ring.one
        table[i][0][i] = ring.one
    if products is not None:
        for i in range(1, d):
            for j in range(1, d):
                for k, c in products(i, j).items():
                    table[i][j][k] = ring.parse(c)
    labels = ("1",) + tuple(f"n{i}" for i in range(1, d))
    unit = (ring.one,) + (z,) * m
    return StructureAlgebra(ring, d, table, unit, labels, {"kind": "nil_unitization", "m": m})
