"""Octonion models: the Cayley-Dickson algebra C(mu, beta, gamma) and Zorn vector matrices.

Both constructions emit an ordinary :class:`StructureAlgebra` whose ``model``
metadata records which one it is, so conjugation and the norm form can be
dispatched on it.

Cayley-Dickson doubling convention::

    (a, b)(c, d) = (a c + l * conj(d) b,  d a + b conj(c)),   conj(a, b) = (conj(a), -b)

with ``l`` = mu, beta, gamma at the first, second and third doubling. The
basis is e0..e7 in binary order, so that e3 = e1 e2, e5 = e1 e4, e6 = e2 e4,
e7 = e3 e4 and e1^2 = mu, e2^2 = beta, e4^2 = gamma.

Zorn coordinates are ``(a, v1, v2, v3, w1, w2, w3, b)`` for the matrix
``[[a, v], [w, b]]`` with::

    (a1,v1;w1,b1)(a2,v2;w2,b2) = (a1 a2 + v1.w2,  a1 v2 + b2 v1 - w1 x w2;
                                  a2 w1 + b1 w2 + v1 x v2,  b1 b2 + w1.v2)

and norm ``N = a b - v.w``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgElement, StructureAlgebra
from .errors import StructureError, UnsupportedError
from .scalars import Scalar, ScalarRing

CD_DOUBLING = "(a,b)(c,d) = (ac + l*conj(d)*b, d*a + b*conj(c))"
ZORN_PRODUCT = "(a1a2 + v1.w2, a1v2 + b2v1 - w1xw2; a2w1 + b1w2 + v1xv2, b1b2 + w1.v2)"


@dataclass(frozen=True)
class CDParams:
    mu: Scalar
    beta: Scalar
    gamma: Scalar

    def __post_init__(self):
        for name in ("mu", "beta", "gamma"):
            if getattr(self, name).is_zero():
                raise StructureError(f"Cayley-Dickson parameter {name} must be nonzero")


def _conj_raw(ring: ScalarRing, x):
    return [x[0]] + [ring.neg(c) for c in x[1:]]


def _cd_mul(ring: ScalarRing, x, y, params):
    n = len(x)
    if n == 1:
        return [ring.mul(x[0], y[0])]
    h = n // 2
    lam = params[h.bit_length() - 1]
    a, b, c, d = x[:h], x[h:], y[:h], y[h:]
    first = _vadd(ring, _cd_mul(ring, a, c, params), _vscale(ring, lam, _cd_mul(ring, _conj_raw(ring, d), b, params)))
    second = _vadd(ring, _cd_mul(ring, d, a, params), _cd_mul(ring, b, _conj_raw(ring, c), params))
    return first + second


def _vadd(ring, x, y):
    return [ring.add(a, b) for a, b in zip(x, y)]


def _vscale(ring, s, x):
    return [ring.mul(s, a) for a in x]


def cd_algebra(ring: ScalarRing, mu=-1, beta=-1, gamma=-1) -> StructureAlgebra:
    """Eight-dimensional Cayley-Dickson algebra C(mu, beta, gamma) over ``ring``."""
    params = CDParams(*(s if isinstance(s, Scalar) else ring(s) for s in (mu, beta, gamma)))
    raw = [params.mu.value, params.beta.value, params.gamma.value]
    basis = [[ring.one if k == i else ring.zero for k in range(8)] for i in range(8)]
    table = [[_cd_mul(ring, basis[i], basis[j], raw) for j in range(8)] for i in range(8)]
    model = {
        "kind": "cayley_dickson",
        "ring": ring.descriptor(),
        "mu": ring.to_json(raw[0]),
        "beta": ring.to_json(raw[1]),
        "gamma": ring.to_json(raw[2]),
        "doubling": CD_DOUBLING,
    }
    labels = tuple(f"e{i}" for i in range(8))
    return StructureAlgebra(ring, 8, table, basis[0], labels, model)


@dataclass(frozen=True)
class ZornElement:
    ring: ScalarRing
    a: object
    v: tuple
    w: tuple
    b: object

    @classmethod
    def from_coords(cls, ring, coords) -> "ZornElement":
        c = tuple(coords)
        return cls(ring, c[0], c[1:4], c[4:7], c[7])

    def coords(self) -> tuple:
        return (self.a, *self.v, *self.w, self.b)


def _dot(ring, u, v):
    s = ring.zero
    for x, y in zip(u, v):
        s = ring.add(s, ring.mul(x, y))
    return s


def _cross(ring, u, v):
    m, s = ring.mul, ring.sub
    return (
        s(m(u[1], v[2]), m(u[2], v[1])),
        s(m(u[2], v[0]), m(u[0], v[2])),
        s(m(u[0], v[1]), m(u[1], v[0])),
    )


def zorn_multiply(x: ZornElement, y: ZornElement) -> ZornElement:
    """Direct vector-matrix product (independent of any constants table)."""
    r = x.ring
    add, sub, mul = r.add, r.sub, r.mul
    a = add(mul(x.a, y.a), _dot(r, x.v, y.w))
    v = tuple(sub(add(mul(x.a, q), mul(y.b, p)), c) for p, q, c in zip(x.v, y.v, _cross(r, x.w, y.w)))
    w = tuple(add(add(mul(y.a, p), mul(x.b, q)), c) for p, q, c in zip(x.w, y.w, _cross(r, x.v, y.v)))
    b = add(mul(x.b, y.b), _dot(r, x.w, y.v))
    return ZornElement(r, a, v, w, b)


def zorn_norm_raw(ring: ScalarRing, coords):
    z = ZornElement.from_coords(ring, coords)
    return ring.sub(ring.mul(z.a, z.b), _dot(ring, z.v, z.w))


def zorn_algebra(ring: ScalarRing) -> StructureAlgebra:
    """Split octonions as Zorn vector matrices over ``ring``."""
    basis = [tuple(ring.one if k == i else ring.zero for k in range(8)) for i in range(8)]
    table = [
        [zorn_multiply(ZornElement.from_coords(ring, basis[i]), ZornElement.from_coords(ring, basis[j])).coords() for j in range(8)]
        for i in range(8)
    ]
    unit = (ring.one,) + (ring.zero,) * 6 + (ring.one,)
    labels = ("a", "v1", "v2", "v3", "w1", "w2", "w3", "b")
    model = {"kind": "zorn", "ring": ring.descriptor(), "product": ZORN_PRODUCT}
    return StructureAlgebra(ring, 8, table, unit, labels, model)


def _model_kind(x: AlgElement) -> str:
    kind = x.algebra.model.get("kind")
    if kind not in ("zorn", "cayley_dickson"):
        raise UnsupportedError(f"not an octonion-model algebra: {x.algebra!r}")
    return kind


def conjugate_raw(A: StructureAlgebra, coords) -> tuple:
    ring = A.ring
    if A.model.get("kind") == "zorn":
        c = coords
        n = ring.neg
        return (c[7], n(c[1]), n(c[2]), n(c[3]), n(c[4]), n(c[5]), n(c[6]), c[0])
    if A.model.get("kind") == "cayley_dickson":
        return tuple(_conj_raw(ring, list(coords)))
    raise UnsupportedError(f"not an octonion-model algebra: {A!r}")


def norm_raw(A: StructureAlgebra, coords):
    ring = A.ring
    kind = A.model.get("kind")
    if kind == "zorn":
        return zorn_norm_raw(ring, coords)
    if kind == "cayley_dickson":
        params = [ring.parse(A.model[k]) for k in ("mu", "beta", "gamma")]
        return _cd_norm(ring, list(coords), params)
    raise UnsupportedError(f"not an octonion-model algebra: {A!r}")


def _cd_norm(ring, x, params):
    # N(a, b) = N(a) - l N(b)
    if len(x) == 1:
        return ring.mul(x[0], x[0])
    h = len(x) // 2
    lam = params[h.bit_length() - 1]
    return ring.sub(_cd_norm(ring, x[:h], params), ring.mul(lam, _cd_norm(ring, x[h:], params)))


def conjugate(x: AlgElement) -> AlgElement:
    _model_kind(x)
    return AlgElement(x.algebra, conjugate_raw(x.algebra, x.coords))


def norm(x: AlgElement) -> Scalar:
    _model_kind(x)
    return Scalar(x.algebra.ring, norm_raw(x.algebra, x.coords))


def trace(x: AlgElement) -> Scalar:
    """Scalar t with x + conjugate(x) = t * unit."""
    kind = _model_kind(x)
    ring = x.algebra.ring
    c = x.coords
    if kind == "zorn":
        return Scalar(ring, ring.add(c[0], c[7]))
    return Scalar(ring, ring.add(c[0], c[0]))


def oct_inverse(x: AlgElement) -> AlgElement | None:
    """conjugate(x) / norm(x), or None when the norm vanishes."""
    _model_kind(x)
    A = x.algebra
    n = norm_raw(A, x.coords)
    if A.ring.is_zero(n):
        return None
    return AlgElement(A, A.scale_raw(A.ring.inv(n), conjugate_raw(A, x.coords)))
