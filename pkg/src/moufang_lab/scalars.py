"""Exact scalar rings: the rationals, prime fields GF(p) and quadratic extensions GF(p^2).

Rings operate on *raw* values so that hot loops in the algebra code avoid
wrapper objects:

* ``Rationals``: :class:`fractions.Fraction`
* ``PrimeField(p)``: ``int`` in ``[0, p)``
* ``QuadraticExtension(p, r)``: ``(a, b)`` meaning ``a + b*t`` with ``t*t = r``

:class:`Scalar` wraps a raw value together with its ring for user-facing code.
"""

from __future__ import annotations

import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator

from .errors import ScalarDivisionError, StructureError, UnsupportedError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def find_nonresidue(p: int) -> int:
    """Smallest r in [2, p) with r^((p-1)/2) = -1 mod p."""
    if p == 2:
        raise UnsupportedError("GF(4) is not supported; no odd non-residue exists mod 2")
    if not is_prime(p):
        raise StructureError(f"{p} is not prime")
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return r
    raise AssertionError("unreachable for odd primes")


class ScalarRing(ABC):
    """Common interface of the three coefficient rings."""

    kind: str

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def add(self, a, b): ...

    @abstractmethod
    def sub(self, a, b): ...

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def neg(self, a): ...

    @abstractmethod
    def inv(self, a): ...

    @abstractmethod
    def from_int(self, n: int): ...

    @abstractmethod
    def parse(self, obj): ...

    @abstractmethod
    def to_json(self, a): ...

    @abstractmethod
    def descriptor(self) -> dict: ...

    @abstractmethod
    def random(self, rng: random.Random): ...

    def is_zero(self, a) -> bool:
        return a == self.zero

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    @property
    def size(self) -> int | None:
        return None

    @property
    def characteristic(self) -> int:
        return 0

    def elements(self) -> Iterator:
        raise UnsupportedError(f"{self} is infinite")

    def index(self, a) -> int:
        raise UnsupportedError(f"{self} is infinite")

    def __call__(self, value) -> "Scalar":
        return Scalar(self, self.parse(value))


@dataclass(frozen=True)
class Rationals(ScalarRing):
    kind = "Q"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ScalarDivisionError("inverse of 0 in Q")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def parse(self, obj):
        if isinstance(obj, Scalar):
            if obj.ring != self:
                raise StructureError(f"scalar from {obj.ring} used in {self}")
            return obj.value
        if isinstance(obj, bool):
            raise StructureError("booleans are not scalars")
        if isinstance(obj, (int, Fraction, str)):
            return Fraction(obj)
        raise StructureError(f"cannot read {obj!r} as a rational")

    def to_json(self, a):
        return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def descriptor(self):
        return {"kind": "Q"}

    def random(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 6))

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField(ScalarRing):
    p: int
    kind = "GFp"

    def __post_init__(self):
        if not is_prime(self.p):
            raise StructureError(f"GF({self.p}): modulus is not prime")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1 % self.p

    @property
    def size(self):
        return self.p

    @property
    def characteristic(self):
        return self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ScalarDivisionError(f"inverse of 0 in GF({self.p})")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def parse(self, obj):
        if isinstance(obj, Scalar):
            if obj.ring != self:
                raise StructureError(f"scalar from {obj.ring} used in {self}")
            return obj.value
        if isinstance(obj, bool) or not isinstance(obj, int):
            raise StructureError(f"cannot read {obj!r} as an element of GF({self.p})")
        return obj % self.p

    def to_json(self, a):
        return a

    def descriptor(self):
        return {"kind": "GFp", "p": self.p}

    def random(self, rng):
        return rng.randrange(self.p)

    def elements(self):
        return iter(range(self.p))

    def index(self, a):
        return a

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class QuadraticExtension(ScalarRing):
    """GF(p^2) = GF(p)[t]/(t^2 - r) for an odd prime p and non-residue r."""

    p: int
    r: int | None = None
    kind = "GFp2"

    def __post_init__(self):
        if self.p == 2:
            raise UnsupportedError("GF(4) is not supported")
        if not is_prime(self.p):
            raise StructureError(f"GF({self.p}^2): {self.p} is not prime")
        if self.r is None:
            object.__setattr__(self, "r", find_nonresidue(self.p))
        r = self.r % self.p
        object.__setattr__(self, "r", r)
        if pow(r, (self.p - 1) // 2, self.p) != self.p - 1:
            raise StructureError(f"{r} is a square mod {self.p}; GF(p^2) needs a non-residue")

    @property
    def zero(self):
        return (0, 0)

    @property
    def one(self):
        return (1, 0)

    @property
    def size(self):
        return self.p * self.p

    @property
    def characteristic(self):
        return self.p

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def mul(self, a, b):
        p = self.p
        return ((a[0] * b[0] + self.r * a[1] * b[1]) % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def neg(self, a):
        p = self.p
        return ((-a[0]) % p, (-a[1]) % p)

    def inv(self, a):
        # (a + bt)^-1 = (a - bt) / (a^2 - r b^2); the denominator is nonzero since r is a non-residue
        p = self.p
        den = (a[0] * a[0] - self.r * a[1] * a[1]) % p
        if den == 0:
            raise ScalarDivisionError(f"inverse of 0 in GF({p}^2)")
        d = pow(den, -1, p)
        return ((a[0] * d) % p, (-a[1] * d) % p)

    def from_int(self, n):
        return (n % self.p, 0)

    def parse(self, obj):
        if isinstance(obj, Scalar):
            if obj.ring != self:
                raise StructureError(f"scalar from {obj.ring} used in {self}")
            return obj.value
        if isinstance(obj, bool):
            raise StructureError("booleans are not scalars")
        if isinstance(obj, int):
            return (obj % self.p, 0)
        if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
            isinstance(c, int) and not isinstance(c, bool) for c in obj
        ):
            return (obj[0] % self.p, obj[1] % self.p)
        raise StructureError(f"cannot read {obj!r} as an element of GF({self.p}^2)")

    def to_json(self, a):
        return [a[0], a[1]]

    def descriptor(self):
        return {"kind": "GFp2", "p": self.p, "r": self.r}

    def random(self, rng):
        return (rng.randrange(self.p), rng.randrange(self.p))

    def elements(self):
        p = self.p
        return ((i % p, i // p) for i in range(p * p))

    def index(self, a):
        return a[0] + self.p * a[1]

    def __str__(self):
        return f"GF({self.p}^2)"


def ring_from_descriptor(desc: dict) -> ScalarRing:
    """Inverse of ``ring.descriptor()``: ``{"kind":"Q"}``, ``{"kind":"GFp","p":5}``, ``{"kind":"GFp2","p":5,"r":2}``."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise StructureError(f"bad ring descriptor {desc!r}")
    kind = desc["kind"]
    if kind == "Q":
        return Rationals()
    if kind == "GFp":
        return PrimeField(int(desc["p"]))
    if kind == "GFp2":
        return QuadraticExtension(int(desc["p"]), desc.get("r"))
    raise StructureError(f"unknown ring kind {kind!r}")


@dataclass(frozen=True)
class Scalar:
    ring: ScalarRing
    value: Any

    def _check(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = Scalar(self.ring, self.ring.parse(other))
        if other.ring != self.ring:
            raise StructureError(f"ring mismatch: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        return ring_arith("add", self, other)

    def __sub__(self, other):
        return ring_arith("sub", self, other)

    def __mul__(self, other):
        return ring_arith("mul", self, other)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, self.ring.neg(self.value))

    def __truediv__(self, other):
        other = self._check(other)
        return self * invert(other)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.value)

    def __repr__(self):
        return f"Scalar({self.ring}, {self.ring.to_json(self.value)!r})"


def ring_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    """Exact ``add``/``sub``/``mul``/``neg`` on two scalars of the same ring."""
    ring = a.ring
    if op == "neg":
        return Scalar(ring, ring.neg(a.value))
    b = a._check(b)
    if op not in ("add", "sub", "mul"):
        raise ValueError(f"unknown ring operation {op!r}")
    return Scalar(ring, getattr(ring, op)(a.value, b.value))


def invert(a: Scalar) -> Scalar:
    return Scalar(a.ring, a.ring.inv(a.value))
