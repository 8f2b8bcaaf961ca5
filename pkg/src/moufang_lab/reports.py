"""Structured verdict records returned by every check."""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerificationReport:
    name: str
    verdict: bool
    mode: str = "exhaustive"
    checked: int = 0
    witness: Any = None
    details: dict = field(default_factory=dict)
    ms: float = 0.0

    def __bool__(self) -> bool:
        return self.verdict

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        """Combine reports of one check run over disjoint partitions.

        Associative; the surviving witness is the one from the left-most failing part.
        """
        if other.name != self.name:
            raise ValueError(f"cannot merge {self.name!r} with {other.name!r}")
        return VerificationReport(
            name=self.name,
            verdict=self.verdict and other.verdict,
            mode=self.mode,
            checked=self.checked + other.checked,
            witness=self.witness if self.witness is not None else other.witness,
            details={**other.details, **self.details},
            ms=self.ms + other.ms,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict,
            "mode": self.mode,
            "checked": self.checked,
            "witness": jsonable(self.witness),
            "details": jsonable(self.details),
            "ms": round(self.ms, 3),
        }


def jsonable(obj):
    """Convert numpy scalars/arrays, Fractions, tuples and sets into plain JSON values."""
    import numpy as np
    from fractions import Fraction

    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    return repr(obj)


def digest(obj) -> str:
    """Stable short sha256 of a JSON-able object."""
    payload = json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


@contextmanager
def timed():
    """``with timed() as t: ...`` then ``t.ms``."""

    class _T:
        ms = 0.0

    t = _T()
    start = time.perf_counter()
    try:
        yield t
    finally:
        t.ms = (time.perf_counter() - start) * 1000.0
