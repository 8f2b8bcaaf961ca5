"""JSON input files: algebra specs, loop files, homomorphism files, and build artifacts."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import jsonschema

from .algebra import StructureAlgebra, direct_sum, dual_extension, group_algebra, nil_unitization
from .errors import MoufangLabError, StructureError
from .loops import FiniteLoop, LoopHom, validate_loop
from .octonion import cd_algebra, zorn_algebra
from .reports import digest
from .scalars import ring_from_descriptor


class SchemaError(MoufangLabError, ValueError):
    """Input does not parse or does not match its schema."""


RING_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["Q", "GFp", "GFp2"]},
        "p": {"type": "integer", "minimum": 2},
        "r": {"type": "integer"},
    },
}

_scalar = {"type": ["integer", "string", "array"]}

ALGEBRA_SCHEMAS = {
    "constants": {
        "type": "object",
        "required": ["ring", "dim", "table", "unit"],
        "properties": {
            "ring": RING_SCHEMA,
            "dim": {"type": "integer", "minimum": 1},
            "table": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _scalar}}},
            "unit": {"type": "array", "items": _scalar},
            "labels": {"type": "array", "items": {"type": "string"}},
        },
    },
    "zorn": {"type": "object", "required": ["ring"], "properties": {"ring": RING_SCHEMA}},
    "cayley_dickson": {
        "type": "object",
        "required": ["ring"],
        "properties": {"ring": RING_SCHEMA, "mu": _scalar, "beta": _scalar, "gamma": _scalar},
    },
    "group_algebra": {
        "type": "object",
        "required": ["ring", "n"],
        "properties": {"ring": RING_SCHEMA, "n": {"type": "integer", "minimum": 1}},
    },
    "direct_sum": {
        "type": "object",
        "required": ["summands"],
        "properties": {"summands": {"type": "array", "minItems": 2, "items": {"type": "object"}}},
    },
    "dual": {"type": "object", "required": ["base"], "properties": {"base": {"type": "object"}}},
    "nil_unitization": {
        "type": "object",
        "required": ["ring", "m"],
        "properties": {"ring": RING_SCHEMA, "m": {"type": "integer", "minimum": 0}},
    },
}

LOOP_SCHEMA = {
    "type": "object",
    "required": ["order", "id", "table"],
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "id": {"type": "integer", "minimum": 0},
        "table": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "labels": {"type": "array", "items": {"type": "string"}},
    },
}

LOOP_BUILDER_SCHEMAS = {
    "paige": {
        "type": "object",
        "required": ["q"],
        "properties": {"q": {"type": "integer"}, "variant": {"enum": ["norm_one", "unit_mod_scalars"]}},
    },
    "cyclic": {"type": "object", "required": ["n"], "properties": {"n": {"type": "integer", "minimum": 1}}},
}

HOM_SCHEMA = {
    "type": "object",
    "required": ["map"],
    "properties": {
        "source": {"type": ["string", "null"]},
        "target": {"type": ["string", "null"]},
        "map": {"type": "array", "items": {"type": "integer"}},
    },
}


def _validate(obj, schema, what: str):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{what}: {exc.message} at {path}") from None


def read_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON: {exc}") from None
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from None


def write_json_atomic(path, obj) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _flatten(spec: dict) -> dict:
    # builder arguments may sit at the top level or under "args"
    args = spec.get("args")
    if args is None:
        return spec
    if not isinstance(args, dict):
        raise SchemaError("'args' must be an object")
    return {**{k: v for k, v in spec.items() if k != "args"}, **args}


def algebra_from_spec(spec) -> StructureAlgebra:
    """Build an algebra from a spec dict, or from a build artifact wrapping one."""
    if not isinstance(spec, dict):
        raise SchemaError("algebra spec must be a JSON object")
    if spec.get("artifact") == "algebra":
        A = algebra_from_spec(spec.get("algebra"))
        if "digest" in spec and spec["digest"] != A.digest:
            raise SchemaError("artifact digest does not match its contents (stale or edited file)")
        return A
    kind = spec.get("kind")
    if kind not in ALGEBRA_SCHEMAS:
        raise SchemaError(f"unknown algebra kind {kind!r}; expected one of {sorted(ALGEBRA_SCHEMAS)}")
    spec = _flatten(spec)
    _validate(spec, ALGEBRA_SCHEMAS[kind], f"algebra spec ({kind})")
    if kind in ("direct_sum", "dual"):
        if kind == "dual":
            return dual_extension(algebra_from_spec(spec["base"]))
        parts = [algebra_from_spec(s) for s in spec["summands"]]
        A = parts[0]
        for B in parts[1:]:
            A = direct_sum(A, B)
        return A
    try:
        ring = ring_from_descriptor(spec["ring"])
    except (StructureError, ValueError) as exc:
        raise SchemaError(f"ring descriptor: {exc}") from None
    if kind == "constants":
        return StructureAlgebra(ring, spec["dim"], spec["table"], spec["unit"], spec.get("labels"), spec.get("model", {}))
    if kind == "zorn":
        return zorn_algebra(ring)
    if kind == "cayley_dickson":
        return cd_algebra(ring, spec.get("mu", -1), spec.get("beta", -1), spec.get("gamma", -1))
    if kind == "group_algebra":
        return group_algebra(ring, spec["n"])
    return nil_unitization(ring, spec["m"])


def loop_from_spec(spec) -> FiniteLoop:
    """A loop file ``{"order", "id", "table"}``, a named builder, or a build artifact."""
    if not isinstance(spec, dict):
        raise SchemaError("loop file must be a JSON object")
    if spec.get("artifact") == "loop":
        L = loop_from_spec(spec.get("loop"))
        if "digest" in spec and spec["digest"] != L.digest:
            raise SchemaError("artifact digest does not match its contents (stale or edited file)")
        return L
    kind = spec.get("kind")
    if kind is not None:
        if kind not in LOOP_BUILDER_SCHEMAS:
            raise SchemaError(f"unknown loop kind {kind!r}")
        spec = _flatten(spec)
        _validate(spec, LOOP_BUILDER_SCHEMAS[kind], f"loop spec ({kind})")
        if kind == "cyclic":
            from .corpus import cyclic

            return cyclic(spec["n"])
        from .bridge import paige_loop

        L = paige_loop(spec["q"], spec.get("variant", "norm_one"))
        if not isinstance(L, FiniteLoop):
            raise SchemaError("only table-sized Paige loops can be used as loop inputs")
        return L
    _validate(spec, LOOP_SCHEMA, "loop file")
    n = spec["order"]
    if len(spec["table"]) != n:
        raise SchemaError(f"loop file: table has {len(spec['table'])} rows, order is {n}")
    return validate_loop(spec["table"], spec["id"], spec.get("labels"))


def hom_from_spec(spec, source: FiniteLoop, target) -> LoopHom:
    _validate(spec, HOM_SCHEMA, "homomorphism file")
    for side, loop in (("source", source), ("target", target)):
        want = spec.get(side)
        if want is not None and want != loop.digest:
            raise SchemaError(f"homomorphism {side} digest {want} does not match the loaded loop ({loop.digest})")
    try:
        return LoopHom(source, target, spec["map"])
    except StructureError as exc:
        raise SchemaError(f"homomorphism file: {exc}") from None


def algebra_artifact(A: StructureAlgebra, source: object = None) -> dict:
    from . import __version__

    return {
        "artifact": "algebra",
        "version": __version__,
        "source_digest": None if source is None else digest(source),
        "dim": A.dim,
        "digest": A.digest,
        "algebra": A.to_spec(),
    }


def loop_artifact(L: FiniteLoop, source: object = None) -> dict:
    from . import __version__

    return {
        "artifact": "loop",
        "version": __version__,
        "source_digest": None if source is None else digest(source),
        "order": L.order,
        "digest": L.digest,
        "loop": L.to_json(),
    }
