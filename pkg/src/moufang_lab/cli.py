"""Command-line front end.

Exit codes: 0 pass, 1 check failure, 2 usage or schema error, 3 resource cap
exceeded, 4 inconclusive (no embedding to probe).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .algebra import (
    DEFAULT_ELEMENT_BOUND,
    StructureAlgebra,
    all_ideals,
    check_alternative,
    check_moufang_algebra,
    ideal_generated,
    smiley_set,
    unit_indices,
    whole_ideal,
    zero_ideal,
)
from .bridge import (
    ideal_sum_correspondence,
    loop_span,
    one_plus_ideal_kernel,
    paige_construction,
    theorem_probe,
    unit_loop,
    ProbeError,
)
from .errors import ContractError, ResourceError, StructureError, UnsupportedError
from .loops import (
    DEFAULT_NODE_CAP,
    DEFAULT_TRIPLE_BOUND,
    TABLE_CAP,
    FiniteLoop,
    check_ip,
    check_moufang,
    find_embedding,
    is_normal,
    is_simple,
)
from .reports import VerificationReport, digest, jsonable
from .specs import SchemaError, algebra_from_spec, algebra_artifact, hom_from_spec, loop_artifact, loop_from_spec, read_json, write_json_atomic

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4

SUITES = (
    "alternative",
    "moufang-algebra",
    "unit-loop",
    "ip",
    "moufang-loop",
    "lemma",
    "ideal-correspondence",
    "simplicity",
    "smiley",
    "probe",
)

# above this many generator lines, ideal-based suites use basis-generated ideals only
IDEAL_ENUMERATION_CAP = 5000


class Inconclusive(Exception):
    def __init__(self, message: str, stats: dict):
        super().__init__(message)
        self.stats = stats


class Run:
    """Shared state for one invocation: parsed inputs and the report envelope."""

    def __init__(self, args):
        self.args = args
        self.inputs: dict = {}
        self._algebra = None
        self._loop = None

    @property
    def algebra(self) -> StructureAlgebra:
        if self._algebra is None:
            if not self.args.algebra:
                raise SchemaError("this command needs --algebra")
            self._algebra = algebra_from_spec(read_json(self.args.algebra))
            self.inputs["algebra"] = self._algebra.digest
        return self._algebra

    @property
    def loop(self) -> FiniteLoop:
        if self._loop is None:
            if not self.args.loop:
                raise SchemaError("this command needs --loop")
            self._loop = loop_from_spec(read_json(self.args.loop))
            self.inputs["loop"] = self._loop.digest
        return self._loop

    def unit_model(self):
        a = self.args
        return unit_loop(
            self.algebra, TABLE_CAP, a.cap_triples, a.cap_elements, samples=a.samples, seed=a.seed
        )

    def envelope(self, command: str, suite: str | None) -> dict:
        a = self.args
        return {
            "tool": "moufang-lab",
            "version": __version__,
            "command": command,
            "suite": suite,
            "mode": a.mode,
            "seed": a.seed,
            "samples": a.samples,
            "caps": {"elements": a.cap_elements, "triples": a.cap_triples, "nodes": getattr(a, "node_cap", None)},
            "inputs": dict(sorted(self.inputs.items())),
        }


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    common.add_argument("--samples", type=_positive, default=10_000)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--cap-elements", type=_positive, default=DEFAULT_ELEMENT_BOUND)
    common.add_argument("--cap-triples", type=_positive, default=DEFAULT_TRIPLE_BOUND)
    common.add_argument("--out", help="write the JSON report here (atomically)")
    common.add_argument("--format", choices=("json", "text"), default="text", help="stdout format")
    common.add_argument("--algebra", help="algebra spec or artifact (JSON)")
    common.add_argument("--loop", help="loop file or artifact (JSON)")

    p = argparse.ArgumentParser(prog="moufang-lab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build an algebra or loop artifact from a spec file")
    b.add_argument("spec")

    c = sub.add_parser("check", parents=[common], help="run one named check suite")
    c.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    c.add_argument("--hom", help="embedding file for the probe suite")
    c.add_argument("--node-cap", type=_positive, default=DEFAULT_NODE_CAP)

    pr = sub.add_parser("probe", parents=[common], help="replay the simple-subloop argument on Q inside U(A)")
    pr.add_argument("--hom", help="embedding file {source, target, map}; searched when omitted")
    pr.add_argument("--node-cap", type=_positive, default=DEFAULT_NODE_CAP)

    sub.add_parser("units", parents=[common], help="count the units of an algebra by two methods")

    pg = sub.add_parser("paige", parents=[common], help="build the simple Moufang loop over GF(q)")
    pg.add_argument("q", type=int)
    pg.add_argument("--variant", choices=("norm_one", "unit_mod_scalars"), default="norm_one")
    return p


# ---------------------------------------------------------------------------
# suites; each returns a list of VerificationReports


def suite_alternative(run: Run):
    a = run.args
    return [check_alternative(run.algebra, a.mode, a.samples, a.seed, a.cap_elements)]


def suite_moufang_algebra(run: Run):
    a = run.args
    return [check_moufang_algebra(run.algebra, a.mode, a.samples, a.seed, a.cap_elements, a.cap_triples)]


def _norm_unit_count(A: StructureAlgebra, bound: int) -> tuple[str, int]:
    """Unit count by a second method: nonzero octonion norm, or nonzero det of left multiplication."""
    from . import linalg
    from .octonion import norm_raw

    if A.model.get("kind") in ("zorn", "cayley_dickson"):
        return "norm != 0", sum(1 for c in A.coords_iter() if not A.ring.is_zero(norm_raw(A, c)))
    A._require_finite(bound)
    count = 0
    for c in A.coords_iter():
        if not A.ring.is_zero(linalg.determinant(A.left_matrix(c), A.ring)) and not A.ring.is_zero(
            linalg.determinant(A.right_matrix(c), A.ring)
        ):
            count += 1
    return "det(L_x) det(R_x) != 0", count


def suite_unit_loop(run: Run):
    model = run.unit_model()
    method, second = _norm_unit_count(run.algebra, run.args.cap_elements)
    agree = second == model.order
    count = VerificationReport(
        "unit-count", agree, "exhaustive", run.algebra.size,
        None if agree else {"linear_systems": model.order, method: second},
        {"order": model.order, "second_method": method, "second_count": second, "loop_mode": model.mode},
    )
    return [count, model.moufang]


def _loop_or_units(run: Run):
    if run.args.loop:
        return run.loop
    model = run.unit_model()
    if not isinstance(model.loop, FiniteLoop) and run.args.mode == "exhaustive":
        raise ResourceError(f"unit loop of order {model.order} exceeds the table cap; use --mode sampled")
    return model.loop


def suite_ip(run: Run):
    L = _loop_or_units(run)
    if not isinstance(L, FiniteLoop):
        raise ResourceError("the inverse-property check needs an explicit table")
    return [check_ip(L)]


def suite_moufang_loop(run: Run):
    a = run.args
    L = _loop_or_units(run)
    return [check_moufang(L, a.mode, a.samples, a.seed, a.cap_triples)]


def lemma_ideals(A: StructureAlgebra) -> list:
    """All ideals when few enough generators exist; otherwise 0, A and the ideals generated by basis vectors."""
    q = A.ring.size
    if (q**A.dim - 1) // (q - 1) <= IDEAL_ENUMERATION_CAP:
        return all_ideals(A)
    found = {}
    for I in [zero_ideal(A), whole_ideal(A)] + [ideal_generated(A, [A._basis_raw(i)]) for i in range(A.dim)]:
        found.setdefault(I.basis, I)
    return sorted(found.values(), key=lambda I: (I.rank, I.basis))


def suite_lemma(run: Run):
    a = run.args
    model = run.unit_model()
    mode = "exhaustive" if model.mode == "table" and a.mode == "exhaustive" else "sampled"
    out = []
    for I in lemma_ideals(run.algebra):
        k = one_plus_ideal_kernel(model, None, I, mode, a.samples, a.seed, strict=False)
        rep = k.normal
        rep.name = "lemma"
        rep.details = {**rep.details, "ideal_rank": I.rank, "kernel_size": k.kernel.size, "fast_path_normal": k.fast_path_normal}
        if k.fast_path_normal is False:
            rep.verdict = False
        out.append(rep)
    return out


def suite_ideal_correspondence(run: Run):
    model = run.unit_model()
    if model.mode != "table":
        raise ResourceError("the correspondence check needs the unit loop as a table")
    span = loop_span(model)
    ideals = [I for I in lemma_ideals(span.algebra) if I.proper]
    out = []
    for i in range(len(ideals)):
        for j in range(i + 1, len(ideals)):
            rep = ideal_sum_correspondence(span, ideals[i], ideals[j])
            rep.details["pair"] = [i, j]
            if rep.verdict is None:
                continue
            # the suite passes when verdict and brute-force oracle agree
            rep.details["correspondence_holds"] = rep.verdict
            rep.verdict = rep.details["oracle_agreed"]
            out.append(rep)
    if not out:
        out.append(VerificationReport("ideal-correspondence", True, "exhaustive", 0, details={"status": "no applicable pairs"}))
    return out


def suite_simplicity(run: Run):
    L = run.loop
    cert = is_simple(L)
    oracle = [is_normal(L, K, shortcut=False) for K in cert.closures]
    agreed = all(oracle)
    rep = VerificationReport(
        "simplicity", cert.simple and agreed, "exhaustive", len(cert.closures),
        None if cert.witness is None else list(cert.witness.members),
        {"certificate": cert.to_dict(), "closures_normal": agreed},
    )
    return [rep]


def suite_smiley(run: Run):
    A = run.algebra
    sm = smiley_set(A, run.args.cap_elements)
    direct = len(unit_indices(A, run.args.cap_elements))
    # every quasiregular x corresponds to the unit 1 - x
    rep = VerificationReport("smiley", direct == sm.size, "exhaustive", A.size, None, {**sm.to_dict(), "unit_count": direct})
    return [rep]


SUITE_FUNCS = {
    "alternative": suite_alternative,
    "moufang-algebra": suite_moufang_algebra,
    "unit-loop": suite_unit_loop,
    "ip": suite_ip,
    "moufang-loop": suite_moufang_loop,
    "lemma": suite_lemma,
    "ideal-correspondence": suite_ideal_correspondence,
    "simplicity": suite_simplicity,
    "smiley": suite_smiley,
}


# ---------------------------------------------------------------------------
# commands


def _emit(run: Run, report: dict, text_lines: list[str]):
    a = run.args
    if a.out:
        write_json_atomic(a.out, report)
    if a.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _report_line(rep: VerificationReport) -> str:
    status = {True: "PASS", False: "FAIL", None: "N/A"}[rep.verdict]
    line = f"{rep.name}: {status} ({rep.mode}, {rep.checked} checked, {rep.ms:.0f} ms)"
    if rep.verdict is False and rep.witness is not None:
        line += f" witness={json.dumps(jsonable(rep.witness))}"
    return line


def cmd_check(run: Run) -> int:
    suite = run.args.suite
    if suite == "probe":
        return cmd_probe(run, suite="probe")
    if suite not in SUITE_FUNCS:
        raise SchemaError(f"unknown suite {suite!r}; expected one of: {', '.join(SUITES)}")
    reports = SUITE_FUNCS[suite](run)
    ok = all(r.verdict is not False for r in reports)
    report = run.envelope("check", suite)
    report.update({"verdict": ok, "reports": [r.to_dict() for r in reports]})
    _emit(run, report, [_report_line(r) for r in reports] + [f"{suite}: {'PASS' if ok else 'FAIL'}"])
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_probe(run: Run, suite: str | None = None) -> int:
    a = run.args
    Q = run.loop
    A = run.algebra
    report = run.envelope("probe", suite)
    units = len(unit_indices(A, a.cap_elements))
    if Q.order > units:
        stats = {"status": "exhausted", "nodes": 0, "reason": f"|Q| = {Q.order} > |U(A)| = {units}"}
        raise Inconclusive("no embedding: Q is larger than the unit loop", stats)
    model = run.unit_model()
    if model.mode != "table":
        raise ResourceError(f"unit loop of order {model.order} exceeds the table cap {TABLE_CAP}")
    if a.hom:
        hom = hom_from_spec(read_json(a.hom), Q, model.loop)
        search = {"status": "supplied"}
    else:
        res = find_embedding(Q, model.loop, a.node_cap)
        search = res.to_dict()
        search.pop("map")
        if res.status != "found":
            raise Inconclusive(f"embedding search {res.status}: {res.reason}", search)
        hom = res.hom
    report["inputs"]["embedding"] = digest(hom.map.tolist())
    probe = theorem_probe(Q, model, hom, seed=a.seed, bound=a.cap_elements)
    ok = probe.oracles_agreed
    report.update({"verdict": ok, "embedding_search": search, "probe": probe.to_dict()})
    lines = [
        f"{s.name}: verdict={json.dumps(jsonable(s.verdict))} oracle={'agreed' if s.oracle_agreed else 'DISAGREED'}"
        for s in probe.steps
    ]
    lines.append(probe.summary["text"])
    _emit(run, report, lines)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_build(run: Run) -> int:
    spec = read_json(run.args.spec)
    if not isinstance(spec, dict):
        raise SchemaError("spec must be a JSON object")
    is_loop = "table" in spec and "order" in spec or spec.get("kind") in ("paige", "cyclic") or spec.get("artifact") == "loop"
    if is_loop:
        L = loop_from_spec(spec)
        art = loop_artifact(L, spec)
        line = f"loop of order {L.order}, digest {L.digest}"
    else:
        A = algebra_from_spec(spec)
        art = algebra_artifact(A, spec)
        line = f"algebra of dimension {A.dim} over {A.ring}, digest {A.digest}"
    run.inputs["spec"] = art["source_digest"]
    a = run.args
    if a.out:
        write_json_atomic(a.out, art)
    print(json.dumps(art, indent=2, sort_keys=True) if a.format == "json" else line)
    return EXIT_PASS


def cmd_units(run: Run) -> int:
    A = run.algebra
    n = len(unit_indices(A, run.args.cap_elements))
    method, second = _norm_unit_count(A, run.args.cap_elements)
    ok = n == second
    report = run.envelope("units", None)
    report.update({"verdict": ok, "units": n, "second_method": method, "second_count": second})
    _emit(run, report, [f"units: {n} (linear systems), {second} ({method}): {'agree' if ok else 'DISAGREE'}"])
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_paige(run: Run) -> int:
    a = run.args
    pc = paige_construction(a.q, a.variant, TABLE_CAP, a.cap_triples, samples=a.samples, seed=a.seed)
    report = run.envelope("paige", None)
    ok = pc.moufang is None or bool(pc.moufang)
    report.update({"verdict": ok, "paige": pc.to_dict()})
    if isinstance(pc.loop, FiniteLoop):
        report["loop"] = loop_artifact(pc.loop, {"paige": a.q, "variant": a.variant})
    line = (
        f"paige({a.q}, {a.variant}): order {pc.loop.order} = {pc.parent_order} / {pc.center_size}; "
        f"Moufang {_report_line(pc.moufang) if pc.moufang else 'not checked'}"
    )
    _emit(run, report, [line])
    return EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {"build": cmd_build, "check": cmd_check, "probe": cmd_probe, "units": cmd_units, "paige": cmd_paige}


def _error_report(run: Run, code: int, message: str, extra: dict | None = None):
    if run.args.out and run.args.command != "build":
        report = run.envelope(run.args.command, getattr(run.args, "suite", None))
        report.update({"verdict": False, "exit_code": code, "error": message, **(extra or {})})
        write_json_atomic(run.args.out, report)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    run = Run(args)
    try:
        return COMMANDS[args.command](run)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _error_report(run, EXIT_USAGE, str(exc))
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        _error_report(run, EXIT_CAP, str(exc))
        return EXIT_CAP
    except Inconclusive as exc:
        print(f"inconclusive: {exc} {json.dumps(exc.stats)}", file=sys.stderr)
        _error_report(run, EXIT_INCONCLUSIVE, str(exc), {"embedding_search": exc.stats})
        return EXIT_INCONCLUSIVE
    except ProbeError as exc:
        print(f"probe aborted at step {exc.step}: {exc}", file=sys.stderr)
        _error_report(run, EXIT_FAIL, str(exc), {"failed_step": exc.step})
        return EXIT_FAIL
    except UnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _error_report(run, EXIT_USAGE, str(exc))
        return EXIT_USAGE
    except (StructureError, ContractError) as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        _error_report(run, EXIT_FAIL, str(exc))
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
