import json
import subprocess
import sys

import pytest

from moufang_lab.cli import main

ZORN2 = {"kind": "zorn", "ring": {"kind": "GFp", "p": 2}}
GF3C3 = {"kind": "group_algebra", "ring": {"kind": "GFp", "p": 3}, "n": 3}
PAIGE2 = {"kind": "paige", "q": 2}
BROKEN_UNIT = {"kind": "constants", "ring": {"kind": "GFp", "p": 2}, "dim": 2, "table": [[[1, 0], [0, 0]], [[0, 1], [0, 1]]], "unit": [1, 0]}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def broken_zorn():
    """Zorn(GF(2)) structure constants with one product changed, unit intact."""
    from moufang_lab.algebra import StructureAlgebra
    from moufang_lab.octonion import zorn_algebra
    from moufang_lab.scalars import PrimeField

    A = zorn_algebra(PrimeField(2))
    table = [[list(A.constants[i][j]) for j in range(8)] for i in range(8)]
    table[1][2] = [1, 0, 0, 0, 0, 0, 0, 0]
    B = StructureAlgebra(PrimeField(2), 8, table, A.unit)
    return B.to_spec()


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# build


def test_build_zorn_artifact(tmp_path, capsys):
    spec = write(tmp_path, "zorn.json", ZORN2)
    out = tmp_path / "zorn.art.json"
    code, text, _ = run(["build", spec, "--out", str(out)], capsys)
    assert code == 0 and "dimension 8" in text
    art = json.loads(out.read_text())
    assert art["artifact"] == "algebra" and art["dim"] == 8 and art["digest"]
    # idempotent
    first = out.read_text()
    run(["build", spec, "--out", str(out)], capsys)
    assert out.read_text() == first


def test_build_loop_artifact(tmp_path, capsys):
    out = tmp_path / "p2.json"
    code, text, _ = run(["build", write(tmp_path, "p.json", PAIGE2), "--out", str(out)], capsys)
    assert code == 0 and "order 120" in text
    assert json.loads(out.read_text())["order"] == 120


def test_build_malformed_json(tmp_path, capsys):
    code, _, err = run(["build", write(tmp_path, "bad.json", "{not json")], capsys)
    assert code == 2 and "malformed" in err


def test_build_schema_violation(tmp_path, capsys):
    code, _, err = run(["build", write(tmp_path, "bad.json", {"kind": "zorn"})], capsys)
    assert code == 2
    code, _, _ = run(["build", write(tmp_path, "bad2.json", {"kind": "nope"})], capsys)
    assert code == 2


def test_build_broken_unit(tmp_path, capsys):
    code, _, err = run(["build", write(tmp_path, "b.json", BROKEN_UNIT)], capsys)
    assert code == 1 and "basis index 1" in err


def test_artifact_roundtrip_and_stale_digest(tmp_path, capsys):
    out = tmp_path / "z.json"
    run(["build", write(tmp_path, "s.json", ZORN2), "--out", str(out)], capsys)
    code, _, _ = run(["check", "alternative", "--algebra", str(out)], capsys)
    assert code == 0
    art = json.loads(out.read_text())
    art["digest"] = "0" * len(art["digest"])
    stale = write(tmp_path, "stale.json", art)
    code, _, err = run(["check", "alternative", "--algebra", stale], capsys)
    assert code == 2 and "stale" in err


# ---------------------------------------------------------------------------
# check suites


def test_check_alternative_broken_has_witness(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(["check", "alternative", "--algebra", write(tmp_path, "b.json", broken_zorn()), "--out", str(out)], capsys)
    assert code == 1 and "witness" in text
    rep = json.loads(out.read_text())
    assert rep["verdict"] is False
    w = rep["reports"][0]["witness"]
    assert {"x", "y", "law"} <= set(w)


def test_check_moufang_algebra_broken(tmp_path, capsys):
    code, _, _ = run(["check", "moufang-algebra", "--algebra", write(tmp_path, "b.json", broken_zorn())], capsys)
    assert code == 1


def test_check_simplicity_paige2(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["check", "simplicity", "--loop", write(tmp_path, "p.json", PAIGE2), "--out", str(out)], capsys)
    assert code == 0
    cert = json.loads(out.read_text())["reports"][0]["details"]["certificate"]
    assert cert["simple"] and cert["full_closures"] == 119


def test_check_simplicity_fails_on_c4(tmp_path, capsys):
    code, _, _ = run(["check", "simplicity", "--loop", write(tmp_path, "c.json", {"kind": "cyclic", "n": 4})], capsys)
    assert code == 1


def test_check_lemma_gf3c3(tmp_path, capsys):
    code, text, _ = run(["check", "lemma", "--algebra", write(tmp_path, "g.json", GF3C3)], capsys)
    assert code == 0 and "lemma: PASS" in text


@pytest.mark.parametrize("suite", ["unit-loop", "ip", "moufang-loop", "smiley"])
def test_check_suites_on_zorn2(tmp_path, capsys, suite):
    code, _, _ = run(["check", suite, "--algebra", write(tmp_path, "z.json", ZORN2)], capsys)
    assert code == 0


def test_check_ip_on_loop_file(tmp_path, capsys):
    loop = {"order": 3, "id": 0, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}
    code, _, _ = run(["check", "ip", "--loop", write(tmp_path, "c3.json", loop)], capsys)
    assert code == 0


def test_check_invalid_loop_file(tmp_path, capsys):
    loop = {"order": 3, "id": 0, "table": [[0, 1, 2], [1, 1, 0], [2, 0, 1]]}
    code, _, err = run(["check", "ip", "--loop", write(tmp_path, "bad.json", loop)], capsys)
    assert code == 1 and "row 1" in err


def test_unknown_suite_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run(["check", "nonsense", "--algebra", write(tmp_path, "z.json", ZORN2), "--out", str(out)], capsys)
    assert code == 2 and "unknown suite" in err
    rep = json.loads(out.read_text())
    assert rep["exit_code"] == 2 and rep["verdict"] is False


def test_missing_input_is_usage_error(capsys):
    code, _, err = run(["check", "alternative"], capsys)
    assert code == 2 and "--algebra" in err


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["check", "alternative", "--samples", "0"])
    assert exc.value.code == 2


def test_cap_exceeded(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["check", "unit-loop", "--algebra", write(tmp_path, "z.json", ZORN2), "--cap-elements", "100", "--out", str(out)], capsys)
    assert code == 3
    assert json.loads(out.read_text())["exit_code"] == 3


def test_exhaustive_over_rationals_is_usage_error(tmp_path, capsys):
    spec = {"kind": "cayley_dickson", "ring": {"kind": "Q"}}
    code, _, _ = run(["check", "alternative", "--algebra", write(tmp_path, "o.json", spec)], capsys)
    assert code == 2
    code, _, _ = run(["check", "alternative", "--mode", "sampled", "--samples", "50", "--algebra", write(tmp_path, "o.json", spec)], capsys)
    assert code == 0


# ---------------------------------------------------------------------------
# envelope and determinism


def test_report_envelope(tmp_path, capsys):
    out = tmp_path / "r.json"
    run(["check", "alternative", "--algebra", write(tmp_path, "z.json", ZORN2), "--out", str(out)], capsys)
    rep = json.loads(out.read_text())
    for key in ("tool", "version", "command", "suite", "mode", "seed", "samples", "caps", "inputs"):
        assert key in rep
    assert rep["suite"] == "alternative" and rep["seed"] == 42 and rep["inputs"]["algebra"]


def test_json_format_on_stdout(tmp_path, capsys):
    code, text, _ = run(["units", "--algebra", write(tmp_path, "g.json", GF3C3), "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(text)
    assert rep["units"] == rep["second_count"] == 18


def test_no_temp_files_left(tmp_path, capsys):
    out = tmp_path / "out" / "r.json"
    run(["units", "--algebra", write(tmp_path, "g.json", GF3C3), "--out", str(out)], capsys)
    assert [p.name for p in out.parent.iterdir()] == ["r.json"]


# ---------------------------------------------------------------------------
# paige and probe


def test_paige_command(tmp_path, capsys):
    code, text, _ = run(["paige", "3", "--mode", "sampled"], capsys)
    assert code == 0 and "order 1080 = 2160 / 2" in text
    code, _, _ = run(["paige", "4"], capsys)
    assert code == 2


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k != "ms"}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def test_probe_paige2_zorn2_deterministic(tmp_path, capsys):
    q = write(tmp_path, "p.json", PAIGE2)
    a = write(tmp_path, "z.json", ZORN2)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        code, text, _ = run(["probe", "--loop", q, "--algebra", a, "--out", str(out)], capsys)
        assert code == 0
        outs.append(_strip(json.loads(out.read_text())))
    assert outs[0] == outs[1]
    steps = [s["name"] for s in outs[0]["probe"]["steps"]]
    assert steps == ["embedding", "simplicity", "loop_span", "sum_proper_ideals", "quotient", "quasiregular"]
    assert outs[0]["embedding_search"]["status"] == "found"


def test_probe_too_large_q_exits_4(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["probe", "--loop", write(tmp_path, "p.json", PAIGE2), "--algebra", write(tmp_path, "g.json", GF3C3), "--out", str(out)], capsys)
    assert code == 4
    assert json.loads(out.read_text())["embedding_search"]["nodes"] == 0


def test_probe_search_exhausted_exits_4(tmp_path, capsys):
    # C3 does not embed in U(GF(2)[C2]) = C2
    spec = {"kind": "group_algebra", "ring": {"kind": "GFp", "p": 2}, "n": 4}
    code, _, err = run(["probe", "--loop", write(tmp_path, "c.json", {"kind": "cyclic", "n": 3}), "--algebra", write(tmp_path, "g.json", spec)], capsys)
    assert code == 4 and "exhausted" in err


def test_probe_invalid_hom_exits_1(tmp_path, capsys):
    q = write(tmp_path, "c2.json", {"kind": "cyclic", "n": 2})
    a = write(tmp_path, "g.json", GF3C3)
    hom = write(tmp_path, "h.json", {"map": [0, 1]})
    code, _, err = run(["probe", "--loop", q, "--algebra", a, "--hom", hom], capsys)
    assert code == 1 and "embedding" in err


def test_probe_supplied_hom(tmp_path, capsys):
    from moufang_lab.algebra import group_algebra
    from moufang_lab.bridge import unit_loop
    from moufang_lab.scalars import PrimeField

    model = unit_loop(group_algebra(PrimeField(3), 3))
    minus_one = model.position(model.algebra.element([2, 0, 0]))
    q = write(tmp_path, "c2.json", {"kind": "cyclic", "n": 2})
    hom = write(tmp_path, "h.json", {"map": [model.loop.identity, minus_one]})
    code, _, _ = run(["probe", "--loop", q, "--algebra", write(tmp_path, "g.json", GF3C3), "--hom", hom], capsys)
    assert code == 0


def test_console_entry_point(tmp_path):
    spec = write(tmp_path, "z.json", ZORN2)
    proc = subprocess.run([sys.executable, "-m", "moufang_lab.cli", "build", spec], capture_output=True, text=True)
    assert proc.returncode == 0 and "dimension 8" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "moufang_lab.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "moufang-lab" in proc.stdout
