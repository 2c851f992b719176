import json

import pytest

from polydissect import cli


def run(argv):
    return cli.main([str(a) for a in argv])


def test_gen_validate_roundtrip(tmp_path, capsys):
    poly, simp = tmp_path / "p.txt", tmp_path / "d.txt"
    assert run(["gen", "--family", "lattice-p", "--out", poly, "--simplices", simp]) == 0
    assert run(["validate", poly, simp, "--expect-size", 12, "--expect-status", "DISSECTION"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["outputs"]["regions"][0]["k"] == 4
    assert set(report) == {"command", "inputs", "outputs", "timing"}
    assert run(["validate", poly, simp, "--expect-status", "TRIANGULATION"]) == cli.EXIT_MISMATCH


def test_gen_named_construction(tmp_path):
    poly, simp = tmp_path / "p.txt", tmp_path / "t.txt"
    assert run(["gen", "--family", "prism", "--m", 6, "--coords", "parabola", "--out", poly,
                "--simplices", simp, "--construction", "max-placing"]) == 0
    assert len(simp.read_text().splitlines()) == 18
    assert run(["gen", "--family", "cube", "--d", 3, "--out", poly, "--simplices", simp]) == cli.EXIT_INPUT


def test_solve_exit_codes(tmp_path, monkeypatch):
    poly, out = tmp_path / "p.txt", tmp_path / "r.json"
    run(["gen", "--family", "antiprism8-p", "--out", poly])
    assert run(["solve", poly, "--mode", "diss", "--sense", "min", "--enumerate", "--out", out, "--expect", 6]) == 0
    rep = json.loads(out.read_text())["outputs"]
    assert rep["optimum"] == 6 and len(rep["all_optima"]) == 1 and rep["enumeration_complete"]
    assert run(["solve", poly, "--mode", "tri", "--sense", "min", "--expect", 6, "--out", out]) == cli.EXIT_MISMATCH
    monkeypatch.setenv(cli.BUDGET_ENV, "1")
    assert run(["solve", poly, "--mode", "tri", "--sense", "max", "--out", out]) == cli.EXIT_BUDGET


def test_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 0 0\n")
    assert run(["solve", bad]) == cli.EXIT_INPUT
    assert "line 1" in capsys.readouterr().err
    assert run(["gen", "--family", "pm", "--m", 5]) == cli.EXIT_INPUT
    with pytest.raises(SystemExit) as exc:
        run(["gen", "--family", "dodecahedron"])
    assert exc.value.code == cli.EXIT_INPUT


def test_table_prop23(tmp_path):
    out = tmp_path / "t.json"
    assert run(["table", "prop23", "--quiet", "--out", out]) == 0
    rows = json.loads(out.read_text())["outputs"]
    assert len(rows) == 8 and all(r["source"] for r in rows)
    assert [r["status"] for r in rows].count("pass") == 6
    assert {r["computed"] for r in rows if r["status"] == "recorded"} == {5}
    assert all(r["fingerprint"] for r in rows)


def test_gen_file_roundtrip_is_byte_identical(tmp_path):
    from polydissect.pointconfig import format_polytope, parse_polytope

    poly = tmp_path / "p.txt"
    for argv in (["--family", "prism", "--m", 6, "--coords", "parabola"], ["--family", "pm", "--m", 8],
                 ["--family", "lattice-p"]):
        assert run(["gen", *argv, "--out", poly]) == 0
        text = poly.read_text()
        assert format_polytope(parse_polytope(text)) == text
    assert text.splitlines()[0] == "3 8"


def test_solve_report_repeats_exactly(tmp_path):
    poly, a, b = tmp_path / "p.txt", tmp_path / "a.json", tmp_path / "b.json"
    run(["gen", "--family", "lattice-p", "--out", poly])
    for out in (a, b):
        run(["solve", poly, "--mode", "tri", "--sense", "max", "--node-budget", 500, "--out", out])
    ra, rb = (json.loads(p.read_text()) for p in (a, b))
    ra.pop("timing"), rb.pop("timing")
    assert ra == rb


def test_validate_cube_and_truncated_family(tmp_path, capsys):
    poly, simp = tmp_path / "c.txt", tmp_path / "t.txt"
    assert run(["gen", "--family", "trapezoid-cube", "--out", poly, "--simplices", simp]) == 0
    assert run(["validate", poly, simp, "--expect-status", "TRIANGULATION", "--expect-size", 7]) == 0
    capsys.readouterr()
    lines = simp.read_text().splitlines()
    simp.write_text("\n".join(lines[:-1]) + "\n")
    assert run(["validate", poly, simp, "--expect-status", "INVALID"]) == 0
    out = json.loads(capsys.readouterr().out)["outputs"]
    assert out["status"] == "INVALID" and out["volume_deficit"] != "0"
