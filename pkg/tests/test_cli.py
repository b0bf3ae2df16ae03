import csv
import io
import json
import subprocess
import sys

import pytest

from steinberg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_phi_homology(capsys):
    code, out = run(capsys, "phi", "--genus", "2", "homology")
    assert code == 0
    js = json.loads(out)
    assert js["schema"] == "steinberg.cli/1" and js["passed"]
    assert [h["group"] for h in js["data"]["reduced"]] == ["0", "0", "Z"]


def test_phi_build(capsys):
    code, out = run(capsys, "phi", "--genus", "2", "build")
    assert code == 0
    assert json.loads(out)["data"]["f_vector"] == [9, 21, 14]


@pytest.mark.parametrize("bad", ["1", "0", "x"])
def test_bad_genus_is_a_usage_error(bad, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["phi", "--genus", bad, "build"])
    assert exc.value.code == 2


def test_usage_errors_from_a_subprocess():
    proc = subprocess.run([sys.executable, "-m", "steinberg.cli", "phi", "--genus", "1", "homology"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "genus" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "steinberg.cli", "opt", "vertex", "--delete", "c9"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_map_vertices(capsys):
    code, out = run(capsys, "map", "--genus", "2", "vertices")
    assert code == 0
    rows = json.loads(out)["data"]["vertices"]
    assert len(rows) == 9
    assert sum(r["separating"] == [True] for r in rows) == 3
    assert sum(r["short"] for r in rows) == 6


def test_map_stabilizer(capsys):
    code, out = run(capsys, "map", "--genus", "2", "stabilizer")
    assert code == 0
    elements = json.loads(out)["data"]["elements"]
    assert len(elements) == 12 and {e["sign"] for e in elements} <= {1, -1}


def test_map_cycle_genus_three(capsys):
    code, out = run(capsys, "map", "--genus", "3", "cycle")
    assert code == 0
    checks = {c["name"]: c["passed"] for c in json.loads(out)["checks"]}
    assert checks["zero_boundary"] and checks["nonzero_support"]


def test_literal_flags_fail_and_union_passes(capsys):
    code, out = run(capsys, "map", "--genus", "2", "flags")
    assert code == 1
    assert json.loads(out)["data"]["literal"]["failure_count"] == 42
    code, _ = run(capsys, "map", "--genus", "2", "flags", "--model", "union")
    assert code == 0


def test_hyp_deltastar(capsys):
    code, out = run(capsys, "hyp", "--genus", "2", "deltastar")
    assert code == 0
    assert json.loads(out)["data"]["delta_star"] == pytest.approx(1.0986122886681, abs=1e-8)


def test_hyp_profile_csv(tmp_path, capsys):
    code, _ = run(capsys, "hyp", "--genus", "2", "profile", "--t", "0:0.4:0.02", "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.reader(io.StringIO((tmp_path / "hyp_profile_g2.csv").read_text())))
    # the one-sided grid is mirrored: 41 values of t
    assert len(rows) == 42
    table = {float(r[0]): float(r[1]) for r in rows[1:]}
    assert min(table.values()) == table[0.0]
    assert all(abs(table[t] - table[-t]) <= 1e-9 for t in table)


def test_hyp_polygon_svg(tmp_path, capsys):
    code, _ = run(capsys, "hyp", "--genus", "2", "polygon", "--svg", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "hyp_polygon_g2.svg").read_text().startswith("<svg")


def test_environment_output_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("STEINBERG_OUT", str(tmp_path / "env"))
    code, _ = run(capsys, "phi", "--genus", "2", "build")
    assert code == 0
    assert json.loads((tmp_path / "env" / "phi_build_g2.json").read_text())["passed"]


@pytest.mark.parametrize("argv", [["phi", "cycle"], ["map", "stabilizer"], ["map", "equivariance"]])
def test_exact_suites_are_byte_identical(argv, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        run(capsys, argv[0], "--genus", "2", argv[1], "--out", str(d))
    name = f"{argv[0]}_{argv[1]}_g2.json"
    assert (a / name).read_bytes() == (b / name).read_bytes()


def test_opt_membership(capsys):
    code, out = run(capsys, "opt", "membership")
    assert code == 0 and json.loads(out)["data"]["member"]


def test_report_genus_three_skips_optimizers(capsys):
    code, out = run(capsys, "report", "--genus", "3")
    bundle = json.loads(out)
    suites = {s["suite"]: s for s in bundle["suites"]}
    for name, s in suites.items():
        if name.startswith(("hyp.", "opt.")):
            assert s["skipped"]
    # the literal face map is not monotone, every other combinatorial suite passes
    assert bundle["failing"] == ["map.flags.monotone[literal]"]
    assert code == 1


def test_corrupted_fixtures(tmp_path, capsys):
    bad = tmp_path / "fixtures.json"
    bad.write_text("{not json")
    code, out = run(capsys, "report", "--genus", "3", "--fixtures", str(bad))
    assert code == 1
    assert json.loads(out)["failing"] == ["fixtures.load"]


def test_mismatched_fixture_names_the_check(tmp_path, capsys):
    fx = tmp_path / "fixtures.json"
    fx.write_text(json.dumps({"f_vector": [20, 1, 1, 1, 1]}))
    code, out = run(capsys, "report", "--genus", "3", "--fixtures", str(fx))
    assert code == 1
    assert "fixtures.fixture:f_vector" in json.loads(out)["failing"]
