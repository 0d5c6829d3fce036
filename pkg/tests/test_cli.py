import json
import os

import pytest

from topochrom.cli import main
from topochrom.io import from_dimacs, graph_from_obj, load_json
from topochrom.recipe import run_recipe


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def bundled(name: str) -> str:
    import topochrom

    return os.path.join(os.path.dirname(topochrom.__file__), "recipes", name)


class TestBuildSolve:
    def test_build_and_solve_chi(self, tmp_path, capsys):
        path = str(tmp_path / "sg6_2.json")
        code, _ = run(capsys, "build", "schrijver", "--n", "6", "--k", "2", "-o", path)
        assert code == 0
        code, out = run(capsys, "solve", "chi", "--in", path, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == 4 and payload["exact"] is True

    def test_solve_psi_with_node_limit_flag(self, tmp_path, capsys):
        path = str(tmp_path / "c5.json")
        run(capsys, "build", "cycle", "--n", "5", "-o", path)
        code, out = run(capsys, "solve", "psi", "--in", path, "--limit-nodes", "1e7", "--json")
        assert code == 0
        assert json.loads(out)["value"] == 3

    def test_solve_fractional(self, tmp_path, capsys):
        path = str(tmp_path / "pet.json")
        run(capsys, "build", "kneser", "--n", "5", "--k", "2", "-o", path)
        code, out = run(capsys, "solve", "chi-f", "--in", path, "--json")
        assert code == 0
        assert json.loads(out)["value"] == "5/2"

    def test_solve_circular(self, tmp_path, capsys):
        path = str(tmp_path / "c7.json")
        run(capsys, "build", "cycle", "--n", "7", "-o", path)
        code, out = run(capsys, "solve", "chi-c", "--in", path, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == "7/3" and (payload["p"], payload["q"]) == (7, 3)

    def test_missing_file_is_input_error(self, capsys):
        code, _ = run(capsys, "solve", "chi", "--in", "/nonexistent.json")
        assert code == 4


class TestColorVerify:
    def test_color_writes_verification(self, tmp_path, capsys):
        cpath = str(tmp_path / "c.json")
        gpath = str(tmp_path / "g.json")
        code, out = run(
            capsys,
            "color",
            "sg-interval",
            "--n", "15", "--k", "7", "--sizes", "5,5,5",
            "-o", cpath, "--graph-out", gpath, "--json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["proper"] and payload["swide_3"]
        code, out = run(
            capsys, "verify", "coloring", "--graph", gpath, "--coloring", cpath,
            "--swide", "3", "--json",
        )
        assert code == 0 and json.loads(out)["swide_3"]

    def test_color_widen(self, tmp_path, capsys):
        code, out = run(
            capsys,
            "color", "sg-interval", "--n", "15", "--k", "7", "--sizes", "5,5,5",
            "--widen", "--json",
        )
        assert code == 0
        assert json.loads(out)["max_plus_one"] <= 3

    def test_verify_hom(self, tmp_path, capsys):
        import topochrom.io as tio
        from topochrom.families import cycle

        g9, g3 = cycle(9), cycle(3)
        src, tgt, mp = tmp_path / "c9.json", tmp_path / "c3.json", tmp_path / "h.json"
        tio.dump_json(tio.graph_to_obj(g9), str(src))
        tio.dump_json(tio.graph_to_obj(g3), str(tgt))
        tio.dump_json(tio.hom_to_obj(g9, g3, {v: v % 3 for v in range(9)}), str(mp))
        code, out = run(
            capsys, "verify", "hom", "--source", str(src), "--target", str(tgt),
            "--map", str(mp), "--json",
        )
        assert code == 0 and json.loads(out)["edge_preserving"]
        # break the map
        tio.dump_json(tio.hom_to_obj(g9, g3, {v: 0 for v in range(9)}), str(mp))
        code, _ = run(
            capsys, "verify", "hom", "--source", str(src), "--target", str(tgt),
            "--map", str(mp),
        )
        assert code == 2


class TestExport:
    def test_roundtrip(self, tmp_path, capsys):
        j1 = str(tmp_path / "g.json")
        col = str(tmp_path / "g.col")
        j2 = str(tmp_path / "g2.json")
        run(capsys, "build", "cycle", "--n", "5", "-o", j1)
        code, _ = run(capsys, "export", "--in", j1, "--format", "dimacs", "-o", col)
        assert code == 0
        code, _ = run(capsys, "export", "--in", col, "--format", "json", "-o", j2)
        assert code == 0
        a = graph_from_obj(load_json(j1))
        b = graph_from_obj(load_json(j2))
        assert a.n == b.n and set(a.edges()) == set(b.edges())


class TestGeomCli:
    def test_hemisphere(self, capsys):
        code, out = run(
            capsys, "geom", "hemisphere", "--n", "6", "--k", "2",
            "--samples", "5000", "--seed", "7", "--json",
        )
        assert code == 0 and json.loads(out)["failures"] == 0

    def test_cover_json_has_all_statistics(self, capsys):
        code, out = run(
            capsys, "geom", "cover", "--k", "2", "--plus",
            "--samples", "5000", "--seed", "7", "--json",
        )
        assert code == 0
        payload = json.loads(out)
        for key in ("coverage", "max_multiplicity", "antipodal_conflicts", "max_either_or"):
            assert key in payload

    def test_circlemap(self, capsys):
        code, out = run(
            capsys, "geom", "circlemap", "--n", "2", "--p", "7", "--q", "3",
            "--alpha", "1.999", "--points", "300", "--seed", "1", "--json",
        )
        assert code == 0 and json.loads(out)["verified"]


class TestRecipes:
    def test_bundled_circ_even(self, tmp_path, capsys):
        art = str(tmp_path / "art")
        code, _ = run(capsys, "recipe", bundled("circ-even.json"), "--artifacts", art, "--figures")
        assert code == 0
        assert os.path.exists(os.path.join(art, "summary.csv"))
        assert os.path.exists(os.path.join(art, "expectations.png"))
        assert os.path.exists(os.path.join(art, "circ.coloring.json"))

    def test_bundled_sg33_psi(self, capsys):
        code, out = run(capsys, "recipe", bundled("sg33-psi.json"))
        assert code == 0 and "PASS" in out

    def test_bundled_pipeline(self, capsys):
        code, out = run(capsys, "recipe", bundled("odd-circular-gap.json"), "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["steps"]["pipe"]["value"] == "5/2"

    def test_negative_control_fails_with_diff(self, tmp_path, capsys):
        recipe = {
            "name": "neg",
            "steps": [
                {"id": "g", "op": "cycle", "params": {"n": 5}},
                {"id": "chi", "op": "chi", "params": {"graph": "$g"}},
            ],
            "expected": [{"quantity": "chi.value", "equals": 2}],
        }
        path = tmp_path / "neg.json"
        path.write_text(json.dumps(recipe))
        code, out = run(capsys, "recipe", str(path))
        assert code == 2
        assert "FAIL" in out and "expected equals=2" in out and "got 3" in out

    def test_parse_error_is_input_error(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{nope")
        code, _ = run(capsys, "recipe", str(path))
        assert code == 4

    def test_unknown_op_is_input_error(self, tmp_path):
        path = tmp_path / "r.json"
        path.write_text(json.dumps({"steps": [{"id": "a", "op": "nope"}]}))
        assert run_recipe(str(path)).exit_code == 4

    def test_reproducible_artifacts(self, tmp_path, capsys):
        a1, a2 = str(tmp_path / "a1"), str(tmp_path / "a2")
        run(capsys, "recipe", bundled("circ-even.json"), "--artifacts", a1)
        run(capsys, "recipe", bundled("circ-even.json"), "--artifacts", a2)
        for name in ("circ.json", "g.graph.json", "summary.csv"):
            with open(os.path.join(a1, name)) as f1, open(os.path.join(a2, name)) as f2:
                assert f1.read() == f2.read()


class TestReportCmd:
    def test_report_writes_csv_and_figures(self, tmp_path, capsys):
        gpath = str(tmp_path / "g.json")
        cpath = str(tmp_path / "c.json")
        run(capsys, "build", "cycle", "--n", "5", "-o", gpath)
        import topochrom.io as tio
        from topochrom.core import Coloring
        from topochrom.families import cycle

        tio.dump_json(tio.coloring_to_obj(Coloring(cycle(5), (1, 2, 1, 2, 3))), cpath)
        out = str(tmp_path / "rep")
        code, _ = run(capsys, "report", "--graph", gpath, "--coloring", cpath, "-o", out)
        assert code == 0
        assert os.path.exists(os.path.join(out, "summary.csv"))
        assert os.path.exists(os.path.join(out, "profile.png"))
        assert os.path.exists(os.path.join(out, "palette.png"))


def test_unknown_command_is_input_error(capsys):
    assert main(["frobnicate"]) == 4


def test_budget_seconds_exits_3(tmp_path, capsys, monkeypatch):
    import time as _time

    import topochrom.solvers as sol

    def slow_psi(g, node_limit=None):
        for _ in range(500):
            _time.sleep(0.02)
        raise AssertionError("never reached")

    monkeypatch.setattr(sol, "local_chromatic", slow_psi)
    gpath = str(tmp_path / "g.json")
    run(capsys, "build", "cycle", "--n", "5", "-o", gpath)
    code, _ = run(capsys, "solve", "psi", "--in", gpath, "--budget-seconds", "0.2")
    assert code == 3
