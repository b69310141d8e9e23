import json
from pathlib import Path

import pytest

from graphonlab.cli import default_config, main
from graphonlab.scenarios import ScenarioError, build_graphon, run_scenario, scenarios

NAMES = ["winding-torus", "padic", "truncation", "purity", "frucht", "graphing-check", "image-limits"]


def read_all(d: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


class TestList:
    def test_registry(self):
        assert scenarios() == NAMES

    def test_list_command(self, capsys):
        assert main(["list"]) == 0
        assert capsys.readouterr().out.split() == NAMES


class TestRun:
    @pytest.mark.parametrize("name", NAMES)
    def test_bundled_defaults(self, name, tmp_path, capsys):
        cfg = default_config(name)
        assert cfg["scenario"] == name
        assert main(["run", name, "--out-dir", str(tmp_path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["scenario"] == name
        assert out["files"] and all((tmp_path / f).is_file() for f in out["files"])

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"scenario": "frucht", "params": {"group": "Z3"}, "seed": 0,
                                   "out_dir": str(tmp_path / "out")}))
        assert main(["run", str(cfg)]) == 0
        result = json.loads((tmp_path / "out" / "result.json").read_text())
        assert result["automorphism_order"] == 3
        assert json.loads((tmp_path / "out" / "graph.json").read_text())["num_vertices"] == 18

    def test_truncation_output(self, tmp_path):
        assert main(["run", "truncation", "--out-dir", str(tmp_path)]) == 0
        sweep = {s["r"]: s for s in json.loads((tmp_path / "truncation.json").read_text())}
        assert sweep[0.6]["retained_count"] == 0
        assert abs(sweep[0.6]["hs_error"] - 2**-0.5) <= 1e-12
        assert (tmp_path / "spectrum.csv").read_text().startswith("rank,eigenvalue\n")

    def test_winding_output(self, tmp_path):
        assert main(["run", "winding-torus", "--out-dir", str(tmp_path)]) == 0
        lines = (tmp_path / "densities.csv").read_text().splitlines()
        assert lines[0] == "index,pattern_name,density,delta"
        assert any(line.startswith("limit,") for line in lines)

    def test_unknown_name(self, capsys):
        assert main(["run", "no-such-scenario"]) == 2
        assert "no-such-scenario" in capsys.readouterr().err

    def test_unknown_scenario_in_file(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"scenario": "nope"}))
        assert main(["run", str(cfg), "--out-dir", str(tmp_path)]) == 2
        assert "unknown scenario" in capsys.readouterr().err

    def test_invalid_json(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert main(["run", str(cfg)]) == 2

    def test_invalid_params(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"scenario": "truncation", "params": {"r": [-1]}}))
        assert main(["run", str(cfg), "--out-dir", str(tmp_path)]) == 2
        cfg.write_text(json.dumps({"scenario": "frucht", "params": {"group": "Z9"}}))
        assert main(["run", str(cfg), "--out-dir", str(tmp_path)]) == 2

    def test_runtime_error(self, tmp_path, monkeypatch):
        import graphonlab.scenarios as sc

        def boom(params, seed, out_dir):
            raise RuntimeError("boom")

        monkeypatch.setitem(sc.REGISTRY, "truncation", boom)
        assert main(["run", "truncation", "--out-dir", str(tmp_path)]) == 1


class TestDeterminism:
    @pytest.mark.parametrize("name", ["purity", "padic", "winding-torus"])
    def test_byte_identical(self, name, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["run", name, "--out-dir", str(a)]) == 0
        assert main(["run", name, "--out-dir", str(b)]) == 0
        assert read_all(a) == read_all(b)

    def test_seed_override(self, tmp_path):
        a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
        assert main(["run", "purity", "--out-dir", str(a), "--seed", "1"]) == 0
        assert main(["run", "purity", "--out-dir", str(b), "--seed", "2"]) == 0
        assert main(["run", "purity", "--out-dir", str(c), "--seed", "1"]) == 0
        assert read_all(a) != read_all(b)
        assert read_all(a) == read_all(c)


class TestScenarioApi:
    def test_unknown(self, tmp_path):
        with pytest.raises(ScenarioError):
            run_scenario("nope", {}, 0, tmp_path)

    def test_params_type(self, tmp_path):
        with pytest.raises(ScenarioError):
            run_scenario("padic", [], 0, tmp_path)

    def test_build_graphon(self):
        assert build_graphon({"kind": "G2"}).K.tolist() == [[0, 1], [1, 0]]
        assert len(build_graphon({"kind": "cayley-winding", "N": 16, "exponents": [3]})) == 16
        with pytest.raises(ScenarioError):
            build_graphon({"kind": "mystery"})

    def test_graphing_check(self, tmp_path):
        s = run_scenario("graphing-check", {}, 0, tmp_path)
        assert s["eta_VxV"] == 2.0 and s["automorphism_order"] == 8 and s["degree_symmetry"]["holds"]
