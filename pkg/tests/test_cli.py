"""End-to-end tests of the command-line interface.

Commands run in-process through cli.main, so exit codes and both output
streams are observable.  A small necklace and two cell towers are generated
once per module and shared.
"""
import json
import os

import pytest

from wildtower import cli
from wildtower.simplicial import SimplicialComplex3


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_json(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


NECKLACE_SPEC = {
    "kind": "necklace",
    "n": 4,
    "depth": 1,
    "resolutions": [[16, 10], [10, 6]],
}
CELLS_SPEC = {
    "kind": "cells",
    "points": [[0, 0, 0], [1, 0, 0], [2.5, 0, 0]],
    "depth": 1,
}
ONE_CELL_SPEC = {"kind": "cells", "points": [[0, 0, 0]], "depth": 1}


@pytest.fixture(scope="module")
def necklace_dir(tmp_path_factory):
    base = tmp_path_factory.mktemp("necklace")
    spec = write_json(base / "spec.json", NECKLACE_SPEC)
    out = base / "out"
    assert cli.main(["generate", spec, str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def cells_dir(tmp_path_factory):
    base = tmp_path_factory.mktemp("cells")
    spec = write_json(base / "spec.json", CELLS_SPEC)
    out = base / "out"
    assert cli.main(["generate", spec, str(out)]) == 0
    return out


class TestGenerate:
    def test_necklace_layout(self, necklace_dir):
        assert (necklace_dir / "descriptor.json").is_file()
        meshes = sorted(p.name for p in (necklace_dir / "meshes").iterdir())
        json_meshes = [m for m in meshes if m.endswith(".json")]
        off_meshes = [m for m in meshes if m.endswith(".off")]
        assert len(json_meshes) == 5  # parent + 4 children
        assert len(off_meshes) == 5
        assert json_meshes[0] == "level0_comp000.json"

    def test_necklace_descriptor_contents(self, necklace_dir):
        data = json.loads((necklace_dir / "descriptor.json").read_text())
        assert data["schema"] == "tower/1"
        assert [len(level) for level in data["levels"]] == [1, 4]
        assert all(
            c["rank"] == 1 and not c["is_cell"]
            for level in data["levels"]
            for c in level
        )
        assert data["rule"]["children"]["torus"] == ["torus"] * 4
        refs = [c["mesh_ref"] for level in data["levels"] for c in level]
        assert refs[0] == "meshes/level0_comp000.json"
        assert all(r is not None for r in refs)

    def test_off_export_is_surface(self, necklace_dir):
        text = (necklace_dir / "meshes" / "level0_comp000.off").read_text()
        lines = text.splitlines()
        assert lines[0] == "OFF"
        n_verts, n_faces, _ = map(int, lines[1].split())
        assert n_verts == 16 * (2 * 10 + 1)
        assert n_faces > 0

    def test_mesh_json_reloads(self, necklace_dir):
        data = json.loads(
            (necklace_dir / "meshes" / "level1_comp002.json").read_text()
        )
        mesh = SimplicialComplex3.from_json_dict(data)
        assert tuple(mesh.betti()) == (1, 1, 0, 0)

    def test_generate_stdout_summary(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", ONE_CELL_SPEC)
        code, out, err = run_cli(["generate", spec, str(tmp_path / "out")], capsys)
        assert code == 0
        summary = json.loads(out)
        assert summary["levels"] == [1, 1]
        assert summary["mesh_files"] == 4
        assert "wrote" in err

    def test_cells_all_flagged(self, cells_dir):
        data = json.loads((cells_dir / "descriptor.json").read_text())
        assert [len(level) for level in data["levels"]] == [1, 2]
        assert all(
            c["is_cell"] and c["rank"] == 0
            for level in data["levels"]
            for c in level
        )
        assert data["declared_r"] == 0

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        code, out, err = run_cli(["generate", str(bad), str(tmp_path / "o")], capsys)
        assert code == 2
        assert "not valid JSON" in err

    def test_missing_spec_exits_2(self, tmp_path, capsys):
        code, _, err = run_cli(
            ["generate", str(tmp_path / "nope.json"), str(tmp_path / "o")], capsys
        )
        assert code == 2
        assert "cannot read" in err

    def test_unknown_kind_exits_2(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", {"kind": "klein-bottle"})
        code, _, err = run_cli(["generate", spec, str(tmp_path / "o")], capsys)
        assert code == 2
        assert "unknown construction kind" in err

    def test_invalid_parameters_exit_2(self, tmp_path, capsys):
        spec = write_json(
            tmp_path / "spec.json", {"kind": "cells", "points": [], "depth": 1}
        )
        code, _, err = run_cli(["generate", spec, str(tmp_path / "o")], capsys)
        assert code == 2
        assert "at least one point" in err

    def test_budget_exceeded_exits_2(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", NECKLACE_SPEC)
        code, _, err = run_cli(
            ["generate", spec, str(tmp_path / "o"), "--budget", "100"], capsys
        )
        assert code == 2
        assert "budget exceeded" in err

    def test_no_meshes(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", ONE_CELL_SPEC)
        out = tmp_path / "out"
        code, _, _ = run_cli(["generate", spec, str(out), "--no-meshes"], capsys)
        assert code == 0
        assert not (out / "meshes").exists()
        data = json.loads((out / "descriptor.json").read_text())
        assert all(
            c["mesh_ref"] is None for level in data["levels"] for c in level
        )

    def test_deterministic_artifacts(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", CELLS_SPEC)
        a, b = tmp_path / "a", tmp_path / "b"
        assert cli.main(["generate", spec, str(a)]) == 0
        assert cli.main(["generate", spec, str(b)]) == 0
        capsys.readouterr()
        for name in ["descriptor.json"] + [
            f"meshes/{p.name}" for p in sorted((a / "meshes").iterdir())
        ]:
            assert (a / name).read_bytes() == (b / name).read_bytes(), name


class TestHomology:
    def test_torus_mesh(self, necklace_dir, capsys):
        mesh = necklace_dir / "meshes" / "level0_comp000.json"
        code, out, _ = run_cli(["homology", str(mesh)], capsys)
        assert code == 0
        assert json.loads(out) == {"b0": 1, "b1": 1, "b2": 0, "b3": 0}

    def test_descriptor_level_totals(self, necklace_dir, capsys):
        code, out, _ = run_cli(
            ["homology", str(necklace_dir / "descriptor.json")], capsys
        )
        assert code == 0
        data = json.loads(out)
        assert data["level_totals"] == [1, 4]
        assert data["levels"][1][3] == {"b0": 1, "b1": 1, "b2": 0, "b3": 0}

    def test_empty_complex_all_zeros(self, tmp_path, capsys):
        mesh = write_json(
            tmp_path / "empty.json", SimplicialComplex3([]).to_json_dict()
        )
        code, out, _ = run_cli(["homology", mesh], capsys)
        assert code == 0
        assert json.loads(out) == {"b0": 0, "b1": 0, "b2": 0, "b3": 0}

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code, _, err = run_cli(["homology", str(tmp_path / "gone.json")], capsys)
        assert code == 2
        assert "cannot read" in err

    def test_unsupported_schema_exits_2(self, tmp_path, capsys):
        path = write_json(tmp_path / "odd.json", {"schema": "mesh/99"})
        code, _, err = run_cli(["homology", path], capsys)
        assert code == 2
        assert "unsupported schema" in err

    def test_descriptor_without_geometry_exits_2(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", ONE_CELL_SPEC)
        out = tmp_path / "out"
        assert cli.main(["generate", spec, str(out), "--no-meshes"]) == 0
        capsys.readouterr()
        code, _, err = run_cli(
            ["homology", str(out / "descriptor.json")], capsys
        )
        assert code == 2
        assert "no mesh reference" in err


class TestAnalyze:
    def test_cell_tower_certificate(self, cells_dir, capsys):
        code, out, err = run_cli(
            ["analyze", str(cells_dir / "descriptor.json")], capsys
        )
        assert code == 0
        report = json.loads(out)
        assert report["schema"] == "report/1"
        assert report["verdict"] == "CERTIFICATE_R0"
        assert report["bounds"]["upper_bound_r"] == 0
        assert "verdict: CERTIFICATE_R0" in err

    def test_necklace_obstruction_with_flag(self, necklace_dir, capsys):
        code, out, _ = run_cli(
            [
                "analyze",
                str(necklace_dir / "descriptor.json"),
                "--complement-nontrivial",
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["verdict"] == "OBSTRUCTION"
        similarity = next(
            c for c in report["checks"] if c["name"] == "self-similarity"
        )
        assert similarity["evidence"]["equation"] == "r = 4*r"

    def test_necklace_inconclusive_without_flag(self, necklace_dir, capsys):
        code, out, _ = run_cli(
            ["analyze", str(necklace_dir / "descriptor.json")], capsys
        )
        assert code == 0
        assert json.loads(out)["verdict"] == "INCONCLUSIVE"

    def test_rule_override_inline(self, necklace_dir, capsys):
        rule = json.dumps(
            {"children": {"t": ["t", "t"]}, "ranks": {"t": 1}}
        )
        code, out, _ = run_cli(
            [
                "analyze",
                str(necklace_dir / "descriptor.json"),
                "--complement-nontrivial",
                "--rule",
                rule,
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        similarity = next(
            c for c in report["checks"] if c["name"] == "self-similarity"
        )
        assert similarity["evidence"]["equation"] == "r = 2*r"

    def test_rule_from_file(self, cells_dir, tmp_path, capsys):
        rule = write_json(
            tmp_path / "rule.json",
            {"children": {"cell": ["cell", "cell"]}, "ranks": {"cell": 0}},
        )
        code, out, _ = run_cli(
            ["analyze", str(cells_dir / "descriptor.json"), "--rule", rule],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert any(c["name"] == "self-similarity" for c in report["checks"])
        assert report["verdict"] == "CERTIFICATE_R0"

    def test_bad_rule_exits_2(self, cells_dir, capsys):
        code, _, err = run_cli(
            [
                "analyze",
                str(cells_dir / "descriptor.json"),
                "--rule",
                '{"children": {}, "ranks": {}}',
            ],
            capsys,
        )
        assert code == 2
        assert "invalid substitution rule" in err

    def test_declared_r_mismatch_exits_1(self, necklace_dir, capsys):
        code, out, _ = run_cli(
            [
                "analyze",
                str(necklace_dir / "descriptor.json"),
                "--declared-r",
                "1",
            ],
            capsys,
        )
        assert code == 1
        report = json.loads(out)
        failed = [c["name"] for c in report["checks"] if c["status"] == "fail"]
        assert failed

    def test_annotation_discrepancy_exits_1(self, cells_dir, capsys):
        data = json.loads((cells_dir / "descriptor.json").read_text())
        data["levels"][0][0]["rank"] = 5
        bad = cells_dir / "corrupted.json"
        bad.write_text(json.dumps(data), encoding="utf-8")
        code, out, _ = run_cli(["analyze", str(bad)], capsys)
        assert code == 1
        report = json.loads(out)
        annotation = next(
            c for c in report["checks"] if c["name"] == "homology/annotation"
        )
        assert annotation["status"] == "fail"
        assert annotation["evidence"]["discrepancies"][0]["declared"] == 5

    def test_instance_name(self, cells_dir, capsys):
        code, out, _ = run_cli(
            [
                "analyze",
                str(cells_dir / "descriptor.json"),
                "--instance",
                "cells-demo",
            ],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["instance"] == "cells-demo"

    def test_plane_adds_subadditivity(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", ONE_CELL_SPEC)
        out_dir = tmp_path / "out"
        assert cli.main(["generate", spec, str(out_dir)]) == 0
        capsys.readouterr()
        code, out, _ = run_cli(
            [
                "analyze",
                str(out_dir / "descriptor.json"),
                "--plane",
                "x=2",
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        sub = next(c for c in report["checks"] if c["name"] == "subadditivity")
        assert sub["status"] == "pass"
        assert sub["evidence"]["bound_whole"] == 0

    def test_bad_plane_exits_2(self, cells_dir, capsys):
        for text in ["q=3", "x:3", "x=three"]:
            code, _, err = run_cli(
                ["analyze", str(cells_dir / "descriptor.json"), "--plane", text],
                capsys,
            )
            assert code == 2, text

    def test_straddling_plane_exits_2(self, cells_dir, capsys):
        code, _, err = run_cli(
            ["analyze", str(cells_dir / "descriptor.json"), "--plane", "x=1"],
            capsys,
        )
        assert code == 2
        assert "straddles" in err

    def test_figures_written_and_listed(self, cells_dir, tmp_path, capsys):
        figs = tmp_path / "figs"
        code, out, _ = run_cli(
            [
                "analyze",
                str(cells_dir / "descriptor.json"),
                "--figures",
                str(figs),
            ],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["figures"] == [
            "rank_profile.png",
            "branch_values.png",
            "mesh_projection.png",
            "levels.csv",
            "checks.csv",
        ]
        for name in report["figures"]:
            assert (figs / name).is_file()
        levels_csv = (figs / "levels.csv").read_text().splitlines()
        assert levels_csv[0] == "level,component,rank,is_cell,parent"
        assert levels_csv[1] == "0,0,0,1,"
        checks_csv = (figs / "checks.csv").read_text().splitlines()
        assert checks_csv[-1] == "verdict,CERTIFICATE_R0"

    def test_deterministic_output_and_figures(self, cells_dir, tmp_path, capsys):
        runs = []
        for sub in ("f1", "f2"):
            figs = tmp_path / sub
            code, out, _ = run_cli(
                [
                    "analyze",
                    str(cells_dir / "descriptor.json"),
                    "--figures",
                    str(figs),
                ],
                capsys,
            )
            assert code == 0
            runs.append((out, figs))
        out1, figs1 = runs[0]
        out2, figs2 = runs[1]
        assert out1 == out2
        for name in json.loads(out1)["figures"]:
            assert (figs1 / name).read_bytes() == (figs2 / name).read_bytes(), name

    def test_geometry_free_descriptor(self, tmp_path, capsys):
        spec = write_json(tmp_path / "spec.json", CELLS_SPEC)
        out_dir = tmp_path / "out"
        assert cli.main(["generate", spec, str(out_dir), "--no-meshes"]) == 0
        capsys.readouterr()
        code, out, _ = run_cli(
            ["analyze", str(out_dir / "descriptor.json")], capsys
        )
        assert code == 0
        report = json.loads(out)
        annotation = next(
            c for c in report["checks"] if c["name"] == "homology/annotation"
        )
        assert annotation["status"] == "skipped"
        assert report["verdict"] == "CERTIFICATE_R0"
