"""End-to-end command-line behavior: outputs, exit codes, determinism."""

from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from columntree.cli import run
from columntree.crossings import check_validity
from columntree.io import parse_embedding, parse_instance, serialize_instance
from columntree.model import Variant
from conftest import tree_from


@pytest.fixture()
def instance_path(tmp_path):
    path = tmp_path / "inst.json"
    code = run(
        [
            "generate",
            "random",
            "--n",
            "9",
            "--columns",
            "3",
            "--max-degree",
            "3",
            "--seed",
            "11",
            "--out",
            str(path),
        ]
    )
    assert code == 0
    return path


def wide_instance_path(tmp_path):
    rows = [(i, None if i == 0 else i - 1, 20 - i, i + 1) for i in range(9)]
    t = tree_from(rows, 9)
    path = tmp_path / "wide.json"
    path.write_bytes(serialize_instance(t))
    return path


class TestSolve:
    @pytest.mark.parametrize("variant", ["v1", "v2", "v3"])
    def test_end_to_end(self, variant, instance_path, tmp_path, capsys):
        out = tmp_path / "emb.json"
        code = run(
            ["solve", str(instance_path), "--variant", variant, "--out", str(out)]
        )
        assert code == 0
        line = capsys.readouterr().out.strip()
        assert line.startswith("k_subtree=") and "total=" in line
        tree = parse_instance(instance_path.read_bytes())
        emb = parse_embedding(out.read_bytes(), tree)
        assert check_validity(tree, emb, Variant(variant))[0]
        doc = json.loads(out.read_bytes())
        total = doc["report"]["total"]
        assert line.endswith(f"total={total}")

    def test_solve_matches_oracle_exit_paths(self, instance_path, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert run(["solve", str(instance_path), "--variant", "v2", "--out", str(a)]) == 0
        assert run(["oracle", str(instance_path), "--variant", "v2", "--out", str(b)]) == 0
        capsys.readouterr()
        assert (
            json.loads(a.read_bytes())["report"]["total"]
            == json.loads(b.read_bytes())["report"]["total"]
        )

    def test_deterministic_bytes(self, instance_path, tmp_path, capsys):
        outs = []
        for name in ("one", "two"):
            emb = tmp_path / f"{name}.json"
            svg = tmp_path / f"{name}.svg"
            code = run(
                [
                    "solve",
                    str(instance_path),
                    "--variant",
                    "v2",
                    "--out",
                    str(emb),
                    "--svg",
                    str(svg),
                    "--mark-crossings",
                ]
            )
            assert code == 0
            outs.append((emb.read_bytes(), svg.read_bytes()))
        capsys.readouterr()
        assert outs[0] == outs[1]

    def test_stdin_instance(self, instance_path, monkeypatch, capsys):
        blob = instance_path.read_text()
        monkeypatch.setattr(sys, "stdin", io.StringIO(blob))
        assert run(["solve", "-", "--variant", "v3"]) == 0
        capsys.readouterr()

    def test_compare_line(self, instance_path, capsys, tmp_path):
        out = tmp_path / "cmp.json"
        code = run(
            [
                "solve",
                str(instance_path),
                "--variant",
                "v2",
                "--mode",
                "heuristic",
                "--compare",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[-1].startswith("compare exact_total=")
        assert "gap=" in lines[-1]

    def test_variable_column_order(self, tmp_path, capsys):
        t = tree_from(
            [(0, None, 10, 1), (1, 0, 5, 1), (2, 1, 1, 3), (3, 0, 6, 2), (4, 3, 4, 2)],
            3,
        )
        path = tmp_path / "span.json"
        path.write_bytes(serialize_instance(t))
        emb_out = tmp_path / "var.json"
        code = run(
            [
                "solve",
                str(path),
                "--variant",
                "v2",
                "--column-order",
                "variable",
                "--out",
                str(emb_out),
            ]
        )
        assert code == 0
        capsys.readouterr()
        doc = json.loads(emb_out.read_bytes())
        assert doc["column_order"] != [1, 2, 3]


class TestExitCodes:
    def test_unparseable_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert run(["solve", str(bad), "--variant", "v1"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_invalid_instance(self, tmp_path, capsys):
        bad = tmp_path / "invalid.json"
        bad.write_text(
            json.dumps(
                {
                    "format": "columntree-instance",
                    "version": 1,
                    "column_count": 2,
                    "vertices": [
                        {"id": 0, "parent": None, "height": 1, "column": 1}
                    ],
                }
            )
        )
        assert run(["solve", str(bad), "--variant", "v1"]) == 1
        assert "column-surjective" in capsys.readouterr().err

    def test_missing_file_is_io(self, tmp_path, capsys):
        assert run(["solve", str(tmp_path / "nope.json"), "--variant", "v1"]) == 3
        capsys.readouterr()

    def test_bad_flags(self, instance_path, capsys):
        assert run(["solve", str(instance_path)]) == 1  # --variant required
        assert run(["solve", str(instance_path), "--variant", "v9"]) == 1
        assert run(["frobnicate"]) == 1
        assert run(["solve", str(instance_path), "--variant", "v1", "--jobs", "0"]) == 1
        capsys.readouterr()

    def test_impossible_mode_pairs(self, instance_path, capsys):
        assert (
            run(["solve", str(instance_path), "--variant", "v1", "--mode", "heuristic"])
            == 2
        )
        assert (
            run(["solve", str(instance_path), "--variant", "v3", "--mode", "exact"])
            == 2
        )
        capsys.readouterr()

    def test_compare_needs_heuristic_v2(self, instance_path, capsys):
        assert run(["solve", str(instance_path), "--variant", "v2", "--compare"]) == 1
        capsys.readouterr()

    def test_space_limit_guard(self, instance_path, capsys):
        code = run(
            [
                "oracle",
                str(instance_path),
                "--variant",
                "v2",
                "--space-limit",
                "0",
            ]
        )
        assert code == 2
        capsys.readouterr()

    def test_too_many_columns_variable(self, tmp_path, capsys):
        path = wide_instance_path(tmp_path)
        code = run(
            ["solve", str(path), "--variant", "v2", "--column-order", "variable"]
        )
        assert code == 2
        capsys.readouterr()

    def test_generator_guards(self, tmp_path, capsys):
        assert run(["generate", "random", "--n", "5", "--columns", "1"]) == 1
        assert run(["generate", "adversarial", "--x", "2"]) == 1
        capsys.readouterr()


class TestGenerate:
    def test_gadget_from_edge_file(self, tmp_path, capsys):
        edges = tmp_path / "g.txt"
        edges.write_text("1 2\n2 1\n")
        out = tmp_path / "gadget.json"
        code = run(
            ["generate", "gadget", "--flavor", "v2v3", "--edges", str(edges), "--out", str(out)]
        )
        assert code == 0
        capsys.readouterr()
        t = parse_instance(out.read_bytes())
        assert t.n == 43

    def test_flavor_aliases_agree(self, tmp_path, capsys):
        edges = tmp_path / "g.txt"
        edges.write_text("1 2\n2 1\n")
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["generate", "gadget", "--flavor", "v1", "--edges", str(edges), "--out", str(a)]) == 0
        assert run(["generate", "gadget", "--flavor", "v1-unbounded", "--edges", str(edges), "--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_seed_env_override(self, tmp_path, monkeypatch, capsys):
        base = ["generate", "random", "--n", "7", "--columns", "2"]
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        c = tmp_path / "c.json"
        assert run(base + ["--seed", "2", "--out", str(a)]) == 0
        monkeypatch.setenv("COLTREE_SEED", "2")
        assert run(base + ["--seed", "1", "--out", str(b)]) == 0
        monkeypatch.setenv("COLTREE_SEED", "oops")
        assert run(base + ["--seed", "1", "--out", str(c)]) == 1
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_adversarial_to_stdout(self, capsysbinary):
        assert run(["generate", "adversarial", "--x", "4"]) == 0
        blob = capsysbinary.readouterr().out
        t = parse_instance(blob)
        assert t.n == 2 * 4 + 13


class TestBench:
    def test_csv_shape_and_determinism(self, instance_path, tmp_path, capsys):
        outs = []
        for name in ("r1.csv", "r2.csv"):
            out = tmp_path / name
            code = run(
                [
                    "bench",
                    str(instance_path),
                    str(instance_path),
                    "--no-timing",
                    "--out",
                    str(out),
                ]
            )
            assert code == 0
            outs.append(out.read_text())
        capsys.readouterr()
        assert outs[0] == outs[1]
        lines = outs[0].strip().splitlines()
        assert lines[0] == "instance,variant,mode,k_subtree,k_column,k_inter,total,wall_s"
        assert len(lines) == 1 + 2 * 3
        assert all(row.endswith(",") for row in lines[1:])

    def test_single_variant_with_timing(self, instance_path, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert (
            run(["bench", str(instance_path), "--variant", "v2", "--out", str(out)])
            == 0
        )
        capsys.readouterr()
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 2
        assert not lines[1].endswith(",")


def test_module_entrypoint_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "columntree.cli"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert "error:" in proc.stderr
