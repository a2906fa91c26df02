from __future__ import annotations

import json
from pathlib import Path

import pytest

from skewflow.cli import main
from skewflow.formats import (
    FormatError,
    format_edge,
    format_mbp,
    format_solution,
    format_ssf,
    parse_solution,
    parse_text,
)
from skewflow.generators import generate
from skewflow.solvers import max_isflow_sbfm
from skewflow.ssgraph import SkewSymmetricNetwork

FIVE_NODE = "p edge 5 5\ne 1 2\ne 2 3\ne 2 4\ne 3 4\ne 4 5\n"


def _write(tmp_path: Path, name: str, text: str) -> str:
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_ssf_roundtrip():
    net = generate("random-ssf", seed=3)
    assert parse_text(format_ssf(net)) == net


def test_edge_and_mbp_roundtrip():
    inst = generate("random-graph", seed=4)
    assert parse_text(format_edge(inst)) == inst
    mbp = generate("random-mbp", seed=4)
    assert parse_text(format_mbp(mbp)) == mbp


def test_parse_errors_name_the_line():
    with pytest.raises(FormatError, match="line 3: arc endpoint"):
        parse_text("p ssf 4 2\na 1 3 1\na 9 2 1\n")
    with pytest.raises(FormatError, match="line 1: arc count must be even"):
        parse_text("p ssf 4 1\na 1 3 1\n")
    with pytest.raises(FormatError, match="line 2: a source must be listed together with its mate"):
        parse_text("p mbp 3 1 1\nz 1\nt 3\na 1 3\n")
    with pytest.raises(FormatError, match="expected"):
        parse_text("p edge 3 1\ne 1\n")
    with pytest.raises(ValueError):
        parse_text("p nonsense 1 1\n")


def test_solution_roundtrip():
    net = SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 1, 1)])
    rep = max_isflow_sbfm(net)
    sol = parse_solution(format_solution(rep.flow, rep.certificate, ["note"]), net.arc_count)
    assert sol.value == rep.value
    assert sol.flow() == rep.flow
    assert sol.barrier == rep.certificate


def test_gen_is_deterministic(capsys):
    args = ["gen", "random-graph", "--seed", "7", "--param", "n=12", "--param", "m=20"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert first.count("\ne ") == 20


def test_solve_and_verify_five_node(tmp_path, capsys):
    inst = _write(tmp_path, "five.edge", FIVE_NODE)
    sol = str(tmp_path / "sol.txt")
    assert main(["solve", inst, "-o", sol]) == 0
    text = Path(sol).read_text()
    assert text.startswith("value 4\n")
    assert main(["verify", inst, sol]) == 0
    assert "optimal" in capsys.readouterr().out
    tampered = _write(tmp_path, "bad.txt", text.replace("f 3 1\n", "f 3 2\n"))
    assert main(["verify", inst, tampered]) == 1


def test_match_with_and_without_compression(tmp_path, capsys):
    edges = "".join(f"e {v} {w}\n" for v in range(1, 9) for w in range(v + 1, 9))
    inst = _write(tmp_path, "k8.edge", f"p edge 8 30\n{edges}e 1 2\ne 3 3\n")
    assert main(["match", inst]) == 0
    plain = capsys.readouterr().out
    assert main(["match", inst, "--compress", "--delta", "0.4"]) == 0
    packed = capsys.readouterr().out
    assert "matching 4" in plain and "matching 4" in packed
    assert "c arcs original" in packed


def test_bmatch_infeasible_exit_code(tmp_path, capsys):
    inst = _write(tmp_path, "b.edge", "p edge 2 1\ne 1 2\nu 1 2 2\n")
    assert main(["bmatch", inst]) == 3
    assert "infeasible" in capsys.readouterr().out


def test_bad_input_exit_code(tmp_path, capsys):
    inst = _write(tmp_path, "bad.ssf", "p ssf 4 1\na 1 3 1\n")
    assert main(["solve", inst]) == 2
    assert "line 1" in capsys.readouterr().err


def test_report_is_deterministic_apart_from_timings(tmp_path):
    inst = _write(tmp_path, "five.edge", FIVE_NODE)
    report = tmp_path / "r.jsonl"
    for _ in range(2):
        assert main(["solve", inst, "--report", str(report), "-o", str(tmp_path / "o.txt")]) == 0
    rows = [json.loads(line) for line in report.read_text().splitlines()]
    assert len(rows) == 2
    for row in rows:
        assert row["schema"] == "skewflow.report/1"
        row.pop("timings")
    assert rows[0] == rows[1]


def test_mbp_command(tmp_path, capsys):
    inst = _write(tmp_path, "m.mbp", format_mbp(generate("random-mbp", seed=2)))
    assert main(["mbp", inst, "--oracle"]) == 0
    assert capsys.readouterr().out.startswith("pairs ")


def test_rpath_and_decompose_commands(tmp_path, capsys):
    net = _write(tmp_path, "n.ssf", format_ssf(SkewSymmetricNetwork.from_pairs(4, [(0, 2, 1), (2, 1, 1)])))
    assert main(["rpath", net]) == 0
    assert capsys.readouterr().out.startswith("path ")
    assert main(["decompose", net]) == 0
    assert "path 1" in capsys.readouterr().out


def test_bench_emits_json_lines(capsys):
    assert main(["bench", "--size", "20:40", "--repeat", "2", "--seed", "1"]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines() if line.startswith("{")]
    assert len(rows) >= 2
