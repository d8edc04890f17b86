from __future__ import annotations

import json
import os

import pytest

from treehom.cli import main
from treehom.structures import parse_structure

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


def corpus(name):
    return os.path.join(CORPUS, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_accepts_plain_tripleu(capsys):
    code, out, _ = run(capsys, "check", "--mode", "ordinal-tree",
                       corpus("plain-tripleu.cg"))
    assert code == 0 and "ACCEPT" in out


def test_check_rejects_cycle_with_certificate(capsys):
    code, out, _ = run(capsys, "check", "--mode", "ordinal-tree", "--json",
                       corpus("fig1-cycle.cg"))
    assert code == 1
    doc = json.loads(out)
    assert doc["accepted"] is False
    assert set(doc["stalled_component"]) == {"a", "b", "c"}


def test_check_height_mode(capsys):
    code, _, _ = run(capsys, "check", "--mode", "height", "--height", "2",
                     corpus("plain-tripleu.cg"))
    assert code == 0
    code, _, _ = run(capsys, "check", "--mode", "height", "--height", "1",
                     corpus("plain-tripleu.cg"))
    assert code == 1


def test_check_and_oracle_agree_on_corpus(capsys):
    for name in os.listdir(CORPUS):
        if not name.endswith(".cg"):
            continue
        with open(corpus(name)) as f:
            n = parse_structure(f.read()).n
        if n > 20:
            continue
        c1, _, _ = run(capsys, "check", corpus(name))
        c2, _, _ = run(capsys, "oracle-check", corpus(name))
        assert c1 == c2, name


def test_witness_self_verifies(capsys):
    code, out, _ = run(capsys, "witness", "--json", corpus("fig2-53-tripleu.cg"))
    assert code == 0
    doc = json.loads(out)
    assert doc["verified"] is True


def test_witness_reject_exit_code(capsys):
    code, out, _ = run(capsys, "witness", corpus("fig1-incomparable-tripleu.cg"))
    assert code == 1


def test_embed_chain(capsys, tmp_path):
    path = tmp_path / "chain3.cg"
    path.write_text("node a\nnode b\nnode c\n"
                    "lt a b\nlt b c\nlt a c\n")
    code, out, _ = run(capsys, "embed", str(path))
    assert code == 0
    words = [l for l in out.splitlines() if "->" in l]
    assert len(words) == 3


def test_embed_rejects_non_semilinear(capsys):
    code, _, _ = run(capsys, "embed", corpus("fig1-cycle.cg"))
    assert code == 1


def test_gen_tripleu_roundtrip(capsys):
    code, out, _ = run(capsys, "gen", "tripleu", "--n", "5", "--m", "3")
    assert code == 0
    s = parse_structure(out)
    assert s.n == 15


def test_gen_family_json_roundtrip(capsys):
    code, out, _ = run(capsys, "gen", "family", "--kind", "U",
                       "--sizes", "1", "2", "--mult", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["nodes"]) == 12
    code2, out2, _ = run(capsys, "gen", "family", "--kind", "U",
                         "--sizes", "1", "2", "--mult", "1")
    s = parse_structure(out2)
    assert list(s.labels) == doc["nodes"]
    assert sorted(map(list, s.lt_pairs_by_label())) == doc["lt"]


def test_game_solve(capsys):
    code, out, _ = run(capsys, "game", "solve", "--k", "2",
                       corpus("chain1.cg"), corpus("chain2.cg"))
    assert code == 1 and "spoiler" in out
    code, out, _ = run(capsys, "game", "solve", "--k", "2",
                       corpus("chain3.cg"), corpus("chain3.cg"))
    assert code == 0 and "duplicator" in out


def test_game_chains(capsys):
    code, out, _ = run(capsys, "game", "chains", "--k", "2", "--maxlen", "6",
                       "--json")
    assert code == 0
    assert json.loads(out)["lengths"] == [4, 5, 6]


def test_game_selfplay(capsys):
    code, out, _ = run(capsys, "game", "selfplay", "--k", "2", "--rounds", "2",
                       "--sizes", "5", "6", "7", "--mult", "2",
                       "--games", "40", "--seed", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["duplicator_losses"] == 0


def test_oracle_sweep(capsys):
    code, out, _ = run(capsys, "oracle-sweep", "--seed", "3", "--count", "60",
                       "--nodes", "8", "--json")
    assert code == 0
    assert json.loads(out)["mismatches"] == 0


def test_report_writes_csv_and_png(capsys, tmp_path):
    out_dir = str(tmp_path / "rep")
    code, out, _ = run(capsys, "report", "--anchor", "2",
                       "--sizes", "3", "5", "--mult", "1", "--out", out_dir)
    assert code == 0
    assert os.path.exists(os.path.join(out_dir, "separation.csv"))
    assert os.path.exists(os.path.join(out_dir, "separation.png"))
    with open(os.path.join(out_dir, "separation.csv")) as f:
        rows = f.read().splitlines()
    assert rows[0] == "kind,anchor,size,multiplicity,final_node_stage"
    assert len(rows) == 5


def test_usage_errors(capsys):
    code, _, err = run(capsys, "check", "--mode", "height",
                       corpus("chain1.cg"))
    assert code == 2
    code, _, _ = run(capsys, "check", "/nonexistent/file.cg")
    assert code == 2


def test_size_limit_exit_code(capsys, tmp_path):
    path = tmp_path / "big.cg"
    path.write_text("".join(f"node n{i}\n" for i in range(21)))
    code, _, err = run(capsys, "oracle-check", str(path))
    assert code == 3
