import os

import pytest

from tagclique import campaign
from tagclique.cli import main
from tagclique.encoding import Graph, graph_gadget
from tagclique.formats import read_tokens, write_grammar, write_graph, write_tokens
from tagclique.reduction import VerificationReport, has_clique
from tagclique.trees import example_grammar


@pytest.fixture
def k6_files(tmp_path):
    g = Graph.complete(6)
    graph_path = str(tmp_path / "k6.graph")
    write_graph(graph_path, g)
    return g, graph_path, str(tmp_path / "k6.tok")


def test_encode(k6_files, capsys):
    g, graph_path, token_path = k6_files
    assert main(["encode", "--graph", graph_path, "--k", "1", "--out", token_path]) == 0
    assert read_tokens(token_path) == graph_gadget(g, 1)
    assert "3385 tokens" in capsys.readouterr().out


def test_grammar_and_stats(tmp_path, capsys):
    path = str(tmp_path / "gamma.json")
    assert main(["grammar", "--out", path]) == 0
    assert main(["stats", "--grammar", path]) == 0
    out = capsys.readouterr().out
    assert "trees=458" in out
    assert "terminals=19" in out
    assert "max_nodes_per_tree=7" in out
    assert "multi_mark_trees=1" in out


def test_oracle(k6_files, capsys):
    _, graph_path, _ = k6_files
    assert main(["oracle", "--graph", graph_path, "--m", "6"]) == 0
    assert capsys.readouterr().out.strip() == "1 2 3 4 5 6"
    assert main(["oracle", "--graph", graph_path, "--m", "7"]) == 1
    assert "no 7-clique" in capsys.readouterr().out


def test_recognize_with_decomposition(k6_files, tmp_path):
    g, graph_path, token_path = k6_files
    grammar_path = str(tmp_path / "gamma.json")
    assert main(["grammar", "--out", grammar_path]) == 0
    assert main(["encode", "--graph", graph_path, "--k", "1", "--out", token_path]) == 0
    base = ["recognize", "--grammar", grammar_path, "--string", token_path, "--algo", "decomp"]
    assert main(base + ["--k", "1"]) == 0
    assert main(base) == 2
    negative = str(tmp_path / "negative.tok")
    write_tokens(negative, graph_gadget(g.without_edge(1, 2), 1))
    assert main(["recognize", "--grammar", grammar_path, "--string", negative,
                 "--algo", "decomp", "--k", "1"]) == 1


def test_recognize_with_chart(tmp_path, capsys):
    grammar_path = str(tmp_path / "example.json")
    write_grammar(grammar_path, example_grammar(with_terminators=True))
    for text, code in (("a b c", 0), ("a a b b c c", 0), ("a b b c", 1), ("a z c", 2)):
        token_path = str(tmp_path / "s.tok")
        write_tokens(token_path, text.split())
        assert main(["recognize", "--grammar", grammar_path, "--string", token_path]) == code
    out = capsys.readouterr().out
    assert "not generated" in out
    assert "Error:" in out
    assert main(["recognize", "--grammar", grammar_path, "--string", token_path,
                 "--algo", "decomp", "--k", "1"]) == 2


def test_malformed_inputs(tmp_path):
    bad_graph = str(tmp_path / "bad.graph")
    with open(bad_graph, "w", encoding="utf-8") as handle:
        handle.write("1 2 3\n")
    assert main(["oracle", "--graph", bad_graph, "--m", "2"]) == 2
    assert main(["oracle", "--graph", str(tmp_path / "missing.graph"), "--m", "2"]) == 2
    bad_grammar = str(tmp_path / "bad.json")
    with open(bad_grammar, "w", encoding="utf-8") as handle:
        handle.write("{")
    assert main(["stats", "--grammar", bad_grammar]) == 2


def _fake_verify(g, k):
    positive = has_clique(g, 6 * k)
    return VerificationReport(
        n=g.n, edges=len(g.edges), k=k, oracle_result=positive, decomp_result=positive,
        constructive_result=True if positive else None, encoded_length=0,
        witness=None, witness_valid=True if positive else None)


def test_verify(monkeypatch, tmp_path, capsys):
    monkeypatch.setattr(campaign, "verify_instance", _fake_verify)
    report = str(tmp_path / "report.txt")
    args = ["verify", "--n", "6", "7", "--k", "1", "--trials", "4", "--seed", "42"]
    assert main(args + ["--report", report]) == 0
    out = capsys.readouterr().out
    assert "seed=42" in out
    assert "disagreements=0" in out
    assert os.path.exists(report)
    assert main(["verify", "--n", "6", "--k", "0", "--trials", "1", "--seed", "1"]) == 2


def test_verify_disagreement(monkeypatch, tmp_path, capsys):
    def broken_verify(g, k):
        report = _fake_verify(g, k)
        report.oracle_result = not report.oracle_result
        return report

    monkeypatch.setattr(campaign, "verify_instance", broken_verify)
    repro = str(tmp_path / "repro")
    assert main(["verify", "--n", "6", "--k", "1", "--trials", "2", "--seed", "5",
                 "--repro-dir", repro]) == 1
    assert "Repro bundle" in capsys.readouterr().out
    assert os.path.exists(os.path.join(repro, "trial-0000.graph"))
