import itertools

import pytest

from tagclique.errors import UnknownTerminal
from tagclique.recognizer import ChartRecognizer, chart_stats, recognize
from tagclique.trees import (
    ElementaryTree, Grammar, enumerate_language, example_grammar, foot, leaf, marked_addresses,
    node, terminal_count,
)


def _counting_grammar():
    """a^n b^n e c^n d^n for n >= 0."""
    initial = ElementaryTree.initial(node("S", node("X", leaf("e"), marked=True)))
    grow = ElementaryTree.auxiliary(
        node("X", leaf("a"), node("X", leaf("b"), foot("X"), leaf("c"), marked=True), leaf("d")))
    stop = ElementaryTree.auxiliary(node("X", foot("X")))
    return Grammar.from_trees({"start": initial}, {"grow": grow, "stop": stop})


def test_example_strings():
    grammar = example_grammar(with_terminators=True)
    assert recognize(grammar, "a b c".split())
    assert recognize(grammar, "a a b b c c".split())
    assert not recognize(grammar, "a b b c".split())
    assert not recognize(grammar, [])


def test_example_without_terminators_is_empty():
    grammar = example_grammar()
    recognizer = ChartRecognizer(grammar)
    for n in range(1, 7):
        for s in itertools.product("abc", repeat=n):
            assert not recognizer.recognize(s)


def test_counting_language():
    recognizer = ChartRecognizer(_counting_grammar())
    for n in range(4):
        assert recognizer.recognize(("a",) * n + ("b",) * n + ("e",) + ("c",) * n + ("d",) * n)
    assert not recognizer.recognize(tuple("abecdd"))
    assert not recognizer.recognize(tuple("aabbecd"))
    assert not recognizer.recognize(tuple("baecd"))
    assert not recognizer.recognize(())


def test_unknown_terminal():
    with pytest.raises(UnknownTerminal):
        recognize(example_grammar(with_terminators=True), ["a", "d"])


def test_chart_stats():
    stats = chart_stats(example_grammar(with_terminators=True), "a b c".split())
    assert stats.accepted
    assert stats.items > 0
    assert stats.deductions > 0
    assert chart_stats(example_grammar(), []).accepted is False


def test_foot_gaps_wait_for_a_matching_node():
    initial = {"i": ElementaryTree.initial(node("S", leaf("b")))}
    unused = {"x": ElementaryTree.auxiliary(node("X", leaf("a"), foot("X")))}
    bare = chart_stats(Grammar.from_trees(initial, {}, frozenset("a")), ("a", "a", "a"))
    grown = chart_stats(Grammar.from_trees(initial, unused), ("a", "a", "a"))
    # Only the dotted items of the X tree before its foot: four empty, three after an a.
    assert bare.items == 4
    assert grown.items == bare.items + 7
    assert not grown.accepted


def _strings(max_len):
    for n in range(max_len + 1):
        yield from itertools.product("ab", repeat=n)


def _check_against_enumeration(grammar, max_len, max_adjunctions):
    language = enumerate_language(grammar, max_len, max_adjunctions)
    recognizer = ChartRecognizer(grammar)
    for s in _strings(max_len):
        assert recognizer.recognize(s) == (s in language), (grammar, s)


def test_agrees_with_enumeration(random_grammars):
    # Every auxiliary tree writes a terminal, so eight adjunctions reach all strings up to 8.
    for grammar in random_grammars:
        _check_against_enumeration(grammar, 8, 8)


def _terminated_budget(grammar, max_len):
    """Adjunctions needed for yields up to ``max_len`` when one tree writes nothing.

    At most ``max_len`` steps write terminals. Every other step consumes a
    mark and adds none, and marks come only from the initial tree and the
    writing steps.
    """
    def marks(trees):
        return max((len(marked_addresses(t)) for t in trees), default=0)
    writing = [t for t in grammar.auxiliary_trees.values() if terminal_count(t)]
    return max_len + marks(grammar.initial_trees.values()) + max_len * marks(writing)


def test_agrees_with_enumeration_under_terminators(terminated_grammars):
    for grammar in terminated_grammars:
        _check_against_enumeration(grammar, 6, _terminated_budget(grammar, 6))


def test_terminated_corpus_needs_the_foot_only_tree(terminated_grammars):
    changed = 0
    for grammar in terminated_grammars:
        budget = _terminated_budget(grammar, 6)
        writing = {i: t for i, t in grammar.auxiliary_trees.items() if i != "stop"}
        without = Grammar.from_trees(grammar.initial_trees, writing, grammar.terminals)
        full = enumerate_language(grammar, 6, budget)
        assert enumerate_language(without, 6, budget) <= full
        changed += enumerate_language(without, 6, budget) != full
    assert changed > 0
