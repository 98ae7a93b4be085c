import pytest
from hypothesis import given, strategies as st

from tagclique.errors import (
    AddressUnresolvable, InvalidGrammar, InvalidTree, LabelMismatch, NotAuxiliary, NotMarked,
    ReplayError,
)
from tagclique.trees import (
    Derivation, ElementaryTree, Grammar, NodeKind, TreeKind, TreeNode, adjoin,
    enumerate_language, example_grammar, foot, foot_split, is_complete, leaf,
    leftmost_marked, marked_addresses, node, node_at, replay, subtree, terminal_count,
    tree_yield,
)


def _initial():
    return ElementaryTree.initial(node("S", leaf("a"), node("S", leaf("b"), marked=True)))


def _wrap():
    return ElementaryTree.auxiliary(node("S", leaf("c"), foot("S"), leaf("d")))


def test_adjoin_splices_auxiliary_around_node():
    derived = adjoin(_initial(), (1,), _wrap())
    assert tree_yield(derived) == ("a", "c", "b", "d")
    assert node_at(derived.root, (1,)).label == "S"
    moved = subtree(derived, (1, 1))
    assert moved.children == (leaf("b"),)
    assert not moved.marked
    assert is_complete(derived)


def test_adjoin_leaves_inputs_untouched():
    tree = _initial()
    adjoin(tree, (1,), _wrap())
    assert node_at(tree.root, (1,)).marked
    assert marked_addresses(tree) == frozenset({(1,)})


def test_adjoin_errors():
    tree = _initial()
    with pytest.raises(NotMarked):
        adjoin(tree, (0,), _wrap())
    with pytest.raises(NotMarked):
        adjoin(tree, (), _wrap())
    with pytest.raises(AddressUnresolvable):
        adjoin(tree, (5,), _wrap())
    with pytest.raises(LabelMismatch):
        adjoin(tree, (1,), ElementaryTree.auxiliary(node("X", foot("X"))))
    with pytest.raises(NotAuxiliary):
        adjoin(tree, (1,), tree)


def test_adjoin_into_auxiliary_tracks_foot():
    host = ElementaryTree.auxiliary(node("S", node("S", foot("S"), marked=True), leaf("a")))
    guest = ElementaryTree.auxiliary(node("S", leaf("b"), foot("S")))
    derived = adjoin(host, (0,), guest)
    assert derived.kind is TreeKind.AUXILIARY
    assert derived.foot_address == (0, 1, 0)
    assert node_at(derived.root, derived.foot_address).kind is NodeKind.FOOT
    assert foot_split(derived) == (("b",), ("a",))


def test_tree_invariants():
    with pytest.raises(InvalidTree):
        TreeNode("S")
    with pytest.raises(InvalidTree):
        TreeNode("a", NodeKind.LEAF, marked=True)
    with pytest.raises(InvalidTree):
        TreeNode("S", NodeKind.FOOT, children=(leaf("a"),))
    with pytest.raises(InvalidTree):
        ElementaryTree.initial(node("S", leaf("a"), marked=True))
    with pytest.raises(InvalidTree):
        ElementaryTree.initial(node("S", foot("S")))
    with pytest.raises(InvalidTree):
        ElementaryTree.auxiliary(node("S", foot("S"), foot("S")))
    with pytest.raises(InvalidTree):
        ElementaryTree.auxiliary(node("S", foot("X")))
    with pytest.raises(InvalidTree):
        ElementaryTree(TreeKind.AUXILIARY, node("S", leaf("a"), foot("S")), (0,))


def test_yield_queries():
    tree = ElementaryTree.auxiliary(
        node("S", leaf("a"), node("X", leaf("b"), foot("S"), marked=True), leaf("c")))
    assert tree_yield(tree) == ("a", "b", "c")
    assert foot_split(tree) == (("a", "b"), ("c",))
    assert terminal_count(tree) == 3
    assert leftmost_marked(tree) == (1,)
    assert not is_complete(tree)


words = st.lists(st.sampled_from(["a", "b", "c"]), max_size=4)


@given(u=words, w=st.lists(st.sampled_from(["a", "b"]), min_size=1, max_size=3), v=words,
       left=words, right=words)
def test_adjoin_yield_is_a_splice(u, w, v, left, right):
    tree = ElementaryTree.initial(node(
        "S", *[leaf(x) for x in u], node("S", *[leaf(x) for x in w], marked=True),
        *[leaf(x) for x in v]))
    aux = ElementaryTree.auxiliary(
        node("S", *[leaf(x) for x in left], foot("S"), *[leaf(x) for x in right]))
    derived = adjoin(tree, (len(u),), aux)
    assert tree_yield(derived) == tuple(u + left + w + right + v)


def _example_steps():
    return (((1,), "beta"), ((1, 0), "stop_B"), ((1, 1), "stop_A"), ((1, 2), "stop_A"))


def test_replay_matches_fold():
    grammar = example_grammar(with_terminators=True)
    derivation = Derivation("alpha", _example_steps())
    folded = grammar.initial_trees["alpha"]
    for at, aux_id in derivation.steps:
        folded = adjoin(folded, at, grammar.auxiliary_trees[aux_id])
    replayed = replay(grammar, derivation)
    assert replayed == folded
    assert tree_yield(replayed) == tuple("aabbcc")
    assert is_complete(replayed)
    assert len(derivation) == 4


def test_replay_reports_failing_step():
    grammar = example_grammar(with_terminators=True)
    with pytest.raises(ReplayError) as info:
        replay(grammar, Derivation("alpha", (((1,), "beta"), ((1,), "stop_B"))))
    assert info.value.step_index == 1
    assert isinstance(info.value.cause, NotMarked)
    with pytest.raises(ReplayError) as info:
        replay(grammar, Derivation("alpha", (((1,), "gamma"),)))
    assert info.value.step_index == 0
    assert isinstance(info.value.cause, InvalidGrammar)
    with pytest.raises(InvalidGrammar):
        replay(grammar, Derivation("omega"))


def test_replay_rejects_initial_tree_steps():
    grammar = example_grammar(with_terminators=True)
    with pytest.raises(ReplayError) as info:
        replay(grammar, Derivation("alpha", (((1,), "beta"), ((1, 0), "alpha"))))
    assert info.value.step_index == 1
    assert isinstance(info.value.cause, NotAuxiliary)


def test_example_language():
    language = enumerate_language(example_grammar(with_terminators=True), 9, 9)
    assert ("a", "b", "c") in language
    assert tuple("aabbcc") in language
    assert ("a", "b", "b", "c") not in language
    assert all(len(s) % 3 == 0 and len(s) >= 3 for s in language)


def test_example_needs_terminators():
    assert enumerate_language(example_grammar(), 12, 12) == frozenset()


def test_grammar_validation():
    initial = {"i": _initial()}
    auxiliary = {"w": _wrap()}
    grammar = Grammar.from_trees(initial, auxiliary)
    assert grammar.terminals == frozenset("abcd")
    assert grammar.non_terminals == frozenset({"S"})
    assert len(grammar) == 2
    assert [i for i, _ in grammar.auxiliary_by_label()["S"]] == ["w"]
    with pytest.raises(InvalidGrammar):
        Grammar(initial, {"i": _wrap()}, frozenset("abcd"), frozenset({"S"}))
    with pytest.raises(InvalidGrammar):
        Grammar(initial, auxiliary, frozenset("abcdS"), frozenset({"S"}))
    with pytest.raises(InvalidGrammar):
        Grammar(initial, auxiliary, frozenset("abc"), frozenset({"S"}))
    with pytest.raises(InvalidGrammar):
        Grammar(auxiliary, {}, frozenset("cd"), frozenset({"S"}))
    with pytest.raises(InvalidGrammar):
        grammar.tree("missing")


def _check_monotone(grammar):
    table = {(length, steps): enumerate_language(grammar, length, steps)
             for length in range(2, 7) for steps in range(1, 7)}
    for (length, steps), language in table.items():
        if length < 6:
            assert language <= table[length + 1, steps]
        if steps < 6:
            assert language <= table[length, steps + 1]
        assert all(len(s) <= length for s in language)


def test_enumeration_is_monotone_in_both_budgets(random_grammars, terminated_grammars):
    for grammar in random_grammars[:30] + terminated_grammars[:30]:
        _check_monotone(grammar)
