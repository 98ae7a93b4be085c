import hypothesis
import numpy as np
import pytest

from tagclique.trees import (
    ElementaryTree, Grammar, NodeKind, foot, iter_nodes, leaf, node, replace_at,
)

hypothesis.settings.register_profile("ci", derandomize=True, max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("ci")

LABELS = ("S", "X")
TERMINALS = ("a", "b")


def _grow(rng, label, budget, depth, may_mark):
    kids = []
    for _ in range(int(rng.integers(1, 3))):
        if budget[0] <= 0:
            break
        budget[0] -= 1
        if depth < 2 and budget[0] >= 1 and rng.random() < 0.35:
            kids.append(_grow(rng, LABELS[int(rng.integers(2))], budget, depth + 1, True))
        else:
            kids.append(leaf(TERMINALS[int(rng.integers(2))]))
    return node(label, *kids, marked=bool(may_mark and rng.random() < 0.4))


def random_tree(rng, label, auxiliary):
    """A random tree of at most 7 nodes; auxiliary trees keep at least one terminal."""
    while True:
        root = _grow(rng, label, [6], 0, False)
        leaves = [a for a, n in iter_nodes(root) if n.kind is NodeKind.LEAF]
        if not auxiliary:
            return ElementaryTree.initial(root)
        if len(leaves) >= 2:
            at = leaves[int(rng.integers(len(leaves)))]
            return ElementaryTree.auxiliary(replace_at(root, at, foot(label)))


def random_grammar(rng, terminators=False):
    """Up to five trees over terminals {a, b} and non-terminals {S, X}.

    With ``terminators`` one of the auxiliary trees is foot-only, so the
    grammar can end an adjunction chain without writing anything.
    """
    n_initial = int(rng.integers(1, 3))
    n_auxiliary = int(rng.integers(1, 6 - n_initial - int(terminators)))
    initial = {f"i{j}": random_tree(rng, LABELS[int(rng.integers(2))], False)
               for j in range(n_initial)}
    auxiliary = {f"x{j}": random_tree(rng, LABELS[int(rng.integers(2))], True)
                 for j in range(n_auxiliary)}
    if terminators:
        label = LABELS[int(rng.integers(2))]
        auxiliary["stop"] = ElementaryTree.auxiliary(node(label, foot(label)))
    return Grammar.from_trees(initial, auxiliary, frozenset(TERMINALS))


@pytest.fixture(scope="session")
def random_grammars():
    """One hundred seeded random grammars."""
    return [random_grammar(np.random.default_rng([2024, i])) for i in range(100)]


@pytest.fixture(scope="session")
def terminated_grammars():
    """One hundred seeded random grammars with a foot-only tree each."""
    return [random_grammar(np.random.default_rng([2025, i]), terminators=True)
            for i in range(100)]
