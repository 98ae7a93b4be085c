import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tagclique.encoding import (
    ALPHABET, CENTER, HASH, LEFT, RIGHT, SECT, Graph, KClique, Token, clique_list_gadget,
    clique_node_gadget, encoded_length, entry_segments, enumerate_k_cliques, graph_gadget,
    list_gadget, node_gadget,
)
from tagclique.errors import ArityMismatch, FormatError, NotAClique, VertexOutOfRange


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    if not pairs:
        return Graph.empty(n)
    return Graph.from_edges(n, draw(st.lists(st.sampled_from(pairs), unique=True)))


def _contains(haystack, needle):
    size = len(needle)
    return any(haystack[i:i + size] == needle for i in range(len(haystack) - size + 1))


def test_alphabet():
    assert len(ALPHABET) == 19
    assert len(set(ALPHABET)) == 19
    assert Token.E.value == CENTER
    assert [LEFT[i] for i in range(1, 7)] == ["l1", "l2", "l3", "l4", "l5", "l6"]
    assert RIGHT[6] == "r6"


def test_graph_basics():
    g = Graph.cycle(5)
    assert g.n == 5
    assert g.edges == ((1, 2), (1, 5), (2, 3), (3, 4), (4, 5))
    assert g.neighbors(1) == (2, 5)
    assert g.degree(3) == 2
    assert g.has_edge(5, 1)
    assert not g.has_edge(1, 3)
    assert g.without_edge(1, 2).edges == ((1, 5), (2, 3), (3, 4), (4, 5))
    assert g.with_clique([1, 2, 3]).is_clique([1, 2, 3])
    assert not g.is_clique([1, 1])
    assert not g.is_clique([1, 9])
    assert Graph.complete(4) == Graph.from_edges(4, itertools.combinations(range(1, 5), 2))
    assert hash(Graph.path(3)) == hash(Graph.from_edges(3, [(2, 3), (1, 2), (2, 1)]))
    assert not g.adjacency.flags.writeable


def test_graph_errors():
    with pytest.raises(VertexOutOfRange):
        Graph.from_edges(3, [(1, 4)])
    with pytest.raises(VertexOutOfRange):
        Graph.from_edges(3, [(0, 1)])
    with pytest.raises(FormatError):
        Graph.from_edges(3, [(2, 2)])
    with pytest.raises(FormatError):
        Graph(2, np.array([[False, True], [False, False]]))
    with pytest.raises(FormatError):
        Graph(3, np.zeros((2, 2), dtype=bool))
    with pytest.raises(ValueError):
        Graph(-1)
    with pytest.raises(ValueError):
        Graph.cycle(2)
    with pytest.raises(VertexOutOfRange):
        Graph.path(3).neighbors(4)


def test_width():
    assert [Graph.empty(n).width for n in (0, 1, 2, 3, 4, 7, 8, 10)] == [1, 1, 2, 2, 3, 3, 4, 4]


def test_k_clique():
    g = Graph.path(4)
    assert KClique.of(g, [3, 2]).vertices == (2, 3)
    assert len(KClique((1, 4))) == 2
    assert list(KClique((1, 4))) == [1, 4]
    with pytest.raises(NotAClique):
        KClique((2, 1))
    with pytest.raises(NotAClique):
        KClique.of(g, [1, 3])


def test_gadget_examples():
    g = Graph.complete(4)
    assert node_gadget(g, 3) == ("$", "0", "1", "1", "$")
    p = Graph.path(3)
    assert list_gadget(p, 2) == tuple("$01$$11$")
    assert list_gadget(p, 1) == tuple("$10$")
    cng = clique_node_gadget(p, (1, 2), 2)
    assert cng == tuple("#$01$#" * 2 + "#$10$#" * 2)
    clg = clique_list_gadget(p, (2, 1), 2)
    assert clg == tuple("#$10$##$01$$11$#" * 2)
    with pytest.raises(ArityMismatch):
        clique_node_gadget(p, (1,), 2)
    with pytest.raises(ArityMismatch):
        clique_list_gadget(p, (1, 2, 3), 2)


def test_entry_segments():
    g = Graph.complete(3)
    node_part, mirrored = entry_segments(g, (1,), 1, 2)
    assert entry_segments(g, (1,), 1, 5) == (mirrored, node_part)
    clg = clique_list_gadget(g, (1,), 1)
    assert mirrored == clg + (SECT,) + clg[::-1]
    assert node_part == clique_node_gadget(g, (1,), 1) + (SECT,) + clg[::-1]
    with pytest.raises(ValueError):
        entry_segments(g, (1,), 1, 7)


def _all_graphs(max_n):
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for chosen in itertools.product([False, True], repeat=len(pairs)):
            yield Graph.from_edges(n, [p for p, keep in zip(pairs, chosen) if keep])


def test_node_gadget_occurs_in_list_gadget_iff_adjacent():
    count = 0
    for g in _all_graphs(4):
        count += 1
        for u in range(1, g.n + 1):
            for v in range(1, g.n + 1):
                assert _contains(list_gadget(g, u), node_gadget(g, v)) == g.has_edge(u, v), \
                    (g.edges, u, v)
    assert count == 75


@given(graphs(), st.integers(1, 3))
def test_k_cliques_in_lexicographic_order(g, k):
    expected = [c for c in itertools.combinations(range(1, g.n + 1), k) if g.is_clique(c)]
    assert [c.vertices for c in enumerate_k_cliques(g, k)] == expected


def test_enumerate_needs_positive_k():
    with pytest.raises(ArityMismatch):
        enumerate_k_cliques(Graph.complete(3), 0)


@given(graphs(max_n=6), st.integers(1, 2))
def test_closed_form_length(g, k):
    assert encoded_length(g, k) == len(graph_gadget(g, k))


@pytest.mark.parametrize("n,k,length", [
    (4, 1, 1537), (5, 1, 2371), (6, 1, 3385), (7, 1, 4579), (8, 1, 7009), (9, 1, 8857),
    (10, 1, 10921), (4, 2, 8569), (10, 2, 191701),
])
def test_complete_graph_lengths(n, k, length):
    assert encoded_length(Graph.complete(n), k) == length


def test_short_encodings():
    assert graph_gadget(Graph.empty(5), 2) == (CENTER,)
    assert graph_gadget(Graph(0), 1) == (CENTER,)
    assert len(graph_gadget(Graph.complete(4), 1)) == 1537


def test_graph_gadget_layout():
    g = Graph.cycle(5)
    tokens = graph_gadget(g, 1)
    assert tokens == graph_gadget(Graph.cycle(5), 1)
    assert tokens.count(CENTER) == 1
    for block in range(1, 7):
        assert tokens.count(LEFT[block]) == 5
        assert tokens.count(RIGHT[block]) == 5
    assert tokens.index(LEFT[3]) < tokens.index(CENTER) < tokens.index(LEFT[4])
    assert tokens.count(HASH) == 6 * 5 * 2 * 4
