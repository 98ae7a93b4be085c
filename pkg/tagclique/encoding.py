"""
Graph encoding: node, list and clique gadgets and the six-block graph gadget.

Vertices are 1..n and are written as fixed-width binary, most significant bit
first, with width max(1, ceil(log2(n + 1))). Neighbours and cliques are taken
in ascending and lexicographic order so encodings are byte-reproducible.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from tagclique.errors import ArityMismatch, FormatError, NotAClique, VertexOutOfRange
from tagclique.trees import Terminal, TokenString

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class Token(Enum):
    """The 19 terminals of reduction strings and their file spellings."""
    ZERO = "0"
    ONE = "1"
    DOLLAR = "$"
    HASH = "#"
    PIPE = "|"
    SECT = "S"
    E = "e"
    L1 = "l1"
    L2 = "l2"
    L3 = "l3"
    L4 = "l4"
    L5 = "l5"
    L6 = "l6"
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"
    R4 = "r4"
    R5 = "r5"
    R6 = "r6"


ALPHABET: Tuple[Terminal, ...] = tuple(t.value for t in Token)
ZERO, ONE, DOLLAR, HASH, PIPE, SECT, CENTER = (
    Token.ZERO.value, Token.ONE.value, Token.DOLLAR.value, Token.HASH.value,
    Token.PIPE.value, Token.SECT.value, Token.E.value)
LEFT = {i: Token[f"L{i}"].value for i in range(1, 7)}
RIGHT = {i: Token[f"R{i}"].value for i in range(1, 7)}


class Graph:
    """A simple undirected graph on vertices 1..n.

    The adjacency matrix is a read-only boolean numpy array indexed from 0.
    """

    __slots__ = ("_n", "_adj")

    def __init__(self, n: int, adjacency: Optional[np.ndarray] = None):
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        if adjacency is None:
            adjacency = np.zeros((n, n), dtype=bool)
        adj = np.array(adjacency, dtype=bool)
        if adj.shape != (n, n):
            raise FormatError(f"adjacency shape {adj.shape} does not match n={n}")
        if adj.diagonal().any():
            raise FormatError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise FormatError("adjacency must be symmetric")
        adj.setflags(write=False)
        self._n = n
        self._adj = adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """Build from 1-indexed edges; duplicates are ignored.

        Raises:
            VertexOutOfRange: an endpoint is outside 1..n.
            FormatError: an edge is a self-loop.
        """
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            for x in (u, v):
                if not 1 <= x <= n:
                    raise VertexOutOfRange(f"vertex {x} not in 1..{n}")
            if u == v:
                raise FormatError(f"self-loop at vertex {u}")
            adj[u - 1, v - 1] = adj[v - 1, u - 1] = True
        return cls(n, adj)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, ~np.eye(n, dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n)

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise ValueError(f"a cycle needs at least 3 vertices, got {n}")
        return cls.from_edges(n, [(v, v % n + 1) for v in range(1, n + 1)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(v, v + 1) for v in range(1, n)])

    @property
    def n(self) -> int:
        return self._n

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def width(self) -> int:
        """Bits per vertex code."""
        return max(1, self._n.bit_length())

    @property
    def edges(self) -> Tuple[Edge, ...]:
        rows, cols = np.nonzero(np.triu(self._adj))
        return tuple((int(u) + 1, int(v) + 1) for u, v in zip(rows, cols))

    def _check(self, v: int) -> None:
        if not 1 <= v <= self._n:
            raise VertexOutOfRange(f"vertex {v} not in 1..{self._n}")

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return bool(self._adj[u - 1, v - 1])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        self._check(v)
        return tuple(int(u) + 1 for u in np.flatnonzero(self._adj[v - 1]))

    def degree(self, v: int) -> int:
        self._check(v)
        return int(self._adj[v - 1].sum())

    def is_clique(self, vertices: Iterable[int]) -> bool:
        """True if the vertices are distinct, in range and pairwise adjacent."""
        chosen = list(vertices)
        if len(set(chosen)) != len(chosen):
            return False
        if any(not 1 <= v <= self._n for v in chosen):
            return False
        index = np.array(chosen, dtype=int) - 1
        block = self._adj[np.ix_(index, index)]
        return bool(block.sum() == len(chosen) * (len(chosen) - 1))

    def without_edge(self, u: int, v: int) -> "Graph":
        self._check(u)
        self._check(v)
        adj = self._adj.copy()
        adj[u - 1, v - 1] = adj[v - 1, u - 1] = False
        return Graph(self._n, adj)

    def with_clique(self, vertices: Iterable[int]) -> "Graph":
        chosen = sorted(set(vertices))
        for v in chosen:
            self._check(v)
        adj = self._adj.copy()
        index = np.array(chosen, dtype=int) - 1
        adj[np.ix_(index, index)] = True
        adj[index, index] = False
        return Graph(self._n, adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and bool(np.array_equal(self._adj, other._adj))

    def __hash__(self) -> int:
        return hash((self._n, self._adj.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={len(self.edges)})"


@dataclass(frozen=True)
class KClique:
    """A strictly ascending vertex sequence."""
    vertices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if any(a >= b for a, b in zip(self.vertices, self.vertices[1:])):
            raise NotAClique(f"vertices {self.vertices} are not strictly ascending")

    @classmethod
    def of(cls, g: Graph, vertices: Iterable[int]) -> "KClique":
        """Validate ``vertices`` as a clique of ``g``.

        Raises:
            NotAClique: the vertices are not pairwise adjacent.
        """
        chosen = tuple(sorted(vertices))
        if not g.is_clique(chosen):
            raise NotAClique(f"{chosen} is not a clique")
        return cls(chosen)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)


def _vertices(c, k: int) -> Tuple[int, ...]:
    vertices = tuple(sorted(c))
    if len(vertices) != k:
        raise ArityMismatch(f"expected {k} vertices, got {len(vertices)}")
    return vertices


def node_gadget(g: Graph, v: int) -> TokenString:
    """$ v $ with v in fixed-width binary."""
    g._check(v)
    return (DOLLAR,) + tuple(format(v, f"0{g.width}b")) + (DOLLAR,)


def list_gadget(g: Graph, v: int) -> TokenString:
    """Node gadgets of the neighbours of ``v``, ascending."""
    out: List[Terminal] = []
    for u in g.neighbors(v):
        out.extend(node_gadget(g, u))
    return tuple(out)


def clique_node_gadget(g: Graph, c: Sequence[int], k: int) -> TokenString:
    """For each vertex of ``c``, the block # NG(v) # repeated k times."""
    out: List[Terminal] = []
    for v in _vertices(c, k):
        out.extend(((HASH,) + node_gadget(g, v) + (HASH,)) * k)
    return tuple(out)


def clique_list_gadget(g: Graph, c: Sequence[int], k: int) -> TokenString:
    """The blocks # LG(v) # over ``c``, the whole sequence repeated k times."""
    once: List[Terminal] = []
    for v in _vertices(c, k):
        once.append(HASH)
        once.extend(list_gadget(g, v))
        once.append(HASH)
    return tuple(once) * k


def entry_segments(g: Graph, c: Sequence[int], k: int, block: int) -> Tuple[TokenString, TokenString]:
    """The segments left of l_block and right of r_block in ``c``'s entry."""
    cng = clique_node_gadget(g, c, k)
    clg = clique_list_gadget(g, c, k)
    mirrored = clg + (SECT,) + clg[::-1]
    node_part = cng + (SECT,) + clg[::-1]
    if block in (1, 2, 3):
        return node_part, mirrored
    if block in (4, 5, 6):
        return mirrored, node_part
    raise ValueError(f"block must be in 1..6, got {block}")


def enumerate_k_cliques(g: Graph, k: int) -> List[KClique]:
    """All k-cliques in lexicographic order."""
    if k < 1:
        raise ArityMismatch(f"k must be positive, got {k}")
    neighbours = [set(g.neighbors(v)) for v in range(1, g.n + 1)]
    found: List[KClique] = []
    stack: List[Tuple[Tuple[int, ...], List[int]]] = [((), list(range(1, g.n + 1)))]
    while stack:
        prefix, candidates = stack.pop()
        if len(prefix) == k:
            found.append(KClique(prefix))
            continue
        for v in reversed(candidates):
            later = [u for u in candidates if u > v and u in neighbours[v - 1]]
            if len(prefix) + 1 + len(later) >= k:
                stack.append((prefix + (v,), later))
    return found


def graph_gadget(g: Graph, k: int) -> TokenString:
    """The six-block encoding with the single center token between blocks 3 and 4."""
    cliques = enumerate_k_cliques(g, k)
    segments = [(entry_segments(g, c, k, 1)) for c in cliques]
    out: List[Terminal] = []
    for block in range(1, 7):
        if block == 4:
            out.append(CENTER)
        for node_part, mirrored in segments:
            left, right = (node_part, mirrored) if block <= 3 else (mirrored, node_part)
            out.append(PIPE)
            out.extend(left)
            out.append(LEFT[block])
            out.append(RIGHT[block])
            out.extend(right)
            out.append(PIPE)
    logger.debug("encoded n=%d k=%d: %d cliques, %d tokens", g.n, k, len(cliques), len(out))
    return tuple(out)


def encoded_length(g: Graph, k: int) -> int:
    """Length of :func:`graph_gadget` without building it."""
    width = g.width
    degrees = g.adjacency.sum(axis=1)
    total = 0
    for c in enumerate_k_cliques(g, k):
        cng = k * k * (width + 4)
        clg = k * sum(2 + int(degrees[v - 1]) * (width + 2) for v in c)
        total += cng + 3 * clg + 6
    return 6 * total + 1
