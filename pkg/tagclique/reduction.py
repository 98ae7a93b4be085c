"""
The clique reduction end to end.

An encoding GG(G) is generated by the reduction grammar exactly when G has a
6k-clique. This module holds the two sides of that claim and the checks tying
them together: brute-force clique oracles, a builder turning a 6k-clique into
a grammar derivation of GG(G), and a recognizer that decides membership of
encoder-shaped strings by factoring them around one entry per block.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from tagclique.encoding import (
    ALPHABET, CENTER, DOLLAR, HASH, LEFT, ONE, PIPE, RIGHT, SECT, ZERO,
    Graph, enumerate_k_cliques, graph_gadget,
)
from tagclique.errors import MalformedEncoding, NotAClique, SplitImpossible
from tagclique.gadgets import (
    SPLIT_ID, START_ID, ReductionGrammar, build_C, build_reduction_grammar,
)
from tagclique.programs import NormalTree, Tuple4, find_execution, tuple_in_program
from tagclique.trees import Address, Derivation, TokenString, is_complete, replay, tree_yield

logger = logging.getLogger(__name__)


def find_clique(g: Graph, m: int) -> Optional[Tuple[int, ...]]:
    """The lexicographically first m-clique of ``g``, or None.

    Depth-first over ascending vertex subsets; each partial clique keeps the
    boolean mask of later vertices adjacent to all of it.
    """
    if m < 1:
        raise ValueError(f"clique size must be positive, got {m}")
    adj = g.adjacency
    stack: List[Tuple[Tuple[int, ...], np.ndarray]] = [((), np.ones(g.n, dtype=bool))]
    while stack:
        chosen, candidates = stack.pop()
        if len(chosen) == m:
            return tuple(v + 1 for v in chosen)
        options = np.flatnonzero(candidates)
        if len(chosen) + len(options) < m:
            continue
        for v in options[::-1]:
            later = candidates & adj[v]
            later[:v + 1] = False
            stack.append((chosen + (int(v),), later))
    return None


def has_clique(g: Graph, m: int) -> bool:
    return find_clique(g, m) is not None


def has_clique_by_extension(g: Graph, m: int) -> bool:
    """Independent oracle growing all j-cliques into (j+1)-cliques."""
    if m < 1:
        raise ValueError(f"clique size must be positive, got {m}")
    neighbours = {v: set(g.neighbors(v)) for v in range(1, g.n + 1)}
    level: Set[FrozenSet[int]] = {frozenset([v]) for v in neighbours}
    for _ in range(m - 1):
        grown: Set[FrozenSet[int]] = set()
        for clique in level:
            common = set.intersection(*(neighbours[v] for v in clique))
            for u in common:
                if u > max(clique):
                    grown.add(clique | {u})
        level = grown
    return bool(level)


@dataclass(frozen=True)
class Entry:
    """One ``| left l_i r_i right |`` entry of an encoding.

    ``start`` and ``end`` index the two pipes and ``marker`` the l_i token.
    """
    start: int
    marker: int
    end: int
    left: TokenString
    right: TokenString


@dataclass(frozen=True)
class EncodingBlocks:
    """An encoding split into its six blocks of entries around the center."""
    tokens: TokenString
    blocks: Tuple[Tuple[Entry, ...], ...]
    center: int

    @property
    def entries_per_block(self) -> int:
        return len(self.blocks[0])

    def entry(self, block: int, index: int) -> Entry:
        return self.blocks[block - 1][index]


_SEGMENT_TOKENS = frozenset({ZERO, ONE, DOLLAR, HASH, SECT})
_MARKER_BLOCK = {label: i for i, label in LEFT.items()}


def _parse_half(tokens: TokenString, start: int, stop: int, allowed: Tuple[int, ...],
                blocks: Dict[int, List[Entry]]) -> None:
    i = start
    last = allowed[0]
    while i < stop:
        if tokens[i] != PIPE:
            raise MalformedEncoding(f"expected '|' at position {i}, found {tokens[i]!r}")
        j = i + 1
        while j < stop and tokens[j] in _SEGMENT_TOKENS:
            j += 1
        if j + 1 >= stop or tokens[j] not in _MARKER_BLOCK:
            raise MalformedEncoding(f"entry starting at {i} has no l_i r_i pair")
        block = _MARKER_BLOCK[tokens[j]]
        if tokens[j + 1] != RIGHT[block]:
            raise MalformedEncoding(f"{tokens[j]!r} at {j} is not followed by {RIGHT[block]!r}")
        if block not in allowed or block < last:
            raise MalformedEncoding(f"entry of block {block} out of order at position {i}")
        last = block
        end = j + 2
        while end < stop and tokens[end] in _SEGMENT_TOKENS:
            end += 1
        if end >= stop or tokens[end] != PIPE:
            raise MalformedEncoding(f"entry starting at {i} is not closed by '|'")
        blocks[block].append(Entry(i, j, end, tokens[i + 1:j], tokens[j + 2:end]))
        i = end + 1


def parse_encoding(s: Sequence[str], k: Optional[int] = None) -> EncodingBlocks:
    """Split an encoder-shaped string into blocks and entries.

    Raises:
        MalformedEncoding: the string is not shaped like a graph encoding.
    """
    tokens = tuple(s)
    unknown = set(tokens) - set(ALPHABET)
    if unknown:
        raise MalformedEncoding(f"tokens outside the alphabet: {sorted(unknown)}")
    centers = [i for i, t in enumerate(tokens) if t == CENTER]
    if len(centers) != 1:
        raise MalformedEncoding(f"expected exactly one {CENTER!r}, found {len(centers)}")
    center = centers[0]
    blocks: Dict[int, List[Entry]] = {b: [] for b in range(1, 7)}
    _parse_half(tokens, 0, center, (1, 2, 3), blocks)
    _parse_half(tokens, center + 1, len(tokens), (4, 5, 6), blocks)
    counts = {len(entries) for entries in blocks.values()}
    if len(counts) != 1:
        raise MalformedEncoding(
            f"blocks have unequal entry counts {[len(blocks[b]) for b in range(1, 7)]}")
    hashes = None if k is None else 4 * k * k
    for b, entries in blocks.items():
        for index, entry in enumerate(entries):
            for segment in (entry.left, entry.right):
                if segment.count(SECT) != 1:
                    raise MalformedEncoding(
                        f"segment of entry {index} in block {b} does not have one {SECT!r}")
                if hashes is not None and segment.count(HASH) != hashes:
                    raise MalformedEncoding(
                        f"segment of entry {index} in block {b} does not have {hashes} '#'")
    return EncodingBlocks(tokens, tuple(tuple(blocks[b]) for b in range(1, 7)), center)


@dataclass(frozen=True)
class Anchors:
    """Entry indices (0-based, one per block) at which an encoding factors."""
    c1: int
    c2: int
    c3: int
    c4: int
    c5: int
    c6: int

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3, self.c4, self.c5, self.c6))


def blue_tuple(blocks: EncodingBlocks, a: int, b: int, c: int, d: int) -> Tuple4:
    return Tuple4(blocks.entry(1, a).left, blocks.entry(3, b).right,
                  blocks.entry(4, c).left, blocks.entry(6, d).right)


def red_tuple(blocks: EncodingBlocks, a: int, b: int, c: int, d: int) -> Tuple4:
    return Tuple4(blocks.entry(1, a).right, blocks.entry(2, b).left,
                  blocks.entry(5, c).right, blocks.entry(6, d).left)


def purple_tuple(blocks: EncodingBlocks, a: int, b: int, c: int, d: int) -> Tuple4:
    return Tuple4(blocks.entry(2, a).right, blocks.entry(3, b).left,
                  blocks.entry(4, c).right, blocks.entry(5, d).left)


class _StyleTable:
    """Memoized C-membership of one entry layout."""

    def __init__(self, blocks: EncodingBlocks, build):
        self.blocks = blocks
        self.build = build
        self.program = build_C()
        self.cache: Dict[Tuple[int, int, int, int], bool] = {}

    def __call__(self, a: int, b: int, c: int, d: int) -> bool:
        key = (a, b, c, d)
        if key not in self.cache:
            self.cache[key] = tuple_in_program(self.program, self.build(self.blocks, a, b, c, d))
        return self.cache[key]


def _join(m: int, blue: _StyleTable, red: _StyleTable,
          purple: _StyleTable) -> Optional[Anchors]:
    for c1 in range(m):
        for c6 in range(m):
            for c3 in range(m):
                for c4 in range(m):
                    if not blue(c1, c3, c4, c6):
                        continue
                    for c2 in range(m):
                        for c5 in range(m):
                            if red(c1, c2, c5, c6) and purple(c2, c3, c4, c5):
                                return Anchors(c1, c2, c3, c4, c5, c6)
    return None


def find_anchors(s: Sequence[str], k: int) -> Optional[Anchors]:
    """The first (c1, ..., c6) at which all three layouts are computed by C.

    Blue pairs entries of blocks 1, 3, 4, 6, red those of 1, 2, 5, 6 and
    purple those of 2, 3, 4, 5. Returns None when no choice works.

    Raises:
        MalformedEncoding: ``s`` is not encoder-shaped.
    """
    blocks = parse_encoding(s, k)
    blue = _StyleTable(blocks, blue_tuple)
    red = _StyleTable(blocks, red_tuple)
    purple = _StyleTable(blocks, purple_tuple)
    found = _join(blocks.entries_per_block, blue, red, purple)
    logger.debug("decomposition over %d entries: %d blue, %d red, %d purple checks, anchors=%s",
                 blocks.entries_per_block, len(blue.cache), len(red.cache), len(purple.cache),
                 found)
    return found


def recognize_decomposition(s: Sequence[str], k: int) -> bool:
    """Decide whether the reduction grammar generates an encoder-shaped ``s``.

    Raises:
        MalformedEncoding: ``s`` is not encoder-shaped.
    """
    return find_anchors(s, k) is not None


_OUTER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 3), (2, 3))
_INNER_PAIRS = ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3))


def style_fast_check(g: Graph, k: int, c_a: int, c_b: int, c_c: int, c_d: int,
                     layout: str = "outer") -> bool:
    """Whether C should compute the layout built from four k-cliques.

    Indices refer to :func:`enumerate_k_cliques`. ``"outer"`` is the layout
    with node gadgets in positions 1 and 4, ``"inner"`` the one with node
    gadgets in positions 2 and 3. The answer is whether every pair of cliques
    compared by the layout forms a 2k-clique.
    """
    if layout == "outer":
        pairs = _OUTER_PAIRS
    elif layout == "inner":
        pairs = _INNER_PAIRS
    else:
        raise ValueError(f"layout must be 'outer' or 'inner', got {layout!r}")
    cliques = enumerate_k_cliques(g, k)
    chosen = [cliques[i].vertices for i in (c_a, c_b, c_c, c_d)]
    return all(g.is_clique(chosen[i] + chosen[j]) for i, j in pairs)


def _stage_execution(reduction: ReductionGrammar, which: str,
                     pieces: Sequence[Tuple4]) -> Tuple[NormalTree, ...]:
    program = reduction.programs[which]
    stages = [program.handles[f"stage{i}"] for i in range(len(pieces) + 1)]
    trees: List[NormalTree] = []
    for i, piece in enumerate(pieces):
        found = find_execution(program.between(stages[i], stages[i + 1]), piece)
        if found is None:
            raise SplitImpossible(f"P{which} cannot generate stage {i}: {piece}")
        trees.extend(found)
    return tuple(trees)


def build_derivation_from_clique(g: Graph, k: int, clique: Sequence[int]) -> Derivation:
    """A derivation of GG(g) from a 6k-clique of ``g``.

    The clique is cut into six ascending k-cliques C1 < ... < C6, and entry
    Cb of block b anchors the factorization. P(1,3,4,6) generates everything
    outside blocks 2 and 5 around the center, the split tree hands over to
    P(2,3,4,5) and P(1,2,5,6), and each program's padding covers the entries
    between the anchors.

    Raises:
        NotAClique: ``clique`` is not a 6k-clique of ``g``.
        SplitImpossible: some program cannot generate its part.
    """
    vertices = tuple(sorted(clique))
    if len(vertices) != 6 * k or not g.is_clique(vertices):
        raise NotAClique(f"{vertices} is not a {6 * k}-clique")
    index = {c.vertices: i for i, c in enumerate(enumerate_k_cliques(g, k))}
    anchors = [index[vertices[b * k:(b + 1) * k]] for b in range(6)]
    tokens = graph_gadget(g, k)
    blocks = parse_encoding(tokens, k)
    entry = {b: blocks.entry(b, anchors[b - 1]) for b in range(1, 7)}
    e = blocks.center
    c1, c2, c3, c4, c5, c6 = anchors
    pipes = Tuple4((PIPE,), (PIPE,), (PIPE,), (PIPE,))
    reduction = build_reduction_grammar()

    outer = _stage_execution(reduction, "1346", [
        Tuple4(tokens[:entry[1].start], tokens[entry[3].end + 1:e],
               tokens[e + 1:entry[4].start], tokens[entry[6].end + 1:]),
        pipes,
        blue_tuple(blocks, c1, c3, c4, c6),
        Tuple4((LEFT[1],), (RIGHT[3],), (LEFT[4],), (RIGHT[6],)),
    ])
    middle = _stage_execution(reduction, "2345", [
        Tuple4((RIGHT[2],), (LEFT[3],), (RIGHT[4],), (LEFT[5],)),
        purple_tuple(blocks, c2, c3, c4, c5),
        pipes,
        Tuple4(tokens[entry[2].end + 1:entry[3].start], (),
               tokens[entry[4].end + 1:entry[5].start], ()),
    ])
    inner = _stage_execution(reduction, "1256", [
        Tuple4((RIGHT[1],), (LEFT[2],), (RIGHT[5],), (LEFT[6],)),
        red_tuple(blocks, c1, c2, c5, c6),
        pipes,
        Tuple4(tokens[entry[1].end + 1:entry[2].start], (),
               tokens[entry[5].end + 1:entry[6].start], ()),
    ])

    steps: List[Tuple[Address, str]] = []

    def chain(at: Address, which: str, trees: Sequence[NormalTree]) -> Address:
        for t in trees:
            steps.append((at, reduction.tree_id(which, t)))
            at = at + t.marked_address
        return at

    split_at = chain((0,), "1346", outer)
    steps.append((split_at, SPLIT_ID))
    chain(split_at + (0, 0), "2345", middle)
    chain(split_at + (0,), "1256", inner)
    logger.debug("derivation for %s: %d steps", vertices, len(steps))
    return Derivation(START_ID, tuple(steps))


@dataclass
class VerificationReport:
    """Verdicts and timings of one end-to-end check.

    ``constructive_result`` is None when the oracle finds no clique, and
    ``witness`` is the union of the anchored cliques when the recognizer
    accepts.
    """
    n: int
    edges: int
    k: int
    oracle_result: bool
    decomp_result: bool
    constructive_result: Optional[bool]
    encoded_length: int
    witness: Optional[Tuple[int, ...]] = None
    witness_valid: Optional[bool] = None
    elapsed: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.oracle_result != self.decomp_result:
            return False
        if self.oracle_result and self.constructive_result is not True:
            return False
        if self.decomp_result and self.witness_valid is not True:
            return False
        return True


def verify_instance(g: Graph, k: int) -> VerificationReport:
    """Run the oracle, the encoder, the recognizer and the derivation replay on ``g``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    elapsed: Dict[str, float] = {}

    started = time.perf_counter()
    clique = find_clique(g, 6 * k)
    elapsed["oracle"] = time.perf_counter() - started

    started = time.perf_counter()
    tokens = graph_gadget(g, k)
    elapsed["encode"] = time.perf_counter() - started

    started = time.perf_counter()
    anchors = find_anchors(tokens, k)
    elapsed["decomp"] = time.perf_counter() - started

    witness = None
    witness_valid = None
    if anchors is not None:
        cliques = enumerate_k_cliques(g, k)
        witness = tuple(sorted(v for c in anchors for v in cliques[c].vertices))
        witness_valid = len(set(witness)) == 6 * k and g.is_clique(witness)

    constructive = None
    if clique is not None:
        started = time.perf_counter()
        derivation = build_derivation_from_clique(g, k, clique)
        derived = replay(build_reduction_grammar().grammar, derivation)
        constructive = is_complete(derived) and tree_yield(derived) == tokens
        elapsed["constructive"] = time.perf_counter() - started

    report = VerificationReport(
        n=g.n, edges=len(g.edges), k=k,
        oracle_result=clique is not None, decomp_result=anchors is not None,
        constructive_result=constructive, encoded_length=len(tokens),
        witness=witness, witness_valid=witness_valid, elapsed=elapsed)
    logger.info("n=%d k=%d oracle=%s decomp=%s constructive=%s passed=%s",
                g.n, k, report.oracle_result, report.decomp_result,
                constructive, report.passed)
    return report
