"""
The clique-detecting programs and the constant-size reduction grammar.

NC tests one vertex code against three neighbour lists. CC runs NC any number
of times, which checks one k-clique against three others block by block. C
joins two CC runs around a section token, and each P program wraps C between
entry delimiters and arbitrary padding over the whole alphabet. The grammar
starts P(1,3,4,6) around the center token and splits its output into the two
nested programs P(1,2,5,6) and P(2,3,4,5).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Mapping, Tuple, Union

from tagclique.encoding import (
    ALPHABET, CENTER, DOLLAR, HASH, LEFT, ONE, PIPE, RIGHT, SECT, ZERO,
)
from tagclique.programs import (
    Program, combine, make_A, make_Eq, make_W, validate_normal,
)
from tagclique.trees import (
    ElementaryTree, Grammar, NodeKind, NonTerminal, TreeNode, foot, iter_nodes, leaf, node,
)

logger = logging.getLogger(__name__)

START = "START"
START_ID = "start"
SPLIT_ID = "split"

P_LAYOUTS = ("1346", "1256", "2345")
_DELIMITERS = {
    "1346": (LEFT[1], RIGHT[3], LEFT[4], RIGHT[6]),
    "1256": (RIGHT[1], LEFT[2], RIGHT[5], LEFT[6]),
    "2345": (RIGHT[2], LEFT[3], RIGHT[4], LEFT[5]),
}
_SUBROUTINE_HANDLES = ("C_In", "C_Out", "CC_In", "CC_Out", "NC_In", "NC_Out")


def _sequence(parts: List[Program]) -> Tuple[Program, List[NonTerminal]]:
    """Combine ``parts`` left to right.

    Also returns the stage boundaries: the input followed by the output of
    each part in turn.
    """
    program = parts[0]
    stages = [program.in_label, program.out_label]
    for part in parts[1:]:
        program = combine(program, part)
        stages.append(program.out_label)
    return program, stages


@lru_cache(maxsize=None)
def build_NC() -> Program:
    """W(#) A({0,1,$}) W($) Eq({0,1}) W($) A({0,1,$}) W(#)."""
    vertex_symbols = (ZERO, ONE, DOLLAR)
    program, _ = _sequence([
        make_W(HASH), make_A(vertex_symbols), make_W(DOLLAR), make_Eq((ZERO, ONE)),
        make_W(DOLLAR), make_A(vertex_symbols), make_W(HASH),
    ])
    program = program.relabel({program.in_label: "NC_In", program.out_label: "NC_Out"})
    return program.with_handles(NC_In="NC_In", NC_Out="NC_Out")


@lru_cache(maxsize=None)
def build_CC() -> Program:
    """NC called any number of times in sequence, zero included."""
    nc = build_NC()
    loops = (
        node("CC_In", node(nc.out_label, foot("CC_In"), marked=True)),
        node(nc.out_label, node(nc.in_label, foot(nc.out_label), marked=True)),
        node(nc.out_label, node("CC_Out", foot(nc.out_label), marked=True)),
    )
    trees = nc.trees + tuple(validate_normal(ElementaryTree.auxiliary(t)) for t in loops)
    return Program(trees, "CC_In", "CC_Out", {**nc.handles, "CC_In": "CC_In", "CC_Out": "CC_Out"})


@lru_cache(maxsize=None)
def build_C() -> Program:
    """CC W(S) CC: two claws sharing their outer cliques."""
    cc = build_CC()
    program, _ = _sequence([cc, make_W(SECT), cc])
    program = program.relabel({program.in_label: "C_In", program.out_label: "C_Out"})
    return program.with_handles(C_In="C_In", C_Out="C_Out")


@lru_cache(maxsize=None)
def build_P(which: str) -> Program:
    """One of the three delimiter-checking wrappers around C.

    ``"1346"`` is A(T) W(|) C W(l1, r3, l4, r6); ``"1256"`` and ``"2345"`` are
    W(r1, l2, r5, l6) C W(|) A(T) and W(r2, l3, r4, l5) C W(|) A(T). Every
    non-terminal is prefixed with ``P<which>/`` so the three programs share
    nothing; input and output are ``P<which>_In`` and ``P<which>_Out``. The
    handles ``stage0`` to ``stage4`` are the labels between the four parts.

    Raises:
        ValueError: ``which`` is not a known layout.
    """
    if which not in _DELIMITERS:
        raise ValueError(f"unknown P layout {which!r}, expected one of {P_LAYOUTS}")
    pad = make_A(ALPHABET)
    pipes = make_W(PIPE)
    delimiters = make_W(*_DELIMITERS[which])
    if which == "1346":
        parts = [pad, pipes, build_C(), delimiters]
    else:
        parts = [delimiters, build_C(), pipes, pad]
    program, stages = _sequence(parts)
    program = program.with_handles(**{f"stage{i}": label for i, label in enumerate(stages)})
    prefix = f"P{which}/"
    program = program.relabel(lambda label: prefix + label)
    program = program.relabel({program.in_label: f"P{which}_In",
                               program.out_label: f"P{which}_Out"})
    logger.debug("built P%s: %d trees, %d non-terminals",
                 which, len(program), len(program.non_terminals))
    return program


def _unmark(root: TreeNode, label: NonTerminal) -> TreeNode:
    if root.kind is not NodeKind.INTERNAL:
        return root
    kids = tuple(_unmark(c, label) for c in root.children)
    return TreeNode(root.label, root.kind, root.marked and root.label != label, kids)


def unmark_output(program: Program) -> Tuple[ElementaryTree, ...]:
    """The program's trees with every marked output node left unmarked.

    Executions of the result end at the output instead of waiting for a
    further adjunction there.
    """
    return tuple(ElementaryTree(t.tree.kind, _unmark(t.tree.root, program.out_label),
                                t.tree.foot_address)
                 for t in program.trees)


def program_tree_id(which: str, index: int) -> str:
    return f"P{which}.{index:03d}"


@dataclass(frozen=True)
class ReductionGrammar:
    """The reduction grammar with its named labels and program bookkeeping.

    ``handles`` maps names such as ``S``, ``P1346_In`` or ``P1256/C_In`` to
    labels. The unqualified ``C_In``, ``CC_In`` and ``NC_In`` (and outputs)
    name the copies inside P(1,3,4,6). ``program_ids`` lists, per layout, the
    grammar ids of the program's trees in program order.
    """
    grammar: Grammar
    handles: Mapping[str, NonTerminal]
    programs: Mapping[str, Program]
    program_ids: Mapping[str, Tuple[str, ...]]

    def tree_id(self, which: str, tree) -> str:
        """Grammar id of a normal tree of P<which>."""
        return program_tree_id(which, self.programs[which].positions[tree])


@lru_cache(maxsize=None)
def build_reduction_grammar() -> ReductionGrammar:
    """Assemble the grammar that generates an encoding iff the graph has a 6k-clique.

    It does not depend on the graph or on k.
    """
    initial = ElementaryTree.initial(
        node(START, node("P1346_In", leaf(CENTER), marked=True)))
    split = ElementaryTree.auxiliary(
        node("P1346_Out",
             node("P1256_In",
                  node("P2345_In", foot("P1346_Out"), marked=True),
                  marked=True)))
    auxiliary: Dict[str, ElementaryTree] = {SPLIT_ID: split}
    handles: Dict[str, NonTerminal] = {"S": START}
    programs: Dict[str, Program] = {}
    program_ids: Dict[str, Tuple[str, ...]] = {}
    for which in P_LAYOUTS:
        program = build_P(which)
        if which == "1346":
            trees = tuple(t.tree for t in program.trees)
        else:
            trees = unmark_output(program)
        ids = tuple(program_tree_id(which, i) for i in range(len(trees)))
        auxiliary.update(zip(ids, trees))
        programs[which] = program
        program_ids[which] = ids
        handles[f"P{which}_In"] = program.in_label
        handles[f"P{which}_Out"] = program.out_label
        for name, label in program.handles.items():
            handles[f"P{which}/{name}"] = label
            if which == "1346" and name in _SUBROUTINE_HANDLES:
                handles[name] = label
    grammar = Grammar.from_trees({START_ID: initial}, auxiliary, frozenset(ALPHABET))
    logger.info("reduction grammar: %d trees, %d non-terminals",
                len(grammar), len(grammar.non_terminals))
    return ReductionGrammar(grammar, handles, programs, program_ids)


@dataclass(frozen=True)
class GrammarStats:
    trees: int
    non_terminals: int
    terminals: int
    max_nodes_per_tree: int
    multi_mark_trees: int


def grammar_stats(g: Union[Grammar, Program]) -> GrammarStats:
    """Count trees, symbols and the largest tree of a grammar or program."""
    if isinstance(g, Program):
        trees = [t.tree for t in g.trees]
        non_terminals, terminals = len(g.non_terminals), len(g.terminals)
    else:
        trees = [t for _, t in g.trees()]
        non_terminals, terminals = len(g.non_terminals), len(g.terminals)
    sizes = [sum(1 for _ in iter_nodes(t.root)) for t in trees]
    multi = sum(1 for t in trees if sum(1 for _, n in iter_nodes(t.root) if n.marked) > 1)
    return GrammarStats(trees=len(trees), non_terminals=non_terminals, terminals=terminals,
                        max_nodes_per_tree=max(sizes, default=0), multi_mark_trees=multi)
