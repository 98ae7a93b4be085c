"""
General chart recognizer for tree-adjoining grammars.

Bottom-up deduction over three item families, each spanning string positions
i..j with at most one foot gap (f1, f2):

    D(node, dot, i, j, gap)   children[:dot] of an inner node are recognized
    B(node, i, j, gap)        the node's children are fully recognized
    T(node, i, j, gap)        the node is complete, adjunction included

An unmarked node is complete as soon as its children are. A marked node is
never completed bare: its B item must be wrapped by a complete root item of
an auxiliary tree with the same label whose gap equals the node's span. A
string is accepted when an initial root is complete over (0, N) without gap.

Items number O(|G| N^4) and the work is O(|G| N^6).
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from tagclique.errors import UnknownTerminal
from tagclique.trees import Grammar, NodeKind, TreeNode, Terminal

logger = logging.getLogger(__name__)

Gap = Optional[Tuple[int, int]]

_CLASH = object()


def _merge(first: Gap, second: Gap):
    if first is None:
        return second
    if second is None:
        return first
    return _CLASH


@dataclass(frozen=True)
class ChartStats:
    """Size of a finished chart."""
    items: int
    deductions: int
    accepted: bool


class ChartRecognizer:
    """Compiles a grammar once and recognizes strings against it.

    Nodes of all trees are flattened into parallel lists indexed by node id.
    """

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.labels: List[str] = []
        self.kinds: List[NodeKind] = []
        self.marked: List[bool] = []
        self.children: List[Tuple[int, ...]] = []
        self.parent: List[int] = []
        self.child_index: List[int] = []
        self.initial_roots: Set[int] = set()
        self.aux_roots: Set[int] = set()
        for tree_id in sorted(grammar.initial_trees):
            self.initial_roots.add(self._flatten(grammar.initial_trees[tree_id].root))
        for tree_id in sorted(grammar.auxiliary_trees):
            self.aux_roots.add(self._flatten(grammar.auxiliary_trees[tree_id].root))
        self.inner = [n for n, kind in enumerate(self.kinds) if kind is NodeKind.INTERNAL]

    def _flatten(self, root: TreeNode) -> int:
        root_id = len(self.labels)
        stack: List[Tuple[TreeNode, int, int]] = [(root, -1, 0)]
        while stack:
            current, parent, index = stack.pop()
            node_id = len(self.labels)
            self.labels.append(current.label)
            self.kinds.append(current.kind)
            self.marked.append(current.marked)
            self.children.append(())
            self.parent.append(parent)
            self.child_index.append(index)
            if parent >= 0:
                # Preorder pops siblings left to right.
                self.children[parent] += (node_id,)
            for child_index in range(len(current.children) - 1, -1, -1):
                stack.append((current.children[child_index], node_id, child_index))
        return root_id

    def run(self, s: Sequence[Terminal]) -> ChartStats:
        """Close the chart for ``s`` and report its size.

        Raises:
            UnknownTerminal: if ``s`` uses a symbol outside the grammar.
        """
        tokens = tuple(s)
        unknown = set(tokens) - self.grammar.terminals
        if unknown:
            raise UnknownTerminal(f"symbols not in the grammar: {sorted(unknown)}")
        n = len(tokens)

        items: Set[tuple] = set()
        agenda: List[tuple] = []
        waiting: Dict[Tuple[int, int], List[Tuple[int, Gap]]] = defaultdict(list)
        tops: Dict[Tuple[int, int], List[Tuple[int, Gap]]] = defaultdict(list)
        aux_tops: Dict[Tuple[str, int, int], List[Tuple[int, int]]] = defaultdict(list)
        bottoms: Dict[Tuple[str, int, int], List[Tuple[int, Gap]]] = defaultdict(list)
        # Foot gaps open only over spans some marked node of the same label covers.
        feet: Dict[Tuple[str, int], List[Tuple[int, int, int]]] = defaultdict(list)
        ends: Dict[Tuple[str, int], Set[int]] = defaultdict(set)
        deductions = 0
        accepted = False

        def add(item: tuple) -> None:
            if item not in items:
                items.add(item)
                agenda.append(item)

        def advance(node_id: int, dot: int, i: int, j: int, gap) -> None:
            nonlocal deductions
            if gap is _CLASH:
                return
            deductions += 1
            if dot + 1 == len(self.children[node_id]):
                add(("B", node_id, i, j, gap))
            else:
                add(("D", node_id, dot + 1, i, j, gap))

        for node_id in self.inner:
            for i in range(n + 1):
                add(("D", node_id, 0, i, i, None))

        while agenda:
            item = agenda.pop()
            family = item[0]
            if family == "D":
                _, node_id, dot, i, j, gap = item
                child = self.children[node_id][dot]
                kind = self.kinds[child]
                if kind is NodeKind.LEAF:
                    if j < n and tokens[j] == self.labels[child]:
                        advance(node_id, dot, i, j + 1, gap)
                elif kind is NodeKind.FOOT:
                    if gap is None:
                        foot_label = self.labels[child]
                        feet[(foot_label, j)].append((node_id, dot, i))
                        for k in sorted(ends[(foot_label, j)]):
                            advance(node_id, dot, i, k, (j, k))
                else:
                    waiting[(child, j)].append((i, gap))
                    for k, child_gap in tops[(child, j)]:
                        advance(node_id, dot, i, k, _merge(gap, child_gap))
            elif family == "B":
                _, node_id, i, j, gap = item
                if not self.marked[node_id]:
                    deductions += 1
                    add(("T", node_id, i, j, gap))
                    continue
                label = self.labels[node_id]
                bottoms[(label, i, j)].append((node_id, gap))
                if j not in ends[(label, i)]:
                    ends[(label, i)].add(j)
                    for waiting_id, waiting_dot, start in feet[(label, i)]:
                        advance(waiting_id, waiting_dot, start, j, (i, j))
                for outer_i, outer_j in aux_tops[(label, i, j)]:
                    deductions += 1
                    add(("T", node_id, outer_i, outer_j, gap))
            else:
                _, node_id, i, j, gap = item
                if node_id in self.aux_roots:
                    label = self.labels[node_id]
                    f1, f2 = gap
                    aux_tops[(label, f1, f2)].append((i, j))
                    for marked_id, inner_gap in bottoms[(label, f1, f2)]:
                        deductions += 1
                        add(("T", marked_id, i, j, inner_gap))
                elif node_id in self.initial_roots:
                    if i == 0 and j == n and gap is None:
                        accepted = True
                else:
                    tops[(node_id, i)].append((j, gap))
                    parent = self.parent[node_id]
                    dot = self.child_index[node_id]
                    for start, parent_gap in waiting[(node_id, i)]:
                        advance(parent, dot, start, j, _merge(parent_gap, gap))

        logger.debug("chart for %d tokens: %d items, %d deductions, accepted=%s",
                     n, len(items), deductions, accepted)
        return ChartStats(items=len(items), deductions=deductions, accepted=accepted)

    def recognize(self, s: Sequence[Terminal]) -> bool:
        return self.run(s).accepted


def recognize(grammar: Grammar, s: Sequence[Terminal]) -> bool:
    """Decide whether ``grammar`` generates ``s`` under obligatory adjunction.

    Raises:
        UnknownTerminal: if ``s`` uses a symbol outside the grammar.
    """
    return ChartRecognizer(grammar).recognize(s)


def chart_stats(grammar: Grammar, s: Sequence[Terminal]) -> ChartStats:
    """Run the recognizer and report the chart size."""
    return ChartRecognizer(grammar).run(s)
