"""
Programming with trees.

A normal tree is an auxiliary tree with exactly one marked node, lying on the
path from the root to the foot. Its terminals split into four parts: left of
the path above the marked node, left below it, right below it and right above
it. The tree generates that 4-tuple, and adjoining M into N's marked node
generates (n1 m1, m2 n2, n3 m3, m4 n4).

A program is a set of normal trees with an input and an output label. Its
executions are chains of adjunctions from the input to the output, and the
tuples they generate form the set computed by the program.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Callable, Deque, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple,
    Union,
)

from tagclique.errors import (
    EmptyAlphabet,
    InvalidGrammar,
    LabelMismatch,
    MarkCountNotOne,
    MarkOffSpine,
    NotAuxiliary,
)
from tagclique.trees import (
    Address,
    ElementaryTree,
    Grammar,
    NodeKind,
    NonTerminal,
    Terminal,
    TreeNode,
    adjoin,
    foot,
    iter_nodes,
    leaf,
    node,
    tree_labels,
)

logger = logging.getLogger(__name__)

Word = Tuple[Terminal, ...]

# Positions 1 and 3 grow by appending, positions 2 and 4 by prepending.
FORWARD = (True, False, True, False)


@dataclass(frozen=True)
class Tuple4:
    """Four terminal strings (p1, p2, p3, p4)."""
    p1: Word = ()
    p2: Word = ()
    p3: Word = ()
    p4: Word = ()

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @classmethod
    def words(cls, *texts: str) -> "Tuple4":
        """Build from four whitespace-separated token strings."""
        if len(texts) != 4:
            raise ValueError(f"expected 4 parts, got {len(texts)}")
        return cls(*(tuple(t.split()) for t in texts))

    @property
    def parts(self) -> Tuple[Word, Word, Word, Word]:
        return (self.p1, self.p2, self.p3, self.p4)

    @property
    def total_length(self) -> int:
        return len(self.p1) + len(self.p2) + len(self.p3) + len(self.p4)

    def then(self, other: "Tuple4") -> "Tuple4":
        """The tuple after ``other`` is generated below this one."""
        return Tuple4(self.p1 + other.p1, other.p2 + self.p2,
                      self.p3 + other.p3, other.p4 + self.p4)

    def rotate(self, r: int = 1) -> "Tuple4":
        """Cyclic rotation; ``rotate(1)`` of (a, b, c, d) is (b, c, d, a)."""
        parts = self.parts
        r %= 4
        return Tuple4(*(parts[r:] + parts[:r]))

    def __str__(self) -> str:
        return "(" + ", ".join(" ".join(p) or "ε" for p in self.parts) + ")"


EMPTY = Tuple4()


@dataclass(frozen=True)
class NormalTree:
    tree: ElementaryTree
    input_label: NonTerminal
    output_label: NonTerminal
    tuple: Tuple4
    marked_address: Address


def validate_normal(tree: ElementaryTree) -> NormalTree:
    """Check that ``tree`` is normal and compute the tuple it generates.

    Raises:
        NotAuxiliary: ``tree`` has no foot.
        MarkCountNotOne: ``tree`` does not have exactly one marked node.
        MarkOffSpine: the marked node is not an ancestor of the foot.
    """
    if not tree.is_auxiliary:
        raise NotAuxiliary(f"tree rooted at {tree.label!r} has no foot")
    nodes = list(iter_nodes(tree.root))
    marked = [(a, n) for a, n in nodes if n.marked]
    if len(marked) != 1:
        raise MarkCountNotOne(f"tree rooted at {tree.label!r} has {len(marked)} marked nodes")
    mark, marked_node = marked[0]
    spine = tree.foot_address
    if spine[:len(mark)] != mark:
        raise MarkOffSpine(f"marked node at {mark} is off the path to the foot at {spine}")
    parts: Tuple[List[Terminal], ...] = ([], [], [], [])
    for address, current in nodes:
        if current.kind is not NodeKind.LEAF:
            continue
        below = address[:len(mark)] == mark
        if address < spine:
            parts[1 if below else 0].append(current.label)
        else:
            parts[2 if below else 3].append(current.label)
    return NormalTree(tree, tree.label, marked_node.label, Tuple4(*parts), mark)


def chain(n: NormalTree, m: NormalTree) -> NormalTree:
    """Adjoin ``m`` at the marked node of ``n``.

    Raises:
        LabelMismatch: ``m``'s input is not ``n``'s output.
    """
    if m.input_label != n.output_label:
        raise LabelMismatch(
            f"cannot chain input {m.input_label!r} after output {n.output_label!r}")
    return validate_normal(adjoin(n.tree, n.marked_address, m.tree))


def execution_tuple(trees: Sequence[NormalTree]) -> Tuple4:
    """The tuple generated by chaining ``trees`` in order.

    Raises:
        LabelMismatch: consecutive trees do not connect.
    """
    result = EMPTY
    for before, after in zip(trees, trees[1:]):
        if after.input_label != before.output_label:
            raise LabelMismatch(
                f"cannot chain input {after.input_label!r} after output {before.output_label!r}")
    for current in trees:
        result = result.then(current.tuple)
    return result


def _map_labels(root: TreeNode, rename: Callable[[str], str]) -> TreeNode:
    if root.kind is NodeKind.LEAF:
        return root
    kids = tuple(_map_labels(c, rename) for c in root.children)
    return TreeNode(rename(root.label), root.kind, root.marked, kids)


def relabel_tree(tree: ElementaryTree, rename: Callable[[str], str]) -> ElementaryTree:
    """Rename every non-terminal of an (elementary-sized) tree."""
    return ElementaryTree(tree.kind, _map_labels(tree.root, rename), tree.foot_address)


@dataclass(frozen=True)
class Program:
    """A set of normal trees with designated input and output labels.

    ``handles`` names labels of interest inside the program (for example the
    input of an embedded subprogram). They do not take part in comparisons.

    Raises:
        InvalidGrammar: no tree starts at the input, no tree ends at the
            output, or input and output coincide.
    """
    trees: Tuple[NormalTree, ...]
    in_label: NonTerminal
    out_label: NonTerminal
    handles: Mapping[str, NonTerminal] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        object.__setattr__(self, "handles", dict(self.handles))
        if self.in_label == self.out_label:
            raise InvalidGrammar(f"program input and output are both {self.in_label!r}")
        if not any(t.input_label == self.in_label for t in self.trees):
            raise InvalidGrammar(f"no tree has input {self.in_label!r}")
        if not any(t.output_label == self.out_label for t in self.trees):
            raise InvalidGrammar(f"no tree has output {self.out_label!r}")

    def __len__(self) -> int:
        return len(self.trees)

    @cached_property
    def non_terminals(self) -> FrozenSet[NonTerminal]:
        labels: Set[NonTerminal] = set()
        for t in self.trees:
            labels |= tree_labels(t.tree)[1]
        return frozenset(labels)

    @cached_property
    def terminals(self) -> FrozenSet[Terminal]:
        symbols: Set[Terminal] = set()
        for t in self.trees:
            symbols |= tree_labels(t.tree)[0]
        return frozenset(symbols)

    @cached_property
    def positions(self) -> Dict[NormalTree, int]:
        return {t: i for i, t in enumerate(self.trees)}

    @cached_property
    def by_input(self) -> Dict[NonTerminal, Tuple[NormalTree, ...]]:
        grouped: Dict[NonTerminal, List[NormalTree]] = {}
        for t in self.trees:
            grouped.setdefault(t.input_label, []).append(t)
        return {label: tuple(ts) for label, ts in grouped.items()}

    @cached_property
    def _transitions(self):
        """Split trees into per-coordinate self-loops and ordinary moves.

        A self-loop writing into a single position acts on one coordinate of
        the membership search only; empty self-loops change nothing.
        """
        loops: Dict[NonTerminal, Tuple[List[Tuple[Word, NormalTree]], ...]] = {}
        moves: Dict[NonTerminal, List[NormalTree]] = {}
        for t in self.trees:
            written = [c for c, part in enumerate(t.tuple.parts) if part]
            if t.input_label == t.output_label:
                if not written:
                    continue
                if len(written) == 1:
                    slots = loops.setdefault(t.input_label, ([], [], [], []))
                    slots[written[0]].append((t.tuple.parts[written[0]], t))
                    continue
            moves.setdefault(t.input_label, []).append(t)
        return loops, moves

    def relabel(self, mapping: Union[Mapping[str, str], Callable[[str], str]]) -> "Program":
        """Rename non-terminals throughout, handles included."""
        if callable(mapping):
            rename = mapping
        else:
            rename = lambda label: mapping.get(label, label)  # noqa: E731
        trees = tuple(validate_normal(relabel_tree(t.tree, rename)) for t in self.trees)
        handles = {name: rename(label) for name, label in self.handles.items()}
        return Program(trees, rename(self.in_label), rename(self.out_label), handles)

    def between(self, in_label: NonTerminal, out_label: NonTerminal) -> "Program":
        """The part of this program running from ``in_label`` to ``out_label``.

        Keeps the trees reachable from ``in_label`` without continuing past
        ``out_label``.

        Raises:
            InvalidGrammar: ``out_label`` is not reachable.
        """
        reached = {in_label}
        pending = [in_label]
        kept: Set[NormalTree] = set()
        while pending:
            label = pending.pop()
            for t in self.by_input.get(label, ()):
                kept.add(t)
                if t.output_label != out_label and t.output_label not in reached:
                    reached.add(t.output_label)
                    pending.append(t.output_label)
        return Program(tuple(t for t in self.trees if t in kept), in_label, out_label)

    def with_handles(self, **names: NonTerminal) -> "Program":
        handles = dict(self.handles)
        handles.update(names)
        return Program(self.trees, self.in_label, self.out_label, handles)


_COPY_SUFFIX = re.compile(r"~\d+$")


def _fresh(label: NonTerminal, used: Set[NonTerminal]) -> NonTerminal:
    base = _COPY_SUFFIX.sub("", label)
    if base not in used:
        return base
    copy = 1
    while f"{base}~{copy}" in used:
        copy += 1
    return f"{base}~{copy}"


def combine(p: Program, q: Program) -> Program:
    """Run ``q`` after ``p``.

    Every non-terminal of ``q`` is replaced by a fresh copy not used by ``p``,
    except ``q``'s input which becomes ``p``'s output. The result computes
    {(a a', b' b, c c', d' d)} over (a, b, c, d) in L(p) and (a', b', c', d')
    in L(q). Handles of ``p`` take precedence over renamed handles of ``q``.
    """
    used = set(p.non_terminals)
    mapping: Dict[NonTerminal, NonTerminal] = {q.in_label: p.out_label}
    for label in sorted(q.non_terminals):
        if label == q.in_label:
            continue
        mapping[label] = _fresh(label, used)
        used.add(mapping[label])
    renamed = q.relabel(mapping)
    handles = dict(p.handles)
    for name, label in renamed.handles.items():
        handles.setdefault(name, label)
    return Program(p.trees + renamed.trees, p.in_label, renamed.out_label, handles)


def is_subroutine(program: Program, auxiliary_trees: Mapping[str, ElementaryTree],
                  member_ids: Optional[Iterable[str]] = None) -> bool:
    """Check the subroutine discipline of ``program`` inside a set of trees.

    The program's trees must be among ``auxiliary_trees`` and no other tree
    may have a root label in N(program) minus the program's output.

    Args:
        program: The program to check.
        auxiliary_trees: All auxiliary trees of the host, by id.
        member_ids: Ids of the host trees that belong to the program. If
            omitted, members are found by comparing trees.
    """
    if member_ids is None:
        own = {t.tree for t in program.trees}
        members = {i for i, t in auxiliary_trees.items() if t in own}
        if len(members) < len(own):
            return False
    else:
        members = set(member_ids)
        if not members <= set(auxiliary_trees):
            return False
    inner = program.non_terminals - {program.out_label}
    return all(tree.label not in inner
               for tree_id, tree in auxiliary_trees.items() if tree_id not in members)


def _sorted_alphabet(sigma: Iterable[Terminal]) -> List[Terminal]:
    symbols = sorted(set(sigma))
    if not symbols:
        raise EmptyAlphabet("the alphabet must not be empty")
    return symbols


def make_W(a: Terminal, b: Optional[Terminal] = None, c: Optional[Terminal] = None,
           d: Optional[Terminal] = None) -> Program:
    """The one-tree program writing one character to each position.

    ``make_W(a)`` is shorthand for ``make_W(a, a, a, a)``.
    """
    b = a if b is None else b
    c = a if c is None else c
    d = a if d is None else d
    tree = node("W_In", leaf(a), node("W_Out", leaf(b), foot("W_In"), leaf(c), marked=True), leaf(d))
    return Program((validate_normal(ElementaryTree.auxiliary(tree)),), "W_In", "W_Out")


def make_Eq(sigma: Iterable[Terminal]) -> Program:
    """The program computing {(v, v^R, v, v^R) : v over sigma}.

    Raises:
        EmptyAlphabet: ``sigma`` is empty.
    """
    trees = [node("Eq_In", node("Eq_Out", foot("Eq_In"), marked=True))]
    for s in _sorted_alphabet(sigma):
        trees.append(node("Eq_In", leaf(s),
                          node("Eq_In", leaf(s), foot("Eq_In"), leaf(s), marked=True),
                          leaf(s)))
    normal = tuple(validate_normal(ElementaryTree.auxiliary(t)) for t in trees)
    return Program(normal, "Eq_In", "Eq_Out")


def make_A(sigma: Iterable[Terminal]) -> Program:
    """The program computing every tuple over ``sigma``.

    Besides the closing tree, each symbol gets four trees, each writing it into
    exactly one position.

    Raises:
        EmptyAlphabet: ``sigma`` is empty.
    """
    trees = [node("A_In", node("A_Out", foot("A_In"), marked=True))]
    for s in _sorted_alphabet(sigma):
        trees.extend([
            node("A_In", leaf(s), node("A_In", foot("A_In"), marked=True)),
            node("A_In", node("A_In", leaf(s), foot("A_In"), marked=True)),
            node("A_In", node("A_In", foot("A_In"), leaf(s), marked=True)),
            node("A_In", node("A_In", foot("A_In"), marked=True), leaf(s)),
        ])
    normal = tuple(validate_normal(ElementaryTree.auxiliary(t)) for t in trees)
    return Program(normal, "A_In", "A_Out")


def enumerate_tuples(p: Program, max_total_len: int) -> FrozenSet[Tuple4]:
    """All tuples of executions of ``p`` with total length at most the budget.

    Breadth-first over (label, tuple) states; states repeat only through trees
    that write nothing, so deduplication guarantees termination.
    """
    start = (p.in_label, EMPTY)
    seen = {start}
    queue: Deque[Tuple[NonTerminal, Tuple4]] = deque([start])
    found: Set[Tuple4] = set()
    while queue:
        label, current = queue.popleft()
        for t in p.by_input.get(label, ()):
            grown = current.then(t.tuple)
            if grown.total_length > max_total_len:
                continue
            if t.output_label == p.out_label:
                found.add(grown)
            state = (t.output_label, grown)
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return frozenset(found)


Box = Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int], FrozenSet[int]]


class _ExecutionSearch:
    """Membership search for one program and one target tuple.

    A point state (label, i1, j2, i3, j4) records consumed prefixes of p1 and
    p3 and the unconsumed prefixes of p2 and p4. Every tree acts on each
    coordinate independently, so states are kept as boxes: a label with one
    set of positions per coordinate. A tree maps a box to a box, and so does
    closing a box under single-position self-loops.
    """

    def __init__(self, program: Program, target: Tuple4):
        self.program = program
        self.target = target.parts
        self.loops, self.moves = program._transitions

    def _step(self, coordinate: int, position: int, word: Word) -> Optional[int]:
        text = self.target[coordinate]
        size = len(word)
        if FORWARD[coordinate]:
            if text[position:position + size] == word:
                return position + size
            return None
        if position >= size and text[position - size:position] == word:
            return position - size
        return None

    def _image(self, box: Box, t: Tuple4) -> Optional[Box]:
        image = []
        for c, word in enumerate(t.parts):
            if not word:
                image.append(box[c])
                continue
            moved = frozenset(q for q in (self._step(c, x, word) for x in box[c]) if q is not None)
            if not moved:
                return None
            image.append(moved)
        return tuple(image)

    def _close(self, label: NonTerminal, raw: Box):
        slots = self.loops.get(label)
        if slots is None:
            return raw, None
        closed = []
        parents: List[Dict[int, Tuple[int, NormalTree]]] = []
        for c in range(4):
            reached = set(raw[c])
            parent: Dict[int, Tuple[int, NormalTree]] = {}
            pending = list(raw[c])
            while pending:
                x = pending.pop()
                for word, t in slots[c]:
                    y = self._step(c, x, word)
                    if y is not None and y not in reached:
                        reached.add(y)
                        parent[y] = (x, t)
                        pending.append(y)
            closed.append(frozenset(reached))
            parents.append(parent)
        return tuple(closed), tuple(parents)

    def run(self) -> Optional[Tuple[NormalTree, ...]]:
        program = self.program
        goal = (len(self.target[0]), 0, len(self.target[2]), 0)
        start: Box = (frozenset([0]), frozenset([len(self.target[1])]),
                      frozenset([0]), frozenset([len(self.target[3])]))
        box, parents = self._close(program.in_label, start)
        # (label, box, parent node, tree taken, closure parents)
        nodes = [(program.in_label, box, -1, None, parents)]
        index = {(program.in_label, box): 0}
        queue: Deque[int] = deque([0])
        while queue:
            k = queue.popleft()
            label, box = nodes[k][0], nodes[k][1]
            for t in self.moves.get(label, ()):
                raw = self._image(box, t.tuple)
                if raw is None:
                    continue
                closed, parents = self._close(t.output_label, raw)
                key = (t.output_label, closed)
                if key in index:
                    continue
                index[key] = len(nodes)
                nodes.append((t.output_label, closed, k, t, parents))
                if t.output_label == program.out_label and all(
                        goal[c] in closed[c] for c in range(4)):
                    return self._trace(nodes, len(nodes) - 1, goal)
                queue.append(len(nodes) - 1)
        return None

    def _trace(self, nodes, k: int, goal) -> Tuple[NormalTree, ...]:
        point = list(goal)
        trees: List[NormalTree] = []
        while k >= 0:
            _, _, parent, taken, parents = nodes[k]
            looped: List[NormalTree] = []
            if parents is not None:
                for c in range(4):
                    steps: List[NormalTree] = []
                    while point[c] in parents[c]:
                        point[c], t = parents[c][point[c]]
                        steps.append(t)
                    looped.extend(reversed(steps))
            trees[:0] = looped
            if taken is not None:
                for c, word in enumerate(taken.tuple.parts):
                    point[c] += -len(word) if FORWARD[c] else len(word)
                trees.insert(0, taken)
            k = parent
        return tuple(trees)


def find_execution(p: Program, t: Tuple4) -> Optional[Tuple[NormalTree, ...]]:
    """An execution of ``p`` generating ``t``, or None if ``t`` is not in L(p).

    The returned trees start at ``p.in_label`` and end at ``p.out_label``;
    chaining them generates exactly ``t``.
    """
    return _ExecutionSearch(p, t).run()


def tuple_in_program(p: Program, t: Tuple4) -> bool:
    """Decide whether ``p`` computes ``t``."""
    return find_execution(p, t) is not None


def program_to_grammar(p: Program, center: Terminal, start: NonTerminal = "START") -> Grammar:
    """Embed a program into a grammar generating n1 n2 center n3 n4.

    The initial tree is ``start`` over the marked program input over
    ``center``; a foot-only tree rooted at the program output ends executions.
    """
    initial = ElementaryTree.initial(node(start, node(p.in_label, leaf(center), marked=True)))
    auxiliary = {f"{i:03d}": t.tree for i, t in enumerate(p.trees)}
    auxiliary["stop"] = ElementaryTree.auxiliary(node(p.out_label, foot(p.out_label)))
    return Grammar.from_trees({"start": initial}, auxiliary)
