"""
Tree-adjoining grammar core: elementary trees, adjunction, yields and derivations.

Trees are immutable values. Every traversal in this module is iterative,
because derived trees produced by the clique reduction nest thousands of
adjunctions deep.

Adjunction is obligatory: a marked inner node must be adjoined exactly once
and unmarked nodes can never be adjoined. When an auxiliary tree is adjoined
at a node, the node moves to the position of the auxiliary tree's foot and
loses its mark.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from typing import (
    Dict, FrozenSet, Iterator, List, Mapping, Optional, Set, Tuple, Union,
)

from tagclique.errors import (
    AddressUnresolvable,
    InvalidGrammar,
    InvalidTree,
    LabelMismatch,
    NotAuxiliary,
    NotMarked,
    ReplayError,
    TagError,
)

logger = logging.getLogger(__name__)

Terminal = str
NonTerminal = str
Address = Tuple[int, ...]
TokenString = Tuple[Terminal, ...]


class NodeKind(Enum):
    INTERNAL = "internal"
    LEAF = "leaf"
    FOOT = "foot"


class TreeKind(Enum):
    INITIAL = "initial"
    AUXILIARY = "auxiliary"


@dataclass(frozen=True)
class TreeNode:
    """A node of an elementary or derived tree.

    Inner nodes carry a non-terminal label and at least one child. Leaves carry
    a terminal label. The foot is a childless node carrying a non-terminal.
    Only inner nodes may be marked for adjunction.
    """
    label: str
    kind: NodeKind = NodeKind.INTERNAL
    marked: bool = False
    children: Tuple["TreeNode", ...] = ()

    def __post_init__(self):
        if self.kind is NodeKind.INTERNAL:
            if not self.children:
                raise InvalidTree(f"inner node {self.label!r} has no children")
        elif self.children:
            raise InvalidTree(f"{self.kind.value} node {self.label!r} has children")
        elif self.marked:
            raise InvalidTree(f"{self.kind.value} node {self.label!r} is marked")


def node(label: NonTerminal, *children: TreeNode, marked: bool = False) -> TreeNode:
    """Build an inner node."""
    return TreeNode(label, NodeKind.INTERNAL, marked, tuple(children))


def leaf(label: Terminal) -> TreeNode:
    """Build a terminal leaf."""
    return TreeNode(label, NodeKind.LEAF)


def foot(label: NonTerminal) -> TreeNode:
    """Build a foot node."""
    return TreeNode(label, NodeKind.FOOT)


def _walk(root: TreeNode) -> Iterator[TreeNode]:
    """Preorder traversal without addresses."""
    stack = [root]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def iter_nodes(root: TreeNode) -> Iterator[Tuple[Address, TreeNode]]:
    """Preorder traversal yielding (address, node) pairs."""
    stack: List[Tuple[Address, TreeNode]] = [((), root)]
    while stack:
        address, current = stack.pop()
        yield address, current
        for index in range(len(current.children) - 1, -1, -1):
            stack.append((address + (index,), current.children[index]))


def node_at(root: TreeNode, at: Address) -> TreeNode:
    """Resolve an address.

    Raises:
        AddressUnresolvable: if some index on the path does not exist.
    """
    current = root
    for depth, index in enumerate(at):
        if index < 0 or index >= len(current.children):
            raise AddressUnresolvable(
                f"address {at} leaves the tree at depth {depth}")
        current = current.children[index]
    return current


def replace_at(root: TreeNode, at: Address, new: TreeNode) -> TreeNode:
    """Return a copy of ``root`` with the subtree at ``at`` replaced by ``new``."""
    path = [root]
    for index in at[:-1] if at else ():
        path.append(node_at(path[-1], (index,)))
    if at:
        node_at(path[-1], (at[-1],))
    result = new
    for parent, index in zip(reversed(path), reversed(at)):
        kids = list(parent.children)
        kids[index] = result
        result = replace(parent, children=tuple(kids))
    return result


@dataclass(frozen=True)
class ElementaryTree:
    """An initial or auxiliary tree; derived trees share this shape.

    ``foot_address`` is None for initial trees and addresses the unique foot
    of an auxiliary tree.
    """
    kind: TreeKind
    root: TreeNode
    foot_address: Optional[Address] = None

    def __post_init__(self):
        if self.root.kind is not NodeKind.INTERNAL:
            raise InvalidTree("the root must be an inner node")
        if self.root.marked:
            raise InvalidTree("the root may not be marked")
        feet = sum(1 for n in _walk(self.root) if n.kind is NodeKind.FOOT)
        if self.kind is TreeKind.INITIAL:
            if feet or self.foot_address is not None:
                raise InvalidTree("initial trees have no foot")
            return
        if feet != 1:
            raise InvalidTree(f"auxiliary tree has {feet} feet, expected 1")
        if self.foot_address is None:
            raise InvalidTree("auxiliary tree without a foot address")
        try:
            target = node_at(self.root, self.foot_address)
        except AddressUnresolvable as exc:
            raise InvalidTree(str(exc)) from exc
        if target.kind is not NodeKind.FOOT:
            raise InvalidTree(f"foot address {self.foot_address} is not the foot")
        if target.label != self.root.label:
            raise InvalidTree(
                f"foot label {target.label!r} differs from root {self.root.label!r}")

    @classmethod
    def initial(cls, root: TreeNode) -> "ElementaryTree":
        return cls(TreeKind.INITIAL, root)

    @classmethod
    def auxiliary(cls, root: TreeNode) -> "ElementaryTree":
        """Build an auxiliary tree, locating its foot."""
        found = [a for a, n in iter_nodes(root) if n.kind is NodeKind.FOOT]
        if len(found) != 1:
            raise InvalidTree(f"auxiliary tree has {len(found)} feet, expected 1")
        return cls(TreeKind.AUXILIARY, root, found[0])

    @property
    def is_auxiliary(self) -> bool:
        return self.kind is TreeKind.AUXILIARY

    @property
    def label(self) -> NonTerminal:
        return self.root.label


# Derived trees have the same representation as elementary ones.
DerivedTree = ElementaryTree


def subtree(tree: ElementaryTree, at: Address) -> TreeNode:
    """The subtree rooted at ``at``."""
    return node_at(tree.root, at)


def adjoin(derived: ElementaryTree, at: Address, aux: ElementaryTree) -> ElementaryTree:
    """Adjoin ``aux`` at the marked node ``at`` of ``derived``.

    The node at ``at`` is replaced by ``aux``; the foot of ``aux`` is replaced
    by the original node, now unmarked. Neither input is modified.

    Raises:
        NotAuxiliary: ``aux`` is an initial tree.
        AddressUnresolvable: ``at`` does not resolve.
        NotMarked: the node at ``at`` is not a marked inner node.
        LabelMismatch: the node's label differs from ``aux``'s root label.
    """
    if not aux.is_auxiliary:
        raise NotAuxiliary(f"cannot adjoin an initial tree rooted at {aux.label!r}")
    target = node_at(derived.root, at)
    if not target.marked:
        raise NotMarked(f"node {target.label!r} at {at} is not marked")
    if target.label != aux.label:
        raise LabelMismatch(
            f"node {target.label!r} at {at} cannot take a tree rooted at {aux.label!r}")
    displaced = replace(target, marked=False)
    spliced = replace_at(aux.root, aux.foot_address, displaced)
    foot_address = derived.foot_address
    if foot_address is not None and foot_address[:len(at)] == at:
        foot_address = at + aux.foot_address + foot_address[len(at):]
    return ElementaryTree(derived.kind, replace_at(derived.root, at, spliced), foot_address)


def tree_yield(tree: Union[ElementaryTree, TreeNode]) -> TokenString:
    """Terminal leaf labels, left to right. Feet contribute nothing."""
    root = tree.root if isinstance(tree, ElementaryTree) else tree
    return tuple(n.label for n in _walk(root) if n.kind is NodeKind.LEAF)


def foot_split(aux: ElementaryTree) -> Tuple[TokenString, TokenString]:
    """Terminals of ``aux`` left and right of its foot."""
    left: List[Terminal] = []
    right: List[Terminal] = []
    side = left
    for current in _walk(aux.root):
        if current.kind is NodeKind.FOOT:
            side = right
        elif current.kind is NodeKind.LEAF:
            side.append(current.label)
    return tuple(left), tuple(right)


def marked_addresses(tree: ElementaryTree) -> FrozenSet[Address]:
    """Addresses of every node marked for adjunction."""
    return frozenset(a for a, n in iter_nodes(tree.root) if n.marked)


def leftmost_marked(tree: ElementaryTree) -> Optional[Address]:
    """The first marked node in preorder, or None for a complete tree."""
    for address, current in iter_nodes(tree.root):
        if current.marked:
            return address
    return None


def is_complete(tree: ElementaryTree) -> bool:
    return not any(n.marked for n in _walk(tree.root))


def terminal_count(tree: ElementaryTree) -> int:
    return sum(1 for n in _walk(tree.root) if n.kind is NodeKind.LEAF)


def tree_labels(tree: ElementaryTree) -> Tuple[Set[Terminal], Set[NonTerminal]]:
    """Terminal and non-terminal labels used by ``tree``."""
    terminals: Set[Terminal] = set()
    non_terminals: Set[NonTerminal] = set()
    for current in _walk(tree.root):
        if current.kind is NodeKind.LEAF:
            terminals.add(current.label)
        else:
            non_terminals.add(current.label)
    return terminals, non_terminals


@dataclass(frozen=True)
class Derivation:
    """An initial tree id and a sequence of (address, auxiliary tree id) steps."""
    initial_tree_id: str
    steps: Tuple[Tuple[Address, str], ...] = ()

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Grammar:
    """A TAG (I, A, T, N) with trees keyed by id.

    Raises:
        InvalidGrammar: on kind mismatches, unknown labels, or symbols used as
            both terminal and non-terminal.
    """
    initial_trees: Mapping[str, ElementaryTree]
    auxiliary_trees: Mapping[str, ElementaryTree]
    terminals: FrozenSet[Terminal]
    non_terminals: FrozenSet[NonTerminal]

    def __post_init__(self):
        object.__setattr__(self, "initial_trees", dict(self.initial_trees))
        object.__setattr__(self, "auxiliary_trees", dict(self.auxiliary_trees))
        object.__setattr__(self, "terminals", frozenset(self.terminals))
        object.__setattr__(self, "non_terminals", frozenset(self.non_terminals))
        shared = set(self.initial_trees) & set(self.auxiliary_trees)
        if shared:
            raise InvalidGrammar(f"tree ids used twice: {sorted(shared)}")
        if self.terminals & self.non_terminals:
            raise InvalidGrammar(
                f"symbols both terminal and non-terminal: "
                f"{sorted(self.terminals & self.non_terminals)}")
        for tree_id, tree in self.initial_trees.items():
            if tree.is_auxiliary:
                raise InvalidGrammar(f"initial tree {tree_id!r} has a foot")
        for tree_id, tree in self.auxiliary_trees.items():
            if not tree.is_auxiliary:
                raise InvalidGrammar(f"auxiliary tree {tree_id!r} has no foot")
        for tree_id, tree in self.trees():
            terminals, non_terminals = tree_labels(tree)
            if not terminals <= self.terminals:
                raise InvalidGrammar(
                    f"tree {tree_id!r} uses unknown terminals "
                    f"{sorted(terminals - self.terminals)}")
            if not non_terminals <= self.non_terminals:
                raise InvalidGrammar(
                    f"tree {tree_id!r} uses unknown non-terminals "
                    f"{sorted(non_terminals - self.non_terminals)}")

    @classmethod
    def from_trees(cls, initial: Mapping[str, ElementaryTree],
                   auxiliary: Mapping[str, ElementaryTree],
                   terminals: FrozenSet[Terminal] = frozenset()) -> "Grammar":
        """Build a grammar whose symbol sets are inferred from the trees.

        Args:
            initial: Initial trees by id.
            auxiliary: Auxiliary trees by id.
            terminals: Extra terminals to declare even if no tree uses them.
        """
        all_terminals: Set[Terminal] = set(terminals)
        all_non_terminals: Set[NonTerminal] = set()
        for tree in list(initial.values()) + list(auxiliary.values()):
            t, n = tree_labels(tree)
            all_terminals |= t
            all_non_terminals |= n
        return cls(initial, auxiliary, frozenset(all_terminals), frozenset(all_non_terminals))

    def trees(self) -> Iterator[Tuple[str, ElementaryTree]]:
        yield from self.initial_trees.items()
        yield from self.auxiliary_trees.items()

    def tree(self, tree_id: str) -> ElementaryTree:
        if tree_id in self.initial_trees:
            return self.initial_trees[tree_id]
        if tree_id in self.auxiliary_trees:
            return self.auxiliary_trees[tree_id]
        raise InvalidGrammar(f"unknown tree id {tree_id!r}")

    def auxiliary_by_label(self) -> Dict[NonTerminal, List[Tuple[str, ElementaryTree]]]:
        """Auxiliary trees grouped by root label, in id order."""
        grouped: Dict[NonTerminal, List[Tuple[str, ElementaryTree]]] = defaultdict(list)
        for tree_id in sorted(self.auxiliary_trees):
            tree = self.auxiliary_trees[tree_id]
            grouped[tree.label].append((tree_id, tree))
        return grouped

    def __len__(self) -> int:
        return len(self.initial_trees) + len(self.auxiliary_trees)


class _WorkNode:
    """Mutable node used while replaying long derivations."""

    __slots__ = ("label", "kind", "marked", "children")

    def __init__(self, label: str, kind: NodeKind, marked: bool, children: list):
        self.label = label
        self.kind = kind
        self.marked = marked
        self.children = children


def _thaw(root: TreeNode) -> _WorkNode:
    made: Dict[int, _WorkNode] = {}
    stack = [(root, False)]
    while stack:
        current, ready = stack.pop()
        if ready:
            kids = [made.pop(id(c)) for c in current.children]
            made[id(current)] = _WorkNode(current.label, current.kind, current.marked, kids)
        else:
            stack.append((current, True))
            stack.extend((c, False) for c in current.children)
    return made[id(root)]


def _freeze(root: _WorkNode) -> TreeNode:
    made: Dict[int, TreeNode] = {}
    stack = [(root, False)]
    while stack:
        current, ready = stack.pop()
        if ready:
            kids = tuple(made.pop(id(c)) for c in current.children)
            made[id(current)] = TreeNode(current.label, current.kind, current.marked, kids)
        else:
            stack.append((current, True))
            stack.extend((c, False) for c in current.children)
    return made[id(root)]


def replay(grammar: Grammar, derivation: Derivation) -> ElementaryTree:
    """Fold :func:`adjoin` over the steps of ``derivation``.

    Works on a private mutable copy and freezes it once at the end; the result
    is the same tree the fold of :func:`adjoin` would give. Consecutive steps
    usually address nested positions, so the path to the previous step is
    kept and only the new suffix is resolved.

    Raises:
        ReplayError: wrapping the adjunction error of the failing step.
    """
    if derivation.initial_tree_id not in grammar.initial_trees:
        raise InvalidGrammar(f"unknown initial tree {derivation.initial_tree_id!r}")
    root = _thaw(grammar.initial_trees[derivation.initial_tree_id].root)
    path: List[_WorkNode] = [root]
    cached: Address = ()
    for step_index, (at, aux_id) in enumerate(derivation.steps):
        try:
            aux = grammar.auxiliary_trees.get(aux_id)
            if aux is None:
                if aux_id in grammar.initial_trees:
                    raise NotAuxiliary(f"cannot adjoin initial tree {aux_id!r}")
                raise InvalidGrammar(f"unknown auxiliary tree {aux_id!r}")
            if at[:len(cached)] == cached:
                common = len(cached)
            else:
                common = 0
                while common < min(len(at), len(cached)) and at[common] == cached[common]:
                    common += 1
            del path[common + 1:]
            for depth in range(common, len(at)):
                current = path[-1]
                index = at[depth]
                if index < 0 or index >= len(current.children):
                    raise AddressUnresolvable(f"address {at} leaves the tree at depth {depth}")
                path.append(current.children[index])
            cached = at
            target = path[-1]
            if not target.marked:
                raise NotMarked(f"node {target.label!r} at {at} is not marked")
            if target.label != aux.label:
                raise LabelMismatch(
                    f"node {target.label!r} at {at} cannot take a tree rooted at {aux.label!r}")
        except TagError as exc:
            raise ReplayError(step_index, exc) from exc

        spliced = _thaw(aux.root)
        holder = spliced
        for index in aux.foot_address[:-1]:
            holder = holder.children[index]
        target.marked = False
        holder.children[aux.foot_address[-1]] = target
        if at:
            path[-2].children[at[-1]] = spliced
        else:
            root = spliced
        path[-1] = spliced
    logger.debug("replayed %d steps from %r", len(derivation.steps), derivation.initial_tree_id)
    return ElementaryTree(TreeKind.INITIAL, _freeze(root))


def enumerate_language(grammar: Grammar, max_yield_len: int,
                       max_adjunctions: int) -> FrozenSet[TokenString]:
    """Yields of complete derived trees within the given budgets.

    Always expands the leftmost marked node; adjunction order does not affect
    the set of complete trees. Branches with more than ``max_yield_len``
    terminals are pruned since adjunction never removes terminals. The result
    is exact whenever ``max_adjunctions`` is large enough for the grammar.
    """
    by_label = grammar.auxiliary_by_label()
    results: Set[TokenString] = set()
    frontier: List[ElementaryTree] = [
        t for t in grammar.initial_trees.values() if terminal_count(t) <= max_yield_len]
    seen: Set[ElementaryTree] = set(frontier)
    for depth in range(max_adjunctions + 1):
        expanded: List[ElementaryTree] = []
        for tree in frontier:
            at = leftmost_marked(tree)
            if at is None:
                results.add(tree_yield(tree))
                continue
            if depth == max_adjunctions:
                continue
            label = node_at(tree.root, at).label
            for _, aux in by_label.get(label, ()):
                grown = adjoin(tree, at, aux)
                if terminal_count(grown) <= max_yield_len and grown not in seen:
                    seen.add(grown)
                    expanded.append(grown)
        frontier = expanded
        if not frontier:
            break
    logger.debug("enumerated %d strings from %d derived trees", len(results), len(seen))
    return frozenset(results)


def example_grammar(with_terminators: bool = False) -> Grammar:
    """The classic two-tree example: A -> (a, [B] -> b, c) and a three-mark B tree.

    Without terminators no complete tree exists, since nothing can be adjoined
    at the marked A nodes. ``with_terminators`` adds foot-only trees for A and
    B, which makes ``a b c`` and ``a a b b c c`` derivable.
    """
    initial = ElementaryTree.initial(
        node("A", leaf("a"), node("B", leaf("b"), marked=True), leaf("c")))
    auxiliary = ElementaryTree.auxiliary(
        node("B",
             node("B", leaf("a"), marked=True),
             node("A", foot("B"), leaf("b"), marked=True),
             node("A", leaf("c"), marked=True)))
    auxiliaries = {"beta": auxiliary}
    if with_terminators:
        auxiliaries["stop_A"] = ElementaryTree.auxiliary(node("A", foot("A")))
        auxiliaries["stop_B"] = ElementaryTree.auxiliary(node("B", foot("B")))
    return Grammar.from_trees({"alpha": initial}, auxiliaries)
