"""
File formats: grammar documents, token files and graph files.

Grammar documents are JSON with a fixed key order, sorted symbol lists and
trees sorted by id, so printing a parsed document reproduces it byte for byte.
Token files hold whitespace-separated token spellings. Graph files hold one
"u v" edge per line with an optional "p <n> <m>" header; DIMACS "p edge",
"e u v" and "c" comment lines are accepted too.
"""

import json
import logging
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from tagclique.encoding import Graph
from tagclique.errors import FormatError, VertexOutOfRange
from tagclique.trees import ElementaryTree, Grammar, NodeKind, Terminal, TokenString, TreeNode

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def _node_to_json(root: TreeNode) -> dict:
    return {
        "label": root.label,
        "node_kind": root.kind.value,
        "marked": root.marked,
        "children": [_node_to_json(c) for c in root.children],
    }


def _node_from_json(data: dict) -> TreeNode:
    kind = NodeKind(data["node_kind"])
    children = tuple(_node_from_json(c) for c in data["children"])
    marked = data["marked"]
    if not isinstance(marked, bool):
        raise FormatError(f"'marked' must be a boolean, got {marked!r}")
    return TreeNode(str(data["label"]), kind, marked, children)


def print_grammar(grammar: Grammar, named_labels: Optional[Mapping[str, str]] = None) -> str:
    """Serialize a grammar, with optional named labels, as a JSON document."""
    document = {
        "version": FORMAT_VERSION,
        "terminals": sorted(grammar.terminals),
        "non_terminals": sorted(grammar.non_terminals),
        "initial_trees": [
            {"id": tree_id, "root": _node_to_json(grammar.initial_trees[tree_id].root)}
            for tree_id in sorted(grammar.initial_trees)
        ],
        "auxiliary_trees": [
            {"id": tree_id, "root": _node_to_json(grammar.auxiliary_trees[tree_id].root)}
            for tree_id in sorted(grammar.auxiliary_trees)
        ],
        "named_labels": {name: named_labels[name] for name in sorted(named_labels or {})},
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def parse_grammar(text: str) -> Tuple[Grammar, Dict[str, str]]:
    """Parse a grammar document.

    Returns:
        The grammar and its named labels (empty if the document has none).

    Raises:
        FormatError: malformed JSON, missing keys or an unknown version.
        InvalidTree, InvalidGrammar: the trees do not form a valid grammar.
    """
    try:
        document = json.loads(text)
        if document.get("version") != FORMAT_VERSION:
            raise FormatError(f"unsupported grammar version {document.get('version')!r}")
        initial = {str(t["id"]): ElementaryTree.initial(_node_from_json(t["root"]))
                   for t in document["initial_trees"]}
        auxiliary = {str(t["id"]): ElementaryTree.auxiliary(_node_from_json(t["root"]))
                     for t in document["auxiliary_trees"]}
        terminals = frozenset(document["terminals"])
        non_terminals = frozenset(document["non_terminals"])
        named = {str(k): str(v) for k, v in document.get("named_labels", {}).items()}
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise FormatError(f"malformed grammar document: {exc}") from exc
    grammar = Grammar(initial, auxiliary, terminals, non_terminals)
    logger.debug("parsed grammar with %d trees", len(grammar))
    return grammar, named


def format_tokens(tokens: Iterable[Terminal]) -> str:
    return " ".join(tokens) + "\n"


def parse_tokens(text: str, alphabet: Optional[Iterable[Terminal]] = None) -> TokenString:
    """Split a token file.

    Raises:
        FormatError: a token is not in ``alphabet`` (when given).
    """
    tokens = tuple(text.split())
    if alphabet is not None:
        allowed = set(alphabet)
        unknown = sorted(set(tokens) - allowed)
        if unknown:
            raise FormatError(f"unknown tokens: {unknown}")
    return tokens


def parse_graph(text: str) -> Graph:
    """Parse a graph file.

    Without a header the vertex count is the largest vertex mentioned.

    Raises:
        FormatError: unparseable lines, self-loops, or vertices beyond the header.
    """
    n: Optional[int] = None
    edges: List[Tuple[int, int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        try:
            if fields[0] == "p":
                counts = [f for f in fields[1:] if f != "edge"]
                if len(counts) != 2:
                    raise ValueError("expected 'p <n> <m>'")
                n = int(counts[0])
                continue
            if fields[0] == "e":
                fields = fields[1:]
            if len(fields) != 2:
                raise ValueError("expected two vertices")
            edges.append((int(fields[0]), int(fields[1])))
        except ValueError as exc:
            raise FormatError(f"line {number}: {exc}: {raw!r}") from exc
    if n is None:
        n = max((max(e) for e in edges), default=0)
    try:
        return Graph.from_edges(n, edges)
    except VertexOutOfRange as exc:
        raise FormatError(str(exc)) from exc


def format_graph(g: Graph) -> str:
    edges = g.edges
    lines = [f"p {g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def read_grammar(path: str) -> Tuple[Grammar, Dict[str, str]]:
    return parse_grammar(_read(path))


def write_grammar(path: str, grammar: Grammar,
                  named_labels: Optional[Mapping[str, str]] = None) -> None:
    _write(path, print_grammar(grammar, named_labels))


def read_tokens(path: str, alphabet: Optional[Iterable[Terminal]] = None) -> TokenString:
    return parse_tokens(_read(path), alphabet)


def write_tokens(path: str, tokens: Iterable[Terminal]) -> None:
    _write(path, format_tokens(tokens))


def read_graph(path: str) -> Graph:
    return parse_graph(_read(path))


def write_graph(path: str, g: Graph) -> None:
    _write(path, format_graph(g))
