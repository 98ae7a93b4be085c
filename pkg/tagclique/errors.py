"""Exception hierarchy for the tagclique toolkit.

Every failure raised by the library derives from :class:`TagError`, so callers
(and the CLI) can catch one base class and still tell the failure modes apart.
"""

from typing import Optional


class TagError(Exception):
    """Base error for all tagclique failures."""
    pass


# Tree and grammar construction

class InvalidTree(TagError):
    """An elementary or derived tree violates a structural invariant."""
    pass


class InvalidGrammar(TagError):
    """A grammar or program is not well-formed."""
    pass


# Adjunction

class AddressUnresolvable(TagError):
    """An address does not name a node of the tree it is applied to."""
    pass


class NotMarked(TagError):
    """Adjunction was attempted at a node that is not marked for adjunction."""
    pass


class LabelMismatch(TagError):
    """Two labels that must agree (node/root, output/input) differ."""
    pass


class NotAuxiliary(TagError):
    """An auxiliary tree was required but an initial tree was given."""
    pass


class ReplayError(TagError):
    """A derivation step failed while replaying.

    Attributes:
        step_index: Zero-based index of the failing step.
        cause: The underlying adjunction error.
    """

    def __init__(self, step_index: int, cause: TagError):
        super().__init__(f"step {step_index}: {cause}")
        self.step_index = step_index
        self.cause = cause


# Recognition

class UnknownTerminal(TagError):
    """The input string contains a symbol outside the grammar's terminals."""
    pass


# Tree programs

class MarkCountNotOne(TagError):
    """A normal tree must have exactly one marked node."""
    pass


class MarkOffSpine(TagError):
    """The marked node of a normal tree is not on the root-to-foot path."""
    pass


class EmptyAlphabet(TagError):
    """A basic program was requested over an empty alphabet."""
    pass


# Graphs and encodings

class VertexOutOfRange(TagError):
    """A vertex is not in 1..n."""
    pass


class ArityMismatch(TagError):
    """A clique does not have the requested number of vertices."""
    pass


class NotAClique(TagError):
    """A vertex set is not pairwise adjacent, or has the wrong size."""
    pass


class SplitImpossible(TagError):
    """A 6k-clique could not be turned into an encoder-consistent derivation."""
    pass


class MalformedEncoding(TagError):
    """A token string is not shaped like a graph encoding."""
    pass


class FormatError(TagError):
    """A grammar document, token file or graph file could not be parsed."""
    pass


class Disagreement(TagError):
    """A verification trial produced inconsistent verdicts.

    Attributes:
        trial: Index of the failing trial.
        bundle: Path stem of the repro bundle (.graph and .cmd), if written.
    """

    def __init__(self, trial: int, message: str, bundle: Optional[str] = None):
        super().__init__(f"trial {trial}: {message}")
        self.trial = trial
        self.bundle = bundle
