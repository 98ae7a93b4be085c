"""
Tree-adjoining grammar toolkit for the 6k-clique reduction.

This package provides TAG trees and adjunction, a general chart recognizer,
tree programs computing sets of 4-tuples, the graph encoder, the
constant-size reduction grammar and tools for checking the reduction
end to end.
"""

from .encoding import Graph, KClique, Token, encoded_length, enumerate_k_cliques, graph_gadget
from .gadgets import build_reduction_grammar, grammar_stats
from .programs import Program, Tuple4, find_execution, tuple_in_program
from .recognizer import ChartRecognizer, recognize
from .reduction import (
    build_derivation_from_clique, find_clique, has_clique, recognize_decomposition,
    verify_instance,
)
from .trees import Derivation, ElementaryTree, Grammar, adjoin, replay, tree_yield

__all__ = [
    'Graph', 'KClique', 'Token', 'encoded_length', 'enumerate_k_cliques', 'graph_gadget',
    'build_reduction_grammar', 'grammar_stats',
    'Program', 'Tuple4', 'find_execution', 'tuple_in_program',
    'ChartRecognizer', 'recognize',
    'build_derivation_from_clique', 'find_clique', 'has_clique', 'recognize_decomposition',
    'verify_instance',
    'Derivation', 'ElementaryTree', 'Grammar', 'adjoin', 'replay', 'tree_yield',
]
