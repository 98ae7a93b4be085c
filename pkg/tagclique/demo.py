"""
Demo of the clique reduction on a complete graph and a cycle.
Usage: python tagclique/demo.py [--n N]
"""
import os
import sys
import argparse

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from tagclique.campaign import format_report
from tagclique.encoding import Graph
from tagclique.gadgets import build_reduction_grammar, grammar_stats
from tagclique.recognizer import recognize
from tagclique.reduction import verify_instance
from tagclique.trees import example_grammar


def show_example():
    """Recognize a few strings with the small textbook grammar."""
    grammar = example_grammar(with_terminators=True)
    print("Small grammar with terminators:")
    for text in ("a b c", "a a b b c c", "a b b c"):
        verdict = "generated" if recognize(grammar, text.split()) else "not generated"
        print(f"  {text!r}: {verdict}")


def show_reduction(n):
    """Verify the reduction on K_n and C_n for k = 1."""
    stats = grammar_stats(build_reduction_grammar().grammar)
    print(f"\nReduction grammar: {stats.trees} trees, {stats.non_terminals} non-terminals, "
          f"{stats.terminals} terminals")
    for name, g in ((f"K{n}", Graph.complete(n)), (f"C{n}", Graph.cycle(n))):
        print(f"\n{name}:")
        print(format_report(verify_instance(g, 1)), end="")


def main():
    parser = argparse.ArgumentParser(description='Run the clique reduction on two small graphs')
    parser.add_argument('--n', type=int, default=7, help='Number of vertices (default: 7)')
    args = parser.parse_args()
    show_example()
    show_reduction(args.n)


if __name__ == '__main__':
    main()
