"""
Command line interface.

Exit codes: 0 when the string is generated or the clique exists, 1 when it is
not, 2 on malformed input.
"""

import argparse
import logging
import sys
from typing import List, Optional

from tagclique.campaign import CampaignConfig, run_campaign, write_report
from tagclique.encoding import graph_gadget
from tagclique.errors import (
    Disagreement, FormatError, InvalidGrammar, InvalidTree, MalformedEncoding, UnknownTerminal,
)
from tagclique.formats import (
    print_grammar, read_grammar, read_graph, read_tokens, write_grammar, write_tokens,
)
from tagclique.gadgets import build_reduction_grammar, grammar_stats
from tagclique.recognizer import ChartRecognizer
from tagclique.reduction import find_clique, recognize_decomposition

logger = logging.getLogger(__name__)

MALFORMED = (FormatError, InvalidGrammar, InvalidTree, MalformedEncoding, UnknownTerminal,
             OSError, ValueError)


def _cmd_encode(args) -> int:
    g = read_graph(args.graph)
    tokens = graph_gadget(g, args.k)
    write_tokens(args.out, tokens)
    print(f"wrote {len(tokens)} tokens to {args.out}")
    return 0


def _cmd_grammar(args) -> int:
    reduction = build_reduction_grammar()
    write_grammar(args.out, reduction.grammar, reduction.handles)
    print(f"wrote {len(reduction.grammar)} trees to {args.out}")
    return 0


def _cmd_recognize(args) -> int:
    grammar, _ = read_grammar(args.grammar)
    tokens = read_tokens(args.string)
    if args.algo == "cyk":
        accepted = ChartRecognizer(grammar).recognize(tokens)
    else:
        if args.k is None:
            print("Error: --algo decomp requires --k")
            return 2
        if print_grammar(grammar) != print_grammar(build_reduction_grammar().grammar):
            print("Error: --algo decomp only decides the reduction grammar")
            return 2
        accepted = recognize_decomposition(tokens, args.k)
    print("generated" if accepted else "not generated")
    return 0 if accepted else 1


def _cmd_oracle(args) -> int:
    clique = find_clique(read_graph(args.graph), args.m)
    if clique is None:
        print(f"no {args.m}-clique")
        return 1
    print(" ".join(str(v) for v in clique))
    return 0


def _cmd_verify(args) -> int:
    config = CampaignConfig(seed=args.seed, n_values=tuple(args.n), k=args.k, trials=args.trials,
                            workers=args.workers, repro_dir=args.repro_dir)
    try:
        summary = run_campaign(config)
    except Disagreement as e:
        print(f"Disagreement: {e}")
        print(f"Repro bundle: {e.bundle}")
        return 1
    print(summary.to_text(), end="")
    if args.report:
        write_report([t.report for t in summary.trials], args.report)
        print(f"Report written to: {args.report}")
    return 0


def _cmd_stats(args) -> int:
    grammar, _ = read_grammar(args.grammar)
    stats = grammar_stats(grammar)
    for name in ("trees", "non_terminals", "terminals", "max_nodes_per_tree", "multi_mark_trees"):
        print(f"{name}={getattr(stats, name)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagclique",
        description="Encode graphs for the 6k-clique grammar reduction and check it")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    encode = commands.add_parser("encode", help="Write the encoding of a graph")
    encode.add_argument("--graph", required=True, help="Graph file")
    encode.add_argument("--k", type=int, required=True, help="Clique size of the gadgets")
    encode.add_argument("--out", required=True, help="Output token file")
    encode.set_defaults(handler=_cmd_encode)

    grammar = commands.add_parser("grammar", help="Write the reduction grammar")
    grammar.add_argument("--out", required=True, help="Output grammar document")
    grammar.set_defaults(handler=_cmd_grammar)

    recognize = commands.add_parser("recognize", help="Decide whether a grammar generates a string")
    recognize.add_argument("--grammar", required=True, help="Grammar document")
    recognize.add_argument("--string", required=True, help="Token file")
    recognize.add_argument("--algo", choices=["cyk", "decomp"], default="cyk",
                           help="Chart recognizer or encoding decomposition (default: cyk)")
    recognize.add_argument("--k", type=int, help="Clique size, required by decomp")
    recognize.set_defaults(handler=_cmd_recognize)

    oracle = commands.add_parser("oracle", help="Search a graph for an m-clique")
    oracle.add_argument("--graph", required=True, help="Graph file")
    oracle.add_argument("--m", type=int, required=True, help="Clique size")
    oracle.set_defaults(handler=_cmd_oracle)

    verify = commands.add_parser("verify", help="Run a seeded verification campaign")
    verify.add_argument("--n", type=int, nargs="+", required=True, help="Vertex counts to sample")
    verify.add_argument("--k", type=int, required=True, help="Clique size of the gadgets")
    verify.add_argument("--trials", type=int, required=True, help="Number of instances")
    verify.add_argument("--seed", type=int, required=True, help="Campaign seed")
    verify.add_argument("--report", help="Write per-trial key=value reports here")
    verify.add_argument("--workers", type=int, default=1, help="Worker processes (default: 1)")
    verify.add_argument("--repro-dir", default="repro",
                        help="Directory for failing instances (default: repro)")
    verify.set_defaults(handler=_cmd_verify)

    stats = commands.add_parser("stats", help="Print grammar size statistics")
    stats.add_argument("--grammar", required=True, help="Grammar document")
    stats.set_defaults(handler=_cmd_stats)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    logger.debug("running %s", args.command)
    try:
        return args.handler(args)
    except MALFORMED as e:
        print(f"Error: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
