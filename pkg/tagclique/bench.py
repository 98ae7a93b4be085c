"""
Growth measurements for the chart recognizer and the graph encoder.
"""

import logging
import time
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from tagclique.encoding import Graph, encoded_length
from tagclique.recognizer import ChartRecognizer
from tagclique.trees import Grammar, TokenString

logger = logging.getLogger(__name__)


def length_bound(n: int, k: int) -> int:
    """k^2 n^(k+1) ceil(log2(n+1)), the encoding size up to a constant."""
    return k * k * n ** (k + 1) * max(1, n.bit_length())


def measure_chart_growth(grammar: Grammar, strings: Iterable[TokenString]) -> dict:
    """
    Measure chart size and time of the recognizer on strings of growing length.

    Args:
        grammar: Grammar to recognize with
        strings: Input strings, typically of increasing length

    Returns:
        Dictionary with per-string 'length', 'items', 'deductions', 'accepted'
        and 'time' lists, and the log-log 'slope' of items against length
        (None with fewer than two non-empty strings)
    """
    results: Dict[str, list] = {
        'length': [],
        'items': [],
        'deductions': [],
        'accepted': [],
        'time': [],
    }
    recognizer = ChartRecognizer(grammar)
    for s in strings:
        start_time = time.perf_counter()
        stats = recognizer.run(s)
        results['time'].append(time.perf_counter() - start_time)
        results['length'].append(len(s))
        results['items'].append(stats.items)
        results['deductions'].append(stats.deductions)
        results['accepted'].append(stats.accepted)
    results['slope'] = _loglog_slope(results['length'], results['items'])
    return results


def measure_encoding_growth(n_values: Sequence[int], k_values: Sequence[int] = (1,),
                            c: Optional[float] = None) -> dict:
    """
    Compare encoding lengths of complete graphs with the size bound.

    Args:
        n_values: Vertex counts of the complete graphs
        k_values: Clique sizes to encode with
        c: Bound constant; fitted at the first (n, k) pair when omitted

    Returns:
        Dictionary with per-instance 'n', 'k', 'length', 'bound' and 'ratio'
        lists (ratio is length over c times bound) and the constant 'c'
    """
    results: Dict[str, list] = {'n': [], 'k': [], 'length': [], 'bound': [], 'ratio': []}
    for k in k_values:
        for n in n_values:
            length = encoded_length(Graph.complete(n), k)
            bound = length_bound(n, k)
            if c is None:
                c = length / bound
            results['n'].append(n)
            results['k'].append(k)
            results['length'].append(length)
            results['bound'].append(bound)
            results['ratio'].append(length / (c * bound))
            logger.debug("K%d, k=%d: length %d, ratio %.3f", n, k, length, results['ratio'][-1])
    results['c'] = c
    return results


def _loglog_slope(xs: Sequence[int], ys: Sequence[int]) -> Optional[float]:
    points = [(x, y) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len({x for x, _ in points}) < 2:
        return None
    x, y = np.log(np.array(points, dtype=float)).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
