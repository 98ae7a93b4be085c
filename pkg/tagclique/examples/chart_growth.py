"""
Chart size of the general recognizer on a^j b^j c^j with the small grammar.
"""

import numpy as np
import matplotlib.pyplot as plt
from tagclique.bench import measure_chart_growth
from tagclique.trees import example_grammar


def plot_chart_growth(max_repeat=6):
    """
    Plot chart items against input length on log-log axes.

    Args:
        max_repeat: Largest j in a^j b^j c^j
    """
    grammar = example_grammar(with_terminators=True)
    strings = [('a',) * j + ('b',) * j + ('c',) * j for j in range(1, max_repeat + 1)]
    results = measure_chart_growth(grammar, strings)

    fig, ax = plt.subplots(figsize=(8, 6))
    ax.loglog(results['length'], results['items'], 'o-', label='items')
    ax.loglog(results['length'], results['deductions'], 's-', label='deductions')
    lengths = np.array(results['length'], dtype=float)
    ax.loglog(lengths, results['items'][0] * (lengths / lengths[0]) ** 4, ':', label='N^4')
    ax.set_title(f'Chart growth (items slope {results["slope"]:.2f})')
    ax.set_xlabel('input length N')
    ax.set_ylabel('count')
    ax.grid(True)
    ax.legend()
    plt.tight_layout()
    return fig


if __name__ == '__main__':
    plot_chart_growth()
    plt.show()
