"""
Encoding length of complete graphs against the k^2 n^(k+1) log n bound.
"""

import matplotlib.pyplot as plt
from tagclique.bench import measure_encoding_growth


def plot_length_bound(n_values=range(4, 11), k_values=(1, 2)):
    """
    Plot measured encoding lengths next to the fitted bound.

    Args:
        n_values: Vertex counts of the complete graphs
        k_values: Clique sizes; the bound constant is fitted at the first pair
    """
    results = measure_encoding_growth(list(n_values), k_values)
    c = results['c']

    fig, ax = plt.subplots(figsize=(10, 6))
    fig.suptitle(f'Encoding length of complete graphs (c = {c:.2f})', fontsize=14)
    for k in k_values:
        rows = [i for i, kk in enumerate(results['k']) if kk == k]
        ns = [results['n'][i] for i in rows]
        ax.plot(ns, [results['length'][i] for i in rows], 'o-', label=f'|GG|, k = {k}')
        ax.plot(ns, [c * results['bound'][i] for i in rows], '--', label=f'bound, k = {k}')
    ax.set_yscale('log')
    ax.set_xlabel('n')
    ax.set_ylabel('tokens')
    ax.grid(True)
    ax.legend()
    plt.tight_layout()
    return fig


if __name__ == '__main__':
    plot_length_bound()
    plt.show()
