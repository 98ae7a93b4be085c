import pytest

from tagclique.bench import length_bound, measure_chart_growth, measure_encoding_growth
from tagclique.trees import example_grammar


def test_length_bound():
    assert length_bound(4, 1) == 48
    assert length_bound(10, 2) == 4 * 1000 * 4


def test_encoding_stays_within_twice_the_bound():
    results = measure_encoding_growth(range(4, 11), k_values=(1, 2))
    assert results['c'] == pytest.approx(1537 / 48)
    assert results['ratio'][0] == pytest.approx(1.0)
    assert len(results['ratio']) == 14
    assert all(0 < r <= 2 for r in results['ratio'])
    assert results['length'][results['n'].index(10)] == 10921


def test_encoding_growth_with_fixed_constant():
    results = measure_encoding_growth([6], c=1.0)
    assert results['c'] == 1.0
    assert results['ratio'] == [3385 / length_bound(6, 1)]


def test_chart_growth():
    strings = ["a b c".split(), "a a b b c c".split()]
    results = measure_chart_growth(example_grammar(with_terminators=True), strings)
    assert results['length'] == [3, 6]
    assert results['accepted'] == [True, True]
    assert results['items'][1] > results['items'][0]
    assert results['slope'] > 0
    assert len(results['time']) == 2


def test_chart_growth_slope_needs_two_lengths():
    results = measure_chart_growth(example_grammar(), [["a", "b", "c"]])
    assert results['slope'] is None
    assert results['accepted'] == [False]
