import pytest

from slicekit.junta import (
    exhaustive_vertex_cover,
    greedy_matching,
    is_junta_on,
    junta_function,
    junta_lower_bound,
    minimum_junta,
    minimum_vertex_cover,
    sensitivity_graph,
)
from slicekit.logging_config import logging
from slicekit.slice_core import (
    dual,
    mask_of,
    multilinear,
    slice_domain,
    table_from_values,
    truth_table,
    value_at,
)
from slicekit.types import SensitivityGraph

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)


def dictator_table(n, k):
    return truth_table(multilinear(n, {mask_of([1]): 1}), slice_domain(n, k))


def test_sensitivity_graph_of_a_dictator():
    graph = sensitivity_graph(dictator_table(4, 2))
    assert graph.edges == {(1, 2), (1, 3), (1, 4)}
    assert graph.witnesses == {(1, 2): 5, (1, 3): 3, (1, 4): 3}


def test_witnesses_change_the_function(rng, gate_example_table):
    dom = slice_domain(7, 3)
    tables = [table_from_values(dom, [rng.choice([0, 1, 3]) for _ in range(dom.size)]) for _ in range(5)]
    for f in tables + [gate_example_table]:
        graph = sensitivity_graph(f)
        for (i, j), x in graph.witnesses.items():
            assert x >> (i - 1) & 1 and not x >> (j - 1) & 1
            assert value_at(f, x) != value_at(f, x ^ mask_of([i, j]))


def test_gate_example_graph_is_complete_bipartite(gate_example_table):
    graph = sensitivity_graph(gate_example_table)
    assert graph.edges == {(i, j) for i in range(1, 7) for j in range(7, 13)}


def test_is_junta_on():
    f = dictator_table(6, 3)
    assert is_junta_on(f, [1])
    assert is_junta_on(f, {1, 4})
    assert not is_junta_on(f, [2, 3])
    with pytest.raises(ValueError):
        is_junta_on(f, [7])


def test_junta_function():
    f = dictator_table(5, 2)
    assert junta_function(f, iter([1])) == {0: 0, 1: 1}
    with pytest.raises(ValueError):
        junta_function(f, [2])


def test_greedy_matching():
    assert greedy_matching({(2, 3), (1, 2), (3, 4)}) == [(1, 2), (3, 4)]
    assert greedy_matching([]) == []


def test_minimum_junta_examples(gate_example_table):
    report = minimum_junta(dictator_table(6, 3))
    assert report.min_size == 1
    assert report.witness == (1,)
    assert set(report.certificate_pairs) == {(1, 2)}

    report = minimum_junta(gate_example_table)
    assert report.min_size == 6
    assert len(report.certificate_pairs) == 6
    assert junta_lower_bound(gate_example_table, range(1, 7), range(7, 13)) == 6


def test_branch_and_bound_matches_exhaustive_cover(rng):
    for n, k in [(5, 2), (6, 3), (7, 2), (7, 3)]:
        dom = slice_domain(n, k)
        for _ in range(10):
            values = [rng.choice([0, 1]) for _ in range(dom.size)]
            graph = sensitivity_graph(table_from_values(dom, values))
            cover = minimum_vertex_cover(graph)
            assert len(cover) == len(exhaustive_vertex_cover(graph))
            assert all(i in cover or j in cover for i, j in graph.edges)


def test_vertex_cover_of_known_graphs():
    triangle = SensitivityGraph(n=4, edges=frozenset({(1, 2), (2, 3), (1, 3)}), witnesses={})
    assert len(minimum_vertex_cover(triangle)) == 2
    star = SensitivityGraph(n=5, edges=frozenset((1, j) for j in range(2, 6)), witnesses={})
    assert minimum_vertex_cover(star) == (1,)
    path = SensitivityGraph(n=5, edges=frozenset({(1, 2), (2, 3), (3, 4), (4, 5)}), witnesses={})
    assert minimum_vertex_cover(path) == (2, 4)
    with pytest.raises(ValueError):
        exhaustive_vertex_cover(SensitivityGraph(n=13, edges=frozenset(), witnesses={}))


def test_junta_lower_bound():
    f = dictator_table(6, 3)
    assert junta_lower_bound(f, [1], [2, 3, 4]) == 1
    assert junta_lower_bound(f, [2], [3]) == 0
    with pytest.raises(ValueError):
        junta_lower_bound(f, [1, 2], [2, 3])


def test_minimum_junta_is_invariant_under_duality(rng):
    dom = slice_domain(7, 2)
    for _ in range(10):
        f = table_from_values(dom, [rng.choice([0, 1, 3]) for _ in range(dom.size)])
        assert minimum_junta(dual(f)).min_size == minimum_junta(f).min_size


def test_trivial_slices_are_constant():
    assert minimum_junta(table_from_values(slice_domain(5, 0), [7])).min_size == 0
    assert minimum_junta(table_from_values(slice_domain(5, 5), [2])).min_size == 0


def test_minimum_junta_is_stable_in_n():
    for n in (8, 10, 12):
        f = truth_table(multilinear(n, {mask_of([1, 2]): 1}), slice_domain(n, 4))
        report = minimum_junta(f)
        assert report.witness == (1, 2)
