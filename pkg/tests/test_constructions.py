from fractions import Fraction

import pytest

from slicekit import ratpoly
from slicekit.constructions import (
    best_counterexample,
    certify,
    construct_block_gate,
    construct_block_sum,
    construct_gate,
    indicator_decomposition,
    interleaved_counterexample,
    recombine,
    swap_witnesses,
)
from slicekit.errors import ConstructionError, NoCounterexampleError, NotAValuedError
from slicekit.junta import junta_lower_bound
from slicekit.logging_config import logging
from slicekit.slice_core import (
    is_A_valued,
    mask_of,
    slice_degree,
    slice_domain,
    table_from_values,
    truth_table,
)
from slicekit.thresholds import compute_k, find_nonconstant_witness, value_set
from slicekit.types import CounterexampleSpec

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)


def test_block_sum_values():
    P = construct_block_sum(0, 1, 2, 3)
    assert P.n == 12
    assert P.terms == {mask_of([1, 2]): 1, mask_of([3, 4]): 1, mask_of([5, 6]): 1}
    table = truth_table(P, slice_domain(12, 2))
    assert sum(table.values) == 3
    assert set(table.values) == {0, 1}


def test_block_sum_rejects_equal_values():
    with pytest.raises(ConstructionError, match="degenerate construction"):
        construct_block_sum(1, 1, 2, 2)


def test_gate_example(gate_example, gate_polynomial):
    assert gate_example.n == 12
    assert gate_example.terms[0] == 3
    assert gate_example.terms[mask_of([4])] == -2
    assert gate_example.terms[mask_of([2, 6])] == 1
    assert mask_of([7]) not in gate_example.terms
    assert gate_example.degree == 2
    assert ratpoly.binomial_basis(gate_polynomial) == [3, -2, 1]


def test_gate_contract_is_checked(boolean_set):
    with pytest.raises(ConstructionError, match="P\\(w\\) ∉ A at w = 2"):
        construct_gate(boolean_set, 0, 1, ratpoly.univariate([0, 1]), m=3, k=4)
    with pytest.raises(ConstructionError):
        construct_gate(boolean_set, 0, 0, ratpoly.univariate([1]), m=3, k=2)
    with pytest.raises(ConstructionError):
        construct_gate(boolean_set, 0, 0, ratpoly.univariate([0, 1]), m=1, k=2)


def test_block_gate_with_unit_blocks_is_a_gate(gap_set, gate_polynomial):
    assert construct_block_gate(gap_set, 0, 0, 1, gate_polynomial, 5, 5) == construct_gate(
        gap_set, 0, 0, gate_polynomial, 5, 5
    )


def test_certify_block_gate_with_pairs(boolean_set):
    P = ratpoly.univariate([0, 1])
    poly = construct_block_gate(boolean_set, 0, 0, 2, P, 2, 2, d=2)
    spec = CounterexampleSpec(
        family="block_gate",
        A=boolean_set,
        d=2,
        k=2,
        m=2,
        n=8,
        witness_poly=P,
        parameters={"t": 0, "r": 2, "s": 1},
        a=Fraction(0),
        b=None,
    )
    report = certify(spec, poly)
    assert report.a_valued
    assert report.degree == 2
    assert report.lower_bound == 4
    assert report.min_junta == 4


def test_witness_for_the_largest_set():
    A = value_set([0, 1, 27, 126, 370])
    P = find_nonconstant_witness(A, 4, 9)
    assert P is not None
    assert all(ratpoly.evaluate(P, w) in A.members for w in range(10))


@pytest.mark.parametrize(
    "elements,d,k,m,family",
    [
        ([0, 1, 3], 2, 5, 3, "gate"),
        ([0, 1], 2, 3, 4, "gate"),
        ([0, 1, 4, 5, 20], 3, 6, 3, "gate"),
        ([0, 1], 1, 1, 2, "block_sum"),
    ],
)
def test_counterexamples_below_the_threshold(elements, d, k, m, family):
    A = value_set(elements)
    spec, poly = best_counterexample(A, d, k, m)
    assert spec.family == family
    assert spec.m >= m
    report = certify(spec, poly)
    assert report.a_valued
    assert report.degree <= d
    assert report.lower_bound >= m
    assert report.min_junta >= report.lower_bound


@pytest.mark.parametrize("m", [3, 4])
@pytest.mark.parametrize(
    "elements,d,k",
    [
        ([0, 1, 27, 126, 370], 4, 9),
        ([0, 1], 2, 3),
        ([0, 1, 3], 2, 5),
    ],
)
def test_certified_counterexamples(elements, d, k, m):
    spec, poly = best_counterexample(value_set(elements), d, k, m)
    report = certify(spec, poly)
    assert report.a_valued
    assert report.degree <= d
    assert report.lower_bound >= m
    assert report.min_junta >= report.lower_bound


def test_gate_counterexample_uses_the_gate_polynomial(gap_set, gate_polynomial):
    spec, poly = best_counterexample(gap_set, 2, 5, 3)
    assert spec.witness_poly == gate_polynomial
    assert spec.parameters == {"e": 0}
    assert (spec.m, spec.n) == (5, 10)


def test_no_counterexample_at_the_threshold(table_sets):
    for A in table_sets:
        for d in range(1, 6):
            k, _ = compute_k(A, d)
            with pytest.raises(NoCounterexampleError, match="no counterexample exists at this k"):
                best_counterexample(A, d, k, 2)


def test_block_gate_counterexample(boolean_set):
    spec, poly = best_counterexample(boolean_set, 4, 6, 2)
    assert spec.family == "block_gate"
    assert spec.parameters == {"t": 0, "r": 2, "s": 2}
    assert (spec.m, spec.n) == (6, 24)

    dom = slice_domain(spec.n, spec.k)
    table = truth_table(poly, dom)
    assert is_A_valued(table, boolean_set) == (True, None)
    assert len(swap_witnesses(spec, poly)) == 144
    assert junta_lower_bound(table, range(1, 13), range(13, 25)) >= 6


def test_interleaved_block_sum(boolean_set):
    spec, poly = interleaved_counterexample(boolean_set, 2, 2, 2)
    assert spec.family == "interleaved_block_sum"
    assert poly.terms == {mask_of([2, 4]): 1, mask_of([6, 8]): 1}
    report = certify(spec, poly)
    assert report.lower_bound == 4
    assert report.min_junta == 4
    with pytest.raises(ConstructionError):
        interleaved_counterexample(boolean_set, 2, 3, 2)


def test_indicator_decomposition(gap_set):
    dom = slice_domain(4, 2)
    f = table_from_values(dom, [0, 1, 3, 3, 1, 0])
    parts = indicator_decomposition(f, gap_set)
    assert parts[Fraction(3)].values == (0, 0, 1, 1, 0, 0)
    assert parts[Fraction(0)].values == (1, 0, 0, 0, 0, 1)
    assert recombine(parts) == f

    with pytest.raises(NotAValuedError) as info:
        indicator_decomposition(table_from_values(dom, [0, 1, 2, 3, 1, 0]), gap_set)
    assert info.value.point == 6


def test_indicator_decomposition_of_random_tables(rng, gap_set):
    dom = slice_domain(6, 3)
    for _ in range(50):
        f = table_from_values(dom, [rng.choice([0, 1, 3]) for _ in range(dom.size)])
        parts = indicator_decomposition(f, gap_set)
        assert recombine(parts) == f
        assert all(set(part.values) <= {0, 1} for part in parts.values())
        assert sum(sum(part.values) for part in parts.values()) == dom.size
        degree = slice_degree(f)
        assert all(slice_degree(part) <= 2 * degree for part in parts.values())
