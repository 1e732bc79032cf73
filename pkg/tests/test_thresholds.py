import pytest

from slicekit import ratpoly
from slicekit.errors import InconsistencyError
from slicekit.logging_config import logging
from slicekit.thresholds import (
    boolean_threshold,
    build_table,
    compute_k,
    compute_kappa,
    compute_W,
    find_nonconstant_witness,
    is_arithmetic_progression,
    longest_ap,
    rows_to_dataframe,
    value_set,
    verify_W_bounds,
    witness_run_length,
)

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)


def test_value_set_is_sorted_and_deduplicated():
    A = value_set(["3", 0, 1, 1])
    assert A.elements == (0, 1, 3)
    assert str(A) == "{0,1,3}"
    with pytest.raises(ValueError):
        value_set([5, 5])


def test_find_nonconstant_witness(boolean_set, gap_set):
    P = find_nonconstant_witness(boolean_set, 1, 1)
    assert P is not None and not ratpoly.is_constant(P)
    assert find_nonconstant_witness(boolean_set, 1, 2) is None

    P = find_nonconstant_witness(gap_set, 2, 5)
    assert P is not None
    assert P.degree <= 2
    assert all(ratpoly.evaluate(P, x) in gap_set.members for x in range(6))


def test_find_nonconstant_witness_rejects_bad_arguments(boolean_set):
    with pytest.raises(ValueError):
        find_nonconstant_witness(boolean_set, 0, 3)
    with pytest.raises(ValueError):
        find_nonconstant_witness(boolean_set, 3, 2)


def test_compute_W_examples():
    assert compute_W(value_set([0, 1]), 2) == 4
    assert compute_W(value_set([0, 1, 4, 5, 20]), 3) == 7
    assert compute_W(value_set([0, 1, 27, 126, 370]), 4) == 10


def test_compute_k_examples(boolean_set, gap_set):
    assert compute_k(boolean_set, 3) == (6, (1,))
    assert compute_k(gap_set, 2) == (6, (2,))
    assert compute_k(value_set([0, 1, 27, 126, 370]), 2) == (4, (1, 2))
    with pytest.raises(ValueError):
        compute_k(boolean_set, 0)


def test_compute_kappa_examples(boolean_set, gap_set):
    assert compute_kappa(boolean_set, 1) == 2
    assert compute_kappa(gap_set, 4) == 12
    assert compute_kappa(value_set([0, 1, 2]), 3) == 9


def test_full_table(table_sets, expected_table):
    rows = build_table(table_sets, 5)
    assert len(rows) == 20
    for row in rows:
        W, k, attaining = expected_table[str(row.A)][row.d - 1]
        assert (row.W, row.k, row.attaining_s) == (W, k, attaining)
        assert row.kappa == row.k


def test_W_bounds_and_monotonicity(table_sets):
    for A in table_sets:
        previous = 0
        for d in range(1, 6):
            W = verify_W_bounds(A, d)
            assert d < W <= A.size * d
            assert W >= previous
            previous = W


def test_witness_just_below_W_verifies(table_sets):
    for A in table_sets:
        for d in range(1, 5):
            L = compute_W(A, d) - 1
            P = find_nonconstant_witness(A, d, L)
            assert P is not None
            assert not ratpoly.is_constant(P)
            assert P.degree <= d
            assert witness_run_length(A, P, cap=L) == L


def test_kappa_equals_k(table_sets):
    for A in table_sets:
        for d in range(1, 6):
            assert compute_kappa(A, d) == compute_k(A, d)[0]


def test_boolean_threshold(boolean_set):
    for d in range(1, 6):
        assert compute_k(boolean_set, d)[0] == boolean_threshold(d)


@pytest.mark.parametrize("elements", [[0, 1, 2], [5, 8, 11, 14]])
def test_arithmetic_progressions_reach_the_upper_bound(elements):
    A = value_set(elements)
    assert is_arithmetic_progression(A)
    for d in range(1, 5):
        assert compute_k(A, d)[0] == A.size * d


def test_longest_ap(table_sets):
    assert longest_ap(value_set([0, 1, 3])) == 2
    assert longest_ap(value_set([0, 1, 2, 3])) == 4
    assert longest_ap(value_set([0, 5, 7, 8, 12, 13, 15])) == 2
    assert not is_arithmetic_progression(value_set([0, 1, 3]))
    for A in table_sets:
        assert compute_W(A, 1) == longest_ap(A)


def test_build_table_small_cases():
    rows = build_table([value_set([0, 1])], 1)
    assert [(r.W, r.k, r.attaining_s) for r in rows] == [(2, 2, (1,))]
    rows = build_table([value_set([0, 2, 4])], 2)
    assert [r.k for r in rows] == [3, 6]
    with pytest.raises(ValueError):
        build_table([value_set([0, 1])], 0)


def test_rows_to_dataframe(table_sets):
    df = rows_to_dataframe(build_table(table_sets, 5))
    assert list(df.index) == [str(A) for A in table_sets]
    assert df.loc["{0,1,3}", "W d=4"] == 7
    assert df.loc["{0,1,3}", "k d=2"] == "6 [2]"
    assert df.loc["{0,1}", "k d=4"] == "8 [1,2]"
    assert list(df.columns[:5]) == [f"W d={d}" for d in range(1, 6)]


def test_inconsistency_error_is_not_a_value_error():
    assert not issubclass(InconsistencyError, ValueError)


def test_threshold_caches_stay_bounded():
    for j in range(1, 301):
        assert compute_W(value_set([0, j]), 1) == 2
    assert compute_W.cache_info().currsize <= 256
    assert compute_W.cache_info().maxsize == 256
