import random
from fractions import Fraction

import pytest

from slicekit import ratpoly
from slicekit.constructions import construct_gate
from slicekit.logging_config import logging
from slicekit.slice_core import slice_domain, truth_table
from slicekit.thresholds import value_set

log = logging.getLogger(__name__)


@pytest.fixture(scope="module")
def boolean_set():
    return value_set([0, 1])


@pytest.fixture(scope="module")
def gap_set():
    return value_set([0, 1, 3])


@pytest.fixture(scope="module")
def table_sets():
    return [
        value_set([0, 1]),
        value_set([0, 1, 3]),
        value_set([0, 1, 4, 5, 20]),
        value_set([0, 1, 27, 126, 370]),
    ]


@pytest.fixture(scope="module")
def expected_table():
    """A -> [(W, k, attaining s)] for d = 1..5."""
    return {
        "{0,1}": [(2, 2, (1,)), (4, 4, (1, 2)), (4, 6, (1,)), (6, 8, (1, 2)), (6, 10, (1,))],
        "{0,1,3}": [(2, 2, (1,)), (6, 6, (2,)), (6, 7, (2,)), (7, 12, (2,)), (8, 13, (2,))],
        "{0,1,4,5,20}": [(2, 2, (1,)), (5, 5, (2,)), (7, 7, (3,)), (8, 10, (2,)), (8, 11, (2,))],
        "{0,1,27,126,370}": [
            (2, 2, (1,)),
            (4, 4, (1, 2)),
            (4, 6, (1,)),
            (10, 10, (4,)),
            (10, 11, (4,)),
        ],
    }


@pytest.fixture(scope="module")
def gate_polynomial():
    # 3 - 2x + x(x-1)/2
    return ratpoly.univariate([3, Fraction(-5, 2), Fraction(1, 2)])


@pytest.fixture(scope="module")
def gate_example(gap_set, gate_polynomial):
    """3 - 2 sum_{i<=6} x_i + sum_{i<j<=6} x_i x_j on 12 coordinates."""
    return construct_gate(gap_set, 0, 0, gate_polynomial, m=6, k=5)


@pytest.fixture(scope="module")
def gate_example_domain():
    return slice_domain(12, 5)


@pytest.fixture(scope="module")
def gate_example_table(gate_example, gate_example_domain):
    return truth_table(gate_example, gate_example_domain)


@pytest.fixture(scope="module")
def rng():
    return random.Random(20240611)
