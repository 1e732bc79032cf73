"""Exact univariate polynomial helpers

Polynomials are ``UnivariatePoly`` records holding ``Fraction``
coefficients, lowest degree first, with trailing zeros stripped. Every
operation is exact; there is no floating point anywhere in this module.
"""
from fractions import Fraction
from itertools import islice
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from slicekit.types import UnivariatePoly

Number = Union[int, Fraction]


def normalize(coefficients: Iterable[Number]) -> Tuple[Fraction, ...]:
    coeffs = [Fraction(c) for c in coefficients]
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def univariate(coefficients: Iterable[Number]) -> UnivariatePoly:
    return UnivariatePoly(normalize(coefficients))


ZERO = univariate([])
ONE = univariate([1])


def poly_add(p: UnivariatePoly, q: UnivariatePoly) -> UnivariatePoly:
    a, b = list(p.coefficients), list(q.coefficients)
    if len(a) < len(b):
        a, b = b, a
    for i, c in enumerate(b):
        a[i] += c
    return univariate(a)


def poly_scale(p: UnivariatePoly, factor: Number) -> UnivariatePoly:
    return univariate(c * factor for c in p.coefficients)


def poly_sub(p: UnivariatePoly, q: UnivariatePoly) -> UnivariatePoly:
    return poly_add(p, poly_scale(q, -1))


def poly_mul(p: UnivariatePoly, q: UnivariatePoly) -> UnivariatePoly:
    if not p.coefficients or not q.coefficients:
        return ZERO
    res = [Fraction(0)] * (len(p.coefficients) + len(q.coefficients) - 1)
    for i, a in enumerate(p.coefficients):
        for j, b in enumerate(q.coefficients):
            res[i + j] += a * b
    return univariate(res)


def evaluate(p: UnivariatePoly, x: Number) -> Fraction:
    """Horner evaluation of p at x, exact."""
    value = Fraction(0)
    for c in reversed(p.coefficients):
        value = value * x + c
    return value


def is_constant(p: UnivariatePoly) -> bool:
    return len(p.coefficients) <= 1


def interpolate(points: Sequence[Tuple[int, Number]]) -> UnivariatePoly:
    """
    Lagrange interpolation through integer abscissae with exact rational values.

    Parameters
    ----------
    points : Sequence[Tuple[int, Number]]
        (abscissa, value) pairs with pairwise distinct abscissae

    Returns
    ----------
    UnivariatePoly
        the unique polynomial of degree < len(points) through every point
    """
    if not points:
        raise ValueError("degenerate interpolation input: no points")
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError(f"degenerate interpolation input: repeated abscissa in {xs}")

    result = ZERO
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        basis = ONE
        denominator = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = poly_mul(basis, univariate([-xj, 1]))
            denominator *= xi - xj
        result = poly_add(result, poly_scale(basis, Fraction(yi) / denominator))
    return result


def forward_differences(values: Sequence[Number]) -> List[Fraction]:
    """Delta^j v(0) for j = 0..len(values)-1."""
    row = [Fraction(v) for v in values]
    diffs = []
    while row:
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return diffs


def binomial_basis(p: UnivariatePoly) -> List[Fraction]:
    """
    Coefficients of p in the basis C(y, j): p(y) = sum_j Delta^j p(0) * C(y, j).

    On 0/1 inputs C(x_1 + ... + x_m, j) is the elementary symmetric
    polynomial of degree j, which is how the gate constructions expand
    p(sum of x) into a multilinear polynomial.
    """
    return forward_differences([evaluate(p, w) for w in range(p.degree + 1)])


def continue_values(values: Sequence[Number]) -> Iterator[Number]:
    """
    Yield the values at len(values), len(values)+1, ... of the polynomial of
    degree below len(values) taking the given values at 0..len(values)-1.

    The top difference of the table is constant, so each step needs
    additions only and integer input stays integer.
    """
    if not values:
        raise ValueError("cannot continue an empty value list")
    # right edge of the difference table: v_last, Delta v, Delta^2 v, ...
    diagonal = []
    row = list(values)
    while row:
        diagonal.append(row[-1])
        row = [b - a for a, b in zip(row, row[1:])]
    while True:
        for j in range(len(diagonal) - 2, -1, -1):
            diagonal[j] += diagonal[j + 1]
        yield diagonal[0]


def extend_by_differences(values: Sequence[Number], upto: int) -> List[Number]:
    """Values at 0..upto of the polynomial through the given values at 0..len-1."""
    extra = max(upto + 1 - len(values), 0)
    return (list(values) + list(islice(continue_values(values), extra)))[: upto + 1]


def step_polynomial(a: Number, b: Number, d: int) -> UnivariatePoly:
    """
    P(x) = a + (b - a) * prod_{i<d} (x - i) / (d - i).

    P(0) = ... = P(d-1) = a and P(d) = b, so for a != b it is a non-constant
    degree-d polynomial whose first d+1 values lie in {a, b}.
    """
    product = ONE
    for i in range(d):
        product = poly_mul(product, poly_scale(univariate([-i, 1]), Fraction(1, d - i)))
    return poly_add(univariate([a]), poly_scale(product, Fraction(b) - Fraction(a)))
