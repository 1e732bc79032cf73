"""Functions on the slice

Points of ( [n] choose k ) are integer bitmasks with coordinate i stored in
bit i-1, so increasing mask order is colex order on the 1-sets. Whole-slice
work (evaluation, ranking, degree tests) runs on numpy int64 arrays of
masks; coefficients and values are scaled to integers by the lcm of their
denominators, which keeps every step exact.
"""
import os
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from slicekit.errors import DegreeError, DomainTooLargeError
from slicekit.logging_config import logging
from slicekit.types import MultilinearPoly, RawPoly, SliceDomain, SliceTable, ValueSet

log = logging.getLogger(__name__)
log.setLevel(logging.DEBUG)

Number = Union[int, Fraction]

DEFAULT_MAX_TABLE = 10**6
MAX_COORDINATES = 62
RANK_PATH_LIMIT = 64
MAX_TABLE_ENV = "SLICEKIT_MAX_TABLE"


def max_table_size() -> int:
    """Domain size guard, overridable through SLICEKIT_MAX_TABLE."""
    override = os.environ.get(MAX_TABLE_ENV)
    if override is None:
        return DEFAULT_MAX_TABLE
    try:
        limit = int(override)
    except ValueError:
        raise ValueError(f"{MAX_TABLE_ENV} must be an integer, got {override!r}")
    log.warning(f"Domain size guard overridden to {limit} by {MAX_TABLE_ENV}")
    return limit


def slice_domain(n: int, k: int) -> SliceDomain:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if k > n:
        raise ValueError(f"k > n: k={k}, n={n}")
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return SliceDomain(n=n, k=k)


def check_domain(dom: SliceDomain) -> None:
    """Validate dom and refuse slices too large to tabulate."""
    slice_domain(dom.n, dom.k)
    if dom.n > MAX_COORDINATES:
        raise DomainTooLargeError("number of coordinates", dom.n, MAX_COORDINATES)
    limit = max_table_size()
    if dom.size > limit:
        raise DomainTooLargeError(f"C({dom.n},{dom.k}) points on {dom}", dom.size, limit)


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"variable indices are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


def indices_of(mask: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets_of_size(n: int, size: int) -> List[int]:
    """All size-subsets of [n] as masks, in colex order."""
    return sorted(mask_of(c) for c in combinations(range(1, n + 1), size))


@lru_cache(maxsize=32)
def _points(n: int, k: int) -> np.ndarray:
    masks = np.array(subsets_of_size(n, k), dtype=np.int64)
    masks.setflags(write=False)
    return masks


def slice_points(dom: SliceDomain) -> np.ndarray:
    """Read-only int64 array of the points of dom in canonical order."""
    check_domain(dom)
    return _points(dom.n, dom.k)


def colex_rank(mask: int) -> int:
    """Position of mask among the points of its slice in canonical order."""
    rank = 0
    for t, position in enumerate(i - 1 for i in indices_of(mask)):
        rank += comb(position, t + 1)
    return rank


@lru_cache(maxsize=None)
def _binomials(n: int) -> np.ndarray:
    table = np.zeros((n + 1, n + 2), dtype=np.int64)
    for i in range(n + 1):
        for t in range(i + 2):
            table[i, t] = comb(i, t)
    return table


def colex_rank_array(masks: np.ndarray, n: int) -> np.ndarray:
    """Vectorised colex_rank for an array of same-weight masks on n coordinates."""
    binomials = _binomials(n)
    masks = np.asarray(masks, dtype=np.int64)
    ranks = np.zeros(masks.shape, dtype=np.int64)
    seen = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        bit = (masks >> i) & 1
        seen += bit
        ranks += bit * binomials[i, seen]
    return ranks


def multilinear(n: int, terms: Dict[int, Number]) -> MultilinearPoly:
    """MultilinearPoly from a mask -> coefficient map, zeros dropped."""
    cleaned = {}
    for mask, c in terms.items():
        if mask < 0 or mask >> n:
            raise ValueError(f"monomial {indices_of(mask)} outside [{n}]")
        if c != 0:
            cleaned[mask] = Fraction(c)
    return MultilinearPoly(n=n, terms=cleaned)


def multilinearize(P: RawPoly, n: Optional[int] = None) -> MultilinearPoly:
    """
    Replace every power x_i^p, p >= 1, by x_i and collect terms.

    Parameters
    ----------
    P : RawPoly
        parsed polynomial, repeated indices standing for powers
    n : Optional[int]
        number of variables, defaults to the largest index used

    Returns
    ----------
    MultilinearPoly
        agrees with P on every 0/1 input
    """
    largest = max((max(idx) for _, idx in P.terms if idx), default=0)
    if n is None:
        n = max(largest, 1)
    if largest > n:
        raise ValueError(f"variable x{{{largest}}} outside [{n}]")
    terms: Dict[int, Fraction] = {}
    for coefficient, idx in P.terms:
        mask = mask_of(idx)
        terms[mask] = terms.get(mask, Fraction(0)) + coefficient
    return multilinear(n, terms)


def evaluate_on_point(P: MultilinearPoly, x: int) -> Fraction:
    if x < 0 or x >> P.n:
        raise ValueError(f"point {indices_of(x)} does not live on {P.n} coordinates")
    value = Fraction(0)
    for mask, c in P.terms.items():
        if mask & x == mask:
            value += c
    return value


def _scale(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


def evaluate_all(P: MultilinearPoly, dom: SliceDomain) -> Tuple[Fraction, ...]:
    """
    Values of P at every point of dom, canonical order, exact.

    Coefficients are scaled to integers and accumulated with one vectorised
    subset test per monomial; int64 is used when the coefficient mass fits,
    python integers otherwise.
    """
    if P.n != dom.n:
        raise ValueError(f"polynomial on {P.n} variables evaluated on {dom}")
    points = slice_points(dom)
    scale = _scale(P.terms.values())
    scaled = {mask: int(c * scale) for mask, c in P.terms.items()}
    mass = sum(abs(c) for c in scaled.values())
    dtype = np.int64 if mass < 2**62 else object
    acc = np.zeros(len(points), dtype=dtype)
    for mask, c in scaled.items():
        if popcount(mask) > dom.k:
            continue
        hit = (points & mask) == mask
        acc[hit] += c
    return tuple(Fraction(int(v), scale) for v in acc)


def truth_table(P: MultilinearPoly, dom: SliceDomain) -> SliceTable:
    return SliceTable(domain=dom, values=evaluate_all(P, dom))


def table_from_values(dom: SliceDomain, values: Sequence[Number]) -> SliceTable:
    check_domain(dom)
    if len(values) != dom.size:
        raise ValueError(f"{dom} has {dom.size} points, got {len(values)} values")
    return SliceTable(domain=dom, values=tuple(Fraction(v) for v in values))


def table_from_function(dom: SliceDomain, f: Callable[[int], Number]) -> SliceTable:
    return table_from_values(dom, [f(int(x)) for x in slice_points(dom)])


def value_at(f: SliceTable, x: int) -> Fraction:
    if x < 0 or x >> f.domain.n or popcount(x) != f.domain.k:
        raise ValueError(f"{indices_of(x)} is not a point of {f.domain}")
    return f.values[colex_rank(x)]


def scaled_values(f: SliceTable) -> Tuple[int, np.ndarray]:
    """(scale, integer values) with values == scale * f.values."""
    scale = _scale(f.values)
    ints = [int(v * scale) for v in f.values]
    dtype = np.int64 if max(abs(v) for v in ints) < 2**32 else object
    return scale, np.array(ints, dtype=dtype)


def homogenize(P: MultilinearPoly, dom: SliceDomain, d: int) -> MultilinearPoly:
    """
    Rewrite P with monomials of degree exactly d, valid on dom.

    On the slice x_S = sum_{S <= T, |T| = d} x_T / C(k-|S|, d-|S|).
    """
    if P.n != dom.n:
        raise ValueError(f"polynomial on {P.n} variables homogenized on {dom}")
    if dom.k < d:
        raise ValueError(f"slice too small to homogenize: k={dom.k} < d={d}")
    if dom.n < d:
        raise ValueError(f"slice too small to homogenize: n={dom.n} < d={d}")
    if P.degree > d:
        raise DegreeError(f"degree exceeds target: {P.degree} > {d}")

    coeffs: Dict[int, Fraction] = {}
    for mask, c in P.terms.items():
        size = popcount(mask)
        share = c / comb(dom.k - size, d - size)
        outside = [i for i in range(1, dom.n + 1) if not mask >> (i - 1) & 1]
        for extra in combinations(outside, d - size):
            T = mask | mask_of(extra)
            coeffs[T] = coeffs.get(T, Fraction(0)) + share
    return multilinear(dom.n, coeffs)


def _evaluation_matrix(n: int, k: int, d: int) -> List[List[int]]:
    points = subsets_of_size(n, k)
    monomials = subsets_of_size(n, d)
    return [[1 if mask & x == mask else 0 for mask in monomials] for x in points]


@lru_cache(maxsize=None)
def degree_annihilator(n: int, k: int, d: int) -> np.ndarray:
    """
    Integer rows y with y . f = 0 exactly for the tables f of degree <= d.

    Rows span the left nullspace of the points x C(n,d) evaluation matrix
    of degree-d monomials, which spans all degree <= d functions when
    d <= k. Nullspace computed over QQ with sympy.
    """
    if d > k:
        raise ValueError(f"annihilator needs d <= k, got d={d}, k={k}")
    rows = _evaluation_matrix(n, k, d)
    size = len(rows)
    transposed = sympy.Matrix(rows).T
    kernel = DomainMatrix.from_Matrix(transposed).convert_to(sympy.QQ).nullspace()
    basis = kernel.to_Matrix()
    if basis.rows and basis.cols != size:
        basis = basis.T

    vectors = []
    for r in range(basis.rows):
        entries = [Fraction(int(e.p), int(e.q)) for e in basis.row(r)]
        scale = _scale(entries)
        vectors.append([int(e * scale) for e in entries])
    log.debug(f"Annihilator for degree {d} on ([{n}] choose {k}): {len(vectors)} rows")
    annihilator = np.array(vectors, dtype=object).reshape(len(vectors), size)
    if annihilator.size == 0 or np.abs(annihilator).max() < 2**20:
        annihilator = annihilator.astype(np.int64)
    annihilator.setflags(write=False)
    return annihilator


def _is_constant(f: SliceTable) -> bool:
    return len(set(f.values)) <= 1


def has_degree_at_most(f: SliceTable, d: int) -> bool:
    """
    Exact test whether f agrees on its slice with a polynomial of degree <= d.

    Small slices use the annihilator of the degree <= d space; larger ones
    extract the unique homogeneous expansion and check that it reproduces f.
    """
    n, k = f.domain
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    if d == 0:
        return _is_constant(f)
    if d >= min(k, n - k):
        return True
    if f.domain.size <= RANK_PATH_LIMIT:
        annihilator = degree_annihilator(n, k, d)
        _, values = scaled_values(f)
        return not np.any(annihilator.dot(values))

    from slicekit.recovery import extract_coefficients

    try:
        extract_coefficients(f, f.domain, d)
    except DegreeError:
        return False
    return True


def slice_degree(f: SliceTable) -> int:
    """Least d with has_degree_at_most(f, d)."""
    d = 0
    while not has_degree_at_most(f, d):
        d += 1
    log.debug(f"Slice degree {d} on {f.domain}")
    return d


def is_A_valued(f: SliceTable, A: ValueSet) -> Tuple[bool, Optional[int]]:
    """(True, None), or (False, first point whose value is not in A)."""
    members = A.members
    for rank, value in enumerate(f.values):
        if value not in members:
            return False, int(_points(f.domain.n, f.domain.k)[rank])
    return True, None


def dual(f: SliceTable) -> SliceTable:
    """The function x -> f(1 - x) on ( [n] choose n-k )."""
    n, k = f.domain
    target = slice_domain(n, n - k)
    complements = slice_points(target) ^ ((1 << n) - 1)
    ranks = colex_rank_array(complements, n)
    return SliceTable(domain=target, values=tuple(f.values[r] for r in ranks))


def degeneracy_polynomial(C: Number, d: int, n: int) -> MultilinearPoly:
    """C * prod_{i<=d} (1 - x_i), which vanishes on every slice with n - k < d."""
    if d > n:
        raise ValueError(f"need d <= n, got d={d}, n={n}")
    terms = {}
    for size in range(d + 1):
        for T in combinations(range(1, d + 1), size):
            terms[mask_of(T)] = Fraction(C) * (-1) ** size
    return multilinear(n, terms)
