"""Recovering structure from homogeneous expansions

The pipeline runs in three exact stages:

1. ``extract_coefficients`` reads the unique degree-d homogeneous expansion
   of a table off sums of table values, solving a small lower-triangular
   system per size-d set.
2. ``bunching_assign`` extends the coefficients to all sets of size below d
   by plurality vote over one-element extensions.
3. ``sparsify`` subtracts lower levels from higher ones, producing a
   mixed-degree representation whose support is small when the function
   is a junta.
"""
from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from slicekit.errors import DegreeError
from slicekit.logging_config import logging
from slicekit.slice_core import (
    colex_rank_array,
    indices_of,
    mask_of,
    multilinear,
    popcount,
    scaled_values,
    subsets_of_size,
    table_from_function,
    truth_table,
)
from slicekit.types import (
    HomogeneousExpansion,
    LayeredCoefficients,
    MultilinearPoly,
    SliceDomain,
    SliceTable,
    SparseRepresentation,
)

log = logging.getLogger(__name__)
log.setLevel(logging.DEBUG)

EXTRACTION_CHUNK = 512


def transfer_matrix(k: int, d: int) -> np.ndarray:
    """
    Lower-triangular matrix linking the sums h(e) to the level sums gamma(e').

    Fix a size-d set S, a disjoint size-k set I and a size-d set T inside
    S u I with |T n S| = e'. M[e][e'] counts the pairs (S', I') with S' a
    size-e subset of S, I' a size-(k-e) subset of I and T inside S' u I'.

    Parameters
    ----------
    k : int
        slice weight
    d : int
        degree, 0 <= d <= k

    Returns
    ----------
    np.ndarray
        (d+1) x (d+1) object array of python integers
    """
    if d < 0 or k < d:
        raise ValueError(f"transfer matrix needs 0 <= d <= k, got k={k}, d={d}")
    M = np.zeros((d + 1, d + 1), dtype=object)
    for e in range(d + 1):
        for e_prime in range(e + 1):
            outside = (k - e) - (d - e_prime)
            if outside < 0:
                continue
            M[e, e_prime] = comb(d - e_prime, e - e_prime) * comb(k - d + e_prime, outside)
    return M


def _solve_lower(M: np.ndarray, h: Sequence[int]) -> List[Fraction]:
    gamma: List[Fraction] = []
    for e in range(len(h)):
        rest = sum((M[e, j] * gamma[j] for j in range(e)), Fraction(0))
        gamma.append((h[e] - rest) / M[e, e])
    return gamma


def _slot_bits(S: int, order: Sequence[int], k: int) -> List[int]:
    """Bits of S in order, followed by the bits of the first k coordinates of order outside S."""
    inside = [1 << (i - 1) for i in indices_of(S)]
    outside = [1 << (i - 1) for i in order if not S >> (i - 1) & 1][:k]
    return inside + outside


def expansion_polynomial(E: HomogeneousExpansion) -> MultilinearPoly:
    return multilinear(E.n, E.coeffs)


def extract_coefficients(
    f: Union[SliceTable, Callable[[int], Fraction]],
    dom: SliceDomain,
    d: int,
    outside: Optional[Sequence[int]] = None,
) -> HomogeneousExpansion:
    """
    Recover the homogeneous degree-d expansion of f on dom.

    For every size-d set S, I is made of the first k coordinates of outside
    not in S (the k lowest by default). h(e) sums f over the points S' u I'
    with S' a size-e subset of S and I' a size-(k-e) subset of I.
    Solving M gamma = h gives c(S) = gamma(d).
    The result is checked against f on the whole slice.

    Raises
    ----------
    ValueError
        if n < k + d or k < d, or outside is not an ordering of 1..n
    DegreeError
        if the recovered expansion does not reproduce f
    """
    if not isinstance(f, SliceTable):
        f = table_from_function(dom, f)
    elif f.domain != dom:
        raise ValueError(f"table lives on {f.domain}, not on {dom}")
    n, k = dom
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    if k < d:
        raise ValueError(f"extraction requires k >= d, got k={k}, d={d}")
    if n < k + d:
        raise ValueError(f"extraction requires n ≥ k + d, got n={n}, k={k}, d={d}")
    order = list(range(1, n + 1)) if outside is None else list(outside)
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"outside must order the coordinates 1..{n}, got {order}")

    M = transfer_matrix(k, d)
    scale, values = scaled_values(f)

    patterns = list(combinations(range(d + k), k))
    pattern_matrix = np.zeros((len(patterns), d + k), dtype=np.int64)
    for row, slots in enumerate(patterns):
        pattern_matrix[row, list(slots)] = 1
    levels = pattern_matrix[:, :d].sum(axis=1)
    level_matrix = np.zeros((len(patterns), d + 1), dtype=np.int64)
    level_matrix[np.arange(len(patterns)), levels] = 1

    sets = subsets_of_size(n, d)
    coeffs: Dict[int, Fraction] = {}
    for start in range(0, len(sets), EXTRACTION_CHUNK):
        chunk = sets[start : start + EXTRACTION_CHUNK]
        slot_bits = np.array([_slot_bits(S, order, k) for S in chunk], dtype=np.int64)
        masks = slot_bits @ pattern_matrix.T
        h = values[colex_rank_array(masks, n)].dot(level_matrix)
        for S, row in zip(chunk, h):
            gamma = _solve_lower(M, [int(v) for v in row])
            if gamma[d] != 0:
                coeffs[S] = gamma[d] / scale

    expansion = HomogeneousExpansion(n=n, k=k, d=d, coeffs=coeffs)
    if truth_table(expansion_polynomial(expansion), dom).values != f.values:
        raise DegreeError(f"input exceeds stated degree {d} on {dom}")
    log.debug(f"Extracted {len(coeffs)} nonzero degree-{d} coefficients on {dom}")
    return expansion


def bunching_assign(E: HomogeneousExpansion) -> LayeredCoefficients:
    """
    Give every set T with |T| < d the plurality value of c(T u {i}), i not in T.

    Levels are filled from d-1 down to 0; ties go to the smallest value.
    """
    n, d = E.n, E.d
    c: Dict[int, Fraction] = dict(E.coeffs)
    for level in range(d - 1, -1, -1):
        for T in subsets_of_size(n, level):
            votes = Counter(
                c.get(T | (1 << i), Fraction(0)) for i in range(n) if not T >> i & 1
            )
            if not votes:
                continue
            top = max(votes.values())
            value = min(v for v, count in votes.items() if count == top)
            if value != 0:
                c[T] = value
    return LayeredCoefficients(n=n, k=E.k, d=d, c=c)


def sparsify(L: LayeredCoefficients) -> SparseRepresentation:
    """
    Apply c_{e+1}(S) = c_e(S) - sum_{T <= S, |T| = e} c_e(T) for |S| > e,
    e = 0..d-1, then scale C(S) = C(k-|S|, d-|S|) c_d(S).
    """
    n, k, d = L.n, L.k, L.d
    current: Dict[int, Fraction] = dict(L.c)
    for e in range(d):
        stage = {S: v for S, v in current.items() if popcount(S) <= e}
        for size in range(e + 1, d + 1):
            for S in subsets_of_size(n, size):
                lower = sum(
                    (current.get(mask_of(T), Fraction(0)) for T in combinations(indices_of(S), e)),
                    Fraction(0),
                )
                value = current.get(S, Fraction(0)) - lower
                if value != 0:
                    stage[S] = value
        current = stage

    C = {S: comb(k - popcount(S), d - popcount(S)) * v for S, v in current.items()}
    C = {S: v for S, v in C.items() if v != 0}
    support = frozenset(i for S in C for i in indices_of(S))
    return SparseRepresentation(n=n, k=k, d=d, C=C, support=support)


def support_variables(S: SparseRepresentation) -> frozenset:
    return frozenset(i for mask, c in S.C.items() if c != 0 for i in indices_of(mask))


def exception_counts(L: LayeredCoefficients) -> Dict[int, int]:
    """Per level l < d, the most i with c(T u {i}) != c(T) over |T| = l."""
    counts = {}
    for level in range(L.d):
        worst = 0
        for T in subsets_of_size(L.n, level):
            value = L.c.get(T, Fraction(0))
            exceptions = sum(
                1
                for i in range(L.n)
                if not T >> i & 1 and L.c.get(T | (1 << i), Fraction(0)) != value
            )
            worst = max(worst, exceptions)
        counts[level] = worst
    return counts


def local_sparsity(S: SparseRepresentation) -> int:
    """The most i with C(T u {i}) != 0 over sets T with |T| < d."""
    worst = 0
    for level in range(S.d):
        for T in subsets_of_size(S.n, level):
            extensions = sum(
                1 for i in range(S.n) if not T >> i & 1 and S.C.get(T | (1 << i), 0) != 0
            )
            worst = max(worst, extensions)
    return worst


def recover_sparse(f: SliceTable, d: int) -> SparseRepresentation:
    expansion = extract_coefficients(f, f.domain, d)
    layered = bunching_assign(expansion)
    sparse = sparsify(layered)
    log.info(
        f"Sparse representation on {f.domain}, degree {d}: {len(sparse.C)} terms, "
        f"support {sorted(sparse.support)}"
    )
    return sparse


def evaluate_sparse(S: SparseRepresentation, dom: SliceDomain) -> SliceTable:
    if (S.n, S.k) != tuple(dom):
        raise ValueError(f"representation for ([{S.n}] choose {S.k}) evaluated on {dom}")
    return truth_table(multilinear(S.n, S.C), dom)
