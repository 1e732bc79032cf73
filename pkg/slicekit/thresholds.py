"""Junta thresholds W(A,d), k(A,d) and kappa(A,d)

W(A,d) is the least W such that every polynomial P of degree at most d
with P(0), ..., P(W) in A is constant. The junta threshold k(A,d) is
derived from the W values for s = 1..d, and kappa(A,d) is the same
threshold evaluated through its three-condition definition. Both are
computed independently so that a table build cross-checks them.

The witness search works on A scaled to integers: P(0..L) in A is
invariant under scaling A and P together, and for integer values the
difference table stays integral.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from slicekit import ratpoly
from slicekit.errors import InconsistencyError
from slicekit.logging_config import logging
from slicekit.types import ThresholdRow, UnivariatePoly, ValueSet

log = logging.getLogger(__name__)
log.setLevel(logging.DEBUG)


def value_set(elements: Iterable[Union[int, Fraction, str]]) -> ValueSet:
    values = sorted({Fraction(a) for a in elements})
    if len(values) < 2:
        raise ValueError(f"a value set needs at least two elements, got {values}")
    return ValueSet(tuple(values))


def _scaled(A: ValueSet) -> Tuple[int, Tuple[int, ...]]:
    scale = lcm(*(a.denominator for a in A.elements))
    return scale, tuple(int(a * scale) for a in A.elements)


@lru_cache(maxsize=256)
def _witness_runs(A: ValueSet, d: int) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
    """
    Run lengths of every non-constant value tuple in A^(d+1).

    Each tuple v fixes the polynomial P of degree <= d with P(i) = v_i for
    i = 0..d. The run length is the largest L with P(0..L) in A. Tuples come
    in lexicographic order of A's sorted elements.
    """
    _, scaled = _scaled(A)
    members = frozenset(scaled)
    cap = A.size * d
    runs = []
    for values in product(scaled, repeat=d + 1):
        if len(set(values)) == 1:
            continue
        run = d
        for value in ratpoly.continue_values(values):
            if value not in members:
                break
            run += 1
            if run >= cap:
                raise InconsistencyError(
                    f"non-constant degree-{d} polynomial with values {values} stays in "
                    f"{A} on 0..{cap}, contradicting the pigeonhole bound"
                )
        runs.append((run, values))
    log.debug(f"Scanned {len(runs)} non-constant value tuples for A={A}, d={d}")
    return tuple(runs)


def find_nonconstant_witness(A: ValueSet, d: int, L: int) -> Optional[UnivariatePoly]:
    """
    Search for a non-constant P of degree at most d with P(0), ..., P(L) in A.

    Parameters
    ----------
    A : ValueSet
        value set
    d : int
        degree bound, d >= 1
    L : int
        last abscissa that has to map into A, L >= d

    Returns
    ----------
    Optional[UnivariatePoly]
        the lexicographically first certificate, or None if there is none
    """
    if d < 1:
        raise ValueError(f"degree must be at least 1, got {d}")
    if L < d:
        raise ValueError(f"L must be at least d, got L={L} < d={d}")
    scale, _ = _scaled(A)
    for run, values in _witness_runs(A, d):
        if run >= L:
            return ratpoly.interpolate(
                [(i, Fraction(v, scale)) for i, v in enumerate(values)]
            )
    return None


def witness_run_length(A: ValueSet, P: UnivariatePoly, cap: Optional[int] = None) -> int:
    """Largest L <= cap with P(0..L) in A, or -1 if P(0) is not in A."""
    if cap is None:
        cap = A.size * max(P.degree, 1)
    members = A.members
    run = -1
    for w in range(cap + 1):
        if ratpoly.evaluate(P, w) not in members:
            break
        run = w
    return run


@lru_cache(maxsize=256)
def compute_W(A: ValueSet, d: int) -> int:
    """Minimal W in [d+1, |A|d] admitting no non-constant witness."""
    for W in range(d + 1, A.size * d + 1):
        if find_nonconstant_witness(A, d, W) is None:
            log.debug(f"W({A},{d}) = {W}")
            return W
    raise InconsistencyError(f"W({A},{d}) exceeds |A|d = {A.size * d}")


def verify_W_bounds(A: ValueSet, d: int) -> int:
    """
    Check d < W(A,d) <= |A|d together with the certificate for the lower bound.

    The lower bound is witnessed by the step polynomial through two distinct
    elements of A, which takes values in A on 0..d.
    """
    W = compute_W(A, d)
    if not d < W <= A.size * d:
        raise InconsistencyError(f"W({A},{d}) = {W} outside ({d}, {A.size * d}]")
    step = ratpoly.step_polynomial(A.elements[0], A.elements[1], d)
    if witness_run_length(A, step, cap=d) < d:
        raise InconsistencyError(f"step polynomial {step} leaves {A} before {d}")
    return W


def compute_k(A: ValueSet, d: int) -> Tuple[int, Tuple[int, ...]]:
    """
    k(A,d) = d + max_{1<=s<=d} floor(d/s) * (W(A,s) - s).

    Returns
    ----------
    Tuple[int, Tuple[int, ...]]
        the threshold and every s attaining the maximum, ascending
    """
    if d < 1:
        raise ValueError(f"k(A,d) needs d >= 1, got {d}")
    candidates = {s: d + (d // s) * (compute_W(A, s) - s) for s in range(1, d + 1)}
    best = max(candidates.values())
    return best, tuple(s for s, value in candidates.items() if value == best)


def compute_kappa(A: ValueSet, d: int) -> int:
    """
    kappa(A,d) as the maximum of its three defining conditions:
    d + 1, e + W(A,d-e) over e < d, and d - rs + r W(A,s) over rs <= d.
    """
    if d < 1:
        raise ValueError(f"kappa(A,d) needs d >= 1, got {d}")
    gate = max(e + compute_W(A, d - e) for e in range(d))
    block = max(
        d - r * s + r * compute_W(A, s)
        for s in range(1, d + 1)
        for r in range(1, d // s + 1)
    )
    return max(d + 1, gate, block)


def boolean_threshold(d: int) -> int:
    return 2 * d


def longest_ap(A: ValueSet) -> int:
    """Length of the longest arithmetic progression contained in A."""
    members = A.members
    best = 2
    for i, a in enumerate(A.elements):
        for b in A.elements[i + 1 :]:
            step = b - a
            length = 2
            while a + length * step in members:
                length += 1
            best = max(best, length)
    return best


def is_arithmetic_progression(A: ValueSet) -> bool:
    return longest_ap(A) == A.size


def build_table(sets: Sequence[ValueSet], d_max: int) -> List[ThresholdRow]:
    """
    One ThresholdRow per (A, d) with d = 1..d_max, sets in input order.

    kappa is computed from its own formula and compared with k; a mismatch
    raises InconsistencyError with both values.
    """
    if d_max < 1:
        raise ValueError(f"d_max must be at least 1, got {d_max}")
    rows = []
    for A in sets:
        for d in range(1, d_max + 1):
            W = verify_W_bounds(A, d)
            k, attaining = compute_k(A, d)
            kappa = compute_kappa(A, d)
            if kappa != k:
                raise InconsistencyError(f"kappa({A},{d}) = {kappa} but k({A},{d}) = {k}")
            rows.append(ThresholdRow(A=A, d=d, W=W, k=k, kappa=kappa, attaining_s=attaining))
        log.info(f"Thresholds for A={A} up to d={d_max} computed")
    return rows


def rows_to_dataframe(rows: Sequence[ThresholdRow]) -> pd.DataFrame:
    """
    Render rows in the layout of a W / k table: one line per A, W columns
    for every d followed by k columns with the attaining s in brackets.
    """
    records: Dict[str, Dict[str, object]] = {}
    for row in rows:
        record = records.setdefault(str(row.A), {})
        record[f"W d={row.d}"] = row.W
    for row in rows:
        brackets = ",".join(str(s) for s in row.attaining_s)
        records[str(row.A)][f"k d={row.d}"] = f"{row.k} [{brackets}]"
    df = pd.DataFrame.from_dict(records, orient="index")
    df.index.name = "A"
    return df
