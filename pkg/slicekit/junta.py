"""Exact junta detection on the slice

A function on ( [n] choose k ) is a J-junta exactly when no transposition
of two coordinates outside J changes it: invariance under those swaps
makes f depend on x restricted to J alone, the weight outside J being
k minus the weight inside. Minimum juntas are therefore minimum vertex
covers of the sensitivity graph, found by branch and bound with a
matching lower bound.
"""
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import numpy as np

from slicekit.logging_config import logging
from slicekit.slice_core import colex_rank_array, mask_of, slice_points
from slicekit.types import JuntaReport, SensitivityGraph, SliceTable

log = logging.getLogger(__name__)
log.setLevel(logging.DEBUG)

Edge = Tuple[int, int]

EXHAUSTIVE_COVER_LIMIT = 12


def _value_codes(f: SliceTable) -> np.ndarray:
    codes: Dict[Fraction, int] = {}
    return np.array([codes.setdefault(v, len(codes)) for v in f.values], dtype=np.int64)


def sensitivity_graph(f: SliceTable) -> SensitivityGraph:
    """
    Edges {i, j} such that swapping x_i and x_j changes f at some point.

    Each unordered pair is scanned once over the points with x_i = 1 and
    x_j = 0; the first such point in canonical order that changes f is kept
    as the edge's witness.
    """
    n = f.domain.n
    points = slice_points(f.domain)
    codes = _value_codes(f)
    witnesses: Dict[Edge, int] = {}
    if codes.size and codes.max() > 0:
        for a, b in combinations(range(n), 2):
            selected = ((points >> a) & 1 == 1) & ((points >> b) & 1 == 0)
            if not selected.any():
                continue
            origin = points[selected]
            swapped = colex_rank_array(origin ^ ((1 << a) | (1 << b)), n)
            changed = np.flatnonzero(codes[selected] != codes[swapped])
            if changed.size:
                witnesses[(a + 1, b + 1)] = int(origin[changed[0]])
    log.debug(f"Sensitivity graph on {f.domain}: {len(witnesses)} edges")
    return SensitivityGraph(n=n, edges=frozenset(witnesses), witnesses=witnesses)


def _normalize(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


def is_junta_on(f: SliceTable, J: Iterable[int], graph: Optional[SensitivityGraph] = None) -> bool:
    J = set(J)
    if any(not 1 <= i <= f.domain.n for i in J):
        raise ValueError(f"J = {sorted(J)} is not a subset of [{f.domain.n}]")
    graph = graph or sensitivity_graph(f)
    return all(i in J or j in J for i, j in graph.edges)


def junta_function(f: SliceTable, J: Iterable[int]) -> Dict[int, Fraction]:
    """
    The function g with f(x) = g(x restricted to J), keyed by the mask of
    x restricted to J.
    """
    J = sorted(set(J))
    J_mask = mask_of(J)
    g: Dict[int, Fraction] = {}
    for x, value in zip(slice_points(f.domain), f.values):
        key = int(x) & J_mask
        if g.setdefault(key, value) != value:
            raise ValueError(f"f is not a J-junta for J = {J}: pattern {key} is ambiguous")
    return g


def greedy_matching(edges: Iterable[Edge]) -> List[Edge]:
    """Maximal matching taking edges in sorted order."""
    used: Set[int] = set()
    matching = []
    for i, j in sorted(edges):
        if i not in used and j not in used:
            used.update((i, j))
            matching.append((i, j))
    return matching


def _branch(
    edges: FrozenSet[Edge], chosen: Tuple[int, ...], best: List[Tuple[int, ...]]
) -> None:
    if not edges:
        if len(chosen) < len(best[0]):
            best[0] = chosen
        return
    if len(chosen) + len(greedy_matching(edges)) >= len(best[0]):
        return

    v = min(min(edge) for edge in edges)
    neighbours = sorted({j if i == v else i for i, j in edges if v in (i, j)})

    without_v = frozenset(edge for edge in edges if v not in edge)
    _branch(without_v, chosen + (v,), best)

    covered = set(neighbours)
    remaining = frozenset(edge for edge in edges if not covered.intersection(edge))
    _branch(remaining, chosen + tuple(neighbours), best)


def minimum_vertex_cover(graph: SensitivityGraph) -> Tuple[int, ...]:
    """
    Minimum vertex cover by branch and bound.

    Branching is on the lowest-index vertex v still touching an edge: either
    v joins the cover or all of its neighbours do. A branch is cut when the
    size of a greedy matching on the remaining edges cannot beat the best
    cover found so far.
    """
    matching = greedy_matching(graph.edges)
    start = tuple(sorted({v for edge in matching for v in edge}))
    best = [start]
    _branch(frozenset(graph.edges), (), best)
    return tuple(sorted(best[0]))


def exhaustive_vertex_cover(graph: SensitivityGraph) -> Tuple[int, ...]:
    """Smallest cover by trying all vertex sets in increasing size, n <= 12."""
    if graph.n > EXHAUSTIVE_COVER_LIMIT:
        raise ValueError(f"exhaustive cover is limited to n <= {EXHAUSTIVE_COVER_LIMIT}")
    for size in range(graph.n + 1):
        for candidate in combinations(range(1, graph.n + 1), size):
            chosen = set(candidate)
            if all(i in chosen or j in chosen for i, j in graph.edges):
                return candidate
    raise AssertionError("the full vertex set is always a cover")


def minimum_junta(f: SliceTable, graph: Optional[SensitivityGraph] = None) -> JuntaReport:
    graph = graph or sensitivity_graph(f)
    witness = minimum_vertex_cover(graph)
    certificate = {edge: graph.witnesses[edge] for edge in greedy_matching(graph.edges)}
    log.debug(f"Minimum junta on {f.domain}: {len(witness)} coordinates {list(witness)}")
    return JuntaReport(min_size=len(witness), witness=witness, certificate_pairs=certificate)


def junta_lower_bound(
    f: SliceTable,
    I: Iterable[int],
    J: Iterable[int],
    graph: Optional[SensitivityGraph] = None,
) -> int:
    """
    min(|I|, |J|) when every pair in I x J is a sensitivity edge, else 0.

    Any junta has to contain all of I or all of J in that case.
    """
    I, J = set(I), set(J)
    if I & J:
        raise ValueError(f"I and J must be disjoint, both contain {sorted(I & J)}")
    graph = graph or sensitivity_graph(f)
    for i in I:
        for j in J:
            if _normalize(i, j) not in graph.edges:
                return 0
    return min(len(I), len(J))
