"""Non-junta families below the junta threshold

For k < k(A,d) one of three families gives, for every m, an A-valued
degree <= d function on a slice that is not an (m-1)-junta:

* block_sum: a + (b-a) * sum_i x_{B_i} over m disjoint blocks of size k,
  used when k <= d,
* gate: a(1 - x_G) + x_G * P(x_{e+1} + ... + x_{e+m}) with G = {1..e},
* block_gate: as gate, with P applied to the number of complete blocks of
  size r among m blocks.

P(sum) is expanded through P(y) = sum_j Delta^j P(0) C(y, j) and
C(x_1 + ... + x_m, j) = sum_{|T|=j} x_T on 0/1 inputs.

Every family comes with explicit disjoint sets I, J such that each pair
in I x J is swapped by some point of the slice, which keeps the function
from being a junta on fewer than min(|I|, |J|) coordinates.
"""
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

from slicekit import ratpoly
from slicekit.errors import (
    ConstructionError,
    InconsistencyError,
    NoCounterexampleError,
    NotAValuedError,
)
from slicekit.junta import junta_lower_bound, minimum_junta, sensitivity_graph
from slicekit.logging_config import logging
from slicekit.slice_core import (
    evaluate_on_point,
    is_A_valued,
    mask_of,
    multilinear,
    slice_degree,
    slice_domain,
    table_from_values,
    truth_table,
)
from slicekit.thresholds import compute_k, find_nonconstant_witness
from slicekit.types import (
    CertificateReport,
    CounterexampleSpec,
    MultilinearPoly,
    SliceTable,
    UnivariatePoly,
    ValueSet,
)

log = logging.getLogger(__name__)
log.setLevel(logging.DEBUG)

Number = Union[int, Fraction]


def _block(start: int, size: int) -> int:
    """Mask of the coordinates start+1, ..., start+size."""
    return mask_of(range(start + 1, start + size + 1))


def construct_block_sum(a: Number, b: Number, k: int, m: int) -> MultilinearPoly:
    """
    a + (b - a) * sum_{i=1}^m x_{(i-1)k+1, ..., ik} on n = 2km coordinates.

    On ( [2km] choose k ) at most one block is complete, so the function
    is b on the m block points and a elsewhere.
    """
    a, b = Fraction(a), Fraction(b)
    if a == b:
        raise ConstructionError(f"degenerate construction: a = b = {a}")
    if k < 1 or m < 1:
        raise ConstructionError(f"block sum needs k, m >= 1, got k={k}, m={m}")
    terms: Dict[int, Fraction] = {0: a}
    for i in range(m):
        terms[_block(i * k, k)] = b - a
    return multilinear(2 * k * m, terms)


def construct_interleaved_block_sum(a: Number, b: Number, k: int, m: int) -> MultilinearPoly:
    """
    Block sum with block i = {2(i-1)k + 2, 2(i-1)k + 4, ..., 2ik} on n = 2km.

    Finite truncation of the family used on the infinite slice: blocks sit
    on even coordinates, odd coordinates are free.
    """
    a, b = Fraction(a), Fraction(b)
    if a == b:
        raise ConstructionError(f"degenerate construction: a = b = {a}")
    if k < 1 or m < 1:
        raise ConstructionError(f"block sum needs k, m >= 1, got k={k}, m={m}")
    terms: Dict[int, Fraction] = {0: a}
    for i in range(m):
        terms[mask_of(2 * i * k + 2 * j for j in range(1, k + 1))] = b - a
    return multilinear(2 * k * m, terms)


def _check_gate_polynomial(A: ValueSet, a: Fraction, P: UnivariatePoly, upto: int) -> None:
    if a not in A.members:
        raise ConstructionError(f"gate value {a} is not in {A}")
    if ratpoly.is_constant(P):
        raise ConstructionError(f"gate polynomial {P} is constant")
    for w in range(upto + 1):
        value = ratpoly.evaluate(P, w)
        if value not in A.members:
            raise ConstructionError(f"P(w) ∉ A at w = {w}: P({w}) = {value}, A = {A}")


def _gated_terms(a: Fraction, gate: int, P: UnivariatePoly, blocks: List[int]) -> Dict[int, Fraction]:
    terms: Dict[int, Fraction] = {0: a}
    terms[gate] = terms.get(gate, Fraction(0)) - a
    for j, delta in enumerate(ratpoly.binomial_basis(P)):
        if delta == 0:
            continue
        for chosen in combinations(blocks, j):
            mask = gate
            for block in chosen:
                mask |= block
            terms[mask] = terms.get(mask, Fraction(0)) + delta
    return terms


def construct_gate(
    A: ValueSet,
    a: Number,
    e: int,
    P: UnivariatePoly,
    m: int,
    k: int,
    d: Optional[int] = None,
) -> MultilinearPoly:
    """
    a(1 - x_{1..e}) + x_{1..e} P(x_{e+1} + ... + x_{e+m}) on n = e + 2m.

    Parameters
    ----------
    A : ValueSet
        value set, must contain a and P(0), ..., P(k-e)
    a : Number
        value away from the gate
    e : int
        gate size, 0 <= e (and e <= d-1 when d is given)
    P : UnivariatePoly
        non-constant, degree <= d-e when d is given
    m : int
        number of summed coordinates, m >= k-e
    k : int
        slice weight
    d : Optional[int]
        degree bound to check against

    Returns
    ----------
    MultilinearPoly
        A-valued on ( [e+2m] choose k ), degree e + deg(P)
    """
    a = Fraction(a)
    if e < 0 or e > k:
        raise ConstructionError(f"gate size e={e} outside [0, k={k}]")
    if d is not None and (e > d - 1 or P.degree > d - e):
        raise ConstructionError(f"gate e={e} with deg P={P.degree} exceeds degree {d}")
    if m < k - e:
        raise ConstructionError(f"gate needs m >= k - e = {k - e}, got m={m}")
    _check_gate_polynomial(A, a, P, k - e)
    gate = _block(0, e)
    blocks = [1 << (e + i) for i in range(m)]
    return multilinear(e + 2 * m, _gated_terms(a, gate, P, blocks))


def construct_block_gate(
    A: ValueSet,
    a: Number,
    t: int,
    r: int,
    P: UnivariatePoly,
    m: int,
    k: int,
    d: Optional[int] = None,
) -> MultilinearPoly:
    """
    a(1 - x_{1..t}) + x_{1..t} P(number of complete blocks) on n = t + 2rm,
    block i being {t+(i-1)r+1, ..., t+ir}.
    """
    a = Fraction(a)
    if t < 0 or r < 1 or t > k:
        raise ConstructionError(f"block gate needs 0 <= t <= k and r >= 1, got t={t}, r={r}")
    s = P.degree
    if d is not None and t + r * s > d:
        raise ConstructionError(f"block gate t + r*s = {t + r * s} exceeds degree {d}")
    if m < k - t:
        raise ConstructionError(f"block gate needs m >= k - t = {k - t}, got m={m}")
    _check_gate_polynomial(A, a, P, (k - t) // r)
    gate = _block(0, t)
    blocks = [_block(t + i * r, r) for i in range(m)]
    return multilinear(t + 2 * r * m, _gated_terms(a, gate, P, blocks))


def _family_sets(spec: CounterexampleSpec) -> Tuple[List[int], List[int], List[int]]:
    """(gate coordinates, I, J) for the family of spec."""
    m = spec.m
    if spec.family == "block_sum":
        width = spec.k * m
        return [], list(range(1, width + 1)), list(range(width + 1, 2 * width + 1))
    if spec.family == "interleaved_block_sum":
        width = 2 * spec.k * m
        return [], list(range(2, width + 1, 2)), list(range(1, width + 1, 2))
    if spec.family == "gate":
        e = spec.parameters["e"]
        return (
            list(range(1, e + 1)),
            list(range(e + 1, e + m + 1)),
            list(range(e + m + 1, e + 2 * m + 1)),
        )
    t, r = spec.parameters["t"], spec.parameters["r"]
    return (
        list(range(1, t + 1)),
        list(range(t + 1, t + r * m + 1)),
        list(range(t + r * m + 1, t + 2 * r * m + 1)),
    )


def _block_size(spec: CounterexampleSpec) -> int:
    if spec.family in ("block_sum", "interleaved_block_sum"):
        return spec.k
    if spec.family == "gate":
        return 1
    return spec.parameters["r"]


def swap_witnesses(spec: CounterexampleSpec, poly: MultilinearPoly) -> Dict[Tuple[int, int], int]:
    """
    For every i in I and j in J a point x of the slice, x_i = 1 and x_j = 0,
    at which swapping i and j changes the function.

    Block sums use x = the block of i. Gate families switch the gate on,
    complete the block of i together with w-1 further blocks, w chosen
    with P(w) != P(w-1), and put the remaining weight on J minus j.
    """
    gate, I, J = _family_sets(spec)
    size = _block_size(spec)
    witnesses = {}

    if spec.family in ("block_sum", "interleaved_block_sum"):
        blocks = [I[p : p + size] for p in range(0, len(I), size)]
        for i in I:
            x = mask_of(next(block for block in blocks if i in block))
            for j in J:
                witnesses[(i, j)] = _checked_swap(poly, x, i, j)
        return witnesses

    P = spec.witness_poly
    assert P is not None
    free = spec.k - len(gate)
    values = [ratpoly.evaluate(P, w) for w in range(free // size + 1)]
    steps = [w for w in range(1, len(values)) if values[w] != values[w - 1]]
    if not steps:
        raise InconsistencyError(f"{P} does not change on 0..{free // size}")
    w = steps[0]
    blocks = [I[p : p + size] for p in range(0, len(I), size)]
    for index, block in enumerate(blocks):
        others = [b for p, b in enumerate(blocks) if p != index][: w - 1]
        ones = gate + block + [v for b in others for v in b]
        rest = free - size * w
        for j in J:
            padding = [v for v in J if v != j][:rest]
            x = mask_of(ones + padding)
            for i in block:
                witnesses[(i, j)] = _checked_swap(poly, x, i, j)
    return witnesses


def _checked_swap(poly: MultilinearPoly, x: int, i: int, j: int) -> int:
    swapped = x ^ mask_of((i, j))
    if evaluate_on_point(poly, x) == evaluate_on_point(poly, swapped):
        raise InconsistencyError(f"swapping x{i} and x{j} at {x:#b} does not change the function")
    return x


def _spec(
    family: str,
    A: ValueSet,
    d: int,
    k: int,
    m: int,
    n: int,
    P: Optional[UnivariatePoly],
    parameters: Dict[str, int],
    b: Optional[Fraction] = None,
) -> CounterexampleSpec:
    return CounterexampleSpec(
        family=family,  # type: ignore[arg-type]
        A=A,
        d=d,
        k=k,
        m=m,
        n=n,
        witness_poly=P,
        parameters=parameters,
        a=A.elements[0],
        b=b,
    )


def best_counterexample(
    A: ValueSet, d: int, k: int, m: int
) -> Tuple[CounterexampleSpec, MultilinearPoly]:
    """
    An A-valued degree <= d function on some ( [n] choose k ) that is not an
    (m-1)-junta, for 1 <= k < k(A,d).

    The first applicable family is taken: block_sum when k <= d, then a gate
    for the first e = 0..d-1 admitting a non-constant P of degree <= d-e with
    P(0..k-e) in A, then a block gate for the first (t, r, s) in
    lexicographic order with t + rs <= d and a degree-s witness on
    0..floor((k-t)/r). Gate families use m_eff = max(m, k - gate size).

    Raises
    ----------
    NoCounterexampleError
        if k >= k(A,d)
    """
    if k < 1 or m < 1:
        raise ValueError(f"need k >= 1 and m >= 1, got k={k}, m={m}")
    threshold, _ = compute_k(A, d)
    if k >= threshold:
        raise NoCounterexampleError(
            f"no counterexample exists at this k: k={k} >= k({A},{d}) = {threshold}"
        )

    if k <= d:
        a, b = A.elements[0], A.elements[1]
        spec = _spec("block_sum", A, d, k, m, 2 * k * m, None, {}, b)
        return spec, construct_block_sum(a, b, k, m)

    for e in range(d):
        P = find_nonconstant_witness(A, d - e, k - e)
        if P is None:
            continue
        m_eff = max(m, k - e)
        spec = _spec("gate", A, d, k, m_eff, e + 2 * m_eff, P, {"e": e})
        log.info(f"Gate counterexample for A={A}, d={d}, k={k}: e={e}, P={P}, m={m_eff}")
        return spec, construct_gate(A, spec.a, e, P, m_eff, k, d)

    for t in range(d):
        for r in range(1, d - t + 1):
            for s in range(1, (d - t) // r + 1):
                L = (k - t) // r
                if L < s:
                    continue
                P = find_nonconstant_witness(A, s, L)
                if P is None:
                    continue
                m_eff = max(m, k - t)
                spec = _spec(
                    "block_gate", A, d, k, m_eff, t + 2 * r * m_eff, P, {"t": t, "r": r, "s": s}
                )
                log.info(f"Block gate counterexample for A={A}, d={d}, k={k}: t={t}, r={r}, s={s}")
                return spec, construct_block_gate(A, spec.a, t, r, P, m_eff, k, d)

    raise InconsistencyError(f"k={k} < k({A},{d}) = {threshold} but no family applies")


def interleaved_counterexample(
    A: ValueSet, d: int, k: int, m: int
) -> Tuple[CounterexampleSpec, MultilinearPoly]:
    """Interleaved block sum for 1 <= k <= d, blocks on the even coordinates."""
    if not 1 <= k <= d:
        raise ConstructionError(f"interleaved block sum needs 1 <= k <= d, got k={k}, d={d}")
    a, b = A.elements[0], A.elements[1]
    spec = _spec("interleaved_block_sum", A, d, k, m, 2 * k * m, None, {}, b)
    return spec, construct_interleaved_block_sum(a, b, k, m)


def certify(spec: CounterexampleSpec, poly: MultilinearPoly) -> CertificateReport:
    """
    Check a generated function exhaustively on ( [n] choose k ): A-valued,
    degree <= d, every I x J pair sensitive, and the exact minimum junta at
    least min(|I|, |J|) >= m.
    """
    dom = slice_domain(spec.n, spec.k)
    table = truth_table(poly, dom)
    a_valued, point = is_A_valued(table, spec.A)
    if not a_valued:
        raise InconsistencyError(f"{spec.family} counterexample leaves {spec.A} at {point:#b}")
    degree = slice_degree(table)
    if degree > spec.d:
        raise InconsistencyError(f"{spec.family} counterexample has degree {degree} > {spec.d}")

    swap_witnesses(spec, poly)
    graph = sensitivity_graph(table)
    _, I, J = _family_sets(spec)
    lower = junta_lower_bound(table, I, J, graph)
    report = minimum_junta(table, graph)
    if lower < spec.m or report.min_size < lower:
        raise InconsistencyError(
            f"junta certificate failed: bound {lower}, minimum junta {report.min_size}, m={spec.m}"
        )
    log.info(
        f"Certified {spec.family} on {dom}: degree {degree}, "
        f"not a {lower - 1}-junta, minimum junta {report.min_size}"
    )
    return CertificateReport(
        a_valued=a_valued, degree=degree, lower_bound=lower, min_junta=report.min_size
    )


def indicator_decomposition(f: SliceTable, A: ValueSet) -> Dict[Fraction, SliceTable]:
    """
    f_a = prod_{b != a} (f - b) / (a - b) for every a in A.

    Each f_a is the 0/1 indicator of f = a, and sum_a a f_a = f.
    """
    a_valued, point = is_A_valued(f, A)
    if not a_valued:
        raise NotAValuedError(f"table is not {A}-valued at point {point:#b}", point)
    parts = {}
    for a in A.elements:
        values = []
        for value in f.values:
            product = Fraction(1)
            for b in A.elements:
                if b != a:
                    product *= (value - b) / (a - b)
            values.append(product)
        parts[a] = table_from_values(f.domain, values)
    return parts


def recombine(parts: Dict[Fraction, SliceTable]) -> SliceTable:
    """sum_a a * f_a."""
    tables = list(parts.items())
    if not tables:
        raise ValueError("nothing to recombine")
    dom = tables[0][1].domain
    values = [
        sum((a * part.values[p] for a, part in tables), Fraction(0)) for p in range(dom.size)
    ]
    return table_from_values(dom, values)
