from fractions import Fraction
from math import comb
from typing import Dict, FrozenSet, Literal, NamedTuple, Optional, Tuple


class ValueSet(NamedTuple):
    """
    A class to represent the codomain A of a slice function. Inherits from NamedTuple.

    Build instances with ``thresholds.value_set`` (or ``formats.parse_value_set``),
    which sorts, deduplicates and checks the size.

    Attributes
    ----------
    elements : Tuple[Fraction, ...]
        strictly increasing rationals, at least two of them
    """

    elements: Tuple[Fraction, ...]

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def members(self) -> FrozenSet[Fraction]:
        return frozenset(self.elements)

    def __str__(self):
        return "{" + ",".join(str(a) for a in self.elements) + "}"


class UnivariatePoly(NamedTuple):
    """
    A class to represent a polynomial in one variable with rational coefficients.
    Inherits from NamedTuple.

    Attributes
    ----------
    coefficients : Tuple[Fraction, ...]
        lowest degree first, trailing zeros trimmed. The zero polynomial is ().
    """

    coefficients: Tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        # the zero polynomial counts as constant
        return max(len(self.coefficients) - 1, 0)

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for power, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if power == 0:
                terms.append(str(c))
            elif power == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{power}")
        return " + ".join(terms).replace("+ -", "- ")


class SliceDomain(NamedTuple):
    """
    A class to represent the slice ( [n] choose k ). Inherits from NamedTuple.

    Points are integer bitmasks, coordinate i being bit i-1. The canonical
    order of points is increasing mask value, which is colex order on the
    set of 1-coordinates.

    Attributes
    ----------
    n : int
        number of coordinates
    k : int
        Hamming weight of every point, 0 <= k <= n
    """

    n: int
    k: int

    @property
    def size(self) -> int:
        return comb(self.n, self.k)

    def __str__(self):
        return f"([{self.n}] choose {self.k})"


class RawPoly(NamedTuple):
    """
    A class to represent a polynomial as parsed from text, before
    multilinearization. Inherits from NamedTuple.

    Attributes
    ----------
    terms : Tuple[Tuple[Fraction, Tuple[int, ...]], ...]
        pairs of coefficient and sorted 1-based variable indices. An index
        repeated p times stands for the p-th power of that variable.
    """

    terms: Tuple[Tuple[Fraction, Tuple[int, ...]], ...]


class MultilinearPoly(NamedTuple):
    """
    A class to represent a multilinear polynomial sum_S c(S) x_S. Inherits from NamedTuple.

    Attributes
    ----------
    n : int
        number of variables
    terms : Dict[int, Fraction]
        monomial bitmask -> nonzero coefficient. Mask 0 is the constant monomial.
    """

    n: int
    terms: Dict[int, Fraction]

    @property
    def degree(self) -> int:
        return max((bin(mask).count("1") for mask in self.terms), default=0)


class SliceTable(NamedTuple):
    """
    A class to represent a function on the slice by its full value table.
    Inherits from NamedTuple.

    Attributes
    ----------
    domain : SliceDomain
        the slice the function lives on
    values : Tuple[Fraction, ...]
        one value per point, in canonical order
    """

    domain: SliceDomain
    values: Tuple[Fraction, ...]


class ThresholdRow(NamedTuple):
    """
    A class to represent one (A, d) entry of the threshold table. Inherits from NamedTuple.

    Attributes
    ----------
    A : ValueSet
        the value set
    d : int
        degree
    W : int
        W(A,d)
    k : int
        k(A,d)
    kappa : int
        kappa(A,d), computed independently of k
    attaining_s : Tuple[int, ...]
        every s in [1,d] at which the maximum defining k(A,d) is attained
    """

    A: ValueSet
    d: int
    W: int
    k: int
    kappa: int
    attaining_s: Tuple[int, ...]


class HomogeneousExpansion(NamedTuple):
    """
    A class to represent f = sum_{|S|=d} c(S) x_S on ( [n] choose k ). Inherits from NamedTuple.

    Attributes
    ----------
    n, k, d : int
        slice parameters and degree
    coeffs : Dict[int, Fraction]
        size-d monomial bitmask -> coefficient, zeros omitted
    """

    n: int
    k: int
    d: int
    coeffs: Dict[int, Fraction]


class LayeredCoefficients(NamedTuple):
    """
    A class to represent bunched coefficients c(T) for all |T| <= d. Inherits from NamedTuple.

    Attributes
    ----------
    n, k, d : int
        slice parameters and degree
    c : Dict[int, Fraction]
        subset bitmask -> value, zeros omitted. Its size-d part is the source
        homogeneous expansion.
    """

    n: int
    k: int
    d: int
    c: Dict[int, Fraction]


class SparseRepresentation(NamedTuple):
    """
    A class to represent f = sum_{|S|<=d} C(S) x_S after sparsification. Inherits from NamedTuple.

    Attributes
    ----------
    n, k, d : int
        slice parameters and degree
    C : Dict[int, Fraction]
        subset bitmask -> nonzero coefficient
    support : FrozenSet[int]
        1-based indices of all variables mentioned by a nonzero coefficient
    """

    n: int
    k: int
    d: int
    C: Dict[int, Fraction]
    support: FrozenSet[int]


class SensitivityGraph(NamedTuple):
    """
    A class to represent which transpositions change a slice function. Inherits from NamedTuple.

    Attributes
    ----------
    n : int
        number of coordinates (vertices 1..n)
    edges : FrozenSet[Tuple[int, int]]
        pairs (i, j), i < j, 1-based, such that f(x) != f(x^(i j)) for some x
    witnesses : Dict[Tuple[int, int], int]
        edge -> first point (colex order) on which the swap changes f
    """

    n: int
    edges: FrozenSet[Tuple[int, int]]
    witnesses: Dict[Tuple[int, int], int]


class JuntaReport(NamedTuple):
    """
    A class to represent the outcome of exact junta detection. Inherits from NamedTuple.

    Attributes
    ----------
    min_size : int
        size of a minimum vertex cover of the sensitivity graph
    witness : Tuple[int, ...]
        one optimal cover, sorted 1-based indices
    certificate_pairs : Dict[Tuple[int, int], int]
        edges of a matching of the sensitivity graph with their witnessing
        points. Any junta has to meet each of these pairs, so their number
        bounds min_size from below.
    """

    min_size: int
    witness: Tuple[int, ...]
    certificate_pairs: Dict[Tuple[int, int], int]


Family = Literal["block_sum", "gate", "block_gate", "interleaved_block_sum"]


class CounterexampleSpec(NamedTuple):
    """
    A class to represent one member of the non-junta families. Inherits from NamedTuple.

    Attributes
    ----------
    family : Family
        block_sum, gate, block_gate or interleaved_block_sum
    A : ValueSet
        value set the function is valued in
    d, k : int
        degree bound and slice weight
    m : int
        number of blocks (or gate inputs) actually used
    n : int
        resulting number of coordinates
    witness_poly : Optional[UnivariatePoly]
        the non-constant polynomial P of the gate families
    parameters : Dict[str, int]
        {"e": ...} for gate, {"t", "r", "s"} for block_gate, {} otherwise
    a : Fraction
        value taken off the gate (base value of the block sums)
    b : Optional[Fraction]
        value on a block (block sums only)
    """

    family: Family
    A: ValueSet
    d: int
    k: int
    m: int
    n: int
    witness_poly: Optional[UnivariatePoly]
    parameters: Dict[str, int]
    a: Fraction
    b: Optional[Fraction]


class CertificateReport(NamedTuple):
    """
    A class to represent the checks run on a generated counterexample. Inherits from NamedTuple.

    Attributes
    ----------
    a_valued : bool
        every table entry lies in A
    degree : int
        exact slice degree of the table
    lower_bound : int
        min(|I|, |J|) from the junta criterion with the construction's I, J
    min_junta : int
        exact minimum junta size from the vertex cover detector
    """

    a_valued: bool
    degree: int
    lower_bound: int
    min_junta: int


class Violation(NamedTuple):
    values: Tuple[Fraction, ...]
    min_size: int
    witness: Tuple[int, ...]


class VerificationReport(NamedTuple):
    """
    A class to represent an exhaustive scan of all A-valued tables on a slice.
    Inherits from NamedTuple.

    Attributes
    ----------
    domain : SliceDomain
        slice scanned
    A : ValueSet
        value set
    d : int
        degree filter
    bound : int
        junta size every degree <= d function is expected to meet
    functions_scanned : int
        |A| ** C(n,k)
    degree_le_d_count : int
        number of tables of slice degree at most d
    max_min_junta : int
        largest minimum junta size among them
    violations : Tuple[Violation, ...]
        tables of degree <= d whose minimum junta exceeds the bound
    """

    domain: SliceDomain
    A: ValueSet
    d: int
    bound: int
    functions_scanned: int
    degree_le_d_count: int
    max_min_junta: int
    violations: Tuple[Violation, ...]
