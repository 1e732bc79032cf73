"""Text grammars and the slicekit/1 record format

Rationals are written ``-3/2``, value sets ``{0,1,3}`` and polynomials

    poly   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor ("*" factor)*
    factor := rational | mono ["^" int]
    mono   := "x{" int ("," int)* "}"

with 1-based indices and insignificant whitespace, e.g.
``3 - 2*x{1} + 1/2*x{1,2}``.

Machine-readable output is a ``slicekit/1`` header line followed by one
record per line: a kind and tab-separated ``key=value`` fields.
"""
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from slicekit.errors import ParseError
from slicekit.slice_core import (
    indices_of,
    multilinear,
    multilinearize,
    popcount,
    slice_domain,
)
from slicekit.types import (
    CertificateReport,
    CounterexampleSpec,
    JuntaReport,
    MultilinearPoly,
    RawPoly,
    SparseRepresentation,
    ThresholdRow,
    UnivariatePoly,
    ValueSet,
    VerificationReport,
    Violation,
)

HEADER = "slicekit/1"

Record = Tuple[str, Dict[str, str]]

_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_UNSIGNED = re.compile(r"(\d+)(?:\s*/\s*(\d+))?")
_INTEGER = re.compile(r"\d+")


def parse_rational(text: str, line: int = 1, column: int = 1) -> Fraction:
    match = _RATIONAL.match(text)
    if not match:
        raise ParseError(f"expected a rational, got {text.strip()!r}", line, column)
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ParseError(f"zero denominator in {text.strip()!r}", line, column)
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def parse_value_set(text: str, line: int = 1) -> ValueSet:
    stripped = text.strip()
    offset = text.find(stripped) + 1
    if not (stripped.startswith("{") and stripped.endswith("}")):
        raise ParseError(f"value set must look like {{r1,r2,...}}, got {stripped!r}", line, offset)
    column = offset + 1
    elements = []
    for entry in stripped[1:-1].split(","):
        elements.append(parse_rational(entry, line, column))
        column += len(entry) + 1
    values = sorted(set(elements))
    if len(values) < 2:
        raise ParseError(f"a value set needs at least two distinct elements: {stripped}", line, offset)
    return ValueSet(tuple(values))


def parse_value_sets(text: str) -> List[ValueSet]:
    """One value set per line; blank lines and lines starting with # are skipped."""
    sets = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        sets.append(parse_value_set(line, number))
    if not sets:
        raise ParseError("no value sets given", 1, 1)
    return sets


class _PolyParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        before = self.text[: self.pos]
        line = before.count("\n") + 1
        column = self.pos - (before.rfind("\n") + 1) + 1
        return ParseError(message, line, column)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise self.error(f"expected {char!r}, found {found!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        match = _INTEGER.match(self.text, self.pos)
        if not match:
            raise self.error("expected an integer")
        self.pos = match.end()
        return int(match.group())

    def poly(self) -> RawPoly:
        terms = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        terms.append(self.term(sign))
        while self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
            terms.append(self.term(sign))
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return RawPoly(tuple(terms))

    def term(self, sign: int) -> Tuple[Fraction, Tuple[int, ...]]:
        coefficient = [Fraction(sign)]
        indices: List[int] = []
        self.factor(indices, coefficient)
        while self.peek() == "*":
            self.pos += 1
            self.factor(indices, coefficient)
        return coefficient[0], tuple(sorted(indices))

    def factor(self, indices: List[int], coefficient: List[Fraction]) -> None:
        char = self.peek()
        if char == "x":
            self.pos += 1
            self.expect("{")
            mono = [self.index()]
            while self.peek() == ",":
                self.pos += 1
                mono.append(self.index())
            self.expect("}")
            power = 1
            if self.peek() == "^":
                self.pos += 1
                power = self.integer()
                if power < 1:
                    raise self.error("exponent must be at least 1")
            indices.extend(mono * power)
            return
        match = _UNSIGNED.match(self.text, self.pos)
        if not match:
            raise self.error(f"expected a rational or a monomial, found {char or 'end of input'!r}")
        if match.group(2) is not None and int(match.group(2)) == 0:
            raise self.error("zero denominator")
        coefficient[0] *= Fraction(int(match.group(1)), int(match.group(2) or 1))
        self.pos = match.end()

    def index(self) -> int:
        value = self.integer()
        if value < 1:
            raise self.error("variable indices are 1-based")
        return value


def parse_polynomial(text: str) -> RawPoly:
    return _PolyParser(text).poly()


def parse_multilinear(text: str, n: Optional[int] = None) -> MultilinearPoly:
    return multilinearize(parse_polynomial(text), n)


def _mono(mask: int) -> str:
    return "x{" + ",".join(str(i) for i in indices_of(mask)) + "}"


def format_polynomial(P: MultilinearPoly) -> str:
    """Inverse of parse_multilinear: terms by degree, then by index tuple."""
    terms = sorted(P.terms.items(), key=lambda item: (popcount(item[0]), indices_of(item[0])))
    if not terms:
        return "0"
    pieces = []
    for mask, c in terms:
        magnitude = abs(c)
        if mask == 0:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = _mono(mask)
        else:
            body = f"{format_rational(magnitude)}*{_mono(mask)}"
        if not pieces:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(pieces)


def _ints(values: Iterable[int]) -> str:
    return ",".join(str(v) for v in values)


def _parse_ints(text: str) -> Tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v)


def _rationals(values: Iterable[Fraction]) -> str:
    return ",".join(format_rational(v) for v in values)


def _parse_rationals(text: str) -> Tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in text.split(",") if v)


def record(kind: str, fields: Sequence[Tuple[str, object]]) -> str:
    return "\t".join([kind] + [f"{key}={value}" for key, value in fields])


def render_records(lines: Iterable[str]) -> str:
    return "\n".join([HEADER, *lines]) + "\n"


def parse_records(text: str) -> List[Record]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(f"missing {HEADER} header", 1, 1)
    records = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        kind, *parts = line.split("\t")
        fields = {}
        column = len(kind) + 2
        for part in parts:
            key, sep, value = part.partition("=")
            if not sep:
                raise ParseError(f"field {part!r} lacks '='", number, column)
            fields[key] = value
            column += len(part) + 1
        records.append((kind, fields))
    return records


def threshold_record(row: ThresholdRow) -> str:
    return record(
        "threshold",
        [
            ("A", row.A),
            ("d", row.d),
            ("W", row.W),
            ("k", row.k),
            ("kappa", row.kappa),
            ("s", _ints(row.attaining_s)),
        ],
    )


def parse_threshold_row(fields: Dict[str, str]) -> ThresholdRow:
    return ThresholdRow(
        A=parse_value_set(fields["A"]),
        d=int(fields["d"]),
        W=int(fields["W"]),
        k=int(fields["k"]),
        kappa=int(fields["kappa"]),
        attaining_s=_parse_ints(fields["s"]),
    )


def parse_threshold_rows(text: str) -> List[ThresholdRow]:
    return [parse_threshold_row(f) for kind, f in parse_records(text) if kind == "threshold"]


def junta_record(report: JuntaReport) -> str:
    pairs = ",".join(f"{i}-{j}@{x}" for (i, j), x in sorted(report.certificate_pairs.items()))
    return record(
        "junta",
        [("min_size", report.min_size), ("witness", _ints(report.witness)), ("pairs", pairs)],
    )


def parse_junta_report(fields: Dict[str, str]) -> JuntaReport:
    pairs = {}
    for item in filter(None, fields["pairs"].split(",")):
        edge, _, point = item.partition("@")
        i, _, j = edge.partition("-")
        pairs[(int(i), int(j))] = int(point)
    return JuntaReport(
        min_size=int(fields["min_size"]),
        witness=_parse_ints(fields["witness"]),
        certificate_pairs=pairs,
    )


def sparse_records(S: SparseRepresentation) -> List[str]:
    poly = format_polynomial(multilinear(S.n, S.C))
    return [
        record("sparse", [("n", S.n), ("k", S.k), ("d", S.d), ("poly", poly)]),
        record("support", [("indices", _ints(sorted(S.support)))]),
    ]


def parse_sparse(records: Sequence[Record]) -> SparseRepresentation:
    fields = next(f for kind, f in records if kind == "sparse")
    support = next(f for kind, f in records if kind == "support")
    n = int(fields["n"])
    poly = parse_multilinear(fields["poly"], n)
    return SparseRepresentation(
        n=n,
        k=int(fields["k"]),
        d=int(fields["d"]),
        C=poly.terms,
        support=frozenset(_parse_ints(support["indices"])),
    )


def counterexample_record(spec: CounterexampleSpec, poly: MultilinearPoly) -> str:
    P = spec.witness_poly
    fields: List[Tuple[str, object]] = [
        ("family", spec.family),
        ("A", spec.A),
        ("d", spec.d),
        ("k", spec.k),
        ("m", spec.m),
        ("n", spec.n),
        ("a", format_rational(spec.a)),
        ("b", "-" if spec.b is None else format_rational(spec.b)),
    ]
    fields += sorted(spec.parameters.items())
    fields += [("P", "-" if P is None else _rationals(P.coefficients)), ("poly", format_polynomial(poly))]
    return record("counterexample", fields)


def parse_counterexample(fields: Dict[str, str]) -> Tuple[CounterexampleSpec, MultilinearPoly]:
    parameters = {key: int(fields[key]) for key in ("e", "t", "r", "s") if key in fields}
    n = int(fields["n"])
    spec = CounterexampleSpec(
        family=fields["family"],  # type: ignore[arg-type]
        A=parse_value_set(fields["A"]),
        d=int(fields["d"]),
        k=int(fields["k"]),
        m=int(fields["m"]),
        n=n,
        witness_poly=None if fields["P"] == "-" else UnivariatePoly(_parse_rationals(fields["P"])),
        parameters=parameters,
        a=parse_rational(fields["a"]),
        b=None if fields["b"] == "-" else parse_rational(fields["b"]),
    )
    return spec, parse_multilinear(fields["poly"], n)


def certificate_record(report: CertificateReport) -> str:
    return record(
        "certificate",
        [
            ("a_valued", str(report.a_valued).lower()),
            ("degree", report.degree),
            ("lower_bound", report.lower_bound),
            ("min_junta", report.min_junta),
        ],
    )


def verification_records(report: VerificationReport) -> List[str]:
    lines = [
        record(
            "verification",
            [
                ("n", report.domain.n),
                ("k", report.domain.k),
                ("A", report.A),
                ("d", report.d),
                ("bound", report.bound),
                ("scanned", report.functions_scanned),
                ("degree_le_d", report.degree_le_d_count),
                ("max_min_junta", report.max_min_junta),
                ("violations", len(report.violations)),
            ],
        )
    ]
    for violation in report.violations:
        lines.append(
            record(
                "violation",
                [
                    ("values", _rationals(violation.values)),
                    ("min_size", violation.min_size),
                    ("witness", _ints(violation.witness)),
                ],
            )
        )
    return lines


def parse_verification(records: Sequence[Record]) -> VerificationReport:
    fields = next(f for kind, f in records if kind == "verification")
    violations = tuple(
        Violation(
            values=_parse_rationals(f["values"]),
            min_size=int(f["min_size"]),
            witness=_parse_ints(f["witness"]),
        )
        for kind, f in records
        if kind == "violation"
    )
    return VerificationReport(
        domain=slice_domain(int(fields["n"]), int(fields["k"])),
        A=parse_value_set(fields["A"]),
        d=int(fields["d"]),
        bound=int(fields["bound"]),
        functions_scanned=int(fields["scanned"]),
        degree_le_d_count=int(fields["degree_le_d"]),
        max_min_junta=int(fields["max_min_junta"]),
        violations=violations,
    )


def indicator_record(a: Fraction, values: Sequence[Fraction]) -> str:
    return record("indicator", [("a", format_rational(a)), ("values", _rationals(values))])
