"""slicekit command line

    slicekit table --set sets.txt --dmax 5
    slicekit analyze --poly f.txt --n 12 --k 5 --A "{0,1,3}"
    slicekit construct --A "{0,1,3}" --d 2 --k 5 --m 3
    slicekit verify --n 6 --k 2 --d 1 --A "{0,1}" --bound 1
    slicekit decompose --poly f.txt --n 6 --k 3 --A "{0,1,3}"

Exit codes: 0 success, 1 negative result (not A-valued, no
counterexample), 2 input or parse error, 3 resource guard.
"""
import argparse
import sys
from math import lcm
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO

import numpy as np
import pandas as pd

from slicekit import formats
from slicekit.constructions import (
    best_counterexample,
    certify,
    indicator_decomposition,
    recombine,
)
from slicekit.errors import DomainTooLargeError, NoCounterexampleError, NotAValuedError
from slicekit.junta import minimum_junta
from slicekit.logging_config import logging
from slicekit.recovery import bunching_assign, extract_coefficients, sparsify
from slicekit.slice_core import (
    check_domain,
    degree_annihilator,
    indices_of,
    is_A_valued,
    slice_degree,
    slice_domain,
    slice_points,
    truth_table,
)
from slicekit.thresholds import build_table, rows_to_dataframe
from slicekit.types import SliceDomain, SliceTable, ValueSet, VerificationReport, Violation

log = logging.getLogger(__name__)
log.setLevel(logging.DEBUG)

MAX_EXHAUSTIVE_TABLES = 2**24
PROGRESS_EVERY = 2**16


def verify_exhaustive(dom: SliceDomain, A: ValueSet, d: int, bound: int) -> VerificationReport:
    """
    Scan every A-valued table on dom, keep those of degree <= d and compute
    their minimum juntas.

    Tables are enumerated with the value at the first point varying fastest,
    in blocks of PROGRESS_EVERY; the degree filter is the integer
    annihilator of the degree <= d space applied to a whole block at once.

    Raises
    ----------
    DomainTooLargeError
        if |A| ** C(n,k) exceeds MAX_EXHAUSTIVE_TABLES
    """
    check_domain(dom)
    n, k = dom
    size = dom.size
    total = A.size**size
    if total > MAX_EXHAUSTIVE_TABLES:
        raise DomainTooLargeError(f"{A.size}^{size} tables on {dom}", total, MAX_EXHAUSTIVE_TABLES)

    scale = lcm(*(a.denominator for a in A.elements))
    scaled = np.array([int(a * scale) for a in A.elements], dtype=np.int64)
    annihilator = degree_annihilator(n, k, d) if d < min(k, n - k) else None
    powers = A.size ** np.arange(size, dtype=np.int64)

    kept = 0
    largest = 0
    violations: List[Violation] = []
    for start in range(0, total, PROGRESS_EVERY):
        index = np.arange(start, min(start + PROGRESS_EVERY, total), dtype=np.int64)
        codes = (index[:, None] // powers[None, :]) % A.size
        if annihilator is None:
            keep = np.ones(len(index), dtype=bool)
        else:
            keep = ~np.any(scaled[codes].dot(annihilator.T) != 0, axis=1)
        for row in codes[keep]:
            table = SliceTable(domain=dom, values=tuple(A.elements[c] for c in row))
            report = minimum_junta(table)
            kept += 1
            largest = max(largest, report.min_size)
            if report.min_size > bound:
                violations.append(
                    Violation(values=table.values, min_size=report.min_size, witness=report.witness)
                )
        log.info(
            f"Scanned {index[-1] + 1}/{total} tables on {dom}: {kept} of degree <= {d}, "
            f"{len(violations)} violations"
        )
    return VerificationReport(
        domain=dom,
        A=A,
        d=d,
        bound=bound,
        functions_scanned=total,
        degree_le_d_count=kept,
        max_min_junta=largest,
        violations=tuple(violations),
    )


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _human(pairs: Dict[str, object]) -> str:
    return pd.Series(pairs, dtype=object).to_string() + "\n"


def cmd_table(args: argparse.Namespace, out: TextIO) -> int:
    sets = formats.parse_value_sets(_read(args.set))
    rows = build_table(sets, args.dmax)
    if args.format == "records":
        out.write(formats.render_records(formats.threshold_record(row) for row in rows))
    else:
        out.write(rows_to_dataframe(rows).to_string() + "\n")
    return 0


def cmd_analyze(args: argparse.Namespace, out: TextIO) -> int:
    dom = slice_domain(args.n, args.k)
    P = formats.parse_multilinear(_read(args.poly), args.n)
    table = truth_table(P, dom)
    degree = slice_degree(table)
    summary: Dict[str, object] = {"n": dom.n, "k": dom.k, "degree": degree}

    if args.A is not None:
        A = formats.parse_value_set(args.A)
        a_valued, point = is_A_valued(table, A)
        if not a_valued:
            raise NotAValuedError(
                f"function is not {A}-valued at point {list(indices_of(point))}", point
            )
        summary["a_valued"] = "true"

    d = degree if args.d is None else args.d
    if d < degree:
        raise ValueError(f"--d {d} is below the slice degree {degree}")
    sparse = None
    if dom.n >= dom.k + d:
        expansion = extract_coefficients(table, dom, d)
        sparse = sparsify(bunching_assign(expansion))
        summary["expansion_terms"] = len(expansion.coeffs)
        summary["support"] = ",".join(str(i) for i in sorted(sparse.support))
    else:
        log.warning(f"n < k + d on {dom}: no unique expansion to recover")

    report = minimum_junta(table)
    summary["min_junta"] = report.min_size
    summary["junta_witness"] = ",".join(str(i) for i in report.witness)

    if args.format == "records":
        listed = ("support", "junta_witness")
        fields = [(key, value) for key, value in summary.items() if key not in listed]
        lines = [formats.record("analysis", fields)]
        if sparse is not None:
            lines += formats.sparse_records(sparse)
        lines.append(formats.junta_record(report))
        out.write(formats.render_records(lines))
    else:
        out.write(_human(summary))
    return 0


def cmd_construct(args: argparse.Namespace, out: TextIO) -> int:
    A = formats.parse_value_set(args.A)
    spec, poly = best_counterexample(A, args.d, args.k, args.m)
    certificate = certify(spec, poly)
    if args.format == "records":
        out.write(
            formats.render_records(
                [formats.counterexample_record(spec, poly), formats.certificate_record(certificate)]
            )
        )
    else:
        summary: Dict[str, object] = {
            "family": spec.family,
            "n": spec.n,
            "k": spec.k,
            "m": spec.m,
            **spec.parameters,
            "P": "-" if spec.witness_poly is None else str(spec.witness_poly),
            "degree": certificate.degree,
            "not a junta on fewer than": certificate.lower_bound,
            "min_junta": certificate.min_junta,
        }
        out.write(_human(summary))
        out.write(formats.format_polynomial(poly) + "\n")
    return 0


def cmd_verify_exhaustive(args: argparse.Namespace, out: TextIO) -> int:
    dom = slice_domain(args.n, args.k)
    A = formats.parse_value_set(args.A)
    report = verify_exhaustive(dom, A, args.d, args.bound)
    if args.format == "records":
        out.write(formats.render_records(formats.verification_records(report)))
    else:
        out.write(
            _human(
                {
                    "domain": str(report.domain),
                    "A": str(report.A),
                    "d": report.d,
                    "bound": report.bound,
                    "functions_scanned": report.functions_scanned,
                    "degree_le_d": report.degree_le_d_count,
                    "max_min_junta": report.max_min_junta,
                    "violations": len(report.violations),
                }
            )
        )
    return 0


def cmd_decompose(args: argparse.Namespace, out: TextIO) -> int:
    dom = slice_domain(args.n, args.k)
    A = formats.parse_value_set(args.A)
    table = truth_table(formats.parse_multilinear(_read(args.poly), args.n), dom)
    parts = indicator_decomposition(table, A)
    reconstructed = recombine(parts).values == table.values
    if args.format == "records":
        lines = [formats.indicator_record(a, part.values) for a, part in parts.items()]
        lines.append(formats.record("reconstruction", [("ok", str(reconstructed).lower())]))
        out.write(formats.render_records(lines))
    else:
        df = pd.DataFrame(
            {
                "point": [",".join(map(str, indices_of(int(x)))) for x in slice_points(dom)],
                "f": [str(v) for v in table.values],
                **{f"f_{a}": [str(v) for v in part.values] for a, part in parts.items()},
            }
        )
        out.write(df.to_string(index=False) + "\n")
        out.write(f"reconstruction: {'ok' if reconstructed else 'FAILED'}\n")
    return 0 if reconstructed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicekit", description="Junta thresholds and polynomial recovery on the slice"
    )
    parser.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def subcommand(name: str, handler, help: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help)
        sub.add_argument("--format", choices=["human", "records"], default="human")
        sub.set_defaults(handler=handler)
        return sub

    table = subcommand("table", cmd_table, "W(A,d), k(A,d) and kappa(A,d) for value sets")
    table.add_argument("--set", required=True, help="file with one value set per line")
    table.add_argument("--dmax", type=int, required=True)

    analyze = subcommand("analyze", cmd_analyze, "degree, recovery and juntas of a polynomial")
    analyze.add_argument("--poly", required=True, help="polynomial file, '-' for stdin")
    analyze.add_argument("--n", type=int, required=True)
    analyze.add_argument("--k", type=int, required=True)
    analyze.add_argument("--A")
    analyze.add_argument("--d", type=int)

    construct = subcommand("construct", cmd_construct, "certified non-junta below k(A,d)")
    construct.add_argument("--A", required=True)
    construct.add_argument("--d", type=int, required=True)
    construct.add_argument("--k", type=int, required=True)
    construct.add_argument("--m", type=int, required=True)

    verify = subcommand("verify", cmd_verify_exhaustive, "scan all A-valued tables on a slice")
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--k", type=int, required=True)
    verify.add_argument("--d", type=int, required=True)
    verify.add_argument("--A", required=True)
    verify.add_argument("--bound", type=int, required=True)

    decompose = subcommand("decompose", cmd_decompose, "indicator decomposition of an A-valued function")
    decompose.add_argument("--poly", required=True)
    decompose.add_argument("--n", type=int, required=True)
    decompose.add_argument("--k", type=int, required=True)
    decompose.add_argument("--A", required=True)
    return parser


def _set_log_level(level: str) -> None:
    for name in list(logging.root.manager.loggerDict):
        if name == "slicekit" or name.startswith("slicekit."):
            logging.getLogger(name).setLevel(level)


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    args = build_parser().parse_args(argv)
    _set_log_level(args.log_level)
    out = out or sys.stdout
    try:
        return args.handler(args, out)
    except DomainTooLargeError as e:
        log.error(str(e))
        return 3
    except (NotAValuedError, NoCounterexampleError) as e:
        log.error(str(e))
        return 1
    except (ValueError, OSError) as e:
        log.error(str(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
