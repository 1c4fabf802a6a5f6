"""Command-line front end: ``verify`` an instance or ``poly eval`` a single value."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .bispectral import algebra_relations_check, build_quadruple, difference_relation_check
from .certificate import Certificate, fmt
from .orthopoly import PolynomialDomainError, evaluate, orthopoly_suite
from .polystructure import certify_P, certify_Q, construct_v, dual_recurrence_check, polys_json
from .scheme import (DEFAULT_MAX_VERTICES, ResourceLimitError, SchemeParams, adjacency_recurrence_check,
                     build_adjacency, verify_axioms)
from .spectra import (SpectralData, build_idempotents, idempotent_check, intersection_agreement_check,
                      krein_check, multiplicity_check, wilson_duality_check)
from .terwilliger import default_bases, terwilliger_check

CHECKS = ("axioms", "spectra", "ppoly", "qpoly", "recurrences", "difference", "bispectral",
          "terwilliger", "orthopoly")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    r: int
    k: int
    n: int
    checks: tuple[str, ...] = CHECKS
    max_vertices: int = DEFAULT_MAX_VERTICES
    bases: int = 3
    output_path: str | None = None
    tables: bool = False
    timings: bool = False

    def __post_init__(self):
        unknown = sorted(set(self.checks) - set(CHECKS))
        if unknown:
            raise UsageError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
        if self.max_vertices < 1:
            raise UsageError("max-vertices must be at least 1")
        if self.bases < 1:
            raise UsageError("at least one base vertex required")
        try:
            self.params = SchemeParams(self.r, self.k, self.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def plan(self) -> list[str]:
        """Requested checks plus their prerequisites, in execution order."""
        wanted = set(self.checks)
        if wanted - {"orthopoly"}:
            wanted |= {"axioms", "spectra"}
        return [c for c in CHECKS if c in wanted]


@dataclass
class Report:
    config: RunConfig
    certificates: list[Certificate] = field(default_factory=list)
    tables: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.verdict != "fail" for c in self.certificates)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_FAIL

    def to_dict(self) -> dict:
        p = self.config.params
        out = {
            "instance": {"r": p.r, "k": p.k, "n": p.n, "v": p.v},
            "domain": [list(ij) for ij in p.domain],
            "certificates": [c.to_dict(self.config.timings) for c in self.certificates],
        }
        if self.tables is not None:
            out["tables"] = self.tables
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def run(config: RunConfig) -> Report:
    """Run the planned checks; raises ResourceLimitError when the vertex guard trips."""
    params = config.params
    plan = config.plan()
    report = Report(config)
    certs = report.certificates
    fam = spectral = idem = None
    if any(c != "orthopoly" for c in plan):
        fam = build_adjacency(params, config.max_vertices)
        spectral = SpectralData(params)
    for check in plan:
        if check == "axioms":
            certs.append(verify_axioms(fam))
        elif check == "spectra":
            idem = build_idempotents(fam, spectral)
            certs += [multiplicity_check(spectral), wilson_duality_check(spectral),
                      idempotent_check(fam, spectral, idem), intersection_agreement_check(fam, spectral),
                      krein_check(spectral, fam, idem)]
        elif check == "ppoly":
            certs.append(certify_P(params, spectral))
        elif check == "qpoly":
            certs.append(certify_Q(spectral))
        elif check == "recurrences":
            certs += [adjacency_recurrence_check(fam), dual_recurrence_check(spectral)]
        elif check == "difference":
            certs.append(difference_relation_check(spectral))
        elif check == "bispectral":
            certs.append(algebra_relations_check(params))
        elif check == "terwilliger":
            certs.append(terwilliger_check(fam, spectral, idem, default_bases(fam.v, config.bases)))
        elif check == "orthopoly":
            certs.append(orthopoly_suite())
    if config.tables and spectral is not None:
        report.tables = {**spectral.tables_json(),
                         "v": polys_json(construct_v(params)),
                         "operators": build_quadruple(params).to_json()}
    return report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _checks_arg(text: str) -> tuple[str, ...]:
    if text == "all":
        return CHECKS
    return tuple(t.strip() for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nbjohnson", description="Exact verifier for the non-binary Johnson scheme.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run checks on J_r(k,n)")
    verify.add_argument("--r", type=int, required=True)
    verify.add_argument("--k", type=int, required=True)
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--checks", type=_checks_arg, default=CHECKS,
                        help=f"comma-separated subset of {','.join(CHECKS)}, or 'all' (default)")
    verify.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    verify.add_argument("--bases", type=int, default=3, help="base vertices for the dual checks")
    verify.add_argument("--json", dest="output_path", help="write the JSON report here ('-' for stdout)")
    verify.add_argument("--tables", action="store_true", help="include P, Q, Krein and operator tables")
    verify.add_argument("--timings", action="store_true", help="include wall times (not byte-stable)")

    poly = sub.add_parser("poly", help="polynomial utilities")
    poly_sub = poly.add_subparsers(dest="poly_command", required=True, parser_class=_Parser)
    ev = poly_sub.add_parser("eval", help="evaluate one polynomial exactly")
    ev.add_argument("--family", choices=("krawtchouk", "eberlein", "hahn"), required=True)
    for name in ("i", "x", "N", "p"):
        ev.add_argument(f"--{name}", type=int, required=True)
    return parser


def _verify(args) -> int:
    try:
        config = RunConfig(args.r, args.k, args.n, args.checks, args.max_vertices, args.bases,
                           args.output_path, args.tables, args.timings)
        report = run(config)
    except (UsageError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for cert in report.certificates:
        print(cert, file=sys.stderr if config.output_path == "-" else sys.stdout)
    if config.output_path == "-":
        sys.stdout.write(report.to_json())
    elif config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return report.exit_code


def _poly_eval(args) -> int:
    try:
        value = evaluate(args.family, args.i, args.x, args.N, args.p)
    except PolynomialDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(fmt(value))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args)
    return _poly_eval(args)


if __name__ == "__main__":
    sys.exit(main())
