"""
Seifert Embedding Toolkit - Main Application
A command-line front end for 3-manifold invariants, linking pairings and
S^4-embedding obstructions.

This is the main entry point that orchestrates all modules. Defaults come
from constants/config.py (and .env); flags override them per run.

Usage:
    python app.py homology "M(0; (2,1) (3,1) (5,1) (1,-1))" --json
    python app.py pairing "M(0; (3,1) (3,-1))"
    python app.py verdict "M(-1; (2,1) (2,-1))" --category both
    python app.py verdict --batch manifolds.txt --out verdicts.csv
    python app.py realize "sum(lw(1/3),lw(1/3))" --mode zero
    python app.py nilpotent --semidirect 8,3 --field 2
    python app.py selftest
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from sympy import isprime

from constants.config import (
    CATEGORY_OPTIONS,
    CONJ_BOUND,
    DEFAULT_CATEGORY,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_UNKNOWN_BOUND,
    LOG_FORMAT,
    LOG_LEVEL,
    ORACLE_BOUND,
    PARTITION_CAP,
    SCHEMA_VERSION,
)
from services.linking_pairing import is_hyperbolic
from services.manifolds import first_homology_of, linking_pairing_of
from services.nilpotent_homology import (
    RATIONALS,
    SemidirectGroup,
    betti_fp_abelian,
    field_label,
    h2_abelian,
    homologically_balanced,
    integral_h2,
    wang_betti,
)
from services.obstructions import abelian_nilpotent_constraints, complement_euler_options, evaluate
from services.realization import EpsilonMode, realize
from services.report_service import ReportService
from services.selftest import run_selftest
from utils.abelian_group import FiniteAbelianGroup
from utils.errors import InputError, OracleBoundError, ToolkitError, UndecidedError
from utils.parsers import format_pairing, parse_manifold, parse_pairing

logger = logging.getLogger(__name__)


# ==============================================================================
# OUTPUT HELPERS
# ==============================================================================


def emit(args: argparse.Namespace, payload: dict, text: str) -> None:
    """Print the JSON payload (tagged with the schema version) or the plain text."""
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, **payload}))
    else:
        print(text)


def read_input(args: argparse.Namespace) -> str:
    """The inline literal; exactly one of the literal and --batch must be given."""
    batch = getattr(args, "batch", None)
    if bool(args.input) == bool(batch):
        raise InputError("give exactly one input: an inline literal or --batch FILE")
    return args.input


def parse_field(value: Optional[str]) -> Optional[int]:
    if value is None:
        return None
    if value.upper() == "Q":
        return RATIONALS
    try:
        p = int(value)
    except ValueError:
        raise InputError(f"--field must be Q or a prime, got {value!r}")
    if not isprime(p):
        raise InputError(f"--field must be Q or a prime, got {p}")
    return p


def parse_int_list(value: str, flag: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated integers, got {value!r}")


# ==============================================================================
# SUB-COMMANDS
# ==============================================================================


def run_homology(args: argparse.Namespace) -> int:
    m = parse_manifold(read_input(args))
    group = first_homology_of(m)
    constraints = abelian_nilpotent_constraints(group.free_rank, group.torsion())
    payload = {
        "input": str(m),
        **group.to_dict(),
        "torsion_is_double": group.is_direct_double(),
        "euler_options": [list(o) for o in complement_euler_options(group.free_rank)],
        "constraints": constraints.to_dict(),
    }
    lines = [
        f"{m}",
        f"  H_1 = {group}",
        f"  torsion is a direct double: {group.is_direct_double()}",
        f"  (chi(X), chi(Y)) options: {complement_euler_options(group.free_rank)}",
        f"  abelian complements possible: {constraints.abelian_possible}",
        f"  nilpotent complements possible: {constraints.nilpotent_possible}",
    ]
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def run_pairing(args: argparse.Namespace) -> int:
    m = parse_manifold(read_input(args))
    pairing = linking_pairing_of(m)
    hyperbolic = is_hyperbolic(pairing)
    payload = {
        "input": str(m),
        "group": pairing.group().to_dict(),
        "pairing": format_pairing(pairing),
        "hyperbolic": hyperbolic,
    }
    text = f"{m}\n  torsion = {pairing.group()}\n  pairing = {format_pairing(pairing)}\n  hyperbolic: {hyperbolic}"
    emit(args, payload, text)
    return EXIT_OK


def run_verdict(args: argparse.Namespace) -> int:
    if args.batch:
        read_input(args)
        return run_verdict_batch(args)
    m = parse_manifold(read_input(args))
    verdicts = evaluate(m, args.category, args.conj_bound, PARTITION_CAP)
    limited = any(v.limited_by_bound for v in verdicts)
    payload = {"input": str(m), "verdicts": [v.to_dict() for v in verdicts], "limited_by_bound": limited}
    lines = [f"{m}"]
    for v in verdicts:
        lines.append(f"  {v.category.value}: {v.status.value}")
        for r in v.reasons:
            if r.passed is None:
                continue
            mark = "pass" if r.passed else "FAIL"
            lines.append(f"    [{mark}] {r.id}: {r.citation}")
            if r.detail:
                lines.append(f"           {r.detail}")
    if limited:
        lines.append("  undecided because a search bound was reached; try a larger --conj-bound")
    emit(args, payload, "\n".join(lines))
    return EXIT_UNKNOWN_BOUND if limited else EXIT_OK


def run_verdict_batch(args: argparse.Namespace) -> int:
    path = Path(args.batch)
    if not path.is_file():
        raise InputError(f"batch file not found: {path}")
    service = ReportService(args.category, args.conj_bound, PARTITION_CAP)
    df = service.evaluate_batch(path.read_text(encoding="utf-8").splitlines())
    service.export(df, args.out)
    emit(args, {"rows": json.loads(df.to_json(orient="records"))}, df.to_string(index=False))
    if (df["error"] != "").any():
        return EXIT_INPUT_ERROR
    if "limited" in df.columns and df["limited"].any():
        return EXIT_UNKNOWN_BOUND
    return EXIT_OK


def run_realize(args: argparse.Namespace) -> int:
    pairing = parse_pairing(read_input(args))
    mode = EpsilonMode.ZERO if args.mode == "zero" else EpsilonMode.NONZERO
    result = realize(pairing, mode, args.oracle_bound)
    payload = {"target": format_pairing(pairing), **result.to_dict()}
    summary = result.to_dict()
    lines = [
        f"target   {format_pairing(pairing)}",
        f"data     {result.data}",
        f"e(M)     {summary['epsilon']}",
        f"verified {result.verified} by {result.verification_method} after {result.candidates_tried} candidate(s)",
    ]
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def run_nilpotent(args: argparse.Namespace) -> int:
    if bool(args.semidirect) == bool(args.abelian):
        raise InputError("give exactly one of --semidirect m,n and --abelian d1,d2,...")
    p = parse_field(args.field)
    if args.abelian:
        group = FiniteAbelianGroup.from_orders(parse_int_list(args.abelian, "--abelian"))
        profile = betti_fp_abelian(group, RATIONALS if p is None else p)
        payload = {"group": str(group), "h2": h2_abelian(group).to_dict(), "betti": profile.to_dict()}
        text = f"A = {group}\n  H_2(A) = {h2_abelian(group)}\n  over {field_label(profile.field)}: b1 = {profile.b1}, b2 = {profile.b2}"
        emit(args, payload, text)
        return EXIT_OK

    values = parse_int_list(args.semidirect, "--semidirect")
    if len(values) != 2:
        raise InputError("--semidirect expects m,n")
    g = SemidirectGroup.cyclic(*values)
    if p is not None:
        profile = wang_betti(g, p)
        payload = {"group": str(g), "betti": profile.to_dict()}
        emit(args, payload, f"{g} over {field_label(p)}: b1 = {profile.b1}, b2 = {profile.b2}")
        return EXIT_OK
    report = homologically_balanced(g)
    h2 = integral_h2(g)
    payload = {**report.to_dict(), "h2": h2.to_dict()}
    lines = [f"{g}", f"  H_2 = {h2}"]
    lines += [f"  over {field_label(pr.field)}: b1 = {pr.b1}, b2 = {pr.b2}" for pr in report.profiles]
    lines.append(f"  balanced: {report.balanced}  nilpotent: {report.nilpotent}")
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def run_selftest_command(args: argparse.Namespace) -> int:
    results = run_selftest()
    passed = sum(1 for r in results if r.passed)
    payload = {"passed": passed, "failed": len(results) - passed, "checks": [r.to_dict() for r in results]}
    lines = [f"{'ok' if r.passed else 'FAILED':6} {r.name:32} {r.seconds:7.2f}s  {r.detail}" for r in results]
    lines.append(f"{passed}/{len(results)} checks passed")
    emit(args, payload, "\n".join(lines))
    return EXIT_OK if passed == len(results) else EXIT_INPUT_ERROR


# ==============================================================================
# ARGUMENT PARSING
# ==============================================================================


def build_parser() -> argparse.ArgumentParser:
    """
    Create the argument parser with one sub-command per operation.

    Returns:
        The configured parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print a JSON report")
    common.add_argument("--oracle-bound", type=int, default=ORACLE_BOUND, help="Largest group order for brute-force oracles")
    common.add_argument("--conj-bound", type=int, default=CONJ_BOUND, help="Entry bound for the conjugator search")
    common.add_argument("--category", choices=CATEGORY_OPTIONS, default=DEFAULT_CATEGORY, help="Verdict categories to report")

    parser = argparse.ArgumentParser(description="Seifert embedding toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, help_text in (
        ("homology", run_homology, "First homology and complement constraints"),
        ("pairing", run_pairing, "Linking pairing on the torsion of H_1"),
    ):
        cmd = sub.add_parser(name, parents=[common], help=help_text)
        cmd.add_argument("input", help="Manifold description, e.g. \"M(0; (3,1) (3,-1))\"")
        cmd.set_defaults(handler=handler)

    verdict = sub.add_parser("verdict", parents=[common], help="Embedding verdicts in S^4")
    verdict.add_argument("input", nargs="?", help="Manifold description")
    verdict.add_argument("--batch", help="File with one manifold description per line")
    verdict.add_argument("--out", help="Write the batch table to CSV (or JSON lines for .json)")
    verdict.set_defaults(handler=run_verdict)

    realize_cmd = sub.add_parser("realize", parents=[common], help="Seifert data realizing a linking pairing")
    realize_cmd.add_argument("input", help="Pairing literal, e.g. \"sum(lw(1/3),lw(1/3))\"")
    realize_cmd.add_argument("--mode", choices=["zero", "nonzero"], default="zero", help="Euler number zero or not")
    realize_cmd.set_defaults(handler=run_realize)

    nilpotent = sub.add_parser("nilpotent", parents=[common], help="Betti numbers and homological balance")
    nilpotent.add_argument("--semidirect", help="m,n for Z/m x|_n Z")
    nilpotent.add_argument("--abelian", help="d1,d2,... for a finite abelian group (0 means Z)")
    nilpotent.add_argument("--field", help="Q or a prime p")
    nilpotent.set_defaults(handler=run_nilpotent)

    selftest = sub.add_parser("selftest", parents=[common], help="Run the acceptance checks")
    selftest.set_defaults(handler=run_selftest_command)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the sub-command and map errors to exit codes.

    Returns:
        0 when computed, 1 on input errors, 2 when a search bound left the verdict Unknown
    """
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (UndecidedError, OracleBoundError) as e:
        print(f"unknown: {e}", file=sys.stderr)
        return EXIT_UNKNOWN_BOUND
    except ToolkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
