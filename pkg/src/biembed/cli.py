"""Command-line front end.

Exit codes: 0 ok, 2 usage or domain error, 3 search exhausted, 4 search
budget ran out, 5 semantic failure (bad file, wrong index, invalid
certificate), 6 rung-swap repair failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import bounds
from .current import NoConsistentLabeling, WrongIndex, label_circuits
from .derive import DerivedReport, derive, verify_biembedding, verify_rotations
from .family import NotSwappable, RepairFailed, swap_k
from .io import (
    ParseError,
    certificate_json,
    parse_current_graph,
    parse_rotations,
    render_current_graph,
    render_rotations,
)
from .search import DEFAULT_MAX_NODES, EXHAUSTED, TIMEOUT, search_family

OK, USAGE, EXHAUSTED_EXIT, TIMEOUT_EXIT, SEMANTIC, REPAIR = 0, 2, 3, 4, 5, 6
BUDGET_ENV = "CG_SEARCH_BUDGET"

log = logging.getLogger("biembed")


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _read_graph(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}", USAGE) from None
    try:
        return parse_current_graph(text)
    except ParseError as exc:
        raise CliError(f"{path}: {exc}", SEMANTIC) from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError:
        raise CliError(f"{BUDGET_ENV} must be an integer node count, got {raw!r}", USAGE) from None
    if value < 1:
        raise CliError(f"{BUDGET_ENV} must be positive, got {value}", USAGE)
    return value


def _diagnostics(cert) -> str:
    lines = []
    for i in range(1, 7):
        if not cert.e_flags[f"E{i}"]:
            lines.append(f"E{i} fails")
    for label, residues in cert.pair_diagnostics["duplicated"].items():
        if residues:
            lines.append(f"label [{label}]: duplicated residues {list(residues)}")
    for label, residues in cert.pair_diagnostics["missing"].items():
        if residues:
            lines.append(f"label [{label}]: missing residues {list(residues)}")
    for side, tri, con in (("A", cert.triangular_a, cert.connected_a), ("B", cert.triangular_b, cert.connected_b)):
        if not tri:
            lines.append(f"derived embedding of {side} is not triangular")
        if not con:
            lines.append(f"derived embedding of {side} is disconnected")
    if not cert.partition_ok:
        lines.append(
            f"edge partition fails: {len(cert.duplicate_edges)} shared, "
            f"{len(cert.missing_edges)} missing"
        )
    if not cert.genus_check and cert.genus_a is not None and cert.genus_b is not None:
        lines.append("genus disagrees with the vertex-count formula")
    lines.extend(cert.errors)
    return "\n".join(lines)


def cmd_bounds(args) -> int:
    if args.bigenus_lower is not None:
        print(bounds.bigenus_lower(args.bigenus_lower))
    elif args.bichromatic is not None:
        print(bounds.bichromatic_upper(args.bichromatic))
    elif args.b_of_s is not None:
        print(bounds.b_of_s(args.b_of_s))
    else:
        v, g = args.edge_bound
        print(bounds.edge_bound(v, g))
    return OK


def cmd_search(args) -> int:
    if args.s < 0:
        raise CliError(f"--s must be nonnegative, got {args.s}", USAGE)
    if args.threads < 1:
        raise CliError("--threads must be at least 1", USAGE)
    max_nodes = args.max_nodes if args.max_nodes is not None else _default_budget()
    result = search_family(
        args.s,
        max_nodes=max_nodes,
        max_seconds=args.max_seconds,
        threads=args.threads,
        use_arithmetic=not args.no_arithmetic,
        all_solutions=args.all,
        max_solutions=args.max_solutions,
    )
    stats = None
    if args.stats:
        stats = {
            "status": result.status,
            "nodes": result.nodes,
            "seconds": round(result.seconds, 3),
            "rejected": result.rejected,
            "variant": result.variant,
            "solutions": len(result.solutions),
        }
        print(
            f"status {result.status}, {result.nodes} nodes, {result.seconds:.2f}s, "
            f"{len(result.solutions)} solution(s)",
            file=sys.stderr,
        )
    if result.pair is None:
        if result.status == TIMEOUT:
            print(f"search budget exhausted after {result.nodes} nodes", file=sys.stderr)
            return TIMEOUT_EXIT
        print(f"no completion exists in any template ({result.nodes} nodes)", file=sys.stderr)
        return EXHAUSTED_EXIT if result.status == EXHAUSTED else TIMEOUT_EXIT
    out = Path(args.out)
    ga, gb = result.pair
    _write(out / "A.cg", render_current_graph(ga))
    _write(out / "B.cg", render_current_graph(gb))
    _write(out / "certificate.json", certificate_json(result.certificate, stats))
    if args.all:
        for i, (a, b) in enumerate(result.solutions, start=1):
            _write(out / "all" / f"{i:05d}_A.cg", render_current_graph(a))
            _write(out / "all" / f"{i:05d}_B.cg", render_current_graph(b))
        print(f"{len(result.solutions)} completions")
    g_a, g_b = result.certificate.genera
    print(f"found: genera {g_a}, {g_b}; written to {out}")
    if args.all and result.status == TIMEOUT:
        return TIMEOUT_EXIT
    return OK


def cmd_verify(args) -> int:
    ga, gb = _read_graph(args.a), _read_graph(args.b)
    if ga.modulus != gb.modulus:
        raise CliError(f"current groups differ: Z_{ga.modulus} and Z_{gb.modulus}", SEMANTIC)
    cert = verify_biembedding(ga, gb)
    sys.stdout.write(certificate_json(cert))
    if not cert.valid:
        print(_diagnostics(cert), file=sys.stderr)
        return SEMANTIC
    return OK


def cmd_swap(args) -> int:
    out = Path(args.out)
    if args.k == 0:
        # nothing moves: pass the input bytes through untouched
        raw_a, raw_b = Path(args.a).read_bytes(), Path(args.b).read_bytes()
        ga, gb = _read_graph(args.a), _read_graph(args.b)
        cert = verify_biembedding(ga, gb)
        out.mkdir(parents=True, exist_ok=True)
        (out / "A.cg").write_bytes(raw_a)
        (out / "B.cg").write_bytes(raw_b)
    else:
        ga, gb = _read_graph(args.a), _read_graph(args.b)
        try:
            ga, gb, cert = swap_k(ga, gb, args.k)
        except NotSwappable as exc:
            raise CliError(str(exc), USAGE) from None
        except RepairFailed as exc:
            raise CliError(str(exc), REPAIR) from None
        _write(out / "A.cg", render_current_graph(ga))
        _write(out / "B.cg", render_current_graph(gb))
    _write(out / "certificate.json", certificate_json(cert))
    print(f"genera {cert.genus_a}, {cert.genus_b}; vertices {cert.va}, {cert.vb}")
    if not cert.valid:
        print(_diagnostics(cert), file=sys.stderr)
        return SEMANTIC
    return OK


def _print_report(report: DerivedReport) -> None:
    print(f"vertices {report.vertices}")
    print(f"edges {report.edges}")
    print(f"faces {report.faces}")
    print(f"triangular {str(report.triangular).lower()}")
    print(f"connected {str(report.connected).lower()}")
    print(f"genus {report.genus if report.genus is not None else 'undefined'}")


def cmd_derive(args) -> int:
    if args.check_rotations:
        try:
            text = Path(args.check_rotations).read_text(encoding="utf-8")
            rotations = parse_rotations(text)
        except OSError as exc:
            raise CliError(f"{args.check_rotations}: {exc.strerror}", USAGE) from None
        except ParseError as exc:
            raise CliError(f"{args.check_rotations}: {exc}", SEMANTIC) from None
        report = verify_rotations(rotations)
        _print_report(report)
        return OK if report.triangular and report.connected else SEMANTIC
    if args.path is None:
        raise CliError("derive needs a current graph file or --check-rotations", USAGE)
    cg = _read_graph(args.path)
    try:
        de = derive(label_circuits(cg))
    except (WrongIndex, NoConsistentLabeling) as exc:
        raise CliError(f"{args.path}: {exc}", SEMANTIC) from None
    except ValueError as exc:
        raise CliError(f"{args.path}: {exc}", SEMANTIC) from None
    text = render_rotations(de.rotations)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biembed",
        description="Index 3 current graphs and triangular biembeddings of K_n.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate a closed-form bound")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--bigenus-lower", type=int, metavar="N")
    group.add_argument("--bichromatic", type=int, metavar="G")
    group.add_argument("--b-of-s", type=int, metavar="S")
    group.add_argument("--edge-bound", type=int, nargs=2, metavar=("V", "G"))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("search", help="complete a pair of ladder current graphs")
    p.add_argument("--s", type=int, required=True, help="family parameter, n = 24s + 21")
    p.add_argument("--out", default=".", help="output directory (default: current)")
    p.add_argument("--all", action="store_true", help="collect every completion within budget")
    p.add_argument("--max-solutions", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-nodes", type=int, default=None,
                   help=f"node budget (default: ${BUDGET_ENV} or {DEFAULT_MAX_NODES})")
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--no-arithmetic", action="store_true",
                   help="leave rung currents free instead of step-3 sections")
    p.add_argument("--stats", action="store_true", help="report node counts and timing")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="certify a pair of current graph files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("swap", help="exchange k pairs of rungs between the graphs")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_swap)

    p = sub.add_parser("derive", help="write the derived rotation system")
    p.add_argument("path", nargs="?")
    p.add_argument("--out", help="rotation file to write (default: stdout)")
    p.add_argument("--check-rotations", metavar="FILE",
                   help="re-check a rotation file instead of deriving one")
    p.set_defaults(func=cmd_derive)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CliError as exc:
        print(f"biembed: {exc}", file=sys.stderr)
        return exc.code
    except bounds.DomainError as exc:
        print(f"biembed: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
