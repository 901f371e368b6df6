"""
Command-line interface - one subcommand per library operation

Every command prints a JSON report (see core/report.py) on stdout and
exits with the report's exit code; logs go to stderr.

    locdom verify    --graph G --set 0,2 [--set-file F] [--ltd]
    locdom solve     --graph G [--ltd] [--budget-nodes N] [--budget-seconds S] [--threads T]
    locdom construct --graph G [--per-component | --cubic] [--out F] [--format F]
    locdom twins     --graph G
    locdom family    --kind K [--k K] [--r R] [--p P] [--n N] [--i I] [--out F] [--emit-witness]
                     [--solve [--budget-nodes N] [--budget-seconds S]]
    locdom enum      --n N [--cubic | --subcubic] [--any] [--twin-free] [--out F]
    locdom sweep     (--n N [filters] | --input F) [--bound half] [--threads T] [--records]
    locdom convert   --in F --out F [--format F]
    locdom check-report FILE

Precedence:
    --set-file overrides --set; explicit flags override LOCDOM_THREADS.

Graph files are graph6 (.g6, .graph6) or edge lists (.edges, .txt, .el);
other suffixes are sniffed from the content.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional

from core import __version__
from core.config import Settings
from core.construct import construct_for_cubic, construct_half_ld, construct_per_component
from core.enumeration import EnumFilter, enumerate_graphs, sweep_conjecture, sweep_graphs
from core.errors import (
    BadParameter,
    BudgetExceeded,
    EdgeListError,
    Graph6Error,
    HypothesisViolated,
    IndexOutOfRange,
    IsolatedVertex,
    LocDomError,
    LoopEdge,
    NotSubcubic,
    OrderTooLarge,
)
from core.families import KINDS, FamilySpec, generate
from core.graph import Graph, VertexSet
from core.graph_io import (
    format_for_path,
    format_graph,
    read_graph6_stream,
    read_graph_file,
    write_graph6_lines,
    write_text_atomic,
)
from core.locating import ld_number_exact, ltd_number_exact, verify_ld, verify_ltd
from core.report import (
    EXIT_BUDGET,
    EXIT_FAILURE,
    EXIT_HYPOTHESIS,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    EXIT_VIOLATIONS,
    Report,
    check_report_text,
    error_result,
)
from core.twins import (
    check_structure_lemmas,
    classify_hypotheses,
    four_cycles,
    leaves_and_supports,
    triangles,
    twin_report,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class UsageError(Exception):
    """Bad command-line usage; exits 64."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def parse_vertex_set(text: str, n: int) -> VertexSet:
    """Parse ``"0,2,5"`` (whitespace allowed, empty means the empty set)."""
    items = [t for t in text.replace(" ", ",").replace("\n", ",").split(",") if t.strip()]
    try:
        members = [int(t) for t in items]
    except ValueError:
        raise UsageError(f"vertex set must be comma-separated integers, got {text.strip()!r}") from None
    for v in members:
        if not 0 <= v < n:
            raise IndexOutOfRange(v, n)
    return VertexSet.of(n, members)


def _input_summary(path: str, g: Graph) -> dict:
    return {"path": str(path), "n": g.n, "m": g.m, "format": format_for_path(path)}


def _write_graph(path: str, g: Graph, fmt: Optional[str], witness=None, labels=None) -> str:
    fmt = fmt or format_for_path(path)
    write_text_atomic(path, format_graph(g, fmt, witness=witness, labels=labels))
    logger.info("Wrote %s (%s)", path, fmt)
    return fmt


# ---- subcommands ---------------------------------------------------------


def cmd_verify(args, settings: Settings, report: Report) -> int:
    g = read_graph_file(args.graph)
    report.input = _input_summary(args.graph, g)
    text = Path(args.set_file).read_text() if args.set_file else args.set
    if text is None:
        raise UsageError("verify needs --set or --set-file")
    s = parse_vertex_set(text, g.n)
    verdict = verify_ltd(g, s) if args.ltd else verify_ld(g, s)
    report.result = {
        "valid": verdict.is_valid,
        "verdict": str(verdict),
        "failure": verdict.to_dict(),
        "set": list(s),
        "mode": "ltd" if args.ltd else "ld",
    }
    if not verdict.is_valid:
        report.result["error"] = f"set is not {'LTD' if args.ltd else 'LD'}: {verdict}"
        return EXIT_FAILURE
    return EXIT_OK


def cmd_solve(args, settings: Settings, report: Report) -> int:
    g = read_graph_file(args.graph)
    report.input = _input_summary(args.graph, g)
    solver = ltd_number_exact if args.ltd else ld_number_exact
    result = solver(
        g,
        node_budget=args.budget_nodes if args.budget_nodes is not None else settings.node_budget,
        time_budget=args.budget_seconds if args.budget_seconds is not None else settings.time_budget,
        threads=args.threads or settings.threads,
    )
    report.result = result.to_dict()
    report.result["mode"] = "ltd" if args.ltd else "ld"
    report.result["half_order"] = g.n // 2
    return EXIT_OK


def cmd_construct(args, settings: Settings, report: Report) -> int:
    g = read_graph_file(args.graph)
    report.input = _input_summary(args.graph, g)
    if args.per_component:
        cert = construct_per_component(g)
    elif args.cubic:
        cert = construct_for_cubic(g)
    else:
        cert = construct_half_ld(g)
    report.result = cert.to_dict()
    report.result["half_order"] = g.n // 2
    if args.out:
        report.result["written"] = args.out
        _write_graph(args.out, g, args.format, witness=cert.witness)
    if cert.fallback_count:
        logger.info("Construction used %d exact fallbacks: %s", cert.fallback_count, cert.fallback_rules())
    return EXIT_OK


def cmd_twins(args, settings: Settings, report: Report) -> int:
    g = read_graph_file(args.graph)
    report.input = _input_summary(args.graph, g)
    tw = twin_report(g)
    leaves, supports = leaves_and_supports(g)
    result = {
        "twins": tw.to_dict(),
        "leaves": list(leaves),
        "supports": list(supports),
        "triangles": [list(t) for t in triangles(g)],
        "four_cycles": [list(c) for c in four_cycles(g)],
        "classification": classify_hypotheses(g),
    }
    if g.is_subcubic() and tw.is_twin_free:
        result["structure_lemmas"] = check_structure_lemmas(g).to_dict()
    report.result = result
    return EXIT_OK


def cmd_family(args, settings: Settings, report: Report) -> int:
    spec = FamilySpec.parse(args.kind, k=args.k, r=args.r, p=args.p, n=args.n, i=args.i)
    instance = generate(spec)
    report.input = {"family": spec.label()}
    report.result = instance.to_dict()
    if args.solve and report.result["verified"]:
        exact = instance.solve(
            node_budget=args.budget_nodes if args.budget_nodes is not None else settings.node_budget,
            time_budget=args.budget_seconds if args.budget_seconds is not None else settings.time_budget,
            threads=settings.threads,
        )
        report.result["exact"] = exact.to_dict()
    if args.out:
        witness = instance.witness if args.emit_witness else None
        fmt = _write_graph(args.out, instance.graph, args.format, witness=witness, labels=instance.labels)
        report.result["written"] = args.out
        report.result["format"] = fmt
        if args.emit_witness and fmt != "dot":
            witness_path = args.out + ".witness"
            write_text_atomic(witness_path, ",".join(map(str, instance.witness)) + "\n")
            report.result["witness_file"] = witness_path
    if not report.result["verified"]:
        report.result["error"] = f"witness does not verify: {report.result['verdict']}"
        return EXIT_FAILURE
    return EXIT_OK


def _filter_from(args) -> EnumFilter:
    return EnumFilter(
        n=args.n,
        max_degree=3,
        regular=3 if args.cubic else None,
        connected=not args.any,
        twin_free=True if args.twin_free else None,
        open_twin_free=True if args.open_twin_free else None,
        hypothesis_class=True if args.hypothesis_class else None,
    )


def cmd_enum(args, settings: Settings, report: Report) -> int:
    f = _filter_from(args)
    report.input = {"filter": f.describe()}
    lines = write_graph6_lines(enumerate_graphs(f))
    report.result = {"count": len(lines)}
    if args.out:
        write_text_atomic(args.out, "".join(line + "\n" for line in lines))
        report.result["written"] = args.out
    else:
        report.result["graphs"] = lines
    return EXIT_OK


def cmd_sweep(args, settings: Settings, report: Report) -> int:
    threads = args.threads or settings.threads
    if args.input:
        with open(args.input, "rb") as fh:
            graphs = list(read_graph6_stream(fh))
        report.input = {"path": args.input, "graphs": len(graphs), "format": "graph6"}
        sweep = sweep_graphs(graphs, args.input, threads=threads,
                             node_budget=settings.node_budget, progress=args.progress)
    else:
        if args.n is None:
            raise UsageError("sweep needs --n or --input")
        f = _filter_from(args)
        report.input = {"filter": f.describe()}
        sweep = sweep_conjecture(f, bound=args.bound, threads=threads,
                                 node_budget=settings.node_budget, progress=args.progress)
    report.result = sweep.to_dict(include_records=args.records)
    return EXIT_VIOLATIONS if sweep.violations else EXIT_OK


def cmd_convert(args, settings: Settings, report: Report) -> int:
    g = read_graph_file(args.input_path)
    report.input = _input_summary(args.input_path, g)
    fmt = _write_graph(args.out, g, args.format)
    report.result = {"written": args.out, "format": fmt}
    return EXIT_OK


def cmd_check_report(args, settings: Settings, report: Report) -> int:
    problems = check_report_text(Path(args.file).read_text(encoding="utf-8"))
    report.input = {"path": args.file}
    report.result = {"problems": problems}
    if problems:
        report.result["error"] = f"{len(problems)} schema problems"
        return EXIT_FAILURE
    return EXIT_OK


COMMANDS: Dict[str, Callable] = {
    "verify": cmd_verify,
    "solve": cmd_solve,
    "construct": cmd_construct,
    "twins": cmd_twins,
    "family": cmd_family,
    "enum": cmd_enum,
    "sweep": cmd_sweep,
    "convert": cmd_convert,
    "check-report": cmd_check_report,
}


def _add_filters(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--n", type=int, required=required, help="graph order")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--cubic", action="store_true", help="3-regular graphs only")
    kind.add_argument("--subcubic", action="store_true", help="maximum degree <= 3 (default)")
    p.add_argument("--connected", action="store_true", help="connected graphs only (default)")
    p.add_argument("--any", action="store_true", help="include disconnected graphs")
    p.add_argument("--twin-free", action="store_true")
    p.add_argument("--open-twin-free", action="store_true")
    p.add_argument("--hypothesis-class", action="store_true",
                   help="only graphs meeting the construction's hypotheses")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="locdom", description="Locating-dominating sets in subcubic graphs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("verify", help="check a vertex set")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", help="comma-separated vertex indices")
    p.add_argument("--set-file", help="file holding the vertex set (overrides --set)")
    p.add_argument("--ltd", action="store_true", help="check locating-total domination")

    p = sub.add_parser("solve", help="exact minimum LD or LTD set")
    p.add_argument("--graph", required=True)
    p.add_argument("--ltd", action="store_true")
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--budget-seconds", type=float)
    p.add_argument("--threads", type=int)

    p = sub.add_parser("construct", help="LD-set of size at most n/2 with a rule trace")
    p.add_argument("--graph", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--per-component", action="store_true")
    mode.add_argument("--cubic", action="store_true", help="require a cubic input")
    p.add_argument("--out", help="write the graph with the witness marked")
    p.add_argument("--format", choices=["graph6", "edges", "dot"])

    p = sub.add_parser("twins", help="twins, leaves, short cycles and structure checks")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("family", help="generate a family instance")
    p.add_argument("--kind", required=True, choices=list(KINDS))
    for name in ("k", "r", "p", "n", "i"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=["graph6", "edges", "dot"])
    p.add_argument("--emit-witness", action="store_true")
    p.add_argument("--solve", action="store_true", help="also compute the exact value, seeded with the witness")
    p.add_argument("--budget-nodes", type=int)
    p.add_argument("--budget-seconds", type=float)

    p = sub.add_parser("enum", help="enumerate small graphs up to isomorphism")
    _add_filters(p, required=True)
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="solve every enumerated graph and check gamma <= n/2")
    _add_filters(p, required=False)
    p.add_argument("--input", help="graph6 file to sweep instead of enumerating")
    p.add_argument("--bound", default="half", choices=["half"])
    p.add_argument("--threads", type=int)
    p.add_argument("--records", action="store_true", help="include per-graph records")
    p.add_argument("--progress", action="store_true", help="progress bar on stderr")

    p = sub.add_parser("convert", help="convert between graph6, edge list and DOT")
    p.add_argument("--in", dest="input_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["graph6", "edges", "dot"])

    p = sub.add_parser("check-report", help="validate a saved report")
    p.add_argument("file")
    return parser


def _exit_for(exc: Exception) -> int:
    if isinstance(exc, (Graph6Error, EdgeListError, IndexOutOfRange, LoopEdge, UnicodeDecodeError)):
        return EXIT_PARSE
    if isinstance(exc, (HypothesisViolated, NotSubcubic, IsolatedVertex)):
        return EXIT_HYPOTHESIS
    if isinstance(exc, BudgetExceeded):
        return EXIT_BUDGET
    if isinstance(exc, (BadParameter, OrderTooLarge, UsageError)):
        return EXIT_USAGE
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, (RuntimeError, AssertionError)):
        return EXIT_INTERNAL
    return EXIT_FAILURE


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    """Run one command; returns the exit code."""
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if not args.command:
        print(parser.format_usage().strip(), file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT, stream=sys.stderr)
    settings = Settings.from_env()
    report = Report(command=args.command, version=__version__)
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, settings, report)
    except (LocDomError, UsageError, OSError, UnicodeDecodeError, RuntimeError, AssertionError) as exc:
        code = _exit_for(exc)
        extra = {}
        if isinstance(exc, HypothesisViolated):
            extra = {"hypothesis": exc.hypothesis, "structure": list(exc.witness)}
        elif isinstance(exc, BudgetExceeded):
            extra = {
                "upper_bound": exc.upper_bound,
                "lower_bound": exc.lower_bound,
                "best_witness": list(exc.best_witness) if exc.best_witness else None,
                "explored": exc.explored,
            }
        report.result = error_result(str(exc), type(exc).__name__, **extra)
        print(f"locdom {args.command}: {exc}", file=sys.stderr)
    report.timing_s = time.perf_counter() - start
    report.exit_code = code
    print(report.to_json(), file=out)
    return code


if __name__ == "__main__":
    sys.exit(main())
