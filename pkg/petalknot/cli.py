#!/usr/bin/env python3
"""
petalknot command line.

Every subcommand builds a ``Report``; the report is printed as rich tables
(text), JSON (with a ``"schema"`` version), CSV or SVG depending on
``--format``. Errors are printed in red on stderr and mapped to the exit
codes in ``petalknot.errors``.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from functools import reduce as fold
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from rich.box import ROUNDED
from rich.console import Console
from rich.table import Table
from termcolor import colored

from . import configure_logging, setup_container
from .config_loader import Config, load_config
from .container import inject
from .errors import EXIT_INPUT, EXIT_OK, InvalidInputError, PetalKnotError, VerificationError
from .interfaces import FileSystem
from .invariants import Fingerprint, fingerprint
from .petalknot_logging import get_logger, operation
from .petalperm import PetalPermutation, class_members, is_extremal, parse_permutation
from .planar import PlanarDiagram, format_gauss, gauss_code, parse_gauss, pd_from_gauss
from .resolve import PerturbationSchedule, resolve_with_retry, reverse_petal_diagram
from .simplify import (
    StarContext,
    crossing_bound,
    petal_reduced_diagram,
    redraw_as_star,
    reduce_r1_r2,
    remove_monogons,
    strand_removal,
)
from .svg_export import render_petal_svg, render_svg
from .tablekit import Match, classify, enumerate_classes, knot_table
from .uberdiag import UbercrossingDiagram, compose_simple, from_petal, ribbons, unfold_top
from .unknot import UnknottingCertificate, unknotting_sequence

logger = get_logger(__name__)

SCHEMA_VERSION = 1
SELF_CHECK_SEEDS = 3

FORMATS = {
    "identify": ("text", "json"),
    "invariants": ("text", "json"),
    "reduce": ("text", "json"),
    "unknot": ("text", "json"),
    "compose": ("text", "json"),
    "enumerate": ("text", "json", "csv"),
    "classify": ("text", "json", "csv"),
    "reverse-petal": ("text", "json"),
    "export": ("svg",),
}


@dataclass
class CommandConfig:
    """Everything one invocation needs, validated before any work starts."""

    subcommand: str
    args: argparse.Namespace
    config: Config
    format: str
    seed: int
    budget: int
    p_cap: int
    verbose: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace, config: Config) -> "CommandConfig":
        allowed = FORMATS[args.command]
        wanted = args.format or config.output.format
        if args.format is None and wanted not in allowed:
            wanted = allowed[0]
        if wanted not in allowed:
            raise InvalidInputError(
                f"{args.command} supports --format {'|'.join(allowed)}, got {wanted}"
            )
        budget = args.budget if args.budget is not None else config.invariants.bracket_budget
        if budget < 0:
            raise InvalidInputError(f"bracket budget cannot be negative, got {budget}")
        p_cap = getattr(args, "p_cap", None) or config.census.p_cap
        if p_cap > config.census.p_max:
            raise InvalidInputError(
                f"--p-cap {p_cap} is above the census limit p_max = {config.census.p_max}"
            )
        return cls(
            subcommand=args.command,
            args=args,
            config=config,
            format=wanted,
            seed=args.seed if args.seed is not None else config.output.seed,
            budget=budget,
            p_cap=p_cap,
            verbose=args.verbose,
        )

    def schedule(self, n: int, seed: Optional[int] = None) -> PerturbationSchedule:
        settings = self.config.resolve
        seed = self.seed if seed is None else seed
        if seed == 0:
            return PerturbationSchedule.default(n, settings.offset_step, settings.tolerance)
        return PerturbationSchedule.seeded(n, seed, settings.jitter_span, settings.tolerance)

    def resolve(self, diagram: UbercrossingDiagram, seed: Optional[int] = None) -> PlanarDiagram:
        settings = self.config.resolve
        seed = self.seed if seed is None else seed
        schedule = self.schedule(diagram.n, seed)
        return resolve_with_retry(
            diagram, schedule, settings.max_retries, seed, settings.jitter_span
        )


@dataclass
class Report:
    command: str
    data: Dict[str, Any]
    csv: Optional[str] = None
    svg: Optional[str] = None
    notes: List[str] = field(default_factory=list)


# -- inputs ----------------------------------------------------------------------


def _read_json(path: str) -> Any:
    fs = inject(FileSystem)
    try:
        return json.loads(fs.read_file(Path(path)))
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{path} is not valid JSON: {e}") from None


def _match_json(match: Optional[Match]) -> Dict[str, Any]:
    if match is None:
        return {"knot": None, "chirality": None}
    return {"knot": match.label, "chirality": match.chirality}


def _single_permutation(cmd: CommandConfig) -> PetalPermutation:
    return parse_permutation(cmd.args.permutation)


# -- subcommands -------------------------------------------------------------------


def _self_check(
    cmd: CommandConfig, diagram: UbercrossingDiagram, expected: Fingerprint
) -> List[int]:
    seeds = [cmd.seed + k for k in range(1, SELF_CHECK_SEEDS + 1)]
    for seed in seeds:
        got = fingerprint(cmd.resolve(diagram, seed), cmd.budget)
        if got != expected:
            raise VerificationError(
                f"fingerprint under schedule seed {seed} differs from the reduced diagram"
            )
    return seeds


def run_identify(cmd: CommandConfig) -> Report:
    sigma = _single_permutation(cmd)
    pd = petal_reduced_diagram(sigma, cmd.schedule(sigma.p))
    fp = fingerprint(pd, cmd.budget)
    certificate = unknotting_sequence(sigma)
    data: Dict[str, Any] = {
        "permutation": sigma.to_json(),
        "strands": sigma.p,
        "crossings": pd.crossing_count,
        "crossing_bound": crossing_bound(sigma.p),
        **_match_json(knot_table().identify(fp)),
        "fingerprint": fp.to_json(),
        "unknotting": {"cost": certificate.total_cost, "bound": certificate.bound},
    }
    report = Report("identify", data)
    if cmd.args.self_check:
        data["self_check"] = {"seeds": _self_check(cmd, from_petal(sigma), fp), "passed": True}
    return report


def _invariants_input(cmd: CommandConfig) -> PlanarDiagram:
    args = cmd.args
    given = [name for name in ("permutation", "pd", "gauss", "diagram") if getattr(args, name)]
    if len(given) != 1:
        raise InvalidInputError("give exactly one of PERMUTATION, --pd, --gauss or --diagram")
    if args.permutation:
        sigma = parse_permutation(args.permutation)
        return petal_reduced_diagram(sigma, cmd.schedule(sigma.p))
    if args.pd:
        return PlanarDiagram.from_json(_read_json(args.pd))
    if args.gauss:
        return pd_from_gauss(parse_gauss(args.gauss))
    return cmd.resolve(UbercrossingDiagram.from_json(_read_json(args.diagram)))


def run_invariants(cmd: CommandConfig) -> Report:
    pd = _invariants_input(cmd)
    fp = fingerprint(pd, cmd.budget)
    data = {
        "crossings": pd.crossing_count,
        "reduced_crossings": reduce_r1_r2(pd).crossing_count,
        "writhe": pd.writhe,
        "gauss": format_gauss(gauss_code(pd)),
        "fingerprint": fp.to_json(),
        **fp.describe(),
        **_match_json(knot_table().identify(fp)),
    }
    return Report("invariants", data)


def run_reduce(cmd: CommandConfig) -> Report:
    sigma = _single_permutation(cmd)
    diagram = from_petal(sigma)
    ctx = StarContext(diagram)
    pd = redraw_as_star(cmd.resolve(diagram), ctx)
    stages = [{"stage": "resolve", "crossings": pd.crossing_count}]
    pd, ctx = remove_monogons(pd, ctx)
    stages.append({"stage": "remove monogons", "crossings": pd.crossing_count})
    for i in range(1, (sigma.p - 3) // 2 + 1):
        pd, ctx = strand_removal(pd, ctx, i)
        stages.append(
            {
                "stage": f"strand removal {i}",
                "strand": ctx.removed[-1],
                "crossings": pd.crossing_count,
            }
        )
    reduced = reduce_r1_r2(pd)
    stages.append({"stage": "reidemeister I/II", "crossings": reduced.crossing_count})
    data = {
        "permutation": sigma.to_json(),
        "crossing_bound": crossing_bound(sigma.p),
        "stages": stages,
        "pd": pd.to_json(),
    }
    return Report("reduce", data)


def run_unknot(cmd: CommandConfig) -> Report:
    args = cmd.args
    if bool(args.permutation) == bool(args.replay):
        raise InvalidInputError("give either PERMUTATION or --replay FILE")
    if args.replay:
        payload = _read_json(args.replay)
        if isinstance(payload, dict) and "certificate" in payload:
            payload = payload["certificate"]
        certificate = UnknottingCertificate.from_json(payload)
        certificate.replay()
        return Report("unknot", {"certificate": certificate.to_json(), "verified": True})
    certificate = unknotting_sequence(parse_permutation(args.permutation))
    certificate.replay()
    return Report("unknot", {"certificate": certificate.to_json(), "verified": True})


def run_compose(cmd: CommandConfig) -> Report:
    summands = [parse_permutation(text) for text in cmd.args.permutations]
    if len(summands) < 2:
        raise InvalidInputError("compose needs at least two permutations")
    with operation("compose", logger) as op:
        op.add_context(summands=len(summands))
        pieces = [unfold_top(from_petal(sigma)) for sigma in summands]
        composed = fold(compose_simple, pieces)
        parts = [fingerprint(cmd.resolve(piece), cmd.budget) for piece in pieces]
        expected = fold(Fingerprint.connected_sum, parts)
        got = fingerprint(cmd.resolve(composed), cmd.budget)
    if got != expected:
        raise VerificationError(
            "fingerprint of the composed diagram is not the product of the summands"
        )
    table = knot_table()
    data = {
        "summands": [
            {"permutation": sigma.to_json(), "strands": piece.n, **_match_json(table.identify(fp))}
            for sigma, piece, fp in zip(summands, pieces, parts)
        ],
        "strands": composed.n,
        "diagram": composed.to_json(),
        "ribbons": sorted({r.handedness.value for r in ribbons(composed)}),
        "fingerprint": got.to_json(),
        **got.describe(),
        **_match_json(table.identify(got)),
        "multiplicative": True,
    }
    return Report("compose", data)


def run_enumerate(cmd: CommandConfig) -> Report:
    rows = [
        {
            "permutation": str(sigma),
            "class_size": len(class_members(sigma)),
            "extremal": is_extremal(sigma),
        }
        for sigma in enumerate_classes(cmd.args.p)
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["permutation", "class_size", "extremal"])
    for r in rows:
        writer.writerow([r["permutation"], r["class_size"], str(r["extremal"]).lower()])
    return Report("enumerate", {"p": cmd.args.p, "classes": rows}, csv=buf.getvalue())


def run_classify(cmd: CommandConfig) -> Report:
    p = cmd.args.p
    if p > cmd.p_cap:
        raise InvalidInputError(
            f"p = {p} is above the census cap {cmd.p_cap}; pass --p-cap {p} to run it"
        )
    census = cmd.config.census
    workers = cmd.args.workers or census.workers
    checkpoint_dir = cmd.args.checkpoint_dir or (census.checkpoint_dir if p == 9 else None)
    result = classify(p, cmd.budget, workers, checkpoint_dir)
    table = knot_table()
    report = Report("classify", result.to_json(table), csv=result.to_csv(table))
    if result.flagged:
        report.notes.append(
            f"{len(result.flagged)} classes exceeded the bracket budget {cmd.budget}"
        )
    return report


def run_reverse_petal(cmd: CommandConfig) -> Report:
    sigma = _single_permutation(cmd)
    pd = reverse_petal_diagram(sigma)
    fp = fingerprint(pd, cmd.budget)
    reference = fingerprint(petal_reduced_diagram(sigma, cmd.schedule(sigma.p)), cmd.budget)
    if fp != reference:
        raise VerificationError("sideways diagram and petal diagram give different fingerprints")
    data = {
        "permutation": sigma.to_json(),
        "crossings": pd.crossing_count,
        "reduced_crossings": reduce_r1_r2(pd).crossing_count,
        "pd": pd.to_json(),
        "fingerprint": fp.to_json(),
        **_match_json(knot_table().identify(fp)),
    }
    return Report("reverse-petal", data)


def run_export_svg(cmd: CommandConfig) -> Report:
    args = cmd.args
    if bool(args.permutation) == bool(args.diagram):
        raise InvalidInputError("give either PERMUTATION or --diagram FILE")
    canvas = cmd.config.output.svg_canvas
    if args.diagram:
        svg = render_svg(UbercrossingDiagram.from_json(_read_json(args.diagram)), canvas)
    elif args.unfold:
        sigma = parse_permutation(args.permutation)
        svg = render_svg(unfold_top(from_petal(sigma)), canvas, title=f"{sigma} unfolded")
    else:
        svg = render_petal_svg(parse_permutation(args.permutation), canvas)
    if args.output:
        inject(FileSystem).write_file(Path(args.output), svg)
        return Report("export", {"output": args.output}, svg="")
    return Report("export", {}, svg=svg)


COMMANDS: Dict[str, Callable[[CommandConfig], Report]] = {
    "identify": run_identify,
    "invariants": run_invariants,
    "reduce": run_reduce,
    "unknot": run_unknot,
    "compose": run_compose,
    "enumerate": run_enumerate,
    "classify": run_classify,
    "reverse-petal": run_reverse_petal,
    "export": run_export_svg,
}


# -- output --------------------------------------------------------------------------


def _kv_table(title: str, rows: Sequence[Sequence[Any]]) -> Table:
    table = Table(title=title, box=ROUNDED, show_header=False)
    table.add_column("Field", style="bold cyan")
    table.add_column("Value")
    for key, value in rows:
        table.add_row(str(key), "-" if value is None else str(value))
    return table


def _knot_text(data: Dict[str, Any]) -> str:
    if data.get("knot") is None:
        return "not in table"
    return f"{data['knot']} ({data['chirality']})"


def _render_text(console: Console, report: Report) -> None:
    data = report.data
    if report.command == "identify":
        fp = Fingerprint.from_json(data["fingerprint"]).describe()
        unknotting = data["unknotting"]
        rows = [
            ("Knot", _knot_text(data)),
            ("Strands", data["strands"]),
            ("Crossings", f"{data['crossings']} (bound {data['crossing_bound']})"),
            ("Determinant", fp["determinant"]),
            ("Alexander", fp["alexander"]),
            ("Jones", fp["jones"]),
            ("Unknotting cost", f"{unknotting['cost']} (bound {unknotting['bound']})"),
        ]
        if "self_check" in data:
            seeds = ", ".join(str(s) for s in data["self_check"]["seeds"])
            rows.append(("Self-check seeds", seeds))
        title = "(" + ",".join(str(v) for v in data["permutation"]) + ")"
        console.print(_kv_table(title, rows))
    elif report.command in ("invariants", "reverse-petal"):
        rows = [
            ("Knot", _knot_text(data)),
            ("Crossings", data["crossings"]),
            ("After Reidemeister I/II", data["reduced_crossings"]),
        ]
        if "writhe" in data:
            rows.append(("Writhe", data["writhe"]))
        fp = Fingerprint.from_json(data["fingerprint"]).describe()
        rows += [
            ("Determinant", fp["determinant"]),
            ("Alexander", fp["alexander"]),
            ("Jones", fp["jones"]),
        ]
        console.print(_kv_table(report.command, rows))
    elif report.command == "reduce":
        table = Table(
            title=f"bound {data['crossing_bound']}", box=ROUNDED, header_style="bold magenta"
        )
        table.add_column("Stage", style="cyan")
        table.add_column("Crossings", justify="right")
        for stage in data["stages"]:
            table.add_row(stage["stage"], str(stage["crossings"]))
        console.print(table)
    elif report.command == "unknot":
        cert = data["certificate"]
        table = Table(title=f"cost {cert['total_cost']} (bound {cert['bound']})", box=ROUNDED)
        table.add_column("Move", style="cyan")
        table.add_column("Detail")
        for move in cert["moves"]:
            detail = ", ".join(f"{k}={v}" for k, v in move.items() if k != "kind")
            table.add_row(move["kind"], detail)
        console.print(table)
        console.print(f"final {tuple(cert['final'])}, replay verified")
    elif report.command == "compose":
        rows = [
            ("Summands", " # ".join(s["knot"] or "?" for s in data["summands"])),
            ("Strands", data["strands"]),
            ("Ribbons", ", ".join(data["ribbons"])),
            ("Determinant", data["determinant"]),
            ("Alexander", data["alexander"]),
            ("Jones", data["jones"]),
        ]
        console.print(_kv_table("compose", rows))
    elif report.command == "enumerate":
        table = Table(title=f"p = {data['p']}: {len(data['classes'])} classes", box=ROUNDED)
        table.add_column("Representative", style="cyan")
        table.add_column("Class size", justify="right")
        table.add_column("Extremal", justify="center")
        for row in data["classes"]:
            extremal = "yes" if row["extremal"] else ""
            table.add_row(row["permutation"], str(row["class_size"]), extremal)
        console.print(table)
    elif report.command == "classify":
        table = Table(title=f"p = {data['p']}: {data['total_classes']} classes", box=ROUNDED)
        table.add_column("Knot", style="cyan")
        table.add_column("Classes", justify="right")
        table.add_column("Example")
        for row in data["rows"]:
            example = "(" + ",".join(str(v) for v in row["example"]) + ")"
            table.add_row(row["knot"] or "?", str(row["class_count"]), example)
        console.print(table)
    elif report.command == "export" and data.get("output"):
        console.print(f"wrote {data['output']}")


def emit(cmd: CommandConfig, report: Report, console: Optional[Console] = None) -> None:
    if cmd.format == "json":
        payload = {"schema": SCHEMA_VERSION, "command": report.command, **report.data}
        print(json.dumps(payload, indent=2))
    elif cmd.format == "csv":
        sys.stdout.write(report.csv or "")
    elif cmd.format == "svg" and report.svg:
        sys.stdout.write(report.svg)
    else:
        _render_text(console or Console(), report)
    for note in report.notes:
        print(colored(note, "yellow"), file=sys.stderr)


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv", "svg"], help="Output format")
    common.add_argument(
        "--seed", type=int, help="Perturbation seed (0 is the fixed default schedule)"
    )
    common.add_argument("--budget", type=int, help="Bracket crossing budget")
    common.add_argument("--config", help="Path to configuration file")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")

    parser = argparse.ArgumentParser(
        prog="petalknot",
        description="Petal and übercrossing diagrams of knots",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  petalknot identify "1,3,5,2,4"
  petalknot compose "1,3,5,2,4" "1,3,5,2,4" --format json
  petalknot classify 5
  petalknot export "1,3,5,2,4" --unfold > prepetal.svg
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "identify", parents=[common], help="Identify the knot of a petal permutation"
    )
    p.add_argument("permutation")
    p.add_argument(
        "--self-check", action="store_true", help="Compare fingerprints under three more seeds"
    )

    p = sub.add_parser("invariants", parents=[common], help="Fingerprint of a diagram")
    p.add_argument("permutation", nargs="?")
    p.add_argument("--pd", metavar="FILE", help="PD code JSON")
    p.add_argument(
        "--gauss", metavar="TEXT", help='Signed Gauss code such as "O1+ U2+ O3+ U1+ O2+ U3+"'
    )
    p.add_argument("--diagram", metavar="FILE", help="Übercrossing diagram JSON")

    p = sub.add_parser("reduce", parents=[common], help="Crossing counts through the star pipeline")
    p.add_argument("permutation")

    p = sub.add_parser("unknot", parents=[common], help="Unknotting certificate")
    p.add_argument("permutation", nargs="?")
    p.add_argument("--replay", metavar="FILE", help="Verify a saved certificate")

    p = sub.add_parser("compose", parents=[common], help="Connected sum of petal knots")
    p.add_argument("permutations", nargs="+")

    p = sub.add_parser("enumerate", parents=[common], help="Difference classes at p")
    p.add_argument("p", type=int)

    p = sub.add_parser("classify", parents=[common], help="Knot census at p")
    p.add_argument("p", type=int)
    p.add_argument("--workers", type=int, help="Worker processes")
    p.add_argument("--checkpoint-dir", help="Directory for shard checkpoints")
    p.add_argument("--p-cap", type=int, help="Largest p to classify without complaint")

    p = sub.add_parser("reverse-petal", parents=[common], help="Sideways drawing of the pre-petal")
    p.add_argument("permutation")

    p = sub.add_parser("export", parents=[common], help="SVG drawing")
    p.add_argument("permutation", nargs="?")
    p.add_argument("--diagram", metavar="FILE", help="Übercrossing diagram JSON")
    p.add_argument("--unfold", action="store_true", help="Draw the pre-petal diagram")
    p.add_argument("--output", "-o", help="Write to a file instead of stdout")
    return parser


def _error(message: str) -> None:
    print(colored(f"error: {message}", "red"), file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = load_config(args.config)
    except (FileNotFoundError, ValueError, IOError) as e:
        _error(f"configuration: {e}")
        return EXIT_INPUT
    setup_container(config)

    try:
        cmd = CommandConfig.from_args(args, config)
        report = COMMANDS[cmd.subcommand](cmd)
        emit(cmd, report)
    except PetalKnotError as e:
        logger.error("Command failed", command=args.command, error=str(e), exit_code=e.exit_code)
        _error(str(e))
        return e.exit_code
    except IOError as e:
        _error(str(e))
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
