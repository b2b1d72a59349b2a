"""Command-line front end.

Exit codes: 0 success (or feasible), 1 infeasible, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .encode import to_cnf, to_lp_mis, to_lp_mis_cliques, to_lp_optimize
from .graph import (
    augment_within_components,
    build_constraint_graph,
    build_interference_graph,
    interference_subgraph,
    stats,
)
from .ingest import GeneratorConfig, ParseError, generate, load_instance, load_native, save_instance
from .model import offsets_of, restrict_channels, restrict_stations
from .oracle import BudgetExceeded, enumerate_feasible
from .preprocess import peel_underconstrained
from .solver import feasibility, optimize

OUTPUT_VERSION = 1


class CliError(Exception):
    pass


def _add_input(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input (an FCC-style file pair or one native file)")
    g.add_argument("--domain", metavar="FILE", help="domain constraints, DOMAIN,<station>,<channels...>")
    g.add_argument("--interference", metavar="FILE", help="interference constraints, CO/ADJ±k lines")
    g.add_argument("--dialect", choices=["simple", "paired", "auto"], default="simple",
                   help="interference line layout (default: simple)")
    g.add_argument("--instance", metavar="FILE", help="native JSON instance")


def _add_subproblem(p: argparse.ArgumentParser) -> None:
    p.add_argument("--clearing-target", type=int, metavar="N", help="only allow channels <= N")
    p.add_argument("--clear-stations", metavar="FILE",
                   help="file listing station ids to clear (everything else is repacked)")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", metavar="FILE", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repack", description="Exact TV-station repacking via independent sets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and normalize, report warnings")
    _add_input(p)
    _add_output(p)

    p = sub.add_parser("stats", help="structural statistics of a graph")
    _add_input(p)
    _add_subproblem(p)
    p.add_argument("--graph", choices=["g", "gi", "gi-prime", "h"], default="g")
    _add_output(p)

    p = sub.add_parser("peel", help="find underconstrained stations")
    _add_input(p)
    _add_subproblem(p)
    p.add_argument("--rule", choices=["weighted", "degree"], default="weighted")
    p.add_argument("--single-pass", action="store_true", help="test each station once, no iteration")
    _add_output(p)

    p = sub.add_parser("solve", help="decide feasibility or minimize the highest channel")
    _add_input(p)
    _add_subproblem(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--feasibility", action="store_true", help="(default)")
    mode.add_argument("--optimize", action="store_true")
    p.add_argument("--no-peel", action="store_true")
    p.add_argument("--no-decompose", action="store_true")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (output not reproducible)")
    p.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    _add_output(p)

    p = sub.add_parser("export", help="write a SAT or zero-one program")
    _add_input(p)
    _add_subproblem(p)
    fmt = p.add_mutually_exclusive_group(required=True)
    fmt.add_argument("--cnf", action="store_const", dest="fmt", const="cnf")
    fmt.add_argument("--lp-mis", action="store_const", dest="fmt", const="lp-mis")
    fmt.add_argument("--lp-cliques", action="store_const", dest="fmt", const="lp-cliques")
    fmt.add_argument("--lp-optimize", action="store_const", dest="fmt", const="lp-optimize")
    _add_output(p)

    p = sub.add_parser("gen", help="generate a random native instance")
    p.add_argument("--stations", type=int, required=True)
    p.add_argument("--channels", type=int, required=True)
    p.add_argument("--ddensity", type=float, default=0.5, help="per-channel domain probability")
    p.add_argument("--idensity", type=float, default=0.1, help="per-candidate constraint probability")
    p.add_argument("--offsets", type=int, default=0, help="use offsets -k..k")
    p.add_argument("--seed", type=int, default=0)
    _add_output(p)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load(args):
    if args.instance and (args.domain or args.interference):
        raise CliError("give either --instance or --domain/--interference, not both")
    if args.instance:
        return load_native(_read(args.instance), source=args.instance)
    if not args.domain:
        raise CliError("no input: pass --instance or --domain")
    try:
        inter = _read(args.interference) if args.interference else None
        return load_instance(_read(args.domain), inter, dialect=args.dialect)
    except ParseError as exc:
        src = args.domain if exc.source is None else exc.source
        raise CliError(f"{src}: {exc}") from None


def _subproblem(instance, args):
    if getattr(args, "clear_stations", None):
        text = _read(args.clear_stations)
        ids = {int(t) for t in re.split(r"[\s,]+", text) if t}
        instance = restrict_stations(instance, set(instance.stations) - ids)
    if getattr(args, "clearing_target", None) is not None:
        instance = restrict_channels(instance, args.clearing_target)
    return instance


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _run(args) -> int:
    if args.command == "gen":
        config = GeneratorConfig(args.stations, args.channels, args.ddensity, args.idensity,
                                 frozenset(range(-args.offsets, args.offsets + 1)), args.seed)
        _emit(args, save_instance(generate(config)))
        return 0

    instance, warnings = _load(args)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)

    if args.command == "validate":
        prof = offsets_of(instance)
        _emit(args, _json({
            "version": OUTPUT_VERSION,
            "stations": len(instance.stations),
            "channels": len(instance.channels),
            "constraints": len(instance.constraints),
            "offsets": sorted(prof.offsets),
            "offsets_symmetric": prof.symmetric,
            "empty_domains": list(instance.empty_domain_stations),
            "warnings": warnings,
        }))
        return 0

    instance = _subproblem(instance, args)

    if args.command == "stats":
        if args.graph == "h":
            view = build_interference_graph(instance)
        else:
            G = build_constraint_graph(instance)
            view = {"g": G, "gi": interference_subgraph(G), "gi-prime": augment_within_components(G)}[args.graph]
        _emit(args, _json({"version": OUTPUT_VERSION, "graph": args.graph, "stations": len(instance.stations),
                           "stats": stats(view).to_dict()}))
        return 0

    if args.command == "peel":
        result = peel_underconstrained(instance, rule=args.rule, single_pass=args.single_pass)
        _emit(args, _json({"version": OUTPUT_VERSION, **result.to_dict()}))
        return 0

    if args.command == "export":
        G = build_constraint_graph(instance)
        doc = {
            "cnf": lambda: to_cnf(G, instance.stations),
            "lp-mis": lambda: to_lp_mis(G),
            "lp-cliques": lambda: to_lp_mis_cliques(G),
            "lp-optimize": lambda: to_lp_optimize(G, instance.stations),
        }[args.fmt]()
        _emit(args, doc.text)
        return 0

    if args.command == "solve":
        options = dict(peel=not args.no_peel, decompose=not args.no_decompose, parallel=args.parallel)
        report = optimize(instance, **options) if args.optimize else feasibility(instance, **options)
        out = report.to_dict(timings=args.timings)
        if args.oracle:
            try:
                ref = enumerate_feasible(instance)
            except BudgetExceeded as exc:
                raise CliError(f"--oracle: {exc}") from None
            agree = ref.is_feasible == report.feasible
            if args.optimize and report.feasible:
                agree = agree and ref.min_cost == report.optimal_cost
            out["oracle"] = {"feasible": ref.is_feasible, "min_cost": ref.min_cost, "agrees": agree}
            if not agree:
                _emit(args, _json(out))
                print("error: solver disagrees with the brute-force oracle", file=sys.stderr)
                return 2
        _emit(args, _json(out))
        return 0 if report.feasible else 1

    raise CliError(f"unknown command {args.command}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (CliError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
