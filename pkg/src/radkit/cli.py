"""Command-line front end.

Exit status: 0 success, 1 domain error (bad data, infeasible request),
2 usage error. Data goes to stdout or ``--out``; diagnostics to stderr.
Branch numbers on the command line are 1-based positions in ``[branches]``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .emitter import EmitError, EmitOptions, write_model
from .formulation import FormulationKind, add_radiality, build_core_model, model_stats
from .harness import BUNDLED_SYSTEMS, NATIVE_MODES, ManifestEntry, load_system, render_report, run_bench
from .netmodel import Network, NetworkFormatError, NetworkValidationError, errors, to_per_unit, validate
from .powerflow import PowerFlowError, solve_distflow
from .search import BudgetExceeded, SearchError, enumerate_radial, local_search_branch_exchange, multistart
from .topology import Configuration, radiality_clauses

log = logging.getLogger("radkit")

DOMAIN_ERRORS = (
    NetworkFormatError,
    NetworkValidationError,
    PowerFlowError,
    SearchError,
    EmitError,
    ValueError,
    OSError,
)


class UsageError(Exception):
    pass


def _branch_list(text: str, net: Network) -> list[int]:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            k = int(tok)
        except ValueError:
            raise UsageError(f"branch number expected, got {tok!r}") from None
        if not 1 <= k <= net.n_branches:
            raise UsageError(f"branch number {k} outside 1..{net.n_branches}")
        out.append(k - 1)
    return out


def _configuration(args, net: Network) -> Configuration:
    if args.closed is not None and args.open is not None:
        raise UsageError("give either --closed or --open, not both")
    if args.closed is not None:
        return Configuration.from_closed(net, _branch_list(args.closed, net))
    if args.open is not None:
        return Configuration.from_open(net, _branch_list(args.open, net))
    return Configuration.initial(net)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)


def _formulations(text: str) -> list[FormulationKind]:
    if text == "all":
        return list(FormulationKind)
    return [FormulationKind.parse(t) for t in text.split(",") if t.strip()]


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args) -> int:
    net = load_system(args.system)
    diags = validate(net)
    for d in diags:
        print(d, file=sys.stderr)
    bad = errors(diags)
    status = "invalid" if bad else "valid"
    print(f"{status}: {net.name}: {net.n_buses} buses, {net.n_branches} branches, {net.n_substations} substations")
    return 1 if bad else 0


def cmd_check_radial(args) -> int:
    net = load_system(args.system)
    cfg = _configuration(args, net)
    clauses = radiality_clauses(net, cfg)
    print(f"radial: {'true' if clauses.radial else 'false'}")
    print(
        f"closed={cfg.n_closed} edge_count_ok={clauses.edge_count_ok} components_ok={clauses.component_count_ok} "
        f"one_substation_each={clauses.one_substation_each} acyclic={clauses.acyclic}",
        file=sys.stderr,
    )
    return 0


def cmd_powerflow(args) -> int:
    net = load_system(args.system)
    cfg = _configuration(args, net)
    result = solve_distflow(net, cfg, tol=args.tol, max_iter=args.max_iter)
    for v in result.violations:
        print(f"warning: {v.element}: {v.kind} by {v.magnitude:.6g}", file=sys.stderr)
    _write(args, json.dumps(result.to_dict(to_per_unit(net), cfg), indent=2) + "\n")
    return 0


def cmd_solve(args) -> int:
    net = load_system(args.system)
    mode = args.mode
    if mode == "exact":
        try:
            report = enumerate_radial(net, max_trees=args.max_trees, hard_limits=args.hard_limits)
        except BudgetExceeded as exc:
            print(f"warning: {exc}; falling back to multistart local search", file=sys.stderr)
            mode = "multistart"
    if mode == "local":
        report = local_search_branch_exchange(net, hard_limits=args.hard_limits)
    elif mode == "multistart":
        report = multistart(net, n_starts=args.starts, seed=args.seed, hard_limits=args.hard_limits)
    doc = report.to_dict(net)
    doc["seed"] = args.seed if mode == "multistart" else None
    doc["starts"] = args.starts if mode == "multistart" else None
    _write(args, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_emit(args) -> int:
    net = to_per_unit(load_system(args.system))
    kind = FormulationKind.parse(args.formulation)
    model = add_radiality(build_core_model(net), kind, net)
    fmt = args.format or (Path(args.out).suffix.lstrip(".") if args.out else "lp")
    opts = EmitOptions(fmt, precision=args.precision)
    text = write_model(model, opts)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii", newline="\n")
        log.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_stats(args) -> int:
    net = to_per_unit(load_system(args.system))
    core = build_core_model(net)
    doc = {}
    for kind in _formulations(args.formulation):
        s = model_stats(add_radiality(core, kind, net))
        doc[kind.value] = {
            "n_binary": s.n_binary,
            "n_continuous": s.n_continuous,
            "n_linear": s.n_linear_constraints,
            "n_cone": s.n_cone_constraints,
            "nonzeros": s.nonzeros,
        }
    _write(args, json.dumps({"system": net.name, "formulations": doc}, indent=2) + "\n")
    return 0


def cmd_bench(args) -> int:
    kinds = _formulations(args.formulations)
    emit_dir = Path(args.emit_dir) if args.emit_dir else None
    manifest = [
        ManifestEntry(s, kinds, args.mode, args.seed, args.starts, args.max_trees, emit_dir)
        for s in args.systems.split(",")
        if s.strip()
    ]
    rows = run_bench(manifest, threads=args.threads)
    for row in rows:
        if row.error:
            print(f"warning: {row.system}/{row.formulation.value}: {row.error}", file=sys.stderr)
    _write(args, render_report(rows, args.format))
    return 0


# --------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="radkit", description="Distribution network reconfiguration toolkit.")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    system_help = f"network file, or a bundled system ({', '.join(BUNDLED_SYSTEMS)})"

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check a network file")
    p.add_argument("--system", required=True, help=system_help)

    for name, func, help_text in (
        ("check-radial", cmd_check_radial, "report whether a switch configuration is radial"),
        ("powerflow", cmd_powerflow, "DistFlow solution of a radial configuration as JSON"),
    ):
        p = add(name, func, help_text)
        p.add_argument("--system", required=True, help=system_help)
        p.add_argument("--closed", help="closed branch numbers (comma separated); others open")
        p.add_argument("--open", help="open branch numbers (comma separated); others closed")
        if name == "powerflow":
            p.add_argument("--tol", type=float, default=1e-8)
            p.add_argument("--max-iter", type=int, default=100)
            p.add_argument("--out")

    p = add("solve", cmd_solve, "minimise losses over radial configurations")
    p.add_argument("--system", required=True, help=system_help)
    p.add_argument("--mode", choices=("exact", "local", "multistart"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-trees", type=int, default=10**7)
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--hard-limits", action="store_true", help="reject configurations violating limits")
    p.add_argument("--out")

    p = add("emit", cmd_emit, "write the optimisation model as LP or MPS")
    p.add_argument("--system", required=True, help=system_help)
    p.add_argument("--formulation", required=True, help="|".join(k.value for k in FormulationKind))
    p.add_argument("--format", choices=("lp", "mps"))
    p.add_argument("--precision", type=int, default=12)
    p.add_argument("--out")

    p = add("stats", cmd_stats, "model sizes per formulation as JSON")
    p.add_argument("--system", required=True, help=system_help)
    p.add_argument("--formulation", default="all")
    p.add_argument("--out")

    p = add("bench", cmd_bench, "systems x formulations benchmark report")
    p.add_argument("--systems", default=",".join(BUNDLED_SYSTEMS[:4]))
    p.add_argument("--formulations", default="all")
    p.add_argument("--mode", choices=NATIVE_MODES, default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--max-trees", type=int, default=10**7)
    p.add_argument("--threads", type=int, help="overrides RADKIT_THREADS")
    p.add_argument("--format", choices=("csv", "json", "markdown"), default="csv")
    p.add_argument("--emit-dir", help="also write <system>_<formulation>.lp/.mps here")
    p.add_argument("--out")
    return ap


def cli_main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s: %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NetworkValidationError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_main())
