"""Command-line front end.

Exit codes: 0 for a positive verdict or passing report, 1 for a negative
one, 2 for unreadable or invalid input. ``--json`` switches every command to
canonical JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import List, Optional, Sequence, TextIO

from .graphcore import (
    GraphError,
    OrientedMultigraph,
    betti1,
    delta2,
    load_graph,
    to_dot,
    to_json_obj,
)
from .meshreeb import MeshError, check_surface_laws, mesh_reeb_full, parse_field, parse_off
from .orient import check_good, find_good_orientation, level_function
from .realize import DECIDERS
from .surf import SurfaceDescriptor, SurfaceError, parse_surface, reeb_number
from .synth import PlanError, SurfacePlan, SynthesisError, plan_summary, synthesize
from .verify import verify_plan
from .zoo import random_good_graph

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _graph(args) -> OrientedMultigraph:
    if args.graph is not None:
        return load_graph(_read(args.graph))
    if args.seed is not None:
        return random_good_graph(random.Random(args.seed))
    raise InputError("--graph or --seed is required")


def _surface(args) -> SurfaceDescriptor:
    if args.surface is None:
        raise InputError("--surface is required")
    return parse_surface(args.surface)


# -- subcommands -----------------------------------------------------------


def cmd_check_orient(args, out: TextIO) -> int:
    verdict = check_good(_graph(args))
    if args.json:
        out.write(_dump(verdict.to_json_obj()))
    else:
        line = verdict.status
        if verdict.vertex is not None:
            line += f" at {verdict.vertex}"
        if verdict.cycle:
            line += " via " + " ".join(verdict.cycle)
        out.write(line + "\n")
    return OK if verdict.good else NEGATIVE


def cmd_orient(args, out: TextIO) -> int:
    g = _graph(args)
    h = find_good_orientation(g)
    if h is None:
        if args.json:
            out.write(_dump({"found": False}))
        else:
            out.write("no good orientation\n")
        return NEGATIVE
    if args.json:
        out.write(_dump({"found": True, "graph": to_json_obj(h), "level": level_function(h).to_json_obj()}))
    else:
        out.write(to_dot(h))
    return OK


def cmd_betti(args, out: TextIO) -> int:
    g = _graph(args)
    b1, d2 = betti1(g), delta2(g)
    if args.json:
        out.write(_dump({"betti1": b1, "delta2": d2, "vertices": len(g.vertices), "edges": len(g.edges)}))
    else:
        out.write(f"{b1}\n")
    return OK


def cmd_reeb_number(args, out: TextIO) -> int:
    s = _surface(args)
    r = reeb_number(s)
    out.write(_dump({"surface": s.spelling(), "reeb_number": r}) if args.json else f"{r}\n")
    return OK


def cmd_realize(args, out: TextIO) -> int:
    g = _graph(args)
    s = _surface(args)
    mode = args.mode or "finite"
    if mode not in DECIDERS:
        raise InputError(f"realize supports modes {sorted(DECIDERS)}, not {mode!r}")
    verdict = DECIDERS[mode](g, s)
    if args.json:
        out.write(_dump(verdict.to_json_obj()))
    elif verdict.realizable:
        pad = "".join(f" {k}={v}" for k, v in sorted(verdict.padding.items()))
        out.write(f"realizable on {s} ({verdict.function_class}){pad}\n")
    else:
        extra = f" (deficit {verdict.deficit})" if verdict.deficit is not None else ""
        out.write(f"not realizable on {s}: {verdict.obstruction}{extra}\n")
    return OK if verdict.realizable else NEGATIVE


def cmd_synth(args, out: TextIO) -> int:
    g = _graph(args)
    mode = args.mode or "finite"
    if mode == "any-n":
        if args.dim is None:
            raise InputError("any-n mode needs --dim")
        target = args.dim
    else:
        target = _surface(args)
    try:
        plan = synthesize(g, target, mode)
    except SynthesisError as exc:
        if exc.verdict is None:
            raise InputError(str(exc)) from exc
        if args.json:
            out.write(_dump({"error": str(exc), "verdict": exc.verdict.to_json_obj()}))
        else:
            sys.stderr.write(f"{exc}\n")
        return NEGATIVE
    # the plan JSON is already canonical, so it is the output in both modes
    out.write(plan.to_json())
    return OK


def cmd_verify(args, out: TextIO) -> int:
    plan = SurfacePlan.from_json(_read(args.plan or "-"))
    if args.expect is not None:
        expected = load_graph(_read(args.expect))
    elif plan.source_graph is not None:
        expected = plan.source_graph
    else:
        raise InputError("--expect is required")
    report = verify_plan(plan, expected)
    if args.json:
        out.write(report.to_json())
    else:
        summary = plan_summary(plan)
        surface = summary.surface if summary.surface is not None else "-"
        out.write(f"{'PASS' if report.passed else 'FAIL'} chi={summary.chi} surface={surface}\n")
        for d in report.details:
            out.write(f"  {d}\n")
    return OK if report.passed else NEGATIVE


def cmd_mesh_reeb(args, out: TextIO) -> int:
    if args.off is None:
        raise InputError("--off is required")
    text = _read(args.off)
    fld = args.field or "z"
    field = fld if fld in ("x", "y", "z") else parse_field(_read(fld))
    mesh = parse_off(text, field)
    result = mesh_reeb_full(mesh)
    report = check_surface_laws(mesh, result.graph)
    if args.json:
        out.write(_dump({"graph": to_json_obj(result.graph), "report": report}))
    else:
        out.write(to_dot(result.graph, "reeb"))
        out.write(f"// surface {report['surface']} betti1 {report['betti1']}"
                  f" {'ok' if report['ok'] else 'violations: ' + '; '.join(report['violations'])}\n")
    return OK if report["ok"] else NEGATIVE


def cmd_table(args, out: TextIO) -> int:
    g = _graph(args)
    max_genus = args.max_genus
    if max_genus < 0:
        raise InputError("--max-genus must be >= 0")
    modes = [args.mode] if args.mode else ["finite", "morse"]
    for m in modes:
        if m not in DECIDERS:
            raise InputError(f"table supports modes {sorted(DECIDERS)}, not {m!r}")
    rows = []
    for orientable in (True, False):
        for genus in range(0 if orientable else 1, max_genus + 1):
            s = SurfaceDescriptor(orientable, genus)
            row = {"surface": s.spelling()}
            for m in modes:
                row[m] = DECIDERS[m](g, s).realizable
            rows.append(row)
    if args.json:
        out.write(_dump({"betti1": betti1(g), "delta2": delta2(g), "rows": rows}))
    else:
        out.write("surface " + " ".join(f"{m:>8}" for m in modes) + "\n")
        for row in rows:
            marks = " ".join(f"{'yes' if row[m] else 'no':>8}" for m in modes)
            out.write(f"{row['surface']:>7} {marks}\n")
    return OK if any(row[m] for row in rows for m in modes) else NEGATIVE


COMMANDS = {
    "check-orient": (cmd_check_orient, "check whether the stored orientation is good"),
    "orient": (cmd_orient, "search for a good orientation"),
    "betti": (cmd_betti, "first Betti number of the graph"),
    "reeb-number": (cmd_reeb_number, "Reeb number of a closed surface"),
    "realize": (cmd_realize, "decide realizability on a surface"),
    "synth": (cmd_synth, "build a surface plan (JSON)"),
    "verify": (cmd_verify, "replay a plan and compare with a graph"),
    "mesh-reeb": (cmd_mesh_reeb, "Reeb graph of a height field on an OFF mesh"),
    "table": (cmd_table, "realizability matrix over a genus range"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file, DOT or JSON ('-' for stdin)")
    common.add_argument("--seed", type=int, help="use a seeded random good graph instead of --graph")
    common.add_argument("--surface", help="surface spelled <genus><+|->, e.g. 2+ or 3-")
    common.add_argument("--dim", type=int, help="dimension for any-n mode")
    common.add_argument("--mode", choices=["finite", "morse", "any-n", "acyclic"])
    common.add_argument("--plan", help="plan JSON (default stdin)")
    common.add_argument("--expect", help="expected graph for verify")
    common.add_argument("--off", help="OFF mesh file")
    common.add_argument("--field", help="x, y, z or a file with one value per vertex")
    common.add_argument("--max-genus", type=int, default=4)
    common.add_argument("--json", action="store_true", help="canonical JSON output")

    parser = argparse.ArgumentParser(prog="reebreal", description="Reeb graph realization toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = COMMANDS[args.command][0]
    try:
        return handler(args, out)
    except (InputError, GraphError, SurfaceError, PlanError, MeshError, SynthesisError) as exc:
        sys.stderr.write(f"{args.command}: {exc}\n")
        return INPUT_ERROR


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
