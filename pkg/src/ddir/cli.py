"""Command-line front end.

Exit codes: 0 for a definitive answer, 1 for errors (including failed
validation), 2 when a solver ran out of budget and the answer is unknown.
"""
from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import graph as gmod
from .coloring import (
    UNKNOWN,
    UNSAT,
    chromatic_number,
    color_odd,
    color_slope_disjoint,
    pillar_adversary,
    probe_adversary,
    tfold_chromatic,
    verify_coloring,
    EvenOmega,
)
from .config import ConfigurationError, validate
from .construction import (
    ConstructionError,
    DEFAULT_BUDGET,
    ConstructionParams,
    InfeasibleScale,
    blowup,
    construct,
    mixed_blowup,
)
from .geometry import GeometryError, parse_rational
from .graph import Graph, intersection_graph, is_triangle_free, max_clique
from .io import FormatError, atomic_write, dumps, load_config, segments_config
from .svg import render_svg

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


# ---------------------------------------------------------------------------
# input helpers


def load_graph(path: str):
    """Read a configuration JSON, a graph JSON, DIMACS or the adjacency text format."""
    text = Path(path).read_text()
    head = text.lstrip()[:1]
    if head == "{":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if "segments" in doc:
            cfg = load_config(path)
            return intersection_graph(cfg.segments), cfg
        return gmod.from_json(text), None
    if head in ("c", "p"):
        return gmod.from_dimacs(text), None
    return gmod.from_adjacency_text(text), None


def _stats(g: Graph, cfg=None) -> dict:
    out = {"vertices": g.n, "edges": g.m}
    if cfg is not None:
        out.update(segments=len(cfg.segments), probes=len(cfg.probes), slope_number=cfg.slope_number)
    return out


class Run:
    """Collects what a command did; written as the run manifest."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.started = time.perf_counter()
        self.stats: dict = {}
        self.outputs: list[str] = []

    def write(self, path: Optional[str], text: str) -> None:
        if path is None or path == "-":
            sys.stdout.write(text)
        else:
            atomic_write(path, text)
            self.outputs.append(path)

    def manifest(self, argv: Sequence[str]) -> dict:
        params = {k: v for k, v in vars(self.args).items() if k not in ("func", "manifest")}
        return {
            "command": self.args.command,
            "argv": list(argv),
            "parameters": params,
            "inputs": [params["input"]] if params.get("input") else [],
            "outputs": self.outputs,
            "versions": {"ddir": __version__, "python": platform.python_version()},
            "statistics": self.stats,
            "seconds": round(time.perf_counter() - self.started, 3),
        }


def _emit_json(run: Run, doc: dict) -> None:
    run.write(run.args.out, json.dumps(doc, indent=1, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_construct(run: Run) -> int:
    a = run.args
    params = ConstructionParams(
        a.t, a.d, copies=a.copies, iterations=a.iterations,
        root_margin=parse_rational(a.margin), budget=DEFAULT_BUDGET if a.budget is None else a.budget,
    )
    cfg = construct(params)
    run.stats = {"segments": len(cfg.segments), "probes": len(cfg.probes), "slope_number": cfg.slope_number,
                 "truncated": params.truncated}
    run.write(a.out, dumps(cfg))
    return EXIT_OK


def cmd_blowup(run: Run) -> int:
    cfg = load_config(run.args.input)
    segs = blowup(cfg.segments, run.args.t)
    run.stats = {"segments": len(segs)}
    run.write(run.args.out, dumps(segments_config(segs)))
    return EXIT_OK


def cmd_mixed_blowup(run: Run) -> int:
    a = run.args
    base = load_config(a.input) if a.input else construct(ConstructionParams(a.t + 1, a.d, budget=a.budget or DEFAULT_BUDGET))
    segs = mixed_blowup(a.t, a.d, base)
    run.stats = {"segments": len(segs), "base_segments": len(base.segments)}
    run.write(a.out, dumps(segments_config(segs)))
    return EXIT_OK


def cmd_verify(run: Run) -> int:
    cfg = load_config(run.args.input)
    problems = validate(cfg)
    g = intersection_graph(cfg.segments)
    tf = is_triangle_free(g)
    run.stats = _stats(g, cfg) | {"violations": len(problems), "triangle_free": tf}
    if problems:
        lines = [f"INVALID, {len(problems)} violation(s)"] + [f"  {p}" for p in problems[:50]]
        run.write(run.args.out, "\n".join(lines) + "\n")
        return EXIT_ERROR
    run.write(run.args.out, f"OK, slope_number={cfg.slope_number}, triangle_free={str(tf).lower()}\n")
    return EXIT_OK


def cmd_graph(run: Run) -> int:
    g, cfg = load_graph(run.args.input)
    fmt = run.args.format
    text = {"adj": gmod.to_adjacency_text, "dimacs": gmod.to_dimacs}.get(fmt, lambda h: gmod.to_json(h) + "\n")(g)
    run.stats = _stats(g, cfg)
    run.write(run.args.out, text)
    return EXIT_OK


def cmd_omega(run: Run) -> int:
    g, cfg = load_graph(run.args.input)
    clique = max_clique(g)
    run.stats = _stats(g, cfg) | {"omega": len(clique)}
    _emit_json(run, {"omega": len(clique), "clique": clique})
    return EXIT_OK


def cmd_chi(run: Run) -> int:
    g, cfg = load_graph(run.args.input)
    res = chromatic_number(g, run.args.budget)
    run.stats = _stats(g, cfg) | {"status": res.status, "chi": res.value, "lower": res.lower, "upper": res.upper}
    doc = {"status": res.status, "chi": res.value, "lower": res.lower, "upper": res.upper, "nodes": res.nodes}
    if res.coloring is not None:
        doc["certificate"] = res.coloring.to_json()
    _emit_json(run, doc)
    return EXIT_UNKNOWN if res.status == UNKNOWN else EXIT_OK


def cmd_tfold(run: Run) -> int:
    g, cfg = load_graph(run.args.input)
    res = tfold_chromatic(g, run.args.t, run.args.a, run.args.budget)
    run.stats = _stats(g, cfg) | {"status": res.status}
    doc = {"status": res.status, "t": run.args.t, "a": run.args.a, "nodes": res.nodes}
    if res.coloring is not None:
        doc["certificate"] = res.coloring.to_json()
    _emit_json(run, doc)
    return EXIT_UNKNOWN if res.status == UNKNOWN else EXIT_OK


def cmd_adversary(run: Run) -> int:
    a = run.args
    cfg = load_config(a.input)
    solver = pillar_adversary if a.pillars else probe_adversary
    if a.a is not None:
        palettes: list = [a.a]
    else:
        palettes = list(range(a.t, min(a.s - 1 + a.t, a.cap) + 1)) + [None]
    results = []
    for pal in palettes:
        res = solver(cfg, a.t, a.s, pal, a.budget)
        doc = res.to_json()
        doc["unbounded"] = pal is None
        results.append(doc)
    statuses = [r["status"] for r in results]
    overall = UNKNOWN if UNKNOWN in statuses else (UNSAT if all(s == UNSAT for s in statuses) else "SAT")
    run.stats = {"segments": len(cfg.segments), "probes": len(cfg.probes), "status": overall}
    _emit_json(run, {"status": overall, "t": a.t, "s": a.s, "pillars": a.pillars, "results": results})
    return EXIT_UNKNOWN if overall == UNKNOWN else EXIT_OK


def cmd_color_upper(run: Run) -> int:
    cfg = load_config(run.args.input)
    g = intersection_graph(cfg.segments)
    w = len(max_clique(g))
    d = len(g.classes)
    if run.args.odd:
        col, bound, method = color_odd(g, w), d * (w - 1) + 1, "odd"
    else:
        col, bound, method = color_slope_disjoint(g), d * w, "slope-disjoint"
    ok, why = verify_coloring(g, col)
    used = len(col.colors_used())
    run.stats = _stats(g, cfg) | {"omega": w, "colors": used, "bound": bound, "verified": ok}
    _emit_json(run, {"method": method, "omega": w, "d": d, "colors": used, "bound": bound,
                     "verified": ok, "violation": why, "certificate": col.to_json()})
    return EXIT_OK if ok and used <= bound else EXIT_ERROR


def cmd_export_svg(run: Run) -> int:
    cfg = load_config(run.args.input)
    text = render_svg(cfg, size=run.args.size, precision=run.args.precision, labels=run.args.labels)
    run.stats = {"segments": len(cfg.segments), "probes": len(cfg.probes)}
    run.write(run.args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddir", description="Constructions and colourings of d-directional segment graphs.")
    p.add_argument("--version", action="version", version=f"ddir {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, input_required=True, out_help="output file (default: stdout)"):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        if input_required is not None:
            sp.add_argument("--in", dest="input", required=input_required, help="input file")
        sp.add_argument("--out", default=None, help=out_help)
        sp.add_argument("--manifest", default=None, help="run manifest path (default: <out>.manifest.json when --out is a file)")
        sp.set_defaults(func=func)
        return sp

    def solver_budget(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help="search node budget (default: $DDIR_SOLVER_BUDGET or 5000000)")

    sp = add("construct", cmd_construct, "build the configuration C_{t,d}", input_required=None)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--copies", type=int, default=None, help="pillars per probe (default 4t+1)")
    sp.add_argument("--iterations", type=int, default=None, help="gadget rounds (default floor(log2 2t)+1)")
    sp.add_argument("--margin", default="1/2", help="root margin as a rational (default 1/2)")
    sp.add_argument("--budget", type=int, default=None, help="refuse if the estimated segment count exceeds this")

    sp = add("blowup", cmd_blowup, "replace every segment by t identical copies")
    sp.add_argument("--t", type=int, required=True)

    sp = add("mixed-blowup", cmd_mixed_blowup, "t copies everywhere, t+1 on one side of the last slope class",
             input_required=False)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--budget", type=int, default=None, help="construction budget when no base is given")

    add("verify", cmd_verify, "validate a configuration and report slope number and triangle-freeness")

    sp = add("graph", cmd_graph, "export the intersection graph")
    sp.add_argument("--format", choices=("adj", "dimacs", "json"), default="adj")

    add("omega", cmd_omega, "exact clique number with a witness clique")

    sp = add("chi", cmd_chi, "exact chromatic number with an optimal colouring")
    solver_budget(sp)

    sp = add("tfold", cmd_tfold, "decide whether a t-fold a-colouring exists")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    solver_budget(sp)

    sp = add("adversary", cmd_adversary, "search for a t-fold colouring in which every probe sees at most s-1 colours")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--a", type=int, default=None, help="single palette size (default: sweep t..s-1+t plus unbounded)")
    sp.add_argument("--cap", type=int, default=64, help="largest finite palette in a sweep")
    sp.add_argument("--pillars", action="store_true", help="require every pillar of a probe to see >= s colours")
    solver_budget(sp)

    sp = add("color-upper", cmd_color_upper, "colour with at most d*omega (or d(omega-1)+1 with --odd) colours")
    sp.add_argument("--odd", action="store_true", help="use the odd clique number algorithm")

    sp = add("export-svg", cmd_export_svg, "render a configuration as SVG")
    sp.add_argument("--labels", action="store_true", help="print probe indices")
    sp.add_argument("--precision", type=int, default=3, help="decimal places in the SVG")
    sp.add_argument("--size", type=int, default=800, help="drawing size in pixels")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    run = Run(args)
    try:
        code = args.func(run)
    except InfeasibleScale as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (FormatError, ConfigurationError, ConstructionError, GeometryError, EvenOmega,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    target = args.manifest or (f"{args.out}.manifest.json" if args.out not in (None, "-") else None)
    if target:
        atomic_write(target, json.dumps(run.manifest(argv), indent=1, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
