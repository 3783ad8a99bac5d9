"""``fiedler-lab`` command line.

Exit status: 0 success, 1 usage error, 2 computation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import formats
from .conjecture import DEFAULT_TIE_TOL, check_conjecture, scan_rose_family, search_random_trees
from .graph import Graph, GraphError, RoseParams, build_rose, is_connected
from .heat import HeatError, heat_solve_rk4, heat_solve_spectral, transient_extremes
from .rng import SplitMix64
from .spectral import (
    DEFAULT_TOL,
    EigenSolverError,
    Sign,
    fiedler,
    full_spectrum,
    sign_partition,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2
        raise UsageError(f"{self.prog}: error: {message}")


def _int_range(text: str) -> list[int]:
    """``"5"``, ``"1..12"`` (inclusive) or ``"1,3,7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(x) for x in text.split(",")]
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; use N, A..B or A,B,C") from None


def _pair(text: str) -> tuple[int, int]:
    try:
        p, s = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P,S, got {text!r}") from None
    return p, s


def _default_threads() -> int:
    env = os.environ.get("FIEDLER_THREADS")
    return int(env) if env and env.isdigit() else 1


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rose", type=_pair, metavar="P,S", help="Fiedler rose with P petals and an S-vertex stem")
    p.add_argument("-p", "--petals", type=int)
    p.add_argument("-s", "--stem", type=int)
    p.add_argument("--input", type=Path, metavar="FILE", help="edge-list file")


def _add_format(p: argparse.ArgumentParser, choices: list[str]) -> None:
    p.add_argument("--format", choices=choices, default=choices[0])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fiedler-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rose", help="Fiedler vector of a rose, shown as the B matrix")
    p.add_argument("-p", "--petals", type=int, default=11)
    p.add_argument("-s", "--stem", type=int, default=5)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_format(p, ["b-matrix", "json", "text", "csv", "dot"])

    p = sub.add_parser("check", help="evaluate the diameter-pair conjecture")
    _add_source(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    _add_format(p, ["text", "json"])

    p = sub.add_parser("scan", help="conjecture verdicts over a grid of roses")
    p.add_argument("-p", "--petals", type=_int_range, default=_int_range("1..12"))
    p.add_argument("-s", "--stem", type=_int_range, default=_int_range("5"))
    p.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    p.add_argument("--threads", type=int, default=None)
    _add_format(p, ["csv", "json", "text"])

    p = sub.add_parser("search", help="random-tree counterexample search")
    p.add_argument("--n", type=int, default=21)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie-tol", type=float, default=DEFAULT_TIE_TOL)
    p.add_argument("--threads", type=int, default=None)
    _add_format(p, ["json", "text"])

    p = sub.add_parser("heat", help="discrete heat equation")
    _add_source(p)
    p.add_argument("--u0", default="delta:0", help="delta:VERTEX, uniform (random, see --seed) or file:PATH")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=None, help="also integrate with RK4 at this step")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transient", action="store_true", help="compare late-time extremes with the Fiedler vector")
    _add_format(p, ["json", "text", "csv"])

    p = sub.add_parser("spectrum", help="full Laplacian spectrum")
    _add_source(p)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_format(p, ["text", "json", "csv"])

    p = sub.add_parser("export", help="export a graph as sign-colored DOT or an edge list")
    _add_source(p)
    _add_format(p, ["dot", "text", "json"])
    return parser


def _graph_from_args(args: argparse.Namespace) -> tuple[Graph, str, RoseParams | None]:
    given = [args.rose is not None, args.input is not None, args.petals is not None or args.stem is not None]
    if sum(given) != 1:
        raise UsageError("give exactly one graph source: --rose P,S, --input FILE, or --petals/--stem")
    if args.input is not None:
        g = formats.parse_edge_list(args.input.read_text())
        return g, str(args.input), None
    if args.rose is not None:
        p, s = args.rose
    else:
        if args.petals is None or args.stem is None:
            raise UsageError("--petals and --stem must be given together")
        p, s = args.petals, args.stem
    params = RoseParams(p, s)
    return build_rose(params), f"rose({p},{s})", params


def _initial_heat(spec: str, g: Graph, seed: int) -> np.ndarray:
    if spec == "uniform":
        rng = SplitMix64(seed)
        return np.array([rng.uniform() for _ in range(g.n)])
    if spec.startswith("delta:"):
        v = int(spec[6:])
        if not 0 <= v < g.n:
            raise UsageError(f"delta vertex {v} out of range for n={g.n}")
        u = np.zeros(g.n)
        u[v] = 1.0
        return u
    if spec.startswith("file:"):
        u = np.array([float(x) for x in Path(spec[5:]).read_text().split()])
        if len(u) != g.n:
            raise HeatError(f"{spec[5:]} has {len(u)} values, graph has {g.n} vertices")
        return u
    raise UsageError(f"bad --u0 {spec!r}; use delta:VERTEX, uniform or file:PATH")


def _rose_role(params: RoseParams, v: int) -> str:
    if v == params.leaf_tip:
        return "leaf_tip"
    if v == params.junction:
        return "junction"
    if v == params.stem_tip:
        return "stem_tip"
    if v == params.hub:
        return "hub"
    if v in params.petals:
        return "petal"
    return "leaf" if v < params.junction else "stem"


def _cmd_rose(args, out) -> None:
    params = RoseParams(args.petals, args.stem)
    g = build_rose(params)
    fr = fiedler(g, tol=args.tol, anchor=params.hub)
    if args.format == "b-matrix":
        out.write(formats.emit_b_matrix(params, fr))
    elif args.format == "json":
        B = formats.b_matrix(params, fr).rows
        out.write(formats.dumps(formats.run_report(
            "rose",
            graph=formats.graph_summary(g, f"rose({params.p},{params.s})"),
            solver=formats.solver_json(fr),
            fiedler_vector=[float(x) for x in fr.vector],
            b_matrix=B.tolist(),
        )))
    elif args.format == "dot":
        out.write(formats.export_dot(g, sign_partition(g, fr.vector)))
    else:
        labels = sign_partition(g, fr.vector)
        if args.format == "csv":
            out.write("vertex,role,value,sign\n")
        for v in range(g.n):
            row = (v, _rose_role(params, v), repr(float(fr.vector[v])), labels[v].value)
            out.write((",".join(map(str, row)) if args.format == "csv" else "{:>3} {:<9} {:>22} {}".format(*row)) + "\n")


def _cmd_check(args, out) -> None:
    g, source, params = _graph_from_args(args)
    fr = fiedler(g, tol=args.tol, anchor=params.hub if params else None)
    rep = check_conjecture(g, args.tie_tol, fiedler_result=fr)
    if args.format == "json":
        out.write(formats.dumps(formats.run_report(
            "check",
            graph=formats.graph_summary(g, source),
            solver=formats.solver_json(fr),
            conjecture=formats.conjecture_json(rep),
        )))
        return
    out.write(f"graph      {source}: n={g.n}, edges={g.edge_count}\n")
    out.write(f"lambda2    {fr.lambda2:.10g} (gap {fr.gap if fr.gap is None else format(fr.gap, '.4g')})\n")
    out.write(f"verdict    {rep.verdict.value}\n")
    out.write(f"max set    {list(rep.extremal_max_set)}\n")
    out.write(f"min set    {list(rep.extremal_min_set)}\n")
    out.write(f"distances  {list(rep.extremal_pair_distances)} vs diameter {rep.diameter} {list(map(list, rep.diameter_pairs))}\n")
    if rep.witness:
        out.write(f"witness    {list(rep.witness)}\n")


def _cmd_scan(args, out) -> None:
    threads = args.threads or _default_threads()
    cells = scan_rose_family(args.petals, args.stem, args.tie_tol, threads=threads)
    if args.format == "csv":
        out.write(formats.scan_csv(cells))
    elif args.format == "json":
        out.write(formats.dumps(formats.run_report("scan", scan=[formats.scan_cell_json(c) for c in cells])))
    else:
        for c in cells:
            if c.error:
                out.write(f"p={c.p:<3} s={c.s:<3} ERROR {c.error}\n")
            else:
                out.write(f"p={c.p:<3} s={c.s:<3} leaf_tip={c.leaf_tip_value:+.4f} {c.verdict.value:<10} "
                          f"min_extremal_distance={c.extremal_pair_distance_min} diameter={c.diameter}\n")


def _cmd_search(args, out) -> None:
    if args.instances < 0:
        raise UsageError("--instances must be >= 0")
    threads = args.threads or _default_threads()
    rep = search_random_trees(args.n, args.instances, args.seed, args.tie_tol, threads=threads)
    if args.format == "json":
        out.write(formats.dumps(formats.run_report("search", search=formats.search_json(rep))))
        return
    out.write(f"checked {rep.instances_checked} trees on {rep.n} vertices (seed {rep.seed}); "
              f"{len(rep.violations)} violations, {rep.degenerate_skipped} degenerate\n")
    for v in rep.violations:
        out.write(f"  #{v.index} seed={v.seed} distances={list(v.report.extremal_pair_distances)} "
                  f"diameter={v.report.diameter}\n")


def _cmd_heat(args, out) -> None:
    g, source, _ = _graph_from_args(args)
    u0 = _initial_heat(args.u0, g, args.seed)
    state = heat_solve_spectral(g, u0, args.t)
    rk4 = heat_solve_rk4(g, u0, args.t, args.dt) if args.dt is not None else None
    transient = transient_extremes(g, u0) if args.transient else None
    if args.format == "json":
        out.write(formats.dumps(formats.run_report(
            "heat",
            graph=formats.graph_summary(g, source),
            heat=formats.heat_json(state, rk4),
            transient=formats.transient_json(transient) if transient else None,
        )))
        return
    if args.format == "csv":
        out.write("vertex,u0,u" + (",u_rk4" if rk4 else "") + "\n")
        for v in range(g.n):
            row = [v, repr(float(u0[v])), repr(float(state.u[v]))] + ([repr(float(rk4.u[v]))] if rk4 else [])
            out.write(",".join(map(str, row)) + "\n")
        return
    out.write(f"t={state.t:g} mass={state.mass:.12g}\n")
    for v in range(g.n):
        out.write(f"{v:>4} {state.u[v]: .10f}" + (f" {rk4.u[v]: .10f}" if rk4 else "") + "\n")
    if transient:
        out.write(f"t_star={transient.t_star:.4f} hot={list(transient.hot_vertices)} "
                  f"cold={list(transient.cold_vertices)} matched={transient.matched}\n")


def _cmd_spectrum(args, out) -> None:
    g, source, params = _graph_from_args(args)
    spec = full_spectrum(g, args.tol)
    fr = fiedler(g, tol=args.tol, anchor=params.hub if params else None) if g.n >= 2 and is_connected(g) else None
    if args.format == "json":
        out.write(formats.dumps(formats.run_report(
            "spectrum",
            graph=formats.graph_summary(g, source),
            spectrum=formats.spectrum_json(spec),
            solver=formats.solver_json(fr) if fr else None,
            fiedler_vector=[float(x) for x in fr.vector] if fr else None,
        )))
    elif args.format == "csv":
        out.write("index,eigenvalue\n")
        for i, lam in enumerate(spec.eigenvalues, start=1):
            out.write(f"{i},{float(lam)!r}\n")
    else:
        for i, lam in enumerate(spec.eigenvalues, start=1):
            out.write(f"lambda_{i} = {lam:.12g}\n")
        if fr:
            out.write(f"algebraic connectivity {fr.lambda2:.12g}, gap {fr.gap}, degenerate {fr.degenerate}\n")


def _cmd_export(args, out) -> None:
    g, source, params = _graph_from_args(args)
    if args.format == "text":
        out.write(formats.to_edge_list(g))
    elif args.format == "json":
        out.write(formats.dumps(formats.run_report(
            "export", graph=formats.graph_summary(g, source), edges=[list(e) for e in g.edges()]
        )))
    else:
        if g.n >= 2 and is_connected(g):
            fr = fiedler(g, anchor=params.hub if params else None)
            labels = sign_partition(g, fr.vector)
        else:
            labels = (Sign.ZERO,) * g.n
        out.write(formats.export_dot(g, labels))


COMMANDS = {
    "rose": _cmd_rose,
    "check": _cmd_check,
    "scan": _cmd_scan,
    "search": _cmd_search,
    "heat": _cmd_heat,
    "spectrum": _cmd_spectrum,
    "export": _cmd_export,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (GraphError, EigenSolverError, HeatError, ValueError, OSError) as exc:
        print(f"fiedler-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
