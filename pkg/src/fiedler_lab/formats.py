"""Text formats: edge lists, DOT, the rose B-matrix, and JSON reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Any, Sequence

import numpy as np

from .conjecture import ConjectureReport, ScanCell, SearchReport
from .graph import Graph, GraphError, RoseParams, is_connected, is_tree
from .heat import HeatState, TransientReport
from .spectral import FiedlerResult, Sign, Spectrum

SCHEMA_ID = "fiedler-lab/1"
CSV_SCAN_HEADER = "p,s,leaf_tip,lambda2,gap,verdict,min_extremal_distance,diameter"


class EdgeListError(GraphError):
    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines (0-based); ``#`` comments, blank lines and an ``n <count>`` header allowed."""
    declared: int | None = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise EdgeListError(f"malformed header {raw.strip()!r}", lineno)
            if declared is not None:
                raise EdgeListError("duplicate 'n' header", lineno)
            declared = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise EdgeListError(f"expected two nonnegative integers, got {raw.strip()!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise EdgeListError(f"self-loop ({u}, {v})", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListError(f"duplicate edge ({u}, {v}), first seen on line {seen[key]}", lineno)
        seen[key] = lineno
        edges.append((u, v))

    inferred = max((max(e) for e in edges), default=-1) + 1
    if declared is None:
        if inferred == 0:
            raise EdgeListError("no edges and no 'n' header: vertex count unknown")
        n = inferred
    elif inferred > declared:
        raise EdgeListError(f"vertex id {inferred - 1} out of range for n={declared}")
    else:
        n = declared
    return Graph.from_edges(n, edges)


def to_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


DOT_COLORS = {Sign.POSITIVE: "red", Sign.NEGATIVE: "blue", Sign.ZERO: "gray"}


def export_dot(g: Graph, labels: Sequence[Sign], name: str = "G") -> str:
    if len(labels) != g.n:
        raise ValueError(f"got {len(labels)} labels for {g.n} vertices")
    out = [f"graph {name} {{", "  node [style=filled];"]
    for v, lab in enumerate(labels):
        out.append(f'  {v} [fillcolor={DOT_COLORS[Sign(lab)]}, label="{v}"];')
    for u, v in g.edges():
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class BMatrix:
    """The 2 x (4+s) display grid: path values on top, petal/hub under columns 3/4 (1-based)."""

    rows: np.ndarray


def b_matrix(params: RoseParams, result: FiedlerResult) -> BMatrix:
    v = np.asarray(result.vector)
    if v.shape != (params.n,):
        raise ValueError(f"Fiedler vector has length {len(v)}, rose({params.p},{params.s}) has {params.n} vertices")
    width = 4 + params.s
    B = np.zeros((2, width))
    B[0, :] = v[: params.stem_tip + 1]
    B[1, 3] = v[params.hub]
    B[1, 2] = v[params.hub + 1]
    return BMatrix(B)


def _fmt4(x: float) -> str:
    return "0" if x == 0.0 else f"{x:.4f}"


def emit_b_matrix(params: RoseParams, result: FiedlerResult) -> str:
    B = b_matrix(params, result).rows
    return "\n".join(" ".join(_fmt4(x) for x in row) for row in B) + "\n"


def parse_b_matrix(text: str) -> np.ndarray:
    rows = [[float(tok) for tok in line.split()] for line in text.strip().splitlines()]
    return np.array(rows)


# -- JSON ------------------------------------------------------------------


def _num(x: float | None) -> float | None:
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} in report")
    return x


def graph_summary(g: Graph, source: str) -> dict[str, Any]:
    return {
        "source": source,
        "n": g.n,
        "edges": g.edge_count,
        "connected": is_connected(g),
        "is_tree": is_tree(g),
    }


def solver_json(fr: FiedlerResult) -> dict[str, Any]:
    return {
        "lambda2": _num(fr.lambda2),
        "gap": _num(fr.gap),
        "degenerate": bool(fr.degenerate),
        "residual": _num(fr.residual),
        "iterations": int(fr.iterations),
    }


def conjecture_json(rep: ConjectureReport) -> dict[str, Any]:
    return {
        "verdict": rep.verdict.value,
        "extremal_max_set": list(rep.extremal_max_set),
        "extremal_min_set": list(rep.extremal_min_set),
        "extremal_pair_distances": list(rep.extremal_pair_distances),
        "diameter": rep.diameter,
        "diameter_pairs": [list(p) for p in rep.diameter_pairs],
        "witness": list(rep.witness) if rep.witness else None,
        "lambda2": _num(rep.lambda2),
        "gap": _num(rep.gap),
    }


def scan_cell_json(cell: ScanCell) -> dict[str, Any]:
    return {
        "p": cell.p,
        "s": cell.s,
        "leaf_tip_value": _num(cell.leaf_tip_value),
        "lambda2": _num(cell.lambda2),
        "gap": _num(cell.gap),
        "verdict": cell.verdict.value if cell.verdict else None,
        "extremal_pair_distance_min": cell.extremal_pair_distance_min,
        "diameter": cell.diameter,
        "error": cell.error,
    }


def scan_csv(cells: Sequence[ScanCell]) -> str:
    def cell(x: object) -> str:
        if x is None:
            return ""
        if isinstance(x, float):
            return repr(x)
        return str(getattr(x, "value", x))

    lines = [CSV_SCAN_HEADER]
    for c in cells:
        fields = [c.p, c.s, c.leaf_tip_value, c.lambda2, c.gap, c.verdict or ("ERROR" if c.error else None),
                  c.extremal_pair_distance_min, c.diameter]
        lines.append(",".join(cell(f) for f in fields))
    return "\n".join(lines) + "\n"


def search_json(rep: SearchReport) -> dict[str, Any]:
    return {
        "n": rep.n,
        "seed": rep.seed,
        "instances_checked": rep.instances_checked,
        "degenerate_skipped": rep.degenerate_skipped,
        "violations": [
            {
                "index": v.index,
                "seed": v.seed,
                "n": v.n,
                "edges": [list(e) for e in v.edges],
                "report": conjecture_json(v.report),
            }
            for v in rep.violations
        ],
    }


def heat_json(state: HeatState, rk4: HeatState | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "t": _num(state.t),
        "u": [_num(x) for x in state.u],
        "mass": _num(state.mass),
    }
    if rk4 is not None:
        out["rk4_u"] = [_num(x) for x in rk4.u]
        out["rk4_max_abs_diff"] = _num(np.max(np.abs(rk4.u - state.u)))
    return out


def transient_json(rep: TransientReport) -> dict[str, Any]:
    return {
        "t_star": _num(rep.t_star),
        "hot_vertices": list(rep.hot_vertices),
        "cold_vertices": list(rep.cold_vertices),
        "fiedler_hot": list(rep.fiedler_hot),
        "fiedler_cold": list(rep.fiedler_cold),
        "matched": rep.matched,
        "ratio": _num(rep.ratio),
    }


def spectrum_json(spec: Spectrum) -> dict[str, Any]:
    return {"eigenvalues": [_num(x) for x in spec.eigenvalues]}


def run_report(command: str, **sections: Any) -> dict[str, Any]:
    report: dict[str, Any] = {"schema": SCHEMA_ID, "command": command}
    report.update({k: v for k, v in sections.items() if v is not None})
    return report


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def load_schema() -> dict[str, Any]:
    return json.loads(resources.files("fiedler_lab").joinpath("report.schema.json").read_text())
