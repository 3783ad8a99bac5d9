"""Checking whether Fiedler-vector extremes sit on a diameter pair.

The claim under test, for a tree: every pair ``(v, w)`` maximizing
``|e2(v) - e2(w)|`` is at maximal graph distance. Such pairs are exactly
``argmax(e2) x argmin(e2)``.
"""

from __future__ import annotations

import enum
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .graph import (
    Graph,
    RoseParams,
    all_pairs_distances,
    build_rose,
    diameter,
    is_tree,
    random_tree,
)
from .heat import extreme_sets
from .rng import substream_seed
from .spectral import DEFAULT_TOL, FiedlerResult, fiedler, fiedler_dense

DEFAULT_TIE_TOL = 1e-9


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS"
    VIOLATED = "VIOLATED"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class ConjectureReport:
    extremal_max_set: tuple[int, ...]
    extremal_min_set: tuple[int, ...]
    extremal_pair_distances: tuple[int, ...]
    diameter: int
    diameter_pairs: tuple[tuple[int, int], ...]
    verdict: Verdict
    witness: tuple[int, int] | None
    lambda2: float
    gap: float | None

    @property
    def min_extremal_distance(self) -> int | None:
        return min(self.extremal_pair_distances) if self.extremal_pair_distances else None


def _solver(method: str) -> Callable[..., FiedlerResult]:
    if method == "iterative":
        return fiedler
    if method == "dense":
        return fiedler_dense
    raise ValueError(f"unknown solver {method!r}; expected 'iterative' or 'dense'")


def check_conjecture(
    g: Graph,
    tie_tol: float = DEFAULT_TIE_TOL,
    fiedler_result: FiedlerResult | None = None,
    method: str = "iterative",
    tol: float = DEFAULT_TOL,
) -> ConjectureReport:
    """Evaluate the diameter-pair conjecture on ``g``.

    ``tie_tol`` is relative to ``max(e2) - min(e2)``. A degenerate
    ``lambda_2`` yields ``DEGENERATE`` with empty extremal sets, since no
    single Fiedler vector is singled out.
    """
    if g.n < 2:
        raise ValueError("the conjecture needs at least 2 vertices")
    dist = all_pairs_distances(g)
    diam = diameter(g, dist)  # raises on disconnected input
    if not is_tree(g):
        warnings.warn("graph is not a tree; the conjecture is stated for trees", stacklevel=2)

    fr = fiedler_result if fiedler_result is not None else _solver(method)(g, tol=tol)
    if fr.degenerate:
        return ConjectureReport((), (), (), diam.diameter, diam.pairs, Verdict.DEGENERATE, None, fr.lambda2, fr.gap)

    top, bottom = extreme_sets(fr.vector, tie_tol)
    distances = {}
    for v in top:
        for w in bottom:
            distances[(v, w)] = int(dist[v][w])
    worst = min(distances, key=lambda k: (distances[k], k))
    if distances[worst] < diam.diameter:
        verdict, witness = Verdict.VIOLATED, worst
    else:
        verdict, witness = Verdict.HOLDS, None
    return ConjectureReport(
        top,
        bottom,
        tuple(sorted(set(distances.values()))),
        diam.diameter,
        diam.pairs,
        verdict,
        witness,
        fr.lambda2,
        fr.gap,
    )


@dataclass(frozen=True)
class ScanCell:
    p: int
    s: int
    leaf_tip_value: float | None = None
    lambda2: float | None = None
    gap: float | None = None
    verdict: Verdict | None = None
    extremal_pair_distance_min: int | None = None
    diameter: int | None = None
    error: str | None = None


def _scan_cell(p: int, s: int, tie_tol: float, method: str) -> ScanCell:
    try:
        params = RoseParams(p, s)
        g = build_rose(params)
        fr = _solver(method)(g, anchor=params.hub)
        rep = check_conjecture(g, tie_tol, fiedler_result=fr)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        return ScanCell(p, s, error=f"{type(exc).__name__}: {exc}")
    return ScanCell(
        p,
        s,
        float(fr.vector[params.leaf_tip]),
        fr.lambda2,
        fr.gap,
        rep.verdict,
        rep.min_extremal_distance,
        rep.diameter,
    )


def _map(fn, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def scan_rose_family(
    p_range: Iterable[int],
    s_range: Iterable[int],
    tie_tol: float = DEFAULT_TIE_TOL,
    method: str = "iterative",
    threads: int = 1,
) -> list[ScanCell]:
    """One cell per ``(p, s)``, ordered by ``s`` then ``p``; failures are recorded, not raised."""
    grid = [(p, s) for s in s_range for p in p_range]
    return _map(lambda ps: _scan_cell(ps[0], ps[1], tie_tol, method), grid, threads)


@dataclass(frozen=True)
class Violation:
    index: int
    seed: int
    n: int
    edges: tuple[tuple[int, int], ...]
    report: ConjectureReport


@dataclass(frozen=True)
class SearchReport:
    n: int
    seed: int
    instances_checked: int = 0
    violations: tuple[Violation, ...] = field(default_factory=tuple)
    degenerate_skipped: int = 0


def search_random_trees(
    n: int, instances: int, seed: int, tie_tol: float = DEFAULT_TIE_TOL, threads: int = 1
) -> SearchReport:
    """Check ``instances`` random trees; instance ``i`` uses sub-stream ``substream_seed(seed, i)``.

    The result depends only on ``(n, instances, seed, tie_tol)``, not on ``threads``.
    """
    if n < 3:
        raise ValueError(f"search needs n >= 3, got {n}")

    def one(i: int) -> tuple[int, int, Graph, ConjectureReport]:
        sub = substream_seed(seed, i)
        g = random_tree(n, sub)
        return i, sub, g, check_conjecture(g, tie_tol)

    results = _map(one, list(range(instances)), threads)
    violations = tuple(
        Violation(i, sub, n, tuple(g.edges()), rep)
        for i, sub, g, rep in results
        if rep.verdict is Verdict.VIOLATED
    )
    degenerate = sum(1 for *_, rep in results if rep.verdict is Verdict.DEGENERATE)
    return SearchReport(n, seed, len(results), violations, degenerate)


def minimal_violating_p(
    s: int, p_max: int, tie_tol: float = DEFAULT_TIE_TOL, method: str = "iterative"
) -> int | None:
    """Smallest ``p`` in ``1..p_max`` whose rose with stem ``s`` violates the conjecture."""
    if s < 1:
        raise ValueError(f"stem length must be >= 1, got {s}")
    for p in range(1, p_max + 1):
        g = build_rose(RoseParams(p, s))
        if check_conjecture(g, tie_tol, method=method).verdict is Verdict.VIOLATED:
            return p
    return None

