"""Discrete heat equation ``du/dt = -L u`` on a graph.

The spectral expansion ``u(t) = sum_i <u0, e_i> exp(-lambda_i t) e_i`` is the
primary solver; fixed-step RK4 is an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph
from .spectral import Spectrum, fiedler, full_spectrum, laplacian

STABILITY_FACTOR = 0.1
TRANSIENT_RATIO = 1e-8
MIN_PROJECTION = 1e-9


class HeatError(ValueError):
    pass


@dataclass(frozen=True)
class HeatState:
    t: float
    u: np.ndarray

    def __post_init__(self) -> None:
        if self.t < 0:
            raise HeatError(f"time must be nonnegative, got {self.t}")
        if not np.all(np.isfinite(self.u)):
            raise HeatError("heat values must be finite")

    @property
    def mass(self) -> float:
        return float(np.sum(self.u))


@dataclass(frozen=True)
class HeatTrajectory:
    samples: tuple[HeatState, ...]

    def __post_init__(self) -> None:
        times = [s.t for s in self.samples]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise HeatError("trajectory times must be strictly increasing")

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.samples]


def _initial(g: Graph, u0) -> np.ndarray:
    u = np.asarray(u0, dtype=float)
    if u.shape != (g.n,):
        raise HeatError(f"initial heat has shape {u.shape}, expected ({g.n},)")
    return u


def heat_solve_spectral(
    g: Graph, u0: Sequence[float], t: float, spectrum: Spectrum | None = None
) -> HeatState:
    if t < 0:
        raise HeatError(f"time must be nonnegative, got {t}")
    u0 = _initial(g, u0)
    if spectrum is None:
        spectrum = full_spectrum(g)
    V = spectrum.eigenvectors
    coeffs = V.T @ u0
    u = V @ (coeffs * np.exp(-spectrum.eigenvalues * t))
    return HeatState(float(t), u)


def max_stable_dt(g: Graph) -> float:
    return STABILITY_FACTOR / max(g.max_degree, 1)


def heat_solve_rk4(g: Graph, u0: Sequence[float], t: float, dt: float) -> HeatState:
    """Classical RK4 with fixed step ``dt``; the last step is shortened to land on ``t``."""
    if t < 0:
        raise HeatError(f"time must be nonnegative, got {t}")
    bound = max_stable_dt(g)
    if not 0 < dt <= bound:
        raise HeatError(f"dt={dt:g} violates the stability bound 0 < dt <= 0.1/max_degree = {bound:g}")
    u = _initial(g, u0).copy()
    L = laplacian(g).to_sparse()

    def step(u: np.ndarray, h: float) -> np.ndarray:
        k1 = -(L @ u)
        k2 = -(L @ (u + 0.5 * h * k1))
        k3 = -(L @ (u + 0.5 * h * k2))
        k4 = -(L @ (u + h * k3))
        return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    full = int(math.floor(t / dt))
    for _ in range(full):
        u = step(u, dt)
    rest = t - full * dt
    if rest > 1e-12 * dt:
        u = step(u, rest)
    return HeatState(float(t), u)


def heat_trajectory(
    g: Graph, u0: Sequence[float], times: Sequence[float], method: str = "spectral", dt: float = 1e-3
) -> HeatTrajectory:
    if method == "spectral":
        spectrum = full_spectrum(g)
        states = [heat_solve_spectral(g, u0, t, spectrum) for t in times]
    elif method == "rk4":
        states = [heat_solve_rk4(g, u0, t, dt) for t in times]
    else:
        raise HeatError(f"unknown method {method!r}")
    return HeatTrajectory(tuple(states))


def energy(g: Graph, u: np.ndarray) -> float:
    return laplacian(g).quadratic_form(u)


@dataclass(frozen=True)
class TransientReport:
    t_star: float
    hot_vertices: tuple[int, ...]
    cold_vertices: tuple[int, ...]
    fiedler_hot: tuple[int, ...]
    fiedler_cold: tuple[int, ...]
    matched: bool
    ratio: float  # achieved subdominant / dominant transient ratio at t_star


def extreme_sets(x: np.ndarray, tie_tol: float) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Vertices within ``tie_tol * (max - min)`` of the max and of the min."""
    hi, lo = float(x.max()), float(x.min())
    slack = tie_tol * (hi - lo)
    top = tuple(int(i) for i in np.flatnonzero(x >= hi - slack))
    bottom = tuple(int(i) for i in np.flatnonzero(x <= lo + slack))
    return top, bottom


def transient_extremes(
    g: Graph, u0: Sequence[float], ratio: float = TRANSIENT_RATIO, tie_tol: float = 1e-6
) -> TransientReport:
    """Compare the hottest/coldest vertices of the late-time heat with the Fiedler extremes.

    ``t_star`` is the first time at which the triangle-inequality bound
    ``sum_{i>=3} |c_i| exp(-(lambda_i - lambda_2) t) / |c_2|`` drops to
    ``ratio``. Extremes of ``u(t_star)`` are read off the transient part
    rescaled by ``exp(lambda_2 t_star)``, which has the same argmax/argmin as
    ``u`` but does not vanish into the constant mode in floating point.
    """
    u0 = _initial(g, u0)
    fr = fiedler(g)
    if fr.degenerate:
        raise HeatError("lambda_2 is degenerate; the long-run heat profile is not a single Fiedler vector")
    proj = float(fr.vector @ u0)
    if abs(proj) <= MIN_PROJECTION:
        raise HeatError(f"<u0, e2> = {proj:.3e} is numerically zero; the transient is not Fiedler-dominated")

    spectrum = full_spectrum(g)
    lam = spectrum.eigenvalues
    V = spectrum.eigenvectors
    c = V.T @ u0
    c2 = abs(c[1])
    rest = float(np.sum(np.abs(c[2:])))
    if g.n < 3 or rest <= ratio * c2:
        t_star = 0.0
    else:
        t_star = math.log(rest / (ratio * c2)) / float(lam[2] - lam[1])

    decay = np.exp(-(lam[1:] - lam[1]) * t_star)
    achieved = float(np.sum(np.abs(c[2:]) * decay[1:]) / c2)
    transient = V[:, 1:] @ (c[1:] * decay)
    hot, cold = extreme_sets(transient, tie_tol)

    oriented = np.sign(proj) * fr.vector
    f_hot, f_cold = extreme_sets(oriented, tie_tol)
    matched = hot == f_hot and cold == f_cold
    return TransientReport(t_star, hot, cold, f_hot, f_cold, matched, achieved)
