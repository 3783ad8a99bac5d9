"""Spectral graph laboratory: Fiedler roses, Fiedler vectors, heat flow, and the diameter-pair conjecture."""

from .conjecture import (
    ConjectureReport,
    ScanCell,
    SearchReport,
    Verdict,
    check_conjecture,
    minimal_violating_p,
    scan_rose_family,
    search_random_trees,
)
from .graph import (
    DiameterResult,
    DisconnectedGraphError,
    DistanceReport,
    Graph,
    GraphError,
    RoseParams,
    bfs_distances,
    build_path,
    build_rose,
    build_star,
    diameter,
    is_connected,
    is_tree,
    random_tree,
)
from .heat import (
    HeatError,
    HeatState,
    HeatTrajectory,
    TransientReport,
    heat_solve_rk4,
    heat_solve_spectral,
    heat_trajectory,
    transient_extremes,
)
from .spectral import (
    EigenSolverError,
    FiedlerResult,
    LaplacianView,
    Sign,
    Spectrum,
    algebraic_connectivity,
    fiedler,
    fiedler_dense,
    full_spectrum,
    laplacian,
    sign_partition,
)

__version__ = "0.1.0"
