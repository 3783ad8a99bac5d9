"""Graph Laplacian and the eigensolvers built on it.

Convention: ``L = D - A``, positive semidefinite, eigenvalues
``0 = lambda_1 <= lambda_2 <= ...``. (Some texts write ``A - D``; the spectrum
is just negated.)

Two independent routes to the Fiedler pair are provided:

* :func:`full_spectrum` -- dense Householder tridiagonalization + implicit QL.
* :func:`fiedler` -- block inverse iteration on the complement of the constant
  vector, with Rayleigh-Ritz extraction. Linear solves use a sparse LU of the
  grounded Laplacian (row/column 0 removed), which is positive definite for a
  connected graph.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ._tridiag import symmetric_eig
from .graph import DisconnectedGraphError, Graph, is_connected

DENSE_CAP = 2000
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10000
DEGENERACY_RTOL = 1e-8
ANCHOR_EPS = 1e-12


class EigenSolverError(RuntimeError):
    pass


class DenseCapError(EigenSolverError):
    pass


class ConvergenceError(EigenSolverError):
    def __init__(self, message: str, residual: float, iterations: int) -> None:
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class LaplacianView:
    """Read access to ``L = D - A`` of ``graph`` without densifying."""

    graph: Graph

    @property
    def n(self) -> int:
        return self.graph.n

    def row(self, i: int) -> dict[int, float]:
        out = {i: float(self.graph.degree(i))}
        for j in self.graph.adjacency[i]:
            out[j] = -1.0
        return out

    def diagonal(self) -> np.ndarray:
        return np.array(self.graph.degrees(), dtype=float)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.to_sparse() @ x

    def quadratic_form(self, x: np.ndarray) -> float:
        """``x^T L x`` as the sum of squared differences over edges."""
        x = np.asarray(x, dtype=float)
        edges = np.array(self.graph.edges(), dtype=int).reshape(-1, 2)
        return float(np.sum((x[edges[:, 0]] - x[edges[:, 1]]) ** 2))

    def to_sparse(self) -> sp.csr_matrix:
        edges = np.array(self.graph.edges(), dtype=int).reshape(-1, 2)
        n = self.n
        rows = np.concatenate([edges[:, 0], edges[:, 1], np.arange(n)])
        cols = np.concatenate([edges[:, 1], edges[:, 0], np.arange(n)])
        vals = np.concatenate([-np.ones(2 * len(edges)), self.diagonal()])
        return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()


def laplacian(g: Graph) -> LaplacianView:
    return LaplacianView(g)


def jacobi_eigh(a, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small real symmetric matrix by cyclic Jacobi.

    Meant for the Rayleigh-Ritz matrices of :func:`fiedler` (a handful of
    rows), so it runs on plain Python floats. Returns ascending eigenvalues
    and orthonormal eigenvector columns.
    """
    A = [[float(x) for x in row] for row in np.asarray(a)]
    n = len(A)
    V = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    scale = math.sqrt(sum(x * x for row in A for x in row))
    stop = (n * np.finfo(float).eps * scale) ** 2

    for _ in range(max_sweeps):
        off = sum(A[p][q] ** 2 for p in range(n) for q in range(p + 1, n))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                if abs(apq) <= 1e-18 * (abs(A[p][p]) + abs(A[q][q])) + 1e-300:
                    A[p][q] = A[q][p] = 0.0
                    continue
                theta = (A[q][q] - A[p][p]) / (2.0 * apq)
                t = math.copysign(1.0 / (abs(theta) + math.hypot(theta, 1.0)), theta)
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for row in A:
                    akp, akq = row[p], row[q]
                    row[p] = c * akp - s * akq
                    row[q] = s * akp + c * akq
                Ap, Aq = A[p], A[q]
                for k in range(n):
                    apk, aqk = Ap[k], Aq[k]
                    Ap[k] = c * apk - s * aqk
                    Aq[k] = s * apk + c * aqk
                A[p][q] = A[q][p] = 0.0
                for row in V:
                    vkp, vkq = row[p], row[q]
                    row[p] = c * vkp - s * vkq
                    row[q] = s * vkp + c * vkq
    else:
        off = sum(A[p][q] ** 2 for p in range(n) for q in range(p + 1, n))
        if off > 1e6 * stop:
            raise EigenSolverError(f"Jacobi did not converge: off-diagonal norm {math.sqrt(off):.3e}")

    w = np.array([A[i][i] for i in range(n)])
    order = np.argsort(w, kind="stable")
    return w[order], np.array(V)[:, order]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def full_spectrum(g: Graph, tol: float = DEFAULT_TOL, dense_cap: int = DENSE_CAP) -> Spectrum:
    """All Laplacian eigenpairs by tridiagonal QL, checked against ``tol``."""
    if g.n > dense_cap:
        raise DenseCapError(
            f"n={g.n} exceeds the dense cap of {dense_cap}; use fiedler() for large graphs"
        )
    L = laplacian(g).to_dense()
    try:
        w, V = symmetric_eig(L)
    except ArithmeticError as exc:
        raise EigenSolverError(str(exc)) from exc
    bound = tol * max(1.0, float(w[-1]))
    residual = np.linalg.norm(L @ V - V * w, axis=0).max()
    ortho = np.abs(V.T @ V - np.eye(g.n)).max()
    if residual > bound or ortho > tol:
        raise EigenSolverError(
            f"dense eigendecomposition failed checks: residual {residual:.2e}, "
            f"orthogonality {ortho:.2e}"
        )
    w.setflags(write=False)
    V.setflags(write=False)
    return Spectrum(w, V)


@dataclass(frozen=True)
class FiedlerResult:
    lambda2: float
    vector: np.ndarray
    gap: float | None
    degenerate: bool
    iterations: int
    residual: float


def orient(vector: np.ndarray, anchor: int | None = None) -> np.ndarray:
    """Fix the sign of an eigenvector.

    ``anchor=None``: the lowest-index entry with magnitude above 1e-12 is made
    positive. ``anchor=k``: entry ``k`` is made nonnegative (the rose tables
    use the hub).
    """
    v = np.array(vector, dtype=float)
    if anchor is None:
        big = np.flatnonzero(np.abs(v) > ANCHOR_EPS)
        if len(big) and v[big[0]] < 0:
            v = -v
    elif v[anchor] < 0:
        v = -v
    return v


def fiedler(
    g: Graph,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    anchor: int | None = None,
    block: int = 6,
) -> FiedlerResult:
    """Algebraic connectivity and Fiedler vector by block inverse iteration.

    Iterates on the subspace orthogonal to the all-ones vector until the
    residual ``||L v - lambda_2 v||`` of the leading Ritz pair (and of the
    next one, which supplies ``lambda_3`` for the gap) is at most ``tol``.
    """
    n = g.n
    if n < 2:
        raise EigenSolverError("the Fiedler vector needs at least 2 vertices")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is disconnected: lambda_2 = 0 and the Fiedler vector is ill-defined")

    L = laplacian(g).to_sparse()
    grounded = splu(L[1:, 1:].tocsc())

    def apply_pinv(X: np.ndarray) -> np.ndarray:
        Y = np.zeros_like(X)
        Y[1:] = grounded.solve(X[1:])
        return Y - Y.mean(axis=0)

    b = min(n - 1, block)
    need = min(b, 2)
    X = np.random.default_rng(0).standard_normal((n, b))
    Q, _ = np.linalg.qr(X - X.mean(axis=0))

    best = np.inf
    for it in range(1, max_iter + 1):
        Y = apply_pinv(Q)
        Q, _ = np.linalg.qr(Y - Y.mean(axis=0))
        LQ = L @ Q
        H = Q.T @ LQ
        w, W = jacobi_eigh((H + H.T) / 2)
        Q = Q @ W
        res = np.linalg.norm(LQ @ W - Q * w, axis=0)
        best = min(best, float(res[0]))
        if np.all(res[:need] <= tol):
            break
    else:
        raise ConvergenceError(
            f"Fiedler iteration did not reach tol={tol:g} in {max_iter} iterations "
            f"(best residual {best:.3e})",
            residual=best,
            iterations=max_iter,
        )

    v = Q[:, 0] - Q[:, 0].mean()
    v = orient(v / np.linalg.norm(v), anchor)
    lam = float(v @ (L @ v))
    residual = float(np.linalg.norm(L @ v - lam * v))
    gap = float(w[1] - lam) if n >= 3 else None
    degenerate = gap is not None and gap <= DEGENERACY_RTOL * max(1.0, lam)
    v.setflags(write=False)
    return FiedlerResult(lam, v, gap, degenerate, it, residual)


def fiedler_dense(g: Graph, tol: float = DEFAULT_TOL, anchor: int | None = None) -> FiedlerResult:
    """Fiedler pair read off :func:`full_spectrum`; the oracle for :func:`fiedler`."""
    if g.n < 2:
        raise EigenSolverError("the Fiedler vector needs at least 2 vertices")
    if not is_connected(g):
        raise DisconnectedGraphError("graph is disconnected: lambda_2 = 0 and the Fiedler vector is ill-defined")
    spec = full_spectrum(g, tol)
    lam = float(spec.eigenvalues[1])
    v = orient(spec.eigenvectors[:, 1], anchor)
    L = laplacian(g).to_dense()
    residual = float(np.linalg.norm(L @ v - lam * v))
    gap = float(spec.eigenvalues[2] - lam) if g.n >= 3 else None
    degenerate = gap is not None and gap <= DEGENERACY_RTOL * max(1.0, lam)
    v.setflags(write=False)
    return FiedlerResult(lam, v, gap, degenerate, 0, residual)


def algebraic_connectivity(g: Graph) -> float:
    if g.n < 2 or not is_connected(g):
        return 0.0
    return fiedler(g).lambda2


class Sign(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


def sign_partition(g: Graph, vector, zero_tol: float = 1e-9) -> tuple[Sign, ...]:
    v = np.asarray(vector, dtype=float)
    if v.shape != (g.n,):
        raise ValueError(f"vector has shape {v.shape}, expected ({g.n},)")
    return tuple(
        Sign.POSITIVE if x > zero_tol else Sign.NEGATIVE if x < -zero_tol else Sign.ZERO
        for x in v
    )
