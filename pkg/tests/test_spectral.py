import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fiedler_lab.graph import (
    DisconnectedGraphError,
    Graph,
    RoseParams,
    build_complete,
    build_path,
    build_rose,
    build_star,
    random_tree,
)
from fiedler_lab.spectral import (
    ConvergenceError,
    DenseCapError,
    EigenSolverError,
    Sign,
    algebraic_connectivity,
    fiedler,
    fiedler_dense,
    full_spectrum,
    jacobi_eigh,
    laplacian,
    orient,
    sign_partition,
)
from fiedler_lab._tridiag import symmetric_eig

from .conftest import ROSE_TABLES, small_trees, two_disjoint_edges


def exact_eigenvalues(g: Graph) -> list[float]:
    """Roots of the exact characteristic polynomial (sympy, rational arithmetic)."""
    M = sympy.Matrix(laplacian(g).to_dense().astype(int).tolist())
    lam = sympy.Symbol("lam")
    roots = sympy.roots(M.charpoly(lam).as_expr(), lam)
    out = []
    for r, mult in roots.items():
        out += [float(r)] * mult
    return sorted(out)


def check_spectrum_invariants(g, spec, tol=1e-10):
    L = laplacian(g).to_dense()
    w, V = spec.eigenvalues, spec.eigenvectors
    assert np.all(np.diff(w) >= 0)
    scale = max(1.0, w[-1])
    for i in range(g.n):
        assert np.linalg.norm(L @ V[:, i] - w[i] * V[:, i]) <= tol * scale
    assert np.abs(V.T @ V - np.eye(g.n)).max() <= tol
    assert abs(w[0]) <= tol


# -- laplacian ---------------------------------------------------------------


def test_laplacian_path2():
    assert laplacian(build_path(2)).to_dense().tolist() == [[1, -1], [-1, 1]]


def test_laplacian_star3_diagonal():
    assert laplacian(build_star(3)).diagonal().tolist() == [3, 1, 1, 1]


def test_laplacian_row_access():
    lv = laplacian(build_rose(RoseParams(2, 2)))
    assert lv.row(3) == {3: 3.0, 2: -1.0, 4: -1.0, 6: -1.0}


@pytest.mark.parametrize("g", small_trees(10) + [build_complete(5), two_disjoint_edges()])
def test_laplacian_invariants(g):
    L = laplacian(g).to_dense()
    assert np.array_equal(L, L.T)
    assert np.all(L.sum(axis=1) == 0)
    assert np.all(np.diag(L) >= 0)
    x = np.random.default_rng(g.n).standard_normal(g.n)
    assert laplacian(g).quadratic_form(x) == pytest.approx(x @ L @ x, rel=1e-12)
    assert laplacian(g).quadratic_form(x) >= 0


# -- dense solvers -------------------------------------------------------------


@pytest.mark.parametrize(
    "g,expected",
    [(build_path(3), [0, 1, 3]), (build_star(3), [0, 1, 1, 4]), (build_complete(4), [0, 4, 4, 4])],
)
def test_full_spectrum_small_graphs(g, expected):
    assert exact_eigenvalues(g) == pytest.approx(expected, abs=1e-12)
    spec = full_spectrum(g)
    assert spec.eigenvalues == pytest.approx(expected, abs=1e-10)
    check_spectrum_invariants(g, spec)


@pytest.mark.parametrize("g", small_trees(25, 4, 60))
def test_full_spectrum_invariants_and_numpy_agreement(g):
    spec = full_spectrum(g)
    check_spectrum_invariants(g, spec)
    ref = np.linalg.eigvalsh(laplacian(g).to_dense())
    assert np.abs(spec.eigenvalues - ref).max() <= 1e-10
    e1 = spec.eigenvectors[:, 0]
    assert np.abs(np.abs(e1) - 1 / math.sqrt(g.n)).max() <= 1e-10


def test_full_spectrum_dense_cap():
    with pytest.raises(DenseCapError, match="fiedler"):
        full_spectrum(build_path(30), dense_cap=20)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32))
def test_symmetric_eig_random_matrices(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    M = M + M.T
    w, V = symmetric_eig(M)
    assert np.allclose(w, np.linalg.eigvalsh(M), atol=1e-10)
    assert np.abs(M @ V - V * w).max() <= 1e-10 * max(1, np.abs(w).max())
    assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32))
def test_jacobi_random_matrices(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    M = M + M.T
    w, V = jacobi_eigh(M)
    assert np.allclose(w, np.linalg.eigvalsh(M), atol=1e-12)
    assert np.abs(M @ V - V * w).max() <= 1e-12
    assert np.abs(V.T @ V - np.eye(n)).max() <= 1e-13


def test_jacobi_repeated_eigenvalues():
    w, V = jacobi_eigh(laplacian(build_star(5)).to_dense())
    assert w == pytest.approx([0, 1, 1, 1, 1, 6], abs=1e-13)
    assert np.abs(V.T @ V - np.eye(6)).max() <= 1e-13


# -- fiedler -------------------------------------------------------------------


def test_fiedler_path2():
    r = fiedler(build_path(2))
    assert r.lambda2 == pytest.approx(2, abs=1e-12)
    assert r.vector == pytest.approx([1 / math.sqrt(2), -1 / math.sqrt(2)], abs=1e-12)
    assert r.gap is None and not r.degenerate


def test_fiedler_path3():
    dense = fiedler_dense(build_path(3))
    assert dense.vector == pytest.approx([1 / math.sqrt(2), 0, -1 / math.sqrt(2)], abs=1e-12)
    r = fiedler(build_path(3))
    assert r.lambda2 == pytest.approx(1, abs=1e-12)
    assert r.vector == pytest.approx(dense.vector, abs=1e-10)




@pytest.mark.parametrize("p", sorted(ROSE_TABLES))
def test_fiedler_rose_tables(p):
    params = RoseParams(p, 5)
    r = fiedler(build_rose(params), anchor=params.hub)
    path, petal, hub = ROSE_TABLES[p]
    assert r.vector[: params.stem_tip + 1] == pytest.approx(path, abs=1e-3)
    assert r.vector[params.hub] == pytest.approx(hub, abs=1e-3)
    for q in params.petals:
        assert r.vector[q] == pytest.approx(petal, abs=1e-3)


@pytest.mark.parametrize("g", small_trees(30, 2, 80) + [build_rose(RoseParams(11, 5)), build_complete(6)])
def test_fiedler_result_invariants(g):
    r = fiedler(g)
    L = laplacian(g).to_dense()
    assert abs(np.linalg.norm(r.vector) - 1) <= 1e-12
    assert abs(r.vector.sum()) <= 1e-10
    assert np.linalg.norm(L @ r.vector - r.lambda2 * r.vector) <= 1e-9
    assert r.residual <= 1e-9
    assert r.lambda2 > 0


def test_fiedler_errors():
    with pytest.raises(DisconnectedGraphError):
        fiedler(two_disjoint_edges())
    with pytest.raises(EigenSolverError):
        fiedler(build_path(1))
    with pytest.raises(ConvergenceError) as info:
        fiedler(random_tree(150, 3), max_iter=1)
    assert info.value.residual > 0 and info.value.iterations == 1


def test_anchor_rules():
    params = RoseParams(11, 5)
    g = build_rose(params)
    default = fiedler(g)
    hub_pos = fiedler(g, anchor=params.hub)
    assert default.vector[0] > 0  # first entry -0.0093 flipped positive
    assert hub_pos.vector[params.hub] > 0
    assert default.vector == pytest.approx(-hub_pos.vector, abs=1e-12)
    assert orient(np.array([0.0, -1e-14, -0.5, 0.3]))[2] == 0.5


def test_star_is_degenerate():
    for k in range(3, 9):
        r = fiedler(build_star(k))
        assert r.degenerate and r.lambda2 == pytest.approx(1, abs=1e-10)
        assert r.gap == pytest.approx(0, abs=1e-10)
    assert not fiedler(build_star(2)).degenerate


def test_algebraic_connectivity_examples():
    assert algebraic_connectivity(build_path(2)) == pytest.approx(2, abs=1e-12)
    assert algebraic_connectivity(two_disjoint_edges()) == 0
    assert algebraic_connectivity(build_path(3)) == pytest.approx(1, abs=1e-12)


# -- properties ------------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 31))
def test_path_closed_form(n):
    closed = 4 * math.sin(math.pi / (2 * n)) ** 2
    assert full_spectrum(build_path(n)).eigenvalues[1] == pytest.approx(closed, abs=1e-12)
    assert fiedler(build_path(n)).lambda2 == pytest.approx(closed, abs=1e-9)


@pytest.mark.parametrize("g", small_trees(40, 4, 120))
def test_solver_equivalence(g):
    it, dense = fiedler(g), fiedler_dense(g)
    assert abs(it.lambda2 - dense.lambda2) <= 1e-8
    if it.gap > 1e-6:
        assert abs(it.vector @ dense.vector) >= 1 - 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 60), st.integers(0, 2**32), st.integers(0, 2**32))
def test_rayleigh_bound(n, seed, probe_seed):
    g = random_tree(n, seed)
    lam = fiedler(g).lambda2
    L = laplacian(g).to_dense()
    x = np.random.default_rng(probe_seed).standard_normal((n, 8))
    x -= x.mean(axis=0)
    x /= np.linalg.norm(x, axis=0)
    assert np.all(np.einsum("ij,ij->j", x, L @ x) >= lam - 1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2**32), st.data())
def test_connectivity_iff_positive_lambda2(n, seed, data):
    g = random_tree(n, seed)
    assert algebraic_connectivity(g) > 1e-12
    assert full_spectrum(g).eigenvalues[1] > 1e-12
    edge = data.draw(st.sampled_from(g.edges()))
    cut = g.without_edge(*edge)
    assert algebraic_connectivity(cut) == 0
    assert abs(full_spectrum(cut).eigenvalues[1]) <= 1e-10


def _induced_connected(g: Graph, vertices: set[int]) -> bool:
    if not vertices:
        return True
    start = next(iter(vertices))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for w in g.adjacency[u]:
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices


@pytest.mark.parametrize("g", small_trees(60, 4, 80))
def test_fiedler_sign_classes_are_connected_on_trees(g):
    r = fiedler(g)
    labels = sign_partition(g, r.vector)
    if Sign.ZERO in labels or r.degenerate:
        pytest.skip("zero-valued vertex or degenerate lambda_2")
    pos = {v for v, s in enumerate(labels) if s is Sign.POSITIVE}
    neg = {v for v, s in enumerate(labels) if s is Sign.NEGATIVE}
    assert _induced_connected(g, pos) and _induced_connected(g, neg)


def test_sign_partition_rose_examples():
    params = RoseParams(11, 5)
    g = build_rose(params)
    labels = sign_partition(g, fiedler(g, anchor=params.hub).vector)
    assert all(labels[v] is Sign.NEGATIVE for v in params.path_vertices)
    assert all(labels[v] is Sign.POSITIVE for v in [params.hub, *params.petals])

    params = RoseParams(10, 5)
    g = build_rose(params)
    labels = sign_partition(g, fiedler(g, anchor=params.hub).vector)
    assert all(labels[v] is Sign.POSITIVE for v in range(4))


def test_sign_partition_zero_vector():
    g = build_path(4)
    assert sign_partition(g, np.zeros(4)) == (Sign.ZERO,) * 4


@given(
    st.lists(st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False), min_size=1, max_size=20),
    st.floats(1e-3, 1e3),
)
def test_sign_partition_scale(values, c):
    g = build_path(len(values))
    v = np.array(values)
    base = sign_partition(g, v, zero_tol=0.0)
    assert sign_partition(g, c * v, zero_tol=0.0) == base
    flip = {Sign.POSITIVE: Sign.NEGATIVE, Sign.NEGATIVE: Sign.POSITIVE, Sign.ZERO: Sign.ZERO}
    assert sign_partition(g, -c * v, zero_tol=0.0) == tuple(flip[s] for s in base)
