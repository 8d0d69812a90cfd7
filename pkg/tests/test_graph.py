import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netosc import graph as gc
from netosc.errors import (
    DuplicateEdge,
    IndexOutOfRange,
    NonPositiveWeight,
    NotSymmetric,
    ParseError,
    SelfLoop,
    TooFewNodes,
    ZeroDegreeNode,
)


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = draw(st.lists(st.floats(0.01, 10.0), min_size=len(chosen), max_size=len(chosen)))
    return gc.build_graph(n, [(i, j, w) for (i, j), w in zip(chosen, weights)])


def test_build_graph_minimal_pair():
    g = gc.build_graph(2, [(0, 1, 1.0), (1, 0, 1.0)])
    assert g.n == 2 and len(g.edges) == 2


@pytest.mark.parametrize("edges, exc", [
    ([(0, 0, 1.0)], SelfLoop),
    ([(0, 1, -2.0)], NonPositiveWeight),
    ([(0, 1, 0.0)], NonPositiveWeight),
    ([(0, 3, 1.0)], IndexOutOfRange),
    ([(-1, 0, 1.0)], IndexOutOfRange),
    ([(0, 1, 1.0), (0, 1, 2.0)], DuplicateEdge),
])
def test_build_graph_rejects(edges, exc):
    with pytest.raises(exc):
        gc.build_graph(3, edges)


@pytest.mark.parametrize("n, w, edges, degree", [(3, 1.0, 6, 2.0), (2, 5.0, 2, 5.0),
                                                  (5, 2.0, 20, 8.0)])
def test_complete_graph(n, w, edges, degree):
    g = gc.complete_graph(n, w)
    assert len(g.edges) == edges
    np.testing.assert_array_equal(np.diag(gc.degree_matrix(g)), np.full(n, degree))


def test_complete_graph_too_small():
    with pytest.raises(TooFewNodes):
        gc.complete_graph(1, 1.0)


def test_adjacency():
    A = gc.adjacency_matrix(gc.complete_graph(3, 1.0))
    np.testing.assert_array_equal(A, np.ones((3, 3)) - np.eye(3))
    assert not gc.adjacency_matrix(gc.build_graph(3, [])).any()
    single = gc.adjacency_matrix(gc.build_graph(3, [(0, 1, 2.5)]))
    assert single[0, 1] == 2.5 and np.count_nonzero(single) == 1


def test_degree_matrix():
    np.testing.assert_array_equal(gc.degree_matrix(gc.complete_graph(3, 1.0)), 2 * np.eye(3))
    assert not gc.degree_matrix(gc.build_graph(3, [])).any()
    star = gc.build_graph(3, [(0, 1, 1.0), (0, 2, 3.0)])
    np.testing.assert_array_equal(gc.degree_matrix(star), np.diag([4.0, 0.0, 0.0]))


def test_laplacian_hand_values():
    np.testing.assert_array_equal(gc.laplacian(gc.complete_graph(3, 1.0)),
                                  [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    assert not gc.laplacian(gc.build_graph(4, [])).any()
    pair = gc.build_graph(2, [(0, 1, 1.0), (1, 0, 1.0)])
    np.testing.assert_array_equal(gc.laplacian(pair), [[1, -1], [-1, 1]])


def test_semi_normalized():
    g3 = gc.complete_graph(3, 1.0)
    np.testing.assert_allclose(gc.semi_normalized_laplacian(g3), gc.laplacian(g3) / np.sqrt(2),
                               atol=1e-15)
    g2 = gc.complete_graph(2, 4.0)
    np.testing.assert_allclose(gc.semi_normalized_laplacian(g2), gc.laplacian(g2) / 2, atol=1e-15)
    with pytest.raises(ZeroDegreeNode):
        gc.semi_normalized_laplacian(gc.build_graph(3, [(0, 1, 1.0), (1, 0, 1.0)]))


def test_semi_normalized_two_forms_agree():
    # sqrt(D) - D^{-1/2} A, computed independently of the row-scaling path
    g = gc.build_graph(3, [(0, 1, 1.0), (1, 2, 2.0), (2, 0, 0.5), (0, 2, 3.0)])
    d = np.diag(gc.degree_matrix(g))
    other = np.diag(np.sqrt(d)) - np.diag(1 / np.sqrt(d)) @ gc.adjacency_matrix(g)
    np.testing.assert_allclose(gc.semi_normalized_laplacian(g), other, atol=1e-14)


def test_normalized():
    np.testing.assert_allclose(gc.normalized_laplacian(gc.complete_graph(3, 1.0)),
                               [[1, -.5, -.5], [-.5, 1, -.5], [-.5, -.5, 1]], atol=1e-15)
    np.testing.assert_allclose(gc.normalized_laplacian(gc.complete_graph(2, 1.0)),
                               [[1, -1], [-1, 1]], atol=1e-15)
    with pytest.raises(ZeroDegreeNode):
        gc.normalized_laplacian(gc.build_graph(2, [(0, 1, 1.0)]))


@pytest.mark.parametrize("n, w", [(3, 1.0), (5, 2.0), (10, 1.0), (4, 0.3)])
def test_uniform_degree_forms(n, w):
    g = gc.complete_graph(n, w)
    L, d = gc.laplacian(g), (n - 1) * w
    np.testing.assert_allclose(gc.semi_normalized_laplacian(g), L / np.sqrt(d), atol=1e-12)
    np.testing.assert_allclose(gc.normalized_laplacian(g), L / d, atol=1e-12)


@pytest.mark.parametrize("n, w, expected", [(3, 1.0, [0, 3, 3]), (5, 2.0, [0, 10, 10, 10, 10])])
def test_spectrum_complete_graph(n, w, expected):
    dec = gc.spectral_decomposition(gc.laplacian(gc.complete_graph(n, w)))
    np.testing.assert_allclose(dec.eigenvalues, expected, atol=1e-9)


@pytest.mark.parametrize("n, w", [(2, 1.0), (4, 0.7), (7, 3.0), (12, 1.5)])
def test_spectrum_multiplicity(n, w):
    ev = gc.spectral_decomposition(gc.laplacian(gc.complete_graph(n, w))).eigenvalues
    assert abs(ev[0]) < 1e-9
    np.testing.assert_allclose(ev[1:], n * w, atol=1e-9)


def test_spectrum_zero_and_asymmetric():
    np.testing.assert_array_equal(gc.spectral_decomposition(np.zeros((3, 3))).eigenvalues, 0)
    with pytest.raises(NotSymmetric):
        gc.spectral_decomposition(gc.laplacian(gc.build_graph(2, [(0, 1, 1.0)])))


def test_spectral_decomposition_invariants():
    rng = np.random.default_rng(3)
    B = rng.normal(size=(6, 6))
    m = B + B.T
    dec = gc.spectral_decomposition(m)
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    np.testing.assert_allclose(dec.basis.T @ dec.basis, np.eye(6), atol=1e-10)
    np.testing.assert_allclose(m @ dec.basis, dec.basis * dec.eigenvalues, atol=1e-10)
    assert np.max(np.abs(m - dec.reconstruct())) < 1e-9


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_laplacian_row_sums_vanish(g):
    assert np.max(np.abs(gc.laplacian(g).sum(axis=1)), initial=0.0) < 1e-12


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_degree_equals_adjacency_row_sums(g):
    np.testing.assert_array_equal(np.diag(gc.degree_matrix(g)),
                                  gc.adjacency_matrix(g).sum(axis=1))


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_edge_list_roundtrip(tmp_path_factory, g):
    path = tmp_path_factory.mktemp("edges") / "g.txt"
    gc.write_edge_list(g, path)
    assert gc.read_edge_list(path) == g


def test_edge_list_comments_and_errors(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# a triangle\nn 3\n0 1 0.1\n# comment\n1 2 1e-3\n\n2 0 3\n")
    g = gc.read_edge_list(p)
    assert g.n == 3 and g.edges == ((0, 1, 0.1), (1, 2, 1e-3), (2, 0, 3.0))
    p.write_text("0 1 1.0\n")
    with pytest.raises(ParseError):
        gc.read_edge_list(p)
    p.write_text("n 2\n0 1\n")
    with pytest.raises(ParseError):
        gc.read_edge_list(p)
    p.write_text("n 2\n0 0 1.0\n")
    with pytest.raises(SelfLoop):
        gc.read_edge_list(p)
