"""Directed weighted graphs and the Laplacian family derived from them.

Every matrix is computed from the edge list on demand and returned as a
fresh dense ``numpy`` array; nothing is cached or mutated in place.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateEdge,
    IndexOutOfRange,
    NonPositiveWeight,
    NotSymmetric,
    ParseError,
    SelfLoop,
    TooFewNodes,
    ZeroDegreeNode,
)

SYMMETRY_TOL = 1e-10

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise TooFewNodes(f"node count must be an integer >= 1, got {self.n!r}")
        seen = set()
        for src, dst, w in self.edges:
            if not (0 <= src < self.n and 0 <= dst < self.n):
                raise IndexOutOfRange(f"edge ({src}, {dst}) outside [0, {self.n})")
            if src == dst:
                raise SelfLoop(f"self-loop at node {src}")
            if not w > 0:
                raise NonPositiveWeight(f"edge ({src}, {dst}) has weight {w!r}")
            if (src, dst) in seen:
                raise DuplicateEdge(f"edge ({src}, {dst}) listed twice")
            seen.add((src, dst))

    @property
    def is_uniform_degree(self) -> bool:
        d = out_degrees(self)
        return bool(np.all(d == d[0]))


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # ascending
    basis: np.ndarray  # columns are orthonormal eigenvectors

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.T


def build_graph(n: int, edges: Iterable[Sequence]) -> Graph:
    """Validate ``edges`` as ``(src, dst, weight)`` triples on ``n`` nodes."""
    normalized = tuple((int(s), int(t), float(w)) for s, t, w in edges)
    return Graph(int(n), normalized)


def complete_graph(n: int, w: float) -> Graph:
    """All ``n(n-1)`` directed links, each with weight ``w``."""
    if n < 2:
        raise TooFewNodes(f"complete graph needs n >= 2, got {n}")
    if not w > 0:
        raise NonPositiveWeight(f"weight must be positive, got {w!r}")
    w = float(w)
    return Graph(n, tuple((i, j, w) for i in range(n) for j in range(n) if i != j))


def adjacency_matrix(g: Graph) -> np.ndarray:
    A = np.zeros((g.n, g.n))
    for src, dst, w in g.edges:
        A[src, dst] = w
    return A


def out_degrees(g: Graph) -> np.ndarray:
    return adjacency_matrix(g).sum(axis=1)


def degree_matrix(g: Graph) -> np.ndarray:
    return np.diag(out_degrees(g))


def laplacian(g: Graph) -> np.ndarray:
    return degree_matrix(g) - adjacency_matrix(g)


def _positive_degrees(g: Graph) -> np.ndarray:
    d = out_degrees(g)
    zero = np.flatnonzero(d == 0)
    if zero.size:
        raise ZeroDegreeNode(f"nodes {zero.tolist()} have zero out-degree")
    return d


def sqrt_degree_matrix(g: Graph) -> np.ndarray:
    return np.diag(np.sqrt(_positive_degrees(g)))


def semi_normalized_laplacian(g: Graph) -> np.ndarray:
    """``D^{-1/2} L``, equivalently ``sqrt(D) - D^{-1/2} A``."""
    d = _positive_degrees(g)
    return laplacian(g) / np.sqrt(d)[:, None]


def normalized_laplacian(g: Graph) -> np.ndarray:
    d = _positive_degrees(g)
    inv_root = 1.0 / np.sqrt(d)
    return np.eye(g.n) - inv_root[:, None] * adjacency_matrix(g) * inv_root[None, :]


def spectral_decomposition(m: np.ndarray) -> SpectralDecomposition:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"max |m - m^T| = {asym:.3e} exceeds {SYMMETRY_TOL}")
    vals, vecs = np.linalg.eigh(0.5 * (m + m.T))
    return SpectralDecomposition(vals, vecs)


def read_edge_list(path) -> Graph:
    """Parse the ``n <count>`` / ``<src> <dst> <weight>`` text format."""
    n = None
    edges = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"{path}:{lineno}: expected 'n <count>', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: bad node count {parts[1]!r}") from None
            continue
        if len(parts) != 3:
            raise ParseError(f"{path}:{lineno}: expected '<src> <dst> <weight>', got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ParseError(f"{path}:{lineno}: cannot parse {raw!r}") from None
    if n is None:
        raise ParseError(f"{path}: missing 'n <count>' header")
    return build_graph(n, edges)


def write_edge_list(g: Graph, path) -> None:
    # repr gives the shortest decimal that round-trips to the same double
    lines = [f"n {g.n}"] + [f"{s} {t} {w!r}" for s, t, w in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")
