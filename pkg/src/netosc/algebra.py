"""Anti-commuting 2x2 pair and the doubled evolution operators built from it.

State layout is interleaved: index ``2*i + s`` is node ``i``, spinor slot
``s``. With this layout ``np.kron(H, m)`` is exactly ``H (x) m``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonDiagonalSqrtD

IDENTITY2 = np.eye(2)
NULL2 = np.zeros((2, 2))
SPINOR_FLIP = np.diag([1.0, -1.0])


def matrix_a() -> np.ndarray:
    return 0.5 * np.array([[1.0, 1.0], [-1.0, -1.0]])


def matrix_b() -> np.ndarray:
    return 0.5 * np.array([[1.0, -1.0], [1.0, -1.0]])


def anticommutator(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return p @ q + q @ p


@dataclass(frozen=True)
class ValidityReport:
    anticommutator_deviation: float
    first_square_deviation: float
    second_square_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(
            self.anticommutator_deviation,
            self.first_square_deviation,
            self.second_square_deviation,
        ) < self.tol

    def to_dict(self) -> dict:
        return {
            "anticommutator_deviation": self.anticommutator_deviation,
            "first_square_deviation": self.first_square_deviation,
            "second_square_deviation": self.second_square_deviation,
            "tol": self.tol,
            "passed": self.passed,
        }


def verify_representation(p, q, tol: float = 1e-12) -> ValidityReport:
    """Check ``{p, q} = e`` and ``p^2 = q^2 = 0`` in max-abs norm."""
    p = np.asarray(p)
    q = np.asarray(q)
    return ValidityReport(
        float(np.max(np.abs(anticommutator(p, q) - IDENTITY2))),
        float(np.max(np.abs(p @ p))),
        float(np.max(np.abs(q @ q))),
        float(tol),
    )


@dataclass(frozen=True)
class Representation:
    """Which 2x2 factor multiplies H (``first``) and which multiplies sqrt(D)."""

    tag: str
    first: np.ndarray
    second: np.ndarray

    def __repr__(self):
        return f"Representation({self.tag!r})"


REP_A = Representation("A", matrix_a(), matrix_b())
REP_B = Representation("B", matrix_b(), matrix_a())
REPRESENTATIONS = {"A": REP_A, "B": REP_B}


def representation(tag) -> Representation:
    if isinstance(tag, Representation):
        return tag
    try:
        return REPRESENTATIONS[str(tag).upper()]
    except KeyError:
        raise ValueError(f"unknown representation {tag!r}; expected 'A' or 'B'") from None


@dataclass(frozen=True)
class EvolutionOperator:
    n: int
    rep: Representation
    matrix: np.ndarray  # complex, shape (2n, 2n)


def evolution_operator(H, sqrtD, rep) -> EvolutionOperator:
    """Assemble ``H (x) first + sqrt(D) (x) second`` for the given representation."""
    rep = representation(rep)
    H = np.asarray(H, dtype=float)
    sqrtD = np.asarray(sqrtD, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatch(f"H must be square, got {H.shape}")
    if sqrtD.shape != H.shape:
        raise DimensionMismatch(f"sqrt(D) has shape {sqrtD.shape}, H has {H.shape}")
    diag = np.diag(sqrtD)
    if np.any(sqrtD - np.diag(diag) != 0):
        raise NonDiagonalSqrtD("sqrt(D) has nonzero off-diagonal entries")
    if np.any(diag <= 0):
        raise NonDiagonalSqrtD("sqrt(D) diagonal must be strictly positive")
    matrix = np.kron(H, rep.first) + np.kron(sqrtD, rep.second)
    return EvolutionOperator(H.shape[0], rep, matrix.astype(complex))


def operator_square_diagnostic(op: EvolutionOperator, L) -> float:
    """``max |Op^2 - L (x) e|``; vanishes when the degree matrix is a multiple of I."""
    L = np.asarray(L)
    if L.shape != (op.n, op.n):
        raise DimensionMismatch(f"L has shape {L.shape}, operator acts on n={op.n}")
    return float(np.max(np.abs(op.matrix @ op.matrix - np.kron(L, IDENTITY2))))


def intertwiner(n: int) -> np.ndarray:
    """``I_n (x) diag(1, -1)``; conjugating the A operator by it gives the B operator."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return np.kron(np.eye(n), SPINOR_FLIP)
