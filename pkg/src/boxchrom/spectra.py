"""Eigenvalues of graph matrices via a deterministic cyclic Jacobi solver.

Spectra are returned in descending order.  Near-equal eigenvalues are grouped
with a fixed tolerance so multiplicity queries behave sensibly on the noisy
output of floating point diagonalisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .graphs import Graph, iter_bits, strong_product, named_graph

__all__ = [
    "MatrixKind",
    "Spectrum",
    "eigensolve",
    "graph_matrix",
    "multiplicity",
    "perron_vector",
    "product_spectrum_identity_check",
    "spectrum",
]

MULT_TOL = 1e-7
RESIDUAL_TOL = 1e-9


class MatrixKind(Enum):
    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"
    SIGNLESS_LAPLACIAN = "signless_laplacian"


def graph_matrix(g: Graph, kind: MatrixKind = MatrixKind.ADJACENCY) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for v in range(g.n):
        for u in iter_bits(g.adj[v]):
            a[v, u] = 1.0
    if kind is MatrixKind.ADJACENCY:
        return a
    deg = np.diag([float(g.degree(v)) for v in range(g.n)])
    if kind is MatrixKind.LAPLACIAN:
        return deg - a
    return deg + a


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order with a grouping tolerance."""

    values: tuple[float, ...]
    tol: float = MULT_TOL

    def __post_init__(self) -> None:
        for a, b in zip(self.values, self.values[1:]):
            if a < b - 1e-12:
                raise ValueError("spectrum values must be descending")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def largest(self) -> float:
        return self.values[0]

    @property
    def smallest(self) -> float:
        return self.values[-1]

    def multiplicity(self, value: float) -> int:
        return sum(1 for x in self.values if abs(x - value) <= self.tol)

    def groups(self) -> list[tuple[float, int]]:
        """Cluster near-equal values; each group is (mean value, count)."""
        out: list[tuple[float, int]] = []
        run: list[float] = []
        for x in self.values:
            if run and run[-1] - x > self.tol:
                out.append((sum(run) / len(run), len(run)))
                run = []
            run.append(x)
        if run:
            out.append((sum(run) / len(run), len(run)))
        return out


def multiplicity(s: Spectrum, value: float) -> int:
    return s.multiplicity(value)


def _jacobi(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps until the off-diagonal Frobenius mass is negligible."""
    a = np.array(m, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    target = 1e-12 * max(np.linalg.norm(m), 1.0)
    skip = target / (n * n)
    for _ in range(100):
        off = a - np.diag(np.diagonal(a))
        if math.sqrt(float((off * off).sum())) <= target:
            return a.diagonal().copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = a[p].copy(), a[q].copy()
                a[p] = c * rp - s * rq
                a[q] = s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise ArithmeticError("Jacobi iteration failed to converge")


def eigensolve(m: np.ndarray) -> tuple[Spectrum, np.ndarray]:
    """Full symmetric eigendecomposition m = V diag(w) V^T.

    Eigenvalues come back descending, eigenvector k in column k of V.  The
    residual and orthonormality of the factorisation are verified before
    returning; an asymmetric input is rejected.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] == 0:
        raise ValueError("matrix must be non-empty")
    scale = 1.0 + float(np.abs(m).max())
    if float(np.abs(m - m.T).max()) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    w, v = _jacobi(m)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    if float(np.abs(m @ v - v * w).max()) > RESIDUAL_TOL * scale:
        raise ArithmeticError("eigendecomposition residual too large")
    if float(np.abs(v.T @ v - np.eye(m.shape[0])).max()) > RESIDUAL_TOL:
        raise ArithmeticError("eigenvectors are not orthonormal")
    return Spectrum(tuple(float(x) for x in w)), v


@lru_cache(maxsize=4096)
def _spectrum_cached(g: Graph, kind: MatrixKind) -> Spectrum:
    s, _ = eigensolve(graph_matrix(g, kind))
    n = g.n
    tot = sum(s.values)
    if kind is MatrixKind.ADJACENCY and abs(tot) > 1e-8 * max(n, 1):
        raise ArithmeticError("adjacency spectrum does not sum to zero")
    if kind in (MatrixKind.LAPLACIAN, MatrixKind.SIGNLESS_LAPLACIAN):
        if abs(tot - 2 * g.edge_count) > 1e-8 * max(n, 1):
            raise ArithmeticError("Laplacian-type trace mismatch")
    return s


def spectrum(g: Graph, kind: MatrixKind = MatrixKind.ADJACENCY) -> Spectrum:
    """Spectrum of the chosen matrix of g (memoised; graphs are immutable)."""
    if g.n == 0:
        raise ValueError("spectrum of the empty graph is undefined")
    return _spectrum_cached(Graph(g.n, g.adj), kind)


@lru_cache(maxsize=1024)
def _perron_cached(g: Graph) -> tuple[float, ...]:
    s, v = eigensolve(graph_matrix(g))
    vec = v[:, 0]
    if vec[0] < 0:
        vec = -vec
    if np.min(vec) <= 0:
        raise ArithmeticError("leading eigenvector is not strictly positive")
    return tuple(float(x) for x in vec)

def perron_vector(g: Graph) -> np.ndarray:
    """Positive unit eigenvector of the largest adjacency eigenvalue.

    Only defined for connected graphs with at least one vertex.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if not g.is_connected():
        raise ValueError("Perron vector requires a connected graph")
    return np.array(_perron_cached(Graph(g.n, g.adj)))


def product_spectrum_identity_check(g: Graph, n: int, kind: MatrixKind = MatrixKind.ADJACENCY,
                                    tol: float = MULT_TOL) -> bool:
    """Check the closed form for the spectrum of the strong product with K_n.

    The predicted multiset is one first-row value per eigenvalue of g plus one
    second-row value per vertex repeated n-1 times:

    - adjacency:          {n*lam + (n-1)}         and  -1
    - Laplacian:          {n*mu}                  and  n*deg(u) + n
    - signless Laplacian: {n*theta + 2(n-1)}      and  (n-2) + n*deg(u)
    """
    if n < 1:
        raise ValueError("factor size must be at least 1")
    base = spectrum(g, kind).values
    if kind is MatrixKind.ADJACENCY:
        pred = [n * x + (n - 1) for x in base]
        pred += [-1.0] * ((n - 1) * g.n)
    elif kind is MatrixKind.LAPLACIAN:
        pred = [n * x for x in base]
        for v in range(g.n):
            pred += [float(n * g.degree(v) + n)] * (n - 1)
    else:
        pred = [n * x + 2 * (n - 1) for x in base]
        for v in range(g.n):
            pred += [float((n - 2) + n * g.degree(v))] * (n - 1)
    actual = spectrum(strong_product(g, named_graph("complete", [n])), kind).values
    pred.sort(reverse=True)
    if len(pred) != len(actual):
        return False
    return all(abs(a - b) <= tol for a, b in zip(pred, actual))
