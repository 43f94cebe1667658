"""Laplacians, eigendecompositions, algebraic connectivity, Rayleigh quotients
and the eigenvector lifting/projection through the binomial matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graphs import Graph
from .jacobi import jacobi_eigh

# relative zero test for B^T u
ZERO_TOL = 1e-8


def laplacian(g: Graph) -> np.ndarray:
    """D - A as a float matrix (rows sum to exactly zero)."""
    m = np.zeros((g.n, g.n))
    for i, j in g.edges:
        m[i - 1, j - 1] = m[j - 1, i - 1] = -1.0
    m[np.diag_indices(g.n)] = [len(a) for a in g.adj]
    return m


def spectral_tol(eigenvalues) -> float:
    """Matching tolerance between spectra: 1e-8 * max(1, lambda_max)."""
    top = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return 1e-8 * max(1.0, top)


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def clusters(self, tol: float | None = None) -> list[tuple[float, int]]:
        return cluster_values(self.eigenvalues, tol)

    def to_json(self, tol: float | None = None) -> str:
        return json.dumps(
            {
                "eigenvalues": [float(x) for x in self.eigenvalues],
                "clusters": [
                    {"value": v, "multiplicity": m} for v, m in self.clusters(tol)
                ],
            }
        )


def cluster_values(values, tol: float | None = None) -> list[tuple[float, int]]:
    """Single-linkage grouping of sorted values; consecutive gaps <= tol join a
    cluster, represented by its mean."""
    vals = np.sort(np.asarray(values, dtype=float))
    if tol is None:
        tol = spectral_tol(vals)
    out: list[tuple[float, int]] = []
    group: list[float] = []
    for x in vals:
        if group and x - group[-1] > tol:
            out.append((float(np.mean(group)), len(group)))
            group = []
        group.append(float(x))
    if group:
        out.append((float(np.mean(group)), len(group)))
    return out


def eig_sym(m: np.ndarray) -> SpectralResult:
    w, v, sweeps = jacobi_eigh(m)
    return SpectralResult(w, v, sweeps)


def eigenvalues(m: np.ndarray, solver: str = "jacobi") -> np.ndarray:
    """Ascending eigenvalues; ``solver='lapack'`` uses numpy's symmetric driver."""
    if solver == "jacobi":
        return jacobi_eigh(m)[0]
    if solver == "lapack":
        return np.linalg.eigvalsh(m)
    raise ValueError(f"unknown solver {solver!r}")


def laplacian_spectrum(g: Graph, solver: str = "jacobi") -> np.ndarray:
    return eigenvalues(laplacian(g), solver)


def algebraic_connectivity(g: Graph, solver: str = "jacobi") -> float:
    if g.n < 2:
        raise ValueError("algebraic connectivity needs at least 2 vertices")
    return float(laplacian_spectrum(g, solver)[1])


def spectral_radius(g: Graph, solver: str = "jacobi") -> float:
    if g.n == 0:
        return 0.0
    return float(laplacian_spectrum(g, solver)[-1])


def fiedler_vector(g: Graph) -> np.ndarray:
    """Unit eigenvector for the second-smallest Laplacian eigenvalue."""
    if g.n < 2:
        raise ValueError("Fiedler vector needs at least 2 vertices")
    return eig_sym(laplacian(g)).eigenvectors[:, 1].copy()


def is_embedding(v, tol: float = 1e-8) -> bool:
    v = np.asarray(v, dtype=float)
    return abs(v.sum()) <= tol * max(1.0, np.sqrt(len(v)) * np.linalg.norm(v))


def rayleigh_quotient(g: Graph, v) -> float:
    """Sum over edges of (v(i) - v(j))^2 divided by sum of v(i)^2."""
    v = np.asarray(v, dtype=float)
    if v.shape != (g.n,):
        raise ValueError(f"vector has shape {v.shape}, graph has {g.n} vertices")
    denom = float(v @ v)
    if denom == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector is undefined")
    if not is_embedding(v):
        raise ValueError(f"vector is not an embedding (entries sum to {v.sum():.3e})")
    num = sum((v[i - 1] - v[j - 1]) ** 2 for i, j in g.edges)
    return float(num / denom)


def _check_len(vec: np.ndarray, size: int, what: str) -> np.ndarray:
    vec = np.asarray(vec, dtype=float)
    if vec.shape != (size,):
        raise ValueError(f"{what} must have length {size}, got shape {vec.shape}")
    return vec


def lift_eigenvector(b: np.ndarray, v) -> np.ndarray:
    """B v: a lambda-eigenvector of L(G) becomes a lambda-eigenvector of L(F_k(G))."""
    return b @ _check_len(v, b.shape[1], "vector")


def project_eigenvector(b: np.ndarray, u) -> np.ndarray:
    """B^T u. Only an eigenvector of L(G) when nonzero; test with :func:`is_zero_projection`."""
    return b.T @ _check_len(u, b.shape[0], "vector")


def is_zero_projection(b: np.ndarray, u, tol: float = ZERO_TOL) -> bool:
    u = np.asarray(u, dtype=float)
    return float(np.linalg.norm(b.T @ u)) <= tol * float(np.linalg.norm(u))


def extend_embedding(v, attach_at: int | None = None) -> np.ndarray:
    """Extend an embedding of G to G+ (G plus a pendant vertex n+1 hung at ``attach_at``).

    w(i) = v(i) - v(a)/(n+1) for i <= n and w(n+1) = n v(a)/(n+1), with a the
    attachment vertex (default n). The result sums to zero and w(a) = w(n+1).
    """
    v = np.asarray(v, dtype=float)
    n = len(v)
    a = n if attach_at is None else attach_at
    if not 1 <= a <= n:
        raise ValueError(f"attachment vertex {a} out of range 1..{n}")
    shift = v[a - 1] / (n + 1)
    return np.append(v - shift, n * shift)


def residual(m: np.ndarray, lam: float, vec: np.ndarray) -> float:
    return float(np.linalg.norm(m @ vec - lam * vec))
