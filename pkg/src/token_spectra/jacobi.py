"""Cyclic Jacobi eigensolver for dense real symmetric matrices.

Each sweep visits every off-diagonal pair (p, q) exactly once, in round-robin
(tournament) order: the n(n-1)/2 pairs are split into n-1 rounds of disjoint
pairs, and the rotations of one round commute, so a round is applied as a
single vectorised orthogonal update. Rotation angles follow the usual stable
formula t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_SWEEPS = 30
OFF_TOL = 1e-12


class ConvergenceError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint index pairs covering every pair p < q once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(
    m: np.ndarray, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray, int]:
    """Return (eigenvalues ascending, orthonormal eigenvector columns, sweeps used).

    Stops once the off-diagonal Frobenius norm is at most ``tol * ||m||_F``.
    Raises :class:`ConvergenceError` if that takes more than ``max_sweeps``.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not symmetric")
    n = a.shape[0]
    vt = np.eye(n)
    scale = float(np.linalg.norm(a))
    target = tol * scale
    rounds = round_robin(n)

    sweeps = 0
    while off_norm(a) > target:
        if sweeps == max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-norm {off_norm(a):.3e} > {target:.3e})"
            )
        sweeps += 1
        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            # rows of R^T A, then (R^T A)^T rows again: equals R^T A R by symmetry
            for _ in range(2):
                rp, rq = a[p, :], a[q, :]
                a[p, :] = c[:, None] * rp - s[:, None] * rq
                a[q, :] = s[:, None] * rp + c[:, None] * rq
                a = a.T.copy()
            a[p, q] = 0.0
            a[q, p] = 0.0

            # eigenvectors accumulate as rows of V^T
            vp, vq = vt[p, :], vt[q, :]
            vt[p, :] = c[:, None] * vp - s[:, None] * vq
            vt[q, :] = s[:, None] * vp + c[:, None] * vq
        a = 0.5 * (a + a.T)

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], vt.T[:, order], sweeps
