"""Batched token-graph Laplacians for exhaustive sweeps.

The Laplacian of F_k(G) is additive over the edges of G:
L(F_k(G)) = sum over e in E(G) of L(F_k(single edge e)). Precomputing the C(n,2)
single-edge terms for each (n, k) turns a whole batch of graphs into one matrix
product followed by a stacked LAPACK eigensolve.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np

from .corpus import edge_order
from .graphs import Graph
from .spectral import laplacian
from .tokens import token_graph


@lru_cache(maxsize=32)
def edge_terms(n: int, k: int) -> np.ndarray:
    """Array of shape (C(n,2), N*N), N = C(n,k): flattened L(F_k) of each single edge."""
    pairs = edge_order(n)
    size = comb(n, k)
    out = np.zeros((len(pairs), size * size))
    for i, e in enumerate(pairs):
        out[i] = laplacian(token_graph(Graph.from_edges(n, [e]), k).graph).ravel()
    out.setflags(write=False)
    return out


def edge_mask(g: Graph) -> np.ndarray:
    return np.array([1.0 if g.has_edge(u, v) else 0.0 for u, v in edge_order(g.n)])


def token_laplacians(masks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Stacked L(F_k(G)) for the graphs whose edge masks are the rows of ``masks``."""
    size = comb(n, k)
    return (np.atleast_2d(masks) @ edge_terms(n, k)).reshape(-1, size, size)


def token_spectra(masks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Ascending Laplacian eigenvalues of F_k(G) per mask row, shape (B, C(n,k))."""
    return np.linalg.eigvalsh(token_laplacians(masks, n, k))


def masks_from_ints(n: int, ints) -> np.ndarray:
    m = n * (n - 1) // 2
    ints = np.asarray(ints, dtype=np.int64)
    return ((ints[:, None] >> np.arange(m, dtype=np.int64)) & 1).astype(float)
