"""k-subset indexing, k-token graphs F_k(G) and the binomial matrix B(n, k).

All k-subsets of [n] are ordered colexicographically ({1,2} < {1,3} < {2,3} <
{1,4} < ...). The same order indexes token-graph vertices and binomial-matrix
rows everywhere in the package.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .graphs import Graph

DEFAULT_GUARD = 100_000
GUARD_ENV = "TOKEN_SPECTRA_GUARD"


class GuardExceeded(ValueError):
    """Token graph would exceed the vertex-count guard."""


def size_guard() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None:
        return DEFAULT_GUARD
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None


def check_guard(n: int, k: int, guard: int | None = None) -> None:
    limit = size_guard() if guard is None else guard
    if comb(n, k) > limit:
        raise GuardExceeded(f"F_{k} of an {n}-vertex graph has {comb(n, k)} vertices > guard {limit}")


def subset_rank(subset, n: int, k: int) -> int:
    """Colex rank of a k-subset of [n]: sum of C(s_i - 1, i) over sorted s_1 < ... < s_k."""
    s = sorted(subset)
    if len(s) != k or len(set(s)) != k:
        raise ValueError(f"expected {k} distinct elements, got {subset!r}")
    if s and not (1 <= s[0] and s[-1] <= n):
        raise ValueError(f"subset {subset!r} not contained in 1..{n}")
    return sum(comb(x - 1, i) for i, x in enumerate(s, start=1))


def subset_unrank(r: int, n: int, k: int) -> tuple[int, ...]:
    total = comb(n, k)
    if not 0 <= r < total:
        raise ValueError(f"rank {r} out of range 0..{total - 1}")
    out = []
    x = n
    for i in range(k, 0, -1):
        # largest x with C(x-1, i) <= r
        while comb(x - 1, i) > r:
            x -= 1
        out.append(x)
        r -= comb(x - 1, i)
        x -= 1
    return tuple(reversed(out))


@dataclass(frozen=True)
class SubsetIndex:
    """Rank/unrank tables for the colex order on k-subsets of [n]."""

    n: int
    k: int
    subsets: tuple[tuple[int, ...], ...] = field(repr=False)
    ranks: dict = field(repr=False)

    def __hash__(self):
        return hash((self.n, self.k))

    def __eq__(self, other):
        return isinstance(other, SubsetIndex) and (self.n, self.k) == (other.n, other.k)

    def __len__(self):
        return len(self.subsets)

    def rank(self, subset) -> int:
        key = tuple(sorted(subset))
        try:
            return self.ranks[key]
        except KeyError:
            raise ValueError(f"{subset!r} is not a {self.k}-subset of 1..{self.n}") from None

    def unrank(self, r: int) -> tuple[int, ...]:
        if not 0 <= r < len(self.subsets):
            raise ValueError(f"rank {r} out of range 0..{len(self.subsets) - 1}")
        return self.subsets[r]


@lru_cache(maxsize=64)
def subset_index(n: int, k: int) -> SubsetIndex:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    subsets = tuple(sorted(combinations(range(1, n + 1), k), key=lambda s: s[::-1]))
    return SubsetIndex(n, k, subsets, {s: r for r, s in enumerate(subsets)})


@dataclass(frozen=True)
class TokenGraph:
    graph: Graph
    labels: tuple[tuple[int, ...], ...]
    source_n: int
    k: int


def token_graph(g: Graph, k: int, guard: int | None = None) -> TokenGraph:
    """The k-token graph: k-subsets adjacent when they differ by sliding one
    token along an edge of ``g``. Vertex r carries the r-th colex subset."""
    if not 1 <= k <= g.n:
        raise ValueError(f"k must satisfy 1 <= k <= n={g.n}, got {k}")
    check_guard(g.n, k, guard)
    idx = subset_index(g.n, k)
    edges = []
    for r, A in enumerate(idx.subsets):
        members = set(A)
        for a in A:
            for b in g.neighbors(a):
                if b in members:
                    continue
                s = idx.ranks[tuple(sorted((members - {a}) | {b}))]
                if r < s:
                    edges.append((r + 1, s + 1))
    return TokenGraph(Graph.from_edges(len(idx), edges), idx.subsets, g.n, k)


def binomial_matrix(n: int, k: int) -> np.ndarray:
    """C(n,k) x n 0/1 matrix; row r is the characteristic vector of the r-th colex k-subset."""
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n={n}, got {k}")
    idx = subset_index(n, k)
    b = np.zeros((len(idx), n))
    for r, s in enumerate(idx.subsets):
        b[r, [x - 1 for x in s]] = 1.0
    return b


@dataclass(frozen=True)
class Restriction:
    """Subgraphs of F_k(G) induced by S_a (subsets containing a) and S'_a (the rest).

    ``in_a`` / ``out_a`` are 0-based parent indices, ascending. Because removing a
    common element preserves colex order, ``h_a`` equals F_{k-1}(G - a) and
    ``h_a_prime`` equals F_k(G - a) vertex for vertex after relabelling.
    """

    a: int
    h_a: Graph
    h_a_prime: Graph
    in_a: tuple[int, ...]
    out_a: tuple[int, ...]


def induced_subgraph(g: Graph, keep) -> Graph:
    pos = {v: i for i, v in enumerate(keep, start=1)}
    return Graph.from_edges(
        len(pos), ((pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos)
    )


def restrict_by_element(t: TokenGraph, a: int) -> Restriction:
    if not 1 <= a <= t.source_n:
        raise ValueError(f"element {a} out of range 1..{t.source_n}")
    in_a = tuple(r for r, s in enumerate(t.labels) if a in s)
    out_a = tuple(r for r, s in enumerate(t.labels) if a not in s)
    return Restriction(
        a,
        induced_subgraph(t.graph, [r + 1 for r in in_a]),
        induced_subgraph(t.graph, [r + 1 for r in out_a]),
        in_a,
        out_a,
    )


def drop_element(subset, a: int) -> tuple[int, ...]:
    """Canonical relabelling S_a -> subsets of [n-1]: remove ``a`` and compact labels."""
    return tuple(x - 1 if x > a else x for x in subset if x != a)


def label_lines(t: TokenGraph) -> list[str]:
    """Sidecar label file lines: ``rank<TAB>subset``, one token-graph vertex per line."""
    return [f"{r}\t{' '.join(map(str, s))}" for r, s in enumerate(t.labels)]
