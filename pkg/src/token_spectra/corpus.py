"""Exhaustive labelled corpora: all graphs on n vertices and all labelled trees."""

from __future__ import annotations

import heapq
from itertools import combinations, product
from typing import Iterator, Sequence

from .graphs import Graph

MAX_EXHAUSTIVE_N = 7


def edge_order(n: int) -> list[tuple[int, int]]:
    """Edge positions used for bitmask enumeration: lexicographic pairs of K_n."""
    return list(combinations(range(1, n + 1), 2))


def graph_from_mask(n: int, mask: int) -> Graph:
    return Graph.from_edges(n, (e for b, e in enumerate(edge_order(n)) if mask >> b & 1))


def count_labeled_graphs(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def enumerate_labeled_graphs(n: int) -> Iterator[Graph]:
    """All 2^C(n,2) labelled graphs, in increasing edge-bitmask order."""
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration supports 1 <= n <= {MAX_EXHAUSTIVE_N}, got {n}")
    pairs = edge_order(n)
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, (e for b, e in enumerate(pairs) if mask >> b & 1))


def prufer_decode(seq: Sequence[int], n: int) -> Graph:
    """Labelled tree on 1..n from a Prüfer sequence of length n-2."""
    if len(seq) != n - 2:
        raise ValueError(f"Prüfer sequence for n={n} must have length {n - 2}")
    degree = [1] * (n + 1)
    for x in seq:
        if not 1 <= x <= n:
            raise ValueError(f"Prüfer entry {x} outside 1..{n}")
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def count_labeled_trees(n: int) -> int:
    return 1 if n <= 2 else n ** (n - 2)


def enumerate_labeled_trees(n: int) -> Iterator[Graph]:
    """All n^(n-2) labelled trees, Prüfer sequences in lexicographic order."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n == 1:
        yield Graph.empty(1)
        return
    if n == 2:
        yield Graph.from_edges(2, [(1, 2)])
        return
    for seq in product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(seq, n)
