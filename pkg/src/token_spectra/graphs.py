"""Simple undirected graphs on vertices 1..n and the structural operations used
by the token-graph checks (complement, vertex deletion, edge collapse, tree
attachment) plus the named families.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. ``adj[i-1]`` holds the sorted neighbours of vertex i."""

    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"negative vertex count {self.n}")
        if len(self.adj) != self.n:
            raise ValueError(f"adjacency has {len(self.adj)} rows, expected {self.n}")
        for i, nbrs in enumerate(self.adj, start=1):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"neighbours of {i} not sorted/unique: {nbrs}")
            for j in nbrs:
                if not 1 <= j <= self.n:
                    raise ValueError(f"neighbour {j} of {i} out of range 1..{self.n}")
                if j == i:
                    raise ValueError(f"self-loop at {i}")
                if i not in self.adj[j - 1]:
                    raise ValueError(f"asymmetric adjacency between {i} and {j}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop ({u}, {v})")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            nbrs[u - 1].add(v)
            nbrs[v - 1].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, tuple(() for _ in range(n)))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v - 1]

    def degree(self, v: int) -> int:
        return len(self.adj[v - 1])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges (i, j) with i < j, sorted."""
        return [(i, j) for i, nbrs in enumerate(self.adj, start=1) for j in nbrs if i < j]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return 1 <= u <= self.n and v in self.adj[u - 1]

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {1}
        stack = [1]
        while stack:
            u = stack.pop()
            for w in self.adj[u - 1]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return self.n >= 1 and self.num_edges == self.n - 1 and self.is_connected()

    def __str__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges})"


def complement(g: Graph) -> Graph:
    return Graph.from_edges(
        g.n, ((i, j) for i, j in combinations(range(1, g.n + 1), 2) if not g.has_edge(i, j))
    )


def delete_vertex(g: Graph, v: int) -> Graph:
    """Remove ``v``; survivors are relabelled 1..n-1 keeping their order."""
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} out of range 1..{g.n}")

    def relabel(x: int) -> int:
        return x - 1 if x > v else x

    return Graph.from_edges(
        g.n - 1, ((relabel(i), relabel(j)) for i, j in g.edges if v not in (i, j))
    )


def collapse_edge(g: Graph, e: Sequence[int]) -> Graph:
    """Delete edge ``e = (u, v)`` and identify its endpoints.

    The merged vertex takes the smaller label of the two; the larger label is
    removed and the rest are compacted as in :func:`delete_vertex`.
    """
    u, v = sorted(e)
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")

    def relabel(x: int) -> int:
        if x == v:
            x = u
        return x - 1 if x > v else x

    merged = set()
    for i, j in g.edges:
        if {i, j} == {u, v}:
            continue
        a, b = relabel(i), relabel(j)
        if a != b:
            merged.add((min(a, b), max(a, b)))
    return Graph.from_edges(g.n - 1, merged)


@dataclass(frozen=True)
class TreeAttachment:
    """A base graph with rooted trees hanging from some of its vertices.

    ``trees`` maps a base vertex to a parent array describing the tree rooted
    there: tree nodes are 0..m with node 0 the root (the base vertex itself),
    and ``parents[i-1]`` is the parent of node i. An empty list means no tree.
    """

    base: Graph
    trees: dict[int, Sequence[int]] = field(default_factory=dict)


def attach_trees(spec: TreeAttachment) -> Graph:
    base = spec.base
    edges = list(base.edges)
    n = base.n
    for root in sorted(spec.trees):
        parents = list(spec.trees[root])
        if not 1 <= root <= base.n:
            raise ValueError(f"root {root} not a vertex of the base graph")
        # tree node i (1..m) becomes vertex n + i; node 0 is the root
        label = {0: root}
        for i, p in enumerate(parents, start=1):
            if not 0 <= p < i:
                raise ValueError(
                    f"malformed parent array at root {root}: node {i} has parent {p}"
                )
            label[i] = n + i
            edges.append((label[p], label[i]))
        n += len(parents)
    return Graph.from_edges(n, edges)


FAMILY_KINDS = (
    "complete",
    "empty",
    "star",
    "path",
    "cycle",
    "complete_multipartite",
    "wheel",
    "cocktail_party",
    "cycle_complement",
    "johnson_base",
)


@dataclass(frozen=True)
class FamilySpec:
    """Named graph family. ``params`` is ``(n,)`` or the part sizes for
    ``complete_multipartite``."""

    kind: str
    params: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family {self.kind!r}; choose from {FAMILY_KINDS}")
        if not self.params:
            raise ValueError(f"family {self.kind} needs parameters")
        if any(p < 1 for p in self.params):
            raise ValueError(f"parameters must be positive, got {self.params}")
        if self.kind != "complete_multipartite" and len(self.params) != 1:
            raise ValueError(f"family {self.kind} takes a single parameter n")
        n = self.params[0]
        minimum = {"cycle": 3, "wheel": 4, "cocktail_party": 2, "cycle_complement": 3}
        if self.kind in minimum and n < minimum[self.kind]:
            raise ValueError(f"{self.kind} needs n >= {minimum[self.kind]}, got {n}")
        if self.kind == "cocktail_party" and n % 2:
            raise ValueError(f"cocktail party graph needs even n, got {n}")

    @property
    def name(self) -> str:
        return f"{self.kind}({','.join(map(str, self.params))})"


def build_family(spec: FamilySpec) -> Graph:
    kind = spec.kind
    if kind == "complete_multipartite":
        parts, start = [], 1
        for size in spec.params:
            parts.append(range(start, start + size))
            start += size
        edges = [(u, v) for a, b in combinations(parts, 2) for u in a for v in b]
        return Graph.from_edges(start - 1, edges)

    n = spec.params[0]
    if kind == "complete" or kind == "johnson_base":
        # johnson_base is K_n: its k-token graph is J(n, k)
        return Graph.from_edges(n, combinations(range(1, n + 1), 2))
    if kind == "empty":
        return Graph.empty(n)
    if kind == "star":
        return Graph.from_edges(n, ((1, v) for v in range(2, n + 1)))
    if kind == "path":
        return Graph.from_edges(n, ((v, v + 1) for v in range(1, n)))
    if kind == "cycle":
        return Graph.from_edges(n, [(v, v + 1) for v in range(1, n)] + [(n, 1)])
    if kind == "wheel":
        rim = [(v, v + 1) for v in range(2, n)] + [(n, 2)]
        return Graph.from_edges(n, rim + [(1, v) for v in range(2, n + 1)])
    if kind == "cocktail_party":
        # K_n minus the matching {1,2}, {3,4}, ...
        return Graph.from_edges(
            n,
            ((u, v) for u, v in combinations(range(1, n + 1), 2) if not (u % 2 and v == u + 1)),
        )
    if kind == "cycle_complement":
        return complement(build_family(FamilySpec("cycle", (n,))))
    raise AssertionError(kind)


def parse_family(kind: str, n: int | None = None, parts: Sequence[int] | None = None) -> Graph:
    """Convenience wrapper used by the CLI."""
    if kind == "complete_multipartite":
        if not parts:
            raise ValueError("complete_multipartite needs part sizes")
        return build_family(FamilySpec(kind, tuple(parts)))
    if n is None:
        raise ValueError(f"family {kind} needs n")
    return build_family(FamilySpec(kind, (n,)))
