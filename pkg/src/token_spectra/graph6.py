"""graph6 encoding (the nauty/geng interchange format).

Each byte carries six bits offset by 63. The header encodes n; the body is the
upper triangle of the adjacency matrix in column order
(x(0,1), x(0,2), x(1,2), x(0,3), ...), zero-padded to a multiple of six bits.
"""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .graphs import Graph

HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    pass


def _encode_n(n: int) -> str:
    if n < 0:
        raise Graph6Error(f"negative vertex count {n}")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise Graph6Error(f"vertex count {n} too large for graph6")


def _decode_n(data: list[int]) -> tuple[int, int]:
    """Return (n, number of header bytes consumed)."""
    if not data:
        raise Graph6Error("empty graph6 string")
    if data[0] != 63:
        return data[0], 1
    if len(data) >= 2 and data[1] == 63:
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte length header")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | b
        if n <= 258047:
            raise Graph6Error(f"non-canonical 8-byte header for n={n}")
        return n, 8
    if len(data) < 4:
        raise Graph6Error("truncated 4-byte length header")
    n = (data[1] << 12) | (data[2] << 6) | data[3]
    if n <= 62:
        raise Graph6Error(f"non-canonical 4-byte header for n={n}")
    return n, 4


def emit_graph6(g: Graph) -> str:
    bits = [1 if g.has_edge(i, j) else 0 for j in range(2, g.n + 1) for i in range(1, j)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(
        chr(63 + int("".join(map(str, bits[p : p + 6])), 2)) for p in range(0, len(bits), 6)
    )
    return _encode_n(g.n) + body


def parse_graph6(line: str) -> Graph:
    s = line.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER) :]
    data = [ord(c) - 63 for c in s]
    for c, d in zip(s, data):
        if not 0 <= d <= 63:
            raise Graph6Error(f"character {c!r} outside the graph6 range '?'..'~'")
    n, pos = _decode_n(data)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != nbytes:
        raise Graph6Error(f"expected {nbytes} body bytes for n={n}, got {len(body)}")
    bits = [(b >> (5 - t)) & 1 for b in body for t in range(6)]
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits")
    edges = []
    pos = 0
    for j in range(2, n + 1):
        for i in range(1, j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return Graph.from_edges(n, edges)


def read_graph6(lines: Iterable[str]) -> Iterator[Graph]:
    """Parse a graph6 stream, one graph per line; blank lines and '#' comments skipped."""
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield parse_graph6(line)


def write_graph6(graphs: Iterable[Graph], fh: TextIO) -> int:
    count = 0
    for g in graphs:
        fh.write(emit_graph6(g) + "\n")
        count += 1
    return count
