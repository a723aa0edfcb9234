"""Simple undirected labeled graphs and basic structural helpers.

Vertices are integers 0..n-1. Edges are stored order-normalized as
(min, max) pairs and sorted lexicographically, so two equal graphs have
identical edge tuples and a graph's text form is canonical.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, Iterator

Edge = tuple[int, int]


class GraphError(ValueError):
    """Input violates the simple-graph invariants (loops, range, duplicates)."""


class GraphFormatError(ValueError):
    """Graph text input cannot be parsed."""


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        norm = []
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= n:
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            norm.append((u, v))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(norm)
        self._adj: tuple[tuple[int, ...], ...] | None = None

    @classmethod
    def _from_sorted(cls, n: int, edges: tuple[Edge, ...]) -> "Graph":
        # Trusted constructor for internal callers that already hold
        # normalized, lex-sorted, duplicate-free edges.
        g = cls.__new__(cls)
        g.n = n
        g.edges = edges
        g._adj = None
        return g

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor tuple per vertex, built lazily from the edge list."""
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n)]
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            self._adj = tuple(tuple(a) for a in adj)
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return _bisect_contains(self.edges, (u, v))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _bisect_contains(edges: tuple[Edge, ...], e: Edge) -> bool:
    i = bisect.bisect_left(edges, e)
    return i < len(edges) and edges[i] == e


@dataclass(frozen=True)
class ComponentPartition:
    """Connected-component labeling: component_of[v] in 0..count-1.

    Ids are assigned in order of first appearance by vertex label, so the
    labeling is deterministic and component 0 always contains vertex 0.
    """

    component_of: tuple[int, ...]
    count: int


def connected_components(g: Graph) -> ComponentPartition:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    ids: dict[int, int] = {}
    component_of = []
    for v in range(g.n):
        r = find(v)
        if r not in ids:
            ids[r] = len(ids)
        component_of.append(ids[r])
    return ComponentPartition(tuple(component_of), len(ids))


def make_connected(g: Graph) -> tuple[Graph, int]:
    """Chain components together with one edge per gap.

    Each component is represented by its smallest vertex; representatives
    are joined in ascending order. Returns the new graph and the number of
    edges added (0 if the input was already connected or empty).
    """
    parts = connected_components(g)
    if parts.count <= 1:
        return g, 0
    reps = [-1] * parts.count
    for v in range(g.n):
        c = parts.component_of[v]
        if reps[c] == -1:
            reps[c] = v
    extra = [(reps[i], reps[i + 1]) for i in range(parts.count - 1)]
    merged = tuple(sorted(g.edges + tuple(extra)))
    return Graph._from_sorted(g.n, merged), len(extra)


def complete_graph(k: int) -> Graph:
    if k < 1:
        raise GraphError(f"complete graph needs at least one vertex, got {k}")
    return Graph._from_sorted(k, tuple((u, v) for u in range(k) for v in range(u + 1, k)))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with left part 0..a-1 and right part a..a+b-1."""
    if a < 1 or b < 1:
        raise GraphError(f"bipartite parts must be non-empty, got {a} and {b}")
    return Graph._from_sorted(a + b, tuple((u, v) for u in range(a) for v in range(a, a + b)))


def to_text(g: Graph) -> str:
    """Serialize as a header line "n m" followed by one "u v" line per edge."""
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    """Parse the to_text format. Raises GraphFormatError with a line number."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GraphFormatError("line 1: empty input, expected header 'n m'")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError("line 1: expected header 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError("line 1: header fields must be integers") from None
    if len(lines) - 1 != m:
        raise GraphFormatError(f"line {len(lines)}: expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {i}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {i}: edge fields must be integers") from None
        if not u < v:
            raise GraphFormatError(f"line {i}: edges must satisfy u < v, got {u} {v}")
        edges.append((u, v))
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None


def iter_vertex_pairs(n: int) -> Iterator[Edge]:
    """All vertex pairs (u, v) with u < v, in pair-index (colex) order."""
    for v in range(n):
        for u in range(v):
            yield (u, v)
