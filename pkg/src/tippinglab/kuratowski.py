"""Brute-force search for K5 and K_{3,3} subdivisions in tiny graphs.

A graph is planar iff it contains no subdivision of K5 or K_{3,3}.
This module decides planarity purely through that characterization, by
exhaustive backtracking over branch-vertex choices and internally
disjoint connecting paths. It shares no code with the left-right test,
which is the point: the two deciders validate each other.

Only practical for n <= 8. With at most 8 vertices there are at most 3
spare vertices to serve as path interiors, so candidate paths have
length at most 4 and the search space stays small.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Edge, Graph

_MAX_N = 8


@dataclass(frozen=True)
class KuratowskiWitness:
    """A concrete forbidden subdivision found inside a graph."""

    kind: str  # "K5" or "K3,3"
    branch_vertices: tuple[int, ...]
    edges: tuple[Edge, ...]  # edge set of the subdivision, normalized


def find_kuratowski(g: Graph) -> KuratowskiWitness | None:
    """Return a K5 or K_{3,3} subdivision of g, or None if none exists."""
    if g.n > _MAX_N:
        raise ValueError(f"brute-force subdivision search supports n <= {_MAX_N}, got n={g.n}")
    if g.m < 9:
        return None  # K_{3,3} is the smallest obstruction, 9 edges
    adj = [set(nbrs) for nbrs in g.adjacency()]
    deg = [len(a) for a in adj]
    vertices = range(g.n)

    # Branch vertices of a K5 subdivision need degree >= 4 in g.
    k5_pool = [v for v in vertices if deg[v] >= 4]
    for branch in combinations(k5_pool, 5):
        pairs = list(combinations(branch, 2))
        paths = _connect(adj, set(branch), pairs, g.n)
        if paths is not None:
            return _witness("K5", branch, paths)

    # Branch vertices of a K_{3,3} subdivision need degree >= 3.
    k33_pool = [v for v in vertices if deg[v] >= 3]
    for six in combinations(k33_pool, 6):
        rest = six[1:]
        # Fix six[0] on the left side so each bipartition is tried once.
        for others in combinations(rest, 2):
            left = (six[0],) + others
            right = tuple(v for v in rest if v not in others)
            pairs = [(a, b) for a in left for b in right]
            paths = _connect(adj, set(six), pairs, g.n)
            if paths is not None:
                return _witness("K3,3", six, paths)
    return None


def _witness(kind: str, branch: tuple[int, ...], paths: list[tuple[int, ...]]) -> KuratowskiWitness:
    edges = set()
    for path in paths:
        for a, b in zip(path, path[1:]):
            edges.add((a, b) if a < b else (b, a))
    return KuratowskiWitness(kind, tuple(sorted(branch)), tuple(sorted(edges)))


def _connect(
    adj: list[set[int]],
    branch: set[int],
    pairs: list[tuple[int, int]],
    n: int,
) -> list[tuple[int, ...]] | None:
    """Find internally disjoint paths realizing every branch pair.

    Path interiors come from the non-branch vertices, each used at most
    once overall. Endpoint pairs never repeat, so edge-disjointness is
    automatic; only interior vertices need reserving.
    """
    free = [v for v in range(n) if v not in branch]
    used = set()
    chosen: list[tuple[int, ...]] = []

    def candidate_paths(a: int, b: int):
        # All a..b paths whose interior is drawn from unused free
        # vertices. Interiors are tiny here (at most 3 vertices).
        def extend(path: tuple[int, ...], seen: set[int]):
            cur = path[-1]
            if b in adj[cur]:
                yield path + (b,)
            for x in free:
                if x not in used and x not in seen and x in adj[cur]:
                    yield from extend(path + (x,), seen | {x})

        yield from extend((a,), set())

    def solve(k: int) -> bool:
        if k == len(pairs):
            return True
        a, b = pairs[k]
        for path in candidate_paths(a, b):
            interior = path[1:-1]
            used.update(interior)
            chosen.append(path)
            if solve(k + 1):
                return True
            chosen.pop()
            used.difference_update(interior)
        return False

    return chosen if solve(0) else None


def is_planar_by_subdivisions(g: Graph) -> bool:
    """Planarity via the forbidden-subdivision characterization (n <= 8)."""
    return find_kuratowski(g) is None
