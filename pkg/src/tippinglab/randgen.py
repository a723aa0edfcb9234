"""Deterministic uniform sampling of G(n, m) graphs.

Randomness comes from a splitmix64 stream: a 64-bit counter advanced by
the golden-ratio increment and passed through an avalanche finalizer.
The stream is a pure function of its seed, identical on every platform,
and cheap to fork, which makes per-cell and per-sample seeding trivial.

Sampling a graph means sampling m distinct pair indices from the
n*(n-1)/2 unordered vertex pairs. Pairs are indexed in colex order:
pair (u, v) with u < v has index v*(v-1)/2 + u.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .graph import Edge, Graph

_M64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Avalanche finalizer: bijective on 64-bit words, breaks up regularity."""
    z &= _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


class RngState:
    """splitmix64 generator. State is the full generator; copying the
    integer copies the stream position."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _M64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _M64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection, so no modulo bias.

        bound == 1 consumes nothing from the stream: the answer is forced.
        """
        if bound <= 1:
            if bound == 1:
                return 0
            raise ValueError(f"bound must be positive, got {bound}")
        limit = ((1 << 64) // bound) * bound
        while True:
            u = self.next_u64()
            if u < limit:
                return u % bound


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash, used to fold string tags into seed material."""
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _M64
    return h


def derive_cell_seed(master_seed: int, n: int, m: int, property_tag: str, replicate: int) -> int:
    """Seed for one (cell, replicate) stream.

    Each coordinate is folded in through the avalanche mix, so cells that
    differ in any single coordinate get unrelated streams. replicate is
    the per-sample index within a cell.
    """
    h = mix64(master_seed)
    h = mix64(h ^ (n & _M64))
    h = mix64(h ^ (m & _M64))
    h = mix64(h ^ fnv1a64(property_tag.encode("utf-8")))
    h = mix64(h ^ (replicate & _M64))
    return h


def round_half_up(x) -> int:
    """Round a non-negative number to the nearest integer, halves up.

    Exact: the input is converted to a rational before comparing against
    the midpoint, so 2.5 -> 3 regardless of binary float representation
    when the caller passes a string or Fraction.
    """
    q = Fraction(x)
    if q < 0:
        raise ValueError(f"expected a non-negative value, got {x}")
    return int(q + Fraction(1, 2))


class InfeasibleDensityError(ValueError):
    """Requested density needs more edges than the complete graph has."""

    def __init__(self, n: int, density, m: int):
        self.n = n
        self.density = density
        self.m = m
        super().__init__(
            f"density {density} at n={n} needs m={m} edges, "
            f"but the complete graph has {n * (n - 1) // 2}"
        )


def edge_count(n: int, density) -> int:
    """Edge count m = round_half_up(density * n), checked for feasibility."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    d = Fraction(density)
    if d < 0:
        raise ValueError(f"density must be non-negative, got {density}")
    m = round_half_up(d * n)
    if m > n * (n - 1) // 2:
        raise InfeasibleDensityError(n, density, m)
    return m


def pair_from_index(i: int) -> Edge:
    """Inverse of the colex pair index: index v*(v-1)/2 + u -> (u, v)."""
    v = (1 + isqrt(1 + 8 * i)) // 2
    u = i - v * (v - 1) // 2
    return (u, v)


def index_from_pair(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def _sample_distinct(total: int, k: int, rng: RngState) -> set[int]:
    # Rejection sampling of k distinct indices. The caller guarantees
    # k <= total/2 (it samples the complement otherwise), so the expected
    # number of redraws is below 2k.
    seen: set[int] = set()
    while len(seen) < k:
        x = rng.below(total)
        if x not in seen:
            seen.add(x)
    return seen


def random_simple_graph(n: int, m: int, rng: RngState) -> Graph:
    """Uniform simple graph on n labeled vertices with exactly m edges.

    Uniformity holds because every m-subset of pair indices is equally
    likely: distinct-index rejection sampling is exchangeable, and for
    m > total/2 the complement subset is sampled instead.
    """
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"edge count {m} out of range [0, {total}] for n={n}")
    if m > total // 2:
        excluded = _sample_distinct(total, total - m, rng)
        indices = [i for i in range(total) if i not in excluded]
    else:
        indices = sorted(_sample_distinct(total, m, rng))
    edges = sorted(pair_from_index(i) for i in indices)
    return Graph._from_sorted(n, tuple(edges))
