"""Exact combinatorial ground truth.

Labeled-forest counts via Moon's component-counting formula, the exact
acyclicity probability under G(n, m), and exhaustive enumeration of all
small (n, m) graphs. Everything here is integer or rational arithmetic;
no floats, since the intermediate terms at n = 400 exceed 10^900 and
the downstream validation compares frequencies against these values
exactly.
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Callable

from .graph import Graph
from .randgen import pair_from_index
from .recognizers import check_property

DEFAULT_ENUMERATION_BUDGET = 10_000_000


class EnumerationBudgetError(ValueError):
    """The requested enumeration is larger than the configured budget."""

    def __init__(self, n: int, m: int, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(
            f"enumerating ({n},{m})-graphs means {count} graphs, over the budget of {budget}"
        )


def binomial(a: int, b: int) -> int:
    """C(a, b), with the convention that b > a gives 0."""
    if a < 0 or b < 0:
        raise ValueError(f"binomial arguments must be non-negative, got ({a}, {b})")
    return comb(a, b)


def labeled_forest_count(n: int, k: int) -> int:
    """Number of labeled forests on n vertices with exactly k trees.

    Alternating sum over i of
        (-1/2)^i (k+i) i! C(k,i) C(n-k,i) n^(n-k-i-1),
    scaled by C(n,k). Evaluated left to right in exact rationals; the
    n^(-1) factor that appears when i = n-k is handled exactly. k = n is
    the edgeless forest, special-cased to 1.
    """
    if not 1 <= k <= n:
        raise ValueError(f"component count k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if k == n:
        return 1
    total = Fraction(0)
    for i in range(k + 1):
        c2 = binomial(n - k, i)
        if c2 == 0:
            continue
        term = (
            Fraction(-1, 2) ** i
            * (k + i)
            * factorial(i)
            * binomial(k, i)
            * c2
            * Fraction(n) ** (n - k - i - 1)
        )
        total += term
    result = binomial(n, k) * total
    if result.denominator != 1 or result < 0:
        raise ArithmeticError(
            f"forest-count sum for n={n}, k={k} is not a non-negative integer: {result}"
        )
    return int(result)


def total_forest_count(n: int) -> int:
    """Labeled forests on n vertices with any number of components."""
    return sum(labeled_forest_count(n, k) for k in range(1, n + 1))


def acyclic_probability(n: int, m: int) -> Fraction:
    """Exact probability that a uniform (n, m) graph is a forest."""
    pairs = binomial(n, 2)
    if not 0 <= m <= pairs:
        raise ValueError(f"edge count {m} out of range [0, {pairs}] for n={n}")
    if m >= n:
        return Fraction(0)  # a forest has m < n
    p = Fraction(labeled_forest_count(n, n - m), binomial(pairs, m))
    assert 0 <= p <= 1
    return p


def enumerate_graphs(
    n: int,
    m: int,
    visitor: Callable[[Graph], None] | None = None,
    *,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> int:
    """Visit every labeled (n, m) graph once, in lexicographic
    pair-index order. Returns the number of graphs visited."""
    pairs = binomial(n, 2)
    if not 0 <= m <= pairs:
        raise ValueError(f"edge count {m} out of range [0, {pairs}] for n={n}")
    count = binomial(pairs, m)
    if count > budget:
        raise EnumerationBudgetError(n, m, count, budget)
    pool = [pair_from_index(i) for i in range(pairs)]
    visited = 0
    for chosen in combinations(pool, m):
        if visitor is not None:
            visitor(Graph._from_sorted(n, tuple(sorted(chosen))))
        visited += 1
    return visited


def count_property_exact(
    n: int,
    m: int,
    prop: str | Callable[[Graph], bool],
    *,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Fraction:
    """Exact fraction of labeled (n, m) graphs with the given property.

    prop is a property tag or any Graph -> bool predicate.
    """
    if callable(prop):
        pred = prop
    else:
        tag = prop
        pred = lambda g: check_property(tag, g)  # noqa: E731
    hits = 0

    def visit(g: Graph) -> None:
        nonlocal hits
        if pred(g):
            hits += 1

    total = enumerate_graphs(n, m, visit, budget=budget)
    return Fraction(hits, total)


def format_probability(p: Fraction, digits: int = 15) -> str:
    """Decimal string of an exact rational, rounded to significant digits."""
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        d = decimal.Decimal(p.numerator) / decimal.Decimal(p.denominator)
    return format(d, "f")
