"""From surfaces to transition curves.

Three layers: contour extraction (per-n linear interpolation at a fixed
height), least-squares fitting of the transition model

    d(n) = 0.5 + c1 / n^c2 + c3 / n^(1/3),

and the closed-form sigmoid surrogate linking density to the probability
of planarity, with its inverse and the transition-width ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .experiment import FrequencySurface

# Sigmoid exponents beyond this magnitude saturate to the limit value.
OVERFLOW_CUTOFF = 1024.0


@dataclass(frozen=True)
class ContourCurve:
    """Densities at which a surface crosses a fixed frequency height."""

    height: float
    points: tuple[tuple[int, float], ...]  # (n, density), n ascending


def contour(surface: FrequencySurface, height: float) -> ContourCurve:
    """Per-n crossing densities of the surface at the given height.

    For each n, densities are scanned in increasing order; the first
    adjacent feasible pair with frequency_lo >= height >= frequency_hi
    yields a linearly interpolated density (these frequencies fall as
    density grows, so that is the downward crossing). If the left
    frequency equals the height the cell's own density is emitted.
    Sizes with no bracketing pair contribute no point.
    """
    if not 0.0 < height < 1.0:
        raise ValueError(f"contour height must be in (0, 1), got {height}")
    if len(surface.plan.densities) < 2:
        raise ValueError("surface too sparse for contours: a single density column")
    by_n: dict[int, list[tuple[float, float]]] = {n: [] for n in surface.plan.n_values}
    for row in surface.rows:
        if not row.skipped:
            by_n[row.n].append((float(Fraction(row.density)), row.positives / row.samples))
    points = []
    for n in surface.plan.n_values:
        cells = sorted(by_n[n])
        for (d0, f0), (d1, f1) in zip(cells, cells[1:]):
            if f0 >= height >= f1:
                if f0 == height:
                    d = d0
                elif f1 == height:
                    d = d1
                else:
                    d = d0 + (d1 - d0) * (f0 - height) / (f0 - f1)
                points.append((n, d))
                break
    return ContourCurve(height, tuple(points))


@dataclass(frozen=True)
class FitResult:
    """Outcome of a transition-model fit. The offset 0.5 and the 1/3
    exponent are fixed by the model; only c1, c2, c3 vary."""

    c1: float
    c2: float
    c3: float
    rss: float
    iterations: int
    converged: bool
    gradient_norm: float
    rss_trace: tuple[float, ...] = ()


def transition_model(n, c1: float, c2: float, c3: float):
    """d(n) = 0.5 + c1/n^c2 + c3/n^(1/3); n may be an array."""
    n = np.asarray(n, dtype=float)
    return 0.5 + c1 * n ** (-c2) + c3 * n ** (-1.0 / 3.0)


def jacobian_transition(n, c1: float, c2: float, c3: float) -> np.ndarray:
    """Analytic partials (dd/dc1, dd/dc2, dd/dc3) at each n."""
    n = np.asarray(n, dtype=float)
    if np.any(n < 1):
        raise ValueError("model is defined for n >= 1")
    p1 = n ** (-c2)
    p2 = -c1 * np.log(n) * n ** (-c2)
    p3 = n ** (-1.0 / 3.0)
    return np.stack([p1, p2, p3], axis=-1)


def fit_transition(
    curve,
    init: tuple[float, float, float] = (5.0, 0.8, 1.0),
    *,
    max_iterations: int = 500,
    rss_tolerance: float = 1e-10,
    gradient_tolerance: float = 1e-9,
) -> FitResult:
    """Damped Gauss-Newton least squares for the transition model.

    Accepts a ContourCurve or any sequence of (n, density) pairs. A step
    is accepted only if it does not increase the residual sum of squares
    (the damping factor grows tenfold otherwise), so the rss trace is
    non-increasing. Convergence: relative rss decrease below
    rss_tolerance, or gradient norm below gradient_tolerance. Returns an
    unconverged result rather than raising when the budget runs out.
    """
    pts = curve.points if isinstance(curve, ContourCurve) else tuple(curve)
    if len(pts) < 10:
        raise ValueError(f"fit needs at least 10 curve points, got {len(pts)}")
    if init[1] <= 0:
        raise ValueError(f"initial c2 must be positive, got {init[1]}")
    ns = np.array([p[0] for p in pts], dtype=float)
    ds = np.array([p[1] for p in pts], dtype=float)
    if np.any(ns < 1):
        raise ValueError("curve points need n >= 1")

    x = np.array(init, dtype=float)

    def rss_of(p):
        r = ds - transition_model(ns, *p)
        return float(r @ r)

    rss = rss_of(x)
    trace = [rss]
    lam = 1e-3
    converged = False
    iterations = 0
    grad_norm = math.inf
    for iterations in range(1, max_iterations + 1):
        r = ds - transition_model(ns, *x)
        jac = jacobian_transition(ns, *x)
        grad = -2.0 * (jac.T @ r)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < gradient_tolerance:
            converged = True
            break
        jtj = jac.T @ jac
        jtr = jac.T @ r
        stepped = False
        while lam < 1e12:
            damped = jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-12))
            try:
                delta = np.linalg.solve(damped, jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            cand = x + delta
            cand_rss = rss_of(cand)
            if np.isfinite(cand_rss) and cand_rss <= rss:
                x = cand
                drop = rss - cand_rss
                rss = cand_rss
                trace.append(rss)
                lam = max(lam * 0.1, 1e-15)
                stepped = True
                if drop < rss_tolerance * max(rss, 1e-300):
                    converged = True
                break
            lam *= 10.0
        if not stepped or converged:
            break

    r = ds - transition_model(ns, *x)
    grad_norm = float(np.linalg.norm(-2.0 * (jacobian_transition(ns, *x).T @ r)))
    return FitResult(
        c1=float(x[0]),
        c2=float(x[1]),
        c3=float(x[2]),
        rss=rss,
        iterations=iterations,
        converged=converged,
        gradient_norm=grad_norm,
        rss_trace=tuple(trace),
    )


@dataclass(frozen=True)
class SigmoidParams:
    """Constants of the sigmoid transition surrogate (c2 > 0, c4 > 0)."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self):
        if self.c2 <= 0 or self.c4 <= 0:
            raise ValueError(f"c2 and c4 must be positive, got c2={self.c2}, c4={self.c4}")


def sigmoid_probability(n, d: float, params: SigmoidParams) -> float:
    """p = 1 / (2^((d - (0.5 + c1/n^c2)) * (c3 + c4 n^(1/3))) + 1).

    The midpoint density 0.5 + c1/n^c2 maps to p = 0.5; sharpness grows
    with n^(1/3). Exponents beyond +-OVERFLOW_CUTOFF saturate to the
    limits 0 and 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    midpoint = 0.5 + params.c1 / n ** params.c2
    sharpness = params.c3 + params.c4 * n ** (1.0 / 3.0)
    expo = (d - midpoint) * sharpness
    if expo > OVERFLOW_CUTOFF:
        return 0.0
    if expo < -OVERFLOW_CUTOFF:
        return 1.0
    return 1.0 / (2.0 ** expo + 1.0)


def sigmoid_density(n, p: float, params: SigmoidParams) -> float:
    """Inverse of sigmoid_probability in d: the density where the
    surrogate passes probability p."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {p}")
    sharpness = params.c3 + params.c4 * n ** (1.0 / 3.0)
    return math.log2(1.0 / p - 1.0) / sharpness + 0.5 + params.c1 / n ** params.c2


def transition_width_ratio(n, p_min: float, p_max: float, params: SigmoidParams) -> float:
    """(sigmoid_density(n, p_min) - sigmoid_density(n, p_max)) / n^(-1/3).

    Algebraically [log2(1/p_min - 1) - log2(1/p_max - 1)] / (c3 n^(-1/3)
    + c4): the transition width measured in units of n^(-1/3). Tends to
    the finite limit width_ratio_limit as n grows.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 < p_min < p_max < 1.0:
        raise ValueError(f"need 0 < p_min < p_max < 1, got {p_min}, {p_max}")
    num = math.log2(1.0 / p_min - 1.0) - math.log2(1.0 / p_max - 1.0)
    return num / (params.c3 * n ** (-1.0 / 3.0) + params.c4)


def width_ratio_limit(p_min: float, p_max: float, params: SigmoidParams) -> float:
    """Large-n limit of transition_width_ratio."""
    if not 0.0 < p_min < p_max < 1.0:
        raise ValueError(f"need 0 < p_min < p_max < 1, got {p_min}, {p_max}")
    num = math.log2(1.0 / p_min - 1.0) - math.log2(1.0 / p_max - 1.0)
    return num / params.c4
