"""Contours, transition-curve fitting, and the sigmoid model layer."""

import math

import numpy as np
import pytest

from tippinglab.analysis import (
    ContourCurve,
    SigmoidParams,
    contour,
    fit_transition,
    jacobian_transition,
    sigmoid_density,
    sigmoid_probability,
    transition_model,
    transition_width_ratio,
    width_ratio_limit,
)
from tippinglab.experiment import ExperimentPlan, FrequencySurface, SurfaceRow
from tippinglab.randgen import RngState


def surface_from_grid(n_values, densities, freq):
    """Surface with frequency freq(n, d); samples fixed at 1000."""
    samples = 1000
    rows = []
    for n in n_values:
        for d in densities:
            m = round(n * float(d))
            rows.append(SurfaceRow(n, d, m, samples, round(freq(n, float(d)) * samples)))
    plan = ExperimentPlan("planar", tuple(n_values), tuple(densities), samples, 0)
    return FrequencySurface(plan, tuple(rows))


# -- contours ----------------------------------------------------------------

def test_contour_midpoint_interpolation():
    s = surface_from_grid([20], ["0.5", "0.6"], lambda n, d: 1.0 if d < 0.55 else 0.0)
    curve = contour(s, 0.5)
    assert curve.points == ((20, pytest.approx(0.55)),)


def test_contour_boundary_convention():
    # exact hits resolve to the cell's own density
    s = surface_from_grid([10], ["0.4", "0.8"], lambda n, d: 0.3 if d < 0.6 else 0.1)
    assert contour(s, 0.3).points == ((10, pytest.approx(0.4)),)
    assert contour(s, 0.1).points == ((10, pytest.approx(0.8)),)


def test_contour_takes_first_bracket():
    freqs = {"0.2": 0.9, "0.4": 0.4, "0.6": 0.7, "0.8": 0.1}
    s = surface_from_grid([12], list(freqs), lambda n, d: freqs[format(d, "g")])
    curve = contour(s, 0.5)
    # crossing between 0.2 and 0.4, not the later 0.6 -> 0.8 one
    (n, d), = curve.points
    assert n == 12 and 0.2 < d < 0.4


def test_contour_is_permutation_invariant():
    s = surface_from_grid(
        [10, 20, 40], ["0.2", "0.5", "0.8", "1.1"],
        lambda n, d: 1.0 / (1.0 + (d / 0.6) ** n),
    )
    shuffled = FrequencySurface(s.plan, tuple(reversed(s.rows)))
    assert contour(s, 0.5).points == contour(shuffled, 0.5).points


def test_contour_skips_unbracketed_n():
    s = surface_from_grid([5, 30], ["0.5", "1"], lambda n, d: 0.9 if n == 5 else (1.0 if d < 0.7 else 0.0))
    pts = contour(s, 0.5).points
    assert [n for n, _ in pts] == [30]


def test_contour_errors():
    s = surface_from_grid([10], ["0.5"], lambda n, d: 0.5)
    with pytest.raises(ValueError, match="sparse"):
        contour(s, 0.5)
    s = surface_from_grid([10], ["0.5", "0.6"], lambda n, d: 0.5)
    with pytest.raises(ValueError):
        contour(s, 0.0)
    with pytest.raises(ValueError):
        contour(s, 1.0)


# -- model and jacobian ------------------------------------------------------

def test_transition_model_values():
    assert transition_model(1, 0.25, 0.8, 0.125) == pytest.approx(0.875)
    assert transition_model(8, 0.0, 1.0, 2.0) == pytest.approx(0.5 + 2.0 / 2.0)


def test_jacobian_fixed_points():
    assert tuple(jacobian_transition(1.0, 5.0, 0.8, 1.0)) == (1.0, 0.0, 1.0)
    j = jacobian_transition(10.0, 0.0, 0.7, 1.0)
    assert j[1] == 0.0  # c1 = 0 kills the c2 direction


def test_jacobian_matches_central_differences():
    rng = RngState(2)
    for _ in range(50):
        n = 1 + rng.below(400)
        c1 = 0.5 + rng.below(10**6) / 10**6 * 7.5
        c2 = 0.3 + rng.below(10**6) / 10**6 * 1.2
        c3 = -2.0 + rng.below(10**6) / 10**6 * 4.5
        J = jacobian_transition(float(n), c1, c2, c3)
        for k in range(3):
            h = 1e-6 * max(1.0, abs((c1, c2, c3)[k]))
            hi = [c1, c2, c3]
            lo = [c1, c2, c3]
            hi[k] += h
            lo[k] -= h
            fd = float(transition_model(n, *hi) - transition_model(n, *lo)) / (2 * h)
            an = float(J[k])
            den = max(abs(an), abs(fd))
            assert den < 1e-8 or abs(an - fd) / den < 1e-6


# -- fitting -----------------------------------------------------------------

def synthetic_curve(c1, c2, c3, n_values=tuple(range(10, 410, 20))):
    return [(n, float(transition_model(n, c1, c2, c3))) for n in n_values]


def test_fit_recovers_exact_parameters():
    curve = synthetic_curve(4.0, 0.8, 1.2)
    r = fit_transition(curve)
    assert r.converged
    assert abs(r.c1 - 4.0) < 1e-6
    assert abs(r.c2 - 0.8) < 1e-6
    assert abs(r.c3 - 1.2) < 1e-6
    assert r.rss < 1e-12


def test_fit_recovery_from_perturbed_inits():
    truth = (4.0, 0.8, 1.2)
    curve = synthetic_curve(*truth)
    rng = RngState(31)
    for _ in range(12):
        init = tuple(t * (0.5 + rng.below(10**6) / 10**6) for t in truth)
        r = fit_transition(curve, init=init)
        assert r.converged
        for got, want in zip((r.c1, r.c2, r.c3), truth):
            assert abs(got - want) < 1e-6


def test_fit_damping_never_increases_rss():
    rng = RngState(8)
    noisy = [
        (n, d + (rng.below(2001) - 1000) / 1e5)
        for n, d in synthetic_curve(5.0, 0.9, 1.0)
    ]
    r = fit_transition(noisy)
    assert r.converged
    assert all(a >= b for a, b in zip(r.rss_trace, r.rss_trace[1:]))
    assert r.gradient_norm < 1e-6


def test_fit_is_deterministic():
    curve = synthetic_curve(3.0, 0.7, 1.5)
    a = fit_transition(curve)
    b = fit_transition(curve)
    assert (a.c1, a.c2, a.c3, a.rss, a.iterations) == (b.c1, b.c2, b.c3, b.rss, b.iterations)


def test_fit_unconverged_is_reported_not_raised():
    rng = RngState(8)
    noisy = [
        (n, d + (rng.below(2001) - 1000) / 1e4)
        for n, d in synthetic_curve(5.0, 0.9, 1.0)
    ]
    r = fit_transition(noisy, max_iterations=1)
    assert not r.converged
    assert r.iterations == 1


def test_fit_input_validation():
    with pytest.raises(ValueError):
        fit_transition(synthetic_curve(4.0, 0.8, 1.2)[:9])  # < 10 points
    with pytest.raises(ValueError):
        fit_transition(synthetic_curve(4.0, 0.8, 1.2), init=(4.0, -0.1, 1.2))


def test_fit_accepts_contour_curve():
    pts = tuple(synthetic_curve(4.0, 0.8, 1.2))
    r = fit_transition(ContourCurve(0.5, pts))
    assert r.converged and abs(r.c1 - 4.0) < 1e-6


# -- sigmoid layer -----------------------------------------------------------

EXAMPLE_PARAMS = SigmoidParams(5.0, 0.5, 20.0, 0.5)


def test_sigmoid_params_validation():
    with pytest.raises(ValueError):
        SigmoidParams(5.0, -0.5, 20.0, 0.5)
    with pytest.raises(ValueError):
        SigmoidParams(5.0, 0.5, 20.0, 0.0)


def test_sigmoid_midpoint_is_half():
    for n in (1, 10, 1000):
        d = 0.5 + EXAMPLE_PARAMS.c1 / n ** EXAMPLE_PARAMS.c2
        assert sigmoid_probability(n, d, EXAMPLE_PARAMS) == pytest.approx(0.5, abs=1e-12)


def test_sigmoid_round_trip():
    for n in (1, 10, 200, 10**6, 10**12):
        for p in (0.1, 0.5, 0.9):
            d = sigmoid_density(n, p, EXAMPLE_PARAMS)
            assert sigmoid_probability(n, d, EXAMPLE_PARAMS) == pytest.approx(p, abs=1e-12)


def test_sigmoid_density_closed_form_at_half():
    # psi(n, 1/2) - 1/2 equals c1/n^c2; float addition rounds once, so
    # compare at machine precision rather than bitwise.
    for n in (1, 7, 200, 10**12):
        lhs = sigmoid_density(n, 0.5, EXAMPLE_PARAMS) - 0.5
        rhs = EXAMPLE_PARAMS.c1 / n ** EXAMPLE_PARAMS.c2
        assert abs(lhs - rhs) <= 1e-15 + 1e-12 * rhs
    assert abs(sigmoid_density(10**12, 0.5, EXAMPLE_PARAMS) - 0.5) < 1e-5


def test_sigmoid_density_monotone_decreasing_in_p():
    ds = [sigmoid_density(50, p, EXAMPLE_PARAMS) for p in (0.05, 0.25, 0.5, 0.75, 0.95)]
    assert all(a > b for a, b in zip(ds, ds[1:]))


def test_sigmoid_density_rejects_bad_p():
    for p in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            sigmoid_density(10, p, EXAMPLE_PARAMS)


def test_sigmoid_saturates_instead_of_overflowing():
    assert sigmoid_probability(10, 1e9, EXAMPLE_PARAMS) == 0.0
    assert sigmoid_probability(10, -1e9, EXAMPLE_PARAMS) == 1.0


def test_large_n_drives_probability_to_step():
    # Fig-style parameterization: above the midpoint the probability
    # collapses as n grows.
    assert sigmoid_probability(10**9, 0.6, EXAMPLE_PARAMS) < 1e-12


def test_width_ratio_limit_value():
    L = width_ratio_limit(0.1, 0.9, EXAMPLE_PARAMS)
    assert L == pytest.approx((math.log2(9.0) - math.log2(1.0 / 9.0)) / 0.5)
    assert L == pytest.approx(12.6797, abs=5e-5)


def test_width_ratio_converges_to_limit():
    # relative gap is (c3/c4) / n^(1/3); pick c3 small enough that the
    # 1e-3 target is reachable at n = 1e12.
    params = SigmoidParams(5.0, 0.5, 2.0, 0.5)
    L = width_ratio_limit(0.1, 0.9, params)
    r = transition_width_ratio(10**12, 0.1, 0.9, params)
    assert abs(r - L) / L < 1e-3


def test_width_ratio_monotone_approach_from_below():
    L = width_ratio_limit(0.1, 0.9, EXAMPLE_PARAMS)
    gaps = [L - transition_width_ratio(n, 0.1, 0.9, EXAMPLE_PARAMS) for n in (10, 80, 640, 5120)]
    assert all(g > 0 for g in gaps)
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_width_ratio_symmetric_heights():
    # p_min and p_max symmetric around 1/2 double the single log term
    r = transition_width_ratio(100, 0.2, 0.8, EXAMPLE_PARAMS)
    single = math.log2(1.0 / 0.2 - 1.0)
    assert r == pytest.approx(2 * single / (20.0 / 100 ** (1 / 3) + 0.5))


def test_width_ratio_rejects_bad_ordering():
    with pytest.raises(ValueError):
        transition_width_ratio(10, 0.9, 0.1, EXAMPLE_PARAMS)
    with pytest.raises(ValueError):
        transition_width_ratio(10, 0.5, 0.5, EXAMPLE_PARAMS)
