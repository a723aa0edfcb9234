"""Sweep planning, execution, persistence, and resume semantics."""

import math
import os

import pytest

from tippinglab.experiment import (
    SCHEMA_HEADER,
    ExperimentPlan,
    FrequencySurface,
    SurfaceFormatError,
    SurfaceRow,
    canon_density,
    count_cell,
    count_cell_reference,
    default_plan,
    density_grid,
    plan_cells,
    read_surface,
    run_multi_sweep,
    run_sweep,
    write_surface,
)


def small_plan(**kw):
    base = dict(
        property="planar",
        n_values=tuple(range(3, 16, 3)),
        densities=density_grid("0.2", "2.2", "0.5"),
        samples=40,
        seed=11,
    )
    base.update(kw)
    return ExperimentPlan(**base)


# -- densities and plans -----------------------------------------------------

def test_canon_density():
    assert canon_density("0.30") == "0.3"
    assert canon_density("1.0") == "1"
    assert canon_density("0") == "0"
    assert canon_density(".5") == "0.5"
    assert canon_density("2.50") == "2.5"
    with pytest.raises(ValueError):
        canon_density("abc")
    with pytest.raises(ValueError):
        canon_density("-0.1")


def test_density_grid():
    assert density_grid("0", "1", "0.25") == ("0", "0.25", "0.5", "0.75", "1")
    assert density_grid("0", "1", "0.3") == ("0", "0.3", "0.6", "0.9")
    assert density_grid("0.4", "0.4", "0.1") == ("0.4",)
    assert len(density_grid("0", "1.0", "0.05")) == 21
    with pytest.raises(ValueError):
        density_grid("0", "1", "0")
    with pytest.raises(ValueError):
        density_grid("1", "0", "0.1")


def test_plan_validation():
    with pytest.raises(ValueError):
        small_plan(property="chromatic")
    with pytest.raises(ValueError):
        small_plan(n_values=())
    with pytest.raises(ValueError):
        small_plan(n_values=(5, 3))
    with pytest.raises(ValueError):
        small_plan(n_values=(0, 3))
    with pytest.raises(ValueError):
        small_plan(densities=("0.5", "0.50"))  # non-canonical
    with pytest.raises(ValueError):
        small_plan(densities=("0.5", "0.4"))  # not increasing
    with pytest.raises(ValueError):
        small_plan(samples=0)


def test_plan_round_trip_and_ranges():
    p = small_plan()
    assert ExperimentPlan.from_dict(p.to_dict()) == p
    q = ExperimentPlan.from_ranges(
        "acyclic", n_min=10, n_max=30, n_step=10, d_max="1.0", d_step="0.5", samples=5, seed=1
    )
    assert q.n_values == (10, 20, 30)
    assert q.densities == ("0", "0.5", "1")


def test_default_plans_cover_reference_grids():
    p = default_plan("planar", samples=100)
    assert p.n_values == tuple(range(1, 401))
    assert p.densities[0] == "0" and p.densities[-1] == "3"
    assert default_plan("nearplanar", samples=1).n_values[-1] == 200
    with pytest.raises(ValueError):
        default_plan("bogus")


def test_plan_cells_marks_infeasible():
    plan = ExperimentPlan("planar", (5,), ("2.5",), 10, 0)
    cells = plan_cells(plan)
    assert cells == [(5, "2.5", 13, False)]  # 13 edges do not fit on 5 vertices


# -- cell counting -----------------------------------------------------------

def test_count_cell_backends_agree():
    for use_kernel in (False, None):
        assert count_cell(3, "planar", 12, 14, 50, ["planar"], use_kernel=use_kernel) == \
            count_cell_reference(3, "planar", 12, 14, 50, ["planar"])


def test_triangle_cell_is_deterministically_planar():
    # n=3, d=1 forces the triangle: every sample satisfies planar and
    # violates acyclic.
    plan = ExperimentPlan("planar", (3,), ("1",), 25, 4)
    surface = run_sweep(plan)
    assert surface.row(3, "1").frequency == 1.0
    plan = ExperimentPlan("acyclic", (3,), ("1",), 25, 4)
    assert run_sweep(plan).row(3, "1").frequency == 0.0


# -- persistence -------------------------------------------------------------

def test_surface_round_trip(tmp_path):
    surface = run_sweep(small_plan())
    path = tmp_path / "s.csv"
    write_surface(surface, path)
    back = read_surface(path)
    assert back.plan == surface.plan
    assert back.rows == surface.rows


def test_surface_file_shape(tmp_path):
    surface = run_sweep(small_plan())
    path = tmp_path / "s.csv"
    write_surface(surface, path)
    lines = path.read_text().splitlines()
    assert lines[0] == SCHEMA_HEADER
    assert lines[1].startswith("# plan=")
    assert len(lines) == 2 + len(surface.rows)
    # skipped cells: samples=0 and an empty frequency field
    skipped = [l for l in lines[2:] if l.split(",")[4] == "0"]
    assert skipped and all(l.endswith(",") for l in skipped)
    for l in skipped:
        assert l.split(",")[6] == ""


def test_skipped_cells_match_feasibility():
    surface = run_sweep(small_plan())
    for row in surface.rows:
        assert row.skipped == (row.m > row.n * (row.n - 1) // 2)
    assert surface.skipped_cells()


@pytest.mark.parametrize(
    "mutate,fragment",
    [
        (lambda L: ["bogus"] + L[1:], "header"),
        (lambda L: [L[0]] + L[2:], "plan"),
        (lambda L: L[:2] + ["planar,3,0.2,1,40"], "line 3"),
        (lambda L: L[:2] + ["acyclic" + L[2][6:]] + L[3:], "property"),
        (lambda L: L[:-1], "row"),
    ],
)
def test_read_surface_rejects_corruption(tmp_path, mutate, fragment):
    surface = run_sweep(small_plan())
    path = tmp_path / "s.csv"
    write_surface(surface, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(mutate(lines)) + "\n")
    with pytest.raises(SurfaceFormatError, match=fragment):
        read_surface(path)


def test_read_surface_rejects_wrong_frequency(tmp_path):
    surface = run_sweep(small_plan())
    path = tmp_path / "s.csv"
    write_surface(surface, path)
    lines = path.read_text().splitlines()
    row = lines[2].split(",")
    row[6] = "0.123456"
    lines[2] = ",".join(row)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(SurfaceFormatError, match="frequency"):
        read_surface(path)


# -- execution ---------------------------------------------------------------

def test_worker_counts_are_byte_identical(tmp_path):
    plan = small_plan()
    paths = []
    for w in (1, 2):
        p = tmp_path / f"w{w}.csv"
        run_sweep(plan, w, out_path=p)
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]


def test_kernel_and_reference_surfaces_identical():
    plan = small_plan(samples=20)
    a = run_sweep(plan, use_kernel=None)
    b = run_sweep(plan, use_kernel=False)
    assert a.rows == b.rows


def test_run_sweep_row_order_is_plan_order():
    surface = run_sweep(small_plan(samples=5))
    keys = [(r.n, r.density) for r in surface.rows]
    plan = surface.plan
    assert keys == [(n, d) for n in plan.n_values for d in plan.densities]


def test_resume_reuses_journal_and_drops_stale_rows(tmp_path):
    plan = small_plan()
    fresh = tmp_path / "fresh.csv"
    run_sweep(plan, out_path=fresh)
    reference_bytes = fresh.read_bytes()

    resumed = tmp_path / "resumed.csv"
    journal = tmp_path / "resumed.csv.journal"
    data_rows = reference_bytes.decode().splitlines()[2:]
    good = [r for r in data_rows if r.split(",")[5] != "0"][:5]
    stale_m = good[0].split(",")
    stale_m[4] = str(int(stale_m[4]) + 1)  # wrong edge count: must be evicted
    journal.write_text("\n".join(good + [",".join(stale_m)]) + "\n")

    assert run_sweep(plan, out_path=resumed, resume=True) is not None
    assert resumed.read_bytes() == reference_bytes
    assert not journal.exists()  # consumed on successful completion


def test_resume_ignores_rows_from_other_samples(tmp_path):
    plan = small_plan()
    other = small_plan(samples=plan.samples + 1)
    fresh = tmp_path / "a.csv"
    run_sweep(other, out_path=fresh)
    # reuse the other plan's file as a stale starting point
    stale = tmp_path / "b.csv"
    stale.write_bytes(fresh.read_bytes())
    surface = run_sweep(plan, out_path=stale, resume=True)
    assert all(r.samples in (0, plan.samples) for r in surface.rows)
    assert read_surface(stale).plan == plan


def test_multi_sweep_hierarchy_holds_per_cell():
    plan = small_plan(samples=30)
    out = run_multi_sweep(plan, ["acyclic", "outerplanar", "planar", "nearplanar"])
    planar_alone = run_sweep(plan)
    assert out["planar"].rows == planar_alone.rows
    for row in out["planar"].rows:
        if row.skipped:
            continue
        key = (row.n, row.density)
        a = out["acyclic"].row(*key).positives
        o = out["outerplanar"].row(*key).positives
        p = row.positives
        q = out["nearplanar"].row(*key).positives
        assert a <= o <= p <= q


def test_sampling_noise_is_within_binomial_envelope():
    # frequency of acyclic at (n=20, d=0.5) vs the exact oracle: the
    # deviation must stay inside ~4 standard errors.
    from tippinglab.oracles import acyclic_probability

    plan = ExperimentPlan("acyclic", (20,), ("0.5",), 600, 13)
    row = run_sweep(plan).row(20, "0.5")
    exact = float(acyclic_probability(20, row.m))
    sigma = math.sqrt(exact * (1 - exact) / plan.samples)
    assert abs(row.frequency - exact) < 4 * sigma + 1e-9
