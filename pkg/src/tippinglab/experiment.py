"""Monte Carlo sweep engine.

A sweep walks an (n, density) grid; each feasible cell draws S graphs
from its own seeded streams and counts property holders. Cells are the
unit of parallelism and each sample has a seed derived purely from
(master seed, n, m, property, sample index), so the surface is a pure
function of the plan: any worker count, and any interrupted-then-resumed
schedule, produces byte-identical output.

Surfaces persist as CSV with a fixed header and an embedded plan line,
plus a sidecar journal while a sweep is running so partial work
survives a kill.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, replace
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from multiprocessing import Pool
from typing import Sequence

import numpy as np

from .randgen import InfeasibleDensityError, RngState, derive_cell_seed, edge_count, fnv1a64, random_simple_graph
from .recognizers import PROPERTIES, PROPERTY_CODES, check_property

SCHEMA_HEADER = "schema=1,property,n,density,m,samples,positives,frequency"

# Full-resolution default grids per property: (n_max, d_max, d_step).
_DEFAULT_GRIDS = {
    "acyclic": (400, "1.0", "0.05"),
    "planar": (400, "3.0", "0.1"),
    "outerplanar": (400, "2.0", "0.1"),
    "nearplanar": (200, "3.0", "0.1"),
}

DEFAULT_SAMPLES = 10_000


class SurfaceFormatError(ValueError):
    """Surface CSV cannot be parsed or fails schema validation."""


def canon_density(value) -> str:
    """Canonical decimal string for a density ("0.30" -> "0.3")."""
    try:
        d = Decimal(str(value))
    except InvalidOperation:
        raise ValueError(f"not a decimal density: {value!r}") from None
    if not d.is_finite() or d < 0:
        raise ValueError(f"density must be a finite non-negative decimal, got {value!r}")
    return format(d.normalize(), "f")


def density_grid(d_min, d_max, d_step) -> tuple[str, ...]:
    """Inclusive decimal grid d_min, d_min+step, ... capped at d_max."""
    lo, hi, step = Decimal(str(d_min)), Decimal(str(d_max)), Decimal(str(d_step))
    if step <= 0:
        raise ValueError(f"density step must be positive, got {d_step}")
    if hi < lo:
        raise ValueError(f"empty density range [{d_min}, {d_max}]")
    out = []
    k = 0
    while True:
        d = lo + k * step
        if d > hi:
            break
        out.append(format(d.normalize(), "f"))
        k += 1
    return tuple(out)


@dataclass(frozen=True)
class ExperimentPlan:
    """Immutable description of one sweep.

    n_values and densities are explicit tuples (densities as canonical
    decimal strings) so irregular grids serialize losslessly.
    """

    property: str
    n_values: tuple[int, ...]
    densities: tuple[str, ...]
    samples: int
    seed: int

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise ValueError(f"unknown property {self.property!r}")
        if not self.n_values or not self.densities:
            raise ValueError("plan grid must be non-empty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("vertex counts must be positive")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise ValueError("n_values must be strictly increasing")
        canon = [canon_density(d) for d in self.densities]
        if list(self.densities) != canon:
            raise ValueError("densities must be canonical decimal strings")
        keys = [Fraction(d) for d in self.densities]
        if keys != sorted(set(keys)):
            raise ValueError("densities must be strictly increasing")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")

    @classmethod
    def from_ranges(
        cls,
        property: str,
        *,
        n_min: int = 1,
        n_max: int,
        n_step: int = 1,
        d_min="0.0",
        d_max,
        d_step,
        samples: int = DEFAULT_SAMPLES,
        seed: int = 0,
    ) -> "ExperimentPlan":
        if n_step < 1:
            raise ValueError(f"n step must be >= 1, got {n_step}")
        ns = tuple(range(n_min, n_max + 1, n_step))
        return cls(property, ns, density_grid(d_min, d_max, d_step), samples, seed)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "n_values": list(self.n_values),
            "densities": list(self.densities),
            "samples": self.samples,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentPlan":
        return cls(
            property=d["property"],
            n_values=tuple(d["n_values"]),
            densities=tuple(d["densities"]),
            samples=int(d["samples"]),
            seed=int(d["seed"]),
        )


def default_plan(tag: str, *, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> ExperimentPlan:
    """The full reference grid for a property (n from 1, unit steps)."""
    if tag not in _DEFAULT_GRIDS:
        raise ValueError(f"unknown property {tag!r}")
    n_max, d_max, d_step = _DEFAULT_GRIDS[tag]
    return ExperimentPlan.from_ranges(
        tag, n_max=n_max, d_max=d_max, d_step=d_step, samples=samples, seed=seed
    )


@dataclass(frozen=True)
class SurfaceRow:
    """One grid cell. samples == 0 marks an infeasible (skipped) cell."""

    n: int
    density: str
    m: int
    samples: int
    positives: int

    @property
    def skipped(self) -> bool:
        return self.samples == 0

    @property
    def frequency(self) -> float | None:
        if self.samples == 0:
            return None
        return self.positives / self.samples


@dataclass(frozen=True)
class FrequencySurface:
    plan: ExperimentPlan
    rows: tuple[SurfaceRow, ...]  # canonical order: n ascending, then density

    @property
    def property(self) -> str:
        return self.plan.property

    def row(self, n: int, density) -> SurfaceRow:
        key = (n, canon_density(density))
        for r in self.rows:
            if (r.n, r.density) == key:
                return r
        raise KeyError(f"no cell {key} in surface")

    def skipped_cells(self) -> tuple[SurfaceRow, ...]:
        return tuple(r for r in self.rows if r.skipped)


def plan_cells(plan: ExperimentPlan) -> list[tuple[int, str, int, bool]]:
    """Grid cells as (n, density, m, feasible), canonical order."""
    cells = []
    for n in plan.n_values:
        for d in plan.densities:
            try:
                m = edge_count(n, d)
                cells.append((n, d, m, True))
            except InfeasibleDensityError as exc:
                cells.append((n, d, exc.m, False))
    return cells


# ---------------------------------------------------------------------------
# cell counting: compiled kernel with pure-Python fallback

_KERNEL = None
_KERNEL_TRIED = False


def kernel_module():
    """The compiled kernel, or None (no numba, or TIPPINGLAB_NO_JIT set)."""
    global _KERNEL, _KERNEL_TRIED
    if not _KERNEL_TRIED:
        _KERNEL_TRIED = True
        if not os.environ.get("TIPPINGLAB_NO_JIT"):
            try:
                from . import _kernel
                _KERNEL = _kernel
            except ImportError:
                _KERNEL = None
    return _KERNEL


def count_cell_reference(
    master: int, stream_tag: str, n: int, m: int, samples: int, properties: Sequence[str]
) -> list[int]:
    """Pure-Python cell loop; the semantic authority the kernel mirrors."""
    counts = [0] * len(properties)
    for rep in range(samples):
        seed = derive_cell_seed(master, n, m, stream_tag, rep)
        g = random_simple_graph(n, m, RngState(seed))
        for i, tag in enumerate(properties):
            if check_property(tag, g):
                counts[i] += 1
    return counts


def count_cell(
    master: int,
    stream_tag: str,
    n: int,
    m: int,
    samples: int,
    properties: Sequence[str],
    use_kernel: bool | None = None,
) -> list[int]:
    kern = kernel_module() if use_kernel in (None, True) else None
    if use_kernel is True and kern is None:
        raise RuntimeError("compiled kernel requested but unavailable")
    if kern is None:
        return count_cell_reference(master, stream_tag, n, m, samples, properties)
    codes = np.array([PROPERTY_CODES[p] for p in properties], dtype=np.int64)
    out = kern.count_cell(
        np.uint64(master), np.uint64(fnv1a64(stream_tag.encode("utf-8"))),
        n, m, samples, codes,
    )
    return [int(x) for x in out]


def _cell_task(args):
    n, density, m, master, stream_tag, samples, properties, use_kernel = args
    counts = count_cell(master, stream_tag, n, m, samples, list(properties), use_kernel)
    return n, density, counts


# ---------------------------------------------------------------------------
# persistence

def _format_row(property_tag: str, row: SurfaceRow) -> str:
    freq = "" if row.skipped else repr(row.positives / row.samples)
    return f"{property_tag},{row.n},{row.density},{row.m},{row.samples},{row.positives},{freq}"


def _parse_row(line: str, lineno: int, property_tag: str) -> SurfaceRow:
    parts = line.split(",")
    if len(parts) != 7:
        raise SurfaceFormatError(f"line {lineno}: expected 7 fields, found {len(parts)}")
    prop, n_s, d_s, m_s, s_s, p_s, f_s = parts
    if prop != property_tag:
        raise SurfaceFormatError(
            f"line {lineno}: property {prop!r} does not match plan property {property_tag!r}"
        )
    try:
        n, m, samples, positives = int(n_s), int(m_s), int(s_s), int(p_s)
    except ValueError:
        raise SurfaceFormatError(f"line {lineno}: malformed integer field") from None
    if canon_density(d_s) != d_s:
        raise SurfaceFormatError(f"line {lineno}: density {d_s!r} is not canonical")
    if not 0 <= positives <= max(samples, 0):
        raise SurfaceFormatError(f"line {lineno}: positives {positives} out of range")
    if samples == 0:
        if f_s != "":
            raise SurfaceFormatError(f"line {lineno}: skipped cell must have empty frequency")
    else:
        try:
            f = float(f_s)
        except ValueError:
            raise SurfaceFormatError(f"line {lineno}: malformed frequency") from None
        if f != positives / samples:
            raise SurfaceFormatError(
                f"line {lineno}: frequency {f_s} does not equal positives/samples"
            )
    return SurfaceRow(n, d_s, m, samples, positives)


def write_surface(surface: FrequencySurface, path: str | os.PathLike) -> None:
    """Atomic write: full file to a temp name, then rename over path."""
    path = os.fspath(path)
    lines = [SCHEMA_HEADER, "# plan=" + json.dumps(surface.plan.to_dict(), sort_keys=True)]
    lines.extend(_format_row(surface.property, r) for r in surface.rows)
    payload = "\n".join(lines) + "\n"
    d = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".surface-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_surface(path: str | os.PathLike) -> FrequencySurface:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != SCHEMA_HEADER:
        got = lines[0] if lines else "<empty file>"
        raise SurfaceFormatError(f"line 1: unsupported schema header: {got!r}")
    if len(lines) < 2 or not lines[1].startswith("# plan="):
        raise SurfaceFormatError("line 2: missing plan metadata line")
    try:
        plan = ExperimentPlan.from_dict(json.loads(lines[1][len("# plan="):]))
    except (ValueError, KeyError, TypeError) as exc:
        raise SurfaceFormatError(f"line 2: invalid plan metadata: {exc}") from None
    rows = []
    for i, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        rows.append(_parse_row(line, i, plan.property))
    expected = [(n, d) for n in plan.n_values for d in plan.densities]
    got_keys = [(r.n, r.density) for r in rows]
    if got_keys != expected:
        raise SurfaceFormatError(
            f"rows do not match the plan grid: expected {len(expected)} cells, "
            f"found {len(got_keys)}"
        )
    return FrequencySurface(plan, tuple(rows))


def _salvage_rows(path: str, property_tag: str) -> dict[tuple[int, str], SurfaceRow]:
    """Lenient row reader for resume: keeps every well-formed row."""
    done: dict[tuple[int, str], SurfaceRow] = {}
    if not os.path.exists(path):
        return done
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh.read().splitlines(), start=1):
            if not line or line == SCHEMA_HEADER or line.startswith("#"):
                continue
            try:
                row = _parse_row(line, i, property_tag)
            except SurfaceFormatError:
                continue
            done[(row.n, row.density)] = row
    return done


# ---------------------------------------------------------------------------
# the sweep itself

def run_sweep(
    plan: ExperimentPlan,
    workers: int = 1,
    *,
    out_path: str | os.PathLike | None = None,
    resume: bool = False,
    use_kernel: bool | None = None,
    progress=None,
) -> FrequencySurface:
    """Execute a plan and return (and optionally persist) its surface.

    The result is a pure function of the plan: worker count, resume
    state, and kernel availability never change a single byte.
    """
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    out_path = os.fspath(out_path) if out_path is not None else None
    journal_path = out_path + ".journal" if out_path else None

    cells = plan_cells(plan)
    done: dict[tuple[int, str], SurfaceRow] = {}
    if out_path and resume:
        done.update(_salvage_rows(out_path, plan.property))
        done.update(_salvage_rows(journal_path, plan.property))
        valid = {(n, d): (m, feasible) for n, d, m, feasible in cells}
        for key in list(done):
            row = done[key]
            meta = valid.get(key)
            expected_samples = 0 if meta and not meta[1] else plan.samples
            if meta is None or row.m != meta[0] or row.samples != expected_samples:
                del done[key]  # stale or foreign row: recompute

    for n, d, m, feasible in cells:
        if not feasible and (n, d) not in done:
            done[(n, d)] = SurfaceRow(n, d, m, 0, 0)

    pending = {
        (n, d): m for n, d, m, feasible in cells if feasible and (n, d) not in done
    }
    tasks = [
        (n, d, m, plan.seed, plan.property, plan.samples, (plan.property,), use_kernel)
        for (n, d), m in pending.items()
    ]

    journal = open(journal_path, "a", encoding="utf-8") if journal_path else None
    try:
        def consume(results) -> None:
            for completed, (n, d, counts) in enumerate(results, start=1):
                row = SurfaceRow(n, d, pending[(n, d)], plan.samples, counts[0])
                done[(n, d)] = row
                if journal:
                    journal.write(_format_row(plan.property, row) + "\n")
                    journal.flush()
                if progress:
                    progress(completed, len(tasks))

        if tasks:
            if workers == 1:
                consume(map(_cell_task, tasks))
            else:
                with Pool(processes=workers) as pool:
                    consume(pool.imap_unordered(_cell_task, tasks))
    finally:
        if journal:
            journal.close()

    rows = tuple(done[(n, d)] for n, d, _, _ in cells)
    surface = FrequencySurface(plan, rows)
    if out_path:
        write_surface(surface, out_path)
        if journal_path and os.path.exists(journal_path):
            os.unlink(journal_path)
    return surface


def run_multi_sweep(
    plan: ExperimentPlan,
    properties: Sequence[str],
    workers: int = 1,
    *,
    use_kernel: bool | None = None,
) -> dict[str, FrequencySurface]:
    """Measure several properties on the same graph sequence.

    Every property is evaluated on the graphs of plan.property's seeded
    streams, which makes per-cell positives directly comparable (the
    containment chain outerplanar <= planar <= nearplanar holds count
    for count, not just in expectation). In-memory only.
    """
    for p in properties:
        if p not in PROPERTIES:
            raise ValueError(f"unknown property {p!r}")
    props = tuple(properties)
    cells = plan_cells(plan)
    tasks = [
        (n, d, m, plan.seed, plan.property, plan.samples, props, use_kernel)
        for n, d, m, feasible in cells
        if feasible
    ]
    results: dict[tuple[int, str], list[int]] = {}
    if workers == 1:
        for n, d, counts in map(_cell_task, tasks):
            results[(n, d)] = counts
    else:
        with Pool(processes=workers) as pool:
            for n, d, counts in pool.imap_unordered(_cell_task, tasks):
                results[(n, d)] = counts
    surfaces = {}
    for i, p in enumerate(props):
        rows = []
        for n, d, m, feasible in cells:
            if feasible:
                rows.append(SurfaceRow(n, d, m, plan.samples, results[(n, d)][i]))
            else:
                rows.append(SurfaceRow(n, d, m, 0, 0))
        surfaces[p] = FrequencySurface(replace(plan, property=p), tuple(rows))
    return surfaces
