"""Command-line entry point.

Subcommands cover the full pipeline: graph generation (gen), property
testing (test), Monte Carlo sweeps (sweep), the exact acyclicity oracle
(oracle), contour extraction (contour), transition-curve fitting (fit),
closed-form model evaluation (model), oracle-vs-measurement validation
(validate-acyclic), and a one-command reproduction bundle (repro).

Exit codes: 0 success, 1 runtime failure, 2 usage or input-format error.
Sweep-style commands write into a run directory containing the output
files plus a manifest.json recording version, resolved plan, seed,
worker count, timestamps, and SHA-256 digests of every output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from importlib import metadata

from .analysis import (
    ContourCurve,
    SigmoidParams,
    contour,
    fit_transition,
    sigmoid_density,
    sigmoid_probability,
    transition_width_ratio,
)
from .experiment import (
    _DEFAULT_GRIDS,
    DEFAULT_SAMPLES,
    ExperimentPlan,
    FrequencySurface,
    SurfaceFormatError,
    read_surface,
    run_sweep,
)
from .graph import Graph, GraphFormatError, from_text, to_text
from .manifest import MANIFEST_NAME, RunManifest, file_digest, write_manifest
from .oracles import acyclic_probability, format_probability
from .randgen import InfeasibleDensityError, RngState, edge_count, random_simple_graph
from .recognizers import PROPERTIES, check_property, is_near_planar

DESK_SAMPLES = 1_000
FIT_MODEL = "0.5 + c1/n^c2 + c3/n^(1/3)"


def tool_version() -> str:
    try:
        return metadata.version("tippinglab")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def result_dir(explicit: str | None) -> str:
    """--out wins, then TIPPINGLAB_CACHE, then ./results."""
    if explicit:
        return explicit
    return os.environ.get("TIPPINGLAB_CACHE", "results")


# ---------------------------------------------------------------------------
# validation report (exact oracle vs measured surface)


def validate_acyclic(surface: FrequencySurface) -> dict:
    """Per-cell |frequency - exact probability| statistics.

    Skipped (infeasible) cells are excluded. Signed mean keeps the sign
    so a systematic generator bias would show up even when the absolute
    errors look like fair sampling noise.
    """
    if surface.plan.property != "acyclic":
        raise ValueError(
            f"validation needs an acyclic surface, got {surface.plan.property!r}"
        )
    abs_sum = 0.0
    signed_sum = 0.0
    peak = 0.0
    cells = 0
    for row in surface.rows:
        if row.skipped:
            continue
        exact = float(acyclic_probability(row.n, row.m))
        err = row.frequency - exact
        abs_sum += abs(err)
        signed_sum += err
        peak = max(peak, abs(err))
        cells += 1
    if cells == 0:
        raise ValueError("surface has no measured cells to validate")
    return {
        "property": "acyclic",
        "cells": cells,
        "samples": surface.plan.samples,
        "mean_abs_error": abs_sum / cells,
        "peak_abs_error": peak,
        "signed_mean_error": signed_sum / cells,
    }


# ---------------------------------------------------------------------------
# curve CSV (contour output, fit input)


def write_curve(path: str | os.PathLike, curve: ContourCurve) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n,density\n")
        for n, d in curve.points:
            fh.write(f"{n},{d!r}\n")


def read_curve(path: str | os.PathLike) -> list[tuple[int, float]]:
    points = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or (lineno == 1 and line == "n,density"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'n,density'")
            try:
                points.append((int(parts[0]), float(parts[1])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad curve row {line!r}") from None
    return points


# ---------------------------------------------------------------------------
# shared sweep plumbing


def _add_grid_flags(sub: argparse.ArgumentParser, with_property: bool = True) -> None:
    if with_property:
        sub.add_argument("--property", required=True, choices=PROPERTIES)
    sub.add_argument("--n-min", type=int, default=None)
    sub.add_argument("--n-max", type=int, default=None)
    sub.add_argument("--n-step", type=int, default=1)
    sub.add_argument("--d-min", default=None)
    sub.add_argument("--d-max", default=None)
    sub.add_argument("--d-step", default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--workers", type=int, default=None)
    sub.add_argument("--paper-scale", action="store_true",
                     help=f"default to {DEFAULT_SAMPLES} samples per cell "
                          f"instead of {DESK_SAMPLES}")


def _plan_from_args(args, property_tag: str) -> ExperimentPlan:
    grid_n_max, grid_d_max, grid_d_step = _DEFAULT_GRIDS[property_tag]
    samples = args.samples
    if samples is None:
        samples = DEFAULT_SAMPLES if args.paper_scale else DESK_SAMPLES
    return ExperimentPlan.from_ranges(
        property_tag,
        n_min=args.n_min if args.n_min is not None else 1,
        n_max=args.n_max if args.n_max is not None else grid_n_max,
        n_step=args.n_step,
        d_min=args.d_min if args.d_min is not None else "0.0",
        d_max=args.d_max if args.d_max is not None else grid_d_max,
        d_step=args.d_step if args.d_step is not None else grid_d_step,
        samples=samples,
        seed=args.seed,
    )


def _workers(args) -> int:
    if args.workers is not None:
        if args.workers < 1:
            raise ValueError(f"worker count must be >= 1, got {args.workers}")
        return args.workers
    return os.cpu_count() or 1


def _progress_printer(total_label: str):
    if not sys.stderr.isatty():
        return None

    def progress(done: int, total: int) -> None:
        print(f"\r{total_label}: {done}/{total} cells", end="", file=sys.stderr)
        if done == total:
            print(file=sys.stderr)

    return progress


def _run_into_dir(plan: ExperimentPlan, run_dir: str, workers: int,
                  resume: bool) -> FrequencySurface:
    """Execute a plan, persist surface.csv + manifest.json in run_dir."""
    os.makedirs(run_dir, exist_ok=True)
    started = _utcnow()
    out_path = os.path.join(run_dir, "surface.csv")
    surface = run_sweep(
        plan,
        workers,
        out_path=out_path,
        resume=resume,
        progress=_progress_printer(plan.property),
    )
    manifest = RunManifest(
        version=tool_version(),
        plan=plan.to_dict(),
        seed=plan.seed,
        workers=workers,
        started=started,
        finished=_utcnow(),
        digests={"surface.csv": file_digest(out_path)},
    )
    write_manifest(run_dir, manifest)
    return surface


def _refresh_manifest(run_dir: str, extra: dict[str, str]) -> None:
    """Extend a run directory's manifest with more output digests."""
    from .manifest import read_manifest

    m = read_manifest(run_dir)
    digests = dict(m.digests)
    digests.update(extra)
    write_manifest(run_dir, RunManifest(
        version=m.version, plan=m.plan, seed=m.seed, workers=m.workers,
        started=m.started, finished=_utcnow(), digests=digests,
    ))


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_gen(args) -> int:
    g = random_simple_graph(args.n, args.m, RngState(args.seed))
    sys.stdout.write(to_text(g))
    return 0


def cmd_test(args) -> int:
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    g = from_text(text)
    if args.property == "nearplanar":
        witness = is_near_planar(g)
        if witness.verdict and witness.removed_edge is not None:
            u, v = witness.removed_edge
            print(f"true {u} {v}")
        else:
            print("true" if witness.verdict else "false")
    else:
        print("true" if check_property(args.property, g) else "false")
    return 0


def cmd_sweep(args) -> int:
    plan = _plan_from_args(args, args.property)
    run_dir = os.path.join(result_dir(args.out), plan.property) \
        if args.out is None else args.out
    _run_into_dir(plan, run_dir, _workers(args), args.resume)
    print(os.path.join(run_dir, "surface.csv"))
    return 0


def cmd_oracle(args) -> int:
    if args.quantity != "acyclic":
        raise ValueError(f"no exact oracle for {args.quantity!r}")
    from .experiment import density_grid

    sys.stdout.write("n,density,m,probability\n")
    for d in density_grid(args.dmin, args.dmax, args.step):
        try:
            m = edge_count(args.n, d)
        except InfeasibleDensityError:
            continue
        p = acyclic_probability(args.n, m)
        sys.stdout.write(f"{args.n},{d},{m},{format_probability(p)}\n")
    return 0


def cmd_contour(args) -> int:
    surface = read_surface(args.infile)
    curve = contour(surface, args.height)
    write_curve(args.out, curve)
    print(args.out)
    return 0


def cmd_fit(args) -> int:
    points = [(n, d) for n, d in read_curve(args.infile) if n >= args.min_n]
    result = fit_transition(points)
    payload = {
        "c1": result.c1,
        "c2": result.c2,
        "c3": result.c3,
        "rss": result.rss,
        "iterations": result.iterations,
        "converged": result.converged,
        "model": FIT_MODEL,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(args.out)
    return 0


def cmd_model(args) -> int:
    params = SigmoidParams(args.c1, args.c2, args.c3, args.c4)
    if args.form == "zeta":
        if args.d is None:
            raise ValueError("zeta needs --d")
        value = sigmoid_probability(args.n, args.d, params)
    elif args.form == "psi":
        if args.p is None:
            raise ValueError("psi needs --p")
        value = sigmoid_density(args.n, args.p, params)
    else:
        value = transition_width_ratio(args.n, args.pmin, args.pmax, params)
    print(repr(value))
    return 0


def cmd_validate_acyclic(args) -> int:
    if args.infile:
        surface = read_surface(args.infile)
    else:
        plan = _plan_from_args(args, "acyclic")
        surface = run_sweep(plan, _workers(args),
                            progress=_progress_printer("acyclic"))
    report = validate_acyclic(surface)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def cmd_repro(args) -> int:
    """Desk-scale reproduction bundle: one directory per figure analog.

    Thinned n grids (default step 10 starting at 10) keep the run in the
    minutes range while preserving every fitted curve's shape. Heights
    and grids follow each property's reference grid.
    """
    base = result_dir(args.out)
    samples = args.samples if args.samples is not None else DESK_SAMPLES
    workers = _workers(args)
    n_step = args.n_step
    summary = []
    for prop in PROPERTIES:
        grid_n_max, d_max, d_step = _DEFAULT_GRIDS[prop]
        n_max = min(args.n_max, grid_n_max) if args.n_max else grid_n_max
        n_min = min(n_step, n_max)
        plan = ExperimentPlan.from_ranges(
            prop, n_min=n_min, n_max=n_max, n_step=n_step,
            d_max=d_max, d_step=d_step, samples=samples, seed=args.seed,
        )
        run_dir = os.path.join(base, prop)
        surface = _run_into_dir(plan, run_dir, workers, resume=args.resume)
        extra: dict[str, str] = {}
        if prop == "acyclic":
            report = validate_acyclic(surface)
            vpath = os.path.join(run_dir, "validation.json")
            with open(vpath, "w", encoding="utf-8") as fh:
                json.dump(report, fh, indent=2)
                fh.write("\n")
            extra["validation.json"] = file_digest(vpath)
        else:
            heights = (0.5, 0.01, 0.99) if prop == "planar" else (0.5,)
            for h in heights:
                tag = format(h, ".2f").replace("0.", "")
                curve = contour(surface, h)
                cpath = os.path.join(run_dir, f"contour_{tag}.csv")
                write_curve(cpath, curve)
                extra[f"contour_{tag}.csv"] = file_digest(cpath)
                if len(curve.points) >= 10:
                    fit = fit_transition(curve)
                    fpath = os.path.join(run_dir, f"fit_{tag}.json")
                    with open(fpath, "w", encoding="utf-8") as fh:
                        json.dump({
                            "c1": fit.c1, "c2": fit.c2, "c3": fit.c3,
                            "rss": fit.rss, "iterations": fit.iterations,
                            "converged": fit.converged, "model": FIT_MODEL,
                        }, fh, indent=2)
                        fh.write("\n")
                    extra[f"fit_{tag}.json"] = file_digest(fpath)
        if extra:
            _refresh_manifest(run_dir, extra)
        summary.append(run_dir)
    for line in summary:
        print(line)
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tippinglab",
        description="Measure and model density tipping points of graph "
                    "properties in uniform random graphs G(n,m).",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {tool_version()}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gen", help="sample one uniform G(n,m) graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = subs.add_parser("test", help="test one graph for a property")
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--in", dest="infile", default=None,
                   help="graph text file (default: stdin)")
    p.set_defaults(func=cmd_test)

    p = subs.add_parser("sweep", help="run a Monte Carlo frequency sweep")
    _add_grid_flags(p)
    p.add_argument("--out", default=None, help="run directory")
    p.add_argument("--resume", action="store_true",
                   help="reuse rows already journaled in the run directory")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("oracle", help="exact probabilities (CSV to stdout)")
    p.add_argument("quantity", choices=["acyclic"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dmin", required=True)
    p.add_argument("--dmax", required=True)
    p.add_argument("--step", required=True)
    p.set_defaults(func=cmd_oracle)

    p = subs.add_parser("contour", help="extract one contour from a surface")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--height", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_contour)

    p = subs.add_parser("fit", help="fit the transition model to a contour")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-n", type=int, default=0,
                   help="drop curve points with n below this (default: keep all)")
    p.set_defaults(func=cmd_fit)

    p = subs.add_parser("model", help="evaluate the sigmoid transition model")
    p.add_argument("form", choices=["zeta", "psi", "width"])
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--c3", type=float, required=True)
    p.add_argument("--c4", type=float, required=True)
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--d", type=float, default=None, help="density (zeta)")
    p.add_argument("--p", type=float, default=None, help="probability (psi)")
    p.add_argument("--pmin", type=float, default=0.1, help="width lower height")
    p.add_argument("--pmax", type=float, default=0.9, help="width upper height")
    p.set_defaults(func=cmd_model)

    p = subs.add_parser("validate-acyclic",
                        help="compare a measured acyclic surface to the exact oracle")
    p.add_argument("--in", dest="infile", default=None,
                   help="surface CSV (default: run a fresh sweep)")
    p.add_argument("--out", default=None, help="also write the JSON report here")
    _add_grid_flags(p, with_property=False)
    p.set_defaults(func=cmd_validate_acyclic)

    p = subs.add_parser("repro",
                        help="desk-scale reproduction bundle for all properties")
    p.add_argument("--out", default=None, help="base output directory")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--n-step", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help (0) and usage (2)
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (GraphFormatError, SurfaceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
