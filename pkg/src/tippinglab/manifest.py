"""Reproducibility manifests for experiment runs.

Every run directory holds exactly one manifest.json recording the tool
version, the fully resolved plan, the master seed, the worker count,
wall-clock bounds, and a SHA-256 digest of each output file. A run is
reproducible from the manifest alone: re-running the recorded plan with
the recorded seed must regenerate files with identical digests.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

MANIFEST_NAME = "manifest.json"


def file_digest(path: str | os.PathLike) -> str:
    """Hex SHA-256 of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """What produced a run directory and what it contains.

    digests maps file names relative to the run directory to hex
    SHA-256 digests. plan is the resolved plan dict (not the CLI
    arguments), so defaults frozen at run time stay visible.
    """

    version: str
    plan: dict
    seed: int
    workers: int
    started: str
    finished: str
    digests: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "plan": self.plan,
            "seed": self.seed,
            "workers": self.workers,
            "started": self.started,
            "finished": self.finished,
            "digests": dict(sorted(self.digests.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        return cls(
            version=str(d["version"]),
            plan=dict(d["plan"]),
            seed=int(d["seed"]),
            workers=int(d["workers"]),
            started=str(d["started"]),
            finished=str(d["finished"]),
            digests={str(k): str(v) for k, v in d["digests"].items()},
        )


def write_manifest(run_dir: str | os.PathLike, manifest: RunManifest) -> str:
    """Serialize a manifest into its run directory, atomically."""
    run_dir = os.fspath(run_dir)
    path = os.path.join(run_dir, MANIFEST_NAME)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=False)
        fh.write("\n")
    os.replace(tmp, path)
    return path


def read_manifest(path: str | os.PathLike) -> RunManifest:
    """Load a manifest from manifest.json or from a run directory."""
    path = os.fspath(path)
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_NAME)
    with open(path, "r", encoding="utf-8") as fh:
        return RunManifest.from_dict(json.load(fh))


def verify_manifest(run_dir: str | os.PathLike) -> list[str]:
    """Check every recorded digest against the file on disk.

    Returns the names of files that are missing or whose digest does
    not match; an empty list means the directory is intact.
    """
    run_dir = os.fspath(run_dir)
    manifest = read_manifest(run_dir)
    bad = []
    for name, digest in manifest.digests.items():
        target = os.path.join(run_dir, name)
        if not os.path.isfile(target) or file_digest(target) != digest:
            bad.append(name)
    return bad
