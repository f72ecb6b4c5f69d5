"""Run manifests: every CLI output directory records exactly what produced it.

A manifest holds the command line, SHA-256 digests of all input files, every
seed and parameter value, the tool version, and timestamps. Numeric artifacts
are pure functions of (inputs, parameters, seeds), so re-running with an
identical manifest reproduces them byte for byte; only the timestamps differ.
"""

from __future__ import annotations

import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__
from .rebase import RNG_NAME

MANIFEST_NAME = "manifest.json"


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_manifest(
    command: str,
    parameters: dict[str, Any],
    inputs: dict[str, str | Path] | None = None,
    seeds: dict[str, int] | None = None,
    argv: list[str] | None = None,
) -> dict[str, Any]:
    return {
        "tool": "rmtbasket",
        "version": __version__,
        "rng": RNG_NAME,
        "command": command,
        "argv": list(sys.argv) if argv is None else list(argv),
        "parameters": parameters,
        "inputs": {
            name: {"path": str(path), "sha256": file_digest(path)}
            for name, path in (inputs or {}).items()
        },
        "seeds": seeds or {},
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }


def write_manifest(out_dir: str | Path, manifest: dict[str, Any]) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
