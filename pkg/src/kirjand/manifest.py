"""Run manifests: one structured record per output directory.

Every CLI run drops a `run_manifest.json` next to its artifacts holding
the command, hashes of the config files it read, every seed that fed a
random choice, and the produced outputs.  Reruns into the same directory
replace the manifest, so a directory always describes its latest run.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

MANIFEST_NAME = "run_manifest.json"


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    config_hashes: dict[str, str] = field(default_factory=dict)
    seeds: dict[str, int] = field(default_factory=dict)
    parameters: dict[str, object] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    started_at: str = ""
    finished_at: str = ""
    version: str = __version__

    def start(self) -> None:
        self.started_at = datetime.now(timezone.utc).isoformat()

    def add_input(self, label: str, path: str | Path) -> None:
        self.inputs[label] = str(path)

    def add_config(self, path: str | Path) -> None:
        self.config_hashes[str(path)] = file_sha256(path)

    def add_output(self, path: str | Path) -> None:
        self.outputs.append(str(path))

    def write(self, out_dir: str | Path) -> Path:
        self.finished_at = datetime.now(timezone.utc).isoformat()
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / MANIFEST_NAME
        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "config_hashes": self.config_hashes,
            "seeds": self.seeds,
            "parameters": self.parameters,
            "outputs": sorted(self.outputs),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "version": self.version,
        }
        path.write_text(
            json.dumps(payload, indent=1, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        return path
