"""Content-addressed run cache keyed by (scene, seed, code version)."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

VERSION = "0.1.0"


def cache_root() -> Path:
    env = os.environ.get("WULFFKIT_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "wulffkit"


def cache_key(scene: dict, seed: int) -> str:
    blob = json.dumps({"scene": scene, "seed": int(seed), "version": VERSION},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def fetch(key: str):
    """Stored artifacts as {name: bytes}, or None on a miss."""
    d = cache_root() / key
    if not (d / ".complete").exists():
        return None
    out = {}
    for p in sorted(d.iterdir()):
        if p.name != ".complete":
            out[p.name] = p.read_bytes()
    return out


def store(key: str, artifacts: dict) -> None:
    d = cache_root() / key
    d.mkdir(parents=True, exist_ok=True)
    for name, data in artifacts.items():
        (d / name).write_bytes(data if isinstance(data, bytes)
                               else data.encode())
    (d / ".complete").write_bytes(b"")
