"""Plot-ready CSV emission with byte-stable number formatting, plus a checksum manifest."""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np
from scipy.special import ndtri


def fmt(value) -> str:
    """Shortest round-trip decimal for floats, plain digits for integers."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return repr(float(value))


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def qq_pairs(samples) -> tuple[np.ndarray, np.ndarray]:
    """Standard-normal plotting positions Phi^-1((i - 1/2)/n) against standardized order statistics."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 2:
        raise ValueError("need at least 2 samples")
    sd = x.std(ddof=1)
    z = (x - x.mean()) / sd if sd > 0 else np.zeros_like(x)
    theoretical = ndtri((np.arange(1, n + 1) - 0.5) / n)
    return theoretical, z


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir: Path, files) -> Path:
    entries = [{"file": Path(f).name, "bytes": Path(f).stat().st_size, "sha256": sha256(f)}
               for f in sorted(files, key=lambda f: Path(f).name)]
    path = Path(out_dir) / "manifest.json"
    path.write_text(json.dumps({"files": entries}, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
