"""CSV/JSON emission with atomic writes and lossless number formatting."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .spectral import Grid, Profile


def atomic_write(path, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _g17(v) -> str:
    return format(float(v), ".17g")


def write_table(path, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_g17(v) if isinstance(v, (float, np.floating)) else v for v in row])
    atomic_write(path, buf.getvalue())


def write_profile_csv(path, profile: Profile) -> None:
    write_table(path, ["x", "zeta"], zip(profile.grid.nodes, profile.values))


def read_profile_csv(path) -> Profile:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["x", "zeta"]:
        raise ConfigurationError(f"{path}: expected header 'x,zeta'")
    data = np.array(rows[1:], dtype=float)
    x, z = data[:, 0], data[:, 1]
    n = len(x)
    dx = (x[-1] - x[0]) / (n - 1)
    grid = Grid(n * dx, n)
    if not np.allclose(x, grid.nodes, rtol=0, atol=1e-9 * grid.P):
        raise ConfigurationError(f"{path}: nodes are not the periodic grid on [-P/2, P/2)")
    return Profile(grid, z)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def to_json(obj) -> str:
    # float repr is the shortest string that reads back to the same double
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    atomic_write(path, to_json(obj))
