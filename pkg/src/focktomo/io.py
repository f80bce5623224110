"""Plain-text file formats: samples CSV, Wigner grid CSV, key=value reports and configs.

Floats are written with 17 significant digits so every value round-trips
exactly; files use LF line endings.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .homodyne import RecordSet
from .tomography import WignerGrid

SAMPLES_HEADER = "channel,theta,x"
GRID_HEADER = "x,p,w"


class FileFormatError(ValueError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_lines(path, lines):
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def channel_name(channel: int) -> str:
    return f"n{channel}"


def write_samples(path, records: RecordSet) -> None:
    name = channel_name(records.channel)
    lines = [SAMPLES_HEADER]
    lines += [f"{name},{fmt(t)},{fmt(x)}" for t, x in zip(records.theta, records.x)]
    _write_lines(path, lines)


def read_samples(path) -> RecordSet:
    path = Path(path)
    with open(path) as f:
        header = f.readline().rstrip("\n")
        if header != SAMPLES_HEADER:
            raise FileFormatError(path, 1, f"expected header {SAMPLES_HEADER!r}, got {header!r}")
        channel = None
        theta, x = [], []
        for lineno, line in enumerate(f, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise FileFormatError(path, lineno, f"expected 3 fields, got {len(parts)}")
            name, t, v = parts
            if name not in ("n0", "n1", "n2"):
                raise FileFormatError(path, lineno, f"unknown channel {name!r}")
            ch = int(name[1])
            if channel is None:
                channel = ch
            elif ch != channel:
                raise FileFormatError(path, lineno, f"channel {name} in a file of channel n{channel}")
            try:
                tv, xv = float(t), float(v)
            except ValueError:
                raise FileFormatError(path, lineno, f"malformed number in {line!r}") from None
            if not (np.isfinite(tv) and np.isfinite(xv)):
                raise FileFormatError(path, lineno, "non-finite value")
            if not 0 <= tv < np.pi:
                raise FileFormatError(path, lineno, f"phase {tv} outside [0, pi)")
            theta.append(tv)
            x.append(xv)
    if channel is None:
        raise FileFormatError(path, 2, "no records")
    return RecordSet(channel, np.array(theta), np.array(x))


def write_grid(path, grid: WignerGrid) -> None:
    lines = [GRID_HEADER]
    for i, xv in enumerate(grid.x):
        for j, pv in enumerate(grid.p):
            lines.append(f"{fmt(xv)},{fmt(pv)},{fmt(grid.values[i, j])}")
    _write_lines(path, lines)


def read_grid(path) -> WignerGrid:
    path = Path(path)
    with open(path) as f:
        header = f.readline().rstrip("\n")
        if header != GRID_HEADER:
            raise FileFormatError(path, 1, f"expected header {GRID_HEADER!r}, got {header!r}")
        rows = []
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError:
                raise FileFormatError(path, lineno, f"malformed row {line.strip()!r}") from None
            if len(rows[-1]) != 3:
                raise FileFormatError(path, lineno, "expected 3 fields")
    data = np.array(rows)
    xs = np.unique(data[:, 0])
    ps = np.unique(data[:, 1])
    if len(data) != len(xs) * len(ps):
        raise FileFormatError(path, len(data) + 1, "grid is not rectangular")
    return WignerGrid(xs, ps, data[:, 2].reshape(len(xs), len(ps)))


def write_keyvalue(path, values: dict) -> None:
    _write_lines(path, [f"{k}={fmt(values[k])}" for k in sorted(values)])


def read_keyvalue(path) -> dict[str, str]:
    """Parse key=value lines; blank lines and '#' comments are skipped."""
    path = Path(path)
    out = {}
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FileFormatError(path, lineno, f"expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise FileFormatError(path, lineno, "empty key")
            out[key] = value
    return out


def write_diagonal(path, diag) -> None:
    lines = ["n,rho_nn"] + [f"{n},{fmt(v)}" for n, v in enumerate(diag)]
    _write_lines(path, lines)


def read_diagonal(path) -> np.ndarray:
    path = Path(path)
    with open(path) as f:
        header = f.readline().strip()
        if header != "n,rho_nn":
            raise FileFormatError(path, 1, f"unexpected header {header!r}")
        vals = []
        for lineno, line in enumerate(f, start=2):
            if not line.strip():
                continue
            n, v = line.strip().split(",")
            if int(n) != len(vals):
                raise FileFormatError(path, lineno, "photon numbers out of order")
            vals.append(float(v))
    return np.array(vals)
