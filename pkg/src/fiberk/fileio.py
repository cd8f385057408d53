"""Plain-text fiber files and K-function CSV serialization.

Fiber file layout (LF line endings, '.' decimal separator):

    fiberset v1 <n_fibers>
    fiber <id> <n_points>
    x y z
    ...

K CSV layout: header ``t,s,k`` then one row per grid cell in t-major order,
values at 17 significant digits.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .fiber_core import Fiber
from .kfunction import KResult

__all__ = ["FiberFileError", "read_fibers", "write_fibers", "write_kcsv", "read_kcsv"]

_HEADER_MAGIC = "fiberset"
_VERSION = "v1"


class FiberFileError(ValueError):
    """Malformed fiber file; the message cites the offending line number."""


def _fmt(x: float) -> str:
    return repr(float(x))


def _atomic_write(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fiberk-tmp-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_fibers(fibers: list[Fiber], path) -> None:
    """Write a fiber file; byte-deterministic for identical input."""
    lines = [f"{_HEADER_MAGIC} {_VERSION} {len(fibers)}"]
    for f in fibers:
        if any(ch.isspace() for ch in f.id):
            raise ValueError(f"fiber id {f.id!r} contains whitespace")
        lines.append(f"fiber {f.id} {len(f.points)}")
        for x, y, z in f.points:
            lines.append(f"{_fmt(x)} {_fmt(y)} {_fmt(z)}")
    try:
        _atomic_write(path, "\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write fiber file {path}: {exc}") from exc


def read_fibers(path) -> list[Fiber]:
    """Parse a fiber file, reporting 1-based line numbers on error."""
    with open(path, "r", newline=None) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FiberFileError(f"{path}:1: missing header")
    header = lines[0].split()
    if len(header) != 3 or header[0] != _HEADER_MAGIC or header[1] != _VERSION:
        raise FiberFileError(f"{path}:1: malformed header {lines[0]!r}")
    try:
        n_fibers = int(header[2])
    except ValueError:
        raise FiberFileError(f"{path}:1: bad fiber count {header[2]!r}") from None
    fibers: list[Fiber] = []
    lineno = 1
    for _ in range(n_fibers):
        lineno += 1
        if lineno > len(lines):
            raise FiberFileError(f"{path}:{lineno}: expected 'fiber' record, got end of file")
        parts = lines[lineno - 1].split()
        if len(parts) != 3 or parts[0] != "fiber":
            raise FiberFileError(
                f"{path}:{lineno}: expected 'fiber <id> <n_points>', got {lines[lineno - 1]!r}"
            )
        fid = parts[1]
        try:
            n_points = int(parts[2])
        except ValueError:
            raise FiberFileError(f"{path}:{lineno}: bad point count {parts[2]!r}") from None
        pts = np.empty((n_points, 3))
        for k in range(n_points):
            lineno += 1
            if lineno > len(lines):
                raise FiberFileError(f"{path}:{lineno}: expected coordinate line, got end of file")
            coords = lines[lineno - 1].split()
            if len(coords) != 3:
                raise FiberFileError(
                    f"{path}:{lineno}: expected 3 coordinates, got {lines[lineno - 1]!r}"
                )
            try:
                pts[k] = [float(c) for c in coords]
            except ValueError:
                raise FiberFileError(
                    f"{path}:{lineno}: unparseable coordinate in {lines[lineno - 1]!r}"
                ) from None
            if not np.all(np.isfinite(pts[k])):
                raise FiberFileError(f"{path}:{lineno}: non-finite coordinate")
        try:
            fibers.append(Fiber(fid, pts))
        except ValueError as exc:
            raise FiberFileError(f"{path}:{lineno}: invalid fiber {fid!r}: {exc}") from None
    if lineno != len(lines):
        raise FiberFileError(f"{path}:{lineno + 1}: trailing content after {n_fibers} fibers")
    return fibers


def write_kcsv(result: KResult, path) -> None:
    """Write the K matrix as CSV rows (t, s, k) in t-major order."""
    rows = ["t,s,k"]
    for i, t in enumerate(result.t_grid):
        for j, s in enumerate(result.s_grid):
            rows.append(f"{t:.17g},{s:.17g},{result.k[i, j]:.17g}")
    try:
        _atomic_write(path, "\n".join(rows) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write K CSV {path}: {exc}") from exc


def read_kcsv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reconstruct (t_grid, s_grid, k matrix) from a K CSV file."""
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "t,s,k":
        raise ValueError(f"{path}: missing 't,s,k' header")
    ts, ss, ks = [], [], []
    for line in lines[1:]:
        t, s, k = (float(v) for v in line.split(","))
        ts.append(t)
        ss.append(s)
        ks.append(k)
    t_grid = np.unique(ts)
    s_grid = np.unique(ss)
    if len(ts) != len(t_grid) * len(s_grid):
        raise ValueError(f"{path}: row count does not match grid")
    k = np.asarray(ks).reshape(len(t_grid), len(s_grid))
    return t_grid, s_grid, k
