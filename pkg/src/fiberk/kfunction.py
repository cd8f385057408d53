"""Two-parameter empirical K-function over a (t, s) grid.

K(t, s) counts, per fiber with center in the observation window, the other
fibers whose center lies within distance t and whose centered shape lies
within currents distance s, normalized by the estimated center intensity.
With intensity estimated as N/|W| the estimator reduces to (qualifying
ordered pairs) / N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backends
from .currents import KernelParams, discretize
from .fiber_core import CenterFunctionKind, Fiber, center

__all__ = [
    "EmptyWindowError",
    "Window",
    "KConfig",
    "KResult",
    "estimate_intensity",
    "csr_reference",
    "pair_distances",
    "k_function",
    "inset_window",
    "saturation_bound",
]


class EmptyWindowError(RuntimeError):
    """No fiber center inside the observation window: estimator undefined."""


@dataclass(frozen=True, eq=False)
class Window:
    """Axis-aligned observation box. Membership is half-open: lower <= x < upper."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.ascontiguousarray(self.lower, dtype=np.float64)
        hi = np.ascontiguousarray(self.upper, dtype=np.float64)
        if lo.shape != (3,) or hi.shape != (3,):
            raise ValueError("window corners must be 3-vectors")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("window corners must be finite")
        if not np.all(lo < hi):
            raise ValueError("window must satisfy lower < upper componentwise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.all((pts >= self.lower) & (pts < self.upper), axis=1)

    def translate(self, v) -> "Window":
        v = np.asarray(v, dtype=np.float64)
        return Window(self.lower + v, self.upper + v)


def _validated_grid(grid, name: str) -> np.ndarray:
    g = np.ascontiguousarray(grid, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise ValueError(f"{name} must be a nonempty 1D sequence")
    if not np.all(g > 0):
        raise ValueError(f"{name} values must be > 0")
    if not np.all(np.diff(g) > 0):
        raise ValueError(f"{name} must be strictly ascending")
    g.setflags(write=False)
    return g


@dataclass(frozen=True, eq=False)
class KConfig:
    """Configuration of the K-function estimator."""

    kernel: KernelParams
    t_grid: np.ndarray
    s_grid: np.ndarray
    center_kind: CenterFunctionKind = CenterFunctionKind.MASS_CENTER
    orientation_invariant: bool = True
    spacing: float | None = None  # default sigma / 20

    def __post_init__(self):
        object.__setattr__(self, "t_grid", _validated_grid(self.t_grid, "t_grid"))
        object.__setattr__(self, "s_grid", _validated_grid(self.s_grid, "s_grid"))
        if self.spacing is not None and not self.spacing > 0:
            raise ValueError("spacing must be > 0")

    @property
    def resolved_spacing(self) -> float:
        return self.spacing if self.spacing is not None else self.kernel.sigma / 20.0


@dataclass(frozen=True, eq=False)
class KResult:
    """K matrix over the (t, s) grid with window bookkeeping."""

    t_grid: np.ndarray
    s_grid: np.ndarray
    k: np.ndarray
    n_in_window: int
    intensity_hat: float
    window: Window


def _centers(fibers: list[Fiber], kind: CenterFunctionKind) -> np.ndarray:
    if not fibers:
        return np.empty((0, 3))
    return np.array([center(f, kind).original_center for f in fibers])


def estimate_intensity(
    fibers: list[Fiber], window: Window, kind: CenterFunctionKind
) -> tuple[int, float]:
    """Count fiber centers in the (half-open) window and divide by volume."""
    centers = _centers(fibers, kind)
    n = int(window.contains(centers).sum()) if len(centers) else 0
    return n, n / window.volume


def csr_reference(t: float) -> float:
    """Spatial K-function of complete spatial randomness in 3D: the volume of
    the radius-t ball."""
    if not t > 0:
        raise ValueError("t must be > 0")
    return 4.0 / 3.0 * math.pi * t**3


def _pack_currents(fibers, kind, spacing):
    positions = []
    tangents = []
    offsets = np.zeros(len(fibers) + 1, dtype=np.int64)
    for i, f in enumerate(fibers):
        cur = discretize(center(f, kind).fiber, spacing)
        positions.append(cur.positions)
        tangents.append(cur.tangents)
        offsets[i + 1] = offsets[i] + len(cur)
    pos = np.ascontiguousarray(np.vstack(positions))
    tan = np.ascontiguousarray(np.vstack(tangents))
    return pos, tan, offsets


def _candidate_pairs(centers, in_window, rmax, bucketed):
    """Unordered index pairs (i < j) with at least one endpoint in the window
    and center distance <= rmax (rmax None: no distance bound).

    The bucketed path grids centers at cell size rmax and scans neighbor
    cells; it returns exactly the same pair set as the brute-force path.
    """
    n = len(centers)
    if n < 2:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    ia_list, ib_list = [], []
    if rmax is None or not bucketed:
        ii, jj = np.triu_indices(n, k=1)
        keep = in_window[ii] | in_window[jj]
        ii, jj = ii[keep], jj[keep]
        if rmax is not None:
            d = np.linalg.norm(centers[ii] - centers[jj], axis=1)
            sel = d <= rmax
            ii, jj = ii[sel], jj[sel]
        return ii.astype(np.int64), jj.astype(np.int64)
    cell = float(rmax)
    keys = np.floor(centers / cell).astype(np.int64)
    buckets: dict[tuple[int, int, int], list[int]] = {}
    for i, key in enumerate(map(tuple, keys)):
        buckets.setdefault(key, []).append(i)
    offsets3 = [
        (dx, dy, dz)
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        for dz in (-1, 0, 1)
    ]
    for key, members in buckets.items():
        for off in offsets3:
            other = (key[0] + off[0], key[1] + off[1], key[2] + off[2])
            if other < key or other not in buckets:
                continue
            cand = buckets[other]
            for i in members:
                for j in cand:
                    if other == key and j <= i:
                        continue
                    a, b = (i, j) if i < j else (j, i)
                    if not (in_window[a] or in_window[b]):
                        continue
                    ia_list.append(a)
                    ib_list.append(b)
    ia = np.asarray(ia_list, dtype=np.int64)
    ib = np.asarray(ib_list, dtype=np.int64)
    if len(ia):
        order = np.lexsort((ib, ia))
        ia, ib = ia[order], ib[order]
        d = np.linalg.norm(centers[ia] - centers[ib], axis=1)
        sel = d <= rmax
        ia, ib = ia[sel], ib[sel]
    return ia, ib


def _pair_arrays(fibers, config: KConfig, window: Window | None, rmax, bucketed):
    """Center distances and centered-shape distances for candidate unordered
    pairs. Returns (centers, in_window, ia, ib, center_dist, shape_dist)."""
    centers = _centers(fibers, config.center_kind)
    if window is None:
        in_window = np.ones(len(fibers), dtype=bool)
    else:
        in_window = window.contains(centers) if len(fibers) else np.zeros(0, bool)
    ia, ib = _candidate_pairs(centers, in_window, rmax, bucketed)
    if len(ia) == 0:
        return centers, in_window, ia, ib, np.empty(0), np.empty(0)
    pos, tan, offsets = _pack_currents(fibers, config.center_kind, config.resolved_spacing)
    p, sigma = config.kernel.p, config.kernel.sigma
    norms_sq = backends.self_norms_sq(pos, tan, offsets, p, sigma)
    ips = backends.pair_inner_products(pos, tan, offsets, ia, ib, p, sigma)
    if config.orientation_invariant:
        ips = np.abs(ips)
    d_sq = np.maximum(0.0, norms_sq[ia] + norms_sq[ib] - 2.0 * ips)
    shape_dist = np.sqrt(d_sq)
    center_dist = np.linalg.norm(centers[ia] - centers[ib], axis=1)
    return centers, in_window, ia, ib, center_dist, shape_dist


def pair_distances(
    fibers: list[Fiber],
    config: KConfig,
    window: Window | None,
    *,
    max_center_distance: float | None | str = "auto",
    bucketed: bool = True,
) -> list[tuple[float, float, tuple[str, str]]]:
    """Ordered pair records (center_distance, shape_distance, (id_a, id_b)).

    One record per ordered pair the K-function can count: the first fiber's
    center lies in the window and the center distance does not exceed
    ``max_center_distance`` (default: max of the configured t grid; pass
    ``None`` for no bound). Shape distances are computed once per unordered
    pair and mirrored.
    """
    if max_center_distance == "auto":
        rmax = float(config.t_grid[-1])
    else:
        rmax = max_center_distance
    _, in_window, ia, ib, cd, sd = _pair_arrays(fibers, config, window, rmax, bucketed)
    records = []
    for n in range(len(ia)):
        i, j = int(ia[n]), int(ib[n])
        if in_window[i]:
            records.append((float(cd[n]), float(sd[n]), (fibers[i].id, fibers[j].id)))
        if in_window[j]:
            records.append((float(cd[n]), float(sd[n]), (fibers[j].id, fibers[i].id)))
    records.sort(key=lambda r: r[2])
    return records


def k_function(
    fibers: list[Fiber],
    config: KConfig,
    window: Window,
    *,
    bucketed: bool = True,
) -> KResult:
    """Estimate the two-parameter K-function on the configured (t, s) grid.

    First-element fibers need a center in the window; neighbors range over
    the full input (no edge correction: supply an inset window).
    """
    centers = _centers(fibers, config.center_kind)
    n_in = int(window.contains(centers).sum()) if len(fibers) else 0
    if n_in == 0:
        raise EmptyWindowError("no fiber center inside the observation window")
    rmax = float(config.t_grid[-1])
    _, in_window, ia, ib, cd, sd = _pair_arrays(fibers, config, window, rmax, bucketed)
    t_grid, s_grid = config.t_grid, config.s_grid
    counts = np.zeros((len(t_grid) + 1, len(s_grid) + 1), dtype=np.int64)
    if len(ia):
        ti = np.searchsorted(t_grid, cd, side="left")
        si = np.searchsorted(s_grid, sd, side="left")
        weights = in_window[ia].astype(np.int64) + in_window[ib].astype(np.int64)
        np.add.at(counts, (ti, si), weights)
    cum = counts.cumsum(axis=0).cumsum(axis=1)[: len(t_grid), : len(s_grid)]
    k = cum.astype(np.float64) / n_in
    return KResult(
        t_grid=t_grid,
        s_grid=s_grid,
        k=k,
        n_in_window=n_in,
        intensity_hat=n_in / window.volume,
        window=window,
    )


def inset_window(
    fibers: list[Fiber], kind: CenterFunctionKind, fraction: float
) -> Window:
    """Shrink the bounding box of the fiber centers by ``fraction`` per side."""
    if not (0 <= fraction < 0.5):
        raise ValueError("inset fraction must be in [0, 0.5)")
    centers = _centers(fibers, kind)
    if len(centers) == 0:
        raise ValueError("cannot compute a window from an empty fiber list")
    lo = centers.min(axis=0)
    hi = centers.max(axis=0)
    ext = hi - lo
    if np.any(ext <= 0):
        raise ValueError("degenerate center bounding box")
    return Window(lo + fraction * ext, hi - fraction * ext)


def saturation_bound(fibers: list[Fiber], config: KConfig) -> float:
    """An s value at which the shape indicator always fires: the a.s. bound
    sqrt(2 (||a||^2 + ||b||^2)) maximized over pairs (top two norms)."""
    pos, tan, offsets = _pack_currents(fibers, config.center_kind, config.resolved_spacing)
    norms_sq = backends.self_norms_sq(pos, tan, offsets, config.kernel.p, config.kernel.sigma)
    if len(norms_sq) < 2:
        top = np.concatenate([norms_sq, norms_sq])
    else:
        top = np.sort(norms_sq)[-2:]
    return math.sqrt(2.0 * float(top.sum())) * (1.0 + 1e-9)
