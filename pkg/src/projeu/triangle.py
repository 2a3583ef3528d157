"""Utility rasters over the probability triangle of three-outcome lotteries."""

from __future__ import annotations

import csv
import io

import numpy as np

from projeu.exceptions import InvariantError
from projeu.utility import PayoffMatrix

__all__ = [
    "barycentric_grid",
    "triangle_raster",
    "raster_to_csv",
    "level_set_points",
    "line_deviation",
    "CSV_HEADER",
]

CSV_HEADER = ("p1", "p2", "p3", "utility")


def barycentric_grid(resolution: int) -> np.ndarray:
    """Points ``(i, j, r - i - j) / r`` of the 2-simplex, row-major in ``i`` then ``j``.

    There are ``(r + 1) * (r + 2) / 2`` rows.
    """
    r = int(resolution)
    if r < 1:
        raise InvariantError(f"resolution must be a positive integer, got {resolution}")
    pts = [(i / r, j / r, (r - i - j) / r) for i in range(r + 1) for j in range(r + 1 - i)]
    return np.array(pts)


def triangle_raster(u, resolution: int) -> np.ndarray:
    """Rows ``(p1, p2, p3, utility)`` over the barycentric grid.

    Each grid point is mapped to the lottery with amplitudes ``sqrt(p)`` and
    evaluated as ``x' U x``.
    """
    u = u if isinstance(u, PayoffMatrix) else PayoffMatrix(u)
    if u.n != 3:
        raise InvariantError(f"triangle raster needs a 3x3 payoff matrix, got {u.n}x{u.n}")
    if int(resolution) < 2:
        raise InvariantError(f"resolution must be at least 2, got {resolution}")
    p = barycentric_grid(resolution)
    x = np.sqrt(p)
    util = np.einsum("ki,ij,kj->k", x, u.u, x)
    return np.column_stack([p, util])


def raster_to_csv(raster: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in raster:
        writer.writerow([f"{v:.12g}" for v in row])
    return buf.getvalue()


def _resolution_of(rows: int) -> int:
    r = int(round((np.sqrt(8 * rows + 1) - 3) / 2))
    if (r + 1) * (r + 2) // 2 != rows:
        raise InvariantError(f"{rows} rows is not a triangular grid")
    return r


def level_set_points(raster: np.ndarray, level: float) -> np.ndarray:
    """Points ``(p1, p2)`` where the piecewise-linear raster crosses ``level``.

    Crossings are interpolated linearly along the edges of the triangular
    grid, which is exact when utility is affine in the probabilities.
    """
    r = _resolution_of(raster.shape[0])
    index = {}
    k = 0
    for i in range(r + 1):
        for j in range(r + 1 - i):
            index[(i, j)] = k
            k += 1
    f = raster[:, 3] - level
    pq = raster[:, :2]
    out = []
    for (i, j), a in index.items():
        if f[a] == 0.0:
            out.append(pq[a])
        for di, dj in ((1, 0), (0, 1), (1, -1)):
            b = index.get((i + di, j + dj))
            if b is None:
                continue
            if f[a] * f[b] < 0.0:
                t = f[a] / (f[a] - f[b])
                out.append(pq[a] + t * (pq[b] - pq[a]))
    if not out:
        return np.empty((0, 2))
    return np.unique(np.round(np.array(out), 15), axis=0)


def line_deviation(points: np.ndarray):
    """Best-fit line through 2-D points.

    Returns ``(max_distance, direction)``: the largest perpendicular distance
    of any point from the total-least-squares line and that line's unit
    direction.
    """
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 2:
        return 0.0, np.array([np.nan, np.nan])
    centered = points - points.mean(axis=0)
    _, _, vt = np.linalg.svd(centered)
    direction, normal = vt[0], vt[1]
    if direction[0] < 0 or (direction[0] == 0 and direction[1] < 0):
        direction = -direction
    return float(np.max(np.abs(centered @ normal))), direction
