"""Empirical density of orbit points on S^2.

Points are produced either by the alternating circle sweep (powers of
C'_x C'_y, then of C'_y C'_x, and so on) or by random generator words,
then binned on an equal-area latitude-band grid.

Random draws use numpy's PCG64 generator (``numpy.random.default_rng``),
so every report is reproducible from its seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import TooFewPoints
from .rotation import P1


class SphereGrid:
    """Equal-area partition of S^2 into latitude bands of near-square cells.

    Band cell counts follow cos(latitude) on a nominal grid of the requested
    resolution; band edges are then placed in z so that every cell has area
    exactly 4*pi / cells_total.
    """

    def __init__(self, resolution_deg: float = 5.0):
        if resolution_deg <= 0 or resolution_deg > 180:
            raise ValueError("resolution must lie in (0, 180]")
        self.resolution_deg = float(resolution_deg)
        self.band_count = max(1, round(180.0 / resolution_deg))
        step = math.pi / self.band_count
        target = math.radians(resolution_deg) ** 2
        counts = []
        for i in range(self.band_count):
            area = 2 * math.pi * (math.cos(i * step) - math.cos((i + 1) * step))
            counts.append(max(1, round(area / target)))
        self.cells_per_band = np.array(counts, dtype=np.int64)
        self.cells_total = int(self.cells_per_band.sum())
        cum = np.concatenate([[0], np.cumsum(self.cells_per_band)])
        self.band_offset = cum[:-1]
        # z edges from north pole (z = 1) down to the south pole (z = -1)
        self.z_edges = 1.0 - 2.0 * cum / self.cells_total

    @property
    def cell_area(self) -> float:
        return 4 * math.pi / self.cells_total

    def cell_ids(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        if len(pts) == 0:
            return np.zeros(0, dtype=np.int64)
        # Quantize so rounding noise cannot split a point lying on a cell edge
        # (e.g. -p1 at the azimuth seam); "+ 0.0" turns -0.0 into +0.0.
        pts = np.round(pts, 12) + 0.0
        z = np.clip(pts[:, 2], -1.0, 1.0)
        # z_edges is decreasing; band i covers z_edges[i+1] <= z < z_edges[i]
        band = np.searchsorted(-self.z_edges, -z, side="right") - 1
        band = np.clip(band, 0, self.band_count - 1)
        az = np.arctan2(pts[:, 1], pts[:, 0]) + math.pi
        n = self.cells_per_band[band]
        cell = np.minimum((az / (2 * math.pi) * n).astype(np.int64), n - 1)
        return self.band_offset[band] + cell


@dataclass
class CoverageReport:
    resolution_deg: float
    cells_total: int
    cells_hit: int
    fraction: float
    points_generated: int
    max_word_length: Optional[int]
    seed: Optional[int]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def coverage(
    points: np.ndarray,
    grid: SphereGrid,
    max_word_length: Optional[int] = None,
    seed: Optional[int] = None,
) -> CoverageReport:
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    hit = int(np.unique(grid.cell_ids(pts)).size)
    return CoverageReport(
        resolution_deg=grid.resolution_deg,
        cells_total=grid.cells_total,
        cells_hit=hit,
        fraction=hit / grid.cells_total,
        points_generated=len(pts),
        max_word_length=max_word_length,
        seed=seed,
    )


@dataclass
class WordOrbit:
    points: np.ndarray          # (N, 3)
    construction: str           # "WkIteration(k)" or "RandomWords"
    level_sizes: Sequence[int] = ()

    def __len__(self):
        return len(self.points)


def _powers(r: np.ndarray, count: int) -> np.ndarray:
    out = np.empty((count, 3, 3))
    acc = np.eye(3)
    for l in range(count):
        out[l] = acc
        acc = r @ acc
    return out


def _sweep(points: np.ndarray, pows: np.ndarray, keep: int, rng) -> np.ndarray:
    """{R^l p : l < s, p in points}, subsampled to at most ``keep`` by index."""
    n, s = len(points), len(pows)
    total = n * s
    if total <= keep:
        return np.einsum("lij,nj->lni", pows, points).reshape(-1, 3)
    idx = np.unique(rng.integers(0, total, size=keep))
    l, j = np.divmod(idx, n)
    return np.einsum("kij,kj->ki", pows[l], points[j])


def iterate_wk(
    pair,
    p0=P1,
    k_max: int = 1,
    samples_per_circle: int = 100,
    seed: int = 0,
) -> WordOrbit:
    """Alternating sweeps W_1, W'_1, ..., W_k, W'_k.

    W_1 takes powers of C'_x C'_y applied to p0; each later level applies
    powers of the other product to every retained point of the previous one.
    Each level keeps at most samples_per_circle**2 points.
    """
    if k_max < 1 or samples_per_circle < 1:
        raise ValueError("k_max and samples_per_circle must be >= 1")
    cx, cy = pair
    s = samples_per_circle
    forward = _powers(cx @ cy, s)
    backward = _powers(cy @ cx, s)
    rng = np.random.default_rng(seed)
    keep = s * s
    level = _sweep(np.asarray(p0, dtype=float)[None], forward, keep, rng)
    levels = [level]
    for step in range(2 * k_max - 1):
        pows = backward if step % 2 == 0 else forward
        level = _sweep(level, pows, keep, rng)
        levels.append(level)
    return WordOrbit(np.concatenate(levels), f"WkIteration({k_max})", [len(x) for x in levels])


def random_word_orbit(
    pair,
    max_length: int,
    count: int,
    seed: int,
    p0=P1,
) -> WordOrbit:
    """p0 together with ``count`` images under random words of length <= max_length."""
    rng = np.random.default_rng(seed)
    gens = np.stack([np.asarray(g, dtype=float) for g in pair])
    start = np.asarray(p0, dtype=float)
    pts = np.tile(start, (count, 1))
    lengths = rng.integers(0, max_length + 1, size=count)
    for step in range(max_length):
        active = lengths > step
        if not active.any():
            break
        choice = rng.integers(0, len(gens), size=count)
        moved = np.einsum("nij,nj->ni", gens[choice], pts)
        pts = np.where(active[:, None], moved, pts)
    return WordOrbit(np.vstack([start[None], pts]), "RandomWords")


@dataclass
class CircleFit:
    is_circle: bool
    normal: Optional[np.ndarray]
    residual: float

    def __str__(self):
        if self.is_circle:
            return f"Circle(normal={np.round(self.normal, 12).tolist()}, residual={self.residual:.3g})"
        return "NotCircle"


def circle_test(points: np.ndarray, tol: float = 1e-6) -> CircleFit:
    """Least-squares plane fit; a circle on S^2 is exactly a planar section."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) < 10:
        raise TooFewPoints(f"need at least 10 points, got {len(pts)}")
    centre = pts.mean(axis=0)
    spread = np.max(np.linalg.norm(pts - centre, axis=1))
    if spread < 1e-9:
        return CircleFit(False, None, 0.0)
    _, _, vt = np.linalg.svd(pts - centre)
    normal = vt[-1]
    residual = float(np.max(np.abs((pts - centre) @ normal)))
    if residual >= tol:
        return CircleFit(False, None, residual)
    for x in normal:
        if abs(x) > 1e-12:
            normal = normal if x > 0 else -normal
            break
    return CircleFit(True, normal, residual)
