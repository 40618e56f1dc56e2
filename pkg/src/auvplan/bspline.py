"""
Clamped uniform B-spline paths through a control polygon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .mission import DomainError


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.remainder(a, 2 * math.pi)
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class VehicleState:
    """Earth-fixed pose. Planning only reads the position."""

    x: float
    y: float
    z: float
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        for name in ("roll", "pitch", "yaw"):
            object.__setattr__(self, name, wrap_angle(getattr(self, name)))

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def clamped_knots(n: int, order: int) -> np.ndarray:
    """Clamped uniform knot vector on [0, 1] for ``n`` control points."""
    interior = np.linspace(0.0, 1.0, n - order + 2)[1:-1]
    return np.concatenate([np.zeros(order), interior, np.ones(order)])


@lru_cache(maxsize=64)
def _basis(n: int, order: int, m: int) -> np.ndarray:
    params = np.linspace(0.0, 1.0, m)
    return basis_matrix(params, n, order)


def basis_matrix(params, n: int, order: int) -> np.ndarray:
    """
    Cox-de Boor blending functions B_{i,K}(t) for every parameter.

    Returns an array of shape ``(len(params), n)`` whose rows sum to one.
    """
    if order < 2 or order > n:
        raise DomainError(f"spline order must satisfy 2 <= K <= n, got K={order}, n={n}")
    t = np.asarray(params, dtype=float)
    knots = clamped_knots(n, order)
    # order-1 basis: half-open spans, except t == 1 lands in the last non-empty span
    last = n - 1
    B = np.zeros((t.size, len(knots) - 1))
    for i in range(len(knots) - 1):
        B[:, i] = (knots[i] <= t) & (t < knots[i + 1])
    B[t >= knots[-1], :] = 0.0
    B[t >= knots[-1], last] = 1.0
    for k in range(2, order + 1):
        nb = len(knots) - k
        Bk = np.zeros((t.size, nb))
        for i in range(nb):
            d1 = knots[i + k - 1] - knots[i]
            d2 = knots[i + k] - knots[i + 1]
            if d1 > 0:
                Bk[:, i] += (t - knots[i]) / d1 * B[:, i]
            if d2 > 0:
                Bk[:, i] += (knots[i + k] - t) / d2 * B[:, i + 1]
        B = Bk
    B.setflags(write=False)
    return B


@dataclass(frozen=True, eq=False)
class ControlPolygon:
    """Control points with per-point, per-axis bounds; endpoints are the segment waypoints."""

    points: np.ndarray  # (n, 3)
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        lo = np.broadcast_to(np.asarray(self.lower, dtype=float), pts.shape)
        hi = np.broadcast_to(np.asarray(self.upper, dtype=float), pts.shape)
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 2:
            raise DomainError("control polygon needs at least two 3-D points")
        if np.any(pts < lo - 1e-9) or np.any(pts > hi + 1e-9):
            raise DomainError("control point outside its bounds")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def unbounded(cls, points) -> "ControlPolygon":
        pts = np.asarray(points, dtype=float)
        return cls(pts, np.full(pts.shape, -np.inf), np.full(pts.shape, np.inf))

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class PathCurve:
    control: ControlPolygon
    order: int
    params: np.ndarray  # (m,)
    samples: np.ndarray  # (m, 3)
    arc_length: float

    @property
    def cumulative_length(self) -> np.ndarray:
        gaps = np.linalg.norm(np.diff(self.samples, axis=0), axis=1)
        return np.concatenate([[0.0], np.cumsum(gaps)])

    def rows(self, v_auv: float | None = None):
        """Yield ``(t, x, y, z)`` rows; ``t`` is travel time when ``v_auv`` is given, else the parameter."""
        t = self.cumulative_length / v_auv if v_auv else self.params
        for tj, (x, y, z) in zip(t, self.samples):
            yield (float(tj), float(x), float(y), float(z))


def polyline_length(samples) -> float:
    """Sum of Euclidean gaps between consecutive samples."""
    s = np.asarray(samples, dtype=float)
    if len(s) < 2:
        raise DomainError("need at least two samples")
    return float(np.linalg.norm(np.diff(s, axis=0), axis=1).sum())


def sample_spline(control: ControlPolygon, order: int = 4, m_samples: int = 100) -> PathCurve:
    """Evaluate the B-spline of ``control`` at ``m_samples`` evenly spaced parameters."""
    if m_samples < 2:
        raise DomainError("m_samples must be at least 2")
    B = _basis(control.n, order, m_samples)
    samples = B @ control.points
    # clamped knots interpolate the endpoints; pin them against round-off
    samples[0] = control.points[0]
    samples[-1] = control.points[-1]
    return PathCurve(control, order, np.linspace(0.0, 1.0, m_samples), samples,
                     polyline_length(samples))


def sample_batch(points: np.ndarray, order: int = 4, m_samples: int = 100) -> np.ndarray:
    """Sample many control polygons at once: ``(P, n, 3) -> (P, m, 3)``."""
    B = _basis(points.shape[1], order, m_samples)
    return np.einsum("mn,pnd->pmd", B, points)


def corridor_bounds(start, target, n_points: int, lateral_fraction: float = 0.5,
                    depth: tuple[float, float] = (0.0, 100.0)):
    """
    Per-point search bounds around the straight chord.

    Interior point ``i`` may move ``lateral_fraction * chord / 2`` either way in
    x and y around its evenly spaced chord location, and anywhere within
    ``depth`` in z. Endpoints are pinned.
    """
    start = np.asarray(start, dtype=float)
    target = np.asarray(target, dtype=float)
    chord = np.linalg.norm(target - start)
    half = 0.5 * lateral_fraction * chord
    s = np.linspace(0.0, 1.0, n_points)[:, None]
    ref = start + s * (target - start)
    lower = ref.copy()
    upper = ref.copy()
    lower[1:-1, :2] -= half
    upper[1:-1, :2] += half
    zlo = min(depth[0], start[2], target[2])
    zhi = max(depth[1], start[2], target[2])
    lower[1:-1, 2] = zlo
    upper[1:-1, 2] = zhi
    return lower, upper


def random_control_polygon(start, target, bounds, rng: np.random.Generator) -> ControlPolygon:
    """Draw interior control points uniformly inside their bounds; pin the endpoints."""
    lower, upper = (np.asarray(b, dtype=float) for b in bounds)
    lower = lower.copy()
    upper = upper.copy()
    lower[0] = upper[0] = start
    lower[-1] = upper[-1] = target
    if np.any(upper < lower):
        raise DomainError("control-point bounds must satisfy lower <= upper")
    pts = lower + rng.random(lower.shape) * (upper - lower)
    pts[0] = start
    pts[-1] = target
    return ControlPolygon(pts, lower, upper)
