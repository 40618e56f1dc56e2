"""
Spherical obstacles of three kinds and their stochastic evolution.

* ``static``: never changes.
* ``static_uncertain``: radius redrawn every step from N(base_radius, sigma^2),
  independently of the previous value.
* ``moving_uncertain``: center drifts with a random per-axis sign and speed; the
  radius follows a 3-state linear recurrence driven by the current-velocity
  uncertainty ``u_rc = |N(0, 0.3)|``.

Fields are value objects. Stepping never mutates; randomness for obstacle ``i``
at step ``k`` is derived from ``(rng_seed, k, i)``, so a field's state depends
only on its seed and step count, and each obstacle's track is independent of
the others.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .mission import DomainError

CURRENT_SIGMA = 0.3


class ObstacleKind(str, Enum):
    STATIC = "static"
    STATIC_UNCERTAIN = "static_uncertain"
    MOVING_UNCERTAIN = "moving_uncertain"


KINDS = tuple(ObstacleKind)


@dataclass(frozen=True)
class Obstacle:
    id: int
    kind: ObstacleKind
    center: tuple[float, float, float]
    radius: float
    base_radius: float
    sigma: float
    # radius-recurrence state (radius, aux1, aux2); only moving obstacles use aux
    aux: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class ObstacleField:
    obstacles: tuple[Obstacle, ...]
    rng_seed: int
    step_count: int = 0

    def __len__(self):
        return len(self.obstacles)

    @property
    def centers(self) -> np.ndarray:
        return np.array([o.center for o in self.obstacles], dtype=float).reshape(-1, 3)

    @property
    def radii(self) -> np.ndarray:
        return np.array([o.radius for o in self.obstacles], dtype=float)


def segment_box(start, target, inflate: float = 100.0) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box spanned by two waypoints, grown by ``inflate`` on every side."""
    start = np.asarray(start, dtype=float)
    target = np.asarray(target, dtype=float)
    return np.minimum(start, target) - inflate, np.maximum(start, target) + inflate


def _counts(counts) -> dict[ObstacleKind, int]:
    if isinstance(counts, Mapping):
        out = {ObstacleKind(k): int(v) for k, v in counts.items()}
    else:
        out = dict(zip(KINDS, (int(c) for c in counts)))
    for k in KINDS:
        out.setdefault(k, 0)
        if out[k] < 0:
            raise DomainError(f"negative obstacle count for {k.value}")
    return out


def spawn_field(counts, bounds, seed: int, *, radius_range=(0.0, 100.0),
                sigma: Mapping | None = None, keepout: Sequence | None = None,
                keepout_margin: float = 0.0, keepout_steps: tuple[float, int] | None = None,
                max_tries: int = 1000) -> ObstacleField:
    """
    Place obstacles uniformly in a box.

    Parameters
    ----------
    counts : mapping kind -> int, or (static, static_uncertain, moving_uncertain)
    bounds : (lower, upper)
        Corners of the placement box, see :func:`segment_box`.
    seed : int
        Seed of the placement draw; also becomes the field's ``rng_seed``.
    radius_range : (float, float)
        Radii are uniform on this interval.
    sigma : mapping kind -> float or None, optional
        Uncertainty scale per kind. A missing or None entry means
        ``sqrt(radius)`` (variance comparable to the radius).
    keepout : sequence of points, optional
        Obstacles whose sphere would contain one of these points (grown by
        ``keepout_margin``) are redrawn.
    keepout_steps : (dt, n_steps), optional
        Also redraw obstacles whose own track would cover a keep-out point at
        any of the first ``n_steps`` steps of ``dt`` seconds.
    """
    lo, hi = (np.asarray(b, dtype=float) for b in bounds)
    if lo.shape != (3,) or hi.shape != (3,) or np.any(hi < lo) or not np.all(np.isfinite([lo, hi])):
        raise DomainError("obstacle bounds must be a non-empty finite 3-D box")
    counts = _counts(counts)
    sigma = dict(sigma or {})
    keep = np.asarray(keepout, dtype=float).reshape(-1, 3) if keepout is not None else np.empty((0, 3))
    rng = np.random.default_rng(seed)

    obstacles = []
    for kind in KINDS:
        for _ in range(counts[kind]):
            s = sigma.get(kind, sigma.get(kind.value))
            for _ in range(max_tries):
                c = lo + rng.random(3) * (hi - lo)
                r = float(rng.uniform(*radius_range))
                ob = Obstacle(len(obstacles), kind, tuple(c), r, r, math.sqrt(r) if s is None else float(s))
                if not len(keep):
                    break
                if np.all(np.linalg.norm(keep - c, axis=1) > r + keepout_margin) and (
                        keepout_steps is None
                        or _stays_clear(ob, int(seed), keep, keepout_margin, *keepout_steps)):
                    break
            else:
                raise DomainError("could not place obstacle clear of the keep-out points")
            obstacles.append(ob)
    return ObstacleField(tuple(obstacles), int(seed), 0)


def drift_displacement(rng: np.random.Generator, sigma: float, dt: float) -> np.ndarray:
    """
    One step of moving-obstacle drift.

    Per axis: a fair random sign times a speed uniform on [0, sigma] (m/s),
    times ``dt``.
    """
    sign = np.where(rng.random(3) < 0.5, -1.0, 1.0)
    return sign * rng.uniform(0.0, sigma, size=3) * dt


def radius_recurrence(state, u_rc: float, noise: float) -> np.ndarray:
    """Advance the (radius, aux1, aux2) state by one step."""
    b1 = np.array([[1.0, u_rc, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    b2 = np.array([0.0, 1.0, 1.0])
    b3 = np.array([0.0, 0.0, u_rc])
    return b1 @ np.asarray(state, dtype=float) + b2 * noise + b3


def _step_rng(seed: int, step: int, obstacle_id: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, step, obstacle_id]))


def step_obstacle(ob: Obstacle, rng: np.random.Generator, dt: float, u_rc: float | None = None) -> Obstacle:
    if ob.kind is ObstacleKind.STATIC:
        return ob
    if ob.kind is ObstacleKind.STATIC_UNCERTAIN:
        r = rng.normal(ob.base_radius, ob.sigma) if ob.sigma > 0 else ob.base_radius
        return replace(ob, radius=max(float(r), 0.0))
    u = abs(rng.normal(0.0, CURRENT_SIGMA)) if u_rc is None else float(u_rc)
    center = np.asarray(ob.center) + drift_displacement(rng, ob.sigma, dt)
    noise = rng.normal(0.0, ob.sigma) if ob.sigma > 0 else 0.0
    state = radius_recurrence((ob.radius, *ob.aux), u, noise)
    return replace(ob, center=tuple(center), radius=max(float(state[0]), 0.0),
                   aux=(float(state[1]), float(state[2])))


def step_field(field: ObstacleField, dt: float, *, u_rc: float | None = None) -> ObstacleField:
    """
    Advance every obstacle by one time step of ``dt`` seconds.

    ``u_rc`` overrides the current-velocity uncertainty draw (one value per
    moving obstacle per step otherwise).
    """
    if not dt > 0:
        raise DomainError("dt must be positive")
    k = field.step_count + 1
    out = tuple(ob if ob.kind is ObstacleKind.STATIC
                else step_obstacle(ob, _step_rng(field.rng_seed, k, ob.id), dt, u_rc)
                for ob in field.obstacles)
    return ObstacleField(out, field.rng_seed, k)


def _stays_clear(ob: Obstacle, seed: int, keep: np.ndarray, margin: float, dt: float, n_steps: int) -> bool:
    for k in range(1, n_steps):
        if ob.kind is ObstacleKind.STATIC:
            return True
        ob = step_obstacle(ob, _step_rng(seed, k, ob.id), dt)
        if np.any(np.linalg.norm(keep - np.asarray(ob.center), axis=1) <= ob.radius + margin):
            return False
    return True


def point_clearance(p, field: ObstacleField, t_index: int | None = None):
    """
    Signed distance from ``p`` to the nearest obstacle surface.

    Returns ``(min_clearance, violating_ids)``; the clearance is ``inf`` for an
    empty field and ``violating_ids`` holds every obstacle with negative
    clearance.
    """
    if t_index is not None and t_index != field.step_count:
        raise DomainError(f"field is at step {field.step_count}, not {t_index}")
    if not field.obstacles:
        return math.inf, frozenset()
    d = np.linalg.norm(field.centers - np.asarray(p, dtype=float), axis=1) - field.radii
    return float(d.min()), frozenset(int(field.obstacles[k].id) for k in np.flatnonzero(d < 0))


@dataclass(frozen=True)
class ObstacleTimeline:
    """
    Obstacle centers and radii at steps ``0..K-1`` spaced ``dt`` seconds apart.

    Queries past the last step return the last state.
    """

    centers: np.ndarray  # (K, N, 3)
    radii: np.ndarray  # (K, N)
    dt: float
    kinds: tuple[ObstacleKind, ...] = ()

    @classmethod
    def from_field(cls, field: ObstacleField, dt: float, n_steps: int) -> "ObstacleTimeline":
        snaps = list(iter_steps(field, dt, n_steps))
        centers = np.stack([s.centers for s in snaps])
        radii = np.stack([s.radii for s in snaps])
        return cls(centers, radii, float(dt), tuple(o.kind for o in field.obstacles))

    @classmethod
    def static(cls, field: ObstacleField) -> "ObstacleTimeline":
        return cls(field.centers[None], field.radii[None], 1.0, tuple(o.kind for o in field.obstacles))

    @property
    def n_obstacles(self) -> int:
        return self.radii.shape[1]

    def index(self, t) -> np.ndarray:
        k = np.floor(np.asarray(t, dtype=float) / self.dt).astype(int)
        return np.clip(k, 0, len(self.radii) - 1)

    def rows(self):
        """Yield ``(t, id, kind, x, y, z, r)`` rows for CSV export."""
        for k in range(len(self.radii)):
            for i in range(self.n_obstacles):
                x, y, z = self.centers[k, i]
                kind = self.kinds[i].value if self.kinds else ""
                yield (k * self.dt, i, kind, x, y, z, self.radii[k, i])


def iter_steps(field: ObstacleField, dt: float, n_steps: int):
    """Yield ``n_steps`` successive snapshots starting with ``field`` itself."""
    for _ in range(n_steps):
        yield field
        field = step_field(field, dt)


@dataclass(frozen=True)
class FieldSpec:
    """Per-segment obstacle recipe: counts per kind placed around the segment chord."""

    counts: tuple[int, int, int] = (0, 0, 0)
    radius_range: tuple[float, float] = (0.0, 100.0)
    # None means sqrt(radius)
    sigma_static_uncertain: float | None = None
    sigma_moving: float | None = 0.5
    keepout_margin: float = 10.0

    def spawn(self, start, target, seed: int, horizon: tuple[float, int] | None = None) -> ObstacleField:
        """Spawn around the segment; ``horizon=(dt, n_steps)`` keeps endpoints clear over time too."""
        kinds = dict(zip(KINDS, self.counts))
        return spawn_field(
            kinds, segment_box(start, target, self.radius_range[1]), seed,
            radius_range=self.radius_range,
            sigma={ObstacleKind.STATIC_UNCERTAIN: self.sigma_static_uncertain,
                   ObstacleKind.MOVING_UNCERTAIN: self.sigma_moving},
            keepout=[start, target], keepout_margin=self.keepout_margin, keepout_steps=horizon,
        )
