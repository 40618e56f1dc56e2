"""
Synchronous particle swarm optimizer over a bounded box.

The update is the inertia-weight form

    v <- w v + c1 r1 (p_best - x) + c2 r2 (g_best - x)
    x <- x + v

with fresh uniform r1, r2 per dimension. Positions leaving the box are clamped
and the velocity on the clamped axis is zeroed. A particle's personal best is
replaced only on strict improvement, and the global best is the argmin over the
personal bests, so the best-cost trace never increases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .mission import DomainError


class SwarmFault(RuntimeError):
    """The objective returned a non-finite cost."""

    def __init__(self, index: int, position: np.ndarray, cost):
        self.index = index
        self.position = np.array(position)
        self.cost = cost
        super().__init__(f"non-finite cost {cost!r} for particle {index} at {self.position.tolist()}")


@dataclass(frozen=True)
class SwarmConfig:
    """
    Parameters
    ----------
    n_particles : int
        Population size.
    n_iterations : int
        Number of evaluated generations, the initial one included.
    inertia : (float, float)
        Inertia weight, decayed linearly from the first value to the second.
    c1, c2 : float
        Cognitive and social acceleration coefficients.
    velocity_init : float
        Initial velocities are uniform on +/- this fraction of the box width.
    seed : int
    """

    n_particles: int = 80
    n_iterations: int = 100
    inertia: tuple[float, float] = (0.9, 0.4)
    c1: float = 1.5
    c2: float = 2.0
    velocity_init: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n_particles < 1 or self.n_iterations < 1:
            raise DomainError("n_particles and n_iterations must be >= 1")
        if self.c1 < 0 or self.c2 < 0:
            raise DomainError("acceleration coefficients must be non-negative")

    def inertia_at(self, iteration: int) -> float:
        """Inertia used for the update producing generation ``iteration`` (1-based)."""
        w0, w1 = self.inertia
        if self.n_iterations <= 2:
            return w0
        return w0 + (w1 - w0) * (iteration - 1) / (self.n_iterations - 2)


@dataclass
class Particle:
    position: np.ndarray
    velocity: np.ndarray
    best_position: np.ndarray
    best_cost: float = np.inf


class SwarmState(NamedTuple):
    iteration: int
    positions: np.ndarray
    velocities: np.ndarray
    costs: np.ndarray
    best_positions: np.ndarray
    best_costs: np.ndarray
    g_best: np.ndarray
    g_best_cost: float


@dataclass
class SwarmResult:
    g_best: np.ndarray
    g_best_cost: float
    trace: np.ndarray
    positions: np.ndarray = field(repr=False)
    n_evaluations: int = 0


def velocity_update(p: Particle, g_best, inertia: float, c1: float, c2: float, rng) -> np.ndarray:
    """New velocity of one particle; ``rng`` only needs a ``random(size)`` method."""
    x = np.asarray(p.position, dtype=float)
    g_best = np.asarray(g_best, dtype=float)
    if not (x.shape == np.shape(p.velocity) == np.shape(p.best_position) == g_best.shape):
        raise DomainError("particle, personal best and global best dimensions differ")
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    return inertia * p.velocity + c1 * r1 * (p.best_position - x) + c2 * r2 * (g_best - x)


def _evaluate(cost, X, vectorized):
    if vectorized:
        c = np.asarray(cost(X), dtype=float).reshape(len(X))
    else:
        c = np.array([float(cost(x)) for x in X])
    bad = np.flatnonzero(~np.isfinite(c))
    if bad.size:
        k = int(bad[0])
        raise SwarmFault(k, X[k], c[k])
    return c


def optimize(cost: Callable, bounds, cfg: SwarmConfig = SwarmConfig(), *,
             vectorized: bool = False, callback: Callable[[SwarmState], None] | None = None) -> SwarmResult:
    """
    Minimize ``cost`` over the box ``bounds = (lower, upper)``.

    Parameters
    ----------
    cost : callable
        ``cost(x) -> float`` or, with ``vectorized=True``, ``cost(X) -> (P,)``
        for a ``(P, D)`` batch. Infeasibility must be expressed as a finite
        penalty.
    bounds : (array_like, array_like)
    cfg : SwarmConfig
    callback : callable, optional
        Called with a :class:`SwarmState` after every generation.
    """
    lower, upper = (np.asarray(b, dtype=float).ravel() for b in bounds)
    if lower.shape != upper.shape or np.any(upper < lower) or not np.all(np.isfinite([lower, upper])):
        raise DomainError("bounds must be finite with lower <= upper")
    P, D = cfg.n_particles, lower.size
    width = upper - lower
    rng = np.random.default_rng(cfg.seed)

    x = lower + rng.random((P, D)) * width
    v = (2.0 * rng.random((P, D)) - 1.0) * width * cfg.velocity_init
    c = _evaluate(cost, x, vectorized)
    pbest, pcost = x.copy(), c.copy()
    g = int(np.argmin(pcost))
    trace = [pcost[g]]
    if callback:
        callback(SwarmState(0, x, v, c, pbest, pcost, pbest[g], pcost[g]))

    for it in range(1, cfg.n_iterations):
        w = cfg.inertia_at(it)
        r1 = rng.random((P, D))
        r2 = rng.random((P, D))
        v = w * v + cfg.c1 * r1 * (pbest - x) + cfg.c2 * r2 * (pbest[g] - x)
        x = x + v
        out = (x < lower) | (x > upper)
        if out.any():
            x = np.clip(x, lower, upper)
            v[out] = 0.0
        c = _evaluate(cost, x, vectorized)
        better = c < pcost
        pbest[better] = x[better]
        pcost[better] = c[better]
        g = int(np.argmin(pcost))
        trace.append(pcost[g])
        if callback:
            callback(SwarmState(it, x, v, c, pbest, pcost, pbest[g], pcost[g]))

    return SwarmResult(pbest[g].copy(), float(pcost[g]), np.array(trace), x, P * cfg.n_iterations)
