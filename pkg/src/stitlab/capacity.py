"""Hitting/missing probability calculators.

Closed form for connected compacts (the missing probability is exponential
in the hitting mass), the Lipschitz-in-time bound on the capacity
functional, and seeded Monte Carlo estimators with Bernoulli standard
errors for everything else. Replications are coupled through per-replicate
seeds derived from (seed, index), so estimates are reproducible and
mergeable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

from .geometry import (
    CompactSet,
    ConvexPolygon,
    EPS,
    GeometryError,
    convex_hull,
    diameter,
    dilate,
    hull_of,
    interior_clearance,
)
from .measure import DirectionalMeasure, hit_mass
from .stit import SimulationParams, first_hit_time, hits_internal, mix_seed, simulate

Body = ConvexPolygon | CompactSet


@dataclass(frozen=True)
class Estimate:
    """Bernoulli Monte Carlo estimate."""

    mean: float
    stderr: float
    n: int
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.mean <= 1.0:
            raise ValueError("estimate mean must lie in [0, 1]")


def _bernoulli(successes: int, n: int, seed: int) -> Estimate:
    mean = successes / n
    return Estimate(mean, math.sqrt(mean * (1.0 - mean) / n), n, seed)


def pool(estimates: Sequence[Estimate]) -> Estimate:
    """Merge independent estimates by pooling counts (order-independent)."""
    n = sum(e.n for e in estimates)
    successes = round(sum(e.mean * e.n for e in estimates))
    return _bernoulli(successes, n, mix_seed(*sorted(e.seed for e in estimates)))


def missing_probability(body: Body, time: float, measure: DirectionalMeasure) -> float:
    """P(a connected compact is untouched at the given time): exp(-t * mass)."""
    if time < 0.0:
        raise ValueError("time must be >= 0")
    return math.exp(-time * hit_mass(measure, body))


def capacity_growth_bound(
    body: Body,
    time: float,
    measure: DirectionalMeasure,
    *,
    mc_n: int | None = None,
    mc_seed: int = 0,
    window: ConvexPolygon | None = None,
) -> float:
    """Lipschitz-in-time constant for the capacity functional.

    Lambda([conv K]) * (1 + t * Lambda([conv K])) * (missing probability at t).
    The last factor is analytic for connected bodies; for disconnected ones
    it falls back to a Monte Carlo mean (pass ``mc_n``), which is flagged.
    """
    hull = hull_of(body)
    lam = hit_mass(measure, hull)
    if isinstance(body, ConvexPolygon) or body.connected:
        untouched = missing_probability(body, time, measure)
    else:
        if mc_n is None:
            raise ValueError("disconnected body: pass mc_n for the missing-probability factor")
        warnings.warn("capacity growth bound uses a Monte Carlo missing probability")
        untouched = mc_missing(body, time, measure, mc_n, mc_seed, window=window).mean
    return lam * (1.0 + time * lam) * untouched


def default_window(body: Body, margin_fraction: float = 0.1) -> ConvexPolygon:
    """Simulation window: the convex hull dilated by 10% of its diameter."""
    hull = hull_of(body)
    d = diameter(hull)
    return dilate(hull, margin_fraction * d if d > 0.0 else 1.0)


def _check_interior(window: ConvexPolygon, body: Body) -> None:
    pieces = (body,) if isinstance(body, ConvexPolygon) else body.pieces
    for piece in pieces:
        for v in piece.vertices:
            if interior_clearance(window, v) <= EPS:
                raise GeometryError("query set must be interior to the window")


def mc_missing(
    body: Body,
    time: float,
    measure: DirectionalMeasure,
    n: int,
    seed: int,
    window: ConvexPolygon | None = None,
) -> Estimate:
    """Fraction of independent runs in which the body is untouched."""
    if n < 1:
        raise ValueError("need at least one replication")
    if window is None:
        window = default_window(body)
    _check_interior(window, body)
    misses = 0
    for i in range(n):
        tess = simulate(
            SimulationParams(window=window, time=time, measure=measure, seed=mix_seed(seed, i))
        )
        if not hits_internal(tess, body):
            misses += 1
    return _bernoulli(misses, n, seed)


def mc_joint(
    body_a: Body,
    body_b: Body,
    time: float,
    measure: DirectionalMeasure,
    n: int,
    seed: int,
    window: ConvexPolygon | None = None,
) -> Estimate:
    """Fraction of runs in which both bodies are untouched simultaneously."""
    if n < 1:
        raise ValueError("need at least one replication")
    if window is None:
        verts = list(hull_of(body_a).vertices) + list(hull_of(body_b).vertices)
        window = default_window(convex_hull(verts))
    _check_interior(window, body_a)
    _check_interior(window, body_b)
    both = 0
    for i in range(n):
        tess = simulate(
            SimulationParams(window=window, time=time, measure=measure, seed=mix_seed(seed, i))
        )
        if not hits_internal(tess, body_a) and not hits_internal(tess, body_b):
            both += 1
    return _bernoulli(both, n, seed)


@dataclass(frozen=True)
class IncrementReport:
    """Coupled estimate of the capacity increment over (a, a + t]."""

    time_a: float
    time_step: float
    increment: float
    stderr: float
    bound: float
    rate_ratio: float
    n: int
    seed: int

    @property
    def monotone(self) -> bool:
        return self.increment >= 0.0

    @property
    def within_bound(self) -> bool:
        return self.increment <= self.bound + 3.0 * self.stderr


def increment_check(
    body: Body,
    time_a: float,
    time_step: float,
    measure: DirectionalMeasure,
    n: int,
    seed: int,
    window: ConvexPolygon | None = None,
) -> IncrementReport:
    """Estimate T(a + t) - T(a) with coupled horizons.

    Each replicate simulates once to a + t; the per-cell streams make the
    time-a tessellation an exact prefix, so the first-hit time yields both
    indicators and the sampled increment is non-negative by construction.
    The bound column is t times the capacity growth bound at time a.
    """
    if time_step < 0.0:
        raise ValueError("time step must be >= 0")
    if window is None:
        window = default_window(body)
    _check_interior(window, body)
    hits_in_gap = 0
    for i in range(n):
        tess = simulate(
            SimulationParams(
                window=window, time=time_a + time_step, measure=measure, seed=mix_seed(seed, i)
            )
        )
        tau = first_hit_time(tess, body)
        if time_a < tau <= time_a + time_step:
            hits_in_gap += 1
    est = _bernoulli(hits_in_gap, n, seed)
    bound = time_step * capacity_growth_bound(body, time_a, measure)
    rate = est.mean / time_step if time_step > 0.0 else 0.0
    return IncrementReport(
        time_a=time_a,
        time_step=time_step,
        increment=est.mean,
        stderr=est.stderr,
        bound=bound,
        rate_ratio=rate,
        n=n,
        seed=seed,
    )
