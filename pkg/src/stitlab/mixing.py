"""Closed-form joint-missing machinery and the decay-rate experiment.

For connected bodies the joint missing probability restricted to the event
"the first line dividing the joint hull separates the two bodies" has an
exact closed form; its complement is controlled by the probability that the
hull is never divided. The sweep translates one body away from the other,
tabulates the closed forms against the product of the marginals, optionally
spot-checks them by Monte Carlo, and fits the decay exponent of the
covariance ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .capacity import Estimate, capacity_growth_bound, default_window, mc_joint, missing_probability
from .geometry import (
    CompactSet,
    ConvexPolygon,
    Direction,
    convex_hull,
    hull_of,
    piece_distance,
    translate,
    translate_set,
)
from .measure import DirectionalMeasure, hit_mass, separating_mass, separation_rate
from .stit import mix_seed

Body = ConvexPolygon | CompactSet


def _connected(body: Body) -> bool:
    return isinstance(body, ConvexPolygon) or body.connected


def _joint_hull(body_a: Body, body_b: Body) -> ConvexPolygon:
    return convex_hull(list(hull_of(body_a).vertices) + list(hull_of(body_b).vertices))


def translate_body(body: Body, t: tuple[float, float]) -> Body:
    if isinstance(body, ConvexPolygon):
        return translate(body, t)
    return translate_set(body, t)


def _expm1_ratio(time: float, rate_gap: float) -> float:
    """(1 - exp(-t * d)) / d, with the small-argument series for stability."""
    x = time * rate_gap
    if abs(x) < 1e-6:
        return time * (1.0 - x / 2.0 + x * x / 6.0)
    return -math.expm1(-x) / rate_gap


def joint_missing_closed_form(
    body_a: Body, body_b: Body, time: float, measure: DirectionalMeasure
) -> float:
    """Joint missing probability on the first-split-separates event.

    Exact for connected bodies: separating mass times
    exp(-t (mass_a + mass_b)) times (1 - exp(-t d)) / d, where d is the hull
    mass minus the two body masses. Touching hulls give zero (no line
    separates them).
    """
    if not _connected(body_a) or not _connected(body_b):
        raise ValueError("closed form requires connected bodies")
    mass_a = hit_mass(measure, body_a)
    mass_b = hit_mass(measure, body_b)
    mass_hull = hit_mass(measure, _joint_hull(body_a, body_b))
    sep = separating_mass(measure, body_a, body_b)
    gap = mass_hull - mass_a - mass_b
    return sep * math.exp(-time * (mass_a + mass_b)) * _expm1_ratio(time, gap)


def closed_form_error_bound(
    body_a: Body, body_b: Body, time: float, measure: DirectionalMeasure
) -> float:
    """Bound on what the closed form omits: P(the joint hull is never divided)."""
    return math.exp(-time * hit_mass(measure, _joint_hull(body_a, body_b)))


def mixing_constant(
    body_a: Body, body_b: Body, time: float, measure: DirectionalMeasure
) -> float:
    """Motion-invariant constant in the covariance upper bound."""
    return (
        capacity_growth_bound(body_a, time, measure)
        + capacity_growth_bound(body_b, time, measure)
        + hit_mass(measure, hull_of(body_a))
        + hit_mass(measure, hull_of(body_b))
    )


@dataclass(frozen=True)
class MixingRow:
    """One sweep distance: closed forms, bound, and optional Monte Carlo."""

    h_norm: float
    direction: Direction
    zeta: float
    asymptote: float
    overlap: bool
    product_exact: float | None = None
    joint_gamma_exact: float | None = None
    ratio_minus_one: float | None = None
    gamma_complement_bound: float | None = None
    chi_bound: float | None = None
    joint_mc: Estimate | None = None


@dataclass(frozen=True)
class SweepConfig:
    """Translation sweep: body_b drifts along ``direction`` through ``distances``."""

    body_a: Body
    body_b: Body
    direction: Direction
    distances: tuple[float, ...]
    time: float
    measure: DirectionalMeasure
    seed: int = 0
    mc_n: int | None = None

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.distances, self.distances[1:])):
            raise ValueError("sweep distances must be strictly increasing")
        if self.time <= 0.0:
            raise ValueError("sweep time parameter must be positive")


def sweep(config: SweepConfig) -> list[MixingRow]:
    """Evaluate the closed forms (and optional Monte Carlo) over the sweep.

    Rows where the translated body overlaps the fixed one are flagged and
    carry no probabilities.
    """
    zeta = separation_rate(config.measure, config.direction)
    rows: list[MixingRow] = []
    for index, h in enumerate(config.distances):
        shift = (h * config.direction.x, h * config.direction.y)
        body_b = translate_body(config.body_b, shift)
        hull_a = hull_of(config.body_a)
        hull_b = hull_of(body_b)
        if piece_distance(hull_a, hull_b) <= 1e-9:
            rows.append(
                MixingRow(
                    h_norm=h,
                    direction=config.direction,
                    zeta=zeta,
                    asymptote=1.0 / (h * zeta),
                    overlap=True,
                )
            )
            continue
        product = missing_probability(config.body_a, config.time, config.measure) * (
            missing_probability(body_b, config.time, config.measure)
        )
        joint = joint_missing_closed_form(config.body_a, body_b, config.time, config.measure)
        mc = None
        if config.mc_n is not None:
            window = default_window(_joint_hull(config.body_a, body_b))
            mc = mc_joint(
                config.body_a,
                body_b,
                config.time,
                config.measure,
                config.mc_n,
                mix_seed(config.seed, index),
                window=window,
            )
        rows.append(
            MixingRow(
                h_norm=h,
                direction=config.direction,
                zeta=zeta,
                asymptote=1.0 / (h * zeta),
                overlap=False,
                product_exact=product,
                joint_gamma_exact=joint,
                ratio_minus_one=joint / product - 1.0,
                gamma_complement_bound=closed_form_error_bound(
                    config.body_a, body_b, config.time, config.measure
                ),
                chi_bound=mixing_constant(config.body_a, body_b, config.time, config.measure),
                joint_mc=mc,
            )
        )
    return rows


def fit_decay_exponent(rows: list[MixingRow]) -> tuple[float, float, float]:
    """Least-squares slope of log |ratio - 1| against log h on the far half.

    Uses rows at or beyond the median distance whose ratio is available and
    non-zero. Returns (slope, intercept, root-mean-square residual).
    """
    usable = [
        r
        for r in rows
        if not r.overlap and r.ratio_minus_one is not None and r.ratio_minus_one != 0.0
    ]
    if len(usable) < 2:
        raise ValueError("need at least two usable rows to fit a decay exponent")
    median_h = float(np.median([r.h_norm for r in usable]))
    tail = [r for r in usable if r.h_norm >= median_h]
    x = np.log([r.h_norm for r in tail])
    y = np.log([abs(r.ratio_minus_one) for r in tail])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), residual


SWEEP_CSV_HEADER = (
    "h_norm,zeta,product_exact,joint_gamma_exact,ratio_minus_one,"
    "asymptote,gamma_complement_bound,joint_mc_mean,joint_mc_stderr,chi_bound"
)


def sweep_to_csv(rows: list[MixingRow]) -> str:
    """Render sweep rows in the fixed column layout, full double precision."""

    def cell(value: float | None) -> str:
        return "" if value is None else repr(value)

    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        mc_mean = r.joint_mc.mean if r.joint_mc is not None else None
        mc_stderr = r.joint_mc.stderr if r.joint_mc is not None else None
        lines.append(
            ",".join(
                [
                    repr(r.h_norm),
                    repr(r.zeta),
                    cell(r.product_exact),
                    cell(r.joint_gamma_exact),
                    cell(r.ratio_minus_one),
                    repr(r.asymptote),
                    cell(r.gamma_complement_bound),
                    cell(mc_mean),
                    cell(mc_stderr),
                    cell(r.chi_bound),
                ]
            )
        )
    return "\n".join(lines) + "\n"
