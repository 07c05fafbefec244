"""Stationary line measures on the plane.

A translation-invariant measure on lines factorises as (Lebesgue on r >= 0)
x (finite directional measure nu on the unit circle). Here nu is a list of
atoms plus an optional isotropic component, which covers both anisotropic
models and the isotropic one while keeping every derived quantity in closed
form: hitting mass of a convex body, separation rate between points, its
certified lower bound over all directions, separating mass between two
bodies, and exact sampling of lines hitting a window.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .geometry import (
    CompactSet,
    ConvexPolygon,
    Direction,
    Hyperplane,
    convex_hull,
    hit_interval,
    hit_length,
    hull_of,
    perimeter,
)

TWO_PI = 2.0 * math.pi

# Directions closer than this (by cross product) count as parallel when
# checking that the measure spans the plane.
SPAN_EPS = 1e-9


class MeasureError(ValueError):
    """Raised for degenerate or invalid directional measures."""


@dataclass(frozen=True)
class DirectionalMeasure:
    """Directional measure: atoms on the circle plus an isotropic component.

    ``isotropic_mass`` is the total mass of the uniform part, spread over the
    whole circle.
    """

    atoms: tuple[tuple[Direction, float], ...]
    isotropic_mass: float = 0.0

    def __post_init__(self) -> None:
        for u, w in self.atoms:
            if not (w > 0.0) or not math.isfinite(w):
                raise MeasureError(f"atom mass must be positive, got {w}")
        if self.isotropic_mass < 0.0 or not math.isfinite(self.isotropic_mass):
            raise MeasureError("isotropic mass must be finite and >= 0")

    @property
    def total_mass(self) -> float:
        return self.isotropic_mass + sum(w for _, w in self.atoms)

    def to_json(self) -> dict:
        return {
            "isotropic_mass": self.isotropic_mass,
            "atoms": [{"angle_radians": u.angle, "mass": w} for u, w in self.atoms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> DirectionalMeasure:
        atoms = tuple(
            (Direction.from_angle(float(a["angle_radians"])), float(a["mass"]))
            for a in obj.get("atoms", [])
        )
        return cls(atoms=atoms, isotropic_mass=float(obj.get("isotropic_mass", 0.0)))


def isotropic_measure(total_mass: float = TWO_PI) -> DirectionalMeasure:
    """Uniform measure on the circle with the given total mass."""
    return DirectionalMeasure(atoms=(), isotropic_mass=total_mass)


def axis_measure(mass_per_atom: float = 0.5) -> DirectionalMeasure:
    """Atoms of equal mass on the four axis directions."""
    dirs = (Direction(1, 0), Direction(-1, 0), Direction(0, 1), Direction(0, -1))
    return DirectionalMeasure(atoms=tuple((u, mass_per_atom) for u in dirs))


def validate_measure(measure: DirectionalMeasure) -> None:
    """Check positivity and that supported directions span the plane.

    Raises MeasureError naming the failing clause; warns when the atom set is
    not antipodally balanced (such measures cannot place lines on both sides
    of the origin in the unbalanced directions).
    """
    if measure.total_mass <= 0.0:
        raise MeasureError("degenerate directional measure: total mass is zero")
    if measure.isotropic_mass == 0.0:
        spanning = False
        atoms = measure.atoms
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                if abs(atoms[i][0].cross(atoms[j][0])) > SPAN_EPS:
                    spanning = True
                    break
            if spanning:
                break
        if not spanning:
            raise MeasureError(
                "degenerate directional measure: all atom directions are parallel,"
                " supported normals do not span the plane"
            )
    for u, w in measure.atoms:
        paired = any(
            abs(u.x + v.x) <= 1e-12 and abs(u.y + v.y) <= 1e-12 and abs(w - w2) <= 1e-12
            for v, w2 in measure.atoms
        )
        if not paired:
            warnings.warn(
                "atom set is not antipodally balanced; lines with normal "
                f"({u.x:.6g}, {u.y:.6g}) occur on one side of the origin only",
                stacklevel=2,
            )
            break


@dataclass(frozen=True)
class MeasureReport:
    """Hitting mass of a body with its per-component breakdown."""

    lambda_hit: float
    atom_parts: tuple[float, ...]
    isotropic_part: float


def _clipped_length(verts, ux: float, uy: float) -> float:
    """Length of {r >= 0 : the line (r, u) meets the vertex hull}."""
    lo = hi = verts[0][0] * ux + verts[0][1] * uy
    for x, y in verts:
        p = x * ux + y * uy
        if p < lo:
            lo = p
        elif p > hi:
            hi = p
    return (hi if hi > 0.0 else 0.0) - (lo if lo > 0.0 else 0.0)


def hit_mass(measure: DirectionalMeasure, body: ConvexPolygon | CompactSet) -> float:
    """Measure of all lines hitting the (connected) body.

    Hitting a connected body and hitting its convex hull coincide. The
    isotropic part is exact: integrating the r-interval length over all
    directions gives the hull's perimeter.
    """
    hull = body if isinstance(body, ConvexPolygon) else hull_of(body)
    if hull is not body and not body.connected:
        raise MeasureError(
            "lambda_hit requires a connected set; use the Monte Carlo estimators"
        )
    verts = hull.vertices
    total = measure.isotropic_mass / TWO_PI * perimeter(hull)
    for u, w in measure.atoms:
        total += w * _clipped_length(verts, u.x, u.y)
    return total


def hit_mass_report(measure: DirectionalMeasure, body: ConvexPolygon | CompactSet) -> MeasureReport:
    """Hitting mass of a connected body, broken down per measure component."""
    if isinstance(body, CompactSet) and not body.connected:
        raise MeasureError(
            "lambda_hit requires a connected set; use the Monte Carlo estimators"
        )
    hull = hull_of(body)
    atom_parts = tuple(w * hit_length(hull, u) for u, w in measure.atoms)
    iso = measure.isotropic_mass / TWO_PI * perimeter(hull)
    return MeasureReport(sum(atom_parts) + iso, atom_parts, iso)


def separation_rate(measure: DirectionalMeasure, u: Direction) -> float:
    """Measure of lines separating the origin from the unit point along ``u``.

    Equals half the nu-average of |<u, v>|; the isotropic component
    contributes exactly isotropic_mass / pi.
    """
    atom = 0.5 * sum(w * abs(u.dot((v.x, v.y))) for v, w in measure.atoms)
    return atom + measure.isotropic_mass / math.pi


def separation_rate_grid(measure: DirectionalMeasure, angles: np.ndarray) -> np.ndarray:
    """Vectorised separation rate over an array of direction angles."""
    out = np.full(angles.shape, measure.isotropic_mass / math.pi)
    for v, w in measure.atoms:
        out += 0.5 * w * np.abs(np.cos(angles - v.angle))
    return out


GRID_POINTS = 8192


def min_separation_rate(measure: DirectionalMeasure) -> float:
    """Certified lower bound on the separation rate over every direction.

    The rate is an even function of the direction, so a grid over half the
    circle covers it. Grid minimum minus the Lipschitz slack (constant
    nu-total / 2 in the Euclidean direction distance) is guaranteed to be at
    or below the true minimum.
    """
    validate_measure(measure)
    angles = np.arange(GRID_POINTS) * (math.pi / GRID_POINTS)
    values = separation_rate_grid(measure, angles)
    spacing = math.pi / GRID_POINTS
    slack = (measure.total_mass / 2.0) * 2.0 * math.sin(spacing / 4.0)
    return float(values.min() - slack)


# ---------------------------------------------------------------------------
# Separating mass


def _positive_gap_length(lo: float, hi: float) -> float:
    """Length of (lo, hi) cut to r >= 0; zero when the gap is empty."""
    if hi <= lo:
        return 0.0
    return max(0.0, hi) - max(0.0, lo)


def _atom_separating_length(
    u: Direction, a: ConvexPolygon, b: ConvexPolygon
) -> float:
    """r-length of {r >= 0 : the line (r, u) strictly separates a and b}."""
    ia = hit_interval(a, u)
    ib = hit_interval(b, u)
    return _positive_gap_length(ia.hi, ib.lo) + _positive_gap_length(ib.hi, ia.lo)


def _minkowski_difference_hull(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon:
    """Hull of {p - q : p in a, q in b}; contains the origin iff hulls meet."""
    pts = [(p[0] - q[0], p[1] - q[1]) for p in a.vertices for q in b.vertices]
    return convex_hull(pts)


def _support_arcs(poly: ConvexPolygon) -> list[tuple[float, float, float, float]]:
    """Angular arcs on which each vertex realises the support maximum.

    Returns (vertex_x, vertex_y, arc_start, arc_end) tuples with
    arc_end > arc_start, covering one full turn in total.
    """
    verts = poly.vertices
    n = len(verts)
    if n == 1:
        x, y = verts[0]
        return [(x, y, 0.0, TWO_PI)]
    if n == 2:
        (x0, y0), (x1, y1) = verts
        phi = math.atan2(y1 - y0, x1 - x0)
        # v1 is active where <v1 - v0, u> > 0: the half circle around phi.
        return [
            (x1, y1, phi - math.pi / 2.0, phi + math.pi / 2.0),
            (x0, y0, phi + math.pi / 2.0, phi + 3.0 * math.pi / 2.0),
        ]
    normals = []
    for i in range(n):
        ex = verts[(i + 1) % n][0] - verts[i][0]
        ey = verts[(i + 1) % n][1] - verts[i][1]
        normals.append(math.atan2(-ex, ey))
    arcs = []
    for i in range(n):
        start = normals[i - 1]
        end = normals[i]
        while end <= start:
            end += TWO_PI
        arcs.append((verts[i][0], verts[i][1], start, end))
    return arcs


def _negative_cos_antiderivative(psi: float) -> float:
    """Antiderivative of max(0, -cos); increases by 2 per full turn."""
    turns = math.floor(psi / TWO_PI)
    frac = psi - turns * TWO_PI
    if frac <= math.pi / 2.0:
        g = 0.0
    elif frac <= 3.0 * math.pi / 2.0:
        g = 1.0 - math.sin(frac)
    else:
        g = 2.0
    return 2.0 * turns + g


def _integral_negative_support(poly: ConvexPolygon) -> float:
    """Exact integral over all directions of max(0, -h(u)) for a convex body."""
    total = 0.0
    for x, y, start, end in _support_arcs(poly):
        r = math.hypot(x, y)
        if r == 0.0:
            continue
        phi = math.atan2(y, x)
        total += r * (
            _negative_cos_antiderivative(end - phi)
            - _negative_cos_antiderivative(start - phi)
        )
    return total


def separating_mass(
    measure: DirectionalMeasure,
    a: ConvexPolygon | CompactSet,
    b: ConvexPolygon | CompactSet,
) -> float:
    """Measure of all lines strictly separating the two bodies.

    Zero when the hulls overlap (nothing separates). The isotropic part is
    integrated exactly: the signed gap along direction u is minus the support
    function of the Minkowski difference of the hulls, a piecewise sinusoid.
    """
    hull_a = hull_of(a)
    hull_b = hull_of(b)
    total = sum(w * _atom_separating_length(u, hull_a, hull_b) for u, w in measure.atoms)
    if measure.isotropic_mass > 0.0:
        diff = _minkowski_difference_hull(hull_a, hull_b)
        total += measure.isotropic_mass / TWO_PI * _integral_negative_support(diff)
    return total


# ---------------------------------------------------------------------------
# Sampling


class RandomStream(Protocol):
    """Anything with uniform draws: numpy Generators or the simulator streams."""

    def random(self) -> float: ...

    def uniform(self, lo: float, hi: float) -> float: ...


def _projection_bounds(verts, ux: float, uy: float) -> tuple[float, float]:
    lo = hi = verts[0][0] * ux + verts[0][1] * uy
    for x, y in verts:
        p = x * ux + y * uy
        if p < lo:
            lo = p
        elif p > hi:
            hi = p
    return lo, hi


def sample_hitting(
    measure: DirectionalMeasure, window: ConvexPolygon, rng: RandomStream
) -> Hyperplane:
    """Draw one line from the hitting measure of the window, normalised.

    Atom directions carry r uniform on their hit interval; the isotropic part
    uses rejection on the angle and then r uniform on the hit interval.
    """
    verts = window.vertices
    per = perimeter(window)
    atom_weights = [w * hit_length(window, u) for u, w in measure.atoms]
    iso_weight = measure.isotropic_mass / TWO_PI * per
    total = sum(atom_weights) + iso_weight
    if total <= 0.0:
        raise MeasureError("degenerate window: no lines hit it under this measure")

    x = rng.random() * total
    for (u, _), w in zip(measure.atoms, atom_weights):
        if x < w:
            lo, hi = _projection_bounds(verts, u.x, u.y)
            r = rng.uniform(max(0.0, lo), max(0.0, hi))
            return Hyperplane(r, u)
        x -= w

    # Interval lengths never exceed the width, which is at most perimeter / 2,
    # so acceptance is exactly 1/pi for every convex window.
    bound = 0.5 * per
    while True:
        theta = rng.uniform(0.0, TWO_PI)
        ux = math.cos(theta)
        uy = math.sin(theta)
        lo, hi = _projection_bounds(verts, ux, uy)
        length = max(0.0, hi) - max(0.0, lo)
        if rng.random() * bound < length:
            r = rng.uniform(max(0.0, lo), max(0.0, hi))
            return Hyperplane(r, Direction(ux, uy))
