"""Event-driven simulator of the iteration-stable cell-division tessellation.

Each live cell carries an independent exponential clock with rate equal to
the measure of lines hitting it; when the clock fires the cell is divided by
a line drawn from its own normalised hitting measure, so both children are
non-empty. Per-cell randomness comes from counter-based streams keyed by
(seed, cell id), which makes runs deterministic, makes the time-a state an
exact prefix of any longer run with the same seed, and keeps nested or
restricted constructions independent of scheduling order.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace

from .geometry import (
    CompactSet,
    ConvexPolygon,
    EPS,
    GeometryError,
    Hyperplane,
    area,
    chord,
    clip,
    clip_segment_to_polygon,
    contains_point,
    interior_clearance,
    polygon_from_json,
    polygon_intersection,
    polygon_to_json,
    scale as scale_polygon,
    segment_hits_body,
)
from .measure import DirectionalMeasure, hit_mass, sample_hitting, validate_measure

# Hard cap on processed division events; misconfigured huge a * Lambda([W])
# aborts with a diagnostic instead of running away.
EVENT_CAP = 10_000_000

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(*parts: int) -> int:
    """Fold integers (of any size) into one 64-bit stream seed."""
    acc = 0x243F6A8885A308D3
    for p in parts:
        p = int(p)
        if p < 0:
            p = -p * 2 + 1
        while True:
            acc = _splitmix64(acc ^ (p & _MASK64))
            p >>= 64
            if p == 0:
                break
    return acc


class SplitStream:
    """Counter-based random stream: the n-th draw is a hash of (key, n).

    splitmix64 output sequence; statistically solid for Monte Carlo and
    trivially splittable by key, which keeps cell streams independent of
    scheduling order.
    """

    __slots__ = ("_state",)

    def __init__(self, key: int):
        self._state = key & _MASK64

    def _next(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self._next() >> 11) * (2.0**-53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def exponential(self, scale: float) -> float:
        return -scale * math.log1p(-self.random())


def cell_stream(seed: int, cell_id: int) -> SplitStream:
    """Random stream for one cell, keyed by (seed, cell id) only."""
    return SplitStream(mix_seed(seed, cell_id))


@dataclass(frozen=True)
class Cell:
    """One cell of the division process, identified by its binary-tree label."""

    id: int
    parent_id: int
    polygon: ConvexPolygon
    birth_time: float
    death_time: float
    splitting_hyperplane: Hyperplane | None = None


@dataclass(frozen=True, order=True)
class Edge:
    """Division chord clipped to the parent cell, with its creation time."""

    a: tuple[float, float]
    b: tuple[float, float]
    time: float


@dataclass(frozen=True)
class SimulationParams:
    window: ConvexPolygon
    time: float
    measure: DirectionalMeasure
    seed: int
    retain_lineage: bool = False

    def __post_init__(self) -> None:
        if self.time < 0.0 or not math.isfinite(self.time):
            raise ValueError("time parameter must be finite and >= 0")


@dataclass(frozen=True)
class Tessellation:
    """State of the division process in a window at a fixed time."""

    window: ConvexPolygon
    time: float
    cells: tuple[Cell, ...]
    internal_edges: tuple[Edge, ...]
    retained_lineage: bool = False

    @property
    def live_cells(self) -> tuple[Cell, ...]:
        return tuple(c for c in self.cells if c.death_time > self.time)


def simulate(params: SimulationParams, variant: str = "cell-rate") -> Tessellation:
    """Run the cell-division process in the window up to the time parameter.

    ``variant`` selects the production construction ("cell-rate": each cell
    dies at rate equal to its own hitting mass and is divided by a line drawn
    from its own hitting law) or the reference one ("window-tree": every cell
    carries the window's rate and a window-law line, which may miss the cell,
    in which case the cell survives under a new label). Both have the same
    law; the reference variant exists as a cross-check.
    """
    if variant not in ("cell-rate", "window-tree"):
        raise ValueError(f"unknown variant {variant!r}")
    window = params.window
    if len(window.vertices) < 3 or area(window) <= 0.0:
        raise GeometryError("simulation window must have positive area")
    validate_measure(params.measure)
    measure = params.measure
    horizon = params.time
    seed = params.seed

    window_rate = hit_mass(measure, window)

    polys: dict[int, ConvexPolygon] = {}
    births: dict[int, float] = {}
    deaths: dict[int, float] = {}
    parents: dict[int, int] = {}
    planes: dict[int, Hyperplane] = {}
    gens: dict[int, SplitStream] = {}
    heap: list[tuple[float, int]] = []
    edges: list[Edge] = []

    def spawn(cid: int, parent: int, poly: ConvexPolygon, birth: float) -> None:
        gen = cell_stream(seed, cid)
        rate = window_rate if variant == "window-tree" else hit_mass(measure, poly)
        death = birth + gen.exponential(1.0 / rate) if rate > 0.0 else math.inf
        polys[cid] = poly
        births[cid] = birth
        deaths[cid] = death
        parents[cid] = parent
        gens[cid] = gen
        heapq.heappush(heap, (death, cid))

    spawn(1, 0, window, 0.0)

    events = 0
    while heap and heap[0][0] <= horizon:
        death, cid = heapq.heappop(heap)
        events += 1
        if events > EVENT_CAP:
            raise RuntimeError(
                f"event cap {EVENT_CAP} exceeded at t={death:.6g}; "
                "a * Lambda([W]) is likely misconfigured"
            )
        poly = polys[cid]
        gen = gens.pop(cid)

        if variant == "window-tree":
            plane = sample_hitting(measure, window, gen)
            minus = clip(poly, plane, "minus")
            plus = clip(poly, plane, "plus")
            if minus is None or plus is None:
                # The window line missed this cell: it survives relabelled.
                child = 2 * cid if plus is None else 2 * cid + 1
                spawn(child, cid, poly, death)
                continue
        else:
            for _ in range(64):
                plane = sample_hitting(measure, poly, gen)
                minus = clip(poly, plane, "minus")
                plus = clip(poly, plane, "plus")
                if minus is not None and plus is not None:
                    break
            else:
                raise RuntimeError("could not draw a dividing line for a cell")

        planes[cid] = plane
        cut = chord(poly, plane)
        if cut is not None:
            edges.append(Edge(cut[0], cut[1], death))
        spawn(2 * cid, cid, minus, death)
        spawn(2 * cid + 1, cid, plus, death)

    gens.clear()
    keep = sorted(polys) if params.retain_lineage else sorted(
        cid for cid in polys if deaths[cid] > horizon
    )
    cells = tuple(
        Cell(
            id=cid,
            parent_id=parents[cid],
            polygon=polys[cid],
            birth_time=births[cid],
            death_time=deaths[cid],
            splitting_hyperplane=planes.get(cid),
        )
        for cid in keep
    )
    return Tessellation(
        window=window,
        time=horizon,
        cells=cells,
        internal_edges=tuple(edges),
        retained_lineage=params.retain_lineage,
    )


def restrict(tess: Tessellation, window: ConvexPolygon) -> Tessellation:
    """The tessellation induced on a sub-window (consistency restriction).

    Cells become their non-empty intersections with the sub-window; division
    chords are clipped to its interior (parts lying on the new boundary are
    dropped).
    """
    if len(window.vertices) < 3 or area(window) <= 0.0:
        raise GeometryError("restriction window must have positive area")
    if not all(contains_point(tess.window, v, EPS) for v in window.vertices):
        raise GeometryError("restriction window is not contained in the tessellation window")

    cells = []
    for cell in tess.live_cells:
        part = polygon_intersection(cell.polygon, window)
        if part is None or len(part.vertices) < 3:
            continue
        cells.append(replace(cell, polygon=part, splitting_hyperplane=None))

    edges = []
    for e in tess.internal_edges:
        seg = clip_segment_to_polygon(e.a, e.b, window)
        if seg is None:
            continue
        mid = ((seg[0][0] + seg[1][0]) / 2.0, (seg[0][1] + seg[1][1]) / 2.0)
        if interior_clearance(window, mid) > EPS:
            edges.append(Edge(seg[0], seg[1], e.time))

    return Tessellation(
        window=window,
        time=tess.time,
        cells=tuple(cells),
        internal_edges=tuple(edges),
    )


def nest(
    tess: Tessellation, extra_time: float, measure: DirectionalMeasure, seed: int
) -> Tessellation:
    """Divide every live cell by an independent fresh construction.

    Each live cell becomes the window of an independent run with the given
    time parameter; the union of the original chords and all nested ones is
    returned with time metadata advanced by ``extra_time``. Per-cell seeds
    derive from (seed, cell id) only.
    """
    cells: list[Cell] = []
    edges: list[Edge] = list(tess.internal_edges)
    next_id = 1
    for cell in sorted(tess.live_cells, key=lambda c: c.id):
        sub = simulate(
            SimulationParams(
                window=cell.polygon,
                time=extra_time,
                measure=measure,
                seed=mix_seed(seed, cell.id),
            )
        )
        for sc in sub.live_cells:
            cells.append(
                Cell(
                    id=next_id,
                    parent_id=0,
                    polygon=sc.polygon,
                    birth_time=tess.time + sc.birth_time,
                    death_time=tess.time + sc.death_time,
                )
            )
            next_id += 1
        for e in sub.internal_edges:
            edges.append(Edge(e.a, e.b, tess.time + e.time))
    return Tessellation(
        window=tess.window,
        time=tess.time + extra_time,
        cells=tuple(cells),
        internal_edges=tuple(edges),
    )


def rescale(tess: Tessellation, factor: float) -> Tessellation:
    """Scale all coordinates by a positive factor; time metadata unchanged."""
    if factor <= 0.0:
        raise GeometryError("rescale factor must be positive")

    def sp(p: tuple[float, float]) -> tuple[float, float]:
        return (factor * p[0], factor * p[1])

    cells = tuple(
        replace(c, polygon=scale_polygon(c.polygon, factor)) for c in tess.cells
    )
    edges = tuple(Edge(sp(e.a), sp(e.b), e.time) for e in tess.internal_edges)
    return Tessellation(
        window=scale_polygon(tess.window, factor),
        time=tess.time,
        cells=cells,
        internal_edges=edges,
        retained_lineage=tess.retained_lineage,
    )


def _require_interior(tess: Tessellation, body: ConvexPolygon | CompactSet) -> None:
    pieces = body.pieces if isinstance(body, CompactSet) else (body,)
    for piece in pieces:
        for v in piece.vertices:
            if interior_clearance(tess.window, v) <= EPS:
                raise GeometryError("query set must be interior to the window")


def first_hit_time(tess: Tessellation, body: ConvexPolygon | CompactSet) -> float:
    """Earliest division time whose chord meets the body; inf if none does.

    The body must lie in the window's interior: the window boundary is not
    part of the process.
    """
    _require_interior(tess, body)
    best = math.inf
    for e in tess.internal_edges:
        if e.time < best and segment_hits_body(e.a, e.b, body):
            best = e.time
    return best


def hits_internal(tess: Tessellation, body: ConvexPolygon | CompactSet) -> bool:
    """True iff some division chord meets the body (window boundary excluded)."""
    _require_interior(tess, body)
    return any(segment_hits_body(e.a, e.b, body) for e in tess.internal_edges)


# ---------------------------------------------------------------------------
# JSON form


def tessellation_to_json(tess: Tessellation) -> dict:
    return {
        "window": polygon_to_json(tess.window),
        "time": tess.time,
        "cells": [
            {
                "id": c.id,
                "parent": c.parent_id,
                "birth": c.birth_time,
                "death": c.death_time,
                "polygon": polygon_to_json(c.polygon),
            }
            for c in tess.cells
        ],
        "internal_edges": [
            {"a": [e.a[0], e.a[1]], "b": [e.b[0], e.b[1]], "time": e.time}
            for e in tess.internal_edges
        ],
    }


def tessellation_from_json(obj: dict) -> Tessellation:
    cells = tuple(
        Cell(
            id=int(c["id"]),
            parent_id=int(c["parent"]),
            polygon=polygon_from_json(c["polygon"]),
            birth_time=float(c["birth"]),
            death_time=float(c["death"]),
        )
        for c in obj["cells"]
    )
    edges = tuple(
        Edge(
            (float(e["a"][0]), float(e["a"][1])),
            (float(e["b"][0]), float(e["b"][1])),
            float(e["time"]),
        )
        for e in obj["internal_edges"]
    )
    return Tessellation(
        window=polygon_from_json(obj["window"]),
        time=float(obj["time"]),
        cells=cells,
        internal_edges=edges,
    )
