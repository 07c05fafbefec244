"""Named property suites behind the ``validate`` command.

The ``fast`` suite holds exact and deterministic checks (a few seconds); the
``mc`` suite holds the statistical cross-checks between the simulator and the
closed forms (a few minutes). Each check returns (ok, detail), and exceptions
count as failures, so the CLI can emit a machine-readable report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .capacity import capacity_growth_bound, increment_check, mc_missing, missing_probability
from .geometry import (
    CompactSet,
    ConvexPolygon,
    Direction,
    Hyperplane,
    area,
    box,
    clip,
    compact_from_json,
    compact_to_json,
    convex_hull,
    hit_interval,
    hits,
    polygon_from_json,
    polygon_to_json,
    separates,
    translate,
)
from .measure import (
    DirectionalMeasure,
    axis_measure,
    hit_mass,
    isotropic_measure,
    min_separation_rate,
    sample_hitting,
    separating_mass,
    separation_rate,
)
from .mixing import MixingRow, fit_decay_exponent, joint_missing_closed_form, sweep, SweepConfig
from .stit import SimulationParams, hits_internal, mix_seed, nest, restrict, simulate
from .svg import render_svg

ISO = isotropic_measure()
AXES = axis_measure()
E1 = Direction(1.0, 0.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _random_polygon(rng: np.random.Generator, scale: float = 1.0) -> ConvexPolygon:
    n = int(rng.integers(3, 9))
    pts = rng.uniform(-scale, scale, size=(n, 2))
    off = rng.uniform(-2.0, 2.0, size=2)
    return convex_hull([(float(x + off[0]), float(y + off[1])) for x, y in pts])


def _direction(rng: np.random.Generator) -> Direction:
    return Direction.from_angle(float(rng.uniform(0.0, 2.0 * math.pi)))


# ---------------------------------------------------------------------------
# fast suite


def check_clip_partition() -> tuple[bool, str]:
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(500):
        p = _random_polygon(rng)
        plane = Hyperplane(float(rng.uniform(0.0, 3.0)), _direction(rng))
        lo = clip(p, plane, "minus")
        hi = clip(p, plane, "plus")
        total = (area(lo) if lo else 0.0) + (area(hi) if hi else 0.0)
        worst = max(worst, abs(total - area(p)) / max(area(p), 1e-12))
    return worst <= 1e-9, f"worst relative area defect {worst:.2e}"


def check_hull_idempotent() -> tuple[bool, str]:
    rng = np.random.default_rng(103)
    for _ in range(200):
        p = _random_polygon(rng)
        if convex_hull(p.vertices).vertices != p.vertices:
            return False, f"hull not idempotent on {p.vertices}"
    return True, "200 random hulls"


def check_hits_matches_interval() -> tuple[bool, str]:
    rng = np.random.default_rng(107)
    for _ in range(2000):
        p = _random_polygon(rng)
        u = _direction(rng)
        r = float(rng.uniform(0.0, 4.0))
        iv = hit_interval(p, u)
        lo, hi = max(0.0, iv.lo), max(0.0, iv.hi)
        want = hi > iv.lo and lo - 1e-9 <= r <= hi + 1e-9
        if hits(Hyperplane(r, u), p) != want:
            return False, f"predicate/interval mismatch at r={r}"
    return True, "2000 random cases"


def check_separates_consistent() -> tuple[bool, str]:
    rng = np.random.default_rng(109)
    found = 0
    for _ in range(1500):
        a = _random_polygon(rng, scale=0.5)
        b = _random_polygon(rng, scale=0.5)
        plane = Hyperplane(float(rng.uniform(0.0, 3.0)), _direction(rng))
        if separates(plane, a, b):
            found += 1
            if hits(plane, a) or hits(plane, b):
                return False, "separating line reported as hitting"
    return found > 20, f"{found} separating configurations checked"


def check_measure_examples() -> tuple[bool, str]:
    sq = box(0, 0, 1, 1)
    values = (
        (hit_mass(ISO, sq), 4.0),
        (hit_mass(AXES, sq), 1.0),
        (hit_mass(ISO, ConvexPolygon(((3.0, -4.0),))), 0.0),
        (separation_rate(ISO, E1), 2.0),
        (separation_rate(AXES, E1), 0.5),
        (separation_rate(AXES, Direction(1.0, 1.0)), math.sqrt(2.0) / 2.0),
    )
    for got, want in values:
        if abs(got - want) > 1e-12:
            return False, f"expected {want}, got {got}"
    return True, "hit masses and separation rates"


def check_kappa_certified() -> tuple[bool, str]:
    for measure, lo, hi in ((ISO, 2.0 - 1e-3, 2.0), (AXES, 0.5 - 1e-3, 0.5)):
        k = min_separation_rate(measure)
        if not (lo <= k <= hi):
            return False, f"kappa {k} outside [{lo}, {hi}]"
        angles = np.linspace(0.0, 2.0 * math.pi, 4096, endpoint=False)
        rates = [separation_rate(measure, Direction.from_angle(t)) for t in angles]
        if min(rates) < k:
            return False, "kappa exceeds a grid value"
    return True, "both example measures"


def check_point_separation_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(113)
    for measure in (ISO, AXES):
        for _ in range(200):
            p = tuple(map(float, rng.uniform(-5, 5, size=2)))
            q = tuple(map(float, rng.uniform(-5, 5, size=2)))
            d = math.hypot(q[0] - p[0], q[1] - p[1])
            if d < 1e-6:
                continue
            u = Direction(q[0] - p[0], q[1] - p[1])
            want = d * separation_rate(measure, u)
            got = separating_mass(measure, ConvexPolygon((p,)), ConvexPolygon((q,)))
            if abs(got - want) > 1e-9 * max(want, 1e-12):
                return False, f"distance*rate {want} vs separating mass {got}"
    return True, "400 random point pairs"


def check_separation_additivity() -> tuple[bool, str]:
    rng = np.random.default_rng(127)
    origin = ConvexPolygon(((0.0, 0.0),))
    for measure in (ISO, AXES):
        for _ in range(100):
            u = _direction(rng)
            eps = float(rng.uniform(0.05, 1.5))
            n = int(rng.integers(1, 8))

            def sep(t: float) -> float:
                return separating_mass(measure, origin, ConvexPolygon(((t * u.x, t * u.y),)))

            lhs = sep((n + 1) * eps)
            rhs = sep(n * eps) + sep(eps)
            if abs(lhs - rhs) > 1e-9 * max(lhs, 1e-12):
                return False, f"additivity defect {abs(lhs - rhs):.2e}"
    return True, "200 random (direction, step, count) triples"


def check_rate_lipschitz() -> tuple[bool, str]:
    rng = np.random.default_rng(131)
    for measure in (ISO, AXES):
        const = measure.total_mass / 2.0
        for _ in range(2000):
            u, v = _direction(rng), _direction(rng)
            lhs = abs(separation_rate(measure, u) - separation_rate(measure, v))
            if lhs > const * math.hypot(u.x - v.x, u.y - v.y) + 1e-12:
                return False, "Lipschitz bound violated"
    return True, "4000 random direction pairs"


def check_separation_sandwich() -> tuple[bool, str]:
    rng = np.random.default_rng(137)
    for _ in range(100):
        a = _random_polygon(rng, scale=0.7)
        b = translate(_random_polygon(rng, scale=0.7), tuple(map(float, rng.uniform(-8, 8, size=2))))
        hull = convex_hull(list(a.vertices) + list(b.vertices))
        for measure in (ISO, AXES):
            sep = separating_mass(measure, a, b)
            whole = hit_mass(measure, hull)
            if not (-1e-9 <= whole - sep <= hit_mass(measure, a) + hit_mass(measure, b) + 1e-9):
                return False, "sandwich inequality violated"
    return True, "100 random body pairs, both measures"


def check_simulator_determinism() -> tuple[bool, str]:
    p = SimulationParams(window=box(0, 0, 4, 4), time=1.0, measure=ISO, seed=77)
    if simulate(p) != simulate(p):
        return False, "identical seeds gave different tessellations"
    return True, "bit-identical repeat run"


def check_area_partition() -> tuple[bool, str]:
    t = simulate(SimulationParams(window=box(0, 0, 6, 6), time=1.0, measure=ISO, seed=5))
    total = sum(area(c.polygon) for c in t.live_cells)
    defect = abs(total - 36.0) / 36.0
    return defect <= 1e-6, f"relative area defect {defect:.2e} over {len(t.live_cells)} cells"


def check_restrict_identity() -> tuple[bool, str]:
    t = simulate(SimulationParams(window=box(0, 0, 4, 4), time=0.8, measure=ISO, seed=31))
    r = restrict(t, t.window)
    same = [c.polygon for c in r.live_cells] == [c.polygon for c in t.live_cells]
    return same, "restrict to the full window"


def check_prefix_coupling() -> tuple[bool, str]:
    w = box(0, 0, 3, 3)
    short = simulate(SimulationParams(window=w, time=0.5, measure=ISO, seed=7, retain_lineage=True))
    long = simulate(SimulationParams(window=w, time=1.0, measure=ISO, seed=7, retain_lineage=True))
    long_ids = {c.id: c for c in long.cells}
    for c in short.cells:
        other = long_ids.get(c.id)
        if other is None or other.polygon != c.polygon or other.death_time != c.death_time:
            return False, f"cell {c.id} differs between horizons"
    return True, "time-0.5 run is a prefix of the time-1.0 run"


def check_capacity_closed_forms() -> tuple[bool, str]:
    seg = ConvexPolygon(((0.0, 0.0), (1.0, 0.0)))
    sq = box(0, 0, 1, 1)
    values = (
        (missing_probability(seg, 1.0, ISO), math.exp(-2.0)),
        (missing_probability(sq, 1.0, ISO), math.exp(-4.0)),
        (capacity_growth_bound(sq, 1.0, ISO), 20.0 * math.exp(-4.0)),
    )
    for got, want in values:
        if abs(got - want) > 1e-12 * max(1.0, want):
            return False, f"expected {want}, got {got}"
    return True, "segment and square closed forms"


def check_joint_closed_form_quadrature() -> tuple[bool, str]:
    rng = np.random.default_rng(139)
    for trial in range(30):
        a = _random_polygon(rng, scale=0.6)
        b = translate(_random_polygon(rng, scale=0.6), (float(rng.uniform(3.5, 10.0)), 0.0))
        measure = ISO if trial % 2 == 0 else AXES
        t_par = float(rng.uniform(0.2, 1.5))
        sep = separating_mass(measure, a, b)
        if sep <= 0.0:
            continue
        hull = convex_hull(list(a.vertices) + list(b.vertices))
        mass_a, mass_b, mass_w = (hit_mass(measure, x) for x in (a, b, hull))
        ts = np.linspace(0.0, t_par, 4097)
        f = np.exp(-ts * mass_w) * np.exp(-(t_par - ts) * (mass_a + mass_b))
        h = t_par / 4096.0
        simpson = h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())
        oracle = sep * float(simpson)
        got = joint_missing_closed_form(a, b, t_par, measure)
        if abs(got - oracle) > 1e-8 * max(oracle, 1e-300):
            return False, f"closed form {got} vs quadrature {oracle}"
    return True, "30 random configurations"


def check_fit_synthetic() -> tuple[bool, str]:
    hs = [10.0, 20.0, 40.0, 80.0]
    rows = [
        MixingRow(
            h_norm=h,
            direction=E1,
            zeta=2.0,
            asymptote=1.0 / (2 * h),
            overlap=False,
            product_exact=0.5,
            joint_gamma_exact=0.5 * (1 + 0.7 / h),
            ratio_minus_one=0.7 / h,
            gamma_complement_bound=0.0,
            chi_bound=1.0,
        )
        for h in hs
    ]
    slope, _, _ = fit_decay_exponent(rows)
    return abs(slope + 1.0) <= 1e-12, f"synthetic 1/h rows fitted slope {slope:.3e}"


def check_json_roundtrips() -> tuple[bool, str]:
    poly = convex_hull([(0, 0), (2, 0), (2, 1), (0.5, 1.7)])
    if polygon_from_json(polygon_to_json(poly)) != poly:
        return False, "polygon JSON round trip"
    body = CompactSet.of(box(0, 0, 1, 1), box(2, 0, 3, 1))
    if compact_from_json(compact_to_json(body)) != body:
        return False, "compact set JSON round trip"
    if DirectionalMeasure.from_json(AXES.to_json()).total_mass != AXES.total_mass:
        return False, "measure JSON round trip"
    return True, "polygon, compact set, measure"


def check_svg_renders() -> tuple[bool, str]:
    t = simulate(SimulationParams(window=box(0, 0, 2, 2), time=1.0, measure=ISO, seed=4))
    doc = render_svg(t)
    ok = doc.startswith("<svg") and doc.count("<polygon") >= len(t.live_cells)
    return ok, f"{len(t.live_cells)} cells rendered"


# ---------------------------------------------------------------------------
# mc suite


def _missing_fraction(window, body, time, measure, n, seed, variant="cell-rate"):
    miss = 0
    for i in range(n):
        t = simulate(
            SimulationParams(window=window, time=time, measure=measure, seed=mix_seed(seed, i)),
            variant=variant,
        )
        if not hits_internal(t, body):
            miss += 1
    return miss / n


def check_mc_matches_analytic() -> tuple[bool, str]:
    sq = box(1, 1, 2, 2)
    est = mc_missing(sq, 1.0, ISO, 3000, seed=2025)
    target = math.exp(-4.0)
    z = abs(est.mean - target) / est.stderr
    return z <= 4.0, f"z = {z:.2f} against exp(-4)"


def check_variant_equivalence() -> tuple[bool, str]:
    sq = box(1, 1, 2, 2)
    w = box(0.75, 0.75, 2.25, 2.25)
    n = 10_000
    p_cell = _missing_fraction(w, sq, 1.0, ISO, n, seed=15, variant="cell-rate")
    p_tree = _missing_fraction(w, sq, 1.0, ISO, n, seed=16, variant="window-tree")
    target = math.exp(-4.0)
    se = math.sqrt(2.0 * target * (1.0 - target) / n)
    z = abs(p_cell - p_tree) / se
    return z <= 3.0, f"cell-rate {p_cell:.4f} vs window-tree {p_tree:.4f}, z = {z:.2f}"


def check_restrict_consistency() -> tuple[bool, str]:
    k = box(1, 1, 2, 2)
    small = box(0.4, 0.4, 2.6, 2.6)
    big = box(0, 0, 4, 4)
    n = 3000
    direct = _missing_fraction(small, k, 0.8, ISO, n, seed=21)
    via = 0
    for i in range(n):
        t = simulate(SimulationParams(window=big, time=0.8, measure=ISO, seed=mix_seed(22, i)))
        if not hits_internal(restrict(t, small), k):
            via += 1
    p = math.exp(-0.8 * 4.0)
    se = math.sqrt(2.0 * p * (1.0 - p) / n)
    z = abs(direct - via / n) / se
    return z <= 4.0, f"direct {direct:.4f} vs restricted {via / n:.4f}, z = {z:.2f}"


def check_nest_stability() -> tuple[bool, str]:
    k = box(1, 1, 2, 2)
    w = box(0.4, 0.4, 2.6, 2.6)
    a = 0.4
    n = 3000
    miss = 0
    for i in range(n):
        t = simulate(SimulationParams(window=w, time=a, measure=ISO, seed=mix_seed(31, i)))
        if not hits_internal(nest(t, a, ISO, seed=mix_seed(32, i)), k):
            miss += 1
    target = math.exp(-2.0 * a * 4.0)
    se = math.sqrt(target * (1.0 - target) / n)
    z = abs(miss / n - target) / se
    return z <= 4.0, f"nested missing {miss / n:.4f} vs exp(-2a*4) = {target:.4f}, z = {z:.2f}"


def check_sampling_left_half() -> tuple[bool, str]:
    rng = np.random.default_rng(41)
    w = box(0, 0, 1, 1)
    left = box(0, 0, 0.5, 1)
    n = 30_000
    count = sum(1 for _ in range(n) if hits(sample_hitting(ISO, w, rng), left))
    se = math.sqrt(0.75 * 0.25 / n)
    z = abs(count / n - 0.75) / se
    return z <= 4.0, f"left-half fraction {count / n:.4f} vs 0.75, z = {z:.2f}"


def check_increment_bound() -> tuple[bool, str]:
    rep = increment_check(box(0, 0, 1, 1), 1.0, 0.1, ISO, 2000, seed=51)
    ok = rep.monotone and rep.within_bound
    return ok, f"increment {rep.increment:.4f} <= bound {rep.bound:.4f} + 3se"


def check_joint_mc_spot() -> tuple[bool, str]:
    seg = ConvexPolygon(((0.0, 0.0), (0.0, 1.0)))
    config = SweepConfig(
        body_a=seg,
        body_b=seg,
        direction=E1,
        distances=(4.0,),
        time=1.0,
        measure=AXES,
        seed=61,
        mc_n=2000,
    )
    row = sweep(config)[0]
    gap = abs(row.joint_mc.mean - row.joint_gamma_exact)
    tol = row.gamma_complement_bound + 4.0 * row.joint_mc.stderr
    return gap <= tol, f"|mc - closed form| = {gap:.4f} <= {tol:.4f}"


FAST_CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "geometry.clip_partition": check_clip_partition,
    "geometry.hull_idempotent": check_hull_idempotent,
    "geometry.hits_matches_interval": check_hits_matches_interval,
    "geometry.separates_consistent": check_separates_consistent,
    "measure.example_values": check_measure_examples,
    "measure.kappa_certified": check_kappa_certified,
    "measure.point_separation_identity": check_point_separation_identity,
    "measure.separation_additivity": check_separation_additivity,
    "measure.rate_lipschitz": check_rate_lipschitz,
    "measure.separation_sandwich": check_separation_sandwich,
    "stit.determinism": check_simulator_determinism,
    "stit.area_partition": check_area_partition,
    "stit.restrict_identity": check_restrict_identity,
    "stit.prefix_coupling": check_prefix_coupling,
    "capacity.closed_forms": check_capacity_closed_forms,
    "mixing.closed_form_quadrature": check_joint_closed_form_quadrature,
    "mixing.fit_synthetic": check_fit_synthetic,
    "io.json_roundtrips": check_json_roundtrips,
    "io.svg_renders": check_svg_renders,
}

MC_CHECKS: dict[str, Callable[[], tuple[bool, str]]] = {
    "capacity.mc_matches_analytic": check_mc_matches_analytic,
    "stit.variant_equivalence": check_variant_equivalence,
    "stit.restrict_consistency": check_restrict_consistency,
    "stit.nest_stability": check_nest_stability,
    "measure.sampling_left_half": check_sampling_left_half,
    "capacity.increment_bound": check_increment_bound,
    "mixing.joint_mc_spot": check_joint_mc_spot,
}

SUITES: dict[str, dict[str, Callable[[], tuple[bool, str]]]] = {
    "fast": FAST_CHECKS,
    "mc": MC_CHECKS,
    "all": {**FAST_CHECKS, **MC_CHECKS},
}


def run_suite(suite: str) -> list[CheckResult]:
    """Execute every check in the named suite, capturing failures."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    results = []
    for name, fn in SUITES[suite].items():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name=name, ok=ok, detail=detail))
    return results
