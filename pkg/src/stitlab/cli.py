"""Command-line front end.

Subcommands: measure | simulate | capacity | mixing | iterate | validate.
Configuration comes from JSON files; seeds must be present in the file or
given with --seed (there is no wall-clock default, so every run is
reproducible). Exit codes: 0 success, 1 validation or property failure,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from .capacity import mc_missing, missing_probability
from .checks import run_suite
from .geometry import (
    CompactSet,
    ConvexPolygon,
    Direction,
    GeometryError,
    box,
    compact_from_json,
    polygon_from_json,
    regular_polygon,
)
from .measure import (
    DirectionalMeasure,
    MeasureError,
    hit_mass,
    min_separation_rate,
    separation_rate,
    validate_measure,
)
from .mixing import SweepConfig, sweep, sweep_to_csv
from .stit import (
    SimulationParams,
    hits_internal,
    mix_seed,
    nest,
    simulate,
    tessellation_from_json,
    tessellation_to_json,
)
from .svg import render_svg

BUILTIN_SHAPES = {
    "unit_square": lambda: box(0.0, 0.0, 1.0, 1.0),
    "unit_segment": lambda: ConvexPolygon(((0.0, 0.0), (1.0, 0.0))),
    "disc64": lambda: regular_polygon(64, circumradius=1.0),
}


class BadInput(ValueError):
    """Configuration or argument problem: exit code 2."""


def _load_config(path: str | None) -> dict:
    if path is None:
        raise BadInput("--config PATH is required for this command")
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise BadInput(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise BadInput(f"config is not valid JSON: {exc}")


def _require(config: dict, key: str):
    if key not in config:
        raise BadInput(f"config is missing required key {key!r}")
    return config[key]


def parse_body(obj) -> ConvexPolygon | CompactSet:
    """A body is a builtin shape name, a polygon, or a compact set."""
    if isinstance(obj, str):
        if obj not in BUILTIN_SHAPES:
            raise BadInput(f"unknown shape {obj!r}; builtins: {sorted(BUILTIN_SHAPES)}")
        return BUILTIN_SHAPES[obj]()
    if isinstance(obj, dict):
        try:
            if "pieces" in obj:
                return compact_from_json(obj)
            if "vertices" in obj:
                return polygon_from_json(obj)
            if "shape" in obj:
                return parse_body(obj["shape"])
        except (GeometryError, KeyError, TypeError, ValueError) as exc:
            raise BadInput(f"bad body specification: {exc}")
    raise BadInput("a body needs 'vertices', 'pieces', or a builtin 'shape' name")


def parse_measure(obj) -> DirectionalMeasure:
    try:
        measure = DirectionalMeasure.from_json(obj)
        validate_measure(measure)
    except (MeasureError, KeyError, TypeError, ValueError) as exc:
        raise BadInput(f"bad measure: {exc}")
    return measure


def _resolve_seed(config: dict, args) -> int:
    if args.seed is not None:
        return args.seed
    if "seed" not in config:
        raise BadInput("seed must be given in the config file or with --seed")
    return int(config["seed"])


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv_header_lines(config: dict, no_timestamp: bool) -> list[str]:
    lines = [f"# config: {json.dumps(config, sort_keys=True)}"]
    if not no_timestamp:
        lines.append(f"# timestamp: {datetime.now(timezone.utc).isoformat()}")
    return lines


def cmd_measure(args) -> int:
    config = _load_config(args.config)
    measure = parse_measure(_require(config, "measure"))
    body = parse_body(_require(config, "set"))
    grid = [k * math.pi / 8.0 for k in range(16)]
    report = {
        "config": config,
        "total_mass": measure.total_mass,
        "lambda_hit": hit_mass(measure, body),
        "kappa": min_separation_rate(measure),
        "zeta": [
            {"angle_radians": t, "value": separation_rate(measure, Direction.from_angle(t))}
            for t in grid
        ],
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    measure = parse_measure(_require(config, "measure"))
    window = parse_body(_require(config, "window"))
    if isinstance(window, CompactSet) or len(window.vertices) < 3:
        raise BadInput("window must be a convex polygon with positive area")
    seed = _resolve_seed(config, args)
    tess = simulate(
        SimulationParams(
            window=window, time=float(_require(config, "a")), measure=measure, seed=seed
        )
    )
    doc = {"config": {**config, "seed": seed}, "tessellation": tessellation_to_json(tess)}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    if args.svg is not None:
        Path(args.svg).write_text(render_svg(tess))
    return 0


def read_tessellation_file(path: str):
    """Read a tessellation dump, with or without the CLI's config wrapper."""
    obj = json.loads(Path(path).read_text())
    return tessellation_from_json(obj.get("tessellation", obj))


def cmd_capacity(args) -> int:
    config = _load_config(args.config)
    measure = parse_measure(_require(config, "measure"))
    body = parse_body(_require(config, "set"))
    seed = _resolve_seed(config, args)
    n = args.n if args.n is not None else int(_require(config, "n"))
    a = float(_require(config, "a"))
    window = None
    if "window" in config:
        window = parse_body(config["window"])
        if isinstance(window, CompactSet) or len(window.vertices) < 3:
            raise BadInput("window must be a convex polygon with positive area")
    est = mc_missing(body, a, measure, n, seed, window=window)
    connected = isinstance(body, ConvexPolygon) or body.connected
    analytic = missing_probability(body, a, measure) if connected else None
    resolved = {**config, "seed": seed, "n": n}
    lines = _csv_header_lines(resolved, args.no_timestamp)
    lines.append("query_id,a,n,mean,stderr,analytic,seed")
    lines.append(
        ",".join(
            [
                str(config.get("id", "query")),
                repr(a),
                str(n),
                repr(est.mean),
                repr(est.stderr),
                "" if analytic is None else repr(analytic),
                str(seed),
            ]
        )
    )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_mixing(args) -> int:
    config = _load_config(args.config)
    measure = parse_measure(_require(config, "measure"))
    seed = _resolve_seed(config, args)
    dx, dy = _require(config, "direction")
    mc_n = args.n if args.n is not None else config.get("mc_n")
    sweep_config = SweepConfig(
        body_a=parse_body(_require(config, "A")),
        body_b=parse_body(_require(config, "B")),
        direction=Direction(float(dx), float(dy)),
        distances=tuple(float(h) for h in _require(config, "distances")),
        time=float(_require(config, "a")),
        measure=measure,
        seed=seed,
        mc_n=int(mc_n) if mc_n is not None else None,
    )
    rows = sweep(sweep_config)
    resolved = {**config, "seed": seed}
    lines = _csv_header_lines(resolved, args.no_timestamp)
    text = "\n".join(lines) + "\n" + sweep_to_csv(rows)
    _emit(text, args.out)
    return 0


def cmd_iterate(args) -> int:
    config = _load_config(args.config)
    measure = parse_measure(_require(config, "measure"))
    window = parse_body(_require(config, "window"))
    body = parse_body(_require(config, "set"))
    seed = _resolve_seed(config, args)
    n = args.n if args.n is not None else int(_require(config, "n"))
    a = float(_require(config, "a"))
    a2 = float(_require(config, "a2"))
    misses = 0
    for i in range(n):
        tess = simulate(
            SimulationParams(window=window, time=a, measure=measure, seed=mix_seed(seed, 2 * i))
        )
        nested = nest(tess, a2, measure, seed=mix_seed(seed, 2 * i + 1))
        if not hits_internal(nested, body):
            misses += 1
    mean = misses / n
    stderr = math.sqrt(mean * (1.0 - mean) / n)
    connected = isinstance(body, ConvexPolygon) or body.connected
    analytic = math.exp(-(a + a2) * hit_mass(measure, body)) if connected else None
    report = {
        "config": {**config, "seed": seed, "n": n},
        "mc_mean": mean,
        "mc_stderr": stderr,
        "analytic": analytic,
        "z": None if analytic is None or stderr == 0.0 else (mean - analytic) / stderr,
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    if report["z"] is not None and abs(report["z"]) > 3.0:
        return 1
    return 0


def cmd_validate(args) -> int:
    try:
        results = run_suite(args.suite)
    except KeyError as exc:
        raise BadInput(str(exc))
    report = {
        "suite": args.suite,
        "passed": sum(r.ok for r in results),
        "failed": sum(not r.ok for r in results),
        "checks": [asdict(r) for r in results],
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["failed"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stitlab",
        description="Simulation and verification workbench for iteration-stable planar tessellations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "measure": (cmd_measure, "closed-form measure quantities for a body"),
        "simulate": (cmd_simulate, "simulate one tessellation (JSON, optional SVG)"),
        "capacity": (cmd_capacity, "Monte Carlo missing probability as a CSV row"),
        "mixing": (cmd_mixing, "translation sweep of the joint-missing closed forms"),
        "iterate": (cmd_iterate, "nesting stability check against the closed form"),
        "validate": (cmd_validate, "run a named property suite"),
    }
    for name, (fn, help_text) in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        if name == "validate":
            p.add_argument("suite", nargs="?", default="fast", help="fast, mc, or all")
        else:
            p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--n", type=int, help="override the sample count")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--svg", help="also render an SVG here (simulate only)")
        p.add_argument(
            "--no-timestamp", action="store_true", help="suppress the timestamp header line"
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, MeasureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
