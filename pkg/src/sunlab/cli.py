"""Command-line front end.

Exit codes: 0 on pass or agreement, 1 on refutation or disagreement, 2 on
usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import scene_io
from .classification import classify
from .config import Config
from .l1_convexity import is_l1_convex, is_strictly_l1_convex
from .numerics import Point, SunlabError, format_decimal, parse_rational
from .projection import project
from .scenario_lab import VALIDATORS, generate
from .suite import SuiteScale, run_suite
from .sun_checker import (
    ConeSpec,
    check_strict_sun,
    check_sun,
    cone_contains,
    cone_contains_by_definition,
    default_jobs,
    ob_condition,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class UsageError(Exception):
    pass


def _decimalize(obj, places: int):
    if isinstance(obj, str) and _RATIONAL.match(obj):
        return format_decimal(parse_rational(obj), places)
    if isinstance(obj, dict):
        return {k: _decimalize(v, places) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decimalize(v, places) for v in obj]
    return obj


def _emit(args, payload) -> None:
    text = scene_io.dumps(payload)
    if args.decimal is not None:
        text = scene_io.dumps(_decimalize(json.loads(text), args.decimal))
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _schedule(text: str) -> tuple:
    return tuple(parse_rational(p) for p in text.split(","))


def _config(args) -> Config:
    kwargs = {"seed": args.seed}
    if args.schedule:
        kwargs["lambda_schedule"] = _schedule(args.schedule)
    if args.sweep_budget:
        kwargs["sweep_budget"] = args.sweep_budget
    if args.pair_budget:
        kwargs["pair_budget"] = args.pair_budget
    return Config(**kwargs)


def _load(args):
    path = Path(args.scene)
    if not path.exists():
        raise UsageError(f"no such scene file: {path}")
    try:
        return scene_io.load_scene(path)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed scene file {path}: {exc}") from exc


def _verdict_exit(verdict) -> int:
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_classify(args) -> int:
    _emit(args, classify(_load(args)).to_json())
    return EXIT_OK


def cmd_project(args) -> int:
    M = _load(args)
    res = project(M, Point.parse(args.point), args.norm)
    _emit(args, {"rho": res.rho, "witnesses": [str(p) for p in res.points],
                 "primitives": res.indices, "unique": res.is_unique, "norm": res.norm_used.value})
    return EXIT_OK


def cmd_check_l1(args) -> int:
    cfg = _config(args)
    v = is_l1_convex(_load(args), cfg.pair_spec())
    _emit(args, v.to_json())
    return _verdict_exit(v)


def cmd_check_strict_l1(args) -> int:
    cfg = _config(args)
    v = is_strictly_l1_convex(_load(args), cfg.pair_spec())
    _emit(args, v.to_json())
    return _verdict_exit(v)


def cmd_check_sun(args) -> int:
    cfg = _config(args)
    v = check_sun(_load(args), cfg.sweep_spec(), cfg.lambda_schedule, jobs=args.jobs)
    _emit(args, v.to_json())
    return _verdict_exit(v)


def cmd_check_strict_sun(args) -> int:
    cfg = _config(args)
    v = check_strict_sun(_load(args), cfg.sweep_spec(), cfg.lambda_schedule, jobs=args.jobs)
    _emit(args, v.to_json())
    return _verdict_exit(v)


def cmd_cone_test(args) -> int:
    M = _load(args)
    spec = ConeSpec.from_points(Point.parse(args.x), Point.parse(args.y))
    z = Point.parse(args.z)
    a, b = cone_contains(spec, z), cone_contains_by_definition(spec, z)
    _emit(args, {"active": sorted(spec.active), "r": spec.r, "cone_contains": a,
                 "cone_contains_by_definition": b, "agree": a == b,
                 **ob_condition(M, spec).to_json()})
    return EXIT_OK if a == b else EXIT_FAIL


def _param(text: str):
    if "=" not in text:
        raise UsageError(f"family parameter must be key=value, got {text!r}")
    key, value = text.split("=", 1)
    if value.lower() in ("true", "false"):
        return key, value.lower() == "true"
    if "," in value:
        return key, [parse_rational(v) for v in value.split(",")]
    return key, parse_rational(value)


def cmd_generate(args) -> int:
    params = dict(_param(p) for p in args.param or [])
    if args.dim is not None:
        params["dim"] = args.dim
    if args.extent is not None:
        params["extent"] = parse_rational(args.extent)
    M = generate(args.family, args.seed, **params)
    text = scene_io.dumps(scene_io.scene_to_json(M))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    rep = VALIDATORS[args.theorem](_load(args), _config(args), jobs=args.jobs)
    _emit(args, rep.to_json())
    return EXIT_OK if rep.all_agree else EXIT_FAIL


def cmd_suite(args) -> int:
    scale = SuiteScale.quick() if args.quick else SuiteScale()
    only = tuple(args.only.split(",")) if args.only else ()
    result = run_suite(_config(args), scale, jobs=args.jobs, only=only)
    _emit(args, result)
    return EXIT_OK if result["passed"] else EXIT_FAIL


def _seed_default() -> int:
    raw = os.environ.get("SUNLAB_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SUNLAB_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $SUNLAB_SEED or 0)")
    common.add_argument("--decimal", type=int, default=None, metavar="K",
                        help="render rationals with K decimal places")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    common.add_argument("--schedule", default=None, help="lambda schedule, e.g. 2,4,8,16")
    common.add_argument("--sweep-budget", type=int, default=None)
    common.add_argument("--pair-budget", type=int, default=None)
    common.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="sunlab", description="Exact checks of suns and l1-convexity in l-infinity.")
    sub = parser.add_subparsers(dest="command", required=True)

    def scene_cmd(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("scene")
        p.set_defaults(func=fn)
        return p

    scene_cmd("classify", cmd_classify, "cross / cocross classification")
    p = scene_cmd("project", cmd_project, "metric projection of a point")
    p.add_argument("--point", required=True)
    p.add_argument("--norm", choices=["Linf", "L1"], default="Linf")
    scene_cmd("check-l1", cmd_check_l1, "Menger l1-convexity")
    scene_cmd("check-strict-l1", cmd_check_strict_l1, "strict l1-convexity")
    scene_cmd("check-sun", cmd_check_sun, "sun test over sampled external points")
    scene_cmd("check-strict-sun", cmd_check_strict_sun, "strict sun test over sampled external points")
    p = scene_cmd("cone-test", cmd_cone_test, "supporting cone membership in both forms")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)
    p = scene_cmd("validate", cmd_validate, "compare a characterization's two sides on one scene")
    p.add_argument("--theorem", required=True, choices=sorted(VALIDATORS))

    p = sub.add_parser("generate", parents=[common], help="write a generated scene")
    p.add_argument("--family", required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--extent", default=None)
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="extra family parameter")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("suite", parents=[common], help="run the acceptance sweep")
    p.add_argument("--quick", action="store_true", help="reduced sampling")
    p.add_argument("--only", default=None, help="comma-separated check keys")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.seed is None:
            args.seed = _seed_default()
        if args.jobs is None:
            args.jobs = default_jobs()
        if args.decimal is not None and args.decimal < 0:
            raise UsageError("--decimal needs a non-negative place count")
        return args.func(args)
    except (UsageError, SunlabError, ValueError, TypeError) as exc:
        print(f"sunlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
