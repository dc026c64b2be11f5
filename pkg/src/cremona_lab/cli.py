"""Command-line entry point.

Every subcommand reads strict JSON, prints a JSON transcript and exits with
0 on success, 1 when a mathematical check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from importlib import resources
from typing import Any, Mapping

from . import __version__
from .algebra import AlgebraError, MPoly
from .cremona import FactorizationError, SamplingExhausted, UnsupportedTower, factor_tower, verify_factorization
from .p1 import BudgetExhausted, P1Error, P1Tower, fiber_factorization_check, find_common_unramified_value
from .plane import (
    DegenerateError,
    PointImage,
    PPoint,
    base_points,
    canonical_linauto,
    collinear,
    compose,
    contracted_lines,
    quadratic_transform,
    std_quadratic,
)
from .ramification import (
    AffineRatMap,
    CurveGerm,
    RamificationError,
    is_contracted,
    is_strongly_ramified,
    jacobian_det,
    ram_index,
    tower_ledger,
)
from .selftest import DEFAULT_SEED, canonical_json, random_triple, run_selftest
from .surface import (
    HypersurfacePoly,
    SurfaceError,
    discriminant_locus,
    fiber_cardinality,
    ramification_over_component,
)
from .tower import Tower, TowerError, strict_transform

SEED_ENV = "CREMONA_LAB_SEED"
EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2
FIXTURES = ("fig1_tower", "cusp_curve", "lemma44_family", "z2_xy_surface")


class InputError(ValueError):
    pass


# errors meaning "the input is outside the operation's domain"
INPUT_ERRORS = (
    InputError,
    json.JSONDecodeError,
    AlgebraError,
    DegenerateError,
    TowerError,
    UnsupportedTower,
    RamificationError,
    P1Error,
    SurfaceError,
    KeyError,
    TypeError,
    ValueError,
)


def _expect_keys(data: Any, required: set[str], optional: set[str] = frozenset(), what: str = "input") -> Mapping:
    if not isinstance(data, Mapping):
        raise InputError(f"{what} must be a JSON object")
    keys = set(data)
    if not required <= keys:
        raise InputError(f"{what} is missing keys {sorted(required - keys)}")
    if keys - required - set(optional):
        raise InputError(f"{what} has unknown keys {sorted(keys - required - set(optional))}")
    return data


def load_fixture(name: str) -> Any:
    stem = name[:-5] if name.endswith(".json") else name
    if stem not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; shipped fixtures: {', '.join(FIXTURES)}")
    text = resources.files("cremona_lab.fixtures").joinpath(stem + ".json").read_text()
    return json.loads(text)


def _load_input(args) -> Any:
    if args.fixture and args.input:
        raise InputError("give either an input file or --fixture, not both")
    if args.fixture:
        return load_fixture(args.fixture)
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            return json.load(fh)
    return None


def _require_input(args) -> Any:
    data = _load_input(args)
    if data is None:
        raise InputError(f"{args.command} needs an input file or --fixture")
    return data


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, transcript body)


def cmd_quad(args) -> tuple[int, dict]:
    data = _load_input(args)
    if data is None:
        a, b, c = random_triple(random.Random(args.seed))
        source = "random"
    else:
        _expect_keys(data, {"a", "b", "c"}, what="triple")
        a, b, c = (PPoint.from_json(data[k]) for k in "abc")
        source = "input"
    if collinear(a, b, c):
        raise InputError("the triple is collinear")
    T = quadratic_transform(a, b, c)
    involution = compose(T, T).is_identity()
    bps = base_points(T)
    lines = contracted_lines(T, [a, b, c])
    contracted_ok = all(isinstance(img, PointImage) and img.point in (a, b, c) for _, img in lines)
    base_ok = set(bps) == {a, b, c}
    body = {
        "triple": {"a": a.to_json(), "b": b.to_json(), "c": c.to_json(), "source": source},
        "standard": std_quadratic().to_json(),
        "linauto": canonical_linauto(a, b, c).to_json(),
        "transform": T.to_json(),
        "base_points": sorted(p.to_json() for p in bps),
        "contracted_lines": [
            {"line": L.to_json(), "image": img.point.to_json() if isinstance(img, PointImage) else str(img.equation)}
            for L, img in lines
        ],
        "checks": {
            "involution": "pass" if involution else "fail",
            "base_points": "pass" if base_ok else "fail",
            "contracted_lines": "pass" if contracted_ok else "fail",
        },
    }
    return (EXIT_OK if involution and base_ok and contracted_ok else EXIT_FAILED), body


def cmd_factor_tower(args) -> tuple[int, dict]:
    data = _expect_keys(_require_input(args), {"centers"}, {"curve"}, "tower")
    tower = Tower.from_json({"centers": data["centers"]})
    body: dict = {"tower": tower.to_json(), "n": tower.n}
    if "curve" in data:
        st = strict_transform(tower, tower.n, MPoly.from_json(data["curve"]))
        body["curve"] = {
            "equation": str(MPoly.from_json(data["curve"])),
            "multiplicities": st.multiplicities,
            "strict_transforms": {cid: str(eq) for cid, eq in sorted(st.equations.items())},
        }
    kwargs = {"budget": args.budget} if args.budget is not None else {}
    try:
        res = factor_tower(tower, seed=args.seed, **kwargs)
    except SamplingExhausted as exc:
        body["error"] = f"budget exhausted: {exc}"
        return EXIT_FAILED, body
    except FactorizationError as exc:
        body["error"] = str(exc)
        return EXIT_FAILED, body
    rep = verify_factorization(tower, res)
    body["result"] = res.to_json()
    body["verification"] = rep.to_json()
    if not rep.passed:
        first = rep.failures()[0]
        body["error"] = f"level {first.level}: clause '{first.name}' failed"
    return (EXIT_OK if rep.passed else EXIT_FAILED), body


def _ramify_case(case: Mapping) -> tuple[bool, dict]:
    if "maps" in case:
        _expect_keys(case, {"maps", "germs"}, what="chain")
        maps = [AffineRatMap.from_json(m) for m in case["maps"]]
        germs = [CurveGerm.from_json(g) for g in case["germs"]]
        led = tower_ledger(maps, germs)
        return led.equal, {"ledger": led.to_json()}
    _expect_keys(case, {"map", "germ"}, {"expected_index"}, "case")
    phi = AffineRatMap.from_json(case["map"])
    D = CurveGerm.from_json(case["germ"])
    out = {"map": repr(phi), "germ": str(D.delta), "jacobian": str(jacobian_det(phi))}
    if is_contracted(phi, D):
        out["contracted"] = True
        return "expected_index" not in case, out
    e = ram_index(phi, D)
    out.update(contracted=False, index=e, strongly_ramified=is_strongly_ramified(phi, D))
    ok = True
    if "expected_index" in case:
        out["expected_index"] = case["expected_index"]
        ok = e == case["expected_index"]
    return ok, out


def cmd_ramify(args) -> tuple[int, dict]:
    data = _require_input(args)
    if isinstance(data, Mapping) and "cases" in data:
        _expect_keys(data, {"cases"}, what="case list")
        cases = data["cases"]
        if not isinstance(cases, list):
            raise InputError("'cases' must be a list")
    else:
        cases = [data]
    ok_all, rows = True, []
    for case in cases:
        ok, row = _ramify_case(case)
        row["passed"] = ok
        rows.append(row)
        ok_all &= ok
    return (EXIT_OK if ok_all else EXIT_FAILED), {"cases": rows}


def cmd_p1(args) -> tuple[int, dict]:
    data = _expect_keys(_require_input(args), {"maps"}, {"a"}, "P1 tower")
    t = P1Tower.from_json(data["maps"])
    body: dict = {"maps": [str(m) for m in t.maps], "degrees": t.degrees()}
    if "a" in data:
        a = MPoly.const(data["a"], ("z",)).constant_value()
    else:
        kwargs = {"search_budget": args.budget} if args.budget is not None else {}
        try:
            a = find_common_unramified_value(t, **kwargs)
        except BudgetExhausted as exc:
            body["error"] = f"budget exhausted: {exc}"
            body["obstructions"] = {str(k): v for k, v in sorted(exc.obstructions.items())}
            return EXIT_FAILED, body
    reports = [fiber_factorization_check(t, j, a) for j in range(len(t))]
    body["a"] = str(a)
    body["levels"] = [r.to_json() | {"passed": r.passed} for r in reports]
    ok = all(r.passed for r in reports)
    return (EXIT_OK if ok else EXIT_FAILED), body


def cmd_disc(args) -> tuple[int, dict]:
    data = _expect_keys(_require_input(args), {"surface"}, {"points", "components"}, "surface input")
    P = HypersurfacePoly.from_json(data["surface"])
    loc = discriminant_locus(P)
    body: dict = {"poly": str(P.poly), "d": P.d, "discriminant": loc.to_json()}
    ok = not loc.is_constant
    pts = []
    for x, y in data.get("points", []):
        pts.append({"point": [x, y], "fiber": fiber_cardinality(P, x, y)})
    body["points"] = pts
    comps = []
    for comp in data.get("components", []):
        _expect_keys(comp, {"delta", "samples"}, what="component")
        rep = ramification_over_component(P, MPoly.from_json(comp["delta"]), comp["samples"])
        comps.append(rep.to_json())
        ok &= rep.passed
    body["components"] = comps
    return (EXIT_OK if ok else EXIT_FAILED), body


def cmd_selftest(args) -> tuple[int, dict]:
    if args.input or args.fixture:
        raise InputError("selftest takes no input")
    out = run_selftest(args.seed, args.budget)
    return (EXIT_OK if out["passed"] else EXIT_FAILED), out


COMMANDS = {
    "quad": (cmd_quad, "quadratic transform of a triple, with its base points and contracted lines"),
    "factor-tower": (cmd_factor_tower, "factor a blowup tower through quadratic transforms and verify it"),
    "ramify": (cmd_ramify, "Jacobians and ramification indices of affine maps along curves"),
    "p1-tower": (cmd_p1, "common unramified value and fiber polynomials of a tower of P1 maps"),
    "disc": (cmd_disc, "discriminant and fiber counts of a surface monic in Z"),
    "selftest": (cmd_selftest, "run the seeded acceptance suites"),
}


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _budget(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help=f"random seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--budget", type=_budget, default=None, help="sampling / search budget")
    common.add_argument("--out", default=None, help="write the transcript here instead of stdout")
    common.add_argument("--fixture", default=None, help=f"use a shipped fixture: {', '.join(FIXTURES)}")
    parser = argparse.ArgumentParser(prog="cremona-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cremona-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("input", nargs="?", help="JSON input file")
    return parser


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return _seed(env)
    except (ValueError, argparse.ArgumentTypeError):
        raise InputError(f"{SEED_ENV} must be an unsigned 64-bit integer, got {env!r}") from None


def _emit(out_path: str | None, payload: dict) -> None:
    text = canonical_json(payload)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help / --version
        return int(exc.code or 0)
    handler = COMMANDS[args.command][0]
    try:
        if args.seed is None:
            args.seed = _default_seed()
        code, body = handler(args)
    except INPUT_ERRORS as exc:
        code, body = EXIT_INPUT, {"error": f"{type(exc).__name__}: {exc}"}
    except OSError as exc:
        code, body = EXIT_INPUT, {"error": f"cannot read input: {exc}"}
    if args.command == "selftest" and code != EXIT_INPUT:
        payload = body
    else:
        payload = {
            "tool": "cremona-lab",
            "version": __version__,
            "command": args.command,
            "seed": args.seed,
            "budget": args.budget,
            **body,
        }
    payload["exit_code"] = code
    if code == EXIT_INPUT:
        print(f"cremona-lab: {body['error']}", file=sys.stderr)
    _emit(args.out, payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
