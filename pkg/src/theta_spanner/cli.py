"""Command-line interface.

Exit codes: 0 clean, 1 verification found violations, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io
from .bounds import family_of
from .errors import IndexOutOfRange, PreconditionViolated, ThetaSpannerError
from .geometry import validate_general_position
from .svg import render_svg
from .theta import build_constrained_theta
from .verify import adversarial_search, pair_ratio_report, random_instance, worker_count
from .visibility import Instance, convex_chain, crossing_constraints, verify_chain

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def parse_cones(text: str) -> list[int]:
    """``"6"``, ``"6,8,10"`` or ``"6-13"`` (ranges inclusive)."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad cone list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty cone list")
    return out


def _jittered(inst: Instance, amount: float | None, seed: int) -> Instance:
    if not amount:
        return inst
    rng = np.random.default_rng(seed)
    coords = inst.coords + rng.uniform(-amount, amount, inst.coords.shape)
    return Instance.from_coords(coords, inst.constraints)


def _single_m(args) -> int:
    if len(args.cones) != 1:
        raise ThetaSpannerError("this command takes a single cone count")
    family_of(args.cones[0])
    return args.cones[0]


def cmd_validate(args) -> int:
    with open(args.instance) as fh:
        inst, _ = io.loads_instance(fh.read(), check_planarity=False)
    crossings = crossing_constraints(inst)
    clean = not crossings
    for a, b in crossings:
        print(f"crossing constraints {a} and {b}")
    for m in args.cones:
        violations = validate_general_position(inst.points, m)
        for v in violations:
            print(f"m={m}: {v}")
        clean = clean and not violations
    print("clean" if clean else "violations found")
    return EXIT_OK if clean else EXIT_VIOLATION


def cmd_build(args) -> int:
    m = _single_m(args)
    inst = _jittered(io.load_instance(args.instance), args.jitter, args.seed)
    g = build_constrained_theta(inst, m)
    print(f"n={g.n} m={m} edges={len(g.edges)}")
    if args.out:
        io.write_json(io.graph_to_dict(g), args.out)
    if args.svg:
        render_svg(inst, g, None, args.svg)
    return EXIT_OK


def cmd_ratio(args) -> int:
    m = _single_m(args)
    inst = _jittered(io.load_instance(args.instance), args.jitter, args.seed)
    rep = pair_ratio_report(inst, m, per_pair=args.per_pair)
    print(
        f"m={m} bound={rep.bound:.9f} max_ratio={rep.max_ratio:.9f} argmax={rep.argmax} "
        f"violations={len(rep.violations)} vis_violations={len(rep.vis_violations)}"
    )
    if args.report:
        io.write_json(io.report_to_dict(rep, timing=args.timing), args.report)
    if args.svg:
        render_svg(inst, rep.graph, rep, args.svg)
    return EXIT_OK if rep.clean else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    for m in args.cones:
        family_of(m)
    inst = _jittered(io.load_instance(args.instance), args.jitter, args.seed)
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        reports = list(pool.map(lambda m: pair_ratio_report(inst, m), args.cones))
    print(f"{'m':>3} {'bound':>12} {'max_ratio':>12}  argmax")
    clean = True
    for rep in reports:
        flag = "" if rep.clean else "  VIOLATION"
        print(f"{rep.m:>3} {rep.bound:>12.9f} {rep.max_ratio:>12.9f}  {rep.argmax}{flag}")
        clean = clean and rep.clean
    return EXIT_OK if clean else EXIT_VIOLATION


def cmd_search(args) -> int:
    m = _single_m(args)
    res = adversarial_search(
        family_of(m),
        args.seed,
        args.iters,
        n_points=args.points,
        max_constraints=args.constraints,
        restarts=args.restarts,
    )
    print(f"m={m} achieved={res.ratio:.9f} bound={res.bound:.9f} restart={res.restart}")
    if args.out:
        io.save_instance(res.instance, args.out, {"m": str(m), "achieved_ratio": repr(res.ratio)})
    if res.violation:
        print("achieved ratio exceeds the bound: counterexample written" if args.out else "bound exceeded")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_gen(args) -> int:
    cones = args.cones if args.cones else list(range(6, 14))
    rng = np.random.default_rng(args.seed)
    for _ in range(100):
        inst = random_instance(args.points, args.constraints, rng, cones[0])
        if all(not validate_general_position(inst.points, m) for m in cones):
            break
    else:
        raise ThetaSpannerError("could not generate a general-position instance")
    io.save_instance(inst, args.out, {"seed": str(args.seed)})
    print(f"wrote {inst.n} points and {len(inst.constraints)} constraints to {args.out}")
    return EXIT_OK


def cmd_chain(args) -> int:
    inst = io.load_instance(args.instance)
    for i in (args.u, args.v, args.w):
        if not 0 <= i < inst.n:
            raise IndexOutOfRange(f"point {i} does not exist")
    ch = convex_chain(inst, args.u, args.v, args.w)
    ok = verify_chain(inst, ch)
    print(f"chain {' '.join(map(str, ch.vertices))}")
    print("verified" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="theta-spanner", description="Constrained theta-graph construction and spanning-ratio verification.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="general-position and planarity report")
    p.add_argument("instance")
    p.add_argument("--cones", type=parse_cones, default=list(range(6, 14)))
    p.set_defaults(func=cmd_validate)

    def jitter_opts(p):
        p.add_argument("--jitter", type=float, default=None, help="perturb points uniformly by up to this amount")
        p.add_argument("--seed", type=int, default=0, help="seed for --jitter")

    p = sub.add_parser("build", help="construct the constrained theta-graph")
    p.add_argument("instance")
    p.add_argument("--cones", type=parse_cones, required=True)
    p.add_argument("--out")
    p.add_argument("--svg")
    jitter_opts(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("ratio", help="per-pair bound verification")
    p.add_argument("instance")
    p.add_argument("--cones", type=parse_cones, required=True)
    p.add_argument("--per-pair", action="store_true")
    p.add_argument("--report")
    p.add_argument("--svg")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    jitter_opts(p)
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("sweep", help="bound and achieved ratio for several cone counts")
    p.add_argument("instance")
    p.add_argument("--cones", type=parse_cones, required=True)
    jitter_opts(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("search", help="adversarial hill-climbing search")
    p.add_argument("--cones", type=parse_cones, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--points", type=int, default=6)
    p.add_argument("--constraints", type=int, default=0)
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", help="random valid instance")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--constraints", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cones", type=parse_cones, default=None, help="cone counts to keep general position for")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("chain", help="convex chain between u and v facing w")
    p.add_argument("instance")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.set_defaults(func=cmd_chain)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except PreconditionViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ThetaSpannerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
