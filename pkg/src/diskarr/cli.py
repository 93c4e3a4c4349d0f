"""Command line: construct, check, bound, density, optimize, render.

Exit codes: 0 property holds (or no violation found), 1 violated, 2 unknown,
3 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .bounds import (asymptotic_saturation_bound, cluster_covering_bound, cluster_packing_bound,
                     format_constants, known_constants)
from .checker import CheckConfig, check_reduction, check_saturation
from .constructions import CLUSTER_KINDS, DEFAULT_COVER_SCALE, cluster, hex_covering, hex_packing, sect5_covering, split_packing
from .engine import OBJECTIVES, SearchConfig, greedy_saturate, optimize
from .geom import Lattice
from .periodic import PeriodicArrangement, covering_check, is_packing
from .render import render_svg
from .union import Cluster

EXIT_OK, EXIT_VIOLATED, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3

STATUS_EXIT = {
    "certified-yes": EXIT_OK,
    "certified-holds": EXIT_OK,
    "no-violation-found": EXIT_OK,
    "certified-no": EXIT_VIOLATED,
    "violated": EXIT_VIOLATED,
    "unknown": EXIT_UNKNOWN,
}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(args, record: dict, text: str) -> None:
    if args.format == "structured":
        sys.stdout.write(io.dumps(record))
    else:
        print(text)


def _load_arrangement(path) -> PeriodicArrangement:
    obj = io.read(path)
    if not isinstance(obj, PeriodicArrangement):
        raise io.FormatError("expected a periodic arrangement file")
    return obj


# ------------------------------------------------------------------ construct


def cmd_construct(args) -> int:
    name = args.name
    if name == "hex-packing":
        obj, params = hex_packing(), {}
    elif name == "hex-covering":
        obj, params = hex_covering(args.inflation), {"inflation": args.inflation}
    elif name == "sect5":
        obj, params = sect5_covering(args.d, args.a), {"d": args.d, "a": args.a}
    elif name == "greedy":
        if args.basis is None:
            raise InputError("greedy needs --basis b11 b12 b21 b22")
        b = args.basis
        obj = greedy_saturate(Lattice([[b[0], b[1]], [b[2], b[3]]]), args.radius, args.seed)
        params = {"basis": b, "radius": args.radius}
    elif name == "split":
        sp = split_packing(args.slide)
        window = args.window or [-10.0, -10.0, 10.0, 10.0]
        cs = sp.centers(window)
        d = io.finite_to_dict(cs, 1.0, window)
        d["slide"] = args.slide
        return _finish_construct(args, d, {"slide": args.slide, "window": window},
                                 f"split packing, slide {args.slide}: {len(cs)} disks in window")
    elif name == "cluster":
        if args.kind is None:
            raise InputError("cluster needs --kind")
        C = cluster(args.kind, args.scale)
        d = io.cluster_to_dict(C, args.kind, args.scale)
        return _finish_construct(args, d, {"kind": args.kind, "scale": args.scale},
                                 f"cluster {args.kind}: {len(C)} centers")
    else:
        raise InputError(f"unknown construction {name!r}")
    d = io.arrangement_to_dict(obj)
    return _finish_construct(args, d, params, f"{name}: {len(obj)} disk(s) per cell, density {obj.density():.6f}",
                             density=obj.density())


def _finish_construct(args, d, params, text, density=None) -> int:
    if args.out:
        io.write(args.out, d)
    rec = io.result_record("construct", {"name": args.name, **params}, {"density": density, "file": d}, args.seed)
    if args.format == "structured":
        sys.stdout.write(io.dumps(rec))
    else:
        print(text)
        if not args.out:
            sys.stdout.write(io.dumps(d))
    return EXIT_OK


# ------------------------------------------------------------------ check


def _verdict_text(mode, v) -> str:
    lines = [f"{mode}: {v['status']}"]
    for k in ("margin", "resolution", "radius", "distance"):
        if v.get(k) is not None:
            lines.append(f"  {k}: {v[k]}")
    w = v.get("witness")
    if w:
        if isinstance(w, dict):
            lines.append(f"  removed: {w['removed']}")
            lines.append(f"  added: {w['added']}")
            lines.append(f"  witness margin: {w['margin']}")
        else:
            lines.append(f"  witness: {w}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    A = _load_arrangement(args.file)
    tol = args.tolerance
    inputs = {"file": str(args.file), "mode": args.mode, "n": args.n, "resolution": args.resolution,
              "window": args.window, "target": args.target, "tolerance": tol}
    if args.mode == "packing":
        pv = is_packing(A, tol)
        res = {"status": pv.status, "witness": pv.witness, "distance": pv.distance}
    elif args.mode == "covering":
        target = A.radius if args.target is None else args.target
        cv = covering_check(A, target, tol=tol)
        res = {"status": cv.status, "witness": cv.witness, "margin": cv.margin,
               "resolution": cv.resolution, "radius": target}
    else:
        cfg = CheckConfig(n=args.n, window_radius=args.window, placement_grid=args.resolution,
                          seed=args.seed, tol=tol)
        fn = check_saturation if args.mode == "saturation" else check_reduction
        try:
            v = fn(A, cfg)
        except ValueError as e:
            raise InputError(str(e)) from e
        res = io.plain(v)
    rec = io.result_record("check", inputs, res, args.seed)
    _emit(args, rec, _verdict_text(args.mode, io.plain(res)))
    return STATUS_EXIT[res["status"]]


# ------------------------------------------------------------------ bound


def cmd_bound(args) -> int:
    if args.constants:
        rows = known_constants()
        rec = io.result_record("bound", {"constants": True}, rows, args.seed)
        _emit(args, rec, format_constants(rows))
        return EXIT_OK
    if args.asymptotic:
        if None in (args.d, args.n, args.delta, args.volume):
            raise InputError("--asymptotic needs --d, --n, --delta and --volume")
        try:
            val = asymptotic_saturation_bound(args.delta, args.volume, args.d, args.n)
        except ValueError as e:
            raise InputError(str(e)) from e
        inputs = {"asymptotic": True, "d": args.d, "n": args.n, "delta": args.delta, "volume": args.volume}
        rec = io.result_record("bound", inputs, {"bound": val}, args.seed)
        _emit(args, rec, f"asymptotic saturation bound: {val:.6f}")
        return EXIT_OK
    if args.cluster is None:
        raise InputError("bound needs --cluster KIND, --asymptotic or --constants")
    kind = args.cluster
    if kind not in CLUSTER_KINDS:
        raise InputError(f"unknown cluster kind {kind!r}")
    if kind.startswith("pack"):
        rep = cluster_packing_bound(kind)
    else:
        if args.optimize_scale:
            scale = None
        else:
            scale = DEFAULT_COVER_SCALE[kind] if args.scale is None else args.scale
        rep = cluster_covering_bound(kind, scale)
    inputs = {"cluster": kind, "scale": args.scale, "optimize_scale": args.optimize_scale}
    rec = io.result_record("bound", inputs, rep, args.seed)
    a = rep.domain_area
    lines = [f"{kind} ({rep.side}, n={rep.n})",
             f"  bound: {rep.bound:.6f}",
             f"  domain area: [{a.lower:.9f}, {a.upper:.9f}] ({a.method})"]
    if rep.scale is not None:
        lines.append(f"  scale: {rep.scale:.6f}")
    if rep.paper_value is not None:
        lines.append(f"  closed form: {rep.paper_value:.6f}, abs err {rep.abs_err:.3g}")
    if rep.note:
        lines.append(f"  note: {rep.note}")
    _emit(args, rec, "\n".join(lines))
    return EXIT_OK


# ------------------------------------------------------------------ density / optimize / render


def cmd_density(args) -> int:
    A = _load_arrangement(args.file)
    d = A.density()
    rec = io.result_record("density", {"file": str(args.file)}, {"density": d}, args.seed)
    _emit(args, rec, f"density: {d:.9f}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    A = _load_arrangement(args.file)
    cfg = SearchConfig(seed=args.seed, iterations=args.iterations, constraint_n=args.n,
                       resolution=args.resolution)
    try:
        best, audit = optimize(A, args.objective, cfg)
    except ValueError as e:
        raise InputError(str(e)) from e
    if args.out:
        io.write(args.out, io.arrangement_to_dict(best))
    inputs = {"file": str(args.file), "objective": args.objective, "iterations": args.iterations,
              "n": args.n, "resolution": args.resolution}
    result = {"density": best.density(), "count": len(best), "arrangement": io.arrangement_to_dict(best),
              "audit": audit}
    rec = io.result_record("optimize", inputs, result, args.seed)
    _emit(args, rec, f"best density {best.density():.6f} with {len(best)} disk(s) per cell; "
                     f"{len(audit)} accepted moves")
    return EXIT_OK


def cmd_render(args) -> int:
    obj = io.read(args.file)
    if args.window is None:
        if isinstance(obj, Cluster):
            lo, hi = obj.centers.min(axis=0) - 1.5, obj.centers.max(axis=0) + 1.5
            window = [lo[0], lo[1], hi[0], hi[1]]
        elif isinstance(obj, dict) and obj.get("window"):
            window = list(obj["window"])
        else:
            window = [-5.0, -5.0, 5.0, 5.0]
    else:
        window = args.window
    try:
        svg = render_svg(obj, window)
    except ValueError as e:
        raise InputError(str(e)) from e
    if args.out:
        Path(args.out).write_text(svg)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands accept the global flags too, without overriding values given earlier
    g = _Parser(add_help=False)

    def default(v):
        return argparse.SUPPRESS if suppress else v

    g.add_argument("--seed", type=int, default=default(0))
    g.add_argument("--tolerance", type=float, default=default(1e-9))
    g.add_argument("--out", type=Path, default=default(None))
    g.add_argument("--format", choices=("text", "structured"), default=default("text"))
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(True)
    p = _Parser(prog="diskarr", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="write a named arrangement")
    c.add_argument("name", choices=("hex-packing", "hex-covering", "sect5", "split", "cluster", "greedy"))
    c.add_argument("--d", type=int, default=2)
    c.add_argument("--a", type=float, default=0.5)
    c.add_argument("--inflation", type=float, default=0.0)
    c.add_argument("--slide", type=float, default=0.0)
    c.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "YMIN", "XMAX", "YMAX"))
    c.add_argument("--kind", choices=CLUSTER_KINDS)
    c.add_argument("--scale", type=float)
    c.add_argument("--basis", type=float, nargs=4)
    c.add_argument("--radius", type=float, default=1.0)
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("check", parents=[common], help="check a property of an arrangement file")
    k.add_argument("file", type=Path)
    k.add_argument("--mode", choices=("packing", "covering", "saturation", "reduction"), required=True)
    k.add_argument("--n", type=int, default=1)
    k.add_argument("--resolution", type=float, default=0.05, help="placement grid, in radii")
    k.add_argument("--window", type=float, help="search window radius (default (2n+1) diameters)")
    k.add_argument("--target", type=float, help="covering radius to test (default: the disk radius)")
    k.set_defaults(func=cmd_check)

    b = sub.add_parser("bound", parents=[common], help="cluster and asymptotic density bounds")
    b.add_argument("--cluster", metavar="KIND")
    b.add_argument("--scale", type=float)
    b.add_argument("--optimize-scale", action="store_true")
    b.add_argument("--asymptotic", action="store_true")
    b.add_argument("--constants", action="store_true")
    b.add_argument("--d", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--delta", type=float)
    b.add_argument("--volume", type=float)
    b.set_defaults(func=cmd_bound)

    d = sub.add_parser("density", parents=[common], help="density of an arrangement file")
    d.add_argument("file", type=Path)
    d.set_defaults(func=cmd_density)

    o = sub.add_parser("optimize", parents=[common], help="simulated annealing on density")
    o.add_argument("file", type=Path)
    o.add_argument("--objective", choices=OBJECTIVES, default="min-density-packing")
    o.add_argument("--iterations", type=int, default=200)
    o.add_argument("--n", type=int, default=1, help="saturation or reduction order to keep")
    o.add_argument("--resolution", type=float, default=0.05)
    o.set_defaults(func=cmd_optimize)

    r = sub.add_parser("render", parents=[common], help="draw an arrangement or cluster as SVG")
    r.add_argument("file", type=Path)
    r.add_argument("--window", type=float, nargs=4, metavar=("XMIN", "YMIN", "XMAX", "YMAX"))
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (io.FormatError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
