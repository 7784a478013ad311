"""Command line interface.

Exit codes: 0 ok, 1 property failure, 2 input error, 3 search timeout.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .analysis import cap_check, extract_level_set, format_report, project_arc, verify_projection_structure
from .arc import Arc, NotModularError, NotQuasidivisible, add_arcs, classify_mod, scale_arc, sigma_dual, spectrum
from .arc128 import ARC128_WEIGHTS, CapSearchTimeout, assemble_weighted_arc, orbit_matrix, partition_by_invariants, search_cap20, solve_orbit_weights
from .constructions import (
    PLANE_ARCS,
    complement,
    coordinate_subspace,
    detect_lifting_points,
    hermitian_arc,
    lift,
    mn_set_arc,
    quadric_arc,
    standard_quadric,
)
from .formats import dumps_arc, dumps_points, loads_arc, loads_matrix, loads_points
from .gf import GF
from .pg import build_space

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_TIMEOUT = 0, 1, 2, 3

KINDS = ["quadric", "hermitian", "mnset", "lift", "plane18", "plane23", "plane28", "plane33", "sum", "scale", "arc128"]


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from exc


def _load_arc(path: str) -> Arc:
    return loads_arc(_read(path))


def _space(args, q=None, r=None):
    q = args.q or q
    if args.p or args.e:
        p, e = args.p or (q and GF(q).p), args.e or 1
        if p is None:
            raise InputError("--p needs --q or --e")
        if q and q != p**e:
            raise InputError(f"--q {q} disagrees with --p {p} --e {e}")
        q = p**e
    r = args.r or r
    if q is None or r is None:
        raise InputError("this command needs --q and --r")
    return build_space(GF(q), r)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _digest(arc: Arc) -> str:
    return hashlib.sha256(dumps_arc(arc).encode()).hexdigest()


def _str_keys(d: dict) -> dict:
    return {str(k): v for k, v in d.items()}


def certificate(arc: Arc) -> dict:
    """Every entry is recomputed from the multiplicities by exhaustive scans."""
    space = arc.space
    cls = classify_mod(arc)
    cert = {
        "tool": f"tmodarcs {__version__}",
        "input_digest": _digest(arc),
        "space": repr(space),
        "size": arc.cardinality,
        "max_multiplicity": int(arc.mult.max()),
    }
    sp = spectrum(arc)
    cert["spectrum"] = {
        "hyperplanes": _str_keys(sp.hyperplanes),
        "lines": _str_keys(sp.lines),
        "points": _str_keys(sp.points),
    }
    if cls:
        lifting = sorted(detect_lifting_points(arc))
        cert["t"] = cls.t
        cert["strong"] = bool(arc.mult.max() <= cls.t)
        cert["lifting_points"] = lifting
        cert["lifted"] = bool(lifting)
    else:
        cert["t"] = None
        cert["witness_line"] = cls.witness_line
    return cert


# -- commands -----------------------------------------------------------------


def _parse_vectors(text: str):
    return [[int(x) for x in chunk.split()] for chunk in text.split(";") if chunk.strip()]


def cmd_construct(args) -> int:
    kind = args.construction
    if kind == "quadric":
        space = _space(args)
        if not args.quadric:
            raise InputError("quadric needs --kind elliptic|hyperbolic|parabolic")
        arc = quadric_arc(standard_quadric(space, args.quadric), args.variant)
    elif kind == "hermitian":
        arc = hermitian_arc(_space(args, r=2))
    elif kind == "mnset":
        space = _space(args, r=2)
        if not args.set or args.m is None:
            raise InputError("mnset needs --set FILE and --m")
        arc = mn_set_arc(space, loads_points(space, _read(args.set)), args.m)
    elif kind in ("plane18", "plane23", "plane28", "plane33"):
        arc = PLANE_ARCS[int(kind[5:])](_space(args, q=5, r=2))
    elif kind == "sum":
        if len(args.arc or []) < 2:
            raise InputError("sum needs two or more --arc files")
        arcs = [_load_arc(p) for p in args.arc]
        arc = arcs[0]
        for other in arcs[1:]:
            arc = add_arcs(arc, other)
    elif kind == "scale":
        if len(args.arc or []) != 1 or args.alpha is None:
            raise InputError("scale needs one --arc and --alpha")
        arc = scale_arc(_load_arc(args.arc[0]), args.alpha)
    elif kind == "lift":
        if len(args.arc or []) != 1:
            raise InputError("lift needs one --arc (the base arc)")
        base = _load_arc(args.arc[0])
        space = _space(args, q=base.space.q)
        if base.space.field != space.field:
            raise InputError("base arc and target space have different fields")
        if args.sigma:
            sigma = space.subspace(_parse_vectors(args.sigma))
        else:
            sigma = coordinate_subspace(space, range(base.space.r + 1))
        gamma = space.subspace(_parse_vectors(args.gamma)) if args.gamma else complement(space, sigma)
        arc = lift(base, sigma, gamma)
    elif kind == "arc128":
        space = _space(args, q=5, r=3)
        cap = search_cap20(space, seed=args.seed, budget=args.budget)
        arc = assemble_weighted_arc(partition_by_invariants(space, cap), ARC128_WEIGHTS)
    else:
        raise InputError(f"unknown construction {kind!r}")
    _emit(args, dumps_arc(arc))
    if args.out:
        with open(args.out + ".cert.json", "w") as fh:
            json.dump(certificate(arc), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    arc = _load_arc(args.file)
    cert = certificate(arc)
    checks = {"modular": cert["t"] is not None}
    if args.expect_t is not None:
        checks["expected_t"] = cert["t"] == args.expect_t
    if args.expect_size is not None:
        checks["expected_size"] = cert["size"] == args.expect_size
    if args.expect_strong:
        checks["strong"] = bool(cert.get("strong"))
    if args.expect_not_lifted:
        checks["not_lifted"] = cert["t"] is not None and not cert["lifted"]
    if args.expect_lifted:
        checks["lifted"] = bool(cert.get("lifted"))
    cert["verdicts"] = checks
    cert["ok"] = all(checks.values())
    _emit(args, json.dumps(cert, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if cert["ok"] else EXIT_FAIL


def cmd_spectrum(args) -> int:
    arc = _load_arc(args.file)
    sp = spectrum(arc)
    cls = classify_mod(arc)
    _emit(
        args,
        format_report(
            {
                "arc": {"space": repr(arc.space), "size": arc.cardinality, "t": cls.t if cls else "none"},
                "hyperplanes": _str_keys(sp.hyperplanes),
                "lines": _str_keys(sp.lines),
                "points": _str_keys(sp.points),
            }
        ),
    )
    return EXIT_OK


def _point_arg(space, text: str) -> int:
    parts = text.replace(",", " ").split()
    if len(parts) == 1:
        pid = int(parts[0])
        if not 0 <= pid < space.n_points:
            raise InputError(f"point id {pid} out of range")
        return pid
    return space.pid([int(x) for x in parts])


def cmd_project(args) -> int:
    arc = _load_arc(args.file)
    center = _point_arg(arc.space, args.center)
    profile = project_arc(arc, center, args.target)
    ok, report = verify_projection_structure(profile)
    induced = spectrum(profile.induced).points
    sections = {
        "projection": {"center": center, "target": profile.target, "induced_size": profile.induced.cardinality},
        "induced_points": _str_keys(induced),
        "line_types": profile.named_histogram(),
        "structure": {k: v for k, v in report.items() if k != "histogram"},
    }
    _emit(args, format_report(sections))
    return EXIT_OK


def cmd_lifting_points(args) -> int:
    arc = _load_arc(args.file)
    pts = sorted(detect_lifting_points(arc))
    coords = [" ".join(map(str, arc.space.coords[p])) for p in pts]
    _emit(args, format_report({"lifting_points": {"count": len(pts), "lifted": bool(pts), "ids": pts}, "coords": {str(p): c for p, c in zip(pts, coords)}}))
    return EXIT_OK


def cmd_cap_extract(args) -> int:
    arc = _load_arc(args.file)
    pts = extract_level_set(arc, args.m)
    cap = cap_check(arc.space, pts)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps_points(arc.space, pts))
    info = {"multiplicity": args.m, "size": len(pts), "cap": bool(cap)}
    if cap:
        info["complete"] = cap.complete
        info["plane_spectrum"] = _str_keys(cap.plane_spectrum)
    else:
        info["witness_line"] = cap.witness_line
    sys.stdout.write(format_report({"level_set": info}))
    return EXIT_OK if cap else EXIT_FAIL


def cmd_solve_weights(args) -> int:
    A = loads_matrix(_read(args.matrix)) if args.matrix else orbit_matrix()
    q = args.q or 5
    sols = solve_orbit_weights(A, args.t, q, args.max_w)
    _emit(args, "".join(" ".join(map(str, w)) + "\n" for w in sols))
    return EXIT_OK


def cmd_search_cap(args) -> int:
    space = _space(args, q=5, r=3)
    cap = search_cap20(space, seed=args.seed, budget=args.budget)
    _emit(args, dumps_points(space, cap.points))
    return EXIT_OK


def cmd_dual(args) -> int:
    arc = _load_arc(args.file)
    _emit(args, dumps_arc(sigma_dual(arc, args.t)))
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands must not reset flags given before the command name
    d = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=d, help="field order")
    common.add_argument("--p", type=int, default=d, help="field characteristic")
    common.add_argument("--e", type=int, default=d, help="extension degree")
    common.add_argument("--r", type=int, default=d, help="projective dimension")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0)
    common.add_argument("--out", default=d, help="output file (default: stdout)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tmodarcs", description=__doc__.splitlines()[0], parents=[_global_flags(False)])
    common = _global_flags(True)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build an arc")
    p.add_argument("construction", choices=KINDS)
    p.add_argument("--kind", dest="quadric", choices=["elliptic", "hyperbolic", "parabolic"], help="quadric type")
    p.add_argument("--variant", type=int, default=1, choices=[1, 2])
    p.add_argument("--set", help="point file for mnset")
    p.add_argument("--m", type=int)
    p.add_argument("--arc", action="append", help="input arc file (lift, sum, scale)")
    p.add_argument("--alpha", type=int)
    p.add_argument("--sigma", help="basis of the base subspace, rows separated by ';'")
    p.add_argument("--gamma", help="basis of the center subspace, rows separated by ';'")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="certify an arc file")
    p.add_argument("file")
    p.add_argument("--expect-t", type=int)
    p.add_argument("--expect-size", type=int)
    p.add_argument("--expect-strong", action="store_true")
    p.add_argument("--expect-not-lifted", action="store_true")
    p.add_argument("--expect-lifted", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", parents=[common], help="hyperplane, line and point spectra")
    p.add_argument("file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("project", parents=[common], help="projection profile from a 0-point")
    p.add_argument("file")
    p.add_argument("--center", required=True, help="point id or coordinates")
    p.add_argument("--target", type=int, help="hyperplane id")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("lifting-points", parents=[common], help="list lifting points")
    p.add_argument("file")
    p.set_defaults(func=cmd_lifting_points)

    p = sub.add_parser("cap-extract", parents=[common], help="level set of an arc, checked as a cap")
    p.add_argument("file")
    p.add_argument("--m", type=int, default=2)
    p.set_defaults(func=cmd_cap_extract)

    p = sub.add_parser("solve-weights", parents=[common], help="solve w A = t j (mod q)")
    p.add_argument("matrix", nargs="?", help="matrix file (default: packaged class matrix)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--max-w", type=int)
    p.set_defaults(func=cmd_solve_weights)

    p = sub.add_parser("search-cap", parents=[common], help="search a complete 20-cap in PG(3,5)")
    p.add_argument("--budget", type=int, default=2_000_000)
    p.set_defaults(func=cmd_search_cap)

    p = sub.add_parser("dual", parents=[common], help="sigma-dual of a quasidivisible arc")
    p.add_argument("file")
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_dual)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapSearchTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (NotModularError, NotQuasidivisible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
