"""Projection profiles, level sets and caps."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .arc import Arc
from .constructions import diagonal_points, line_intersection_sizes
from .pg import CenterOnTarget, ProjSpace, build_space, nullspace, pivots

LineType = tuple

# multiplicity patterns of lines through a 0-point of the 128-arc
LINE_TYPE_NAMES = {
    (3, 3, 1, 1, 0, 0): "alpha",
    (3, 2, 2, 1, 0, 0): "beta",
    (3, 0, 0, 0, 0, 0): "gamma1",
    (2, 1, 0, 0, 0, 0): "gamma2",
    (1, 1, 1, 0, 0, 0): "gamma3",
}


class AnalysisError(ValueError):
    pass


class CenterNotZeroPoint(AnalysisError):
    pass


@dataclass
class ProjectionProfile:
    center: int
    target: int
    plane: ProjSpace = field(repr=False)
    induced: Arc = field(repr=False)
    point_types: list[LineType] = field(repr=False)
    histogram: Counter

    def named_histogram(self) -> dict[str, int]:
        return {LINE_TYPE_NAMES.get(k, str(k)): v for k, v in sorted(self.histogram.items(), reverse=True)}

    def points_of_type(self, name: str) -> list[int]:
        return [i for i, t in enumerate(self.point_types) if LINE_TYPE_NAMES.get(t) == name]


def default_target(space: ProjSpace, center: int) -> int:
    """Least-id hyperplane not through ``center``."""
    return int(np.flatnonzero(~space.incidence[:, center])[0])


def project_arc(arc: Arc, center, target=None) -> ProjectionProfile:
    """Project ``arc`` from a 0-point onto a hyperplane, itself coordinatised as PG(r-1, q)."""
    space = arc.space
    c = space.pid(center)
    if arc.mult[c] != 0:
        raise CenterNotZeroPoint(f"point {c} has multiplicity {arc.mult[c]}")
    h = default_target(space, c) if target is None else int(getattr(target, "id", target))
    if space.incidence[h, c]:
        raise CenterOnTarget("the center lies on the target hyperplane")
    image = space.projection_map(c, h)

    F = space.field
    plane = build_space(F, space.r - 1)
    basis = nullspace(F, [space.coords[h]], space.r + 1)
    piv = pivots(basis)
    # a point of the hyperplane in RREF coordinates is read off the pivot columns
    target_pts = space.hyperplane_points[h]
    local = plane.ids_of(space.coords[target_pts][:, piv])
    to_local = np.full(space.n_points, -1, dtype=np.int64)
    to_local[target_pts] = local

    others = np.flatnonzero(np.arange(space.n_points) != c)
    img_local = to_local[image[others]]
    induced = np.zeros(plane.n_points, dtype=np.int64)
    np.add.at(induced, img_local, arc.mult[others])

    fibers = [[c] for _ in range(plane.n_points)]
    for p, i in zip(others, img_local):
        fibers[i].append(int(p))
    types = [tuple(sorted((int(arc.mult[p]) for p in fib), reverse=True)) for fib in fibers]
    return ProjectionProfile(c, h, plane, Arc(plane, induced), types, Counter(types))


def _is_quadrangle(plane: ProjSpace, pts) -> bool:
    return len(pts) == 4 and all(c not in plane.line_through(a, b).points for a, b, c in combinations(pts, 3))


def verify_projection_structure(profile: ProjectionProfile) -> tuple[bool, dict]:
    """Check the induced plane arc against the quadrangle picture.

    Expected: seven 8-points and twenty-four 3-points; the beta points form a
    quadrangle whose diagonal points are the alpha points; gamma3 points are
    where the diagonal lines meet the sides, the other points of the diagonal
    lines are gamma1, everything else carrying 3 is gamma2.
    """
    plane = profile.plane
    vals = profile.induced.mult
    report: dict = {}
    eights = set(np.flatnonzero(vals == 8).tolist())
    threes = set(np.flatnonzero(vals == 3).tolist())
    report["eight_points"] = len(eights)
    report["three_points"] = len(threes)
    report["values_ok"] = len(eights) == 7 and len(threes) == 24 and len(eights) + len(threes) == plane.n_points
    alpha = set(profile.points_of_type("alpha"))
    beta = sorted(profile.points_of_type("beta"))
    report["histogram"] = profile.named_histogram()
    report["quadrangle"] = _is_quadrangle(plane, beta)
    checks = [report["values_ok"], report["quadrangle"]]
    if report["quadrangle"]:
        diag = set(diagonal_points(plane, beta))
        report["diagonal_is_alpha"] = diag == alpha
        sides = set()
        for a, b in combinations(beta, 2):
            sides |= set(plane.line_through(a, b).points)
        diag_lines = set()
        for a, b in combinations(sorted(diag), 2):
            diag_lines |= set(plane.line_through(a, b).points)
        gamma3 = (diag_lines & sides) - diag
        gamma1 = diag_lines - sides - diag
        gamma2 = threes - gamma3 - gamma1
        report["gamma3_ok"] = gamma3 == set(profile.points_of_type("gamma3"))
        report["gamma1_ok"] = gamma1 == set(profile.points_of_type("gamma1"))
        report["gamma2_ok"] = gamma2 == set(profile.points_of_type("gamma2"))
        checks += [report["diagonal_is_alpha"], report["gamma1_ok"], report["gamma2_ok"], report["gamma3_ok"]]
    else:
        report["witness"] = f"beta points {beta} are not a quadrangle"
    ok = all(checks)
    report["ok"] = ok
    return ok, report


def extract_level_set(arc: Arc, m: int) -> frozenset[int]:
    return frozenset(np.flatnonzero(arc.mult == m).tolist())


@dataclass(frozen=True)
class Cap:
    points: frozenset[int]
    plane_spectrum: dict[int, int]
    complete: bool

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class NotACap:
    witness_line: int
    count: int

    def __bool__(self):
        return False


def cap_check(space: ProjSpace, points) -> Cap | NotACap:
    points = frozenset(int(p) for p in points)
    sizes = line_intersection_sizes(space, points)
    bad = np.flatnonzero(sizes >= 3)
    if len(bad):
        return NotACap(int(bad[0]), int(sizes[bad[0]]))
    ind = np.zeros(space.n_points, dtype=np.int64)
    ind[list(points)] = 1
    plane_sizes = ind[space.hyperplane_points].sum(axis=1)
    spec = dict(sorted(Counter(plane_sizes.tolist()).items(), reverse=True))
    # a point extends the cap iff it lies on no secant
    on_secant = np.zeros(space.n_points, dtype=bool)
    on_secant[space.lines[sizes == 2].ravel()] = True
    complete = bool(on_secant[ind == 0].all())
    return Cap(points, spec, complete)


def format_report(sections: dict[str, dict]) -> str:
    """Render ``{section: {key: value}}`` as '[section]' blocks of 'key: value' lines."""
    out = []
    for name, entries in sections.items():
        out.append(f"[{name}]")
        for key, value in entries.items():
            if isinstance(value, dict):
                value = " ".join(f"{k}={v}" for k, v in value.items())
            elif isinstance(value, (list, tuple, set, frozenset)):
                value = " ".join(str(v) for v in sorted(value))
            elif isinstance(value, bool):
                value = "yes" if value else "no"
            out.append(f"{key}: {value}")
    return "\n".join(out) + "\n"
