"""Text formats for arcs, caps and integer matrices.

Arc file::

    q 5 p 5 e 1 r 3
    # comment
    0 0 1 4 : 3
    1 2 0 0 : 1

One record per point with non-zero multiplicity; coordinates are field
element indices and are normalised on load.  Cap files hold one point per
line.  Matrix files hold one row per line of whitespace separated integers.
"""

from __future__ import annotations

import numpy as np

from .arc import Arc
from .gf import GF, FieldError
from .pg import GeometryError, ProjSpace, build_space


class FormatError(ValueError):
    pass


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def header(space: ProjSpace) -> str:
    F = space.field
    return f"q {F.q} p {F.p} e {F.e} r {space.r}"


def parse_header(line: str) -> ProjSpace:
    tok = line.split()
    if len(tok) != 8 or tok[0::2] != ["q", "p", "e", "r"]:
        raise FormatError(f"bad header {line!r}")
    try:
        q, p, e, r = (int(x) for x in tok[1::2])
    except ValueError as exc:
        raise FormatError(f"bad header {line!r}") from exc
    if p**e != q:
        raise FormatError(f"header says q={q} but p^e={p**e}")
    try:
        return build_space(GF(q), r)
    except (FieldError, GeometryError) as exc:
        raise FormatError(str(exc)) from exc


def _parse_point(space: ProjSpace, tokens, lineno: int) -> int:
    if len(tokens) != space.r + 1:
        raise FormatError(f"line {lineno}: expected {space.r + 1} coordinates")
    try:
        vec = [int(x) for x in tokens]
    except ValueError as exc:
        raise FormatError(f"line {lineno}: non-integer coordinate") from exc
    if any(not 0 <= x < space.q for x in vec):
        raise FormatError(f"line {lineno}: coordinate out of range")
    if not any(vec):
        raise FormatError(f"line {lineno}: zero vector")
    return space.pid(vec)


def coords_str(space: ProjSpace, pid: int) -> str:
    return " ".join(str(int(x)) for x in space.coords[pid])


def dumps_arc(arc: Arc) -> str:
    out = [header(arc.space)]
    for pid in np.flatnonzero(arc.mult):
        out.append(f"{coords_str(arc.space, pid)} : {int(arc.mult[pid])}")
    return "\n".join(out) + "\n"


def loads_arc(text: str) -> Arc:
    it = _lines(text)
    try:
        _, first = next(it)
    except StopIteration:
        raise FormatError("empty arc file") from None
    space = parse_header(first)
    mult = np.zeros(space.n_points, dtype=np.int64)
    seen = set()
    for lineno, line in it:
        if line.count(":") != 1:
            raise FormatError(f"line {lineno}: expected '<coords> : <mult>'")
        left, right = line.split(":")
        pid = _parse_point(space, left.split(), lineno)
        try:
            m = int(right)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: bad multiplicity") from exc
        if m < 0:
            raise FormatError(f"line {lineno}: negative multiplicity")
        if pid in seen:
            raise FormatError(f"line {lineno}: point listed twice")
        seen.add(pid)
        mult[pid] = m
    return Arc(space, mult)


def read_arc(path) -> Arc:
    with open(path) as fh:
        return loads_arc(fh.read())


def write_arc(arc: Arc, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_arc(arc))


def dumps_points(space: ProjSpace, points) -> str:
    out = [f"# {header(space)}"]
    out += [coords_str(space, p) for p in sorted(points)]
    return "\n".join(out) + "\n"


def loads_points(space: ProjSpace, text: str) -> frozenset[int]:
    pts = set()
    for lineno, line in _lines(text):
        pts.add(_parse_point(space, line.split(), lineno))
    return frozenset(pts)


def dumps_matrix(rows) -> str:
    return "\n".join(" ".join(str(int(x)) for x in row) for row in rows) + "\n"


def loads_matrix(text: str) -> np.ndarray:
    rows = []
    for lineno, line in _lines(text):
        try:
            rows.append([int(x) for x in line.split()])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: non-integer entry") from exc
    if not rows or len({len(r) for r in rows}) != 1:
        raise FormatError("matrix rows missing or ragged")
    return np.array(rows, dtype=np.int64)
