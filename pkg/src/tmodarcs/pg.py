"""Points, lines, hyperplanes and subspaces of PG(r, q).

Points are stored by their normalised homogeneous coordinates (first non-zero
entry equal to 1) and numbered in lexicographic order of those coordinates.
Hyperplanes reuse the same numbering: hyperplane ``i`` is the zero set of the
linear form whose coefficient vector is the coordinate vector of point ``i``.
That makes the point/hyperplane duality the identity on ids.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .gf import FiniteField

DEFAULT_MAX_POINTS = 10**6


class GeometryError(ValueError):
    pass


class SpaceTooLarge(GeometryError):
    pass


class EqualPoints(GeometryError):
    pass


class CenterOnTarget(GeometryError):
    pass


class SpaceMismatch(GeometryError):
    pass


# -- linear algebra over GF(q) on small integer matrices --------------------


def rref(F: FiniteField, rows) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form, zero rows dropped."""
    M = [[int(x) for x in row] for row in rows]
    if not M:
        return ()
    ncols = len(M[0])
    col = 0
    r = 0
    while r < len(M) and col < ncols:
        piv = next((i for i in range(r, len(M)) if M[i][col]), None)
        if piv is None:
            col += 1
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][col])
        M[r] = [F.mul(x, inv) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col]:
                c = M[i][col]
                M[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(M[i], M[r])]
        r += 1
        col += 1
    return tuple(tuple(row) for row in M[:r])


def pivots(basis) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in basis]


def nullspace(F: FiniteField, rows, ncols: int) -> tuple[tuple[int, ...], ...]:
    """Basis (in RREF) of {x : row . x = 0 for every row}."""
    R = rref(F, rows)
    piv = pivots(R)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, piv):
            v[pc] = F.neg(row[f])
        basis.append(v)
    return rref(F, basis)


def invert(F: FiniteField, M) -> list[list[int]]:
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    R = rref(F, aug)
    if len(R) < n or pivots(R)[-1] >= n:
        raise GeometryError("matrix is singular")
    return [list(row[n:]) for row in R]


# -- geometry objects ---------------------------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    id: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class Line:
    id: int
    points: tuple[int, ...]


@dataclass(frozen=True)
class Hyperplane:
    id: int
    dual_coords: tuple[int, ...]
    points: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Subspace:
    """A projective subspace, stored as the RREF basis of its vector space."""

    space: "ProjSpace" = field(repr=False)
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @cached_property
    def equations(self) -> tuple[tuple[int, ...], ...]:
        return nullspace(self.space.field, self.basis, self.space.r + 1)

    @cached_property
    def points(self) -> np.ndarray:
        """Sorted ids of the points of the subspace."""
        sp = self.space
        mask = np.ones(sp.n_points, dtype=bool)
        for eq in self.equations:
            mask &= sp.field.dot(sp.coords, eq) == 0
        return np.flatnonzero(mask)

    def __contains__(self, point) -> bool:
        c = self.space.coords[self.space.pid(point)]
        return all(self.space.field.dot(c[None, :], eq)[0] == 0 for eq in self.equations)

    def __eq__(self, other):
        return isinstance(other, Subspace) and other.space is self.space and other.basis == self.basis

    def __hash__(self):
        return hash(self.basis)


class ProjSpace:
    """PG(r, q).  Lines and hyperplanes are materialised on first use."""

    def __init__(self, field: FiniteField, r: int, max_points: int = DEFAULT_MAX_POINTS):
        if r < 2:
            raise GeometryError("need r >= 2")
        q = field.q
        n = (q ** (r + 1) - 1) // (q - 1)
        if n > max_points:
            raise SpaceTooLarge(f"PG({r},{q}) has {n} points (limit {max_points})")
        self.field = field
        self.r = r
        self.q = q
        self.n_points = n
        coords = [v for v in itertools.product(range(q), repeat=r + 1) if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]
        self.coords = np.array(coords, dtype=np.int64)
        self._weights = q ** np.arange(r, -1, -1, dtype=np.int64)
        self._code_to_id = np.full(q ** (r + 1), -1, dtype=np.int64)
        self._code_to_id[self.coords @ self._weights] = np.arange(n)

    def __repr__(self):
        return f"PG({self.r},{self.q})"

    # -- points ------------------------------------------------------------

    def pid(self, point) -> int:
        if isinstance(point, ProjPoint):
            return point.id
        if isinstance(point, (int, np.integer)):
            return int(point)
        return int(self.ids_of(np.asarray(point)[None, :])[0])

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(int(i), tuple(int(x) for x in self.coords[i]))

    def normalize(self, vecs) -> np.ndarray:
        """Scale each non-zero row so its first non-zero entry is 1."""
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        nz = vecs != 0
        if not nz.any(axis=1).all():
            raise GeometryError("zero vector is not a projective point")
        lead = vecs[np.arange(len(vecs)), nz.argmax(axis=1)]
        return self.field.vmul(vecs, self.field.vinv(lead)[:, None])

    def ids_of(self, vecs) -> np.ndarray:
        """Point ids of arbitrary (unnormalised, non-zero) coordinate rows."""
        return self._code_to_id[self.normalize(vecs) @ self._weights]

    # -- subspaces -----------------------------------------------------------

    def subspace(self, rows) -> Subspace:
        return Subspace(self, rref(self.field, rows))

    def span(self, points) -> Subspace:
        if len(points) == 0:
            raise GeometryError("span of nothing")
        return self.subspace([self.coords[self.pid(p)] for p in points])

    def meet(self, s1: Subspace, s2: Subspace) -> Subspace | None:
        """Intersection of two subspaces, or None when they are disjoint."""
        if s1.space is not self or s2.space is not self:
            raise SpaceMismatch("subspaces from different spaces")
        eqs = list(s1.equations) + list(s2.equations)
        basis = nullspace(self.field, eqs, self.r + 1) if eqs else rref(self.field, np.eye(self.r + 1, dtype=int))
        if not basis:
            return None
        return Subspace(self, basis)

    def join(self, s1: Subspace, s2: Subspace) -> Subspace:
        return self.subspace(list(s1.basis) + list(s2.basis))

    def subspaces(self, dim: int):
        """Yield every subspace of projective dimension ``dim`` (RREF enumeration)."""
        k = dim + 1
        n = self.r + 1
        q = self.q
        for piv in itertools.combinations(range(n), k):
            free = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in piv]
            for vals in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for i, pc in enumerate(piv):
                    rows[i][pc] = 1
                for (i, j), v in zip(free, vals):
                    rows[i][j] = v
                yield Subspace(self, tuple(tuple(row) for row in rows))

    # -- lines ------------------------------------------------------------------

    @cached_property
    def _line_data(self):
        F = self.field
        q = self.q
        scal = np.arange(q)
        pts = []
        bases = []
        for s in self.subspaces(1):
            u = np.array(s.basis[0])
            v = np.array(s.basis[1])
            # u + c v is already normalised (leading 1 of u comes first); v too
            vecs = F.vadd(u[None, :], F.vmul(scal[:, None], v[None, :]))
            ids = self._code_to_id[np.vstack([vecs, v[None, :]]) @ self._weights]
            pts.append(np.sort(ids))
            bases.append(s.basis)
        pts = np.array(pts, dtype=np.int64)
        order = np.lexsort(pts.T[::-1])
        pts = pts[order]
        bases = [bases[i] for i in order]
        return pts, bases

    @property
    def lines(self) -> np.ndarray:
        """(n_lines, q+1) array of sorted point ids, rows in lexicographic order."""
        return self._line_data[0]

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    @cached_property
    def _line_by_basis(self) -> dict:
        return {b: i for i, b in enumerate(self._line_data[1])}

    def line(self, i: int) -> Line:
        return Line(int(i), tuple(int(x) for x in self.lines[i]))

    def line_subspace(self, i: int) -> Subspace:
        return Subspace(self, self._line_data[1][i])

    @cached_property
    def lines_through(self) -> np.ndarray:
        """(n_points, lines per point) array of line ids through each point."""
        flat = self.lines.ravel()
        line_ids = np.repeat(np.arange(self.n_lines), self.q + 1)
        order = np.argsort(flat, kind="stable")
        return line_ids[order].reshape(self.n_points, -1)

    def line_through(self, p1, p2) -> Line:
        a, b = self.pid(p1), self.pid(p2)
        if a == b:
            raise EqualPoints("a line needs two distinct points")
        basis = rref(self.field, [self.coords[a], self.coords[b]])
        return self.line(self._line_by_basis[basis])

    # -- hyperplanes --------------------------------------------------------------

    @property
    def n_hyperplanes(self) -> int:
        return self.n_points

    @cached_property
    def hyperplane_points(self) -> np.ndarray:
        """(n_hyperplanes, points per hyperplane) array of sorted point ids."""
        rows = []
        for h in range(self.n_points):
            rows.append(np.flatnonzero(self.field.dot(self.coords, self.coords[h]) == 0))
        return np.array(rows, dtype=np.int64)

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean matrix: incidence[h, p] is True iff point p lies on hyperplane h."""
        inc = np.zeros((self.n_points, self.n_points), dtype=bool)
        inc[np.arange(self.n_points)[:, None], self.hyperplane_points] = True
        return inc

    def hyperplane(self, i: int) -> Hyperplane:
        return Hyperplane(int(i), tuple(int(x) for x in self.coords[i]), tuple(int(x) for x in self.hyperplane_points[i]))

    def hyperplane_subspace(self, i: int) -> Subspace:
        return Subspace(self, nullspace(self.field, [self.coords[i]], self.r + 1))

    def hyperplane_of(self, s: Subspace) -> int:
        if s.dim != self.r - 1:
            raise GeometryError("not a hyperplane")
        return int(self.ids_of(np.array(s.equations[0])[None, :])[0])

    # -- projection ----------------------------------------------------------------

    def projection_map(self, center, target: int | Hyperplane) -> np.ndarray:
        """Image of every point under projection from ``center`` onto ``target``.

        Entry ``i`` is the id of the point where the line through the center
        and point ``i`` meets the target hyperplane; the center maps to -1.
        """
        F = self.field
        c = self.pid(center)
        h = target.id if isinstance(target, Hyperplane) else int(target)
        hc = F.dot(self.coords[c][None, :], self.coords[h])[0]
        if hc == 0:
            raise CenterOnTarget("the center lies on the target hyperplane")
        hq = F.dot(self.coords, self.coords[h])
        lam = F.vneg(F.vmul(hq, F.inv(int(hc))))
        vecs = F.vadd(self.coords, F.vmul(lam[:, None], self.coords[c][None, :]))
        out = np.full(self.n_points, -1, dtype=np.int64)
        keep = np.arange(self.n_points) != c
        out[keep] = self.ids_of(vecs[keep])
        return out


@lru_cache(maxsize=None)
def build_space(field: FiniteField, r: int) -> ProjSpace:
    """Cached constructor, so analysis code can share tables."""
    return ProjSpace(field, r)


def dual_space(space: ProjSpace) -> tuple[ProjSpace, np.ndarray]:
    """Return the dual space together with the hyperplane -> dual point map.

    With the shared numbering the dual of PG(r, q) is PG(r, q) itself and the
    correspondence is the identity on ids; incidence is symmetric, so
    H contains P iff the dual point of H lies on the dual hyperplane of P.
    """
    return space, np.arange(space.n_hyperplanes)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
