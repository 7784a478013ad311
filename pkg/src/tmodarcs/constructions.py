"""Generators for (t mod q)-arcs.

Covers lifting, the two quadric arcs, Hermitian arcs, arcs on sets of type
(m, m + sqrt q), and the sporadic strong (3 mod 5)-arcs of PG(2, 5).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .arc import Arc, NotModularError, classify_mod
from .pg import GeometryError, ProjSpace, Subspace, invert, rref

PointSet = frozenset


class ConstructionError(ValueError):
    pass


class NotDisjoint(ConstructionError):
    pass


class DimensionMismatch(ConstructionError):
    pass


class KindDimensionMismatch(ConstructionError):
    pass


class NonSquareQ(ConstructionError):
    pass


class EvenQ(ConstructionError):
    pass


class WrongField(ConstructionError):
    pass


class NotTypeMN(ConstructionError):
    def __init__(self, msg, witness_line):
        super().__init__(msg)
        self.witness_line = witness_line


# -- lifting --------------------------------------------------------------------


def embed_arc(arc0: Arc, sigma: Subspace) -> Arc:
    """Copy an arc of PG(s, q) onto the s-space ``sigma`` of a larger space."""
    space = sigma.space
    if arc0.space.r != sigma.dim or arc0.space.field != space.field:
        raise DimensionMismatch("arc does not fit the subspace")
    F = space.field
    images = space.ids_of(F.matmul(arc0.space.coords, np.array(sigma.basis)))
    mult = np.zeros(space.n_points, dtype=np.int64)
    mult[images] = arc0.mult
    return Arc(space, mult)


def lift(arc0: Arc, sigma: Subspace, gamma: Subspace) -> Arc:
    """Lifted arc of the ambient space of ``sigma`` over the center ``gamma``.

    ``arc0`` lives on PG(s, q) and is placed on ``sigma`` through its basis.
    Points of ``gamma`` get weight t; any other point Q gets the value of
    ``arc0`` at the point where <gamma, Q> meets ``sigma``.
    """
    space = sigma.space
    if gamma.space is not space:
        raise GeometryError("sigma and gamma come from different spaces")
    if arc0.space.r != sigma.dim or arc0.space.field != space.field:
        raise DimensionMismatch("arc does not live on a space of the dimension of sigma")
    if sigma.dim + gamma.dim != space.r - 1:
        raise DimensionMismatch("need dim sigma + dim gamma = r - 1")
    if space.meet(sigma, gamma) is not None:
        raise NotDisjoint("sigma and gamma intersect")
    cls = classify_mod(arc0)
    if not cls:
        raise NotModularError(f"base arc is not a (t mod q)-arc: {cls}")
    F = space.field
    k = sigma.dim + 1
    # coordinates of every point in the basis sigma + gamma
    M_inv = np.array(invert(F, list(sigma.basis) + list(gamma.basis)))
    coeff = F.matmul(space.coords, M_inv)[:, :k]
    in_gamma = ~coeff.any(axis=1)
    mult = np.full(space.n_points, cls.t, dtype=np.int64)
    mult[~in_gamma] = arc0.mult[arc0.space.ids_of(coeff[~in_gamma])]
    return Arc(space, mult)


def lift_size(q: int, r: int, s: int, base_size: int, t: int) -> int:
    return q ** (r - s) * base_size + t * (q ** (r - s) - 1) // (q - 1)


def detect_lifting_points(arc: Arc) -> PointSet:
    """All points P from which ``arc`` is a lift with one-point center {P}.

    P qualifies when K(P) = t (mod q) and on every line through P the other
    q points carry equal multiplicity.
    """
    cls = classify_mod(arc)
    if not cls:
        raise NotModularError(f"arc is not a (t mod q)-arc: {cls}")
    space = arc.space
    vals = arc.mult[space.lines]
    n_cols = vals.shape[1]
    # ok[l, j]: on line l, all points except position j have equal value
    ok = np.empty(vals.shape, dtype=bool)
    for j in range(n_cols):
        rest = np.delete(vals, j, axis=1)
        ok[:, j] = rest.min(axis=1) == rest.max(axis=1)
    ok_at_point = np.ones(space.n_points, dtype=bool)
    np.logical_and.at(ok_at_point, space.lines.ravel(), ok.ravel())
    ok_at_point &= arc.mult % space.q == cls.t
    return frozenset(np.flatnonzero(ok_at_point).tolist())


# -- quadrics ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """F(x) = x^T M x with M symmetric over GF(q), q odd."""

    space: ProjSpace = field(repr=False)
    matrix: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        F = self.space.field
        if F.p == 2:
            raise EvenQ("quadratic forms need odd q")
        M = np.asarray(self.matrix, dtype=np.int64)
        n = self.space.r + 1
        if M.shape != (n, n) or not np.array_equal(M, M.T):
            raise ConstructionError("quadratic form matrix must be symmetric of size r+1")
        object.__setattr__(self, "matrix", M)

    def evaluate(self, coords) -> np.ndarray:
        F = self.space.field
        X = np.atleast_2d(coords)
        n = X.shape[1]
        acc = np.zeros(len(X), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if self.matrix[i, j]:
                    acc = F.vadd(acc, F.vmul(F.vmul(X[:, i], X[:, j]), int(self.matrix[i, j])))
        return acc

    @cached_property
    def values(self) -> np.ndarray:
        """F on the normalised representative of every point."""
        return self.evaluate(self.space.coords)

    @property
    def rank(self) -> int:
        return len(rref(self.space.field, self.matrix))

    @property
    def is_degenerate(self) -> bool:
        return self.rank < self.space.r + 1

    def zero_set(self) -> PointSet:
        return frozenset(np.flatnonzero(self.values == 0).tolist())


def form_from_products(space: ProjSpace, terms, kind: str = "custom") -> QuadraticForm:
    """Build a form from monomials ``{(i, j): coeff}`` meaning coeff * x_i x_j."""
    F = space.field
    half = F.inv(F.from_digits([2]))
    n = space.r + 1
    M = np.zeros((n, n), dtype=np.int64)
    for (i, j), c in terms.items():
        c = int(c)
        if i == j:
            M[i, i] = F.add(int(M[i, i]), c)
        else:
            h = F.mul(c, half)
            M[i, j] = F.add(int(M[i, j]), h)
            M[j, i] = F.add(int(M[j, i]), h)
    return QuadraticForm(space, M, kind)


def standard_quadric(space: ProjSpace, kind: str) -> QuadraticForm:
    """Canonical non-degenerate quadric of the given kind.

    hyperbolic: x0 x1 + x2 x3 + ... + x_{r-1} x_r           (r odd)
    elliptic:   x0 x1 + ... + x_{r-3} x_{r-2} + x_{r-1}^2 - n x_r^2, n the least non-square  (r odd)
    parabolic:  x0^2 + x1 x2 + ... + x_{r-1} x_r              (r even)
    """
    F = space.field
    if F.p == 2:
        raise EvenQ("standard quadrics are implemented for odd q only")
    r = space.r
    terms = {}
    if kind == "hyperbolic":
        if r % 2 == 0:
            raise KindDimensionMismatch("hyperbolic quadrics need odd r")
        for i in range(0, r, 2):
            terms[(i, i + 1)] = 1
    elif kind == "elliptic":
        if r % 2 == 0:
            raise KindDimensionMismatch("elliptic quadrics need odd r")
        for i in range(0, r - 1, 2):
            terms[(i, i + 1)] = 1
        terms[(r - 1, r - 1)] = 1
        terms[(r, r)] = F.neg(F.least_nonsquare())
    elif kind == "parabolic":
        if r % 2:
            raise KindDimensionMismatch("parabolic quadrics need even r")
        terms[(0, 0)] = 1
        for i in range(1, r, 2):
            terms[(i, i + 1)] = 1
    else:
        raise ConstructionError(f"unknown quadric kind {kind!r}")
    return form_from_products(space, terms, kind)


def quadric_arc(form: QuadraticForm, variant: int = 1) -> Arc:
    """(q+1)/2 on the quadric; variant 1 puts 1 on non-square points, variant 2 on squares."""
    F = form.space.field
    if F.p == 2:
        raise EvenQ("quadric arcs need odd q")
    if variant not in (1, 2):
        raise ConstructionError("variant must be 1 or 2")
    vals = form.values
    zero = vals == 0
    square = F.square_mask[vals]
    mult = np.where(zero, (F.q + 1) // 2, 0)
    if variant == 1:
        mult[~zero & ~square] = 1
    else:
        mult[~zero & square] = 1
    return Arc(form.space, mult)


def quadric_arc_size(q: int, r: int, kind: str, variant: int = 1) -> int:
    """Closed-form size of the quadric arcs for the standard forms above."""
    h = (q + 1) // 2
    if r % 2:
        a, b = (r + 1) // 2, (r - 1) // 2
        if kind == "elliptic":
            return h * (q**a + 1) * (q**b - 1) // (q - 1) + (q**r + q**b) // 2
        if kind == "hyperbolic":
            return h * (q**b + 1) * (q**a - 1) // (q - 1) + (q**r - q**b) // 2
        raise KindDimensionMismatch(kind)
    if kind != "parabolic":
        raise KindDimensionMismatch(kind)
    sign = -1 if variant == 1 else 1
    return h * (q**r - 1) // (q - 1) + (q**r + sign * q ** (r // 2)) // 2


def quadric_line_values(q: int) -> set[int]:
    """The line values allowed for a quadric arc (up to a full line on the quadric)."""
    h = (q + 1) // 2
    return {2 * h + (q - 1) // 2, h + q, h, (q + 1) * h}


# -- Hermitian varieties and sets of type (m, n) -------------------------------------


@dataclass(frozen=True, eq=False)
class HermitianForm:
    """H(x) = sum_ij x_i M_ij x_j^sqrt(q) with M equal to its conjugate transpose."""

    space: ProjSpace = field(repr=False)
    matrix: np.ndarray

    def __post_init__(self):
        F = self.space.field
        if F.e % 2:
            raise NonSquareQ(f"q = {F.q} is not a square")
        M = np.asarray(self.matrix, dtype=np.int64)
        n = self.space.r + 1
        if M.shape != (n, n) or not np.array_equal(F.conj_table[M.T], M):
            raise ConstructionError("matrix is not Hermitian")
        object.__setattr__(self, "matrix", M)

    def evaluate(self, coords) -> np.ndarray:
        F = self.space.field
        X = np.atleast_2d(coords)
        Xc = F.conj_table[X]
        n = X.shape[1]
        acc = np.zeros(len(X), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if self.matrix[i, j]:
                    acc = F.vadd(acc, F.vmul(F.vmul(X[:, i], Xc[:, j]), int(self.matrix[i, j])))
        return acc

    @property
    def rank(self) -> int:
        return len(rref(self.space.field, self.matrix))


def standard_hermitian(space: ProjSpace) -> HermitianForm:
    return HermitianForm(space, np.eye(space.r + 1, dtype=np.int64))


def hermitian_variety(space: ProjSpace, form: HermitianForm | None = None) -> PointSet:
    """Zero set of ``form`` (default x0^(s+1) + ... + xr^(s+1), s = sqrt q)."""
    if space.field.e % 2:
        raise NonSquareQ(f"q = {space.q} is not a square")
    form = form or standard_hermitian(space)
    return frozenset(np.flatnonzero(form.evaluate(space.coords) == 0).tolist())


def hermitian_arc(space: ProjSpace, form: HermitianForm | None = None) -> Arc:
    return Arc.from_points(space, hermitian_variety(space, form), space.field.sqrt_q)


def baer_subgeometry(space: ProjSpace) -> PointSet:
    """Points whose normalised coordinates all lie in GF(sqrt q)."""
    F = space.field
    if F.e % 2:
        raise NonSquareQ(f"q = {F.q} is not a square")
    fixed = F.conj_table == np.arange(F.q)
    return frozenset(np.flatnonzero(fixed[space.coords].all(axis=1)).tolist())


def line_intersection_sizes(space: ProjSpace, points) -> np.ndarray:
    ind = np.zeros(space.n_points, dtype=np.int64)
    ind[list(points)] = 1
    return ind[space.lines].sum(axis=1)


def mn_set_arc(space: ProjSpace, points, m: int) -> Arc:
    """sqrt(q) on a set meeting every line in m or m + sqrt(q) points."""
    s = space.field.sqrt_q if space.field.e % 2 == 0 else None
    if s is None:
        raise NonSquareQ(f"q = {space.q} is not a square")
    sizes = line_intersection_sizes(space, points)
    bad = np.flatnonzero((sizes != m) & (sizes != m + s))
    if len(bad):
        raise NotTypeMN(f"line {bad[0]} meets the set in {sizes[bad[0]]} points", int(bad[0]))
    return Arc.from_points(space, points, s)


# -- the plane (3 mod 5)-arcs ----------------------------------------------------------


def _require_pg25(space: ProjSpace):
    if space.q != 5 or space.r != 2:
        raise WrongField(f"needs PG(2,5), got {space!r}")


def conic(space: ProjSpace) -> PointSet:
    """The conic x0 x2 = x1^2."""
    F = space.field
    form = form_from_products(space, {(0, 2): 1, (1, 1): F.neg(1)})
    return form.zero_set()


def oval_external_internal(space: ProjSpace, oval) -> tuple[PointSet, PointSet]:
    """Split the points off an oval into (external, internal) by tangent lines."""
    oval = frozenset(oval)
    sizes = line_intersection_sizes(space, oval)
    on_tangent = np.zeros(space.n_points, dtype=bool)
    on_tangent[space.lines[sizes == 1].ravel()] = True
    rest = [p for p in range(space.n_points) if p not in oval]
    external = frozenset(p for p in rest if on_tangent[p])
    return external, frozenset(rest) - external


def diagonal_points(space: ProjSpace, quad) -> list[int]:
    """Diagonal points of a quadrangle (meets of opposite sides)."""
    a, b, c, d = quad
    out = []
    for (p1, p2), (p3, p4) in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
        s1 = space.line_through(p1, p2).points
        s2 = space.line_through(p3, p4).points
        (x,) = set(s1) & set(s2)
        out.append(x)
    return out


STANDARD_FRAME = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def plane_arc_18(space: ProjSpace) -> Arc:
    """Sum of the three coordinate lines."""
    _require_pg25(space)
    mult = np.zeros(space.n_points, dtype=np.int64)
    for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        mult[space.hyperplane_points[space.pid(v)]] += 1
    return Arc(space, mult)


def plane_arc_23(space: ProjSpace) -> Arc:
    """2 on a quadrangle, 3 on its diagonal points, 1 where diagonal lines cross sides."""
    _require_pg25(space)
    quad = [space.pid(v) for v in STANDARD_FRAME]
    diag = diagonal_points(space, quad)
    sides = set()
    for p1, p2 in combinations(quad, 2):
        sides |= set(space.line_through(p1, p2).points)
    ones = set()
    for d1, d2 in combinations(diag, 2):
        ones |= set(space.line_through(d1, d2).points) & sides
    ones -= set(diag)
    mult = np.zeros(space.n_points, dtype=np.int64)
    mult[quad] = 2
    mult[diag] = 3
    mult[sorted(ones)] = 1
    return Arc(space, mult)


def plane_arc_28(space: ProjSpace) -> Arc:
    """3 on the conic, 1 on its internal points."""
    _require_pg25(space)
    oval = conic(space)
    _, internal = oval_external_internal(space, oval)
    mult = np.zeros(space.n_points, dtype=np.int64)
    mult[sorted(oval)] = 3
    mult[sorted(internal)] = 1
    return Arc(space, mult)


def plane_arc_33(space: ProjSpace) -> Arc:
    """3 on the conic, 1 on its external points."""
    _require_pg25(space)
    oval = conic(space)
    external, _ = oval_external_internal(space, oval)
    mult = np.zeros(space.n_points, dtype=np.int64)
    mult[sorted(oval)] = 3
    mult[sorted(external)] = 1
    return Arc(space, mult)


PLANE_ARCS = {18: plane_arc_18, 23: plane_arc_23, 28: plane_arc_28, 33: plane_arc_33}


def coordinate_subspace(space: ProjSpace, indices) -> Subspace:
    """Span of the unit vectors e_i, i in ``indices``."""
    n = space.r + 1
    return space.subspace([[1 if j == i else 0 for j in range(n)] for i in indices])


def complement(space: ProjSpace, s: Subspace) -> Subspace:
    """A subspace disjoint from ``s`` of complementary dimension (unit vectors off the pivots)."""
    piv = {next(j for j, x in enumerate(row) if x) for row in s.basis}
    return coordinate_subspace(space, [j for j in range(space.r + 1) if j not in piv])

