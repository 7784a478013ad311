"""Arcs as multiplicity functions on the points of PG(r, q)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .pg import ProjSpace, SpaceMismatch, Subspace, dual_space


class ArcError(ValueError):
    pass


class NotTModQ(ArcError):
    pass


class NotModularError(ArcError):
    pass


class ScalarOutOfRange(ArcError):
    pass


class NotQuasidivisible(ArcError):
    pass


class Arc:
    """A map from the points of ``space`` to the non-negative integers."""

    def __init__(self, space: ProjSpace, mult):
        mult = np.array(mult, dtype=np.int64)
        if mult.shape != (space.n_points,):
            raise ArcError(f"need {space.n_points} multiplicities, got shape {mult.shape}")
        if (mult < 0).any():
            raise ArcError("multiplicities must be non-negative")
        mult.setflags(write=False)
        self.space = space
        self.mult = mult

    @classmethod
    def zero(cls, space: ProjSpace) -> Arc:
        return cls(space, np.zeros(space.n_points, dtype=np.int64))

    @classmethod
    def from_points(cls, space: ProjSpace, points, value: int = 1) -> Arc:
        mult = np.zeros(space.n_points, dtype=np.int64)
        mult[np.asarray(list(points), dtype=np.int64)] = value
        return cls(space, mult)

    @property
    def cardinality(self) -> int:
        return int(self.mult.sum())

    def __getitem__(self, point) -> int:
        return int(self.mult[self.space.pid(point)])

    @cached_property
    def line_values(self) -> np.ndarray:
        return self.mult[self.space.lines].sum(axis=1)

    @cached_property
    def hyperplane_values(self) -> np.ndarray:
        return self.mult[self.space.hyperplane_points].sum(axis=1)

    def support(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.mult).tolist())

    def __add__(self, other: Arc) -> Arc:
        return add_arcs(self, other)

    def __eq__(self, other):
        return isinstance(other, Arc) and other.space is self.space and np.array_equal(other.mult, self.mult)

    def __hash__(self):
        return hash(self.mult.tobytes())

    def __repr__(self):
        return f"Arc({self.space!r}, size={self.cardinality}, max={int(self.mult.max())})"


@dataclass(frozen=True)
class ModClass:
    t: int
    q: int


@dataclass(frozen=True)
class NotModular:
    """Returned by classify_mod when line values disagree mod q."""

    witness_line: int
    residue: int
    expected: int

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Spectrum:
    hyperplanes: dict[int, int]
    lines: dict[int, int]
    points: dict[int, int]

    def a(self, i: int) -> int:
        return self.hyperplanes.get(i, 0)

    def lam(self, i: int) -> int:
        return self.points.get(i, 0)


@dataclass(frozen=True)
class QuasidivisibilityReport:
    n: int
    s: int
    divisor: int
    t: int
    admissible: bool
    smallest_t: int | None


def _check_same_space(a: Arc, b: Arc):
    if a.space is not b.space:
        raise SpaceMismatch("arcs live in different spaces")


def eval_subspace(arc: Arc, s: Subspace) -> int:
    if s.space is not arc.space:
        raise SpaceMismatch("subspace from a different space")
    return int(arc.mult[s.points].sum())


def classify_mod(arc: Arc) -> ModClass | NotModular:
    """Scan every line; all values congruent mod q gives the class t."""
    q = arc.space.q
    res = arc.line_values % q
    t = int(res[0])
    bad = np.flatnonzero(res != t)
    if len(bad):
        return NotModular(int(bad[0]), int(res[bad[0]]), t)
    return ModClass(t, q)


def is_strong(arc: Arc, t: int | ModClass) -> bool:
    t = t.t if isinstance(t, ModClass) else int(t)
    cls = classify_mod(arc)
    if not cls or cls.t != t % arc.space.q:
        raise NotTModQ(f"arc is not a ({t} mod {arc.space.q})-arc: {cls}")
    return int(arc.mult.max()) <= t


def spectrum(arc: Arc) -> Spectrum:
    def counts(values):
        return dict(sorted(Counter(values.tolist()).items()))

    return Spectrum(counts(arc.hyperplane_values), counts(arc.line_values), counts(arc.mult))


def add_arcs(a: Arc, b: Arc) -> Arc:
    _check_same_space(a, b)
    return Arc(a.space, a.mult + b.mult)


def scale_arc(a: Arc, alpha: int) -> Arc:
    if not 0 <= alpha < a.space.field.p:
        raise ScalarOutOfRange(f"scalar must lie in [0, {a.space.field.p - 1}]")
    return Arc(a.space, alpha * a.mult)


def reduce_mod_q(arc: Arc) -> Arc:
    return Arc(arc.space, arc.mult % arc.space.q)


def _admissible(values: np.ndarray, n: int, s: int, divisor: int, t: int) -> bool:
    if (s - n - t) % divisor:
        return False
    allowed = {(n + i) % divisor for i in range(t + 1)}
    return set((np.unique(values) % divisor).tolist()) <= allowed


def quasidivisibility(arc: Arc, divisor: int, t: int) -> QuasidivisibilityReport:
    """Treat ``arc`` as an (n, s)-arc, s the largest hyperplane value."""
    if divisor < 2:
        raise ArcError("divisor must be at least 2")
    vals = arc.hyperplane_values
    n = arc.cardinality
    s = int(vals.max())
    smallest = next((u for u in range(divisor) if _admissible(vals, n, s, divisor, u)), None)
    return QuasidivisibilityReport(n, s, divisor, t, _admissible(vals, n, s, divisor, t), smallest)


def sigma_dual(arc: Arc, t: int) -> Arc:
    """The arc H -> (n + t - K(H)) mod q on the dual space."""
    q = arc.space.q
    report = quasidivisibility(arc, q, t)
    if not report.admissible:
        raise NotQuasidivisible(f"arc is not {t}-quasidivisible with divisor {q}")
    dual, h2p = dual_space(arc.space)
    mult = np.zeros(dual.n_points, dtype=np.int64)
    mult[h2p] = (report.n + t - arc.hyperplane_values) % q
    return Arc(dual, mult)
