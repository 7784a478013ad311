"""The non-lifted strong (3 mod 5)-arc of size 128 in PG(3, 5).

Pipeline: find a complete 20-cap with plane spectrum (a6, a4, a3, a0) =
(40, 80, 20, 16), split the points of PG(3, 5) into four classes by
incidence invariants relative to the cap, then weight the classes with a
solution of w A = t j (mod q) for the stored point-by-line class matrix A.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .analysis import Cap, cap_check
from .arc import Arc
from .formats import loads_matrix
from .pg import ProjSpace

CAP_SPECTRUM = {6: 40, 4: 80, 3: 20, 0: 16}
ORBIT_SIZES = (40, 80, 20, 16)
ARC128_WEIGHTS = (1, 0, 2, 3)
FOUR_MOD_FIVE_WEIGHTS = ((0, 3, 2, 4), (1, 2, 0, 4), (2, 1, 3, 4), (3, 0, 1, 4))

_ALLOWED_PLANE_SIZES = np.zeros(32, dtype=bool)
_ALLOWED_PLANE_SIZES[list(CAP_SPECTRUM)] = True


class CapSearchTimeout(RuntimeError):
    pass


class PartitionMismatch(ValueError):
    pass


class WrongSpace(ValueError):
    pass


def orbit_matrix() -> np.ndarray:
    """The 4 x 6 point-by-line class matrix shipped with the package."""
    text = resources.files("tmodarcs").joinpath("data/orbit_matrix.txt").read_text()
    return loads_matrix(text)


def _require_pg35(space: ProjSpace):
    if space.q != 5 or space.r != 3:
        raise WrongSpace(f"needs PG(3,5), got {space!r}")


def _penalty(line_cnt, plane_cnt):
    return 10 * np.maximum(line_cnt - 2, 0).sum() + (~_ALLOWED_PLANE_SIZES[plane_cnt]).sum()


def search_cap20(
    space: ProjSpace,
    seed: int = 0,
    budget: int = 2_000_000,
    restart_every: int = 4000,
    temperature: float = 0.5,
) -> Cap:
    """Randomised exchange search for a complete 20-cap with the target spectrum.

    A state is any 20-set of points.  Its penalty counts excess points on
    lines (weighted 10) plus planes whose intersection size is not one of
    0, 3, 4, 6.  Single-point swaps are accepted by a Metropolis rule; a
    zero-penalty state is certified with ``cap_check``.  ``budget`` bounds
    the total number of proposed swaps.
    """
    _require_pg35(space)
    rng = np.random.default_rng(seed)
    n = space.n_points
    lines_thru = space.lines_through
    planes_thru = np.array([np.flatnonzero(space.incidence[:, p]) for p in range(n)])
    moves = 0
    while moves < budget:
        cap = rng.choice(n, 20, replace=False)
        in_cap = np.zeros(n, dtype=bool)
        in_cap[cap] = True
        line_cnt = in_cap[space.lines].sum(axis=1)
        plane_cnt = in_cap[space.hyperplane_points].sum(axis=1)
        score = _penalty(line_cnt, plane_cnt)
        for _ in range(min(restart_every, budget - moves)):
            moves += 1
            i = rng.integers(20)
            b = rng.integers(n)
            if in_cap[b]:
                continue
            a = cap[i]
            la, lb = lines_thru[a], lines_thru[b]
            pa, pb = planes_thru[a], planes_thru[b]
            aff_l = np.concatenate([la, lb])
            aff_p = np.concatenate([pa, pb])
            old = _penalty(line_cnt[aff_l], plane_cnt[aff_p])
            line_cnt[la] -= 1
            line_cnt[lb] += 1
            plane_cnt[pa] -= 1
            plane_cnt[pb] += 1
            delta = _penalty(line_cnt[aff_l], plane_cnt[aff_p]) - old
            if delta <= 0 or rng.random() < np.exp(-delta / temperature):
                cap[i] = b
                in_cap[a] = False
                in_cap[b] = True
                score += delta
            else:
                line_cnt[la] += 1
                line_cnt[lb] -= 1
                plane_cnt[pa] += 1
                plane_cnt[pb] -= 1
            if score == 0:
                found = cap_check(space, cap.tolist())
                if found and found.complete and found.plane_spectrum == CAP_SPECTRUM:
                    return found
                break
    raise CapSearchTimeout(f"no suitable 20-cap within {budget} moves (seed {seed})")


@dataclass(frozen=True)
class OrbitPartition:
    space: ProjSpace = field(repr=False)
    classes: tuple[frozenset, ...]
    labels: np.ndarray = field(repr=False)
    rounds: int

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


def _initial_signatures(space: ProjSpace, in_cap: np.ndarray) -> list:
    line_cnt = in_cap[space.lines].sum(axis=1)
    plane_cnt = in_cap[space.hyperplane_points].sum(axis=1)
    sigs = []
    for p in range(space.n_points):
        by_line = tuple(np.bincount(line_cnt[space.lines_through[p]], minlength=3))
        by_plane = tuple(np.bincount(plane_cnt[space.incidence[:, p]], minlength=7))
        sigs.append((bool(in_cap[p]), by_line, by_plane))
    return sigs


def _relabel(sigs) -> np.ndarray:
    index = {s: i for i, s in enumerate(sorted(set(sigs), key=repr))}
    return np.array([index[s] for s in sigs])


def partition_by_invariants(space: ProjSpace, cap: Cap, max_rounds: int = 10) -> OrbitPartition:
    """Split PG(3,5) into four point classes determined by the cap.

    Start from (cap membership, histogram of cap-secant/tangent/external
    lines, histogram of plane intersection sizes) and refine by the multiset
    of class patterns along the lines through each point until stable.
    """
    _require_pg35(space)
    in_cap = np.zeros(space.n_points, dtype=bool)
    in_cap[list(cap.points)] = True
    colors = _relabel(_initial_signatures(space, in_cap))
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        line_patterns = [tuple(sorted(colors[L])) for L in space.lines]
        sigs = [(int(colors[p]), tuple(sorted(line_patterns[l] for l in space.lines_through[p]))) for p in range(space.n_points)]
        refined = _relabel(sigs)
        if len(set(refined.tolist())) == len(set(colors.tolist())):
            break
        colors = refined
    counts = Counter(colors.tolist())
    if sorted(counts.values()) != sorted(ORBIT_SIZES):
        raise PartitionMismatch(f"invariant classes have sizes {sorted(counts.values())}")
    by_size = {size: color for color, size in counts.items()}
    classes = tuple(frozenset(np.flatnonzero(colors == by_size[s]).tolist()) for s in ORBIT_SIZES)
    if classes[2] != cap.points:
        raise PartitionMismatch("the class of size 20 is not the cap")
    labels = np.empty(space.n_points, dtype=np.int64)
    for i, c in enumerate(classes):
        labels[list(c)] = i
    return OrbitPartition(space, classes, labels, rounds)


def solve_orbit_weights(A, t: int, q: int, max_w: int | None = None) -> list[tuple[int, ...]]:
    """All w with 0 <= w_i <= max_w and w A = t (1, ..., 1) mod q, in lexicographic order."""
    A = np.asarray(A, dtype=np.int64)
    max_w = q - 1 if max_w is None else min(max_w, q - 1)
    out = []
    for w in itertools.product(range(max_w + 1), repeat=A.shape[0]):
        if ((np.array(w) @ A - t) % q == 0).all():
            out.append(w)
    return out


def assemble_weighted_arc(partition: OrbitPartition, w) -> Arc:
    w = np.asarray(w, dtype=np.int64)
    if w.shape != (len(partition.classes),) or (w < 0).any():
        raise ValueError("need one non-negative weight per class")
    return Arc(partition.space, w[partition.labels])


def build_arc128(space: ProjSpace, seed: int = 0, budget: int = 2_000_000) -> Arc:
    cap = search_cap20(space, seed=seed, budget=budget)
    return assemble_weighted_arc(partition_by_invariants(space, cap), ARC128_WEIGHTS)
