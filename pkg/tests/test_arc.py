import numpy as np
import pytest

from pools import modular_pool, quasidivisible_pool, random_pool
from tmodarcs.arc import (
    Arc,
    ArcError,
    ModClass,
    NotModular,
    NotQuasidivisible,
    NotTModQ,
    ScalarOutOfRange,
    add_arcs,
    classify_mod,
    eval_subspace,
    is_strong,
    quasidivisibility,
    reduce_mod_q,
    scale_arc,
    sigma_dual,
    spectrum,
)
from tmodarcs.constructions import standard_quadric
from tmodarcs.gf import GF
from tmodarcs.pg import SpaceMismatch, build_space


def hyperplane_arc(space, h=0):
    return Arc.from_points(space, space.hyperplane_points[h])


def test_arc_validation(pg25):
    with pytest.raises(ArcError):
        Arc(pg25, np.zeros(30))
    with pytest.raises(ArcError):
        Arc(pg25, -np.ones(31))
    a = Arc.zero(pg25)
    with pytest.raises(ValueError):
        a.mult[0] = 1


def test_eval_subspace(pg35, arc143):
    zero = Arc.zero(pg35)
    for plane in list(pg35.subspaces(2))[:10]:
        assert eval_subspace(zero, plane) == 0
    ones = Arc(pg35, np.ones(156, dtype=int))
    assert eval_subspace(ones, pg35.line_subspace(0)) == 6
    Q = standard_quadric(pg35, "elliptic").zero_set()
    secants = [i for i in range(pg35.n_lines) if len(Q & set(pg35.lines[i].tolist())) == 2]
    assert secants
    for i in secants:
        assert eval_subspace(arc143, pg35.line_subspace(i)) == 8
    other = build_space(GF(5), 2)
    with pytest.raises(SpaceMismatch):
        eval_subspace(arc143, other.line_subspace(0))


def test_classify_examples(pg35, pg25):
    assert classify_mod(hyperplane_arc(pg35)) == ModClass(1, 5)
    assert classify_mod(Arc.zero(pg35)) == ModClass(0, 5)
    single = Arc.from_points(pg25, [0])
    res = classify_mod(single)
    assert isinstance(res, NotModular) and not res
    # line 0 passes through point 0, so the witness is the first line missing it
    assert 0 in pg25.lines[0]
    assert res.witness_line == next(i for i, L in enumerate(pg25.lines) if 0 not in L)
    assert (res.residue, res.expected) == (0, 1)


def test_classify_matches_line_scan():
    for arc in random_pool(60, seed=4):
        vals = [int(arc.mult[L].sum()) % arc.space.q for L in arc.space.lines]
        res = classify_mod(arc)
        if len(set(vals)) == 1:
            assert res.t == vals[0]
        else:
            assert not res
            assert res.witness_line == next(i for i, v in enumerate(vals) if v != vals[0])


def test_is_strong(pg35, arc143):
    assert is_strong(hyperplane_arc(pg35), 1)
    assert is_strong(arc143, 3)
    inflated = Arc(pg35, arc143.mult + 5 * (np.arange(156) == 0))
    assert classify_mod(inflated).t == 3
    assert not is_strong(inflated, 3)
    with pytest.raises(NotTModQ):
        is_strong(arc143, 2)


def test_spectrum_examples(pg35):
    sp = spectrum(Arc.zero(pg35))
    assert sp.hyperplanes == {0: 156} and sp.a(0) == 156 and sp.lam(0) == 156


def test_spectrum_identities():
    for arc in random_pool(40, seed=2):
        space = arc.space
        sp = spectrum(arc)
        assert sum(sp.hyperplanes.values()) == space.n_hyperplanes
        assert sum(sp.lines.values()) == space.n_lines
        assert sum(sp.points.values()) == space.n_points
        assert sum(i * c for i, c in sp.points.items()) == arc.cardinality
        per_point = (space.q**space.r - 1) // (space.q - 1)
        assert sum(i * c for i, c in sp.hyperplanes.items()) == arc.cardinality * per_point


def test_sum_and_scale_examples(pg35, pg25):
    two = add_arcs(hyperplane_arc(pg35, 0), hyperplane_arc(pg35, 1))
    assert two.cardinality == 62 and classify_mod(two).t == 2
    lines = [pg25.pid(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    three = hyperplane_arc(pg25, lines[0]) + hyperplane_arc(pg25, lines[1]) + hyperplane_arc(pg25, lines[2])
    assert three.cardinality == 18 and classify_mod(three).t == 3
    assert scale_arc(three, 0) == Arc.zero(pg25)
    with pytest.raises(ScalarOutOfRange):
        scale_arc(three, 5)
    with pytest.raises(SpaceMismatch):
        add_arcs(three, two)


def test_sum_scale_modular_arithmetic():
    pool = modular_pool(120, seed=1)
    by_space = {}
    for arc, t in pool:
        assert classify_mod(arc).t == t
        by_space.setdefault(id(arc.space), []).append((arc, t))
    rng = np.random.default_rng(0)
    checked = 0
    for group in by_space.values():
        for (a, ta), (b, tb) in zip(group, group[1:]):
            q, p = a.space.q, a.space.field.p
            assert classify_mod(add_arcs(a, b)).t == (ta + tb) % q
            alpha = int(rng.integers(p))
            assert classify_mod(scale_arc(a, alpha)).t == alpha * ta % q
            checked += 1
    assert checked >= 100


def test_reduce_mod_q(pg25):
    mult = np.zeros(31, dtype=int)
    mult[0] = 7
    assert reduce_mod_q(Arc(pg25, mult)).mult[0] == 2
    for arc, t in modular_pool(10, seed=9):
        red = reduce_mod_q(arc)
        assert red.mult.max() < arc.space.q
        assert classify_mod(red).t == t
        assert reduce_mod_q(red) == red


def qd_oracle(arc, divisor, t):
    vals = [int(arc.mult[H].sum()) for H in arc.space.hyperplane_points]
    n, s = arc.cardinality, max(vals)
    allowed = {(n + i) % divisor for i in range(t + 1)}
    return (s - n - t) % divisor == 0 and all(v % divisor in allowed for v in vals)


def test_quasidivisibility_examples(pg35):
    H = hyperplane_arc(pg35)
    rep = quasidivisibility(H, 5, 0)
    assert (rep.n, rep.s, rep.admissible, rep.smallest_t) == (31, 31, True, 0)
    assert not quasidivisibility(H, 5, 1).admissible
    with pytest.raises(ArcError):
        quasidivisibility(H, 1, 0)


def test_quasidivisibility_against_definition():
    negatives = 0
    for arc in random_pool(60, seed=7):
        for t in range(arc.space.q):
            rep = quasidivisibility(arc, arc.space.q, t)
            assert rep.admissible == qd_oracle(arc, arc.space.q, t)
            negatives += not rep.admissible
    assert negatives > 0


def test_sigma_dual_examples(pg25, pg35):
    dual = sigma_dual(hyperplane_arc(pg25), 0)
    assert classify_mod(dual).t == 0
    assert sigma_dual(Arc.zero(pg35), 0) == Arc.zero(pg35)
    with pytest.raises(NotQuasidivisible):
        sigma_dual(hyperplane_arc(pg25), 1)


def test_sigma_dual_values():
    for arc, t in quasidivisible_pool(30, seed=11):
        q = arc.space.q
        dual = sigma_dual(arc, t)
        expected = (arc.cardinality + t - arc.hyperplane_values) % q
        assert (dual.mult == expected).all()
        assert is_strong(dual, t)
