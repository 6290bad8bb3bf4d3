import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quivstab.decomp import is_basic, markers
from quivstab.quiver import Quiver
from quivstab.weights import (
    DegeneratePointError, FactorTable, HomPoint, TuplePoint, WeightError,
    add_weights, as_weights, check_additivity, chunked, compatible_flags, flag_weight,
    mu_hom, mu_linearized, recompose, scaled, step_decompose, step_vector,
    trivial_weights, unit_step,
)

from conftest import random_weights

F = Fraction
NILP = HomPoint.from_support(3, 3, [(2, 1), (3, 2)])
LINE = Quiver.path(2)


def w(*xs):
    return tuple(F(x) for x in xs)


def test_step_vector_examples():
    assert step_vector(3, 1) == w(-2, 1, 1)
    assert step_vector(3, 2) == w(-1, -1, 2)
    assert step_vector(2, 2) == w(0, 0)
    with pytest.raises(WeightError):
        step_vector(2, 3)


def test_step_decompose_examples():
    assert step_decompose((-1, -1, 2)) == {1: 0, 2: 1}
    assert step_decompose((-2, 1, 1)) == {1: 1, 2: 0}
    c = step_decompose((-5, 1, 4))
    assert c == {1: 2, 2: 1}
    assert add_weights(scaled(step_vector(3, 1), 2), step_vector(3, 2)) == w(-5, 1, 4)
    with pytest.raises(WeightError):
        step_decompose((1, -1))


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=8))
def test_step_decompose_reconstructs(xs):
    xs = sorted(xs)
    xs[-1] -= sum(xs)
    g = tuple(sorted(xs))
    c = step_decompose(g)
    assert all(v >= 0 for v in c.values())
    assert recompose(c, len(g)) == tuple(map(F, g))


def test_mu_hom_examples():
    for lam, expected in (((-2, 1, 1), 0), ((-1, -1, 2), 0), ((-3, 0, 3), -3)):
        assert mu_hom(NILP, lam, lam) == expected
    assert mu_hom(HomPoint.from_support(2, 2, [(2, 1)]), (-1, 1), (-1, 1)) == -2
    with pytest.raises(DegeneratePointError):
        mu_hom(HomPoint(2, 2, [[0, 0], [0, 0]]), (-1, 1), (-1, 1))


def test_mu_convention_pins_both_obs2_branches_and_nonadditivity():
    # the (0, 0, -3) triple fixes the sign and the max-over-support reading
    rep = check_additivity(NILP, (-2, 1, 1), (-2, 1, 1), (-1, -1, 2), (-1, -1, 2))
    assert (rep.mu_first, rep.mu_second, rep.mu_product) == (0, 0, -3)
    assert not rep.additive
    # the opposite sign convention (min of delta_i - gamma_j) would give 0, 0, +3 style values
    alt = [min(F(d[i - 1]) - F(d[j - 1]) for i, j in NILP.support)
           for d in ((-2, 1, 1), (-1, -1, 2), (-3, 0, 3))]
    assert alt != [0, 0, -3]


def _random_nonzero(rng, p, q):
    while True:
        ent = [[rng.choice((0, 0, 1)) for _ in range(p)] for _ in range(q)]
        if any(map(any, ent)):
            return HomPoint(p, q, ent)


def test_obs2_branches():
    rng = random.Random(7)
    for _ in range(300):
        p, q = rng.randint(1, 5), rng.randint(1, 5)
        f = _random_nonzero(rng, p, q)
        mk = markers(f)
        s, t = rng.choice(sorted(f.support))
        for i in range(1, p):
            delta = step_vector(p, i)
            m = F(0) - delta[s - 1]
            mu = mu_hom(f, delta, trivial_weights(q))
            if mk.i0prime <= i < s:
                assert mu == p - i and mu != m
            else:
                assert mu == m
        for j in range(1, q):
            gamma = step_vector(q, j)
            m = gamma[t - 1]
            mu = mu_hom(f, trivial_weights(p), gamma)
            if t <= j < mk.j0:
                assert mu == j and mu != m
            else:
                assert mu == m


def test_mu_linearized_examples():
    diag = HomPoint.diagonal(2)
    pt = TuplePoint(LINE, {1: 2, 2: 2}, {(1, 2): diag})
    b = {(1, 2): 1}
    assert mu_linearized(pt, {1: w(0, 0), 2: w(0, 0)}, b) == 0
    half = unit_step(2, 1)
    assert mu_linearized(pt, {1: half, 2: half}, b) == 0
    corner = TuplePoint(LINE, {1: 2, 2: 2}, {(1, 2): HomPoint.from_support(2, 2, [(1, 2)])})
    assert mu_linearized(corner, {1: w(0, 0), 2: step_vector(2, 1)}, b) == 1
    with pytest.raises(WeightError):
        mu_linearized(pt, {1: half, 2: half}, b, l={1: 1})
    table = FactorTable((((1, 0), True), ((0, 1), False)))
    assert mu_linearized(pt, {1: w(-1, 1), 2: w(-1, 1)}, b, l={1: 2}, tables={1: table}) == -2


def test_flag_weight_examples():
    pt = TuplePoint(LINE, {1: 2, 2: 2}, {(1, 2): HomPoint.diagonal(2)})
    b = {(1, 2): 1}
    r = flag_weight(pt, {1: 1, 2: 1}, b)
    assert r.closed_form == 0 and r.exact_mu == 0 and r.equal
    assert flag_weight(pt, {1: 0, 2: 1}, b).closed_form == F(1, 2)
    r = flag_weight(pt, {1: 0, 2: 0}, b)
    assert r.closed_form == r.exact_mu == 0
    with pytest.raises(WeightError):
        flag_weight(pt, {1: 1, 2: 0}, b)


def test_check_additivity_examples():
    assert check_additivity(NILP, (-2, 1, 1), (-2, 1, 1), (0, 0, 0), (0, 0, 0)).additive
    r = check_additivity(HomPoint.diagonal(2), (-1, 1), (-1, 1), (-1, 1), (-1, 1))
    assert (r.mu_first, r.mu_second, r.mu_product, r.additive) == (0, 0, 0, True)


def test_subadditivity_and_homogeneity():
    rng = random.Random(3)
    for _ in range(300):
        p, q = rng.randint(1, 4), rng.randint(1, 4)
        f = _random_nonzero(rng, p, q)
        d, g = random_weights(rng, p), random_weights(rng, q)
        d2, g2 = random_weights(rng, p), random_weights(rng, q)
        r = check_additivity(f, d, g, d2, g2)
        assert r.mu_product <= r.mu_first + r.mu_second
        c = F(rng.randint(1, 9), rng.randint(1, 9))
        assert mu_hom(f, scaled(d, c), scaled(g, c)) == c * mu_hom(f, d, g)


def test_flag_weight_ess_bound_random():
    rng = random.Random(11)
    for _ in range(60):
        p1, p2 = rng.randint(1, 3), rng.randint(1, 3)
        f = _random_nonzero(rng, p1, p2)
        pt = TuplePoint(LINE, {1: p1, 2: p2}, {(1, 2): f})
        b = {(1, 2): F(rng.randint(1, 4))}
        for jj in compatible_flags(pt):
            r = flag_weight(pt, jj, b)
            assert r.exact_mu <= r.closed_form
            if is_basic(jj, pt):
                assert r.equal


def test_weight_vector_validation():
    with pytest.raises(WeightError):
        as_weights((1, 0, -1))
    with pytest.raises(WeightError):
        as_weights((0, 1))
    assert as_weights(("1/2", "1/2"), check_sum=False) == w(F(1, 2), F(1, 2))


def test_homppoint_json_and_chunks():
    assert HomPoint.diagonal(2).to_json() == [["1", "0"], ["0", "1"]]
    assert list(chunked(range(5), 2)) == [[0, 1], [2, 3], [4]]
    with pytest.raises(WeightError):
        TuplePoint(LINE, {1: 2, 2: 1}, {(1, 2): HomPoint.diagonal(2)})
