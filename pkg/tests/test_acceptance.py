"""Acceptance criteria 1-10, each at its stated (exact) tolerance.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` to get
only the PASS/FAIL summary lines.
"""
import itertools
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import (  # noqa: E402
    pair_decomposition_failures, random_profile, random_sheaf_params, random_tree,
    random_weights,
)
from quivstab.decomp import (  # noqa: E402
    couple_tree, decompose_pair, is_basic, normalize_components, pair_marginals,
    to_pair_coefficients,
)
from quivstab.exactpoly import RatPoly, sign  # noqa: E402
from quivstab.kingrep import (  # noqa: E402
    QuiverRep, all_reps_ff, apply_group, check_semistable, git_check, group_from_flags,
)
from quivstab.linalg import QQ, Field  # noqa: E402
from quivstab.quiver import Quiver, rescale_vector  # noqa: E402
from quivstab.sheafcalc import (  # noqa: E402
    GiesekerData, SheafParams, boundedness_bound, curve_hilbert, full_profile,
    gieseker_l, gieseker_weight_identities, lps_bound, special_profile, tau_from_sigma,
    tau_slope_defect, theta_sheaf, torsion_profile, triple_theta,
)
from quivstab.weights import (  # noqa: E402
    HomPoint, TuplePoint, compatible_flags, flag_weight, mu_hom, recompose, step_decompose,
)

pytestmark = pytest.mark.acceptance
F = Fraction


def emit(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    capman = _CAPTURE.get("capsys")
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)


_CAPTURE: dict = {}


@pytest.fixture(autouse=True)
def _expose_capsys(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


# -- 1 ---------------------------------------------------------------------------

def criterion_1():
    f = HomPoint.from_support(3, 3, [(2, 1), (3, 2)])
    got = tuple(mu_hom(f, lam, lam) for lam in ((-2, 1, 1), (-1, -1, 2), (-3, 0, 3)))
    return got == (0, 0, -3), f"mu for (lambda, lambda', lambda*lambda') = {tuple(map(str, got))}"


# -- 2 ---------------------------------------------------------------------------

def criterion_2():
    rng = random.Random(2)
    bad = 0
    for _ in range(1000):
        p = rng.randint(1, 8)
        while True:
            w = [rng.randint(-20, 20) for _ in range(p - 1)]
            last = -sum(w)
            if -20 <= last <= 20:
                break
        g = tuple(sorted(w + [last]))
        c = step_decompose(g)
        if recompose(c, p) != tuple(map(F, g)) or any(v < 0 for v in c.values()):
            bad += 1
    return bad == 0, f"step decomposition of 1000 random vectors, {bad} failures"


# -- 3 ---------------------------------------------------------------------------

def _weights(p):
    return [w for w in itertools.product(range(-2, 3), repeat=p)
            if sum(w) == 0 and list(w) == sorted(w)]


def criterion_3():
    cases = bad = 0
    first = None
    for p in (1, 2, 3):
        for q in (1, 2, 3):
            for bits in itertools.product((0, 1), repeat=p * q):
                if not any(bits):
                    continue
                f = HomPoint(p, q, [bits[r * p:(r + 1) * p] for r in range(q)])
                for d in _weights(p):
                    for g in _weights(q):
                        cases += 1
                        fails = pair_decomposition_failures(f, d, g, decompose_pair(f, d, g))
                        if fails:
                            bad += 1
                            first = first or (bits, d, g, fails)
    detail = f"{cases} (f, delta, gamma) cases, {bad} failures"
    if first:
        detail += f"; first {first}"
    return bad == 0, detail


# -- 4 ---------------------------------------------------------------------------

def _random_point(rng, q, max_dim=4):
    dims = {i: rng.randint(1, max_dim) for i in q.vertices}
    maps = {}
    for a in q.arrows:
        while True:
            ent = [[rng.choice((0, 0, 1)) for _ in range(dims[a[0]])] for _ in range(dims[a[1]])]
            if any(map(any, ent)):
                break
        maps[a] = HomPoint(dims[a[0]], dims[a[1]], ent)
    return TuplePoint(q, dims, maps)


def criterion_4():
    rng = random.Random(4)
    marg_bad = basic_bad = 0
    for _ in range(200):
        q = random_tree(rng, rng.randint(1, 5))
        pt = _random_point(rng, q)
        lam = {i: random_weights(rng, pt.dims[i]) for i in q.vertices}
        pairs = {a: to_pair_coefficients(pt.maps[a], decompose_pair(pt.maps[a], lam[a[0]], lam[a[1]]))
                 for a in q.arrows}
        masses = {i: {k: lam[i][k] - lam[i][k - 1] for k in range(1, pt.dims[i])}
                  for i in q.vertices}
        td = couple_tree(q, pt.dims, pairs, masses)
        nd = normalize_components(td, pt)
        if pair_marginals(td, q, pt.dims) != pairs or pair_marginals(nd, q, pt.dims) != pairs:
            marg_bad += 1
        if any(not is_basic(dict(zip(q.vertices, k)), pt) for k in nd):
            basic_bad += 1
    ok = marg_bad == 0 and basic_bad == 0
    return ok, f"200 random trees: {marg_bad} marginal mismatches, {basic_bad} non-basic supports"


# -- 5 ---------------------------------------------------------------------------

CRIT5_FAMILY = (
    (Quiver.path(2), [{(1, 2): 1}]),
    (Quiver.path(3), [{(1, 2): 1, (2, 3): 1}, {(1, 2): 1, (2, 3): 2}]),
    (Quiver(3, ((1, 2), (3, 2))), [{(1, 2): 1, (3, 2): 1}, {(1, 2): 1, (3, 2): 2}]),
)


def crit5_reps():
    F2 = Field(2)
    for q, bs in CRIT5_FAMILY:
        for dims in itertools.product((1, 2), repeat=q.n):
            for rep in all_reps_ff(q, F2, dict(zip(q.vertices, dims))):
                yield rep, bs


def criterion_5():
    n = dis = 0
    for rep, bs in crit5_reps():
        for b in bs:
            n += 1
            if check_semistable(rep, b).status != git_check(rep, b).status:
                dis += 1
    return dis == 0, f"{n} (representation, b) pairs over F_2, {dis} disagreements"


# -- 6 ---------------------------------------------------------------------------

def criterion_6_parts():
    rng = random.Random(6)
    counts = dict(full=0, torsion=0, additivity=0, split_b_sigma=0, split_as_stated=0)
    for _ in range(500):
        p = random_sheaf_params(rng)
        if not theta_sheaf(p, full_profile(p)).is_zero():
            counts["full"] += 1
        tors = {i: RatPoly([F(rng.randint(0, 5)), F(rng.randint(0, 3))]) for i in p.quiver.vertices}
        expect = RatPoly()
        for a in p.quiver.arrows:
            t, h = a
            expect = expect + (p.sigma_check(t) * tors[t] + p.sigma_check(h) * tors[h]).scale(p.b[a])
        if theta_sheaf(p, torsion_profile(p, tors)) != expect:
            counts["torsion"] += 1
        x, y = random_profile(rng, p), random_profile(rng, p)
        if theta_sheaf(p, x + y) != theta_sheaf(p, x) + theta_sheaf(p, y):
            counts["additivity"] += 1
        for a in p.quiver.arrows:
            th = theta_sheaf(p, special_profile(p, "split_arrow", a0=a))
            if th != p.sigma_prod.scale(p.b[a]):
                counts["split_b_sigma"] += 1
            if th != p.sigma_prod.scale(p.b[a] * p.r[a[0]]):
                counts["split_as_stated"] += 1
    return counts


def criterion_6():
    c = criterion_6_parts()
    ok = not any(c.values())
    detail = (f"500 parameter sets; mismatches: full={c['full']}, torsion={c['torsion']}, "
              f"K-additivity={c['additivity']}, split-arrow b*sigma={c['split_b_sigma']}, "
              f"split-arrow b*sigma*r_t as stated={c['split_as_stated']}")
    if c["split_as_stated"]:
        detail += " (the stated value carries a factor r_t(a0) the definition of theta does not produce)"
    return ok, detail, c


# -- 7 ---------------------------------------------------------------------------

def criterion_7():
    rng = random.Random(7)
    n = agree = 0
    while n < 500:
        g = rng.randint(0, 3)
        r1, r2 = rng.randint(1, 4), rng.randint(1, 4)
        d1, d2 = rng.randint(-10, 10), rng.randint(-10, 10)
        sigma = F(rng.randint(1, 20), rng.randint(1, 5))
        s1, s2 = rng.randint(0, r1), rng.randint(0, r2)
        if s1 + s2 == 0:
            continue
        e1, e2 = rng.randint(-10, 10), rng.randint(-10, 10)
        th = triple_theta(sigma, sigma, curve_hilbert(s1, e1, g), s1, curve_hilbert(s2, e2, g), s2,
                          curve_hilbert(r1, d1, g), r1, curve_hilbert(r2, d2, g), r2)
        tau = tau_from_sigma(F(d2, r2), r2, sigma)
        defect = tau_slope_defect(d1, r1, d2, r2, e1, s1, e2, s2, tau)
        n += 1
        agree += sign(th) == (defect > 0) - (defect < 0)
    return agree == n, f"sign agreement on {agree}/{n} curve-case sub-triples"


# -- 8 ---------------------------------------------------------------------------

def criterion_8():
    rng = random.Random(8)
    bad = trials = 0
    for _ in range(150):
        q = random_tree(rng, rng.randint(2, 5))
        dims = {i: rng.randint(1, 3) for i in q.vertices}
        mats = {}
        for a in q.arrows:
            while True:
                m = [[F(rng.randint(-3, 3)) for _ in range(dims[a[0]])] for _ in range(dims[a[1]])]
                if any(map(any, m)):
                    break
            mats[a] = m
        rep = QuiverRep(q, QQ, dims, mats)
        a0 = rng.choice(q.arrows)
        z = F(rng.choice([-3, -2, 2, 3, 5]), rng.randint(1, 4))
        out = apply_group(rep, group_from_flags(rep, rescale_vector(q, a0), z))
        trials += 1
        for a in q.arrows:
            want = (tuple(tuple(z * x for x in row) for row in rep.matrices[a]) if a == a0
                    else rep.matrices[a])
            if out.matrices[a] != want:
                bad += 1
                break
    return bad == 0, f"{trials} random trees/arrows, {bad} with a component changed other than by z at a0"


# -- 9 ---------------------------------------------------------------------------

def criterion_9():
    rng = random.Random(9)
    problems = []
    for _ in range(200):
        q = random_tree(rng, rng.randint(2, 5))
        b = {a: F(rng.randint(1, 5), rng.randint(1, 3)) for a in q.arrows}
        s = {i: F(rng.randint(1, 9), rng.randint(1, 3)) for i in q.vertices}
        gd = GiesekerData({i: s[i] + F(rng.randint(1, 9), rng.randint(1, 3)) for i in q.vertices},
                          s, {i: F(rng.randint(1, 4)) for i in q.vertices})
        gw = gieseker_l(q, b, gd)
        if any(al <= 0 for al in gw.alpha.values()) or any(
                gw.l[i] != sum(b[a] * al for (k, a), al in gw.alpha.items() if k == i)
                for i in q.vertices):
            problems.append("gieseker_l")
            break
    for _ in range(1000):
        p = rng.randint(1, 15)
        w = gieseker_weight_identities(p, rng.randint(1, 8), F(rng.randint(1, 30), rng.randint(1, 6)),
                                       rng.randint(0, p), rng.randint(0, 8))
        if not w.holds():
            problems.append("weight identities")
            break
    X = RatPoly.x()
    line = Quiver.path(2)

    def params(s1):
        return SheafParams(line, 1, {1: X + 1, 2: X + 1}, {1: s1, 2: 1}, {(1, 2): 1}, {1: 1, 2: 1})

    c1, c2 = boundedness_bound(params(1), 1).C, boundedness_bound(params(2), 1).C
    l1, l2 = lps_bound(1, 0, 0, 2, 1), lps_bound(2, 0, 0, 1, 1)
    if (c1, c2) != (1, 2):
        problems.append(f"boundedness C = {c1}, {c2}")
    if (l1, l2) != (2, 3):
        problems.append(f"lps = {l1}, {l2}")
    detail = f"C1 = {c1}, {c2}; LPS = {l1}, {l2}; l-decomposition and 1000 weight identities checked"
    if problems:
        detail += "; problems: " + ", ".join(problems)
    return not problems, detail


# -- 10 --------------------------------------------------------------------------

def criterion_10():
    flags = basic = upper_bad = eq_bad = skipped = 0
    for rep, bs in crit5_reps():
        point = rep.to_point()
        if point.has_zero_arrow():
            skipped += 1
            continue
        for jj in compatible_flags(point):
            is_b = is_basic(jj, point)
            for b in bs:
                r = flag_weight(point, jj, b)
                flags += 1
                basic += is_b
                upper_bad += r.exact_mu > r.closed_form
                eq_bad += is_b and not r.equal
    ok = upper_bad == 0 and eq_bad == 0
    return ok, (f"{flags} (flag, b) checks ({basic} basic), {upper_bad} bound violations, "
                f"{eq_bad} basic flags without equality; {skipped} reps with a zero arrow skipped")


# -- pytest entry points -----------------------------------------------------------

def _check(n, result):
    ok, detail = result[:2]
    emit(n, ok, detail)
    assert ok, detail


def test_criterion_1():
    _check(1, criterion_1())


def test_criterion_2():
    _check(2, criterion_2())


def test_criterion_3():
    _check(3, criterion_3())


def test_criterion_4():
    _check(4, criterion_4())


def test_criterion_5():
    _check(5, criterion_5())


_C6: dict = {}


def _criterion_6_cached():
    if "r" not in _C6:
        _C6["r"] = criterion_6()
    return _C6["r"]


def test_criterion_6():
    """Criterion 6 verdict line; asserts the parts that follow from the definition of theta."""
    ok, detail, c = _criterion_6_cached()
    emit(6, ok, detail)
    assert c["full"] == c["torsion"] == c["additivity"] == c["split_b_sigma"] == 0, detail


@pytest.mark.xfail(strict=True, reason="split-arrow value b*sigma*r_t(a0) as stated disagrees with "
                   "the theta definition whenever r_t(a0) != 1; see the decisions ledger")
def test_criterion_6_split_arrow_as_stated():
    _, _, c = _criterion_6_cached()
    assert c["split_as_stated"] == 0, f"{c['split_as_stated']} mismatches"


def test_criterion_7():
    _check(7, criterion_7())


def test_criterion_8():
    _check(8, criterion_8())


def test_criterion_9():
    _check(9, criterion_9())


def test_criterion_10():
    _check(10, criterion_10())


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10)


if __name__ == "__main__":
    failed = 0
    for n, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()[:2]
        emit(n, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
