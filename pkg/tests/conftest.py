import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from quivstab.quiver import Quiver

settings.register_profile("quick", max_examples=60, deadline=None)
settings.load_profile("quick")


def random_tree(rng: random.Random, n: int) -> Quiver:
    """Random oriented tree on 1..n: attach each vertex to an earlier one."""
    arrows = []
    for v in range(2, n + 1):
        u = rng.randint(1, v - 1)
        arrows.append((u, v) if rng.random() < 0.5 else (v, u))
    return Quiver(n, tuple(arrows))


def random_weights(rng: random.Random, p: int, lo: int = -6, hi: int = 6) -> tuple:
    """Ascending integer vector with zero sum (the last entry absorbs the sum)."""
    while True:
        w = [rng.randint(lo, hi) for _ in range(p - 1)]
        w.append(-sum(w))
        if lo <= w[-1] <= hi or p == 1:
            return tuple(Fraction(x) for x in sorted(w))


@st.composite
def trees(draw, max_n: int = 5):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 10**6))
    return random_tree(random.Random(seed), n)


@pytest.fixture
def rng():
    return random.Random(20261016)


def pair_decomposition_failures(f, delta, gamma, pd) -> list:
    """Every Decomp1 postcondition that ``pd`` violates (empty when all hold)."""
    from quivstab.decomp import markers, mu_of_decomposition
    from quivstab.weights import mu_hom

    bad = []
    d, g = tuple(map(Fraction, delta)), tuple(map(Fraction, gamma))
    p = f.p
    if pd.delta() != d or pd.gamma() != g:
        bad.append("reconstruction")
    coeffs = list(pd.pure_alpha.values()) + list(pd.pure_beta.values()) + list(pd.paired.values())
    if any(c < 0 for c in coeffs):
        bad.append("negative coefficient")
    mk = markers(f)
    i_s, j_s = pd.witness
    if (i_s, j_s) not in f.support:
        bad.append("witness not in support")
    for i, j in pd.paired:
        if not (mk.i0prime <= i <= p - 1 and 1 <= j <= mk.j0 - 1):
            bad.append(f"(a) paired {(i, j)}")
        if (i < i_s and j >= j_s) or (i >= i_s and j < j_s):
            bad.append(f"(c) paired {(i, j)}")
        if not (f.maps_flag(i, j) and not f.flag_in_kernel(i) and not f.image_in_flag(j)):
            bad.append(f"compatibility/basic {(i, j)}")
    for i in pd.pure_alpha:
        if not (i < mk.i0prime or i >= i_s):
            bad.append(f"(b) pure alpha {i}")
    for j in pd.pure_beta:
        if not (j >= mk.j0 or j < j_s):
            bad.append(f"(b) pure beta {j}")
    mu = mu_hom(f, d, g)
    if mu_of_decomposition(f, pd) != mu:
        bad.append("mu additivity")
    if mu != g[j_s - 1] - d[i_s - 1]:
        bad.append("witness does not attain mu")
    for c, dp, gp in pd.pieces():
        if c and mu_hom(f, dp, gp) != gp[j_s - 1] - dp[i_s - 1]:
            bad.append("witness does not attain mu on a piece")
    return bad


def random_sheaf_params(rng: random.Random, q=None, dimX=None):
    """Random valid SheafParams on a random tree (or the given quiver)."""
    from quivstab.exactpoly import RatPoly
    from quivstab.sheafcalc import SheafParams

    q = q or random_tree(rng, rng.randint(1, 5))
    dimX = dimX or rng.randint(1, 3)

    def rat(lo=-5, hi=5):
        return Fraction(rng.randint(lo, hi), rng.randint(1, 4))

    def poly(deg, positive=False):
        cs = [rat() for _ in range(deg)] + [Fraction(rng.randint(1, 5), rng.randint(1, 3))]
        return RatPoly(cs)

    Pbar = {i: poly(dimX) for i in q.vertices}
    sigma = {i: poly(rng.randint(0, dimX - 1)) for i in q.vertices}
    b = {a: Fraction(rng.randint(1, 6), rng.randint(1, 3)) for a in q.arrows}
    r = {i: Fraction(rng.randint(1, 5)) for i in q.vertices}
    return SheafParams(q, dimX, Pbar, sigma, b, r)


def random_profile(rng: random.Random, params):
    from quivstab.exactpoly import RatPoly
    from quivstab.sheafcalc import SubProfile

    dimX = params.dimX
    P = {i: RatPoly([Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(dimX + 1)])
         for i in params.quiver.vertices}
    rk = {i: Fraction(rng.randint(0, int(params.r[i]))) for i in params.quiver.vertices}
    return SubProfile(P, rk)
