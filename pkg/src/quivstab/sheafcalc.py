"""Polynomial-valued stability calculus for representations in sheaves.

Only numerical data is modelled: Hilbert polynomials, ranks, Euler
characteristics.  Every quantity is exact (Fractions and RatPoly).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple

from .exactpoly import RatPoly, format_rat, parse_rat, poly_prod, sign
from .quiver import (
    FULL,
    G_SLOT,
    ZERO,
    Arrow,
    Quiver,
    QuiverError,
    boundedness_split,
    require_tree,
    split_at_arrow,
)


class ParameterError(ValueError):
    """Stability parameters violate their positivity or degree constraints."""


def _poly(x) -> RatPoly:
    return RatPoly.parse(x)


@dataclass(frozen=True)
class SheafParams:
    quiver: Quiver
    dimX: int
    Pbar: Mapping[int, RatPoly]
    sigma: Mapping[int, RatPoly]
    b: Mapping[Arrow, Fraction]
    r: Mapping[int, Fraction]

    def __post_init__(self):
        q = self.quiver
        if self.dimX < 1:
            raise ParameterError("dim X must be positive")
        P = {i: _poly(self.Pbar[i]) for i in q.vertices}
        s = {i: _poly(self.sigma[i]) for i in q.vertices}
        r = {i: parse_rat(self.r[i]) for i in q.vertices}
        b = {a: parse_rat(self.b[a]) for a in q.arrows}
        for i in q.vertices:
            if P[i].is_zero():
                raise ParameterError(f"P_{i} is the zero polynomial")
            if not s[i].is_positive():
                raise ParameterError(f"sigma_{i} = {s[i]} is not a positive polynomial")
            if s[i].degree > self.dimX - 1:
                raise ParameterError(f"sigma_{i} has degree {s[i].degree} > dim X - 1")
            if r[i] <= 0:
                raise ParameterError(f"rank r_{i} must be positive")
        for a, v in b.items():
            if v <= 0:
                raise ParameterError(f"b on arrow {a[0]}->{a[1]} must be positive")
        for name, val in (("Pbar", P), ("sigma", s), ("r", r), ("b", b)):
            object.__setattr__(self, name, val)

    @property
    def sigma_prod(self) -> RatPoly:
        return poly_prod(self.sigma[i] for i in self.quiver.vertices)

    def sigma_check(self, i: int) -> RatPoly:
        return poly_prod(self.sigma[k] for k in self.quiver.vertices if k != i)


@dataclass(frozen=True)
class SubProfile:
    P: Mapping[int, RatPoly]
    rk: Mapping[int, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "P", {i: _poly(v) for i, v in self.P.items()})
        object.__setattr__(self, "rk", {i: parse_rat(v) for i, v in self.rk.items()})

    def __add__(self, other: "SubProfile") -> "SubProfile":
        return SubProfile({i: self.P[i] + other.P[i] for i in self.P},
                          {i: self.rk[i] + other.rk[i] for i in self.rk})

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.P.values()) and not any(self.rk.values())

    def is_full(self, params: SheafParams) -> bool:
        return all(self.P[i] == params.Pbar[i] and self.rk[i] == params.r[i]
                   for i in params.quiver.vertices)

    def to_json(self) -> dict:
        return {"P": {str(i): p.to_json() for i, p in sorted(self.P.items())},
                "rk": {str(i): format_rat(v) for i, v in sorted(self.rk.items())}}


def full_profile(params: SheafParams) -> SubProfile:
    return SubProfile(dict(params.Pbar), dict(params.r))


def zero_profile(params: SheafParams) -> SubProfile:
    return SubProfile({i: RatPoly() for i in params.quiver.vertices},
                      {i: 0 for i in params.quiver.vertices})


def _check_shape(params: SheafParams, prof: SubProfile) -> None:
    vs = set(params.quiver.vertices)
    if set(prof.P) != vs or set(prof.rk) != vs:
        raise ParameterError("profile does not cover exactly the quiver's vertices")


def theta_sheaf(params: SheafParams, prof: SubProfile) -> RatPoly:
    _check_shape(params, prof)
    out = RatPoly()
    for a in params.quiver.arrows:
        t, h = a
        tail = prof.P[t] - (params.Pbar[t] - params.sigma[t]).scale(prof.rk[t] / params.r[t])
        head = prof.P[h] - (params.Pbar[h] + params.sigma[h]).scale(prof.rk[h] / params.r[h])
        out = out + (params.sigma_check(t) * tail + params.sigma_check(h) * head).scale(params.b[a])
    return out


# -- special profiles ----------------------------------------------------------

def torsion_profile(params: SheafParams, torsion: Mapping[int, object]) -> SubProfile:
    """Rank-zero profile with the given Hilbert polynomials (missing vertices: 0)."""
    return SubProfile({i: _poly(torsion.get(i, [])) for i in params.quiver.vertices},
                      {i: 0 for i in params.quiver.vertices})


def split_arrow_profile(params: SheafParams, a0: Arrow) -> SubProfile:
    tail_side, _ = split_at_arrow(params.quiver, a0)
    return SubProfile({i: params.Pbar[i] if i in tail_side else RatPoly()
                       for i in params.quiver.vertices},
                      {i: params.r[i] if i in tail_side else 0 for i in params.quiver.vertices})


def boundedness_profile(params: SheafParams, i0: int, G_P, G_rk) -> SubProfile:
    marks = boundedness_split(params.quiver, i0)
    P, rk = {}, {}
    for i, m in marks.items():
        if m == G_SLOT:
            P[i], rk[i] = _poly(G_P), parse_rat(G_rk)
        elif m == FULL:
            P[i], rk[i] = params.Pbar[i], params.r[i]
        else:
            assert m == ZERO
            P[i], rk[i] = RatPoly(), Fraction(0)
    return SubProfile(P, rk)


def special_profile(params: SheafParams, kind: str, **data) -> SubProfile:
    if kind == "torsion":
        return torsion_profile(params, data.get("torsion", {}))
    if kind == "split_arrow":
        return split_arrow_profile(params, data["a0"])
    if kind == "boundedness":
        return boundedness_profile(params, data["i0"], data["G_P"], data["G_rk"])
    raise ParameterError(f"unknown profile kind {kind!r}")


# -- verdicts relative to a list -----------------------------------------------

NO_VIOLATION = "no-violation"
BOUNDARY = "boundary"
STRICT_VIOLATION = "strict-violation"
RELATIVE_TAG = "relative to supplied subobject profiles"


class ProfileVerdict(NamedTuple):
    status: str
    theta: RatPoly | None
    witness: int | None   # index into the supplied list
    tag: str = RELATIVE_TAG


def semistable_profiles(params: SheafParams, profiles) -> ProfileVerdict:
    best, arg = None, None
    for k, prof in enumerate(profiles):
        _check_shape(params, prof)
        if prof.is_zero():
            raise ParameterError(f"profile {k} is the zero subobject")
        if prof.is_full(params):
            raise ParameterError(f"profile {k} is the whole representation")
        th = theta_sheaf(params, prof)
        if best is None or th > best:
            best, arg = th, k
    if best is None:
        return ProfileVerdict(NO_VIOLATION, None, None)
    s = sign(best)
    status = STRICT_VIOLATION if s > 0 else BOUNDARY if s == 0 else NO_VIOLATION
    return ProfileVerdict(status, best, arg)


# -- holomorphic triples ---------------------------------------------------------

def triple_theta(sigma1, sigma2, PF1, rkF1, PF2, rkF2, P1, r1, P2, r2) -> RatPoly:
    s1, s2 = _poly(sigma1), _poly(sigma2)
    rkF1, rkF2, r1, r2 = map(parse_rat, (rkF1, rkF2, r1, r2))
    first = _poly(PF1) - (_poly(P1) - s1).scale(rkF1 / r1)
    second = _poly(PF2) - (_poly(P2) + s2).scale(rkF2 / r2)
    return s2 * first + s1 * second


def tau_from_sigma(mu2, r2, sigma) -> Fraction:
    mu2, r2, sigma = parse_rat(mu2), parse_rat(r2), parse_rat(sigma)
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    if r2 <= 0:
        raise ParameterError("rank of E_2 must be positive")
    return mu2 + sigma / r2


def sigma_from_tau(mu2, r2, tau) -> Fraction:
    mu2, r2, tau = parse_rat(mu2), parse_rat(r2), parse_rat(tau)
    if r2 <= 0:
        raise ParameterError("rank of E_2 must be positive")
    sigma = r2 * (tau - mu2)
    if sigma <= 0:
        raise ParameterError(f"tau = {format_rat(tau)} gives non-positive sigma")
    return sigma


def tau_slope_defect(d1, r1, d2, r2, dsub1, rsub1, dsub2, rsub2, tau) -> Fraction:
    """Slope form of tau-stability for a sub-triple of a curve triple.

    With sigma' := ((r1+r2) tau - d1 - d2) / r1 the sub-triple violates
    (strictly) iff  d1' + d2' + sigma' r1' - tau (r1' + r2')  is positive.
    """
    d1, r1, d2, r2 = map(parse_rat, (d1, r1, d2, r2))
    dsub1, rsub1, dsub2, rsub2, tau = map(parse_rat, (dsub1, rsub1, dsub2, rsub2, tau))
    if rsub1 + rsub2 <= 0:
        raise ParameterError("sub-triple of total rank zero has no slope")
    sig = ((r1 + r2) * tau - d1 - d2) / r1
    return dsub1 + dsub2 + sig * rsub1 - tau * (rsub1 + rsub2)


def curve_hilbert(rk, deg, genus) -> RatPoly:
    """Hilbert polynomial rk*x + deg + rk(1-g) of a bundle on a curve."""
    rk, deg, genus = map(parse_rat, (rk, deg, genus))
    return RatPoly([deg + rk * (1 - genus), rk])


# -- sectional semistability -----------------------------------------------------

@dataclass(frozen=True)
class SectionalData:
    quiver: Quiver
    s: Mapping[int, Fraction]
    b: Mapping[Arrow, Fraction]
    chi: Mapping[int, Fraction]
    rkE: Mapping[int, Fraction]
    hdim: Mapping[int, Fraction]   # dim(H_i cap H^0(F_i))
    rkF: Mapping[int, Fraction]


def sectional_delta(data: SectionalData) -> Fraction:
    q = data.quiver
    s = {i: parse_rat(data.s[i]) for i in q.vertices}
    for i, v in s.items():
        if v <= 0:
            raise ParameterError(f"s_{i} must be positive")
        if parse_rat(data.rkE[i]) == 0:
            raise ParameterError(f"rk E_{i} is zero")
    total = math.prod(s.values()) if s else Fraction(1)

    def brace(i, plus):
        chi, rkE = parse_rat(data.chi[i]), parse_rat(data.rkE[i])
        shift = s[i] if plus else -s[i]
        return parse_rat(data.hdim[i]) - parse_rat(data.rkF[i]) * (chi + shift) / rkE

    out = Fraction(0)
    for a in q.arrows:
        t, h = a
        out += parse_rat(data.b[a]) * (total / s[t] * brace(t, False) + total / s[h] * brace(h, True))
    return out


# -- boundedness, Le Potier-Simpson ---------------------------------------------

class BoundednessConstant(NamedTuple):
    C: Fraction
    sigma_bar: Fraction
    sigma_bar_dual: Fraction
    s_check: int
    degenerate: bool   # sigma_bar read off as 0

    def statement(self, i0: int) -> str:
        return f"mu_max(E_{i0}) <= mu_{i0} + {format_rat(self.C)}"


def boundedness_bound(params: SheafParams, i0: int) -> BoundednessConstant:
    q = params.quiver
    q.check_vertex(i0)
    star_arrows = [a for a in q.arrows if i0 in a]
    if not star_arrows:
        raise QuiverError(f"vertex {i0} is isolated")
    dual = params.sigma_check(i0).scale(sum(params.b[a] for a in star_arrows))
    s_check = dual.degree
    sig = params.sigma_prod.scale(sum(params.b.values()))
    sb = sig.coeff(s_check + params.dimX - 1)
    C = sb / dual.leading
    return BoundednessConstant(C, sb, dual.leading, s_check, sb == 0)


def lps_bound(rk, mu_max, mu, m, dimX: int) -> Fraction:
    """Le Potier-Simpson upper bound for h^0(F(m)) / rk F."""
    rk = parse_rat(rk)
    if rk < 1:
        raise ParameterError("rank must be at least 1")
    if dimX < 1:
        raise ParameterError("dim X must be positive")
    mu_max, mu, m = map(parse_rat, (mu_max, mu, m))
    C = rk * (rk + dimX) / 2
    fact = math.factorial(dimX)

    def plus(t):
        return max(t, Fraction(0)) ** dimX

    return (rk - 1) / (fact * rk) * plus(mu_max + C - 1 + m) + 1 / (fact * rk) * plus(mu + C - 1 + m)


# -- Gieseker linearization --------------------------------------------------------

@dataclass(frozen=True)
class GiesekerData:
    """Per-vertex values p_i = P_i(m), sigma_i(m) and the rank r_i."""

    p: Mapping[int, object]
    sigma_m: Mapping[int, object]
    r: Mapping[int, object]


class GiesekerWeights(NamedTuple):
    l: dict
    alpha: dict   # (vertex, arrow) -> alpha_{i,a}


def gieseker_l(q: Quiver, b: Mapping[Arrow, object], gd: GiesekerData) -> GiesekerWeights:
    require_tree(q)
    alpha, l = {}, {}
    for i in q.vertices:
        pi, si, ri = parse_rat(gd.p[i]), parse_rat(gd.sigma_m[i]), parse_rat(gd.r[i])
        if si <= 0 or ri <= 0:
            raise ParameterError(f"vertex {i}: sigma_i(m) and r_i must be positive")
        total = Fraction(0)
        for a in q.arrows:
            if a[0] == i:
                al = (pi - si) / (ri * si)
            elif a[1] == i:
                al = (pi + si) / (ri * si)
            else:
                continue
            if al <= 0:
                raise ParameterError(f"vertex {i}: alpha on arrow {a[0]}->{a[1]} is "
                                     f"{format_rat(al)}, needs p_i > sigma_i(m)")
            alpha[(i, a)] = al
            total += parse_rat(b[a]) * al
        l[i] = total
    # l_i read back from its alpha-decomposition
    for i in q.vertices:
        assert l[i] == sum((parse_rat(b[a]) * al for (k, a), al in alpha.items() if k == i),
                           Fraction(0))
    return GiesekerWeights(l, alpha)


class WeightIdentities(NamedTuple):
    mu: Fraction             # p rk E^{(j)} - j r
    tail_lhs: Fraction
    tail_rhs: Fraction
    head_lhs: Fraction
    head_rhs: Fraction
    tail_scaled: Fraction    # sigma(m) * tail side
    tail_brace: Fraction     # -(j - rk E^{(j)} (p - sigma(m)) / r)
    head_scaled: Fraction
    head_brace: Fraction     # -(j - rk E^{(j)} (p + sigma(m)) / r)

    def holds(self) -> bool:
        return (self.tail_lhs == self.tail_rhs and self.head_lhs == self.head_rhs
                and self.tail_scaled == self.tail_brace and self.head_scaled == self.head_brace)


def gieseker_weight_identities(p, r, sigma_m, j, rk_j) -> WeightIdentities:
    p, r, s, j, rk = map(parse_rat, (p, r, sigma_m, j, rk_j))
    if not 0 <= j <= p:
        raise ParameterError(f"j = {format_rat(j)} outside 0..p")
    if p <= 0 or r <= 0 or s <= 0:
        raise ParameterError("p, r and sigma(m) must be positive")
    mu = p * rk - j * r
    tail_lhs = (p - s) / (r * s) / p * mu - j / p
    tail_rhs = p * rk / (r * s) - rk / r - j / s
    head_lhs = (p + s) / (r * s) / p * mu + j / p
    head_rhs = p * rk / (r * s) + rk / r - j / s
    return WeightIdentities(
        mu, tail_lhs, tail_rhs, head_lhs, head_rhs,
        s * tail_lhs, -(j - rk * (p - s) / r),
        s * head_lhs, -(j - rk * (p + s) / r),
    )
