"""Weight calculus for one-parameter subgroups of products of SL's.

A weight vector is an ascending tuple of Fractions summing to zero.  For a
linear map f : V -> W written in bases adapted to the two flags, the weight of
the coordinate f_{i,j} (coefficient of v_i^dual (x) w_j) under (delta, gamma)
is ``gamma_j - delta_i``; mu is the largest weight over the support.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .exactpoly import parse_rat
from .linalg import QQ, Field, Mat, as_matrix
from .quiver import Arrow, Quiver

WeightVector = tuple  # tuple[Fraction, ...]


class DegeneratePointError(ValueError):
    """The zero map does not define a projective point."""


class WeightError(ValueError):
    """Malformed weight data (unsorted, non-zero sum, bad index, ...)."""


# -- weight vectors ---------------------------------------------------------

def as_weights(entries: Iterable, check_sum: bool = True) -> WeightVector:
    w = tuple(parse_rat(x) for x in entries)
    if any(a > b for a, b in zip(w, w[1:])):
        raise WeightError(f"weights {fmt_weights(w)} are not ascending")
    if check_sum and sum(w) != 0:
        raise WeightError(f"weights {fmt_weights(w)} do not sum to zero")
    return w


def fmt_weights(w: Sequence) -> str:
    return "(" + ", ".join(str(Fraction(x)) for x in w) + ")"


def trivial_weights(p: int) -> WeightVector:
    return (Fraction(0),) * p


def step_vector(p: int, j: int) -> WeightVector:
    """gamma^{(j)}: the value j-p repeated j times, then j repeated p-j times."""
    if not 0 <= j <= p:
        raise WeightError(f"step index {j} outside 0..{p}")
    if j in (0, p):
        return trivial_weights(p)
    return (Fraction(j - p),) * j + (Fraction(j),) * (p - j)


def scaled(w: Sequence, c) -> WeightVector:
    c = parse_rat(c)
    return tuple(c * x for x in w)


def add_weights(u: Sequence, v: Sequence) -> WeightVector:
    if len(u) != len(v):
        raise WeightError("weight vectors of different lengths")
    return tuple(a + b for a, b in zip(u, v))


def step_decompose(gamma: Sequence) -> dict[int, Fraction]:
    """Coefficients c_j >= 0 with gamma = sum_j c_j gamma^{(j)}, j = 1..p-1."""
    g = as_weights(gamma)
    p = len(g)
    return {j: (g[j] - g[j - 1]) / p for j in range(1, p)}


def recompose(coeffs: Mapping[int, Fraction], p: int) -> WeightVector:
    out = trivial_weights(p)
    for j, c in coeffs.items():
        out = add_weights(out, scaled(step_vector(p, j), c))
    return out


def unit_step(p: int, j: int) -> WeightVector:
    """(1/p) gamma^{(j)}, the per-vertex weight of lambda^{j-underline}."""
    if p == 0:
        return ()
    return scaled(step_vector(p, j), Fraction(1, p))


# -- points -----------------------------------------------------------------

@dataclass(frozen=True)
class HomPoint:
    """A map F^p -> F^q; ``entries[j-1][i-1]`` is f_{i,j}."""

    p: int
    q: int
    entries: Mat
    field: Field = QQ
    support: frozenset = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        ent = as_matrix(self.field, self.entries, self.q, self.p)
        object.__setattr__(self, "entries", ent)
        supp = frozenset((i + 1, j + 1) for j, row in enumerate(ent)
                         for i, x in enumerate(row) if x != 0)
        object.__setattr__(self, "support", supp)

    @classmethod
    def from_support(cls, p: int, q: int, support: Iterable[tuple[int, int]],
                     F: Field = QQ) -> "HomPoint":
        rows = [[0] * p for _ in range(q)]
        for i, j in support:
            if not (1 <= i <= p and 1 <= j <= q):
                raise WeightError(f"support entry ({i},{j}) outside {p}x{q}")
            rows[j - 1][i - 1] = 1
        return cls(p, q, rows, F)

    @classmethod
    def diagonal(cls, n: int, F: Field = QQ) -> "HomPoint":
        return cls.from_support(n, n, [(i, i) for i in range(1, n + 1)], F)

    def is_zero(self) -> bool:
        return not self.support

    def require_nonzero(self) -> None:
        if not self.support:
            raise DegeneratePointError("the zero map is not a point of the projective space")

    # flag predicates; V^{(i)} = span(v_1..v_i), W^{(j)} = span(w_1..w_j)
    def reach(self, i: int) -> int:
        """Smallest j with f(V^{(i)}) in W^{(j)}."""
        return max((jj for ii, jj in self.support if ii <= i), default=0)

    def maps_flag(self, i: int, j: int) -> bool:
        return self.reach(i) <= j

    def flag_in_kernel(self, i: int) -> bool:
        return all(ii > i for ii, _ in self.support)

    def image_in_flag(self, j: int) -> bool:
        return all(jj <= j for _, jj in self.support)

    def to_json(self) -> list:
        return [[self.field.to_json(x) for x in row] for row in self.entries]


@dataclass(frozen=True)
class TuplePoint:
    """One map per arrow of a quiver, with per-vertex dimensions."""

    quiver: Quiver
    dims: Mapping[int, int]
    maps: Mapping[Arrow, HomPoint]

    def __post_init__(self):
        dims = {i: int(self.dims[i]) for i in self.quiver.vertices}
        object.__setattr__(self, "dims", dims)
        maps = dict(self.maps)
        for a in self.quiver.arrows:
            if a not in maps:
                raise WeightError(f"no map given for arrow {a}")
            f = maps[a]
            if (f.p, f.q) != (dims[a[0]], dims[a[1]]):
                raise WeightError(
                    f"map on arrow {a} is {f.q}x{f.p}, dims need {dims[a[1]]}x{dims[a[0]]}")
        object.__setattr__(self, "maps", maps)

    def has_zero_arrow(self) -> bool:
        return any(f.is_zero() for f in self.maps.values())

    def flag_compatible(self, jj: Mapping[int, int]) -> bool:
        return all(self.maps[a].maps_flag(jj[a[0]], jj[a[1]]) for a in self.quiver.arrows)


# -- mu ---------------------------------------------------------------------

def eigen_weight(delta: Sequence, gamma: Sequence, i: int, j: int) -> Fraction:
    """Weight of the coordinate v_i^dual (x) w_j."""
    return Fraction(gamma[j - 1]) - Fraction(delta[i - 1])


def mu_hom(f: HomPoint, delta: Sequence, gamma: Sequence) -> Fraction:
    f.require_nonzero()
    if len(delta) != f.p or len(gamma) != f.q:
        raise WeightError(f"weights of lengths ({len(delta)},{len(gamma)}) for a {f.q}x{f.p} map")
    return max(eigen_weight(delta, gamma, i, j) for i, j in f.support)


class FactorTable(NamedTuple):
    """Eigencoordinates of an abstract factor: (functional on lambda_i, nonzero?)."""

    coords: tuple

    def mu(self, lam: Sequence) -> Fraction:
        vals = [sum(parse_rat(c) * x for c, x in zip(func, lam))
                for func, nonzero in self.coords if nonzero]
        if not vals:
            raise DegeneratePointError("factor point has no nonzero coordinate")
        return max(vals)


def mu_linearized(point: TuplePoint, lam: Mapping[int, Sequence], b: Mapping[Arrow, object],
                  l: Mapping[int, object] | None = None,
                  tables: Mapping[int, FactorTable] | None = None) -> Fraction:
    """sum_i l_i mu(w_i, lambda_i) + sum_a b_a mu(f_a, (lambda_t, lambda_h))."""
    total = Fraction(0)
    for i, li in (l or {}).items():
        li = parse_rat(li)
        if li == 0:
            continue
        if not tables or i not in tables:
            raise WeightError(f"vertex {i} has l_i = {li} but no factor table")
        total += li * tables[i].mu(lam[i])
    for a in point.quiver.arrows:
        ba = parse_rat(b[a])
        if ba:
            total += ba * mu_hom(point.maps[a], lam[a[0]], lam[a[1]])
    return total


def multi_index_weights(point: TuplePoint, jj: Mapping[int, int]) -> dict[int, WeightVector]:
    """lambda^{j-underline}: (1/p_i) gamma^{i,(j_i)} at each vertex."""
    out = {}
    for i in point.quiver.vertices:
        p = point.dims[i]
        if not 0 <= jj[i] <= p:
            raise WeightError(f"multi-index entry j_{i} = {jj[i]} outside 0..{p}")
        out[i] = unit_step(p, jj[i])
    return out


class FlagWeight(NamedTuple):
    closed_form: Fraction
    exact_mu: Fraction
    equal: bool


def flag_closed_form(q: Quiver, dims: Mapping[int, int], jj: Mapping[int, int],
                     b: Mapping[Arrow, object]) -> Fraction:
    return sum((parse_rat(b[(t, h)]) * (Fraction(jj[h], dims[h]) - Fraction(jj[t], dims[t]))
                for t, h in q.arrows), Fraction(0))


def flag_weight(point: TuplePoint, jj: Mapping[int, int], b: Mapping[Arrow, object]) -> FlagWeight:
    jj = {i: int(jj[i]) for i in point.quiver.vertices}
    lam = multi_index_weights(point, jj)
    for a in point.quiver.arrows:
        if not point.maps[a].maps_flag(jj[a[0]], jj[a[1]]):
            raise WeightError(f"flag not compatible on arrow {a}: f(V^({jj[a[0]]})) "
                              f"is not inside V^({jj[a[1]]})")
    closed = flag_closed_form(point.quiver, point.dims, jj, b)
    exact = mu_linearized(point, lam, b)
    return FlagWeight(closed, exact, closed == exact)


class AdditivityReport(NamedTuple):
    mu_first: Fraction
    mu_second: Fraction
    mu_product: Fraction
    additive: bool


def check_additivity(f: HomPoint, delta, gamma, delta2, gamma2) -> AdditivityReport:
    d, g = as_weights(delta), as_weights(gamma)
    d2, g2 = as_weights(delta2), as_weights(gamma2)
    dsum, gsum = add_weights(d, d2), add_weights(g, g2)
    for name, w in (("delta+delta'", dsum), ("gamma+gamma'", gsum)):
        if any(x > y for x, y in zip(w, w[1:])):
            raise WeightError(f"{name} = {fmt_weights(w)} is not ascending")
    m1, m2, m12 = mu_hom(f, d, g), mu_hom(f, d2, g2), mu_hom(f, dsum, gsum)
    return AdditivityReport(m1, m2, m12, m12 == m1 + m2)


# -- flag enumeration -------------------------------------------------------

def iter_multi_indices(dims: Mapping[int, int], vertices: Sequence[int]) -> Iterator[dict]:
    for vals in itertools.product(*(range(dims[i] + 1) for i in vertices)):
        yield dict(zip(vertices, vals))


def compatible_flags(point: TuplePoint) -> Iterator[dict]:
    for jj in iter_multi_indices(point.dims, list(point.quiver.vertices)):
        if point.flag_compatible(jj):
            yield jj


def chunked(it: Iterable, size: int) -> Iterator[list]:
    """Split an iterator into lists of at most ``size`` items."""
    if size < 1:
        raise ValueError("chunk size must be positive")
    it = iter(it)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block
