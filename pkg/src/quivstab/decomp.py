"""Decomposition of weight pairs and tree weight tuples into basic pieces.

Masses: for a weight vector w of length p the step-j mass is ``w_{j+1} - w_j``
(= p times the step coefficient).  Pure coefficients are stored as
coefficients of the step vectors themselves; paired coefficients eta_{i,j}
multiply ((1/p) delta^{(i)}, (1/q) gamma^{(j)}).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple

from .exactpoly import format_rat, parse_rat
from .quiver import Arrow, Quiver, bfs_order, connected_components, find_leaf, require_tree
from .weights import (
    HomPoint,
    TuplePoint,
    WeightError,
    add_weights,
    as_weights,
    mu_hom,
    scaled,
    step_vector,
    trivial_weights,
)


class DecompositionError(ValueError):
    """Inputs violate a precondition of a decomposition step."""


# -- markers and ladder ------------------------------------------------------

class Markers(NamedTuple):
    i0: int
    j0: int
    i0prime: int
    j0prime: int  # informational only


def markers(f: HomPoint) -> Markers:
    f.require_nonzero()
    j0 = max(j for _, j in f.support)
    i0p = min(i for i, _ in f.support)
    i0 = min(i for i, j in f.support if j == j0)
    return Markers(i0, j0, i0p, f.reach(i0p))


@dataclass(frozen=True)
class Ladder:
    h_levels: tuple   # ascending delta levels
    k_levels: tuple   # ascending gamma levels
    star: int         # 1-based rung index

    @property
    def star_value(self) -> Fraction:
        return self.k_levels[self.star - 1] - self.h_levels[self.star - 1]

    def __len__(self) -> int:
        return len(self.h_levels)


def ladder(f: HomPoint, delta, gamma) -> Ladder:
    f.require_nonzero()
    d, g = as_weights(delta), as_weights(gamma)
    G = {(d[i - 1], g[j - 1]) for i, j in f.support}
    rungs = []
    k = max(gl for _, gl in G)
    h = min(dl for dl, gl in G if gl == k)
    while True:
        rungs.append((h, k))
        lower = [(dl, gl) for dl, gl in G if dl < h]
        if not lower:  # f vanishes on V^{<h}
            break
        k = max(gl for _, gl in lower)
        h = min(dl for dl, gl in G if gl == k)
    rungs.reverse()
    hs = tuple(r[0] for r in rungs)
    ks = tuple(r[1] for r in rungs)
    best = max(kk - hh for hh, kk in rungs)
    star = max(t + 1 for t, (hh, kk) in enumerate(rungs) if kk - hh == best)
    return Ladder(hs, ks, star)


def witness(f: HomPoint, delta, gamma, lad: Ladder | None = None) -> tuple[int, int]:
    """Smallest support entry lying in the star eigenspaces of the ladder."""
    lad = lad or ladder(f, delta, gamma)
    h, k = lad.h_levels[lad.star - 1], lad.k_levels[lad.star - 1]
    return min((i, j) for i, j in f.support
               if Fraction(delta[i - 1]) == h and Fraction(gamma[j - 1]) == k)


# -- Triv1 -------------------------------------------------------------------

@dataclass
class PairDecomposition:
    p: int
    q: int
    pure_alpha: dict = field(default_factory=dict)
    pure_beta: dict = field(default_factory=dict)
    paired: dict = field(default_factory=dict)
    witness: tuple | None = None

    def delta(self):
        out = trivial_weights(self.p)
        for i, c in self.pure_alpha.items():
            out = add_weights(out, scaled(step_vector(self.p, i), c))
        for (i, _), eta in self.paired.items():
            out = add_weights(out, scaled(step_vector(self.p, i), eta / self.p))
        return out

    def gamma(self):
        out = trivial_weights(self.q)
        for j, c in self.pure_beta.items():
            out = add_weights(out, scaled(step_vector(self.q, j), c))
        for (_, j), eta in self.paired.items():
            out = add_weights(out, scaled(step_vector(self.q, j), eta / self.q))
        return out

    def pieces(self):
        """(coefficient, delta piece, gamma piece) for every nonzero term."""
        zp, zq = trivial_weights(self.p), trivial_weights(self.q)
        for i, c in sorted(self.pure_alpha.items()):
            yield c, step_vector(self.p, i), zq
        for j, c in sorted(self.pure_beta.items()):
            yield c, zp, step_vector(self.q, j)
        for (i, j), eta in sorted(self.paired.items()):
            yield (eta, scaled(step_vector(self.p, i), Fraction(1, self.p)),
                   scaled(step_vector(self.q, j), Fraction(1, self.q)))

    def to_json(self) -> dict:
        return {
            "pure_alpha": {str(i): format_rat(c) for i, c in sorted(self.pure_alpha.items())},
            "pure_beta": {str(j): format_rat(c) for j, c in sorted(self.pure_beta.items())},
            "paired": {f"{i},{j}": format_rat(c) for (i, j), c in sorted(self.paired.items())},
            "witness": list(self.witness) if self.witness else None,
        }


def _clean(d: dict) -> dict:
    return {k: v for k, v in sorted(d.items()) if v != 0}


def triv1_split(alpha: Mapping[int, object], p: int, beta: Mapping[int, object], q: int,
                compat: Callable[[int, int], bool] | None = None) -> PairDecomposition:
    """Greedy pairing of step masses p*alpha_i against q*beta_j.

    Each beta index, in increasing order, consumes alpha masses in increasing
    order among compatible indices.  The lighter side must be used up
    completely; the rest of the heavier side is returned as pure parts.
    """
    compat = compat or (lambda i, j: True)
    a_mass = {i: p * parse_rat(c) for i, c in sorted(alpha.items())}
    b_mass = {j: q * parse_rat(c) for j, c in sorted(beta.items())}
    for side, m in (("alpha", a_mass), ("beta", b_mass)):
        if any(v < 0 for v in m.values()):
            raise DecompositionError(f"negative {side} coefficient")
    total_a, total_b = sum(a_mass.values(), Fraction(0)), sum(b_mass.values(), Fraction(0))
    paired: dict = defaultdict(Fraction)
    for j in b_mass:
        for i in a_mass:
            if b_mass[j] == 0:
                break
            if a_mass[i] == 0 or not compat(i, j):
                continue
            eta = min(a_mass[i], b_mass[j])
            paired[(i, j)] += eta
            a_mass[i] -= eta
            b_mass[j] -= eta
    if total_a >= total_b and any(b_mass.values()):
        raise DecompositionError("beta masses could not be absorbed by compatible alpha masses")
    if total_a <= total_b and any(a_mass.values()):
        raise DecompositionError("alpha masses could not be absorbed by compatible beta masses")
    return PairDecomposition(
        p, q,
        pure_alpha=_clean({i: m / p for i, m in a_mass.items()}),
        pure_beta=_clean({j: m / q for j, m in b_mass.items()}),
        paired=_clean(dict(paired)),
    )


# -- Decomp1 -----------------------------------------------------------------

def decompose_pair(f: HomPoint, delta, gamma) -> PairDecomposition:
    """Split (delta, gamma) into pieces whose mu is attained at one witness coordinate."""
    f.require_nonzero()
    d, g = as_weights(delta), as_weights(gamma)
    p, q = f.p, f.q
    if (len(d), len(g)) != (p, q):
        raise WeightError(f"weights of lengths ({len(d)},{len(g)}) for a {q}x{p} map")
    mk = markers(f)
    i_star, j_star = witness(f, d, g)
    a_mass = {i: d[i] - d[i - 1] for i in range(1, p)}
    b_mass = {j: g[j] - g[j - 1] for j in range(1, q)}
    compat = f.maps_flag
    out = PairDecomposition(p, q, witness=(i_star, j_star))

    pure_a = {i: m / p for i, m in a_mass.items() if i < mk.i0prime}
    pure_b = {j: m / q for j, m in b_mass.items() if j >= mk.j0}

    # above the witness: every beta mass in [j*, j0) is paired with alpha in [i*, p)
    upper = triv1_split({i: a_mass[i] / p for i in range(i_star, p)}, p,
                        {j: b_mass[j] / q for j in range(j_star, mk.j0)}, q, compat)
    if upper.pure_beta:
        raise DecompositionError("upper block left unpaired beta mass")
    # below the witness: every alpha mass in [i0', i*) is paired with beta in [1, j*)
    lower = triv1_split({i: a_mass[i] / p for i in range(mk.i0prime, i_star)}, p,
                        {j: b_mass[j] / q for j in range(1, j_star)}, q, compat)
    if lower.pure_alpha:
        raise DecompositionError("lower block left unpaired alpha mass")

    for part in (upper, lower):
        for i, c in part.pure_alpha.items():
            pure_a[i] = pure_a.get(i, 0) + c
        for j, c in part.pure_beta.items():
            pure_b[j] = pure_b.get(j, 0) + c
        for key, eta in part.paired.items():
            out.paired[key] = out.paired.get(key, 0) + eta
    out.pure_alpha = _clean(pure_a)
    out.pure_beta = _clean(pure_b)
    out.paired = _clean(out.paired)
    return out


def mu_of_decomposition(f: HomPoint, pd: PairDecomposition) -> Fraction:
    """sum over pieces of coefficient * mu(f, piece)."""
    return sum((c * mu_hom(f, dp, gp) for c, dp, gp in pd.pieces()), Fraction(0))


def to_pair_coefficients(f: HomPoint, pd: PairDecomposition) -> dict[tuple[int, int], Fraction]:
    """Express every piece as a (j_t, j_h) multi-index with trivial ends 0 or p.

    A pure delta-piece at i sits over V^{(i)} -> 0 if V^{(i)} is in ker f and
    over V^{(i)} -> W otherwise; a pure gamma-piece at j sits over V -> W^{(j)}
    if Im f is in W^{(j)} and over 0 -> W^{(j)} otherwise.
    """
    out: dict = defaultdict(Fraction)
    for i, c in pd.pure_alpha.items():
        key = (i, 0) if f.flag_in_kernel(i) else (i, f.q)
        out[key] += f.p * c
    for j, c in pd.pure_beta.items():
        key = (f.p, j) if f.image_in_flag(j) else (0, j)
        out[key] += f.q * c
    for key, eta in pd.paired.items():
        out[key] += eta
    return _clean(dict(out))


# -- basicness ---------------------------------------------------------------

def nontrivial_vertices(jj: Mapping[int, int], dims: Mapping[int, int]) -> set:
    return {i for i, j in jj.items() if 0 < j < dims[i]}


def is_basic(jj: Mapping[int, int], point: TuplePoint) -> bool:
    q = point.quiver
    jj = {i: int(jj[i]) for i in q.vertices}
    N = nontrivial_vertices(jj, point.dims)
    if not N or len(connected_components(q, N)) != 1:
        return False
    for a in q.arrows:
        f = point.maps[a]
        jt, jh = jj[a[0]], jj[a[1]]
        if not f.maps_flag(jt, jh):
            return False
        if f.flag_in_kernel(jt) and f.image_in_flag(jh):
            return False
    return True


# -- Decomp2 -----------------------------------------------------------------

TreeDecomposition = dict  # tuple(j_1..j_n) -> Fraction


def _is_trivial(x: int, p: int) -> bool:
    return x == 0 or x == p


def _trivial_like(x: int, p_from: int, p_to: int) -> int:
    return 0 if x == 0 else p_to


def nontrivial_marginal(pairs: Mapping[tuple[int, int], Fraction], end: int,
                        p: int) -> dict[int, Fraction]:
    out: dict = defaultdict(Fraction)
    for key, eta in pairs.items():
        x = key[end]
        if not _is_trivial(x, p):
            out[x] += eta
    return _clean(dict(out))


def pair_marginals(td: Mapping[tuple, Fraction], q: Quiver, dims: Mapping[int, int]) -> dict:
    """Per-arrow pair sums of a joint decomposition, skipping trivial-trivial pairs."""
    out = {}
    for a in q.arrows:
        t, h = a
        acc: dict = defaultdict(Fraction)
        for jj, c in td.items():
            x, y = jj[t - 1], jj[h - 1]
            if _is_trivial(x, dims[t]) and _is_trivial(y, dims[h]):
                continue
            acc[(x, y)] += c
        out[a] = _clean(dict(acc))
    return out


def couple_tree(q: Quiver, dims: Mapping[int, int],
                arrow_pairs: Mapping[Arrow, Mapping[tuple[int, int], object]],
                masses: Mapping[int, Mapping[int, object]] | None = None) -> TreeDecomposition:
    """Glue per-arrow pair coefficients into one joint multi-index decomposition.

    Conditional coupling along a breadth-first traversal from the smallest
    leaf.  Pairs with both ends trivial (0 or p) are not constrained.
    """
    require_tree(q)
    dims = {i: int(dims[i]) for i in q.vertices}
    pairs = {}
    for a in q.arrows:
        raw = arrow_pairs.get(a, {})
        cleaned = {}
        for key, eta in raw.items():
            x, y = int(key[0]), int(key[1])
            if not (0 <= x <= dims[a[0]] and 0 <= y <= dims[a[1]]):
                raise DecompositionError(f"pair {key} on arrow {a} outside the dimension range")
            eta = parse_rat(eta)
            if eta < 0:
                raise DecompositionError(f"negative coefficient on arrow {a}")
            if eta:
                cleaned[(x, y)] = cleaned.get((x, y), 0) + eta
        pairs[a] = cleaned

    # marginal consistency at every vertex
    for v in q.vertices:
        seen = []
        for a in q.arrows:
            if v in a:
                end = 0 if a[0] == v else 1
                seen.append((a, nontrivial_marginal(pairs[a], end, dims[v])))
        if masses is not None and v in masses:
            want = _clean({int(k): parse_rat(m) for k, m in masses[v].items()})
            seen.append(("weights", want))
        for (a1, m1), (a2, m2) in zip(seen, seen[1:]):
            if m1 != m2:
                raise DecompositionError(
                    f"inconsistent marginals at vertex {v}: {a1} gives {_fmt(m1)}, "
                    f"{a2} gives {_fmt(m2)}")

    if q.n == 1:
        # no arrows: the joint decomposition is the step expansion itself
        if masses is None or 1 not in masses:
            return {}
        return _clean({(int(k),): parse_rat(m) for k, m in masses[1].items()})
    root = find_leaf(q)
    order = bfs_order(q, root)
    elements: list[tuple[dict, Fraction]] = [({root: None}, Fraction(1))]
    placed = [root]
    first = True
    for v, u, a in order[1:]:
        uend = 0 if a[0] == u else 1
        by_u: dict = defaultdict(list)
        for key, eta in sorted(pairs[a].items()):
            by_u[key[uend]].append((key[1 - uend], eta))
        new: list = []
        if first:
            for x, lst in sorted(by_u.items()):
                for y, eta in lst:
                    new.append(({u: x, v: y}, eta))
            first = False
        else:
            totals = {x: sum(e for _, e in lst) for x, lst in by_u.items()}
            for asg, c in elements:
                x = asg[u]
                if _is_trivial(x, dims[u]):
                    asg2 = dict(asg)
                    asg2[v] = _trivial_like(x, dims[u], dims[v])
                    new.append((asg2, c))
                    continue
                for y, eta in by_u[x]:
                    asg2 = dict(asg)
                    asg2[v] = y
                    new.append((asg2, c * eta / totals[x]))
            for x, lst in sorted(by_u.items()):
                if not _is_trivial(x, dims[u]):
                    continue
                for y, eta in lst:
                    asg = {w: _trivial_like(x, dims[u], dims[w]) for w in placed}
                    asg[v] = y
                    new.append((asg, eta))
        elements = new
        placed.append(v)
    out: dict = defaultdict(Fraction)
    for asg, c in elements:
        out[tuple(asg[i] for i in q.vertices)] += c
    return _clean(dict(out))


def _fmt(m: Mapping) -> str:
    return "{" + ", ".join(f"{k}: {format_rat(v)}" for k, v in sorted(m.items())) + "}"


def normalize_components(td: Mapping[tuple, object], point: TuplePoint) -> TreeDecomposition:
    """Split elements with disconnected nontrivial support, one element per component.

    Vertices outside a component take a trivial value (0 or p) read off the
    arrow linking their region to the component, so that every arrow keeps a
    compatible, basic pair.
    """
    q = point.quiver
    dims = point.dims
    out: dict = defaultdict(Fraction)
    for key, c in td.items():
        c = parse_rat(c)
        jj = {i: int(key[i - 1]) for i in q.vertices}
        N = nontrivial_vertices(jj, dims)
        if not N or c == 0:
            continue
        for comp in connected_components(q, N):
            new = {i: jj[i] for i in comp}
            rest = set(q.vertices) - comp
            for region in connected_components(q, rest):
                link = next(a for a in q.arrows
                            if (a[0] in comp and a[1] in region) or (a[1] in comp and a[0] in region))
                f = point.maps[link]
                if link[0] in comp:
                    full = not f.flag_in_kernel(jj[link[0]])
                else:
                    full = f.image_in_flag(jj[link[1]])
                for w in region:
                    new[w] = dims[w] if full else 0
            out[tuple(new[i] for i in q.vertices)] += c
    return _clean(dict(out))


def tree_decompose(point: TuplePoint, lam: Mapping[int, object],
                   normalize: bool = True) -> TreeDecomposition:
    """Run decompose_pair on every arrow, couple, and (optionally) normalize."""
    q = point.quiver
    lam = {i: as_weights(lam[i]) for i in q.vertices}
    pairs = {}
    for a in q.arrows:
        f = point.maps[a]
        pd = decompose_pair(f, lam[a[0]], lam[a[1]])
        pairs[a] = to_pair_coefficients(f, pd)
    masses = {i: {k: lam[i][k] - lam[i][k - 1] for k in range(1, point.dims[i])}
              for i in q.vertices}
    td = couple_tree(q, point.dims, pairs, masses)
    return normalize_components(td, point) if normalize else td


def tree_reconstruct(td: Mapping[tuple, Fraction], dims: Mapping[int, int],
                     vertices) -> dict[int, tuple]:
    """sum_j eta_j lambda^{j} as per-vertex weight vectors."""
    out = {i: trivial_weights(dims[i]) for i in vertices}
    for key, c in td.items():
        for i in vertices:
            p = dims[i]
            if p:
                out[i] = add_weights(out[i], scaled(step_vector(p, key[i - 1]), Fraction(c) / p))
    return out


def tree_decomposition_to_json(td: Mapping[tuple, Fraction]) -> dict:
    return {",".join(map(str, k)): format_rat(v) for k, v in sorted(td.items())}
