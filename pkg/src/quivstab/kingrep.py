"""Representations of tree quivers over Q or F_p and King-type stability.

theta(d) = sum_a b_a (d_t / Pbar_t - d_h / Pbar_h); a representation of type
Pbar is semistable iff theta <= 0 on every subrepresentation.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .exactpoly import format_rat, parse_rat
from .linalg import (
    Field,
    Mat,
    Subspace,
    as_matrix,
    enumerate_subspaces,
    inverse,
    is_invertible,
    mat_mul,
    mat_vec,
    maps_into,
    nullspace,
    reduce_vector,
    subspace_count,
    transpose,
    unit_vector,
    zeros,
)
from .quiver import Arrow, Quiver, bfs_order, full_subquiver

STABLE = "stable"
SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"

EXHAUSTIVE = "exhaustive"
LATTICE_ONLY = "lattice-only"
RANDOMIZED = "randomized"

MODES = ("exhaustive-ff", "lattice", "randomized")
GIT_MODES = ("exhaustive-ff", "lattice-adapted")

DEFAULT_BUDGET = 10 ** 6


class BudgetExceeded(RuntimeError):
    """The requested search is larger than the configured budget."""


class RepError(ValueError):
    """Malformed or inconsistent representation data."""


# -- data ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuiverRep:
    quiver: Quiver
    field: Field
    dims: Mapping[int, int]
    matrices: Mapping[Arrow, Mat]

    def __post_init__(self):
        q = self.quiver
        try:
            dims = {i: int(self.dims[i]) for i in q.vertices}
        except KeyError as exc:
            raise RepError(f"missing dimension for vertex {exc.args[0]}") from exc
        if any(d < 0 for d in dims.values()):
            raise RepError("negative dimension")
        mats = {}
        for a in q.arrows:
            if a not in self.matrices:
                raise RepError(f"no matrix for arrow {a[0]}->{a[1]}")
            try:
                mats[a] = as_matrix(self.field, self.matrices[a], dims[a[1]], dims[a[0]])
            except ValueError as exc:
                raise RepError(f"arrow {a[0]}->{a[1]}: {exc}") from exc
        extra = set(map(tuple, self.matrices)) - set(q.arrows)
        if extra:
            raise RepError(f"matrices given for non-arrows {sorted(extra)}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrices", mats)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple:
        return tuple(self.dims[i] for i in self.quiver.vertices)

    def to_point(self):
        from .weights import HomPoint, TuplePoint
        maps = {a: HomPoint(self.dims[a[0]], self.dims[a[1]], m, self.field)
                for a, m in self.matrices.items()}
        return TuplePoint(self.quiver, self.dims, maps)

    def to_json(self) -> dict:
        F = self.field
        return {
            "quiver": self.quiver.to_json(),
            "field": F.tag,
            "dims": list(self.dim_vector()),
            "matrices": {f"{t}->{h}": [[F.to_json(x) for x in row] for row in m]
                         for (t, h), m in self.matrices.items()},
        }

    @classmethod
    def from_json(cls, data) -> "QuiverRep":
        q = Quiver.from_json(data["quiver"])
        F = Field.parse(data.get("field", "Q"))
        dims = data["dims"]
        if len(dims) != q.n:
            raise RepError(f"{len(dims)} dimensions for {q.n} vertices")
        mats = {}
        for key, m in data.get("matrices", {}).items():
            mats[parse_arrow_key(key)] = m
        return cls(q, F, dict(zip(q.vertices, dims)), mats)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuiverRep) and self.quiver == other.quiver
                and self.field == other.field and self.dims == other.dims
                and self.matrices == other.matrices)

    def __hash__(self) -> int:
        return hash((self.quiver, self.field, tuple(sorted(self.dims.items())),
                     tuple(sorted(self.matrices.items()))))


def parse_arrow_key(key: str) -> Arrow:
    try:
        t, h = str(key).split("->")
        return int(t), int(h)
    except ValueError as exc:
        raise RepError(f"arrow key {key!r} is not of the form 't->h'") from exc


@dataclass(frozen=True)
class SubRep:
    spaces: Mapping[int, Subspace]

    def dims(self) -> dict[int, int]:
        return {i: U.rank for i, U in self.spaces.items()}

    def dim_vector(self) -> tuple:
        return tuple(self.spaces[i].rank for i in sorted(self.spaces))

    def is_closed(self, rep: QuiverRep) -> bool:
        return all(maps_into(rep.field, m, self.spaces[a[0]], self.spaces[a[1]])
                   for a, m in rep.matrices.items())

    def is_zero(self) -> bool:
        return all(U.rank == 0 for U in self.spaces.values())

    def is_full(self, rep: QuiverRep) -> bool:
        return all(U.rank == rep.dims[i] for i, U in self.spaces.items())

    def __add__(self, other: "SubRep") -> "SubRep":
        return SubRep({i: U + other.spaces[i] for i, U in self.spaces.items()})

    def __and__(self, other: "SubRep") -> "SubRep":
        return SubRep({i: U & other.spaces[i] for i, U in self.spaces.items()})

    def key(self) -> tuple:
        return tuple((i, self.spaces[i].basis) for i in sorted(self.spaces))

    def to_json(self, F: Field) -> dict:
        return {str(i): [[F.to_json(x) for x in v] for v in U.basis]
                for i, U in sorted(self.spaces.items())}


def zero_subrep(rep: QuiverRep) -> SubRep:
    return SubRep({i: Subspace.zero(rep.field, d) for i, d in rep.dims.items()})


def full_subrep(rep: QuiverRep) -> SubRep:
    return SubRep({i: Subspace.full(rep.field, d) for i, d in rep.dims.items()})


# -- theta ---------------------------------------------------------------------

def _pbar(q: Quiver, Pbar) -> dict[int, Fraction]:
    out = {i: parse_rat(Pbar[i]) for i in q.vertices}
    for i, v in out.items():
        if v <= 0:
            raise RepError(f"Pbar({i}) = {format_rat(v)} must be positive")
    return out


def theta_king(q: Quiver, Pbar: Mapping[int, object], b: Mapping[Arrow, object],
               dims: Mapping[int, object]) -> Fraction:
    P = _pbar(q, Pbar)
    return sum((parse_rat(b[(t, h)]) * (parse_rat(dims[t]) / P[t] - parse_rat(dims[h]) / P[h])
                for t, h in q.arrows), Fraction(0))


def character_exponents(q: Quiver, Pbar: Mapping[int, object],
                        b: Mapping[Arrow, object]) -> dict[int, Fraction]:
    P = _pbar(q, Pbar)
    s = {i: Fraction(0) for i in q.vertices}
    for t, h in q.arrows:
        ba = parse_rat(b[(t, h)])
        s[t] += ba / P[t]
        s[h] -= ba / P[h]
    return s


def _check_b(q: Quiver, b: Mapping[Arrow, object]) -> dict[Arrow, Fraction]:
    out = {}
    for a in q.arrows:
        if a not in b:
            raise RepError(f"no coefficient b for arrow {a[0]}->{a[1]}")
        out[a] = parse_rat(b[a])
        if out[a] <= 0:
            raise RepError(f"b on arrow {a[0]}->{a[1]} must be positive")
    return out


def _resolve_pbar(rep: QuiverRep, b, Pbar) -> dict[int, Fraction]:
    if Pbar is None:
        Pbar = rep.dims
    P = _pbar(rep.quiver, Pbar)
    th = theta_king(rep.quiver, P, b, rep.dims)
    if th != 0:
        raise RepError(f"theta of the whole representation is {format_rat(th)}, not 0")
    return P


# -- subrepresentations --------------------------------------------------------

def generated_subrep(rep: QuiverRep, seeds: Mapping[int, Sequence[Sequence]]) -> SubRep:
    """Smallest subrepresentation containing the seed vectors."""
    F = rep.field
    spaces = {i: Subspace(F, d, seeds.get(i, ())) for i, d in rep.dims.items()}
    changed = True
    while changed:
        changed = False
        for (t, h), m in rep.matrices.items():
            if maps_into(F, m, spaces[t], spaces[h]):
                continue
            spaces[h] = spaces[h] + spaces[t].image(m, rep.dims[h])
            changed = True
    return SubRep(spaces)


def subrep_search_size(rep: QuiverRep) -> int:
    size = 1
    for d in rep.dims.values():
        size *= subspace_count(d, rep.field.char)
    return size


def enumerate_subreps_ff(rep: QuiverRep, budget: int = DEFAULT_BUDGET) -> Iterator[SubRep]:
    """Every subrepresentation over F_p exactly once."""
    F = rep.field
    if not F.is_finite:
        raise RepError("exhaustive enumeration needs a finite field")
    size = subrep_search_size(rep)
    if size > budget:
        raise BudgetExceeded(f"{size} subspace tuples exceed the budget {budget}")
    q = rep.quiver
    order = [v for v, _, _ in bfs_order(q, 1)] if q.n else []
    pos = {v: k for k, v in enumerate(order)}
    # arrows checked as soon as both ends are chosen
    checks = {v: [a for a in q.arrows if max(pos[a[0]], pos[a[1]]) == pos[v]] for v in order}
    choices = {v: list(enumerate_subspaces(F, rep.dims[v])) for v in order}

    def extend(k: int, chosen: dict):
        if k == len(order):
            yield SubRep(dict(chosen))
            return
        v = order[k]
        for U in choices[v]:
            chosen[v] = U
            if all(maps_into(F, rep.matrices[a], chosen[a[0]], chosen[a[1]]) for a in checks[v]):
                yield from extend(k + 1, chosen)
        chosen.pop(v, None)

    yield from extend(0, {})


def lattice_subreps(rep: QuiverRep, budget: int = DEFAULT_BUDGET) -> list[SubRep]:
    """Candidate subreps over any field.

    Per-vertex lattices of subspaces are grown from 0 and the full space by
    images, preimages, sums and intersections; the subreps they (and the
    coordinate lines) generate are then closed under sum and intersection.
    """
    F = rep.field
    q = rep.quiver
    L = {i: {Subspace.zero(F, d), Subspace.full(F, d)} for i, d in rep.dims.items()}

    def total():
        return sum(len(s) for s in L.values())

    changed = True
    while changed:
        changed = False
        for (t, h), m in rep.matrices.items():
            for U in list(L[t]):
                img = U.image(m, rep.dims[h])
                if img not in L[h]:
                    L[h].add(img)
                    changed = True
            for W in list(L[h]):
                pre = W.preimage(m, rep.dims[t])
                if pre not in L[t]:
                    L[t].add(pre)
                    changed = True
        for i in q.vertices:
            for U, W in itertools.combinations(list(L[i]), 2):
                for X in (U + W, U & W):
                    if X not in L[i]:
                        L[i].add(X)
                        changed = True
        if total() > budget:
            raise BudgetExceeded(f"candidate lattice exceeds the budget {budget}")
    found: dict = {}
    for i in sorted(L):
        seeds = [U.basis for U in sorted(L[i], key=lambda s: (s.rank, s.basis))]
        # coordinate lines catch destabilizers that no kernel or image sees
        seeds += [(unit_vector(rep.dims[i], k, F),) for k in range(rep.dims[i])]
        for seed in seeds:
            S = generated_subrep(rep, {i: seed})
            found.setdefault(S.key(), S)
    frontier = list(found.values())
    while frontier:
        new = []
        current = list(found.values())
        for S in frontier:
            for T in current:
                for X in (S + T, S & T):
                    if X.key() not in found:
                        found[X.key()] = X
                        new.append(X)
            if len(found) > budget:
                raise BudgetExceeded(f"candidate subreps exceed the budget {budget}")
        frontier = new
    return sorted(found.values(), key=lambda S: (sum(S.dim_vector()), S.dim_vector(), S.key()))


def random_subreps(rep: QuiverRep, samples: int, seed: int = 0) -> Iterator[SubRep]:
    rng = random.Random(seed)
    F = rep.field
    verts = [i for i in rep.quiver.vertices if rep.dims[i] > 0]
    if not verts:
        return
    elems = list(F.elements()) if F.is_finite else list(range(-3, 4))
    for _ in range(samples):
        seeds = {}
        for _ in range(rng.randint(1, 2)):
            i = rng.choice(verts)
            seeds.setdefault(i, []).append([F(rng.choice(elems)) for _ in range(rep.dims[i])])
        yield generated_subrep(rep, seeds)


# -- verdicts ------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    status: str
    completeness: str
    witness: SubRep | None = None
    value: Fraction | None = None      # max theta (king) or min flag weight (git)
    flag: tuple | None = None          # multi-index witness for git checks

    @property
    def semistable(self) -> bool:
        return self.status != UNSTABLE

    def to_json(self, F: Field) -> dict:
        out = {"status": self.status, "completeness": self.completeness}
        if self.value is not None:
            out["value"] = format_rat(self.value)
        if self.witness is not None:
            out["witness"] = self.witness.to_json(F)
            out["witness_dims"] = list(self.witness.dim_vector())
        if self.flag is not None:
            out["flag"] = list(self.flag)
        return out


def _candidates(rep: QuiverRep, mode: str, budget: int, seed: int):
    if mode == "exhaustive-ff":
        return enumerate_subreps_ff(rep, budget), EXHAUSTIVE
    if mode == "lattice":
        return lattice_subreps(rep, budget), LATTICE_ONLY
    if mode == "randomized":
        return random_subreps(rep, min(budget, 500), seed), RANDOMIZED
    raise RepError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")


def check_semistable(rep: QuiverRep, b: Mapping[Arrow, object], Pbar=None,
                     mode: str = "exhaustive-ff", budget: int = DEFAULT_BUDGET,
                     seed: int = 0) -> Verdict:
    q = rep.quiver
    b = _check_b(q, b)
    P = _resolve_pbar(rep, b, Pbar)
    cands, tag = _candidates(rep, mode, budget, seed)
    best, wit = None, None
    for S in cands:
        if S.is_zero() or S.is_full(rep):
            continue
        th = theta_king(q, P, b, S.dims())
        if best is None or th > best:
            best, wit = th, S
    if best is None or best < 0:
        return Verdict(STABLE, tag, None, best)
    return Verdict(SEMISTABLE if best == 0 else UNSTABLE, tag, wit, best)


# -- constructions -------------------------------------------------------------

def _coords_in(U: Subspace, v) -> tuple:
    """Coordinates of v (assumed in U) in U's RREF basis."""
    return tuple(v[c] for c in U.pivots)


def restrict_to_subrep(rep: QuiverRep, S: SubRep) -> QuiverRep:
    F = rep.field
    mats = {}
    for (t, h), m in rep.matrices.items():
        Ut, Uh = S.spaces[t], S.spaces[h]
        cols = [_coords_in(Uh, mat_vec(F, m, u)) for u in Ut.basis]
        mats[(t, h)] = transpose(cols, Uh.rank) if cols else zeros(Uh.rank, 0, F)
    return QuiverRep(rep.quiver, F, S.dims(), mats)


def quotient_by_subrep(rep: QuiverRep, S: SubRep) -> QuiverRep:
    F = rep.field
    mats = {}
    for (t, h), m in rep.matrices.items():
        Ut, Uh = S.spaces[t], S.spaces[h]
        keep_h = [c for c in range(rep.dims[h]) if c not in Uh.pivots]
        cols = []
        for e in Ut.complement_basis():
            r = reduce_vector(F, mat_vec(F, m, e), Uh.basis, Uh.pivots)
            cols.append(tuple(r[c] for c in keep_h))
        mats[(t, h)] = transpose(cols, len(keep_h)) if cols else zeros(len(keep_h), 0, F)
    dims = {i: rep.dims[i] - S.spaces[i].rank for i in rep.quiver.vertices}
    return QuiverRep(rep.quiver, F, dims, mats)


def direct_sum(r1: QuiverRep, r2: QuiverRep) -> QuiverRep:
    if r1.quiver != r2.quiver or r1.field != r2.field:
        raise RepError("direct sum needs the same quiver and field")
    F = r1.field
    dims = {i: r1.dims[i] + r2.dims[i] for i in r1.quiver.vertices}
    mats = {}
    for a in r1.quiver.arrows:
        t, h = a
        m = [[F(0)] * dims[t] for _ in range(dims[h])]
        for r, row in enumerate(r1.matrices[a]):
            for c, x in enumerate(row):
                m[r][c] = x
        for r, row in enumerate(r2.matrices[a]):
            for c, x in enumerate(row):
                m[r1.dims[h] + r][r1.dims[t] + c] = x
        mats[a] = m
    return QuiverRep(r1.quiver, F, dims, mats)


def restrict_to_subquiver(rep: QuiverRep, vertices: Sequence[int]) -> tuple[QuiverRep, dict]:
    """Representation of the full subquiver on ``vertices``, relabelled 1..k."""
    sub = full_subquiver(rep.quiver, vertices)
    relabel = {v: k + 1 for k, v in enumerate(sorted(sub.vertices))}
    arrows = tuple((relabel[t], relabel[h]) for t, h in rep.quiver.arrows if (t, h) in sub.arrows)
    q = Quiver(len(relabel), arrows)
    mats = {(relabel[t], relabel[h]): m for (t, h), m in rep.matrices.items() if (t, h) in sub.arrows}
    dims = {relabel[v]: rep.dims[v] for v in relabel}
    return QuiverRep(q, rep.field, dims, mats), relabel


def gr_jordan_holder(rep: QuiverRep, b: Mapping[Arrow, object], Pbar=None,
                     budget: int = DEFAULT_BUDGET) -> list[QuiverRep]:
    """Stable factors of a Jordan-Hoelder filtration (exhaustive, F_p only)."""
    P = _resolve_pbar(rep, b, Pbar)
    v = check_semistable(rep, b, P, "exhaustive-ff", budget)
    if v.status == UNSTABLE:
        raise RepError("gr is only defined for semistable representations")
    return _gr(rep, b, P, budget)


def _gr(rep: QuiverRep, b, P, budget) -> list[QuiverRep]:
    q = rep.quiver
    best = None
    for S in enumerate_subreps_ff(rep, budget):
        if S.is_zero() or S.is_full(rep):
            continue
        if theta_king(q, P, b, S.dims()) != 0:
            continue
        key = (sum(S.dim_vector()), S.dim_vector())
        if best is None or key > best[0]:
            best = (key, S)
    if best is None:
        return [rep]
    S = best[1]
    return _gr(restrict_to_subrep(rep, S), b, P, budget) + [quotient_by_subrep(rep, S)]


def apply_group(rep: QuiverRep, g: Mapping[int, Mat]) -> QuiverRep:
    """f'_a = g_h f_a g_t^{-1}."""
    F = rep.field
    ginv = {}
    for i in rep.quiver.vertices:
        gi = as_matrix(F, g[i], rep.dims[i], rep.dims[i])
        try:
            ginv[i] = inverse(F, gi) if rep.dims[i] else ()
        except ZeroDivisionError as exc:
            raise RepError(f"group element at vertex {i} is singular") from exc
    mats = {}
    for (t, h), m in rep.matrices.items():
        gh = as_matrix(F, g[h], rep.dims[h], rep.dims[h])
        left = mat_mul(F, gh, m, ncols=rep.dims[t])
        mats[(t, h)] = mat_mul(F, left, ginv[t], ncols=rep.dims[t]) if left else left
    return QuiverRep(rep.quiver, F, rep.dims, mats)


def group_from_flags(rep: QuiverRep, flags: Mapping[int, str], z) -> dict[int, Mat]:
    """Diagonal group element: z * id on vertices flagged 'z', identity elsewhere."""
    F = rep.field
    z = F(z)
    return {i: tuple(tuple(z if (r == c and flags[i] == "z") else (F(1) if r == c else F(0))
                           for c in range(rep.dims[i])) for r in range(rep.dims[i]))
            for i in rep.quiver.vertices}


# -- equivalence ---------------------------------------------------------------

def _intertwiner_system(r1: QuiverRep, r2: QuiverRep):
    """Rows of the linear system psi_h f_a = f'_a psi_t in the entries of psi."""
    F = r1.field
    offs, n = {}, 0
    for i in r1.quiver.vertices:
        offs[i] = n
        n += r1.dims[i] ** 2
    rows = []
    for a in r1.quiver.arrows:
        t, h = a
        f, f2 = r1.matrices[a], r2.matrices[a]
        dt, dh = r1.dims[t], r1.dims[h]
        for r in range(dh):
            for c in range(dt):
                row = [F(0)] * n
                # (psi_h f)[r][c] = sum_k psi_h[r][k] f[k][c]
                for k in range(dh):
                    if f[k][c]:
                        row[offs[h] + r * dh + k] = F.norm(row[offs[h] + r * dh + k] + f[k][c])
                # (f' psi_t)[r][c] = sum_k f'[r][k] psi_t[k][c]
                for k in range(dt):
                    if f2[r][k]:
                        idx = offs[t] + k * dt + c
                        row[idx] = F.norm(row[idx] - f2[r][k])
                rows.append(row)
    return rows, n, offs


def _blocks(r1: QuiverRep, vec, offs) -> dict[int, Mat]:
    out = {}
    for i in r1.quiver.vertices:
        d = r1.dims[i]
        o = offs[i]
        out[i] = tuple(tuple(vec[o + r * d + c] for c in range(d)) for r in range(d))
    return out


def are_equivalent(r1: QuiverRep, r2: QuiverRep, budget: int = DEFAULT_BUDGET,
                   samples: int = 24, seed: int = 0) -> bool:
    if r1.quiver != r2.quiver or r1.field != r2.field:
        raise RepError("equivalence needs the same quiver and field")
    if r1.dims != r2.dims:
        return False
    F = r1.field
    rows, n, offs = _intertwiner_system(r1, r2)
    basis = nullspace(F, rows, n) if rows else tuple(
        tuple(F(1) if k == m else F(0) for k in range(n)) for m in range(n))
    if not basis:
        return n == 0

    def invertible(vec) -> bool:
        return all(is_invertible(F, blk) for blk in _blocks(r1, vec, offs).values() if blk)

    def combo(cs):
        return tuple(F.norm(sum(c * v[k] for c, v in zip(cs, basis))) for k in range(n))

    if F.is_finite:
        count = F.char ** len(basis)
        if count > budget:
            raise BudgetExceeded(f"{count} intertwiners exceed the budget {budget}")
        return any(invertible(combo(cs))
                   for cs in itertools.product(F.elements(), repeat=len(basis)))
    # det of the block-diagonal intertwiner is a polynomial of degree <= sum(dims)
    # in the basis coefficients; a nonzero one survives random sampling w.h.p.
    rng = random.Random(seed)
    spread = 4 * max(1, sum(r1.dims.values())) + 1
    return any(invertible(combo([rng.randint(-spread, spread) for _ in basis]))
               for _ in range(samples))


# -- GIT side ------------------------------------------------------------------

def adapted_basis(U: Subspace) -> Mat:
    """Columns: basis of U followed by complementary standard vectors."""
    cols = list(U.basis) + list(U.complement_basis())
    return transpose(cols, U.dim) if cols else ()


def _coordinate_flag_ok(m: Mat, jt: int, jh: int) -> bool:
    """The first jt basis vectors map into the span of the first jh."""
    return all(m[r][c] == 0 for r in range(jh, len(m)) for c in range(jt))


def git_check(rep: QuiverRep, b: Mapping[Arrow, object], mode: str = "exhaustive-ff",
              budget: int = DEFAULT_BUDGET) -> Verdict:
    """Test the flag weights sum_a b_a (j_h/p_h - j_t/p_t) over adapted-basis flags."""
    q = rep.quiver
    F = rep.field
    b = _check_b(q, b)
    P = _pbar(q, rep.dims)
    if mode == "exhaustive-ff":
        tuples, tag = enumerate_subreps_ff(rep, budget), EXHAUSTIVE
    elif mode == "lattice-adapted":
        tuples, tag = lattice_subreps(rep, budget), LATTICE_ONLY
    else:
        raise RepError(f"unknown flag source {mode!r}; expected one of {', '.join(GIT_MODES)}")
    full = tuple(rep.dims[i] for i in q.vertices)
    frames: dict = {}  # (vertex, subspace) -> (M, M^{-1})

    def frame(i, U):
        key = (i, U.basis)
        if key not in frames:
            M = adapted_basis(U)
            frames[key] = (M, inverse(F, M) if rep.dims[i] else ())
        return frames[key]

    worst, wit, wflag = None, None, None
    for S in tuples:
        jj = S.dim_vector()
        if not any(jj) or jj == full:
            continue
        flag = dict(zip(q.vertices, jj))
        fr = {i: frame(i, S.spaces[i]) for i in q.vertices}
        for (t, h), m in rep.matrices.items():
            moved = mat_mul(F, mat_mul(F, fr[h][1], m, ncols=rep.dims[t]), fr[t][0],
                            ncols=rep.dims[t])
            if not _coordinate_flag_ok(moved, flag[t], flag[h]):
                raise AssertionError("adapted basis did not produce a compatible flag")
        val = sum((b[(t, h)] * (Fraction(flag[h]) / P[h] - Fraction(flag[t]) / P[t])
                   for t, h in q.arrows), Fraction(0))
        if worst is None or val < worst:
            worst, wit, wflag = val, S, jj
    if worst is None or worst > 0:
        return Verdict(STABLE, tag, None, worst)
    return Verdict(SEMISTABLE if worst == 0 else UNSTABLE, tag, wit, worst, wflag)


def all_reps_ff(q: Quiver, F: Field, dims: Mapping[int, int]) -> Iterator[QuiverRep]:
    """Every representation of q with the given dimensions over F_p."""
    from .linalg import all_matrices
    gens = [list(all_matrices(F, dims[h], dims[t])) for t, h in q.arrows]
    for mats in itertools.product(*gens):
        yield QuiverRep(q, F, dims, dict(zip(q.arrows, mats)))


__all__ = [
    "QuiverRep", "SubRep", "Verdict", "BudgetExceeded", "RepError",
    "theta_king", "character_exponents", "generated_subrep", "enumerate_subreps_ff",
    "lattice_subreps", "check_semistable", "gr_jordan_holder", "are_equivalent",
    "apply_group", "group_from_flags", "git_check", "direct_sum", "restrict_to_subrep",
    "quotient_by_subrep", "restrict_to_subquiver", "all_reps_ff",
]
