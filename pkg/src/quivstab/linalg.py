"""Exact linear algebra over Q (Fractions) and small prime fields F_p.

Matrices are tuples of row tuples; a ``q x p`` matrix maps column vectors of
length p to length q.  Subspaces are stored as RREF bases (tuple of rows).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Sequence

from . import ffkernel
from .exactpoly import format_rat, parse_rat

Vec = tuple
Mat = tuple


class Field:
    """Either the rationals (``char == 0``) or the prime field F_char."""

    __slots__ = ("char",)

    def __init__(self, char: int = 0):
        if char < 0 or char == 1 or (char > 1 and not _is_prime(char)):
            raise ValueError(f"field characteristic {char} is not 0 or a prime")
        self.char = char

    @classmethod
    def parse(cls, tag: str) -> "Field":
        tag = str(tag).strip()
        if tag in ("Q", "QQ"):
            return cls(0)
        if tag.startswith("F") and tag[1:].isdigit():
            return cls(int(tag[1:]))
        raise ValueError(f"unknown field tag {tag!r} (expected 'Q' or 'F<prime>')")

    @property
    def tag(self) -> str:
        return "Q" if self.char == 0 else f"F{self.char}"

    @property
    def is_finite(self) -> bool:
        return self.char > 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self) -> int:
        return hash(self.char)

    def __repr__(self) -> str:
        return f"Field({self.tag})"

    def __call__(self, x):
        t = type(x)
        if self.char:
            if t is int:
                return x % self.char
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    return (x.numerator * pow(x.denominator, -1, self.char)) % self.char
                x = x.numerator
            if isinstance(x, str):
                x = parse_rat(x)
                return self(x)
            return int(x) % self.char
        if t is Fraction:
            return x
        return parse_rat(x)

    def inv(self, x):
        if self.char:
            if x % self.char == 0:
                raise ZeroDivisionError("inverse of 0")
            return pow(x, -1, self.char)
        return 1 / Fraction(x)

    def norm(self, x):
        return x % self.char if self.char else x

    def elements(self) -> range:
        if not self.char:
            raise ValueError("the rationals are infinite")
        return range(self.char)

    def to_json(self, x):
        return int(x) if self.char else format_rat(x)


QQ = Field(0)


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


# -- basic matrix helpers -------------------------------------------------

def as_matrix(F: Field, rows, nrows: int, ncols: int) -> Mat:
    rows = [list(r) for r in rows] if rows is not None else []
    if nrows == 0:
        if rows and any(len(r) for r in rows):
            raise ValueError(f"expected an empty matrix, got {len(rows)} rows")
        return ()
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        shape = (len(rows), len(rows[0]) if rows else 0)
        raise ValueError(f"expected a {nrows}x{ncols} matrix, got {shape[0]}x{shape[1]}")
    return tuple(tuple(F(x) for x in r) for r in rows)


def zeros(nrows: int, ncols: int, F: Field = QQ) -> Mat:
    z = F(0)
    return tuple(tuple(z for _ in range(ncols)) for _ in range(nrows))


def identity(n: int, F: Field = QQ) -> Mat:
    one, zero = F(1), F(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def unit_vector(n: int, k: int, F: Field = QQ) -> Vec:
    return tuple(F(1) if i == k else F(0) for i in range(n))


def scalar_matrix(n: int, c, F: Field = QQ) -> Mat:
    return tuple(tuple(F(c) if i == j else F(0) for j in range(n)) for i in range(n))


def transpose(A: Mat, ncols: int | None = None) -> Mat:
    if not A:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*A))


def mat_vec(F: Field, A: Mat, v: Vec) -> Vec:
    return tuple(F.norm(sum(a * x for a, x in zip(row, v))) for row in A)


def mat_mul(F: Field, A: Mat, B: Mat, inner: int | None = None, ncols: int | None = None) -> Mat:
    """A (m x k) times B (k x n).  Shapes with zero sizes need ``ncols``."""
    if not A:
        return ()
    if not B:
        n = ncols if ncols is not None else 0
        return tuple(tuple(F(0) for _ in range(n)) for _ in A)
    Bt = tuple(zip(*B))
    return tuple(tuple(F.norm(sum(a * b for a, b in zip(row, col))) for col in Bt) for row in A)


def mat_scale(F: Field, A: Mat, c) -> Mat:
    c = F(c)
    return tuple(tuple(F.norm(c * x) for x in row) for row in A)


def is_zero_matrix(A: Mat) -> bool:
    return all(x == 0 for row in A for x in row)


# -- echelon forms ---------------------------------------------------------

def rref(F: Field, rows: Sequence[Sequence], ncols: int) -> tuple[Mat, tuple[int, ...]]:
    """Row-reduce; returns (nonzero RREF rows, pivot columns)."""
    if F.is_finite:
        return ffkernel.rref_mod(tuple(tuple(r) for r in rows), ncols, F.char)
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                e = m[k][c]
                m[k] = [x - e * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return tuple(tuple(x) for x in m[:r]), tuple(pivots)


def rank(F: Field, A: Mat, ncols: int) -> int:
    return len(rref(F, A, ncols)[1])


def reduce_vector(F: Field, v: Vec, basis: Mat, pivots: Sequence[int]) -> Vec:
    if F.is_finite:
        return ffkernel.reduce_mod(tuple(v), basis, tuple(pivots), F.char)
    v = list(v)
    for row, c in zip(basis, pivots):
        e = v[c]
        if e != 0:
            v = [x - e * y for x, y in zip(v, row)]
    return tuple(v)


def nullspace(F: Field, A: Mat, ncols: int) -> Mat:
    """Basis of {x : A x = 0} (columns of length ncols), one vector per free column."""
    R, piv = rref(F, A, ncols)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for fc in free:
        v = [F(0)] * ncols
        v[fc] = F(1)
        for row, pc in zip(R, piv):
            v[pc] = F.norm(-row[fc])
        out.append(tuple(v))
    return tuple(out)


def inverse(F: Field, A: Mat) -> Mat:
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("only square matrices are invertible")
    eye = identity(n, F)
    aug = [tuple(r) + eye[i] for i, r in enumerate(A)]
    R, piv = rref(F, aug, 2 * n)
    if tuple(piv[:n]) != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(R[i][n:]) for i in range(n))


def is_invertible(F: Field, A: Mat) -> bool:
    n = len(A)
    return all(len(r) == n for r in A) and rank(F, A, n) == n


# -- subspaces (as RREF bases of row vectors) -------------------------------

class Subspace:
    """Subspace of F^dim stored as an RREF basis."""

    __slots__ = ("F", "dim", "basis", "pivots")

    def __init__(self, F: Field, dim: int, vectors: Sequence[Sequence] = ()):
        self.F = F
        self.dim = dim
        for v in vectors:
            if len(v) != dim:
                raise ValueError(f"vector of length {len(v)} in a space of dimension {dim}")
        self.basis, self.pivots = rref(F, [tuple(F(x) for x in v) for v in vectors], dim)

    @classmethod
    def _raw(cls, F: Field, dim: int, basis: Mat, pivots) -> "Subspace":
        s = cls.__new__(cls)
        s.F, s.dim, s.basis, s.pivots = F, dim, tuple(basis), tuple(pivots)
        return s

    @classmethod
    def full(cls, F: Field, dim: int) -> "Subspace":
        return cls._raw(F, dim, identity(dim, F), range(dim))

    @classmethod
    def zero(cls, F: Field, dim: int) -> "Subspace":
        return cls._raw(F, dim, (), ())

    @classmethod
    def coordinate(cls, F: Field, dim: int, k: int) -> "Subspace":
        """V^{(k)}: span of the first k standard basis vectors."""
        return cls._raw(F, dim, identity(dim, F)[:k], range(k))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and (self.dim, self.basis) == (other.dim, other.basis)

    def __hash__(self) -> int:
        return hash((self.dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, basis={[list(map(str, r)) for r in self.basis]})"

    def contains_vector(self, v: Vec) -> bool:
        return not any(reduce_vector(self.F, v, self.basis, self.pivots))

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains_vector(v) for v in self.basis)

    def __ge__(self, other: "Subspace") -> bool:
        return other <= self

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.F, self.dim, self.basis + other.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        """Intersection via the nullspace of [B1; -B2]^T."""
        F = self.F
        if not self.basis or not other.basis:
            return Subspace.zero(F, self.dim)
        k1 = len(self.basis)
        cols = self.basis + tuple(tuple(F.norm(-x) for x in r) for r in other.basis)
        system = transpose(cols)
        vecs = []
        for coeffs in nullspace(F, system, len(cols)):
            v = [F(0)] * self.dim
            for c, row in zip(coeffs[:k1], self.basis):
                if c:
                    v = [F.norm(a + c * b) for a, b in zip(v, row)]
            vecs.append(v)
        return Subspace(F, self.dim, vecs)

    def image(self, A: Mat, target_dim: int) -> "Subspace":
        return Subspace(self.F, target_dim, [mat_vec(self.F, A, v) for v in self.basis]
                        if A else [])

    def preimage(self, A: Mat, source_dim: int) -> "Subspace":
        """{x in F^source_dim : A x in self}."""
        F = self.F
        if not A:
            return Subspace.full(F, source_dim)
        # A x in span(B) iff N A x = 0 where the rows of N span the annihilator of self
        ann = annihilator(self)
        if not ann:
            return Subspace.full(F, source_dim)
        NA = mat_mul(F, ann, A)
        return Subspace(F, source_dim, nullspace(F, NA, source_dim))

    def complement_basis(self) -> Mat:
        """Standard basis vectors at non-pivot columns, completing the basis."""
        piv = set(self.pivots)
        return tuple(unit_vector(self.dim, c, self.F) for c in range(self.dim) if c not in piv)


def annihilator(U: Subspace) -> Mat:
    """Rows spanning {y : y . u = 0 for all u in U}."""
    if not U.basis:
        return identity(U.dim, U.F)
    return nullspace(U.F, U.basis, U.dim)


def kernel(F: Field, A: Mat, source_dim: int) -> Subspace:
    if not A:
        return Subspace.full(F, source_dim)
    return Subspace(F, source_dim, nullspace(F, A, source_dim))


def column_space(F: Field, A: Mat, target_dim: int, source_dim: int) -> Subspace:
    if not A or source_dim == 0:
        return Subspace.zero(F, target_dim)
    return Subspace(F, target_dim, transpose(A))


def maps_into(F: Field, A: Mat, U: Subspace, W: Subspace) -> bool:
    """True iff A(U) is contained in W."""
    if not U.basis or not A:
        return True
    if F.is_finite:
        return ffkernel.maps_into_mod(A, U.basis, W.basis, W.pivots, F.char)
    return all(W.contains_vector(mat_vec(F, A, v)) for v in U.basis)


# -- enumeration over F_p ---------------------------------------------------

def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_subspaces(F: Field, n: int) -> Iterator[Subspace]:
    """Every subspace of F_p^n exactly once, by increasing dimension."""
    if not F.is_finite:
        raise ValueError("subspace enumeration needs a finite field")
    p = F.char
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            pset = set(piv)
            free = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pset]
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for r, pc in enumerate(piv):
                    rows[r][pc] = 1
                for (r, c), x in zip(free, vals):
                    rows[r][c] = x
                yield Subspace._raw(F, n, tuple(tuple(r) for r in rows), piv)


def all_matrices(F: Field, nrows: int, ncols: int) -> Iterator[Mat]:
    for vals in itertools.product(F.elements(), repeat=nrows * ncols):
        yield tuple(tuple(vals[r * ncols:(r + 1) * ncols]) for r in range(nrows))
