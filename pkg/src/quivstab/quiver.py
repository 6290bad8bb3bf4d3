"""Oriented-tree quivers and the combinatorics the constructions rely on.

Vertices are labelled ``1..n``; an arrow is its ``(tail, head)`` pair.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

Arrow = tuple[int, int]

UNIT, Z = "unit", "z"
ZERO, FULL, G_SLOT = "zero", "full", "G"


class QuiverError(ValueError):
    """Malformed quiver input (bad labels, unknown arrows, ...)."""


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        arrows = tuple((int(t), int(h)) for t, h in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if self.n < 0:
            raise QuiverError(f"negative vertex count {self.n}")
        for t, h in arrows:
            if not (1 <= t <= self.n and 1 <= h <= self.n):
                raise QuiverError(f"arrow ({t},{h}) has a vertex outside 1..{self.n}")

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def check_vertex(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise QuiverError(f"vertex {i} outside 1..{self.n}")

    def check_arrow(self, a: Arrow) -> Arrow:
        a = (int(a[0]), int(a[1]))
        if a not in self.arrows:
            raise QuiverError(f"{a} is not an arrow of the quiver")
        return a

    def neighbors(self, i: int) -> list[tuple[int, Arrow]]:
        """(neighbour, connecting arrow) pairs in arrow order."""
        out = []
        for a in self.arrows:
            t, h = a
            if t == i and h != i:
                out.append((h, a))
            elif h == i and t != i:
                out.append((t, a))
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "arrows": [list(a) for a in self.arrows]}

    @classmethod
    def from_json(cls, data) -> "Quiver":
        try:
            n = int(data["n"])
            arrows = [tuple(a) for a in data.get("arrows", [])]
        except (KeyError, TypeError) as exc:
            raise QuiverError(f"malformed quiver description: {exc}") from exc
        for a in arrows:
            if len(a) != 2:
                raise QuiverError(f"arrow {list(a)} must be a [tail, head] pair")
        return cls(n, tuple(arrows))

    @classmethod
    def path(cls, n: int) -> "Quiver":
        return cls(n, tuple((i, i + 1) for i in range(1, n)))


@dataclass(frozen=True)
class SubQuiver:
    vertices: frozenset = field(default_factory=frozenset)
    arrows: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arrows", frozenset(tuple(a) for a in self.arrows))
        for t, h in self.arrows:
            if t not in self.vertices or h not in self.vertices:
                raise QuiverError(f"arrow ({t},{h}) leaves the subquiver's vertex set")

    def contains(self, other: "SubQuiver") -> bool:
        return other.vertices <= self.vertices and other.arrows <= self.arrows


class TreeVerdict(NamedTuple):
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def validate_tree(q: Quiver) -> TreeVerdict:
    if len(set(q.arrows)) != len(q.arrows):
        return TreeVerdict(False, "multiple arrows")
    if any(t == h for t, h in q.arrows):
        return TreeVerdict(False, "loop arrow")
    if q.n == 0:
        return TreeVerdict(False, "empty quiver")
    if q.n != len(q.arrows) + 1:
        return TreeVerdict(False, f"#V = {q.n} but #A + 1 = {len(q.arrows) + 1}")
    if len(connected_components(q, q.vertices)) != 1:
        return TreeVerdict(False, "underlying graph is disconnected")
    return TreeVerdict(True, "oriented tree")


def require_tree(q: Quiver) -> None:
    verdict = validate_tree(q)
    if not verdict:
        raise QuiverError(f"not an oriented tree: {verdict.reason}")


def full_subquiver(q: Quiver, vertices: Iterable[int]) -> SubQuiver:
    vs = frozenset(vertices)
    for i in vs:
        q.check_vertex(i)
    return SubQuiver(vs, frozenset(a for a in q.arrows if a[0] in vs and a[1] in vs))


def connected_components(q: Quiver, vertices: Iterable[int]) -> list[frozenset]:
    """Components of the full subquiver on ``vertices``, smallest label first."""
    remaining = set(vertices)
    comps = []
    while remaining:
        start = min(remaining)
        seen = {start}
        todo = deque([start])
        while todo:
            i = todo.popleft()
            for k, _ in q.neighbors(i):
                if k in remaining and k not in seen:
                    seen.add(k)
                    todo.append(k)
        remaining -= seen
        comps.append(frozenset(seen))
    return comps


def star(q: Quiver, i: int) -> SubQuiver:
    q.check_vertex(i)
    arrows = frozenset(a for a in q.arrows if i in a)
    vertices = frozenset(v for a in arrows for v in a)
    return SubQuiver(vertices, arrows)


class Boundary(NamedTuple):
    ends: frozenset
    incoming: dict
    outgoing: dict


def ends_and_boundary(q: Quiver, sub: SubQuiver) -> Boundary:
    """END_Q(sub) with the ingoing and outgoing boundary arrows of each end."""
    for i in sub.vertices:
        q.check_vertex(i)
    for a in sub.arrows:
        if a not in q.arrows:
            raise QuiverError(f"{a} is not an arrow of the ambient quiver")
    ends, incoming, outgoing = set(), {}, {}
    for i in sorted(sub.vertices):
        st = star(q, i)
        if sub.contains(st):
            continue
        ends.add(i)
        outside = [a for a in q.arrows if i in a and a not in sub.arrows]
        incoming[i] = frozenset(a for a in outside if a[1] == i)
        outgoing[i] = frozenset(a for a in outside if a[0] == i)
    return Boundary(frozenset(ends), incoming, outgoing)


def find_leaf(q: Quiver) -> int:
    """Smallest vertex whose star consists of exactly one arrow."""
    require_tree(q)
    if q.n < 2:
        raise QuiverError("a leaf needs at least two vertices")
    for i in q.vertices:
        if len(star(q, i).arrows) == 1:
            return i
    raise AssertionError("trees with two or more vertices have leaves")


def split_at_arrow(q: Quiver, a0: Arrow) -> tuple[frozenset, frozenset]:
    """Vertex sets of the tail-side and head-side subtrees after removing a0."""
    require_tree(q)
    a0 = q.check_arrow(a0)
    rest = Quiver(q.n, tuple(a for a in q.arrows if a != a0))
    tail_side = next(c for c in connected_components(rest, q.vertices) if a0[0] in c)
    head_side = frozenset(q.vertices) - tail_side
    return tail_side, head_side


def rescale_vector(q: Quiver, a0: Arrow) -> dict[int, str]:
    """Flags of the diagonal element scaling f_{a0} alone: head side gets ``z``."""
    _, head_side = split_at_arrow(q, a0)
    return {i: (Z if i in head_side else UNIT) for i in q.vertices}


def path_to(q: Quiver, src: int, dst: int) -> list[Arrow]:
    """Arrows along the unique path from src to dst in the underlying tree."""
    q.check_vertex(src)
    q.check_vertex(dst)
    prev: dict[int, tuple[int, Arrow] | None] = {src: None}
    todo = deque([src])
    while todo:
        i = todo.popleft()
        if i == dst:
            break
        for k, a in q.neighbors(i):
            if k not in prev:
                prev[k] = (i, a)
                todo.append(k)
    if dst not in prev:
        raise QuiverError(f"no path from {src} to {dst}")
    out = []
    i = dst
    while prev[i] is not None:
        j, a = prev[i]
        out.append(a)
        i = j
    return out[::-1]


def boundedness_split(q: Quiver, i0: int) -> dict[int, str]:
    """Vertices whose path to i0 enters through an ingoing arrow of i0 are ``zero``."""
    require_tree(q)
    q.check_vertex(i0)
    out = {i0: G_SLOT}
    for i in q.vertices:
        if i == i0:
            continue
        last = path_to(q, i, i0)[-1]
        out[i] = ZERO if last[1] == i0 else FULL
    return out


def bfs_order(q: Quiver, root: int) -> list[tuple[int, int | None, Arrow | None]]:
    """(vertex, parent, arrow to parent) in breadth-first order from root."""
    q.check_vertex(root)
    order = [(root, None, None)]
    seen = {root}
    k = 0
    while k < len(order):
        i = order[k][0]
        k += 1
        for v, a in q.neighbors(i):
            if v not in seen:
                seen.add(v)
                order.append((v, i, a))
    return order
