"""Link states, their moves, the left ideals they generate, and glued graphs.

Vertices of a link state are 1-based.  Vertex 1 is the top of the column.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Iterator

from .diagram import (
    Diagram,
    Family,
    SizeMismatch,
    UnionFind,
    enumerate_diagrams,
    is_member,
)


class IllegalMove(ValueError):
    pass


class NoDefects(ValueError):
    pass


def _arc(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class LinkState:
    n: int
    arcs: frozenset = frozenset()
    defects: frozenset = frozenset()
    isolated: frozenset = frozenset()
    blobbed_arcs: frozenset = frozenset()
    blobbed_defects: frozenset = frozenset()

    def __post_init__(self):
        arcs = frozenset(_arc(a, b) for a, b in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "blobbed_arcs", frozenset(_arc(a, b) for a, b in self.blobbed_arcs))
        for name in ("defects", "isolated", "blobbed_defects"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        used = [v for a in arcs for v in a] + list(self.defects) + list(self.isolated)
        if sorted(used) != list(range(1, self.n + 1)):
            raise ValueError("arcs, defects and isolated vertices must partition 1..n")
        if not self.blobbed_arcs <= arcs or not self.blobbed_defects <= self.defects:
            raise ValueError("blobs must sit on arcs or defects of the state")

    @classmethod
    def make(cls, n: int, arcs: Iterable = (), defects: Iterable = (), isolated: Iterable = (),
             blobbed: Iterable = ()) -> "LinkState":
        """``blobbed`` mixes defect indices and arc pairs."""
        ba = [b for b in blobbed if isinstance(b, tuple)]
        bd = [b for b in blobbed if not isinstance(b, tuple)]
        return cls(n, frozenset(arcs), frozenset(defects), frozenset(isolated), frozenset(ba), frozenset(bd))

    @classmethod
    def all_defects(cls, n: int) -> "LinkState":
        return cls(n, defects=frozenset(range(1, n + 1)))

    @property
    def blobbed(self) -> frozenset:
        return self.blobbed_arcs | self.blobbed_defects

    @property
    def top_defect(self) -> int | None:
        return min(self.defects) if self.defects else None

    def partner(self, v: int) -> int | None:
        for a, b in self.arcs:
            if v == a:
                return b
            if v == b:
                return a
        return None

    def key(self) -> tuple:
        return (
            self.n,
            -len(self.defects),
            tuple(sorted(self.defects)),
            tuple(sorted(self.arcs)),
            tuple(sorted(self.isolated)),
            tuple(sorted(self.blobbed_defects)),
            tuple(sorted(self.blobbed_arcs)),
        )

    def __lt__(self, other: "LinkState"):
        return self.key() < other.key()

    def replace(self, **kw) -> "LinkState":
        fields = dict(n=self.n, arcs=self.arcs, defects=self.defects, isolated=self.isolated,
                      blobbed_arcs=self.blobbed_arcs, blobbed_defects=self.blobbed_defects)
        fields.update(kw)
        return LinkState(**fields)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "arcs": [list(a) for a in sorted(self.arcs)],
            "defects": sorted(self.defects),
            "isolated": sorted(self.isolated),
            "blobbed": [list(a) for a in sorted(self.blobbed_arcs)] + sorted(self.blobbed_defects),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinkState":
        blobbed = [tuple(b) if isinstance(b, list) else b for b in obj.get("blobbed", [])]
        return cls.make(obj["n"], [tuple(a) for a in obj["arcs"]], obj["defects"], obj["isolated"], blobbed)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __repr__(self):
        parts = []
        for a in sorted(self.arcs):
            parts.append(f"{a[0]}-{a[1]}" + ("*" if a in self.blobbed_arcs else ""))
        for d in sorted(self.defects):
            parts.append(f"|{d}" + ("*" if d in self.blobbed_defects else ""))
        for v in sorted(self.isolated):
            parts.append(f".{v}")
        return f"LinkState(n={self.n}, {' '.join(parts)})"


# ---------------------------------------------------------------------------
# Slicing and gluing


def _column_state(d: Diagram, right: bool) -> LinkState:
    n = d.n
    off = n if right else 0
    arcs, defects, isolated, ba, bd = [], [], [], [], []
    for j in range(n):
        s = off + j
        p = d.partner[s]
        blob = bool(d.blobs >> s & 1)
        if p < 0:
            isolated.append(j + 1)
        elif (p >= n) == right:
            if p - off > j:
                arcs.append((j + 1, p - off + 1))
                if blob:
                    ba.append((j + 1, p - off + 1))
        else:
            defects.append(j + 1)
            if blob:
                bd.append(j + 1)
    return LinkState(n, frozenset(arcs), frozenset(defects), frozenset(isolated), frozenset(ba), frozenset(bd))


def right_link_state(d: Diagram) -> LinkState:
    return _column_state(d, True)


def left_link_state(d: Diagram) -> LinkState:
    return _column_state(d, False)


def defect_matching(d: Diagram) -> tuple[tuple[int, int], ...]:
    """Pairs (left defect, right defect) joined by propagating edges."""
    return tuple((i + 1, p - d.n + 1) for i, p in enumerate(d.partner[: d.n]) if p >= d.n)


def glue(left: LinkState, right: LinkState, matching: Iterable[tuple[int, int]]) -> Diagram:
    """Reassemble a diagram from its two link states and the defect matching.

    A propagating edge is blobbed iff either of its defects is blobbed.
    """
    n = left.n
    if right.n != n:
        raise SizeMismatch("link states of different sizes")
    partner = [-1] * (2 * n)
    mask = 0
    for a, b in left.arcs:
        partner[a - 1], partner[b - 1] = b - 1, a - 1
        if (a, b) in left.blobbed_arcs:
            mask |= 1 << (a - 1) | 1 << (b - 1)
    for a, b in right.arcs:
        partner[n + a - 1], partner[n + b - 1] = n + b - 1, n + a - 1
        if (a, b) in right.blobbed_arcs:
            mask |= 1 << (n + a - 1) | 1 << (n + b - 1)
    matching = list(matching)
    if sorted(a for a, _ in matching) != sorted(left.defects) or sorted(b for _, b in matching) != sorted(right.defects):
        raise ValueError("matching must pair the defects of both states")
    for a, b in matching:
        partner[a - 1], partner[n + b - 1] = n + b - 1, a - 1
        if a in left.blobbed_defects or b in right.blobbed_defects:
            mask |= 1 << (a - 1) | 1 << (n + b - 1)
    return Diagram(n, partner, mask)


def mirror_diagram(p: LinkState) -> Diagram:
    """The diagram whose left and right link states both equal p, defects horizontal."""
    return glue(p, p, [(a, a) for a in sorted(p.defects)])


def is_legal(p: LinkState, fam: Family) -> bool:
    """Whether p is the right link state of some member diagram."""
    return is_member(mirror_diagram(p), fam)


# ---------------------------------------------------------------------------
# Moves

_SPLICE = {"RB", "M", "B", "WB", "TL", "BL", "DTL"}
_DELETE = {"RB", "M", "R", "PR"}


def splice(p: LinkState, i: int, j: int, fam: Family) -> LinkState:
    if i == j or i not in p.defects or j not in p.defects:
        raise IllegalMove(f"splice needs two distinct defects, got {i}, {j}")
    if fam.kind not in _SPLICE:
        raise IllegalMove(f"{fam} allows no splices")
    lo, hi = sorted((i, j))
    if fam.planar and any(lo < d < hi for d in p.defects):
        raise IllegalMove(f"crossing: arc {lo}-{hi} would separate a remaining defect")
    if fam.kind == "WB" and (lo <= fam.r) == (hi <= fam.r):
        raise IllegalMove(f"wall: defects {lo} and {hi} lie on the same side")
    blob = i in p.blobbed_defects or j in p.blobbed_defects
    q = p.replace(
        arcs=p.arcs | {(lo, hi)},
        defects=p.defects - {i, j},
        blobbed_defects=p.blobbed_defects - {i, j},
        blobbed_arcs=p.blobbed_arcs | ({(lo, hi)} if blob else set()),
    )
    if not is_legal(q, fam):
        raise IllegalMove("blob-nesting: result is not a legal link state" if fam.blob else "result is not legal")
    return q


def delete(p: LinkState, i: int, fam: Family) -> LinkState:
    if i not in p.defects:
        raise IllegalMove(f"{i} is not a defect")
    if fam.kind not in _DELETE:
        raise IllegalMove(f"{fam} allows no deletions")
    return p.replace(defects=p.defects - {i}, isolated=p.isolated | {i},
                     blobbed_defects=p.blobbed_defects - {i})


def blob_move(p: LinkState, fam: Family | None = None) -> LinkState:
    if fam is not None and not fam.blob:
        raise IllegalMove(f"{fam} has no blobs")
    t = p.top_defect
    if t is None:
        raise IllegalMove("no defect to blob")
    if t in p.blobbed_defects:
        raise IllegalMove("top defect is already blobbed")
    return p.replace(blobbed_defects=p.blobbed_defects | {t})


def moves(p: LinkState, fam: Family) -> Iterator[LinkState]:
    ds = sorted(p.defects)
    for x in range(len(ds)):
        for y in range(x + 1, len(ds)):
            try:
                yield splice(p, ds[x], ds[y], fam)
            except IllegalMove:
                pass
    if fam.kind in _DELETE:
        for d in ds:
            yield delete(p, d, fam)
    if fam.blob:
        try:
            yield blob_move(p, fam)
        except IllegalMove:
            pass


@lru_cache(maxsize=4096)
def closure(p: LinkState, fam: Family) -> frozenset:
    seen = {p}
    queue = deque([p])
    while queue:
        q = queue.popleft()
        for r in moves(q, fam):
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return frozenset(seen)


def _family_of(spec) -> Family:
    return spec if isinstance(spec, Family) else spec.family


def reachable_ideal_basis(p: LinkState, spec) -> list[Diagram]:
    """Basis of the left ideal spanned by diagrams whose right link state is
    reachable from p."""
    fam = _family_of(spec)
    reach = closure(p, fam)
    return [d for d in enumerate_diagrams(fam, p.n) if right_link_state(d) in reach]


def link_state_sets(spec, i: int, kind: str = "P", n: int | None = None) -> list[LinkState]:
    """P_i (right link states with i defects), Q_i, Qb_i (top defect blobbed)
    or R_i = Q_{i-1} + Qb_i for blob algebras."""
    fam = _family_of(spec)
    if n is None:
        n = spec.n if not isinstance(spec, Family) else fam.size()
    states = {right_link_state(d) for d in enumerate_diagrams(fam, n)}
    kind = kind.upper()
    if kind == "P":
        out = {s for s in states if len(s.defects) == i}
    elif kind == "Q":
        out = {s for s in states if len(s.defects) == i and not s.blobbed_defects}
    elif kind in ("QB", "Q*"):
        out = {s for s in states if len(s.defects) == i and i >= 1 and s.top_defect in s.blobbed_defects}
    elif kind == "R":
        if i == 0:
            return link_state_sets(fam, 0, "Q", n)
        out = set(link_state_sets(fam, i, "QB", n))
        if i >= 2:
            out |= set(link_state_sets(fam, i - 1, "Q", n))
    else:
        raise ValueError(f"unknown link-state set {kind!r}")
    return sorted(out)


# ---------------------------------------------------------------------------
# Glued graphs


@dataclass
class Component:
    vertices: tuple
    edges: int
    blobbed: bool

    @property
    def is_loop(self) -> bool:
        return self.edges == len(self.vertices) and self.edges > 0


@dataclass
class GluedGraph:
    """A graph of maximum degree two with blob flags on edges."""

    vertices: list
    edges: list = field(default_factory=list)  # (u, v, blobbed)

    def __post_init__(self):
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self._uf = UnionFind(len(self.vertices))
        for u, v, _ in self.edges:
            self._uf.union(self._index[u], self._index[v])

    def connected(self, x: Hashable, y: Hashable) -> bool:
        return self._uf.find(self._index[x]) == self._uf.find(self._index[y])

    def components(self) -> list[Component]:
        groups: dict[int, list] = {}
        for v in self.vertices:
            groups.setdefault(self._uf.find(self._index[v]), []).append(v)
        ecount: dict[int, int] = {}
        blob: dict[int, bool] = {}
        for u, _, b in self.edges:
            r = self._uf.find(self._index[u])
            ecount[r] = ecount.get(r, 0) + 1
            blob[r] = blob.get(r, False) or b
        return [Component(tuple(vs), ecount.get(r, 0), blob.get(r, False)) for r, vs in sorted(groups.items())]

    def loops(self) -> list[Component]:
        return [c for c in self.components() if c.is_loop]

    def component_of(self, x: Hashable) -> Component:
        r = self._uf.find(self._index[x])
        for c in self.components():
            if self._uf.find(self._index[c.vertices[0]]) == r:
                return c
        raise KeyError(x)


def _diagram_edges(d: Diagram, left: str, right: str):
    n = d.n
    out = []
    for a, b in d.edges():
        u = (left, a + 1) if a < n else (right, a - n + 1)
        v = (left, b + 1) if b < n else (right, b - n + 1)
        out.append((u, v, bool(d.blobs >> a & 1)))
    return out


def double_diagram(d1: Diagram, d2: Diagram) -> GluedGraph:
    """Three columns L, M, R: d1 between L and M, d2 between M and R."""
    if d1.n != d2.n:
        raise SizeMismatch("diagram sizes differ")
    n = d1.n
    verts = [(c, i) for c in ("L", "M", "R") for i in range(1, n + 1)]
    return GluedGraph(verts, _diagram_edges(d1, "L", "M") + _diagram_edges(d2, "M", "R"))


def _state_edges(p: LinkState, col: str, hang: str):
    out = []
    for a, b in sorted(p.arcs):
        out.append(((col, a), (col, b), (a, b) in p.blobbed_arcs))
    for d in sorted(p.defects):
        out.append(((hang, d), (col, d), d in p.blobbed_defects))
    return out


def sesqui(p: LinkState, d: Diagram) -> GluedGraph:
    """p drawn on the middle column M, d from M to the right column R.

    Each defect of p becomes an edge from a hanging vertex ("H", i) to ("M", i).
    """
    if p.n != d.n:
        raise SizeMismatch("sizes differ")
    n = p.n
    verts = [(c, i) for c in ("H", "M", "R") for i in range(1, n + 1)]
    return GluedGraph(verts, _state_edges(p, "M", "H") + _diagram_edges(d, "M", "R"))


def juxtapose(q: LinkState, q2: LinkState) -> GluedGraph:
    """q drawn left of the column V and q2 right of it."""
    if q.n != q2.n:
        raise SizeMismatch("sizes differ")
    n = q.n
    verts = [(c, i) for c in ("HL", "V", "HR") for i in range(1, n + 1)]
    return GluedGraph(verts, _state_edges(q, "V", "HL") + _state_edges(q2, "V", "HR"))
