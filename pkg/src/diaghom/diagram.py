"""Diagrams, family legality, enumeration and three-column composition.

A diagram of size n lives on 2n slots: slot ``i`` (0-based, ``i < n``) is
the left vertex ``i+1`` and slot ``n+i`` is the right vertex ``i+1``.  The
partner array maps each slot to its partner slot or to -1 (isolated).  Blob
decorations are a bitmask over slots with both endpoints of a blobbed edge
set.

In the convenience constructors a positive integer ``i`` names the left
vertex i and a negative integer ``-i`` names the right vertex i (printed as
``i'``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class SizeTooLarge(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


class FamilyViolation(ValueError):
    pass


# ---------------------------------------------------------------------------
# Families

_KINDS = {
    "RB": "rook-Brauer",
    "M": "Motzkin",
    "R": "rook",
    "PR": "planar rook",
    "B": "Brauer",
    "WB": "walled Brauer",
    "TL": "Temperley-Lieb",
    "BL": "blob",
    "DTL": "dilute Temperley-Lieb",
}

_ALIASES = {
    "rb": "RB", "rookbrauer": "RB", "rook-brauer": "RB",
    "m": "M", "motzkin": "M",
    "r": "R", "rook": "R",
    "pr": "PR", "planarrook": "PR", "planar-rook": "PR",
    "b": "B", "brauer": "B",
    "wb": "WB", "walled": "WB", "walledbrauer": "WB", "walled-brauer": "WB",
    "tl": "TL", "temperleylieb": "TL", "temperley-lieb": "TL",
    "bl": "BL", "blob": "BL",
    "dtl": "DTL", "dilute": "DTL", "dilutetl": "DTL", "dilute-tl": "DTL",
}


@dataclass(frozen=True)
class Family:
    kind: str
    r: int = 0
    s: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown family {self.kind!r}")
        if self.kind == "WB":
            if self.r < 0 or self.s < 0:
                raise ValueError("walled Brauer needs r, s >= 0")
        elif self.r or self.s:
            raise ValueError("only walled Brauer carries (r, s)")

    @classmethod
    def parse(cls, text: str, r: int | None = None, s: int | None = None) -> "Family":
        key = _ALIASES.get(text.strip().lower().replace("_", "-"))
        if key is None:
            key = _ALIASES.get(text.strip().lower().replace("_", "").replace("-", ""))
        if key is None:
            raise ValueError(f"unknown family {text!r}")
        if key == "WB":
            if r is None or s is None:
                raise ValueError("walled Brauer needs r and s")
            return cls("WB", r, s)
        return cls(key)

    @property
    def name(self) -> str:
        if self.kind == "WB":
            return f"walled Brauer({self.r},{self.s})"
        return _KINDS[self.kind]

    def token(self) -> str:
        return {"RB": "rb", "M": "motzkin", "R": "rook", "PR": "planar-rook", "B": "brauer",
                "WB": "walled", "TL": "tl", "BL": "blob", "DTL": "dtl"}[self.kind]

    def __str__(self):
        return self.name

    @property
    def planar(self) -> bool:
        return self.kind in ("M", "PR", "TL", "BL", "DTL")

    @property
    def allows_isolated(self) -> bool:
        return self.kind in ("RB", "M", "R", "PR", "DTL")

    @property
    def rook_like(self) -> bool:
        """Members of the rook-Brauer algebra whose middle components carry epsilon."""
        return self.kind in ("RB", "M", "R", "PR")

    @property
    def blob(self) -> bool:
        return self.kind == "BL"

    @property
    def dilute(self) -> bool:
        return self.kind == "DTL"

    @property
    def params(self) -> tuple[str, ...]:
        return {
            "RB": ("delta", "epsilon"), "M": ("delta", "epsilon"),
            "R": ("epsilon",), "PR": ("epsilon",),
            "B": ("delta",), "WB": ("delta",), "TL": ("delta",), "DTL": ("delta",),
            "BL": ("delta", "gamma"),
        }[self.kind]

    def size(self, n: int | None = None) -> int:
        if self.kind == "WB":
            if n is not None and n != self.r + self.s:
                raise SizeMismatch(f"walled Brauer({self.r},{self.s}) has size {self.r + self.s}")
            return self.r + self.s
        if n is None:
            raise ValueError("size required")
        return n


RookBrauer = Family("RB")
Motzkin = Family("M")
Rook = Family("R")
PlanarRook = Family("PR")
Brauer = Family("B")
TemperleyLieb = Family("TL")
Blob = Family("BL")
DiluteTL = Family("DTL")


def WalledBrauer(r: int, s: int) -> Family:
    return Family("WB", r, s)


# ---------------------------------------------------------------------------
# Diagrams


def _slot(n: int, v: int) -> int:
    if v > 0 and v <= n:
        return v - 1
    if v < 0 and -v <= n:
        return n - v - 1
    raise ValueError(f"vertex {v} out of range for size {n}")


def _vertex(n: int, slot: int) -> int:
    return slot + 1 if slot < n else -(slot - n + 1)


def _label(n: int, slot: int) -> str:
    return str(slot + 1) if slot < n else f"{slot - n + 1}'"


class Diagram:
    """An immutable decorated partial matching on two columns."""

    __slots__ = ("n", "partner", "blobs", "_hash", "_edges")

    def __init__(self, n: int, partner: Sequence[int], blobs: int = 0):
        partner = tuple(int(p) for p in partner)
        if len(partner) != 2 * n:
            raise ValueError("partner array must have 2n entries")
        for s, p in enumerate(partner):
            if p == s or p < -1 or p >= 2 * n or (p >= 0 and partner[p] != s):
                raise ValueError(f"inconsistent partner array {partner}")
        for s in range(2 * n):
            if blobs >> s & 1 and (partner[s] < 0 or not blobs >> partner[s] & 1):
                raise ValueError("blob mask must cover whole edges")
        if blobs >> (2 * n):
            raise ValueError("blob mask out of range")
        self.n = n
        self.partner = partner
        self.blobs = int(blobs)
        self._hash = hash((n, partner, self.blobs))
        self._edges = None

    # construction

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], blobs: Iterable[tuple[int, int]] = ()) -> "Diagram":
        partner = [-1] * (2 * n)
        for a, b in edges:
            sa, sb = _slot(n, a), _slot(n, b)
            if sa == sb or partner[sa] >= 0 or partner[sb] >= 0:
                raise ValueError(f"vertex used twice or self-loop in edge ({a}, {b})")
            partner[sa], partner[sb] = sb, sa
        mask = 0
        for a, b in blobs:
            sa, sb = _slot(n, a), _slot(n, b)
            if partner[sa] != sb:
                raise ValueError(f"blob on ({a}, {b}) which is not an edge")
            mask |= 1 << sa | 1 << sb
        return cls(n, partner, mask)

    @classmethod
    def identity(cls, n: int) -> "Diagram":
        return cls(n, [i + n for i in range(n)] + list(range(n)))

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "Diagram":
        """Left vertex i joined to right vertex perm[i] (0-based images)."""
        n = len(perm)
        partner = [-1] * (2 * n)
        for i, j in enumerate(perm):
            partner[i], partner[n + j] = n + j, i
        return cls(n, partner)

    @classmethod
    def empty(cls, n: int) -> "Diagram":
        return cls(n, [-1] * (2 * n))

    # structure

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.n == other.n and self.partner == other.partner and self.blobs == other.blobs

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Diagram"):
        return canonical_key(self) < canonical_key(other)

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as slot pairs (a, b) with a < b, sorted."""
        if self._edges is None:
            self._edges = tuple((s, p) for s, p in enumerate(self.partner) if p > s)
        return self._edges

    def vertex_edges(self) -> list[tuple[int, int]]:
        """Edges in signed-vertex notation."""
        return [(_vertex(self.n, a), _vertex(self.n, b)) for a, b in self.edges()]

    def blobbed_edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in self.edges() if self.blobs >> a & 1]

    def is_blobbed(self, a: int, b: int) -> bool:
        return bool(self.blobs >> a & 1) and self.partner[a] == b

    def is_propagating(self, a: int, b: int) -> bool:
        return (a < self.n) != (b < self.n)

    def propagating_edges(self) -> list[tuple[int, int]]:
        """Propagating edges as (left slot, right slot), ordered by left endpoint."""
        n = self.n
        return [(i, self.partner[i]) for i in range(n) if self.partner[i] >= n]

    def isolated(self) -> list[int]:
        return [s for s, p in enumerate(self.partner) if p < 0]

    def is_permutation(self) -> bool:
        return all(self.partner[i] >= self.n for i in range(self.n))

    def is_identity(self) -> bool:
        return not self.blobs and all(self.partner[i] == i + self.n for i in range(self.n))

    def flipped(self) -> "Diagram":
        """Mirror left and right columns."""
        n = self.n

        def sw(s):
            return s + n if s < n else s - n

        partner = [-1] * (2 * n)
        mask = 0
        for s, p in enumerate(self.partner):
            partner[sw(s)] = sw(p) if p >= 0 else -1
            if self.blobs >> s & 1:
                mask |= 1 << sw(s)
        return Diagram(n, partner, mask)

    def __repr__(self):
        parts = []
        for a, b in self.edges():
            t = f"{_label(self.n, a)}-{_label(self.n, b)}"
            if self.blobs >> a & 1:
                t += "*"
            parts.append(t)
        return f"Diagram(n={self.n}, {{{', '.join(parts)}}})"

    # serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "partner": [p + 1 for p in self.partner],
            "blobs": [[a + 1, b + 1] for a, b in self.blobbed_edges()],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Diagram":
        n = obj["n"]
        partner = [p - 1 for p in obj["partner"]]
        mask = 0
        for a, b in obj.get("blobs", []):
            mask |= 1 << (a - 1) | 1 << (b - 1)
        return cls(n, partner, mask)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def propagating_count(d: Diagram) -> int:
    n = d.n
    return sum(1 for i in range(n) if d.partner[i] >= n)


def canonical_key(d: Diagram) -> tuple:
    """Total order: fewer missing propagating edges first, then the 1-based
    partner array, then the blob mask.  The identity is the least diagram."""
    return (d.n - propagating_count(d), tuple(p + 1 for p in d.partner), d.blobs)


# ---------------------------------------------------------------------------
# Legality


def cyclic_position(n: int, slot: int) -> int:
    """Position in the boundary order 1..n, n'..1'."""
    return slot if slot < n else 3 * n - 1 - slot


def _crossing(n: int, e: tuple[int, int], f: tuple[int, int]) -> bool:
    a, b = sorted((cyclic_position(n, e[0]), cyclic_position(n, e[1])))
    c, d = cyclic_position(n, f[0]), cyclic_position(n, f[1])
    return (a < c < b) != (a < d < b)


def is_planar(d: Diagram) -> bool:
    es = d.edges()
    for i in range(len(es)):
        for j in range(i + 1, len(es)):
            if _crossing(d.n, es[i], es[j]):
                return False
    return True


def _nested_in_arc(d: Diagram, a: int, b: int) -> bool:
    """True if the arc {a, b} (same side) lies under another arc on that side."""
    n = d.n
    side = a < n
    lo, hi = sorted((a, b))
    for c, e in d.edges():
        if (c, e) == (lo, hi) or (c < n) != side or (e < n) != side:
            continue
        if c < lo and hi < e:
            return True
    return False


def blob_legal(d: Diagram) -> bool:
    if not d.blobs:
        return True
    n = d.n
    props = d.propagating_edges()
    top_left = min((i for i, _ in props), default=None)
    top_right = min((j for _, j in props), default=None)
    for a, b in d.blobbed_edges():
        if d.is_propagating(a, b):
            if a != top_left or b != top_right:
                return False
            continue
        if _nested_in_arc(d, a, b):
            return False
        if props:
            bound = top_left if a < n else top_right
            if max(a, b) >= bound:
                return False
    return True


def is_member(d: Diagram, fam: Family) -> bool:
    n = d.n
    if fam.kind == "WB" and n != fam.r + fam.s:
        return False
    if d.blobs and not fam.blob:
        return False
    if not fam.allows_isolated and any(p < 0 for p in d.partner):
        return False
    if fam.kind in ("R", "PR") and not all(d.is_propagating(a, b) for a, b in d.edges()):
        return False
    if fam.planar and not is_planar(d):
        return False
    if fam.kind == "WB":
        r = fam.r
        for a, b in d.edges():
            ia, ib = a % n, b % n
            same_block = (ia < r) == (ib < r)
            if d.is_propagating(a, b) != same_block:
                return False
    if fam.blob and not blob_legal(d):
        return False
    return True


# ---------------------------------------------------------------------------
# Enumeration

DEFAULT_CAP = 6
DEFAULT_PLANAR_CAP = 8


def _matchings(seq: tuple[int, ...], isolated: bool, planar: bool) -> Iterator[list[tuple[int, int]]]:
    if not seq:
        yield []
        return
    first, rest = seq[0], seq[1:]
    if isolated:
        yield from _matchings(rest, isolated, planar)
    for k in range(len(rest)):
        if planar:
            inside, outside = rest[:k], rest[k + 1:]
            if not isolated and len(inside) % 2:
                continue
            for a in _matchings(inside, isolated, planar):
                for b in _matchings(outside, isolated, planar):
                    yield [(first, rest[k])] + a + b
        else:
            remaining = rest[:k] + rest[k + 1:]
            for m in _matchings(remaining, isolated, planar):
                yield [(first, rest[k])] + m


def _blob_variants(d: Diagram) -> Iterator[Diagram]:
    candidates = []
    for a, b in d.edges():
        trial = Diagram(d.n, d.partner, 1 << a | 1 << b)
        if blob_legal(trial):
            candidates.append(1 << a | 1 << b)
    for sub in range(1 << len(candidates)):
        mask = 0
        for i, m in enumerate(candidates):
            if sub >> i & 1:
                mask |= m
        yield Diagram(d.n, d.partner, mask)


def enumerate_diagrams(fam: Family, n: int | None = None, cap: int | None = None) -> list[Diagram]:
    """All member diagrams of size n in canonical order."""
    n = fam.size(n)
    limit = cap if cap is not None else (DEFAULT_PLANAR_CAP if fam.planar else DEFAULT_CAP)
    if n > limit:
        raise SizeTooLarge(f"n={n} exceeds the enumeration cap {limit} for {fam}")
    return list(_enumerate_cached(fam, n))


@lru_cache(maxsize=None)
def _enumerate_cached(fam: Family, n: int) -> tuple[Diagram, ...]:
    order = tuple(range(n)) + tuple(range(2 * n - 1, n - 1, -1))
    out = []
    for m in _matchings(order, fam.allows_isolated, fam.planar):
        partner = [-1] * (2 * n)
        for a, b in m:
            partner[a], partner[b] = b, a
        d = Diagram(n, partner)
        if not is_member(d, Family("TL") if fam.blob else fam):
            continue
        if fam.blob:
            out.extend(_blob_variants(d))
        else:
            out.append(d)
    out.sort(key=canonical_key)
    return tuple(out)


# ---------------------------------------------------------------------------
# Composition


class UnionFind:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class CompositionResult:
    diagram: Diagram | None
    loops: int = 0
    isolated_middle: int = 0
    blobbed_loops: int = 0
    is_zero: bool = False

    @property
    def exponents(self) -> tuple[int, int, int] | None:
        if self.is_zero:
            return None
        return (self.loops, self.isolated_middle, self.blobbed_loops)


ZERO_RESULT = CompositionResult(None, 0, 0, 0, True)


def double_edges(d1: Diagram, d2: Diagram) -> list[tuple[int, int, bool]]:
    """Edges of the double diagram on vertices L=0..n-1, M=n..2n-1, R=2n..3n-1."""
    n = d1.n
    out = []
    for a, b in d1.edges():
        out.append((a, b, bool(d1.blobs >> a & 1)))
    for a, b in d2.edges():
        out.append((a + n, b + n, bool(d2.blobs >> a & 1)))
    return out


def compose(d1: Diagram, d2: Diagram, fam: Family, check: bool = True) -> CompositionResult:
    """Concatenate d1 (left) with d2 (right) and classify middle components."""
    n = d1.n
    if d2.n != n:
        raise SizeMismatch(f"sizes {d1.n} and {d2.n} differ")
    if check:
        for d in (d1, d2):
            if not is_member(d, fam):
                raise FamilyViolation(f"{d} is not a {fam} diagram")
    edges = double_edges(d1, d2)
    deg = [0] * (3 * n)
    uf = UnionFind(3 * n)
    for a, b, _ in edges:
        deg[a] += 1
        deg[b] += 1
        uf.union(a, b)
    if fam.dilute:
        # a middle vertex met by exactly one edge ends a floating edge
        for m in range(n, 2 * n):
            if deg[m] == 1:
                return ZERO_RESULT
    ecount: dict[int, int] = {}
    blobbed: dict[int, bool] = {}
    for a, b, bl in edges:
        r = uf.find(a)
        ecount[r] = ecount.get(r, 0) + 1
        if bl:
            blobbed[r] = True
    outer: dict[int, list[int]] = {}
    for v in list(range(n)) + list(range(2 * n, 3 * n)):
        outer.setdefault(uf.find(v), []).append(v)
    loops = blobbed_loops = beta = 0
    seen = set()
    for m in range(n, 2 * n):
        r = uf.find(m)
        if r in seen or r in outer:
            continue
        seen.add(r)
        size = sum(1 for v in range(n, 2 * n) if uf.find(v) == r)
        if ecount.get(r, 0) == size:
            if blobbed.get(r):
                blobbed_loops += 1
            else:
                loops += 1
        else:
            beta += 1
    partner = [-1] * (2 * n)
    mask = 0
    for r, verts in outer.items():
        if len(verts) == 2:
            a, b = (v if v < n else v - n for v in verts)
            partner[a], partner[b] = b, a
            if blobbed.get(r):
                mask |= 1 << a | 1 << b
    if not fam.rook_like:
        beta = 0
    return CompositionResult(Diagram(n, partner, mask), loops, beta, blobbed_loops, False)
