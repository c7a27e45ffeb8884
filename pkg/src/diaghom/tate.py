"""Norm map and the integer-graded Tate splice for G-centred algebras."""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import algebra as alg
from .coeff import AbelianInvariants, RingSpec
from .homology import AugmentedAlgebra, as_augmented, g_centred_check, group_homology, tor_ext


class NotGCentred(ValueError):
    def __init__(self, row: dict):
        self.row = row
        super().__init__(
            f"{row['kind']} in degree {row['degree']} over {row['ring']}: "
            f"algebra {row['algebra']} vs group {row['group']}")


def norm_map(G: alg.GroupSpec, ring: RingSpec):
    """The norm on the trivial module is multiplication by |G|, as a normalized ring element."""
    return ring.normalize(G.order)


def _ker_coker(scale, ring: RingSpec) -> tuple[AbelianInvariants, AbelianInvariants]:
    """Kernel and cokernel of x -> scale*x on the ring itself."""
    zero = AbelianInvariants.zero()
    one = AbelianInvariants(1, ())
    if ring.kind == "Q":
        return (one, one) if scale == 0 else (zero, zero)
    if ring.kind == "Z":
        s = abs(scale)
        if s == 0:
            return one, one
        return zero, (zero if s == 1 else AbelianInvariants(0, (s,)))
    m = ring.modulus
    from math import gcd
    g = gcd(scale % m, m)
    # ker and coker of multiplication on Z/m are both Z/gcd
    grp = zero if g == 1 else (one if g == m else AbelianInvariants(0, (g,)))
    return grp, grp


@dataclass(frozen=True)
class TateTable:
    ring: RingSpec
    D: int
    norm: object
    groups: tuple  # indexed from degree -D-1 up to D

    @property
    def lo(self) -> int:
        return -self.D - 1

    @property
    def hi(self) -> int:
        return self.D

    def __getitem__(self, p: int) -> AbelianInvariants:
        if not self.lo <= p <= self.hi:
            raise KeyError(p)
        return self.groups[p - self.lo]

    def items(self):
        return [(p, self[p]) for p in range(self.lo, self.hi + 1)]

    def is_zero(self) -> bool:
        return all(g.is_zero for g in self.groups)

    def to_json(self) -> dict:
        return {"range": [self.lo, self.hi], "norm": str(self.norm), "ring": self.ring.token(),
                "groups": {str(p): g.to_json() for p, g in self.items()}}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def pretty(self) -> str:
        cells = [(str(p), g.describe(self.ring)) for p, g in self.items()]
        w = [max(len(a), len(b)) for a, b in cells]
        top = " | ".join(a.rjust(k) for (a, _), k in zip(cells, w))
        bot = " | ".join(b.rjust(k) for (_, b), k in zip(cells, w))
        return f"degree | {top}\nH^     | {bot}"


def splice(tor, ext, scale, ring: RingSpec, D: int) -> TateTable:
    ker, coker = _ker_coker(scale, ring)
    groups = []
    for p in range(-D - 1, D + 1):
        if p >= 1:
            groups.append(ext[p])
        elif p == 0:
            groups.append(coker)
        elif p == -1:
            groups.append(ker)
        else:
            groups.append(tor[-p - 1])
    return TateTable(ring, D, scale, tuple(groups))


def tate_group(G: alg.GroupSpec, D: int, ring: RingSpec, **kw) -> TateTable:
    t, e = group_homology(G, D, ring, **kw)
    return splice(t, e, norm_map(G, ring), ring, D)


def tate_table(A, G: alg.GroupSpec, D: int, ring: RingSpec | None = None, **kw) -> TateTable:
    """Refuses with NotGCentred unless Tor/Ext of A match those of G through degree D."""
    if ring is None:
        if not isinstance(A, AugmentedAlgebra):
            raise ValueError("ring required")
        ring = A.ring
    A = as_augmented(A, ring)
    report = g_centred_check(A, G, D, [ring], **kw)
    if not report.agree:
        raise NotGCentred(report.first_disagreement)
    t, e = tor_ext(A, D, **kw)
    return splice(t, e, norm_map(G, ring), ring, D)
