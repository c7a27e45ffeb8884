"""Diagram algebras over an exact ring: elements, multiplication, units,
augmentations, quotients by propagating-number ideals, and group algebras."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable, Mapping, Sequence

from .coeff import ZZ, RingSpec
from .diagram import (
    Diagram,
    Family,
    FamilyViolation,
    SizeTooLarge,
    compose,
    enumerate_diagrams,
    is_member,
    propagating_count,
)


class SpecMismatch(ValueError):
    pass


class AugmentationError(AssertionError):
    pass


@dataclass(frozen=True)
class AlgebraSpec:
    """A diagram algebra with concrete parameters in a fixed ring.

    Only the parameters the family uses may be given; the rest stay None.
    """

    family: Family
    n: int
    ring: RingSpec = ZZ
    delta: object = None
    epsilon: object = None
    gamma: object = None

    def __post_init__(self):
        n = self.family.size(self.n)
        object.__setattr__(self, "n", n)
        if n < 0:
            raise ValueError("n must be nonnegative")
        wanted = set(self.family.params)
        for name in ("delta", "epsilon", "gamma"):
            value = getattr(self, name)
            if name in wanted:
                if value is None:
                    raise ValueError(f"{self.family} needs parameter {name}")
                object.__setattr__(self, name, self.ring.normalize(value))
            elif value is not None:
                raise ValueError(f"{self.family} takes no parameter {name}")

    @classmethod
    def make(cls, family: Family | str, n: int | None = None, ring: RingSpec | str = ZZ, **params) -> "AlgebraSpec":
        if isinstance(family, str):
            family = Family.parse(family, params.pop("r", None), params.pop("s", None))
        if isinstance(ring, str):
            ring = RingSpec.parse(ring)
        if n is None:
            n = family.size()
        return cls(family, n, ring, params.get("delta"), params.get("epsilon"), params.get("gamma"))

    def with_ring(self, ring: RingSpec) -> "AlgebraSpec":
        return AlgebraSpec(self.family, self.n, ring, self.delta, self.epsilon, self.gamma)

    def param(self, name: str):
        return getattr(self, name)

    def to_json(self) -> dict:
        out = {"family": self.family.token(), "n": self.n, "ring": self.ring.token()}
        if self.family.kind == "WB":
            out["r"], out["s"] = self.family.r, self.family.s
        for name in self.family.params:
            out[name] = str(getattr(self, name))
        return out

    def label(self) -> str:
        ps = ", ".join(f"{k}={getattr(self, k)}" for k in self.family.params)
        return f"{self.family.name}_{self.n}({ps}) over {self.ring}"


# ---------------------------------------------------------------------------
# Structure constants


@dataclass
class Structure:
    """A finite based algebra with an augmentation.

    ``table[i][j]`` is a tuple of ``(k, coeff)`` pairs expressing the product
    of basis elements i and j; ``unit`` maps basis indices to coefficients of
    the identity and ``tau`` lists the augmentation on the basis.
    """

    ring: RingSpec
    basis: tuple
    table: list
    unit: dict
    tau: list
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {b: i for i, b in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def product(self, x: Mapping[int, object], y: Mapping[int, object]) -> dict:
        ring = self.ring
        out: dict[int, object] = {}
        for i, a in x.items():
            row = self.table[i]
            for j, b in y.items():
                for k, c in row[j]:
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in ((k, ring.normalize(v)) for k, v in out.items()) if v != 0}

    def augment(self, x: Mapping[int, object]):
        return self.ring.normalize(sum(self.tau[i] * c for i, c in x.items()))

    def table_json(self, label: Callable[[Hashable], object] | None = None) -> dict:
        lab = label or (lambda b: b.to_json() if isinstance(b, Diagram) else list(b))
        return {
            "basis": [lab(b) for b in self.basis],
            "table": [[[[str(c), k] for k, c in cell] for cell in row] for row in self.table],
        }


def _scalar(spec: AlgebraSpec, loops: int, beta: int, blobbed: int):
    ring = spec.ring
    fam = spec.family
    c = ring.one
    if fam.kind in ("R", "PR"):
        return ring.power(spec.epsilon, beta)
    if loops:
        c = ring.mul(c, ring.power(spec.delta, loops))
    if fam.rook_like and beta:
        c = ring.mul(c, ring.power(spec.epsilon, beta))
    if fam.blob and blobbed:
        c = ring.mul(c, ring.power(spec.gamma, blobbed))
    return c


def basis_tau(d: Diagram) -> int:
    """Augmentation of a basis diagram: 1 on undecorated permutation diagrams."""
    return 1 if d.is_permutation() and not d.blobs else 0


@lru_cache(maxsize=64)
def structure(spec: AlgebraSpec) -> Structure:
    basis = tuple(enumerate_diagrams(spec.family, spec.n))
    index = {d: i for i, d in enumerate(basis)}
    ring = spec.ring
    table = []
    for d1 in basis:
        row = []
        for d2 in basis:
            res = compose(d1, d2, spec.family, check=False)
            if res.is_zero:
                row.append(())
                continue
            c = _scalar(spec, res.loops, res.isolated_middle, res.blobbed_loops)
            row.append(((index[res.diagram], c),) if c != 0 else ())
        table.append(row)
    unit = {index[d]: ring.one for d in identity_terms(spec.family, spec.n)}
    tau = [ring.normalize(basis_tau(d)) for d in basis]
    return Structure(ring, basis, table, unit, tau, index)


def identity_terms(fam: Family, n: int) -> list[Diagram]:
    if not fam.dilute:
        return [Diagram.identity(n)]
    out = []
    for keep in itertools.product((True, False), repeat=n):
        partner = [-1] * (2 * n)
        for i, k in enumerate(keep):
            if k:
                partner[i], partner[n + i] = n + i, i
        out.append(Diagram(n, partner))
    return out


# ---------------------------------------------------------------------------
# Elements


class AlgebraElement:
    """A finite linear combination of member diagrams."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: AlgebraSpec, terms: Mapping[Diagram, object] | None = None):
        self.spec = spec
        clean = {}
        for d, c in (terms or {}).items():
            if d.n != spec.n or not is_member(d, spec.family):
                raise FamilyViolation(f"{d} is not a basis diagram of {spec.label()}")
            c = spec.ring.normalize(c)
            if c != 0:
                clean[d] = c
        self.terms = clean

    @classmethod
    def basis_element(cls, spec: AlgebraSpec, d: Diagram, coeff=1) -> "AlgebraElement":
        return cls(spec, {d: coeff})

    @classmethod
    def _from_indices(cls, spec: AlgebraSpec, vec: Mapping[int, object]) -> "AlgebraElement":
        st = structure(spec)
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.terms = {st.basis[i]: c for i, c in sorted(vec.items()) if c != 0}
        return obj

    def to_indices(self) -> dict[int, object]:
        st = structure(self.spec)
        return {st.index[d]: c for d, c in self.terms.items()}

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement) or other.spec != self.spec:
            raise SpecMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, 0) + c
        return AlgebraElement(self.spec, out)

    def __neg__(self):
        return AlgebraElement(self.spec, {d: -c for d, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> "AlgebraElement":
        s = self.spec.ring.normalize(s)
        return AlgebraElement(self.spec, {d: c * s for d, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def coefficient(self, d: Diagram):
        return self.terms.get(d, self.spec.ring.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{d!r}" for d, c in sorted(self.terms.items(), key=lambda t: t[0]))

    def to_json(self) -> list:
        return [[str(c), d.to_json()] for d, c in sorted(self.terms.items(), key=lambda t: t[0])]


@lru_cache(maxsize=1 << 16)
def basis_product(spec: AlgebraSpec, d1: Diagram, d2: Diagram) -> tuple:
    """The product of two basis diagrams as ``()`` or ``((diagram, coeff),)``."""
    res = compose(d1, d2, spec.family)
    if res.is_zero:
        return ()
    c = _scalar(spec, res.loops, res.isolated_middle, res.blobbed_loops)
    return ((res.diagram, c),) if c != 0 else ()


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product computed term by term; the full structure table is never built."""
    x._check(y)
    ring = x.spec.ring
    out: dict = {}
    for d1, a in x.terms.items():
        for d2, b in y.terms.items():
            for d, c in basis_product(x.spec, d1, d2):
                out[d] = ring.add(out.get(d, 0), ring.mul(ring.mul(a, b), c))
    return AlgebraElement(x.spec, out)


def identity(spec: AlgebraSpec) -> AlgebraElement:
    return AlgebraElement(spec, {d: 1 for d in identity_terms(spec.family, spec.n)})


def augmentation(x: AlgebraElement):
    ring = x.spec.ring
    return ring.normalize(sum(basis_tau(d) * c for d, c in x.terms.items()))


def is_algebra_map_augmentation(spec: AlgebraSpec) -> bool:
    """Exhaustively check tau(d1 d2) = tau(d1) tau(d2) and tau(1) = 1."""
    st = structure(spec)
    if st.augment(st.unit) != spec.ring.one:
        raise AugmentationError("augmentation of the unit is not 1")
    for i in range(st.dim):
        for j in range(st.dim):
            lhs = st.augment(dict(st.table[i][j]))
            rhs = spec.ring.mul(st.tau[i], st.tau[j])
            if lhs != rhs:
                raise AugmentationError(f"tau fails on {st.basis[i]!r} * {st.basis[j]!r}")
    return True


# ---------------------------------------------------------------------------
# Ideals and quotients


@dataclass(frozen=True)
class QuotientSpec:
    base: AlgebraSpec
    level: int

    def __post_init__(self):
        top = self.base.n if self.base.family.blob else self.base.n - 1
        if not -1 <= self.level <= max(top, -1):
            raise ValueError(f"ideal level {self.level} outside [-1, {top}]")

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "level": self.level}


def in_ideal(d: Diagram, fam: Family, level: int) -> bool:
    """Membership of a basis diagram in the level-th propagating-number ideal."""
    if level < 0:
        return False
    k = propagating_count(d)
    if not fam.blob:
        return k <= level
    if level == 0:
        return k == 0
    if k < level:
        return True
    if k == level:
        props = d.propagating_edges()
        a, b = props[0]
        return d.is_blobbed(a, b)
    return False


@lru_cache(maxsize=64)
def quotient_structure(q: QuotientSpec) -> Structure:
    base = structure(q.base)
    fam = q.base.family
    keep = [i for i, d in enumerate(base.basis) if not in_ideal(d, fam, q.level)]
    new_index = {old: new for new, old in enumerate(keep)}
    table = []
    for i in keep:
        row = []
        for j in keep:
            row.append(tuple((new_index[k], c) for k, c in base.table[i][j] if k in new_index))
        table.append(row)
    unit = {new_index[k]: c for k, c in base.unit.items() if k in new_index}
    tau = [base.tau[i] for i in keep]
    return Structure(base.ring, tuple(base.basis[i] for i in keep), table, unit, tau)


# ---------------------------------------------------------------------------
# Group algebras

GROUP_CAP = 720


@dataclass(frozen=True)
class GroupSpec:
    """Symmetric(n), Cyclic(n), ProductSymmetric(r, s) or Trivial."""

    kind: str
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.kind not in ("symmetric", "cyclic", "product", "trivial"):
            raise ValueError(f"unknown group kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """``S3``, ``C2``, ``S1xS2`` or ``1``/``trivial``."""
        t = text.strip().lower().replace(" ", "")
        if t in ("1", "trivial", "e"):
            return cls("trivial")
        if "x" in t:
            left, right = t.split("x", 1)
            if left[0] == "s" and right[0] == "s":
                return cls("product", int(left[1:]), int(right[1:]))
        if t[0] in "sσ":
            return cls("symmetric", int(t[1:]))
        if t[0] == "c":
            return cls("cyclic", int(t[1:]))
        raise ValueError(f"cannot parse group {text!r}")

    @property
    def order(self) -> int:
        if self.kind == "symmetric":
            return math.factorial(self.a)
        if self.kind == "cyclic":
            return self.a
        if self.kind == "product":
            return math.factorial(self.a) * math.factorial(self.b)
        return 1

    def elements(self) -> list[tuple[int, ...]]:
        """Group elements as permutations (tuples of images), identity first."""
        if self.order > GROUP_CAP:
            raise SizeTooLarge(f"|G| = {self.order} exceeds the cap {GROUP_CAP}")
        if self.kind == "symmetric":
            return list(itertools.permutations(range(self.a)))
        if self.kind == "cyclic":
            n = self.a
            return [tuple((i + k) % n for i in range(n)) for k in range(n)]
        if self.kind == "product":
            r, s = self.a, self.b
            return [p + tuple(r + x for x in q) for p in itertools.permutations(range(r))
                    for q in itertools.permutations(range(s))]
        return [()]

    def __str__(self):
        return {"symmetric": f"S{self.a}", "cyclic": f"C{self.a}",
                "product": f"S{self.a}xS{self.b}", "trivial": "1"}[self.kind]


def Symmetric(n: int) -> GroupSpec:
    return GroupSpec("symmetric", n)


def Cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", n)


def ProductSymmetric(r: int, s: int) -> GroupSpec:
    return GroupSpec("product", r, s)


Trivial = GroupSpec("trivial")


def group_multiply(g: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """Product that applies g first, matching diagram concatenation."""
    return tuple(h[x] for x in g)


def group_algebra(group: GroupSpec, ring: RingSpec) -> Structure:
    elems = group.elements()
    index = {g: i for i, g in enumerate(elems)}
    one = ring.one
    table = [[((index[group_multiply(g, h)], one),) for h in elems] for g in elems]
    return Structure(ring, tuple(elems), table, {0: one}, [one] * len(elems), index)


def trivial_structure(ring: RingSpec) -> Structure:
    return Structure(ring, ((),), [[((0, ring.one),)]], {0: ring.one}, [ring.one])


def dumps_table(st: Structure) -> str:
    return json.dumps(st.table_json(), sort_keys=True)
