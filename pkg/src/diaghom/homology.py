"""Reduced bar complexes of augmented algebras and Tor/Ext of the trivial module."""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

from . import algebra as alg
from .coeff import (
    AbelianInvariants,
    CompositionNotZero,
    MatrixProfile,
    RingSpec,
    SparseMatrix,
    _is_prime,
    homology_at,
    homology_from_profiles,
    profile,
)

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, dim: int, budget: int):
        self.dim = dim
        self.budget = budget
        super().__init__(f"chain group of dimension {dim} exceeds the budget {budget}")


class NotAugmented(ValueError):
    pass


# ---------------------------------------------------------------------------
# Augmented algebras


@dataclass
class AugmentedAlgebra:
    """Finite based algebra with unit coordinates and an augmentation vector."""

    structure: alg.Structure
    key: Hashable = None
    label: str = ""

    def __post_init__(self):
        st = self.structure
        if st.augment(st.unit) != st.ring.one:
            raise NotAugmented("augmentation of the unit is not 1")

    @property
    def ring(self) -> RingSpec:
        return self.structure.ring

    @property
    def basis(self) -> tuple:
        return self.structure.basis

    @property
    def dim(self) -> int:
        return self.structure.dim

    @classmethod
    def from_spec(cls, spec: alg.AlgebraSpec) -> "AugmentedAlgebra":
        return cls(alg.structure(spec), ("spec", spec), spec.label())

    @classmethod
    def from_quotient(cls, q: alg.QuotientSpec) -> "AugmentedAlgebra":
        return cls(alg.quotient_structure(q), ("quotient", q), f"{q.base.label()} / ideal {q.level}")

    @classmethod
    def from_group(cls, group: alg.GroupSpec, ring: RingSpec) -> "AugmentedAlgebra":
        return cls(alg.group_algebra(group, ring), ("group", group, ring), f"{ring}[{group}]")

    @classmethod
    def trivial(cls, ring: RingSpec) -> "AugmentedAlgebra":
        return cls(alg.trivial_structure(ring), ("trivial", ring), str(ring))

    def spot_check_augmentation(self) -> bool:
        st = self.structure
        for i in range(st.dim):
            for j in range(st.dim):
                if st.augment(dict(st.table[i][j])) != st.ring.mul(st.tau[i], st.tau[j]):
                    return False
        return True


def as_augmented(obj, ring: RingSpec | None = None) -> AugmentedAlgebra:
    if isinstance(obj, AugmentedAlgebra):
        return obj
    if isinstance(obj, alg.AlgebraSpec):
        return AugmentedAlgebra.from_spec(obj if ring is None else obj.with_ring(ring))
    if isinstance(obj, alg.QuotientSpec):
        q = obj if ring is None else alg.QuotientSpec(obj.base.with_ring(ring), obj.level)
        return AugmentedAlgebra.from_quotient(q)
    if isinstance(obj, alg.GroupSpec):
        if ring is None:
            raise ValueError("a group needs a ring")
        return AugmentedAlgebra.from_group(obj, ring)
    raise TypeError(f"cannot build an augmented algebra from {obj!r}")


@dataclass
class AbarBasis:
    """Basis {b_i - tau(b_i) u : i != pivot} of the augmentation ideal."""

    pivot: int
    indices: list
    table: list  # table[a][b] = tuple of (c, coeff) in Abar coordinates

    @property
    def dim(self) -> int:
        return len(self.indices)


def augmentation_ideal_basis(A: AugmentedAlgebra) -> AbarBasis:
    st = A.structure
    ring = st.ring
    pivot = next((i for i in sorted(st.unit) if ring.is_unit(st.unit[i])), None)
    if pivot is None:
        raise NotAugmented("no unit coefficient is invertible")
    u = st.unit
    upinv = ring.invert(u[pivot])
    indices = [i for i in range(st.dim) if i != pivot]
    pos = {i: k for k, i in enumerate(indices)}

    def element(i):
        vec = {i: ring.one}
        t = st.tau[i]
        if t:
            for k, c in u.items():
                vec[k] = ring.sub(vec.get(k, 0), ring.mul(t, c))
        return {k: c for k, c in vec.items() if c != 0}

    elems = [element(i) for i in indices]

    def coords(vec):
        cj = vec.get(pivot, 0)
        f = ring.mul(cj, upinv)
        out = dict((pos[k], c) for k, c in vec.items() if k != pivot)
        if f:
            for k, c in u.items():
                if k != pivot:
                    out[pos[k]] = ring.sub(out.get(pos[k], 0), ring.mul(f, c))
        return tuple(sorted((k, c) for k, c in out.items() if c != 0))

    table = [[coords(st.product(x, y)) for y in elems] for x in elems]
    return AbarBasis(pivot, indices, table)


# ---------------------------------------------------------------------------
# Chain complexes


@dataclass
class ChainComplex:
    """Chain groups C_0..C_top with boundaries d_k : C_k -> C_{k-1}."""

    ring: RingSpec
    dims: list
    boundaries: dict = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def d(self, k: int) -> SparseMatrix:
        if k <= 0 or k > self.top:
            lo = self.dims[k - 1] if 0 < k <= self.top + 1 and k - 1 <= self.top else 0
            return SparseMatrix.zeros(lo if k > 0 else 0, self.dims[k] if 0 <= k <= self.top else 0, self.ring)
        return self.boundaries[k]

    def check_dd(self) -> None:
        for k in range(2, self.top + 1):
            prod = self.boundaries[k - 1] @ self.boundaries[k]
            if self.ring.kind == "Zmod":
                prod = SparseMatrix.from_coo(prod.nrows, prod.ncols, prod.rows, prod.cols, prod.vals, self.ring)
            if prod.nnz:
                raise CompositionNotZero(f"d_{k - 1} d_{k} has {prod.nnz} nonzero entries")


def _coeff_array(vals: list, ring: RingSpec):
    if ring.kind != "Q" and all(-(1 << 40) < v < (1 << 40) for v in vals):
        return np.array(vals, dtype=np.int64)
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def bar_complex(A: AugmentedAlgebra, D: int, budget: int = DEFAULT_BUDGET) -> ChainComplex:
    """Reduced bar complex through degree D+1, with d o d = 0 asserted."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    ring = A.ring
    ab = augmentation_ideal_basis(A)
    m = ab.dim
    top = D + 1
    dims = [m**k for k in range(top + 1)]
    for dim in dims:
        if dim > budget:
            raise BudgetExceeded(dim, budget)
    cx = ChainComplex(ring, dims)
    triples = [(a, b, t, c) for a in range(m) for b in range(m) for t, c in ab.table[a][b]]
    coeffs = _coeff_array([c for *_, c in triples], ring)
    for k in range(1, top + 1):
        if k == 1:
            cx.boundaries[1] = SparseMatrix.zeros(1, m, ring)
            continue
        rows_parts, cols_parts, vals_parts = [], [], []
        for i in range(1, k):
            sign = -1 if i % 2 else 1
            pre = np.arange(m ** (i - 1), dtype=np.int64)
            suf = np.arange(m ** (k - i - 1), dtype=np.int64)
            base_col = (pre[:, None] * m ** (k - i + 1) + suf[None, :]).ravel()
            base_row = (pre[:, None] * m ** (k - i) + suf[None, :]).ravel()
            w = m ** (k - i - 1)
            for idx, (a, b, t, _) in enumerate(triples):
                cols_parts.append(base_col + (a * m + b) * w)
                rows_parts.append(base_row + t * w)
                if coeffs.dtype == object:
                    v = np.empty(len(base_col), dtype=object)
                    v[:] = sign * coeffs[idx]
                else:
                    v = np.full(len(base_col), sign * coeffs[idx], dtype=np.int64)
                vals_parts.append(v)
        if rows_parts:
            rows = np.concatenate(rows_parts)
            cols = np.concatenate(cols_parts)
            vals = np.concatenate(vals_parts)
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
            vals = np.zeros(0, dtype=np.int64)
        cx.boundaries[k] = SparseMatrix.from_coo(dims[k - 1], dims[k], rows, cols, vals, ring)
    cx.check_dd()
    return cx


def unnormalized_bar_complex(A: AugmentedAlgebra, D: int) -> ChainComplex:
    """Unnormalized bar complex on the full basis; an independent oracle."""
    st = A.structure
    ring = st.ring
    n = st.dim
    top = D + 1
    dims = [n**k for k in range(top + 1)]
    cx = ChainComplex(ring, dims)

    def index(word):
        r = 0
        for x in word:
            r = r * n + x
        return r

    for k in range(1, top + 1):
        acc: dict = {}
        for col, word in enumerate(itertools.product(range(n), repeat=k)):
            t0 = st.tau[word[0]]
            if t0:
                key = (index(word[1:]), col)
                acc[key] = acc.get(key, 0) + t0
            for i in range(1, k):
                sign = -1 if i % 2 else 1
                for t, c in st.table[word[i - 1]][word[i]]:
                    key = (index(word[: i - 1] + (t,) + word[i + 1:]), col)
                    acc[key] = acc.get(key, 0) + sign * c
            tk = st.tau[word[-1]]
            if tk:
                key = (index(word[:-1]), col)
                acc[key] = acc.get(key, 0) + (-1) ** k * tk
        cx.boundaries[k] = SparseMatrix(dims[k - 1], dims[k], acc, ring)
    cx.check_dd()
    return cx


# ---------------------------------------------------------------------------
# Tor and Ext


@dataclass(frozen=True)
class GradedInvariants:
    kind: str
    ring: RingSpec
    D: int
    degrees: tuple
    reliable: tuple = ()

    def __getitem__(self, k: int) -> AbelianInvariants:
        return self.degrees[k]

    def __len__(self):
        return len(self.degrees)

    def to_json(self) -> list:
        return [g.to_json() for g in self.degrees]

    def describe(self) -> list[str]:
        return [g.describe(self.ring) for g in self.degrees]

    def same_groups(self, other: "GradedInvariants") -> bool:
        return tuple(self.degrees) == tuple(other.degrees)


def complex_homology(cx: ChainComplex, D: int, threads: int = 1) -> tuple[GradedInvariants, GradedInvariants]:
    """Homology and cohomology of a complex built through degree D+1."""
    ring = cx.ring
    if cx.top < D + 1:
        raise ValueError("complex not built far enough")
    composite = ring.kind == "Zmod" and not _is_prime(ring.modulus)
    if composite:
        tor_list, ext_list = [], []
        for k in range(D + 1):
            d_k = cx.boundaries[k] if k >= 1 else SparseMatrix.zeros(0, cx.dims[0], ring)
            d_k1 = cx.boundaries[k + 1]
            tor_list.append(homology_at(d_k, d_k1, ring))
            ext_list.append(homology_at(d_k1.transpose(), d_k.transpose(), ring))
    else:
        ks = list(range(1, D + 2))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                profs = list(pool.map(lambda k: profile(cx.boundaries[k], ring), ks))
        else:
            profs = [profile(cx.boundaries[k], ring) for k in ks]
        prof = {0: MatrixProfile(0, ())}
        prof.update(zip(ks, profs))
        tor_list = [homology_from_profiles(cx.dims[k], prof[k], prof[k + 1], ring) for k in range(D + 1)]
        ext_list = [homology_from_profiles(cx.dims[k], prof[k + 1], prof[k], ring) for k in range(D + 1)]
    rel = tuple(True for _ in range(D + 1))
    return (GradedInvariants("tor", ring, D, tuple(tor_list), rel),
            GradedInvariants("ext", ring, D, tuple(ext_list), rel))


_CACHE: dict = {}


def tor_ext(A, D: int, ring: RingSpec | None = None, budget: int = DEFAULT_BUDGET,
            threads: int = 1) -> tuple[GradedInvariants, GradedInvariants]:
    A = as_augmented(A, ring)
    if ring is not None and A.ring != ring:
        raise ValueError(f"algebra is over {A.ring}, not {ring}")
    key = (A.key, D) if A.key is not None else None
    if key is not None and key in _CACHE:
        return _CACHE[key]
    cx = bar_complex(A, D, budget)
    out = complex_homology(cx, D, threads)
    if key is not None:
        _CACHE[key] = out
    return out


def tor(A, D: int, ring: RingSpec | None = None, **kw) -> GradedInvariants:
    return tor_ext(A, D, ring, **kw)[0]


def ext(A, D: int, ring: RingSpec | None = None, **kw) -> GradedInvariants:
    return tor_ext(A, D, ring, **kw)[1]


def tor_of_quotient(q: alg.QuotientSpec, D: int, ring: RingSpec | None = None, **kw) -> GradedInvariants:
    return tor(AugmentedAlgebra.from_quotient(q if ring is None else alg.QuotientSpec(q.base.with_ring(ring), q.level)), D, **kw)


def ext_of_quotient(q: alg.QuotientSpec, D: int, ring: RingSpec | None = None, **kw) -> GradedInvariants:
    return ext(AugmentedAlgebra.from_quotient(q if ring is None else alg.QuotientSpec(q.base.with_ring(ring), q.level)), D, **kw)


def group_homology(G: alg.GroupSpec, D: int, ring: RingSpec, **kw):
    return tor_ext(AugmentedAlgebra.from_group(G, ring), D, **kw)


# ---------------------------------------------------------------------------
# G-centred comparison


@dataclass
class GCentredReport:
    agree: bool
    rows: list
    first_disagreement: dict | None = None

    def to_json(self) -> dict:
        return {"agree": self.agree, "rows": self.rows}


def g_centred_check(A, G: alg.GroupSpec, D: int, rings: Sequence[RingSpec] | None = None, **kw) -> GCentredReport:
    """Compare Tor/Ext of A with group (co)homology of G degree by degree."""
    if rings is None:
        if not isinstance(A, AugmentedAlgebra):
            raise ValueError("rings required")
        rings = [A.ring]
    rows = []
    first = None
    for ring in rings:
        if isinstance(A, AugmentedAlgebra) and A.ring != ring:
            raise ValueError("an explicit augmented algebra fixes its ring")
        ta, ea = tor_ext(as_augmented(A, ring), D, **kw)
        tg, eg = group_homology(G, D, ring, **kw)
        for kind, xa, xg in (("tor", ta, tg), ("ext", ea, eg)):
            for k in range(D + 1):
                ok = xa[k] == xg[k]
                row = {"ring": ring.token(), "kind": kind, "degree": k,
                       "algebra": xa[k].to_json(), "group": xg[k].to_json(), "match": ok}
                rows.append(row)
                if not ok and first is None:
                    first = row
    return GCentredReport(first is None, rows, first)


def result_json(A: AugmentedAlgebra, D: int, t: GradedInvariants, e: GradedInvariants, extra: dict | None = None) -> str:
    obj = {"algebra": A.label, "ring": A.ring.token(), "D": D, "tor": t.to_json(), "ext": e.to_json()}
    if extra:
        obj.update(extra)
    return json.dumps(obj, sort_keys=True)


def trivial_invariants(ring: RingSpec, D: int) -> tuple[AbelianInvariants, ...]:
    """[k, 0, 0, ...] as invariants over ring."""
    return tuple([AbelianInvariants(1, ())] + [AbelianInvariants.zero()] * D)


def iter_degrees(g: GradedInvariants) -> Iterable[tuple[int, AbelianInvariants]]:
    return enumerate(g.degrees)
