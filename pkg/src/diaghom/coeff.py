"""Exact coefficient rings and sparse exact linear algebra.

Three ground rings are supported: the integers, the integers mod m and the
rationals.  Scalars are plain Python numbers (``int`` or
``fractions.Fraction``) normalized by the owning :class:`RingSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import _backend


class NotInvertible(ArithmeticError):
    """Raised when a scalar has no multiplicative inverse in its ring."""

    def __init__(self, value, ring, name=None):
        self.value = value
        self.ring = ring
        self.name = name
        label = f"{name}={value}" if name else str(value)
        super().__init__(f"{label} is not invertible in {ring}")


class CompositionNotZero(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of the integers (``"Z"``), integers mod m (``"Zmod"``) or rationals (``"Q"``)."""

    kind: str
    modulus: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Zmod", "Q"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zmod" and self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.kind != "Zmod" and self.modulus:
            raise ValueError("only Zmod carries a modulus")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("Z")

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls("Q")

    @classmethod
    def mod(cls, m: int) -> "RingSpec":
        return cls("Zmod", int(m))

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse ``z``, ``q`` or ``z<m>`` (also ``Z/m``), case-insensitive."""
        t = text.strip().lower().replace("/", "")
        if t in ("z", "zz", "int", "integers"):
            return cls.integers()
        if t in ("q", "qq", "rationals"):
            return cls.rationals()
        if t.startswith("z") and t[1:].isdigit():
            return cls.mod(int(t[1:]))
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind == "Q" or (self.kind == "Zmod" and _is_prime(self.modulus))

    @property
    def characteristic(self) -> int:
        return self.modulus

    def __str__(self) -> str:
        if self.kind == "Zmod":
            return f"Z/{self.modulus}"
        return self.kind

    def token(self) -> str:
        """Inverse of :meth:`parse`."""
        return f"z{self.modulus}" if self.kind == "Zmod" else self.kind.lower()

    # scalar arithmetic

    def __call__(self, value) -> int | Fraction:
        return self.normalize(value)

    def normalize(self, value):
        if isinstance(value, str):
            value = parse_scalar(value)
        if isinstance(value, (bool, np.bool_)):
            value = int(value)
        if isinstance(value, np.integer):
            value = int(value)
        if self.kind == "Q":
            value = Fraction(value)
            return value.numerator if value.denominator == 1 else value
        if isinstance(value, Fraction):
            if self.kind == "Z":
                if value.denominator != 1:
                    raise ValueError(f"{value} is not an integer")
                return value.numerator
            num = value.numerator % self.modulus
            return num * self.invert(value.denominator) % self.modulus
        if not isinstance(value, int):
            raise TypeError(f"cannot interpret {value!r} as a scalar")
        if self.kind == "Zmod":
            return value % self.modulus
        return value

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def power(self, a, e: int):
        if e < 0:
            return self.power(self.invert(a), -e)
        if e == 0:
            return self.one
        if self.kind == "Zmod":
            return pow(a, e, self.modulus)
        return self.normalize(a**e)

    def is_zero(self, a) -> bool:
        return self.normalize(a) == 0

    def is_unit(self, a) -> bool:
        a = self.normalize(a)
        if self.kind == "Q":
            return a != 0
        if self.kind == "Z":
            return a in (1, -1)
        return math.gcd(a, self.modulus) == 1

    def invert(self, a, name: str | None = None):
        a = self.normalize(a)
        if not self.is_unit(a):
            raise NotInvertible(a, self, name)
        if self.kind == "Q":
            return self.normalize(1 / Fraction(a))
        if self.kind == "Z":
            return a
        return pow(a, -1, self.modulus)

    @property
    def one(self):
        return self.normalize(1)

    @property
    def zero(self):
        return self.normalize(0)

    def format(self, a) -> str:
        return str(self.normalize(a))


ZZ = RingSpec.integers()
QQ = RingSpec.rationals()


def parse_scalar(text: str) -> int | Fraction:
    """Parse a decimal integer, ``p/q`` or a terminating decimal exactly."""
    t = text.strip()
    if "/" in t or "." in t:
        return Fraction(t)
    return int(t)


def scalar_invert(s, ring: RingSpec):
    return ring.invert(s)


# ---------------------------------------------------------------------------
# Sparse matrices


class SparseMatrix:
    """Immutable sparse matrix in column-major COO form.

    ``vals`` holds exact scalars: an int64 array when every entry fits,
    otherwise an object array of Python ints or Fractions.
    """

    __slots__ = ("nrows", "ncols", "rows", "cols", "vals", "ring")

    def __init__(self, nrows: int, ncols: int, entries: Mapping | Iterable = (), ring: RingSpec | None = None):
        if isinstance(entries, Mapping):
            items = [(r, c, v) for (r, c), v in entries.items()]
        else:
            items = list(entries)
        r = [t[0] for t in items]
        c = [t[1] for t in items]
        v = [t[2] for t in items]
        self._setup(nrows, ncols, r, c, v, ring)

    @classmethod
    def from_coo(cls, nrows, ncols, rows, cols, vals, ring: RingSpec | None = None) -> "SparseMatrix":
        obj = cls.__new__(cls)
        obj._setup(nrows, ncols, rows, cols, vals, ring)
        return obj

    @classmethod
    def zeros(cls, nrows: int, ncols: int, ring: RingSpec | None = None) -> "SparseMatrix":
        return cls(nrows, ncols, (), ring)

    @classmethod
    def from_dense(cls, rows: list[list], ring: RingSpec | None = None) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ent = [(i, j, v) for i, row in enumerate(rows) for j, v in enumerate(row) if v]
        return cls(nrows, ncols, ent, ring)

    def _setup(self, nrows, ncols, rows, cols, vals, ring):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative dimension")
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.ring = ring
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        vals = _exact_array(vals, ring)
        if not (len(rows) == len(cols) == len(vals)):
            raise ValueError("coordinate arrays differ in length")
        if len(rows):
            if rows.min() < 0 or rows.max() >= self.nrows or cols.min() < 0 or cols.max() >= self.ncols:
                raise IndexError("entry index out of range")
            key = cols * max(self.nrows, 1) + rows
            order = np.argsort(key, kind="stable")
            key = key[order]
            vals = vals[order]
            starts = np.flatnonzero(np.concatenate(([True], key[1:] != key[:-1])))
            if len(starts) != len(key):
                vals = np.add.reduceat(vals, starts)
                key = key[starts]
            vals = _reduce(vals, ring)
            keep = vals != 0
            if vals.dtype == object:
                keep = keep.astype(bool)
            key = key[keep]
            vals = vals[keep]
            rows = key % max(self.nrows, 1)
            cols = key // max(self.nrows, 1)
        for a in (rows, cols, vals):
            a.setflags(write=False)
        self.rows, self.cols, self.vals = rows, cols, vals

    # accessors

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def items(self):
        for r, c, v in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            yield (r, c), v

    @property
    def entries(self) -> dict:
        return dict(self.items())

    def triples(self) -> list[tuple[int, int, object]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()))

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix.from_coo(self.ncols, self.nrows, self.cols, self.rows, self.vals, self.ring)

    @property
    def T(self) -> "SparseMatrix":
        return self.transpose()

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and self.vals.tolist() == other.vals.tolist()
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ring = self.ring or other.ring
        if self.vals.dtype == np.int64 and other.vals.dtype == np.int64 and _small_product(self, other):
            from scipy import sparse

            a = sparse.csr_matrix((self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64)
            b = sparse.csr_matrix((other.vals, (other.rows, other.cols)), shape=other.shape, dtype=np.int64)
            p = (a @ b).tocoo()
            return SparseMatrix.from_coo(self.nrows, other.ncols, p.row, p.col, p.data, ring)
        by_row: dict[int, list] = {}
        for (r, c), v in other.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], object] = {}
        for (r, k), v in self.items():
            for c, w in by_row.get(k, ()):
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return SparseMatrix(self.nrows, other.ncols, acc, ring)


def _small_product(a: SparseMatrix, b: SparseMatrix) -> bool:
    if not a.nnz or not b.nnz:
        return True
    ma = int(np.abs(a.vals).max())
    mb = int(np.abs(b.vals).max())
    return ma * mb * min(a.ncols, 1 << 20) < (1 << 62)


def _exact_array(vals, ring):
    if isinstance(vals, np.ndarray) and vals.dtype == np.int64 and (ring is None or ring.kind != "Q"):
        return vals.reshape(-1)
    vals = list(vals.tolist() if isinstance(vals, np.ndarray) else vals)
    if ring is not None:
        vals = [ring.normalize(v) for v in vals]
    if all(type(v) is int and -(1 << 62) < v < (1 << 62) for v in vals):
        return np.array(vals, dtype=np.int64)
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def _reduce(vals, ring):
    if ring is None:
        return vals
    if ring.kind == "Zmod":
        return vals % ring.modulus
    if ring.kind == "Q" and vals.dtype == object:
        return np.array([ring.normalize(v) for v in vals.tolist()], dtype=object)
    return vals


# ---------------------------------------------------------------------------
# Abelian invariants


@dataclass(frozen=True)
class AbelianInvariants:
    """A finitely generated module  R^free_rank ⊕ ⊕ R/(d_i)."""

    free_rank: int = 0
    torsion: tuple[int, ...] = field(default=())

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, d in enumerate(t):
            if d < 2:
                raise ValueError("torsion entries must be at least 2")
            if i and d % t[i - 1]:
                raise ValueError("torsion must form a divisibility chain")

    @classmethod
    def zero(cls) -> "AbelianInvariants":
        return cls(0, ())

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianInvariants":
        return cls(obj["free_rank"], tuple(obj["torsion"]))

    def describe(self, ring: RingSpec | None = None) -> str:
        base = "Z" if ring is None else ("Z/" + str(ring.modulus) if ring.kind == "Zmod" else ring.kind)
        parts = []
        if self.free_rank == 1:
            parts.append(base)
        elif self.free_rank > 1:
            parts.append(f"{base}^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.describe()


def invariant_chain(diagonal: Iterable[int]) -> list[int]:
    """Turn a diagonal of nonzero integers into the Smith divisibility chain."""
    d = sorted(abs(int(x)) for x in diagonal if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            if d[j] % d[i]:
                g = math.gcd(d[i], d[j])
                d[i], d[j] = g, d[i] // g * d[j]
    return sorted(d)


# ---------------------------------------------------------------------------
# Dense integer kernels


def dense_diagonalize(a: list[list[int]]) -> list[int]:
    """Diagonalize an integer matrix with unimodular operations.

    Uses smallest-magnitude pivots to limit coefficient growth.  The input is
    consumed.  Returns the nonzero diagonal (not yet a divisibility chain).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        bi = bj = -1
        bv = 0
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (bi < 0 or abs(v) < bv):
                    bi, bj, bv = i, j, abs(v)
                    if bv == 1:
                        break
            if bv == 1:
                break
        if bi < 0:
            break
        a[t], a[bi] = a[bi], a[t]
        if bj != t:
            for row in a:
                row[t], row[bj] = row[bj], row[t]
        while True:
            p = a[t][t]
            prow = a[t]
            clean = True
            for i in range(t + 1, m):
                row = a[i]
                x = row[t]
                if x:
                    q = x // p
                    if q:
                        for j in range(t, n):
                            if prow[j]:
                                row[j] -= q * prow[j]
                    if row[t]:
                        clean = False
            for j in range(t + 1, n):
                x = prow[j]
                if x:
                    q = x // p
                    if q:
                        for i in range(t, m):
                            if a[i][t]:
                                a[i][j] -= q * a[i][t]
                    if prow[j]:
                        clean = False
            if clean:
                break
            # move the smallest remainder in row t or column t to the pivot
            bi, bj, bv = t, t, abs(p)
            for i in range(t + 1, m):
                v = a[i][t]
                if v and abs(v) < bv:
                    bi, bj, bv = i, t, abs(v)
            for j in range(t + 1, n):
                v = prow[j]
                if v and abs(v) < bv:
                    bi, bj, bv = t, j, abs(v)
            if bi != t:
                a[t], a[bi] = a[bi], a[t]
            if bj != t:
                for row in a:
                    row[t], row[bj] = row[bj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def dense_rank_q(a: list[list]) -> int:
    """Rank over the rationals by fraction Gaussian elimination (input consumed)."""
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    for j in range(n):
        piv = next((i for i in range(rank, m) if a[i][j]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        prow = a[rank]
        pv = Fraction(prow[j])
        for i in range(rank + 1, m):
            x = a[i][j]
            if x:
                f = x / pv
                row = a[i]
                for k in range(j, n):
                    if prow[k]:
                        row[k] -= f * prow[k]
        rank += 1
    return rank


def column_hermite(a: list[list[int]]):
    """Column-reduce an integer matrix by unimodular column operations.

    Returns ``(pivots, u, v)`` with ``a @ u`` in column echelon form whose
    first ``pivots`` columns are nonzero and the rest zero, and ``v = u^-1``.
    The trailing columns of ``u`` are a basis of the integer kernel.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    a = [list(r) for r in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_swap(x, y):
        for row in a:
            row[x], row[y] = row[y], row[x]
        for row in u:
            row[x], row[y] = row[y], row[x]
        v[x], v[y] = v[y], v[x]

    def col_addmul(dst, src, q):
        # column dst -= q * column src ; inverse: row src += q * row dst
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        for row in u:
            if row[src]:
                row[dst] -= q * row[src]
        vs, vd = v[src], v[dst]
        for k in range(n):
            if vd[k]:
                vs[k] += q * vd[k]

    piv = 0
    for i in range(m):
        if piv >= n:
            break
        row = a[i]
        while True:
            nz = [j for j in range(piv, n) if row[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            if j0 != piv:
                col_swap(piv, j0)
            done = True
            for j in range(piv + 1, n):
                if row[j]:
                    col_addmul(j, piv, row[j] // row[piv])
                    if row[j]:
                        done = False
            if done:
                piv += 1
                break
    return piv, u, v


def _matvec_cols(v: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(v)
    k = len(b[0]) if b else 0
    out = [[0] * k for _ in range(n)]
    for i in range(n):
        vi = v[i]
        oi = out[i]
        for t, x in enumerate(vi):
            if x:
                bt = b[t]
                for j in range(k):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


# ---------------------------------------------------------------------------
# Smith normal form, rank, homology


def _integer_triples(m: SparseMatrix):
    """Columns scaled to integers (rank-preserving) as COO arrays."""
    if m.vals.dtype == np.int64:
        return m.rows, m.cols, m.vals
    vals = m.vals.tolist()
    if all(type(x) is int for x in vals):
        return m.rows, m.cols, vals
    scale: dict[int, int] = {}
    for c, x in zip(m.cols.tolist(), vals):
        d = Fraction(x).denominator
        scale[c] = scale.get(c, 1) * d // math.gcd(scale.get(c, 1), d)
    out = [int(Fraction(x) * scale[c]) for c, x in zip(m.cols.tolist(), vals)]
    return m.rows, m.cols, out


def _leftover_dense(leftover):
    rmap = {r: i for i, r in enumerate(sorted({r for r, _, _ in leftover}))}
    cmap = {c: j for j, c in enumerate(sorted({c for _, c, _ in leftover}))}
    dense = [[0] * len(cmap) for _ in rmap]
    for r, c, v in leftover:
        dense[rmap[r]][cmap[c]] = int(v)
    return dense


def smith_normal_form(m: SparseMatrix, backend: str | None = None) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    rows, cols, vals = _integer_triples(m)
    if m.ring is not None and m.ring.kind == "Q":
        raise ValueError("smith_normal_form expects an integer matrix")
    units, leftover = _backend.eliminate(m.nrows, m.ncols, rows, cols, vals, 0, backend)
    rest = invariant_chain(dense_diagonalize(_leftover_dense(leftover))) if leftover else []
    return [1] * units + rest


@dataclass(frozen=True)
class MatrixProfile:
    """Rank of a boundary map plus, over Z, its nonzero invariant factors."""

    rank: int
    factors: tuple[int, ...] = ()


def profile(m: SparseMatrix, ring: RingSpec, backend: str | None = None) -> MatrixProfile:
    if m.nnz == 0:
        return MatrixProfile(0, ())
    if ring.kind == "Z":
        f = smith_normal_form(m, backend)
        return MatrixProfile(len(f), tuple(f))
    if ring.kind == "Q":
        rows, cols, vals = _integer_triples(m)
        units, leftover = _backend.eliminate(m.nrows, m.ncols, rows, cols, vals, 0, backend)
        return MatrixProfile(units + (dense_rank_q(_leftover_dense(leftover)) if leftover else 0))
    if _is_prime(ring.modulus):
        vals = np.asarray(m.vals.tolist() if m.vals.dtype == object else m.vals, dtype=object) % ring.modulus
        vals = vals.astype(np.int64) if ring.modulus < (1 << 62) else vals
        units, leftover = _backend.eliminate(m.nrows, m.ncols, m.rows, m.cols, vals, ring.modulus, backend)
        assert not leftover
        return MatrixProfile(units)
    raise ValueError("profiles over Z/m need m prime; use homology_at for composite m")


def rank(m: SparseMatrix, ring: RingSpec) -> int:
    """Rank over a field, or over Z the rank of the matrix as a map of free modules."""
    if ring.kind == "Zmod" and not _is_prime(ring.modulus):
        raise ValueError("rank over a composite modulus is not well defined")
    return profile(m, ring).rank


def homology_from_profiles(dim: int, out_prof: MatrixProfile, in_prof: MatrixProfile, ring: RingSpec) -> AbelianInvariants:
    """Homology at a chain group of rank ``dim`` with outgoing and incoming maps profiled.

    Over Z the kernel of the outgoing map is a direct summand, so the
    homology splits as a free part of rank dim - rank(out) - rank(in) and the
    cokernel torsion of the incoming map.
    """
    free = dim - out_prof.rank - in_prof.rank
    if free < 0:
        raise CompositionNotZero("ranks exceed the chain group dimension")
    if ring.kind == "Z":
        return AbelianInvariants(free, tuple(d for d in in_prof.factors if d > 1))
    return AbelianInvariants(free, ())


def check_composable(d_k: SparseMatrix, d_k1: SparseMatrix, ring: RingSpec) -> None:
    if d_k.ncols != d_k1.nrows:
        raise SizeMismatch(f"d_k has {d_k.ncols} columns but d_k+1 has {d_k1.nrows} rows")
    prod = d_k @ d_k1
    if ring.kind == "Zmod":
        prod = SparseMatrix.from_coo(prod.nrows, prod.ncols, prod.rows, prod.cols, prod.vals, ring)
    if prod.nnz:
        raise CompositionNotZero(f"boundary composite has {prod.nnz} nonzero entries")


def homology_at(d_k: SparseMatrix, d_k1: SparseMatrix, ring: RingSpec, method: str = "snf") -> AbelianInvariants:
    """Invariants of ker(d_k)/im(d_k1).

    ``method="snf"`` profiles both maps through the sparse kernels.
    ``method="kernel"`` builds an explicit integer kernel basis of d_k by
    column Hermite reduction and takes the Smith form of d_k1 in that basis;
    it is dense and meant for cross-checks on small complexes.  Composite
    moduli always use the kernel route.
    """
    check_composable(d_k, d_k1, ring)
    if ring.kind == "Zmod" and not _is_prime(ring.modulus):
        return _homology_mod_composite(d_k, d_k1, ring.modulus)
    if method == "kernel":
        if ring.kind != "Z":
            raise ValueError("kernel method is implemented over Z")
        return _homology_kernel_basis(d_k, d_k1)
    return homology_from_profiles(d_k.ncols, profile(d_k, ring), profile(d_k1, ring), ring)


def _homology_kernel_basis(d_k: SparseMatrix, d_k1: SparseMatrix) -> AbelianInvariants:
    n = d_k.ncols
    a = d_k.to_dense() if d_k.nrows else [[0] * n]
    piv, _u, v = column_hermite([[int(x) for x in row] for row in a])
    b = [[int(x) for x in row] for row in d_k1.to_dense()]
    if not b or not b[0]:
        return AbelianInvariants(n - piv, ())
    coords = _matvec_cols(v, b)
    if any(any(row) for row in coords[:piv]):
        raise CompositionNotZero("image is not inside the kernel")
    sub = coords[piv:]
    diag = invariant_chain(dense_diagonalize([list(r) for r in sub])) if sub else []
    return AbelianInvariants(n - piv - len(diag), tuple(d for d in diag if d > 1))


def _homology_mod_composite(d_k: SparseMatrix, d_k1: SparseMatrix, m: int) -> AbelianInvariants:
    # K = {x in Z^n : d_k x = 0 mod m},  L = im(d_k1) + m Z^n,  H = K / L.
    n = d_k.ncols
    if n == 0:
        return AbelianInvariants.zero()
    r = d_k.nrows
    a = [[int(x) for x in row] for row in d_k.to_dense()]
    for i in range(r):
        a[i] += [m if j == i else 0 for j in range(r)]
    if r == 0:
        a = [[0] * n]
    piv, u, _v = column_hermite(a)
    kcols = [[u[i][j] for j in range(piv, len(u))] for i in range(n)]
    # kcols is n x n: the projection of the kernel lattice, which is a basis of K
    gens = [[int(x) for x in row] for row in d_k1.to_dense()] if d_k1.ncols else [[] for _ in range(n)]
    for i in range(n):
        gens[i] = gens[i] + [m if j == i else 0 for j in range(n)]
    coords = _solve_integer(kcols, gens)
    factors = invariant_chain(dense_diagonalize(coords))
    free = sum(1 for f in factors if f == m)
    tors = tuple(f for f in factors if 1 < f < m)
    return AbelianInvariants(free, tors)


def _solve_integer(p: list[list[int]], g: list[list[int]]) -> list[list[int]]:
    """Solve p x = g for square invertible p; the solution must be integral."""
    n = len(p)
    k = len(g[0]) if g else 0
    aug = [[Fraction(x) for x in p[i]] + [Fraction(x) for x in g[i]] for i in range(n)]
    for j in range(n):
        piv = next(i for i in range(j, n) if aug[i][j])
        aug[j], aug[piv] = aug[piv], aug[j]
        pv = aug[j][j]
        aug[j] = [x / pv for x in aug[j]]
        for i in range(n):
            if i != j and aug[i][j]:
                f = aug[i][j]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[j])]
    out = []
    for i in range(n):
        row = aug[i][n:n + k]
        if any(x.denominator != 1 for x in row):
            raise ArithmeticError("lattice coordinates are not integral")
        out.append([int(x) for x in row])
    return out
