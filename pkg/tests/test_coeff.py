import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from diaghom import _backend
from diaghom.coeff import (
    QQ,
    ZZ,
    AbelianInvariants,
    CompositionNotZero,
    NotInvertible,
    RingSpec,
    SizeMismatch,
    SparseMatrix,
    dense_diagonalize,
    homology_at,
    invariant_chain,
    parse_scalar,
    profile,
    rank,
    smith_normal_form,
)

BACKENDS = ["python"] + (["cython"] if _backend._ckernels is not None else [])


def test_ring_parse_and_tokens():
    assert RingSpec.parse("z") == ZZ
    assert RingSpec.parse("q") == QQ
    r = RingSpec.parse("z6")
    assert r.modulus == 6 and not r.is_field
    assert RingSpec.parse("z5").is_field
    for text in ("z", "q", "z2", "z12"):
        assert RingSpec.parse(text).token() == text
    with pytest.raises(ValueError):
        RingSpec.parse("z1")
    with pytest.raises(ValueError):
        RingSpec.parse("r")


def test_ring_arithmetic():
    z6 = RingSpec.mod(6)
    assert z6.normalize(-1) == 5
    assert z6.is_unit(5) and not z6.is_unit(3)
    assert z6.invert(5) == 5
    with pytest.raises(NotInvertible):
        z6.invert(3, "delta")
    assert ZZ.invert(-1) == -1
    with pytest.raises(NotInvertible):
        ZZ.invert(2)
    assert QQ.invert(3) == Fraction(1, 3)
    assert QQ.power(2, -2) == Fraction(1, 4)
    assert RingSpec.mod(7).power(3, -1) == 5
    with pytest.raises(ValueError):
        ZZ.normalize(Fraction(1, 2))
    assert RingSpec.mod(5).normalize(Fraction(1, 2)) == 3


def test_parse_scalar():
    assert parse_scalar("3") == 3
    assert parse_scalar("-2/4") == Fraction(-1, 2)
    assert parse_scalar("0.25") == Fraction(1, 4)


def test_sparse_matrix_sums_duplicates_and_reduces():
    m = SparseMatrix(2, 2, [(0, 0, 1), (0, 0, 1), (1, 1, 3)], RingSpec.mod(3))
    assert m.to_dense() == [[2, 0], [0, 0]]
    assert m.nnz == 1
    t = SparseMatrix(2, 3, {(0, 2): 5}).transpose()
    assert t.shape == (3, 2) and t.to_dense()[2][0] == 5


def test_matmul_matches_dense():
    rng = random.Random(3)
    for _ in range(20):
        a = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(3)]
        b = [[rng.randint(-3, 3) for _ in range(5)] for _ in range(4)]
        prod = (SparseMatrix.from_dense(a) @ SparseMatrix.from_dense(b)).to_dense()
        assert prod == (np.array(a) @ np.array(b)).tolist()
    with pytest.raises(SizeMismatch):
        SparseMatrix.zeros(2, 3) @ SparseMatrix.zeros(2, 3)


def test_big_entries_stay_exact():
    big = 1 << 70
    m = SparseMatrix(2, 2, [(0, 0, big), (1, 1, 3)])
    assert smith_normal_form(m) == [1, 3 * big]


def _sympy_factors(a):
    if not a or not a[0]:
        return []
    fs = invariant_factors(sympy.Matrix(a), domain=sympy.ZZ)
    return [abs(int(f)) for f in fs if f != 0]


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=80, deadline=None)
@given(a=matrices)
def test_snf_matches_sympy(backend, a):
    assert smith_normal_form(SparseMatrix.from_dense(a), backend) == _sympy_factors(a)


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=60, deadline=None)
@given(a=matrices, p=st.sampled_from([2, 3, 5]))
def test_rank_mod_p(backend, a, p):
    # reference: rank over GF(p) by plain elimination
    rows = [[x % p for x in r] for r in a]
    rk = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = pow(rows[rk][c], -1, p)
        rows[rk] = [x * inv % p for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rk])]
        rk += 1
    assert profile(SparseMatrix.from_dense(a), RingSpec.mod(p), backend).rank == rk


@settings(max_examples=60, deadline=None)
@given(a=matrices)
def test_rank_q_matches_sympy(a):
    assert rank(SparseMatrix.from_dense(a), QQ) == sympy.Matrix(a).rank()


def test_backends_agree_on_larger_sparse_matrix():
    rng = np.random.default_rng(7)
    r = rng.integers(0, 80, 600)
    c = rng.integers(0, 120, 600)
    v = rng.choice([-2, -1, 1, 2, 3], 600)
    m = SparseMatrix.from_coo(80, 120, r, c, v)
    results = {b: smith_normal_form(m, b) for b in BACKENDS}
    assert len({tuple(x) for x in results.values()}) == 1
    assert results["python"] == invariant_chain(dense_diagonalize(m.to_dense()))


def test_overflow_falls_back_to_exact_python():
    # entries near 2^40 overflow the compiled kernel's bound and must still be exact
    a = [[2**40 + 1, 2**40], [2**40, 2**40 - 1], [3, 5]]
    assert smith_normal_form(SparseMatrix.from_dense(a), "cython" if "cython" in BACKENDS else None) == _sympy_factors(a)


def test_homology_examples():
    z2 = SparseMatrix.from_dense([[2]])
    zero_row = SparseMatrix.zeros(0, 1)
    assert homology_at(zero_row, z2, ZZ) == AbelianInvariants(0, (2,))
    assert homology_at(zero_row, z2, QQ) == AbelianInvariants.zero()
    assert homology_at(zero_row, z2, RingSpec.mod(2)) == AbelianInvariants(1, ())
    assert homology_at(zero_row, SparseMatrix.zeros(1, 0), ZZ) == AbelianInvariants(1, ())
    # multiplication by 2 on Z/4 has kernel and cokernel Z/2
    d = SparseMatrix.from_dense([[2]])
    assert homology_at(d, SparseMatrix.zeros(1, 0), RingSpec.mod(4)) == AbelianInvariants(0, (2,))
    assert homology_at(zero_row, d, RingSpec.mod(4)) == AbelianInvariants(0, (2,))
    assert homology_at(zero_row, d, RingSpec.mod(6)) == AbelianInvariants(0, (2,))


def test_homology_rejects_non_complex():
    a = SparseMatrix.from_dense([[1]])
    with pytest.raises(CompositionNotZero):
        homology_at(a, a, ZZ)
    with pytest.raises(SizeMismatch):
        homology_at(SparseMatrix.zeros(1, 2), SparseMatrix.zeros(3, 1), ZZ)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_snf_and_kernel_methods_agree(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    # build a complex Z^k -> Z^n -> Z^m with d_k d_{k+1} = 0 by factoring through a kernel
    k = rng.randint(1, 4)
    b = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(n)]
    mb = sympy.Matrix(b)
    left = mb.T.nullspace()
    if left:
        rows = [[int(x * sympy.lcm([y.q for y in v])) for x in v] for v in left]
    else:
        rows = [[0] * n]
    d_k = SparseMatrix.from_dense(rows)
    d_k1 = SparseMatrix.from_dense(b)
    assert homology_at(d_k, d_k1, ZZ) == homology_at(d_k, d_k1, ZZ, method="kernel")


def test_invariants_json_and_describe():
    g = AbelianInvariants(2, (2, 6))
    assert AbelianInvariants.from_json(g.to_json()) == g
    assert g.describe() == "Z^2 + Z/2 + Z/6"
    assert AbelianInvariants.zero().describe() == "0"
    with pytest.raises(ValueError):
        AbelianInvariants(0, (2, 3))
