import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diaghom.diagram import (
    Blob,
    Brauer,
    Diagram,
    DiluteTL,
    Family,
    FamilyViolation,
    Motzkin,
    PlanarRook,
    Rook,
    RookBrauer,
    SizeMismatch,
    SizeTooLarge,
    TemperleyLieb,
    WalledBrauer,
    canonical_key,
    compose,
    enumerate_diagrams,
    is_member,
    is_planar,
    propagating_count,
)

ALL = [RookBrauer, Motzkin, Rook, PlanarRook, Brauer, TemperleyLieb, Blob, DiluteTL]


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


def motzkin_number(k):
    return sum(math.comb(k, 2 * j) * catalan(j) for j in range(k // 2 + 1))


@pytest.mark.parametrize("fam,counts", [
    (TemperleyLieb, [1, 1, 2, 5, 14, 42]),
    (Brauer, [1, 1, 3, 15, 105]),
    (Rook, [1, 2, 7, 34, 209]),
    (PlanarRook, [1, 2, 6, 20, 70, 252]),
    (Blob, [1, 2, 6, 20, 70]),
    (Motzkin, [1, 2, 9, 51, 323]),
    (RookBrauer, [1, 2, 10, 76]),
    (DiluteTL, [1, 2, 9, 51]),
])
def test_golden_counts(fam, counts):
    assert [len(enumerate_diagrams(fam, n)) for n in range(len(counts))] == counts


def test_count_formulas():
    assert all(len(enumerate_diagrams(Motzkin, n)) == motzkin_number(2 * n) for n in range(5))
    assert all(len(enumerate_diagrams(TemperleyLieb, n)) == catalan(n) for n in range(6))


def test_walled_counts():
    # walled Brauer (r, s) has (r+s)! diagrams
    for r, s in [(1, 1), (1, 2), (2, 2), (1, 3)]:
        assert len(enumerate_diagrams(WalledBrauer(r, s))) == math.factorial(r + s)


def test_size_caps():
    with pytest.raises(SizeTooLarge):
        enumerate_diagrams(Brauer, 7)
    with pytest.raises(SizeTooLarge):
        enumerate_diagrams(TemperleyLieb, 9)
    with pytest.raises(SizeMismatch):
        enumerate_diagrams(WalledBrauer(1, 2), 4)


def test_enumeration_is_sorted_identity_first():
    for fam in ALL:
        ds = enumerate_diagrams(fam, 3)
        assert ds == sorted(ds, key=canonical_key)
        assert ds[0] == Diagram.identity(3)
        assert len(set(ds)) == len(ds)
        assert all(is_member(d, fam) for d in ds)


def test_family_parse():
    assert Family.parse("planar_rook") == PlanarRook
    assert Family.parse("TL") == TemperleyLieb
    assert Family.parse("walled", 2, 1) == WalledBrauer(2, 1)
    with pytest.raises(ValueError):
        Family.parse("partition")
    with pytest.raises(ValueError):
        Family.parse("walled")


def test_json_roundtrip():
    for fam in ALL:
        for d in enumerate_diagrams(fam, 3):
            assert Diagram.from_json(d.to_json()) == d


def test_membership():
    cross = Diagram.from_edges(2, [(1, -2), (2, -1)])
    assert is_member(cross, Brauer) and not is_member(cross, TemperleyLieb)
    assert not is_planar(cross)
    iso = Diagram.from_edges(2, [(1, -1)])
    assert is_member(iso, Rook) and not is_member(iso, Brauer)
    walled_ok = Diagram.from_edges(2, [(1, 2), (-1, -2)])
    assert is_member(walled_ok, WalledBrauer(1, 1))
    assert is_member(Diagram.identity(2), WalledBrauer(1, 1))
    assert not is_member(cross, WalledBrauer(1, 1))


def test_rook_brauer_composition_example():
    d1 = Diagram.from_edges(4, [(4, 2), (1, -4), (-1, -2)])
    d2 = Diagram.from_edges(4, [(1, 2), (4, -2), (-1, -3)])
    r = compose(d1, d2, RookBrauer)
    assert r.diagram == Diagram.from_edges(4, [(2, 4), (1, -2), (-1, -3)])
    assert (r.loops, r.isolated_middle) == (1, 1)


def test_walled_members_of_example():
    left = Diagram.from_edges(4, [(4, -3), (1, -2), (3, 2), (-4, -1)])
    assert is_member(left, WalledBrauer(2, 2))
    # a propagating edge may not cross the wall
    crossing = Diagram.from_edges(4, [(4, -4), (2, -3), (3, 1), (-2, -1)])
    assert not is_member(crossing, WalledBrauer(2, 2))


def test_blob_composition_gives_one_plain_and_one_blobbed_loop():
    b1 = Diagram.from_edges(6, [(2, 5), (3, 4), (1, -3), (6, -4), (-1, -2), (-5, -6)], blobs=[(1, -3), (-1, -2)])
    b2 = Diagram.from_edges(6, [(1, 2), (5, 6), (3, -1), (4, -2), (-5, -6), (-3, -4)], blobs=[(3, -1)])
    assert is_member(b1, Blob) and is_member(b2, Blob)
    r = compose(b1, b2, Blob)
    assert (r.loops, r.blobbed_loops) == (1, 1)
    assert r.diagram == Diagram.from_edges(6, [(3, 4), (2, 5), (6, -2), (1, -1), (-5, -6), (-3, -4)], blobs=[(1, -1)])


def test_dilute_zero_rule():
    x = Diagram.from_edges(2, [(1, -1)])
    y = Diagram.from_edges(2, [(1, -2)])
    assert not compose(x, y, DiluteTL).is_zero
    assert compose(y, x, DiluteTL).is_zero
    e = Diagram.from_edges(2, [(1, 2), (-1, -2)])
    assert compose(e, e, DiluteTL).loops == 1


def test_compose_rejects_foreign_diagrams():
    cross = Diagram.from_edges(2, [(1, -2), (2, -1)])
    with pytest.raises(FamilyViolation):
        compose(cross, cross, TemperleyLieb)
    with pytest.raises(SizeMismatch):
        compose(Diagram.identity(2), Diagram.identity(3), Brauer)


@pytest.mark.parametrize("fam", [f for f in ALL if f != DiluteTL])
def test_identity_is_neutral(fam):
    e = Diagram.identity(3)
    for d in enumerate_diagrams(fam, 3):
        for r in (compose(e, d, fam), compose(d, e, fam)):
            assert r.diagram == d and r.exponents == (0, 0, 0)


@pytest.mark.parametrize("fam", [RookBrauer, Brauer, Blob, Motzkin])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_composition_is_associative_on_diagrams(fam, data):
    ds = enumerate_diagrams(fam, 3)
    a, b, c = (data.draw(st.sampled_from(ds)) for _ in range(3))
    ab = compose(a, b, fam)
    bc = compose(b, c, fam)
    if ab.is_zero or bc.is_zero:
        return
    left = compose(ab.diagram, c, fam)
    right = compose(a, bc.diagram, fam)
    assert left.diagram == right.diagram
    lhs = tuple(x + y for x, y in zip(ab.exponents, left.exponents))
    rhs = tuple(x + y for x, y in zip(bc.exponents, right.exponents))
    assert lhs == rhs


def test_propagating_count_never_increases():
    for a in enumerate_diagrams(RookBrauer, 2):
        for b in enumerate_diagrams(RookBrauer, 2):
            r = compose(a, b, RookBrauer)
            assert propagating_count(r.diagram) <= min(propagating_count(a), propagating_count(b))
