import pytest

from diaghom.algebra import AlgebraSpec
from diaghom.diagram import (
    Blob,
    Brauer,
    Diagram,
    DiluteTL,
    Motzkin,
    PlanarRook,
    Rook,
    RookBrauer,
    TemperleyLieb,
    WalledBrauer,
    compose,
    enumerate_diagrams,
)
from diaghom.linkstate import (
    IllegalMove,
    LinkState,
    blob_move,
    closure,
    defect_matching,
    delete,
    double_diagram,
    glue,
    is_legal,
    juxtapose,
    left_link_state,
    link_state_sets,
    reachable_ideal_basis,
    right_link_state,
    sesqui,
    splice,
)

FAMILIES = [RookBrauer, Motzkin, Rook, PlanarRook, Brauer, TemperleyLieb, Blob, DiluteTL]
CASES = [(f, n) for f in FAMILIES for n in (1, 2, 3)] + [(WalledBrauer(r, s), r + s) for r, s in [(1, 1), (1, 2), (2, 1), (2, 2)]]


def test_walled_splice_example():
    d = Diagram.from_edges(4, [(4, -3), (1, -2), (3, 2), (-4, -1)])
    p = right_link_state(d)
    assert p == LinkState.make(4, arcs=[(1, 4)], defects=[2, 3])
    assert splice(p, 2, 3, WalledBrauer(2, 2)) == LinkState.make(4, arcs=[(1, 4), (2, 3)])


def test_planar_splice_may_not_enclose_a_defect():
    t = LinkState.all_defects(3)
    with pytest.raises(IllegalMove):
        splice(t, 1, 3, TemperleyLieb)
    assert splice(t, 1, 2, TemperleyLieb) == LinkState.make(3, arcs=[(1, 2)], defects=[3])
    # non-planar families have no such restriction
    assert splice(t, 1, 3, Brauer) == LinkState.make(3, arcs=[(1, 3)], defects=[2])


def test_walled_splice_must_cross_the_wall():
    p = LinkState.all_defects(3)
    with pytest.raises(IllegalMove):
        splice(p, 2, 3, WalledBrauer(1, 2))
    assert splice(p, 1, 2, WalledBrauer(1, 2)).arcs == frozenset({(1, 2)})


def test_deletion_rules():
    assert delete(LinkState.all_defects(1), 1, RookBrauer) == LinkState.make(1, isolated=[1])
    for fam in (TemperleyLieb, DiluteTL, Brauer, Blob):
        with pytest.raises(IllegalMove):
            delete(LinkState.all_defects(2), 1, fam)


def test_blob_move():
    q = blob_move(LinkState.all_defects(2), Blob)
    assert q.blobbed_defects == frozenset({q.top_defect})
    with pytest.raises(IllegalMove):
        blob_move(q, Blob)
    with pytest.raises(IllegalMove):
        blob_move(LinkState.make(2, arcs=[(1, 2)]), Blob)


def test_json_roundtrip():
    for fam, n in CASES:
        for d in enumerate_diagrams(fam, n):
            p = right_link_state(d)
            assert LinkState.from_json(p.to_json()) == p


@pytest.mark.parametrize("fam,n", CASES, ids=lambda x: str(x))
def test_slicing_is_a_bijection(fam, n):
    for d in enumerate_diagrams(fam, n):
        assert glue(left_link_state(d), right_link_state(d), defect_matching(d)) == d
        assert is_legal(right_link_state(d), fam)


@pytest.mark.parametrize("fam,n", CASES, ids=lambda x: str(x))
def test_left_ideal_property(fam, n):
    ds = enumerate_diagrams(fam, n)
    for y in ds:
        reach = closure(right_link_state(y), fam)
        for x in ds:
            r = compose(x, y, fam)
            if not r.is_zero:
                assert right_link_state(r.diagram) in reach


@pytest.mark.parametrize("fam,n", [(f, n) for f, n in CASES if n <= 3] + [(TemperleyLieb, 4), (Blob, 4), (Motzkin, 4)],
                         ids=lambda x: str(x))
def test_closure_is_exactly_realizable(fam, n):
    # the move closure of p equals the set of right link states of x*y over all x, y with state p
    ds = enumerate_diagrams(fam, n)
    by_state: dict = {}
    for y in ds:
        by_state.setdefault(right_link_state(y), []).append(y)
    for p, ys in by_state.items():
        realized = set()
        for y in ys:
            for x in ds:
                r = compose(x, y, fam)
                if not r.is_zero:
                    realized.add(right_link_state(r.diagram))
        assert realized == set(closure(p, fam))


def test_reachable_ideal_examples():
    assert len(reachable_ideal_basis(LinkState.all_defects(1), Rook)) == 2
    p = LinkState.make(2, arcs=[(1, 2)])
    assert reachable_ideal_basis(p, TemperleyLieb) == [d for d in enumerate_diagrams(TemperleyLieb, 2)
                                                      if right_link_state(d) == p]
    spec = AlgebraSpec.make("tl", 2, "z", delta=0)
    assert reachable_ideal_basis(p, spec) == reachable_ideal_basis(p, TemperleyLieb)
    assert len(reachable_ideal_basis(LinkState.all_defects(2), TemperleyLieb)) == 2


def test_link_state_sets():
    assert link_state_sets(Brauer, 0, "P", 2) == [LinkState.make(2, arcs=[(1, 2)])]
    for fam in FAMILIES:
        if not fam.blob:
            assert link_state_sets(fam, 3, "P", 3) == [LinkState.all_defects(3)]
    assert link_state_sets(Blob, 3, "Q", 3) == [LinkState.all_defects(3)]
    assert len(link_state_sets(Blob, 3, "P", 3)) == 2
    # two blob vertices carry 0 or 2 defects, so one-defect sets start at n = 3
    assert link_state_sets(Blob, 1, "R", 2) == []
    r1 = link_state_sets(Blob, 1, "R", 3)
    assert r1 and r1 == link_state_sets(Blob, 1, "QB", 3)
    assert all(len(q.defects) == 1 and q.blobbed_defects for q in r1)
    r2 = link_state_sets(Blob, 2, "R", 4)
    assert set(r2) == set(link_state_sets(Blob, 1, "Q", 4)) | set(link_state_sets(Blob, 2, "QB", 4))


def test_glued_graphs():
    e = Diagram.from_edges(2, [(1, 2), (-1, -2)])
    g = double_diagram(e, e)
    assert len(g.loops()) == 1
    q = LinkState.make(2, arcs=[(1, 2)])
    assert len(sesqui(q, e).loops()) == 1
    assert len(juxtapose(q, q).loops()) == 1
    nested = LinkState.make(4, arcs=[(1, 4), (2, 3)])
    side = LinkState.make(4, arcs=[(1, 2), (3, 4)])
    assert len(juxtapose(nested, side).loops()) == 1
    assert len(juxtapose(nested, nested).loops()) == 2
