import pytest

from diaghom import algebra as alg
from diaghom import homology as hom
from diaghom import tate
from diaghom.algebra import AlgebraSpec
from diaghom.coeff import ZZ, AbelianInvariants, RingSpec

Z2 = AbelianInvariants(0, (2,))


def test_norm_map():
    assert tate.norm_map(alg.Symmetric(2), ZZ) == 2
    assert tate.norm_map(alg.Trivial, ZZ) == 1
    assert tate.norm_map(alg.Symmetric(3), RingSpec.mod(3)) == 0


def test_cyclic_two_is_two_periodic():
    tab = tate.tate_group(alg.Cyclic(2), 3, ZZ)
    assert (tab.lo, tab.hi) == (-4, 3)
    for p, g in tab.items():
        assert g == (Z2 if p % 2 == 0 else AbelianInvariants.zero())


def test_isomorphic_groups_give_equal_tables():
    assert tate.tate_group(alg.ProductSymmetric(1, 2), 3, ZZ) == tate.tate_group(alg.Cyclic(2), 3, ZZ)


def test_trivial_group_table_vanishes():
    assert tate.tate_group(alg.Trivial, 3, ZZ).is_zero()
    triv = hom.AugmentedAlgebra.trivial(ZZ)
    assert tate.tate_table(triv, alg.Trivial, 2).is_zero()


def test_rook_matches_group():
    A = AlgebraSpec.make("rook", 2, "z", epsilon=1)
    assert tate.tate_table(A, alg.Symmetric(2), 3, ZZ) == tate.tate_group(alg.Symmetric(2), 3, ZZ)


def test_symmetric_three_degree_zero():
    tab = tate.tate_group(alg.Symmetric(3), 2, ZZ)
    assert tab[0] == AbelianInvariants(0, (6,))
    assert tab[-1].is_zero


def test_refuses_non_centred_pairs():
    A = AlgebraSpec.make("tl", 3, "z", delta=0)
    with pytest.raises(tate.NotGCentred) as info:
        tate.tate_table(A, alg.Symmetric(2), 2, ZZ)
    assert info.value.row["degree"] == 1


def test_fields_and_prime_moduli():
    assert tate.tate_group(alg.Cyclic(2), 2, RingSpec.parse("q")).is_zero()
    tab = tate.tate_group(alg.Cyclic(2), 2, RingSpec.mod(2))
    assert all(g == AbelianInvariants(1, ()) for _, g in tab.items())
    tab3 = tate.tate_group(alg.Cyclic(2), 2, RingSpec.mod(3))
    assert tab3.is_zero()


def test_json_and_pretty():
    tab = tate.tate_group(alg.Cyclic(2), 1, ZZ)
    obj = tab.to_json()
    assert obj["range"] == [-2, 1]
    assert obj["groups"]["0"] == {"free_rank": 0, "torsion": [2]}
    assert tab.dumps() == tate.tate_group(alg.Cyclic(2), 1, ZZ).dumps()
    lines = tab.pretty().splitlines()
    assert len(lines) == 2 and "Z/2" in lines[1]
