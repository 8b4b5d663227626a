import pytest

from crossed_s.groups import (
    Automorphism,
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    extension_by_automorphism,
    find_isomorphism,
    identity_automorphism,
    index_map_automorphism,
    inner_automorphism,
    inversion_automorphism,
    klein_group,
    parse_automorphism_spec,
    parse_group_spec,
    swap_automorphism,
    symmetric_group,
)


def test_cyclic_basics():
    g = cyclic_group(6)
    assert len(g) == 6
    assert g.identity == 0
    assert g.mul(4, 5) == 3
    assert g.inv(2) == 4
    assert g.order(2) == 3
    assert g.exponent() == 6
    assert g.is_abelian()
    assert len(g.conjugacy_classes()) == 6


def test_symmetric_group_structure():
    s3 = symmetric_group(3)
    assert len(s3) == 6
    assert not s3.is_abelian()
    classes = s3.conjugacy_classes()
    assert [len(c) for c in classes] == [1, 3, 2]
    # element #1 in lex order is the transposition fixing 0
    assert s3.elements[1] == (0, 2, 1)
    assert s3.order(s3.elements[1]) == 2
    assert len(s3.centralizer(s3.elements[1])) == 2
    assert len(s3.center()) == 1


def test_dihedral_group():
    d4 = dihedral_group(4)
    assert len(d4) == 8
    assert d4.order_profile() == ((1, 1), (2, 5), (4, 2))
    assert len(d4.conjugacy_classes()) == 5
    assert len(d4.center()) == 2


def test_class_transversal():
    s3 = symmetric_group(3)
    rep = s3.elements[1]
    trans = s3.class_transversal(rep)
    assert set(trans) == set(s3.class_of(rep))
    for u, t in trans.items():
        assert s3.conj(t, rep) == u


def test_subgroup_and_generated():
    s3 = symmetric_group(3)
    a3 = s3.generated_subgroup([(1, 2, 0)])
    assert len(a3) == 3
    with pytest.raises(ValueError):
        s3.subgroup([s3.identity, (0, 2, 1), (1, 0, 2)])


def test_automorphism_validation():
    g = cyclic_group(4)
    with pytest.raises(ValueError):
        Automorphism(g, {0: 0, 1: 2, 2: 0, 3: 2})  # not bijective
    with pytest.raises(ValueError):
        Automorphism(g, {0: 1, 1: 0, 2: 3, 3: 2})  # bijective, not a hom
    with pytest.raises(ValueError):
        inversion_automorphism(symmetric_group(3))


def test_automorphism_powers():
    g = klein_group()
    f = index_map_automorphism(g, [0, 2, 3, 1])
    assert f.order == 3
    x = g.elements[1]
    assert f.apply_power(2, x) == f(f(x))
    assert f.apply_power(-1, f(x)) == x
    assert f.power(3).is_identity()
    assert f.power(2).order == 3
    assert identity_automorphism(g).order == 1


def test_inner_and_swap():
    s3 = symmetric_group(3)
    f = inner_automorphism(s3, s3.elements[1])
    assert f.order == 2
    k = klein_group()
    sw = swap_automorphism(k)
    assert sw.order == 2
    assert sw((0, 1)) == (1, 0)


def test_extension_shapes():
    # Z/3 extended by inversion is the symmetric group on three letters
    g = cyclic_group(3)
    ext = extension_by_automorphism(inversion_automorphism(g))
    assert len(ext) == 6
    assert find_isomorphism(ext, symmetric_group(3)) is not None

    # Klein + factor swap and Z/4 + inversion both give the dihedral group of order 8
    ek = extension_by_automorphism(swap_automorphism(klein_group()))
    e4 = extension_by_automorphism(inversion_automorphism(cyclic_group(4)))
    d4 = dihedral_group(4)
    assert find_isomorphism(ek, d4) is not None
    assert find_isomorphism(e4, d4) is not None

    # Klein + a 3-cycle automorphism is the alternating group on four letters
    e3 = extension_by_automorphism(index_map_automorphism(klein_group(), [0, 2, 3, 1]))
    assert find_isomorphism(e3, alternating_group(4)) is not None

    # inner extensions split: S3 x Z/2
    s3 = symmetric_group(3)
    ei = extension_by_automorphism(inner_automorphism(s3, s3.elements[1]))
    assert find_isomorphism(ei, direct_product(s3, cyclic_group(2))) is not None

    # identity automorphism: trivial extension keeps the group
    eid = extension_by_automorphism(identity_automorphism(g))
    assert len(eid) == 3
    assert find_isomorphism(eid, g) is not None


def test_extension_multiplication_convention():
    g = cyclic_group(4)
    f = inversion_automorphism(g)
    ext = extension_by_automorphism(f)
    # (s, a)(t, b) = (s + F^a(t), a + b)
    assert ext.mul((1, 1), (1, 0)) == (0, 1)
    assert ext.mul((1, 0), (1, 1)) == (2, 1)
    assert ext.inv((1, 1)) == (1, 1)


def test_no_isomorphism_between_distinct_groups():
    assert find_isomorphism(cyclic_group(4), klein_group()) is None
    assert find_isomorphism(symmetric_group(3), cyclic_group(6)) is None
    q8_like = dihedral_group(4)
    assert find_isomorphism(q8_like, direct_product(cyclic_group(2), cyclic_group(4))) is None


def test_group_spec_grammar():
    assert len(parse_group_spec("cyclic:5")) == 5
    assert len(parse_group_spec("dihedral:6")) == 12
    assert len(parse_group_spec("sym:4")) == 24
    assert len(parse_group_spec("alt:4")) == 12
    assert len(parse_group_spec("klein")) == 4
    assert len(parse_group_spec("product:cyclic:2,cyclic:3")) == 6
    with pytest.raises(ValueError):
        parse_group_spec("frobnicate:7")
    with pytest.raises(ValueError):
        parse_group_spec("cyclic:x")


def test_automorphism_spec_grammar():
    s3 = symmetric_group(3)
    assert parse_automorphism_spec(s3, "id").is_identity()
    assert parse_automorphism_spec(s3, "inner:g1").order == 2
    k = klein_group()
    assert parse_automorphism_spec(k, "swap").order == 2
    assert parse_automorphism_spec(k, "map:0,2,3,1").order == 3
    assert parse_automorphism_spec(cyclic_group(5), "pow:2").order == 4
    assert parse_automorphism_spec(cyclic_group(7), "inv").order == 2
    with pytest.raises(ValueError):
        parse_automorphism_spec(s3, "mystery")
    with pytest.raises(ValueError):
        parse_automorphism_spec(s3, "inner:1")
