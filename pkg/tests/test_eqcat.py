"""The bundle engine: strictness, duality, braiding, twist, simple bundles."""

import pytest

from crossed_s.cyclo import Cyclo, zeta
from crossed_s.linalg import Mat
from crossed_s.groups import (cyclic_group, klein_group, symmetric_group,
                              inversion_automorphism, swap_automorphism,
                              index_map_automorphism)
from crossed_s.eqcat import CrossedCenter, tensor_mor


@pytest.fixture(scope="module")
def zc3():
    g = cyclic_group(3)
    return CrossedCenter(g, inversion_automorphism(g))


@pytest.fixture(scope="module")
def zk():
    g = klein_group()
    return CrossedCenter(g, swap_automorphism(g))


@pytest.fixture(scope="module")
def z2d():
    return CrossedCenter(cyclic_group(2))


@pytest.fixture(scope="module")
def z3d():
    return CrossedCenter(cyclic_group(3))


@pytest.fixture(scope="module")
def s3d():
    return CrossedCenter(symmetric_group(3))


@pytest.fixture(scope="module")
def zk3():
    g = klein_group()
    return CrossedCenter(g, index_map_automorphism(g, [0, 2, 3, 1]))


def _sample(ctx, per_sector=2):
    out = []
    for a in range(ctx.N):
        out.extend(ctx.simples(a)[:per_sector])
    return out


def test_simple_counts_and_dims(zc3, zk, z3d, s3d, zk3):
    # plain doubles: one simple per (conjugacy class, stabilizer irreducible)
    assert [s.dim for s in z3d.simples(0)] == [1] * 9
    assert sorted(s.dim for s in s3d.simples(0)) == [1, 1, 2, 2, 2, 2, 3, 3]
    # order-3 cyclic with inversion: sector 1 collapses to a single orbit
    assert [s.dim for s in zc3.simples(0)] == [1] * 9
    assert [s.dim for s in zc3.simples(1)] == [3]
    # klein with the swap: two sector-1 orbits of size two
    assert [s.dim for s in zk.simples(0)] == [1] * 16
    assert [s.dim for s in zk.simples(1)] == [2, 2, 2, 2]
    # klein with a 3-cycle of the involutions: one free orbit per twisted sector
    assert [s.dim for s in zk3.simples(1)] == [4]
    assert [s.dim for s in zk3.simples(2)] == [4]
    for ctx in (zc3, zk, z3d, s3d, zk3):
        n = len(ctx.group) ** 2
        for a in range(ctx.N):
            assert sum(s.dim ** 2 for s in ctx.simples(a)) == n


def test_actions_are_representations(zc3, zk, s3d):
    for ctx in (zc3, zk, s3d):
        els = ctx.group.elements
        sample = _sample(ctx) + [ctx.tensor(ctx.simples(0)[1], _sample(ctx)[-1])]
        for v in sample:
            assert v.act[ctx.group.identity] == Mat.identity(v.keys)
            for g in els:
                for h in els:
                    assert v.act[g] @ v.act[h] == v.act[ctx.group.mul(g, h)]
                # the action permutes stalks by conjugation in the extension
                for (r, c), _ in v.act[g].data.items():
                    assert v.stalk[r] == ctx.point_conj(g, v.stalk[c])


def test_unit_is_strict_and_first(zc3, zk):
    for ctx in (zc3, zk):
        assert ctx.simples(0)[0] is ctx.unit
        v = ctx.simples(1)[0]
        assert ctx.tensor(ctx.unit, v) is v
        assert ctx.tensor(v, ctx.unit) is v
        assert ctx.dual(ctx.unit) is ctx.unit
        assert ctx.f_act(ctx.unit, 1) is ctx.unit


def test_tensor_is_strictly_associative(zc3, s3d):
    for ctx, picks in ((zc3, (1, 0, 1)), (s3d, (0, 0, 0))):
        a, b, c = picks
        v = ctx.simples(a)[-1]
        w = ctx.simples(b)[1]
        u = ctx.simples(c)[-1]
        left = ctx.tensor(ctx.tensor(v, w), u)
        right = ctx.tensor(v, ctx.tensor(w, u))
        assert left.keys == right.keys          # same tuples in the same order
        assert left == right


def test_dual_is_strictly_involutive(zc3, zk):
    for ctx in (zc3, zk):
        for v in _sample(ctx):
            vd = ctx.dual(v)
            assert ctx.dual(vd) is v
            if v.dim and v is not ctx.unit:
                assert vd.sector() == (-v.sector()) % ctx.N
        v, w = ctx.simples(1)[0], ctx.simples(0)[2]
        assert ctx.dual(ctx.tensor(v, w)) == ctx.tensor(ctx.dual(w), ctx.dual(v))


def test_zigzag_identities(zc3, zk, s3d):
    for ctx in (zc3, zk, s3d):
        for v in _sample(ctx, per_sector=2):
            vd = ctx.dual(v)
            idv, idd = Mat.identity(v.keys), Mat.identity(vd.keys)
            z1 = tensor_mor(idv, ctx.ev(v)) @ tensor_mor(ctx.coev(v), idv)
            z2 = tensor_mor(ctx.ev(v), idd) @ tensor_mor(idd, ctx.coev(v))
            assert z1 == idv
            assert z2 == idd


def test_f_act_is_periodic_and_monoidal(zc3, zk, zk3):
    for ctx in (zc3, zk, zk3):
        v = ctx.simples(1)[0]
        w = ctx.simples(0)[1]
        assert ctx.f_act(v, ctx.N) is v
        assert ctx.f_act(ctx.f_act(v, 1), ctx.N - 1) == v
        assert ctx.f_act(ctx.tensor(v, w), 1) == ctx.tensor(ctx.f_act(v, 1), ctx.f_act(w, 1))
        # identity on morphism matrices: the action dictionaries are reindexed, not changed
        shifted = ctx.f_act(v, 1)
        for g in ctx.group.elements:
            assert shifted.act[g] is v.act[ctx.aut.apply_power(-1, g)]


def test_braiding_is_a_bundle_map_with_inverse(zc3, zk, s3d, zk3):
    for ctx in (zc3, zk, s3d, zk3):
        sample = _sample(ctx)
        for v in sample:
            for w in sample:
                a = v.sector()
                b = ctx.braiding(v, w)
                binv = ctx.braiding_inv(v, w)
                src = ctx.tensor(v, w)
                tgt = ctx.tensor(ctx.f_act(w, a), v)
                assert ctx.is_morphism(src, tgt, b)
                assert binv @ b == Mat.identity(src.keys)
                assert b @ binv == Mat.identity(tgt.keys)
        u = ctx.simples(1 % ctx.N)[0]
        assert ctx.braiding(ctx.unit, u) == Mat.identity(u.keys)
        assert ctx.braiding(u, ctx.unit) == Mat.identity(u.keys)


def test_braiding_naturality(zk, s3d):
    for ctx in (zk, s3d):
        s = ctx.simples(0)[1]
        x = ctx.tensor(s, s)
        w = ctx.simples(1 % ctx.N)[0]
        idw, idx = Mat.identity(w.keys), Mat.identity(x.keys)
        for f in ctx.hom_basis(x, x):
            assert ctx.braiding(x, w) @ tensor_mor(f, idw) == \
                tensor_mor(idw, f) @ ctx.braiding(x, w)
            assert ctx.braiding(w, x) @ tensor_mor(idw, f) == \
                tensor_mor(f, idw) @ ctx.braiding(w, x)


def test_braiding_hexagons(zc3, zk, zk3):
    for ctx in (zc3, zk, zk3):
        sample = _sample(ctx, per_sector=1) + [ctx.simples(0)[1]]
        for v in sample:
            for w in sample:
                for u in sample:
                    a, b = v.sector(), w.sector()
                    lhs_a = ctx.braiding(v, ctx.tensor(w, u))
                    rhs_a = tensor_mor(Mat.identity(w.keys), ctx.braiding(v, u)) \
                        @ tensor_mor(ctx.braiding(v, w), Mat.identity(u.keys))
                    assert lhs_a == rhs_a
                    lhs_b = ctx.braiding(ctx.tensor(v, w), u)
                    rhs_b = tensor_mor(ctx.braiding(v, ctx.f_act(u, b)), Mat.identity(w.keys)) \
                        @ tensor_mor(Mat.identity(v.keys), ctx.braiding(w, u))
                    assert lhs_b == rhs_b


def test_twist_is_iso_and_respects_relabelling(zc3, zk, zk3):
    for ctx in (zc3, zk, zk3):
        for v in _sample(ctx):
            th = ctx.twist(v)
            assert ctx.is_morphism(v, ctx.f_act(v, v.sector()), th)
            assert th.rank() == v.dim
            for c in range(ctx.N):
                assert ctx.twist(ctx.f_act(v, c)) == th


def test_twist_on_tensor_products(zc3, zk):
    for ctx in (zc3, zk):
        sample = _sample(ctx, per_sector=1) + [ctx.simples(0)[3]]
        for m1 in sample:
            for m2 in sample:
                a, b = m1.sector(), m2.sector()
                lhs = ctx.twist(ctx.tensor(m1, m2))
                rhs = tensor_mor(ctx.twist(ctx.f_act(m1, b)), ctx.twist(ctx.f_act(m2, a))) \
                    @ ctx.braiding(ctx.f_act(m2, a), m1) @ ctx.braiding(m1, m2)
                assert lhs == rhs


def test_twist_of_dual(zc3, zk, s3d):
    for ctx in (zc3, zk, s3d):
        for v in _sample(ctx):
            lhs = ctx.dual_mor(ctx.twist(v))
            rhs = ctx.twist(ctx.f_act(ctx.dual(v), v.sector()))
            assert lhs == rhs


def test_twist_scalar_on_plain_double(z3d, s3d):
    # on the untwisted double, the twist of a simple bundle is the scalar by
    # which the orbit's base point acts on its own fibre
    for ctx in (z3d, s3d):
        for s in ctx.simples(0):
            t0 = s.stalk[s.keys[0]][0]
            expected = s.act[t0].get(s.keys[0], s.keys[0])
            assert ctx.twist(s).scalar_of_identity() == expected
    # explicitly: the nine twists of the order-3 double are third roots of unity
    vals = [z3d.twist(s).scalar_of_identity() for s in z3d.simples(0)]
    assert vals.count(Cyclo.one()) == 5
    assert vals.count(zeta(3, 1)) == 2 and vals.count(zeta(3, 2)) == 2


def test_spherical_trace_equals_both_closures(zk, s3d):
    for ctx in (zk, s3d):
        for v in _sample(ctx):
            vd = ctx.dual(v)
            fs = [v.act[g] for g in ctx.group.elements[:3]] + ctx.hom_basis(v, v)
            for f in fs:
                tr_r = ctx.ev(vd) @ tensor_mor(f, Mat.identity(vd.keys)) @ ctx.coev(v)
                tr_l = ctx.ev(v) @ tensor_mor(Mat.identity(vd.keys), f) @ ctx.coev(vd)
                assert tr_r.get((), ()) == f.trace()
                assert tr_l.get((), ()) == f.trace()
                assert ctx.spherical_trace(f) == f.trace()


def test_hom_spaces_schur(zc3, zk):
    for ctx in (zc3, zk):
        sims = ctx.simples(0) + ctx.simples(1)
        for i, s in enumerate(sims):
            assert len(ctx.hom_basis(s, s)) == 1
            for t in sims[i + 1:]:
                assert len(ctx.hom_basis(s, t)) == 0
                assert len(ctx.hom_basis(t, s)) == 0


def test_hom_across_sectors_vanishes(zc3):
    s0 = zc3.simples(0)[2]
    s1 = zc3.simples(1)[0]
    assert zc3.hom_basis(s0, s1) == []
    assert zc3.hom_basis(zc3.unit, s1) == []


def test_abelian_double_fusion(z2d, z3d):
    # on the double of an abelian group, simples multiply pointwise:
    # stalks add and the acting characters multiply
    for ctx in (z2d, z3d):
        sims = ctx.simples(0)
        for s1 in sims:
            for s2 in sims:
                prod = ctx.tensor(s1, s2)
                parts = ctx.decompose(prod)
                assert len(parts) == 1 and parts[0][1] == 1
                target = next(s for s in sims if s.label == parts[0][0])
                x = ctx.cover.mul(s1.stalk[s1.keys[0]], s2.stalk[s2.keys[0]])
                assert target.stalk[target.keys[0]] == x
                for g in ctx.group.elements:
                    lhs = target.act[g].get(target.keys[0], target.keys[0])
                    rhs = s1.act[g].get(s1.keys[0], s1.keys[0]) * \
                        s2.act[g].get(s2.keys[0], s2.keys[0])
                    assert lhs == rhs


def test_decompose_against_unit_multiplicity(s3d):
    v = next(s for s in s3d.simples(0) if s.dim == 3)
    prod = s3d.tensor(v, s3d.dual(v))
    parts = s3d.decompose(prod)
    bylabel = dict(parts)
    assert bylabel[(0, 0, 0)] == 1          # the unit occurs exactly once in V . V*
    dims = {s.label: s.dim for s in s3d.simples(0)}
    assert sum(m * dims[lab] for lab, m in parts) == prod.dim


def test_relabelling_orbit_counts(zk, zk3):
    # how many sector-0 simples are fixed (up to isomorphism) by the relabelling
    def stable_count(ctx):
        n = 0
        for s in ctx.simples(0):
            if ctx.hom_basis(ctx.f_act(s, 1), s):
                n += 1
        return n
    assert stable_count(zk) == 4
    assert stable_count(zk3) == 1


def test_sector1_orbit_is_relabelling_stable(zc3, zk):
    # conjugating by t carries (t,1) to (F t,1): sector-1 orbits are preserved
    for ctx in (zc3, zk):
        for orbit in ctx.twisted_orbits(1):
            shifted = {ctx.point_shift(1, x) for x in orbit}
            assert shifted == set(orbit)
        for s in ctx.simples(1):
            assert len(ctx.hom_basis(ctx.f_act(s, 1), s)) in (0, 1)


def test_find_iso_between_relabelled_simples(zk):
    s = zk.simples(1)[0]
    f = zk.find_iso(zk.f_act(s, 1), s)
    assert f is not None
    assert zk.is_morphism(zk.f_act(s, 1), s, f)
    assert f.rank() == s.dim
