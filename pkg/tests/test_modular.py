"""Modular data of small doubles, checked against independent oracles."""

import json

import pytest

from crossed_s.cyclo import Cyclo
from crossed_s.linalg import Mat
from crossed_s.groups import cyclic_group, klein_group, symmetric_group
from crossed_s.reps import character_table
from crossed_s.modular import (ModularData, modular_data_of_double, verify_modular,
                               verlinde_fusion, gauss_sum)


@pytest.fixture(scope="module")
def doubles():
    out = {}
    for name, g in (("z2", cyclic_group(2)), ("z3", cyclic_group(3)),
                    ("klein", klein_group()), ("s3", symmetric_group(3))):
        out[name] = modular_data_of_double(g)
    return out


# -- an independent oracle: the commuting-pair class-sum formula ---------------

def _classes_in_order(group):
    index = {g: i for i, g in enumerate(group.elements)}
    seen, out = set(), []
    for t in group.elements:
        if t in seen:
            continue
        cl = {group.conj(g, t) for g in group.elements}
        seen |= cl
        out.append(tuple(sorted(cl, key=index.__getitem__)))
    return out


def oracle_double_s(group):
    """S-matrix of the double from commuting pairs of group elements alone.

    Entry for ((class1, chi), (class2, rho)) is the sum over commuting pairs
    (u, v) in class1 x class2 of conj(chi(t_u^-1 v t_u) * rho(t_v^-1 u t_v)),
    with t_u the first element conjugating the class base point to u.
    """
    rows = []
    for cl in _classes_in_order(group):
        x = cl[0]
        cent = group.subgroup([g for g in group.elements
                               if group.mul(g, x) == group.mul(x, g)])
        table = character_table(cent)
        trans = {u: next(g for g in group.elements if group.conj(g, x) == u)
                 for u in cl}
        for ri in range(len(table)):
            rows.append((cl, table, ri, trans))
    n = len(rows)
    out = [[None] * n for _ in range(n)]
    for i, (cl1, t1, r1, tr1) in enumerate(rows):
        for j, (cl2, t2, r2, tr2) in enumerate(rows):
            tot = Cyclo.zero()
            for u in cl1:
                for v in cl2:
                    if group.mul(u, v) != group.mul(v, u):
                        continue
                    a = t1.value(r1, group.mul(group.inv(tr1[u]), v, tr1[u]))
                    b = t2.value(r2, group.mul(group.inv(tr2[v]), u, tr2[v]))
                    tot = tot + (a * b).conj()
            out[i][j] = tot
    return out


def test_trivial_group_double():
    md = modular_data_of_double(cyclic_group(1))
    assert md.labels == ["0.0.0"]
    assert md.S.get("0.0.0", "0.0.0") == 1
    assert md.T == [Cyclo.one()]
    assert md.gauss_plus == 1 and md.gauss_minus == 1
    assert verify_modular(md).passed


def test_z2_double_entries_and_fusion(doubles):
    md = doubles["z2"]
    assert len(md.labels) == 4
    for _, _, v in md.S.entries():
        assert v in (Cyclo.one(), -Cyclo.one())
    prod = md.S @ md.S.conj_transpose()
    assert prod == Cyclo.rational(4) * Mat.identity(md.labels)
    fus = verlinde_fusion(md)
    # the fusion ring is the group ring of Z/2 x Z/2: every matrix a permutation
    perms = {}
    for lab in md.labels:
        p = fus[lab].as_permutation()
        assert p is not None
        perms[lab] = p
    assert all(perms[lab][lab] == md.labels[0] for lab in md.labels)  # self-inverse


def test_z3_closed_form(doubles):
    md = doubles["z3"]
    g = cyclic_group(3)
    table = character_table(g.subgroup(list(g.elements)))
    # simples enumerate as (class a, character row r) with index 3a + r
    for a in range(3):
        for r in range(3):
            for b in range(3):
                for s in range(3):
                    li, lj = md.labels[3 * a + r], md.labels[3 * b + s]
                    expected = (table.value(r, b) * table.value(s, a)).conj()
                    assert md.S.get(li, lj) == expected
    assert md.global_dim == 9


def test_commuting_pair_oracle(doubles):
    for name, group in (("z3", cyclic_group(3)), ("klein", klein_group()),
                        ("s3", symmetric_group(3))):
        md = doubles[name]
        want = oracle_double_s(group)
        for i, li in enumerate(md.labels):
            for j, lj in enumerate(md.labels):
                assert md.S.get(li, lj) == want[i][j], (name, li, lj)


def test_fusion_matches_tensor_decomposition(doubles):
    md = doubles["s3"]
    ctx = md.source
    sims = ctx.simples(0)
    bylabel = {f"{s.label[0]}.{s.label[1]}.{s.label[2]}": s for s in sims}
    fus = verlinde_fusion(md)
    for li in md.labels:
        for lj in md.labels:
            parts = dict(ctx.decompose(ctx.tensor(bylabel[li], bylabel[lj])))
            for lk in md.labels:
                sk = bylabel[lk]
                want = parts.get(sk.label, 0)
                got = fus[li].get(lk, lj)
                assert got == Cyclo.rational(want), (li, lj, lk)


def test_verify_passes_on_all_doubles(doubles):
    for name, md in doubles.items():
        rep = verify_modular(md)
        assert len(rep.checks) == 6
        assert rep.passed, (name, rep.render())


def test_type_invariants(doubles):
    for md in doubles.values():
        unit = md.labels[0]
        assert unit == "0.0.0"
        assert md.T[0] == 1
        for j, lab in enumerate(md.labels):
            assert md.S.get(unit, lab) == md.dims[j]
        total = Cyclo.zero()
        for d in md.dims:
            total = total + d * d
        assert total == md.global_dim


def test_gauss_sums_are_group_order(doubles):
    for name, g in (("z2", 2), ("z3", 3), ("klein", 4), ("s3", 6)):
        md = doubles[name]
        assert md.gauss_plus == g
        assert md.gauss_minus == g
        assert gauss_sum(md, +1) == md.gauss_plus
        assert gauss_sum(md, -1) == md.gauss_minus
        assert md.gauss_plus * md.gauss_minus == md.global_dim


def test_st_cube_relation(doubles):
    for name in ("z3", "s3"):
        md = doubles[name]
        st = md.S @ md.t_matrix()
        assert st @ st @ st == md.gauss_plus * (md.S @ md.S)


def test_verlinde_unit_column(doubles):
    md = doubles["klein"]
    fus = verlinde_fusion(md)
    unit = md.labels[0]
    for li in md.labels:
        col = fus[li].column(unit)
        assert col == {li: Cyclo.one()}


def test_negative_control_corrupted_s_entry(doubles):
    md = doubles["z3"]
    bad = Mat(md.labels, md.labels, dict(md.S.data))
    r, c = md.labels[0], md.labels[4]
    bad.data[(r, c)] = bad.get(r, c) + Cyclo.one()
    broken = ModularData(md.labels, bad, md.T, md.dims, md.global_dim,
                         md.gauss_plus, md.gauss_minus)
    rep = verify_modular(broken)
    assert not rep.passed
    names = {ch.name for ch in rep.failures()}
    assert "unitarity S.conj(S)^T = global_dim.I" in names
    uni = next(ch for ch in rep.checks if ch.name.startswith("unitarity"))
    assert not uni.passed and uni.detail  # pinpointing detail present
    assert not any("twist" in ch.name for ch in rep.failures())


def test_negative_control_corrupted_twist(doubles):
    md = doubles["z2"]
    t = list(md.T)
    t[2] = Cyclo.rational(2)
    broken = ModularData(md.labels, md.S, t, md.dims, md.global_dim,
                         md.gauss_plus, md.gauss_minus)
    rep = verify_modular(broken)
    assert not rep.passed
    assert any(ch.name == "twists are roots of unity" and md.labels[2] in ch.detail
               for ch in rep.failures())


def test_check_selection(doubles):
    rep = verify_modular(doubles["z2"], checks=("unitarity",))
    assert len(rep.checks) == 1 and rep.passed


def test_json_round_trip(doubles):
    for md in doubles.values():
        text = json.dumps(md.to_json_dict(), sort_keys=True)
        back = ModularData.from_json_dict(json.loads(text))
        assert back.labels == md.labels
        assert back.S == md.S
        assert back.T == md.T
        assert back.dims == md.dims
        assert json.dumps(back.to_json_dict(), sort_keys=True) == text
        assert verify_modular(back).passed


def test_from_json_rejects_malformed():
    doc = {"labels": ["a", "b"], "S": [["1", "1"]], "T": ["1", "1"],
           "dims": [1, 1], "order": 2}
    with pytest.raises(ValueError):
        ModularData.from_json_dict(doc)
    doc2 = {"labels": ["a"], "S": [["1"]], "T": ["1"], "dims": [1], "order": 5}
    with pytest.raises(ValueError):
        ModularData.from_json_dict(doc2)


def test_axiom_suite_passes_on_crossed_engines():
    from crossed_s.eqcat import CrossedCenter
    from crossed_s.groups import inversion_automorphism
    from crossed_s.modular import verify_axioms

    g = cyclic_group(3)
    rep = verify_axioms(CrossedCenter(g, inversion_automorphism(g)))
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert len(names) == 6
    assert any("hexagon" in n for n in names)
    assert any("zig-zag" in n for n in names)
    # the plain double is the degenerate single-sector case
    assert verify_axioms(CrossedCenter(klein_group())).passed
