"""Character tables and irreducible representations, checked against
independently known data (hand-computed tables frozen below)."""

from fractions import Fraction

import pytest

from crossed_s.cyclo import Cyclo, rational, zeta
from crossed_s.groups import (
    cyclic_group,
    dihedral_group,
    direct_product,
    klein_group,
    symmetric_group,
    alternating_group,
)
from crossed_s.linalg import Mat
from crossed_s.reps import (
    character_table,
    decompose_character,
    intertwiner_basis,
    irreps,
    regular_rep,
)


def test_cyclic_table():
    g = cyclic_group(4)
    t = character_table(g)
    assert len(t) == 4
    assert t.degrees == (1, 1, 1, 1)
    # rows are exactly the power characters chi_k(j) = i^{kj},
    # evaluated at the table's own class representatives
    rendered = sorted(tuple(v.render() for v in row) for row in t.rows)
    expected = sorted(
        tuple(zeta(4, k * j).render() for j in t.reps) for k in range(4)
    )
    assert rendered == expected


S3_TABLE = {
    # class sizes: 1 (identity), 3 (transpositions), 2 (three-cycles)
    (1, 1, 1),
    (1, -1, 1),
    (2, 0, -1),
}


def test_s3_table_matches_hand_computation():
    g = symmetric_group(3)
    t = character_table(g)
    assert [len(c) for c in t.classes] == [1, 3, 2]
    got = {tuple(int(v.as_rational()) for v in row) for row in t.rows}
    assert got == S3_TABLE
    assert t.rows[0] == (Cyclo.one(),) * 3  # trivial row first


def test_dihedral4_and_a4_tables():
    d4 = character_table(dihedral_group(4))
    assert sorted(d4.degrees) == [1, 1, 1, 1, 2]
    a4 = character_table(alternating_group(4))
    assert sorted(a4.degrees) == [1, 1, 1, 3]
    # the two nontrivial linear characters of A4 take values in cube roots
    omegas = {v.render() for row in a4.rows for v in row if not v.is_rational()}
    assert omegas == {"z3", "-1 - z3"}


def test_s4_table_degrees():
    t = character_table(symmetric_group(4))
    assert sorted(t.degrees) == [1, 1, 2, 3, 3]


def test_table_caching_is_per_group_instance():
    g = symmetric_group(3)
    assert character_table(g) is character_table(g)


def test_column_orthogonality():
    g = dihedral_group(4)
    t = character_table(g)
    n = len(g)
    for a in range(len(t.classes)):
        for b in range(len(t.classes)):
            acc = Cyclo.zero()
            for row in t.rows:
                acc = acc + row[a] * row[b].conj()
            expect = Fraction(n, len(t.classes[a])) if a == b else 0
            assert acc == expect


@pytest.mark.parametrize("make", [
    lambda: cyclic_group(6),
    lambda: klein_group(),
    lambda: symmetric_group(3),
    lambda: dihedral_group(4),
    lambda: alternating_group(4),
    lambda: direct_product(symmetric_group(3), cyclic_group(2)),
])
def test_irreps_verify_and_match_characters(make):
    g = make()
    table = character_table(g)
    reps = irreps(g)
    assert len(reps) == len(table)
    for i, rep in enumerate(reps):
        rep.verify()  # exact homomorphism check
        assert rep.dim == table.degrees[i]
        for x in g.elements:
            assert rep.character(x) == table.value(i, x)


def test_regular_rep_decomposition():
    g = symmetric_group(3)
    reg = regular_rep(g)
    mults = decompose_character(g, reg.character)
    table = character_table(g)
    assert mults == [table.degrees[i] for i in range(len(table))]


def test_intertwiners_schur():
    g = symmetric_group(3)
    reps = irreps(g)
    for i, ri in enumerate(reps):
        for j, rj in enumerate(reps):
            basis = intertwiner_basis(ri, rj)
            assert len(basis) == (1 if i == j else 0)
            for f in basis:
                for x in g.elements:
                    assert rj.mats[x] @ f == f @ ri.mats[x]


def test_intertwiners_on_regular_rep():
    g = cyclic_group(3)
    reg = regular_rep(g)
    # Hom(reg, reg) has dimension |G| for abelian groups
    assert len(intertwiner_basis(reg, reg)) == 3


def test_two_dim_irrep_entries_are_exact():
    g = symmetric_group(3)
    table = character_table(g)
    idx = next(i for i, d in enumerate(table.degrees) if d == 2)
    rep = irreps(g)[idx]
    # determinant of the image of a 3-cycle must be 1, of a transposition -1
    for x in g.elements:
        m = rep.mats[x]
        det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)
        assert det == (1 if g.order(x) in (1, 3) else -1)
