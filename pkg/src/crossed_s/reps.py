"""Exact complex representation theory of small finite groups.

Character tables are produced by the class-algebra method: the structure
constants of the class sums give a family of commuting integer matrices
whose common eigenvectors are the central characters.  A floating-point
eigensolver (numpy) only *suggests* those eigenvectors; every character
value is then recognized as an exact sum of roots of unity and the whole
table is re-verified exactly (eigenvalue relations and orthogonality), so
no numerical error can leak into downstream results.

Irreducible matrix representations are carved out of the regular
representation: project onto the isotypic component, slice it by an exact
eigenspace of an element whose spectrum in the irrep is multiplicity-free,
and take the cyclic span of a single vector.  The result is verified to be
a homomorphism with the right character before it is returned.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .cyclo import Cyclo, rational, zeta
from .groups import FiniteGroup
from .linalg import Mat

El = Hashable

__all__ = [
    "CharacterTable",
    "Rep",
    "character_table",
    "irreps",
    "regular_rep",
    "intertwiner_basis",
    "decompose_character",
]


class CharacterTable:
    """The exact character table of a finite group.

    Rows are irreducible characters (trivial first, then sorted by degree
    and rendered values); columns follow ``group.conjugacy_classes()``.
    """

    def __init__(self, group: FiniteGroup, rows: Sequence[Sequence[Cyclo]]):
        self.group = group
        self.classes = group.conjugacy_classes()
        self.reps = tuple(cl[0] for cl in self.classes)
        self.rows: Tuple[Tuple[Cyclo, ...], ...] = tuple(tuple(r) for r in rows)
        self._class_index: Dict[El, int] = {}
        for i, cl in enumerate(self.classes):
            for g in cl:
                self._class_index[g] = i

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(int(row[0].as_rational()) for row in self.rows)

    def class_index(self, g: El) -> int:
        return self._class_index[g]

    def value(self, row: int, g: El) -> Cyclo:
        return self.rows[row][self._class_index[g]]

    def inner(self, f1: Callable[[El], Cyclo], f2: Callable[[El], Cyclo]) -> Cyclo:
        tot = Cyclo.zero()
        for g in self.group.elements:
            tot = tot + f1(g) * f2(g).conj()
        return tot / len(self.group)

    def __len__(self):
        return len(self.rows)


class Rep:
    """A matrix representation with exact entries, basis labelled 0..dim-1."""

    def __init__(self, group: FiniteGroup, mats: Dict[El, Mat]):
        self.group = group
        self.mats = mats
        self.dim = len(mats[group.identity].rows)

    def __call__(self, g: El) -> Mat:
        return self.mats[g]

    def character(self, g: El) -> Cyclo:
        return self.mats[g].trace()

    def verify(self) -> None:
        g0 = self.group.identity
        if self.mats[g0].scalar_of_identity() != 1:
            raise ArithmeticError("identity does not act as the identity matrix")
        for g in self.group.elements:
            for h in self.group.elements:
                if self.mats[g] @ self.mats[h] != self.mats[self.group.mul(g, h)]:
                    raise ArithmeticError(f"not a homomorphism at ({g!r}, {h!r})")


# ---------------------------------------------------------------------------
# character tables
# ---------------------------------------------------------------------------

def _class_sum_constants(g: FiniteGroup):
    """c[i][l][j] = #{(x, y) in K_i x K_l : x*y = rep_j}."""
    classes = g.conjugacy_classes()
    reps = [cl[0] for cl in classes]
    idx = {}
    for j, cl in enumerate(classes):
        for x in cl:
            idx[x] = j
    r = len(classes)
    rep_pos = {rep: j for j, rep in enumerate(reps)}
    c = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i, ki in enumerate(classes):
        for l, kl in enumerate(classes):
            for x in ki:
                for y in kl:
                    p = g.mul(x, y)
                    if p in rep_pos:
                        c[i][l][rep_pos[p]] += 1
    return classes, reps, c


def _recognize_root_sum(target: complex, count: int, order: int) -> Optional[List[int]]:
    """Exponents k_1 <= ... <= k_count with sum of zeta_order^k_i ~ target."""
    roots = [cmath.exp(2j * cmath.pi * k / order) for k in range(order)]

    def rec(t: complex, c: int, kmin: int) -> Optional[List[int]]:
        if c == 0:
            return [] if abs(t) < 1e-7 else None
        if abs(t) > c + 1e-7:
            return None
        for k in range(kmin, order):
            rest = rec(t - roots[k], c - 1, k)
            if rest is not None:
                return [k] + rest
        return None

    return rec(target, count, 0)


def character_table(g: FiniteGroup) -> CharacterTable:
    """Compute (and cache on the group) the exact character table."""
    cached = getattr(g, "_char_table_cache", None)
    if cached is not None:
        return cached

    import numpy as np

    classes, reps, c = _class_sum_constants(g)
    r = len(classes)
    sizes = [len(cl) for cl in classes]
    orders = [g.order(rep) for rep in reps]
    mats = [np.array(ci, dtype=float) for ci in c]

    rng = np.random.default_rng(20260814)
    rows_exact: Optional[List[List[Cyclo]]] = None
    for _ in range(25):
        weights = rng.uniform(0.2, 1.0, size=r)
        m = sum(w * mi for w, mi in zip(weights, mats))
        vals, vecs = np.linalg.eig(m)
        if r > 1 and min(abs(vals[i] - vals[j])
                         for i in range(r) for j in range(i + 1, r)) < 1e-6:
            continue
        candidate: List[List[Cyclo]] = []
        ok = True
        for k in range(r):
            vec = vecs[:, k]
            # the identity-class coordinate of a central character is 1
            if abs(vec[0]) < 1e-9:
                ok = False
                break
            omega = vec / vec[0]
            denom = sum(abs(omega[j]) ** 2 / sizes[j] for j in range(r))
            dsq = len(g) / denom
            d = round(math.sqrt(dsq))
            if d < 1 or abs(d * d - dsq) > 1e-6:
                ok = False
                break
            row: List[Cyclo] = []
            for j in range(r):
                chi_num = d * omega[j] / sizes[j]
                ks = _recognize_root_sum(chi_num, d, orders[j])
                if ks is None:
                    ok = False
                    break
                val = Cyclo.zero()
                for kk in ks:
                    val = val + zeta(orders[j], kk)
                row.append(val)
            if not ok:
                break
            candidate.append(row)
        if ok and _verify_table(g, classes, reps, c, candidate):
            rows_exact = candidate
            break
    if rows_exact is None:
        raise ArithmeticError(f"character table of {g!r} did not stabilize")

    # canonical order: trivial first, then by degree and rendered values
    def is_trivial(row):
        return all(v == 1 for v in row)

    trivial = [row for row in rows_exact if is_trivial(row)]
    rest = [row for row in rows_exact if not is_trivial(row)]
    rest.sort(key=lambda row: (row[0].as_rational(), tuple(v.render() for v in row)))
    table = CharacterTable(g, trivial + rest)
    g._char_table_cache = table  # type: ignore[attr-defined]
    return table


def _verify_table(g: FiniteGroup, classes, reps, c, rows: List[List[Cyclo]]) -> bool:
    r = len(classes)
    sizes = [len(cl) for cl in classes]
    order = len(g)
    # distinct rows, degrees positive integers, sum of squares = |G|
    if len({tuple(v.render() for v in row) for row in rows}) != r:
        return False
    total = 0
    for row in rows:
        if not row[0].is_rational():
            return False
        d = row[0].as_rational()
        if d.denominator != 1 or d <= 0:
            return False
        total += int(d) ** 2
    if total != order:
        return False
    # row orthogonality
    for i, ri in enumerate(rows):
        for j, rj in enumerate(rows):
            acc = Cyclo.zero()
            for k in range(r):
                acc = acc + rational(sizes[k]) * ri[k] * rj[k].conj()
            if acc != (order if i == j else 0):
                return False
    # central-character eigenvalue relations:
    # omega_i(K_a) * omega_i(K_b) = sum_j c[a][b][j] omega_i(K_j)
    for row in rows:
        d = row[0]
        omega = [rational(sizes[k]) * row[k] / d for k in range(r)]
        for a in range(r):
            for b in range(r):
                acc = Cyclo.zero()
                for j in range(r):
                    if c[a][b][j]:
                        acc = acc + rational(c[a][b][j]) * omega[j]
                if omega[a] * omega[b] != acc:
                    return False
    return True


# ---------------------------------------------------------------------------
# irreducible matrix representations
# ---------------------------------------------------------------------------

def regular_rep(g: FiniteGroup) -> Rep:
    mats = {}
    one = Cyclo.one()
    for x in g.elements:
        mats[x] = Mat(g.elements, g.elements,
                      {(g.mul(x, h), h): one for h in g.elements})
    return Rep(g, mats)


def _eigen_multiplicities(table: CharacterTable, row: int, h: El) -> List[Fraction]:
    """Multiplicity of zeta_o^j in the spectrum of the irrep at h (o = order(h))."""
    g = table.group
    o = g.order(h)
    out = []
    for j in range(o):
        acc = Cyclo.zero()
        for t in range(o):
            acc = acc + table.value(row, g.power(h, t)) * zeta(o, (-j * t) % o)
        m = acc / o
        out.append(m.as_rational())
    return out


def irreps(g: FiniteGroup) -> List[Rep]:
    """Exact irreducible representations, in character-table row order."""
    cached = getattr(g, "_irreps_cache", None)
    if cached is not None:
        return cached
    table = character_table(g)
    out: List[Rep] = []
    for i in range(len(table)):
        d = table.degrees[i]
        if d == 1:
            mats = {x: Mat([0], [0], {(0, 0): table.value(i, x)}) for x in g.elements}
            rep = Rep(g, mats)
        else:
            rep = _extract_irrep(g, table, i)
        rep.verify()
        for x in table.reps:
            if rep.character(x) != table.value(i, x):
                raise ArithmeticError("extracted representation has the wrong character")
        out.append(rep)
    g._irreps_cache = out  # type: ignore[attr-defined]
    return out


def _extract_irrep(g: FiniteGroup, table: CharacterTable, row: int) -> Rep:
    d = table.degrees[row]
    n = len(g)
    # isotypic projector on the regular representation
    scale = Fraction(d, n)
    proj = Mat(g.elements, g.elements,
               {(x, y): table.value(row, g.mul(y, g.inv(x))).conj() * scale
                for x in g.elements for y in g.elements})
    # an element whose spectrum in this irrep is multiplicity-free
    pick: Optional[Tuple[El, int]] = None
    for h in g.elements:
        if g.order(h) == 1:
            continue
        mult = _eigen_multiplicities(table, row, h)
        if all(m <= 1 for m in mult):
            j = next(j for j, m in enumerate(mult) if m == 1)
            pick = (h, j)
            break
    if pick is None:
        raise NotImplementedError(
            "no single element has a multiplicity-free spectrum in this "
            "irreducible representation; group too entangled for the "
            "cyclic-vector extraction")
    h, j = pick
    o = g.order(h)
    lam = zeta(o, j)
    reg_h = Mat(g.elements, g.elements,
                {(g.mul(h, x), x): Cyclo.one() for x in g.elements})
    shifted = reg_h - lam * Mat.identity(g.elements)
    kernel_cols = (shifted @ proj).nullspace()
    vec: Optional[Dict[El, Cyclo]] = None
    for y in kernel_cols:
        cand: Dict[El, Cyclo] = {}
        for (r_, c_), v in proj.data.items():
            w = y.get(c_)
            if w is not None:
                s = cand.get(r_, Cyclo.zero()) + v * w
                if s:
                    cand[r_] = s
                else:
                    cand.pop(r_, None)
        if cand:
            vec = cand
            break
    if vec is None:
        raise ArithmeticError("isotypic eigenspace was unexpectedly empty")

    # cyclic span: left translates of vec
    def translate(x: El, v: Dict[El, Cyclo]) -> Dict[El, Cyclo]:
        return {g.mul(x, k): val for k, val in v.items()}

    basis: List[Dict[El, Cyclo]] = []
    basis_mat = Mat.zeros(g.elements, [])
    for x in g.elements:
        w = translate(x, vec)
        trial = Mat(g.elements, range(len(basis) + 1),
                    {**{(r_, ci): basis[ci].get(r_, Cyclo.zero())
                        for ci in range(len(basis)) for r_ in basis[ci]},
                     **{(r_, len(basis)): v for r_, v in w.items()}})
        if trial.rank() == len(basis) + 1:
            basis.append(w)
            basis_mat = trial
            if len(basis) == d:
                break
    if len(basis) != d:
        raise ArithmeticError("cyclic span has the wrong dimension")

    mats: Dict[El, Mat] = {}
    for x in g.elements:
        data = {}
        for col, w in enumerate(basis):
            img = translate(x, w)
            coords = basis_mat.solve_right(img)
            if coords is None:
                raise ArithmeticError("cyclic span is not invariant")
            for ci, v in coords.items():
                data[(ci, col)] = v
        mats[x] = Mat(range(d), range(d), data)
    return Rep(g, mats)


# ---------------------------------------------------------------------------
# hom spaces and decompositions
# ---------------------------------------------------------------------------

def intertwiner_basis(rv: Rep, rw: Rep) -> List[Mat]:
    """A basis of Hom(V, W) = {f : W(g) f = f V(g) for all g}."""
    if rv.group is not rw.group and rv.group.elements != rw.group.elements:
        raise ValueError("representations of different groups")
    g = rv.group
    vb, wb = rv.mats[g.identity].cols, rw.mats[g.identity].rows
    unknowns = [(i, j) for i in wb for j in vb]
    rows = []
    data = {}
    for x in g.elements:
        wm, vm = rw.mats[x], rv.mats[x]
        for i in wb:
            for j in vb:
                rlab = (x, i, j)
                rows.append(rlab)
                for k in wb:
                    v = wm.get(i, k)
                    if v:
                        data[(rlab, (k, j))] = data.get((rlab, (k, j)), Cyclo.zero()) + v
                for k in vb:
                    v = vm.get(k, j)
                    if v:
                        cur = data.get((rlab, (i, k)), Cyclo.zero()) - v
                        if cur:
                            data[(rlab, (i, k))] = cur
                        else:
                            data.pop((rlab, (i, k)), None)
    system = Mat(rows, unknowns, data)
    out = []
    for sol in system.nullspace():
        out.append(Mat(wb, vb, {k: v for k, v in sol.items()}))
    return out


def decompose_character(g: FiniteGroup, chi: Callable[[El], Cyclo]) -> List[int]:
    """Multiplicities of each irreducible character inside chi (table order)."""
    table = character_table(g)
    out = []
    for i in range(len(table)):
        m = table.inner(chi, lambda x, i=i: table.value(i, x))
        q = m.as_rational()
        if q.denominator != 1 or q < 0:
            raise ArithmeticError("character does not decompose integrally")
        out.append(int(q))
    return out
