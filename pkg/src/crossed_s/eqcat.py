"""Equivariant bundles over an extended finite group, with a graded braiding.

The engine behind every matrix this package produces.  Fix a finite group
``gamma`` and an automorphism ``F`` of order ``N``.  Objects are finite-rank
``gamma``-equivariant vector bundles on the extension ``gamma_t = gamma : <F>``
(elements ``(t, m)``), where ``gamma`` acts by conjugation inside the
extension; the second coordinate ``m`` splits every bundle into sectors.
Morphisms are exact sparse matrices indexed by *keys*.

The model is deliberately strict:

* a key is a tuple of atoms ``(uid, point, fibre index, star)``; tensor
  products concatenate keys, so ``(V . W) . U`` and ``V . (W . U)`` are the
  same bundle on the nose, and the unit (the empty key) is strictly neutral;
* duals reverse a key and star/invert each atom, so ``V**`` *is* ``V`` and the
  pivotal structure is the identity;
* the relabelling ``f_act(V, b)`` keeps the keys and composes the stalk map
  with ``(t, m) -> (F^b t, m)``, so it acts as the identity on morphism
  matrices and is strictly monoidal and ``N``-periodic.

The braiding moves a key of grading ``(s, a)`` past a bundle ``W`` by letting
``F^-a(s)`` act on ``W``; it lands in ``f_act(W, a) . V``.  The twist is the
usual ribbon composite built from the braiding and the exact duals.  Simple
bundles in sector ``a`` are induced from irreducible representations of
twisted stabilizers, enumerated deterministically: orbits by minimal element
index, irreducibles by character-table row order.
"""

from __future__ import annotations

import itertools
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .cyclo import Cyclo
from .linalg import Mat
from .groups import (Automorphism, FiniteGroup, extension_by_automorphism,
                     identity_automorphism)
from .reps import Rep, irreps

__all__ = ["Bundle", "CrossedCenter", "tensor_mor"]

Point = Tuple[Hashable, int]          # an element (t, m) of the extension
Atom = Tuple[int, Point, int, bool]   # (uid, point, fibre index, star)
Key = Tuple[Atom, ...]


def tensor_mor(f: Mat, g: Mat) -> Mat:
    """Tensor product of morphism matrices: keys concatenate, entries multiply."""
    rows = [r1 + r2 for r1 in f.rows for r2 in g.rows]
    cols = [c1 + c2 for c1 in f.cols for c2 in g.cols]
    data = {}
    for (r1, c1), a in f.data.items():
        for (r2, c2), b in g.data.items():
            data[(r1 + r2, c1 + c2)] = a * b
    return Mat(rows, cols, data)


class Bundle:
    """An equivariant bundle: keys, their stalk points, and the group action."""

    __slots__ = ("ctx", "keys", "stalk", "act", "label")

    def __init__(self, ctx: "CrossedCenter", keys: Sequence[Key],
                 stalk: Dict[Key, Point], act: Dict[Hashable, Mat],
                 label: Optional[Tuple[int, int, int]] = None):
        self.ctx = ctx
        self.keys: Tuple[Key, ...] = tuple(keys)
        self.stalk = dict(stalk)
        self.act = act
        self.label = label

    @property
    def dim(self) -> int:
        return len(self.keys)

    def sectors(self) -> List[int]:
        return sorted({x[1] for x in self.stalk.values()})

    def sector(self) -> int:
        secs = self.sectors()
        if len(secs) != 1:
            raise ValueError("bundle is supported on more than one sector")
        return secs[0]

    def identity(self) -> Mat:
        return Mat.identity(self.keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bundle):
            return NotImplemented
        return (self.ctx is other.ctx
                and set(self.keys) == set(other.keys)
                and self.stalk == other.stalk
                and all(self.act[g].data == other.act[g].data
                        for g in self.ctx.group.elements))

    __hash__ = None  # bundles compare structurally; do not use them as dict keys

    def __repr__(self) -> str:
        lab = f" {self.label}" if self.label is not None else ""
        return f"<Bundle{lab} dim={self.dim} sectors={self.sectors()}>"


class CrossedCenter:
    """All bundle-level operations for a group with a finite-order automorphism.

    ``simples(a)`` enumerates the simple bundles of sector ``a``; ``tensor``,
    ``dual``, ``braiding``, ``twist`` and ``f_act`` realize the graded monoidal
    structure; ``hom_basis`` solves for bundle maps exactly.
    """

    def __init__(self, group: FiniteGroup, aut: Optional[Automorphism] = None):
        if aut is None:
            aut = identity_automorphism(group)
        if aut.group is not group:
            raise ValueError("the automorphism must act on the given group")
        self.group = group
        self.aut = aut
        self.N = aut.order
        self.cover = extension_by_automorphism(aut)
        self._uid = itertools.count(1)
        # caches are keyed by object identity and hold strong references,
        # so construction paths reuse the exact same instances (and key order)
        self._tensor_cache: Dict[Tuple[int, int], Tuple[Bundle, Bundle, Bundle]] = {}
        self._dual_cache: Dict[int, Tuple[Bundle, Bundle]] = {}
        self._fact_cache: Dict[Tuple[int, int], Tuple[Bundle, Bundle]] = {}
        self._simples: Dict[int, List[Bundle]] = {}
        self._gens: Optional[List[Hashable]] = None
        e = (group.identity, 0)
        unit_keys: List[Key] = [()]
        self._unit = Bundle(self, unit_keys, {(): e},
                            {g: Mat.identity(unit_keys) for g in group.elements},
                            label=(0, 0, 0))

    # -- the extension and its points -------------------------------------------

    @property
    def unit(self) -> Bundle:
        return self._unit

    def point_shift(self, b: int, x: Point) -> Point:
        """The automorphism of the extension fixing each sector: (t,m) -> (F^b t, m)."""
        return (self.aut.apply_power(b, x[0]), x[1])

    def point_conj(self, g: Hashable, x: Point) -> Point:
        """Conjugation of an extension point by a base-group element."""
        lg = (g, 0)
        return self.cover.mul(lg, x, self.cover.inv(lg))

    def dual_key(self, key: Key) -> Key:
        inv = self.cover.inv
        return tuple((uid, inv(x), i, not star) for (uid, x, i, star) in reversed(key))

    # -- objects -----------------------------------------------------------------

    def tensor(self, v: Bundle, w: Bundle) -> Bundle:
        if v is self._unit:
            return w
        if w is self._unit:
            return v
        ck = (id(v), id(w))
        hit = self._tensor_cache.get(ck)
        if hit is not None:
            return hit[2]
        keys = [kv + kw for kv in v.keys for kw in w.keys]
        stalk = {kv + kw: self.cover.mul(v.stalk[kv], w.stalk[kw])
                 for kv in v.keys for kw in w.keys}
        act: Dict[Hashable, Mat] = {}
        for g in self.group.elements:
            av, aw = v.act[g], w.act[g]
            data = {}
            for (rv, cv), a in av.data.items():
                for (rw, cw), b in aw.data.items():
                    data[(rv + rw, cv + cw)] = a * b
            act[g] = Mat(keys, keys, data)
        out = Bundle(self, keys, stalk, act)
        self._tensor_cache[ck] = (v, w, out)
        return out

    def dual(self, v: Bundle) -> Bundle:
        if v is self._unit:
            return v
        hit = self._dual_cache.get(id(v))
        if hit is not None:
            return hit[1]
        keys = [self.dual_key(k) for k in v.keys]
        stalk = {self.dual_key(k): self.cover.inv(x) for k, x in v.stalk.items()}
        act: Dict[Hashable, Mat] = {}
        for g in self.group.elements:
            a = v.act[self.group.inv(g)]
            act[g] = Mat(keys, keys, {(self.dual_key(c), self.dual_key(r)): val
                                      for (r, c), val in a.data.items()})
        out = Bundle(self, keys, stalk, act)
        self._dual_cache[id(v)] = (v, out)
        self._dual_cache[id(out)] = (out, v)
        return out

    def f_act(self, v: Bundle, b: int) -> Bundle:
        """Relabel a bundle along F^b: same keys, shifted stalks, precomposed action."""
        b %= self.N
        if b == 0 or v is self._unit:
            return v
        ck = (id(v), b)
        hit = self._fact_cache.get(ck)
        if hit is not None:
            return hit[1]
        stalk = {k: self.point_shift(b, x) for k, x in v.stalk.items()}
        act = {g: v.act[self.aut.apply_power(-b, g)] for g in self.group.elements}
        out = Bundle(self, v.keys, stalk, act, label=v.label)
        self._fact_cache[ck] = (v, out)
        return out

    # -- rigid structure -----------------------------------------------------------

    def ev(self, v: Bundle) -> Mat:
        """Evaluation V* . V -> 1 (the strict duality pairing of keys)."""
        src = self.tensor(self.dual(v), v)
        one = Cyclo.one()
        data = {((), self.dual_key(k) + k): one for k in v.keys}
        return Mat(self._unit.keys, src.keys, data)

    def coev(self, v: Bundle) -> Mat:
        """Coevaluation 1 -> V . V*."""
        tgt = self.tensor(v, self.dual(v))
        one = Cyclo.one()
        data = {(k + self.dual_key(k), ()): one for k in v.keys}
        return Mat(tgt.keys, self._unit.keys, data)

    def dual_mor(self, f: Mat) -> Mat:
        """The dual of a morphism: transpose under the dual relabelling of keys."""
        rows = [self.dual_key(c) for c in f.cols]
        cols = [self.dual_key(r) for r in f.rows]
        return Mat(rows, cols, {(self.dual_key(c), self.dual_key(r)): val
                                for (r, c), val in f.data.items()})

    # -- braiding and twist ----------------------------------------------------------

    def braiding(self, v: Bundle, w: Bundle) -> Mat:
        """The graded braiding V . W -> f_act(W, a) . V for homogeneous V.

        A key of V with stalk (s, a) crosses W by acting with F^-a(s); this is
        the unique transport making the result a bundle map.
        """
        a = v.sector()
        rows = self.tensor(self.f_act(w, a), v).keys
        cols = self.tensor(v, w).keys
        data = {}
        for kv in v.keys:
            s = v.stalk[kv][0]
            g = self.aut.apply_power(-a, s)
            for (rw, cw), val in w.act[g].data.items():
                data[(rw + kv, kv + cw)] = val
        return Mat(rows, cols, data)

    def braiding_inv(self, v: Bundle, w: Bundle) -> Mat:
        """The inverse braiding f_act(W, a) . V -> V . W, built directly."""
        a = v.sector()
        rows = self.tensor(v, w).keys
        cols = self.tensor(self.f_act(w, a), v).keys
        data = {}
        for kv in v.keys:
            s = v.stalk[kv][0]
            g = self.group.inv(self.aut.apply_power(-a, s))
            for (rw, cw), val in w.act[g].data.items():
                data[(kv + rw, cw + kv)] = val
        return Mat(rows, cols, data)

    def twist(self, v: Bundle) -> Mat:
        """The ribbon twist V -> f_act(V, a) of a homogeneous bundle.

        Composite of coevaluation, the self-braiding, and evaluation of the
        dual; the pivotal identification V** = V is the identity here.
        """
        vd = self.dual(v)
        idv = Mat.identity(v.keys)
        step1 = tensor_mor(idv, self.coev(v))                       # V -> V.V.V*
        step2 = tensor_mor(self.braiding(v, v), Mat.identity(vd.keys))
        step3 = tensor_mor(idv, self.ev(vd))                        # .. -> f_act(V,a)
        return step3 @ step2 @ step1

    def spherical_trace(self, f: Mat) -> Cyclo:
        """Trace of an endomorphism; equals both closures by ev/coev."""
        return f.trace()

    # -- simple bundles ------------------------------------------------------------

    def twisted_orbits(self, a: int) -> List[Tuple[Point, ...]]:
        """Orbits of the base group on sector-a points, ordered and listed by element index."""
        a %= self.N
        index = {g: i for i, g in enumerate(self.group.elements)}
        seen = set()
        orbits: List[Tuple[Point, ...]] = []
        for t in self.group.elements:
            x = (t, a)
            if x in seen:
                continue
            orbit = {self.point_conj(g, x) for g in self.group.elements}
            seen |= orbit
            orbits.append(tuple(sorted(orbit, key=lambda p: index[p[0]])))
        return orbits

    def twisted_stabilizer(self, x: Point) -> FiniteGroup:
        members = [g for g in self.group.elements if self.point_conj(g, x) == x]
        return self.group.subgroup(members, name=f"stab({x[0]},{x[1]})")

    def orbit_transversal(self, orbit: Sequence[Point]) -> Dict[Point, Hashable]:
        """For each point, the first group element carrying the orbit's base point to it."""
        rep = orbit[0]
        out = {}
        for x in orbit:
            out[x] = next(g for g in self.group.elements
                          if self.point_conj(g, rep) == x)
        return out

    def induced_bundle(self, orbit: Sequence[Point], stab: FiniteGroup,
                       rho: Rep, label=None) -> Bundle:
        """The bundle induced from an irreducible action of a twisted stabilizer."""
        trans = self.orbit_transversal(orbit)
        uid = next(self._uid)
        d = rho.dim
        keys: List[Key] = [((uid, x, i, False),) for x in orbit for i in range(d)]
        stalk = {((uid, x, i, False),): x for x in orbit for i in range(d)}
        act: Dict[Hashable, Mat] = {}
        for g in self.group.elements:
            data = {}
            for x in orbit:
                y = self.point_conj(g, x)
                h = self.group.mul(self.group.inv(trans[y]), g, trans[x])
                for (i2, i1), val in rho(h).data.items():
                    data[(((uid, y, i2, False),), ((uid, x, i1, False),))] = val
            act[g] = Mat(keys, keys, data)
        return Bundle(self, keys, stalk, act, label=label)

    def simples(self, a: int) -> List[Bundle]:
        """The simple bundles of sector ``a``, in the canonical order.

        Sectors ascending elsewhere; within a sector: orbits by minimal element
        index, then irreducibles of the twisted stabilizer in character-table
        row order.  The first sector-0 simple is the strict unit itself.
        """
        a %= self.N
        if a in self._simples:
            return self._simples[a]
        out: List[Bundle] = []
        for oi, orbit in enumerate(self.twisted_orbits(a)):
            stab = self.twisted_stabilizer(orbit[0])
            for ri, rho in enumerate(irreps(stab)):
                if a == 0 and oi == 0 and ri == 0:
                    out.append(self._unit)
                else:
                    out.append(self.induced_bundle(orbit, stab, rho, label=(a, oi, ri)))
        self._simples[a] = out
        return out

    # -- morphism spaces ------------------------------------------------------------

    def generators(self) -> List[Hashable]:
        """A small generating set of the base group (greedy, deterministic)."""
        if self._gens is None:
            gens: List[Hashable] = []
            have = {self.group.identity}
            for g in self.group.elements:
                if g not in have:
                    gens.append(g)
                    have = set(self.group.generated_subgroup(gens).elements)
                    if len(have) == len(self.group):
                        break
            self._gens = gens
        return self._gens

    def is_morphism(self, v: Bundle, w: Bundle, f: Mat) -> bool:
        """True when f is a graded, equivariant bundle map V -> W."""
        if f.rows != w.keys or f.cols != v.keys:
            return False
        for (r, c), _ in f.data.items():
            if w.stalk[r] != v.stalk[c]:
                return False
        return all(w.act[g] @ f == f @ v.act[g] for g in self.generators())

    def hom_basis(self, v: Bundle, w: Bundle) -> List[Mat]:
        """An exact basis of the space of bundle maps V -> W."""
        pairs = [(kw, kv) for kw in w.keys for kv in v.keys
                 if w.stalk[kw] == v.stalk[kv]]
        if not pairs:
            return []
        pair_set = set(pairs)
        eqs: Dict[Tuple, Dict[Tuple[Key, Key], Cyclo]] = {}

        def add(rl, pair, val):
            row = eqs.setdefault(rl, {})
            s = row.get(pair, Cyclo.zero()) + val
            if s:
                row[pair] = s
            else:
                row.pop(pair, None)

        for gi, g in enumerate(self.generators()):
            aw, av = w.act[g], v.act[g]
            for (r, kw), val in aw.data.items():
                for kv in v.keys:
                    if (kw, kv) in pair_set:
                        add((gi, r, kv), (kw, kv), val)
            for (kv, c), val in av.data.items():
                for kw in w.keys:
                    if (kw, kv) in pair_set:
                        add((gi, kw, c), (kw, kv), -val)
        system = Mat(list(eqs.keys()), pairs,
                     {(rl, p): val for rl, row in eqs.items() for p, val in row.items()})
        return [Mat(w.keys, v.keys, dict(vec)) for vec in system.nullspace()]

    def find_iso(self, v: Bundle, w: Bundle) -> Optional[Mat]:
        """Some isomorphism V -> W, or None."""
        if v.dim != w.dim or v.ctx is not w.ctx:
            return None
        basis = self.hom_basis(v, w)
        for f in basis:
            if f.rank() == v.dim:
                return f
        if len(basis) > 1:
            # small integer combinations; enough far beyond the simple/isotypic cases
            for coeffs in itertools.islice(
                    itertools.product(range(3), repeat=len(basis)), 1, 729):
                f = Mat.zeros(w.keys, v.keys)
                for c, b in zip(coeffs, basis):
                    if c:
                        f = f + c * b
                if f.rank() == v.dim:
                    return f
        return None

    def decompose(self, v: Bundle) -> List[Tuple[Tuple[int, int, int], int]]:
        """Simple constituents of v with multiplicities, as (label, mult) pairs."""
        out = []
        for a in v.sectors():
            for s in self.simples(a):
                m = len(self.hom_basis(s, v))
                if m:
                    out.append((s.label, m))
        return out
