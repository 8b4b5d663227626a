"""Finite groups, their automorphisms, and extensions by an automorphism.

Groups are small (everything in this package is exhaustive over group
elements), so they are stored as explicit multiplication tables over
arbitrary hashable element labels.  Determinism matters more than speed
here: conjugacy classes, centralizers and every enumeration downstream are
ordered by the position of elements in the group's construction order.

The text grammars understood by :func:`parse_group_spec` ("cyclic:6",
"dihedral:4", "sym:3", "klein", "product:cyclic:2,cyclic:3") and
:func:`parse_automorphism_spec` ("id", "inv", "pow:3", "swap", "inner:g1",
"map:0,2,3,1") are shared by the command-line interface and the tests.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

El = Hashable

__all__ = [
    "FiniteGroup",
    "Automorphism",
    "cyclic_group",
    "dihedral_group",
    "symmetric_group",
    "klein_group",
    "direct_product",
    "extension_by_automorphism",
    "parse_group_spec",
    "parse_automorphism_spec",
    "find_isomorphism",
]


class FiniteGroup:
    """A finite group given by an explicit multiplication table."""

    def __init__(self, elements: Sequence[El], mul: Callable[[El, El], El], name: str = ""):
        self.elements: Tuple[El, ...] = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate element labels")
        self.name = name
        self._index: Dict[El, int] = {g: i for i, g in enumerate(self.elements)}
        self._table: Dict[Tuple[El, El], El] = {}
        for g in self.elements:
            seen = set()
            for h in self.elements:
                p = mul(g, h)
                if p not in self._index:
                    raise ValueError(f"product {g!r}*{h!r} escapes the element set")
                self._table[(g, h)] = p
                seen.add(p)
            if len(seen) != len(self.elements):
                raise ValueError(f"row of {g!r} is not a bijection; not a group table")
        self.identity = self._find_identity()
        self._inv: Dict[El, El] = {}
        for g in self.elements:
            for h in self.elements:
                if self._table[(g, h)] == self.identity:
                    self._inv[g] = h
                    break
        self._orders: Dict[El, int] = {}
        self._classes: Optional[Tuple[Tuple[El, ...], ...]] = None

    def _find_identity(self) -> El:
        for e in self.elements:
            if all(self._table[(e, g)] == g and self._table[(g, e)] == g for g in self.elements):
                return e
        raise ValueError("no identity element found")

    # -- basic operations ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: El) -> bool:
        return g in self._index

    def index(self, g: El) -> int:
        return self._index[g]

    def mul(self, *gs: El) -> El:
        out = self.identity
        for g in gs:
            out = self._table[(out, g)]
        return out

    def inv(self, g: El) -> El:
        return self._inv[g]

    def conj(self, g: El, x: El) -> El:
        """g x g^{-1}."""
        return self.mul(g, x, self._inv[g])

    def power(self, g: El, k: int) -> El:
        if k < 0:
            return self.power(self._inv[g], -k)
        out = self.identity
        base = g
        while k:
            if k & 1:
                out = self._table[(out, base)]
            k >>= 1
            if k:
                base = self._table[(base, base)]
        return out

    def order(self, g: El) -> int:
        if g not in self._orders:
            k, x = 1, g
            while x != self.identity:
                x = self._table[(x, g)]
                k += 1
            self._orders[g] = k
        return self._orders[g]

    def exponent(self) -> int:
        import math
        out = 1
        for g in self.elements:
            out = math.lcm(out, self.order(g))
        return out

    def is_abelian(self) -> bool:
        return all(self._table[(g, h)] == self._table[(h, g)]
                   for g, h in itertools.combinations(self.elements, 2))

    # -- conjugation structure --------------------------------------------------

    def conjugacy_classes(self) -> Tuple[Tuple[El, ...], ...]:
        """Classes as tuples in element order; classes sorted by
        (order of elements, first element position).  The identity class
        always comes first."""
        if self._classes is None:
            seen = set()
            classes = []
            for g in self.elements:
                if g in seen:
                    continue
                orbit = {self.conj(h, g) for h in self.elements}
                seen |= orbit
                classes.append(tuple(sorted(orbit, key=self._index.__getitem__)))
            classes.sort(key=lambda cl: (self.order(cl[0]) != 1,
                                         self.order(cl[0]),
                                         self._index[cl[0]]))
            self._classes = tuple(classes)
        return self._classes

    def class_of(self, g: El) -> Tuple[El, ...]:
        for cl in self.conjugacy_classes():
            if g in cl:
                return cl
        raise KeyError(g)

    def class_transversal(self, rep: El) -> Dict[El, El]:
        """For each u conjugate to rep, some t with u = t * rep * t^{-1}."""
        out = {}
        for t in self.elements:
            u = self.conj(t, rep)
            out.setdefault(u, t)
        return out

    def centralizer(self, g: El) -> "FiniteGroup":
        members = [h for h in self.elements if self._table[(h, g)] == self._table[(g, h)]]
        return self.subgroup(members, name=f"C({g!r})")

    def center(self) -> "FiniteGroup":
        members = [h for h in self.elements
                   if all(self._table[(h, g)] == self._table[(g, h)] for g in self.elements)]
        return self.subgroup(members, name="Z")

    def subgroup(self, members: Sequence[El], name: str = "") -> "FiniteGroup":
        mset = set(members)
        for g in members:
            for h in members:
                if self._table[(g, h)] not in mset:
                    raise ValueError("subset is not closed under multiplication")
        ordered = [g for g in self.elements if g in mset]
        return FiniteGroup(ordered, lambda g, h: self._table[(g, h)],
                           name=name or f"{self.name}-sub")

    def generated_subgroup(self, gens: Sequence[El]) -> "FiniteGroup":
        members = {self.identity}
        frontier = list(gens)
        while frontier:
            x = frontier.pop()
            if x in members:
                continue
            members.add(x)
            for g in list(members):
                for y in (self._table[(x, g)], self._table[(g, x)]):
                    if y not in members:
                        frontier.append(y)
        return self.subgroup([g for g in self.elements if g in members])

    def order_profile(self) -> Tuple[Tuple[int, int], ...]:
        """Multiset of element orders, as sorted (order, count) pairs."""
        counts: Dict[int, int] = {}
        for g in self.elements:
            counts[self.order(g)] = counts.get(self.order(g), 0) + 1
        return tuple(sorted(counts.items()))

    def __repr__(self):
        return f"<group {self.name or 'G'} of order {len(self)}>"


class Automorphism:
    """A group automorphism, with its order and integer powers."""

    def __init__(self, group: FiniteGroup, images: Dict[El, El], name: str = ""):
        self.group = group
        self.images = dict(images)
        self.name = name
        if set(self.images) != set(group.elements) or \
           set(self.images.values()) != set(group.elements):
            raise ValueError("images do not define a bijection of the group")
        for g in group.elements:
            for h in group.elements:
                if self.images[group.mul(g, h)] != group.mul(self.images[g], self.images[h]):
                    raise ValueError(f"not a homomorphism at ({g!r}, {h!r})")
        self.order = self._order()

    def _order(self) -> int:
        k, cur = 1, self.images
        ident = {g: g for g in self.group.elements}
        while cur != ident:
            cur = {g: self.images[x] for g, x in cur.items()}
            k += 1
        return k

    def __call__(self, g: El) -> El:
        return self.images[g]

    def power(self, k: int) -> "Automorphism":
        k %= self.order
        images = {g: g for g in self.group.elements}
        for _ in range(k):
            images = {g: self.images[x] for g, x in images.items()}
        out = Automorphism.__new__(Automorphism)
        out.group = self.group
        out.images = images
        out.name = f"{self.name}^{k}" if self.name else ""
        out.order = self.order // __import__("math").gcd(self.order, k) if k else 1
        return out

    def apply_power(self, k: int, g: El) -> El:
        """F^k(g) for any integer k (negative powers via the order)."""
        k %= self.order
        for _ in range(k):
            g = self.images[g]
        return g

    def is_identity(self) -> bool:
        return all(g == x for g, x in self.images.items())

    def __repr__(self):
        return f"<automorphism {self.name or '?'} of order {self.order}>"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(range(n), lambda a, b: (a + b) % n, name=f"cyclic:{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Order 2n: elements (r, s) with r mod n a rotation, s = 1 a reflection."""
    elements = [(r, s) for s in (0, 1) for r in range(n)]

    def mul(a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (r2 if s1 == 0 else -r2)) % n, (s1 + s2) % 2)

    return FiniteGroup(elements, mul, name=f"dihedral:{n}")


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of {0..n-1} as image tuples, in lexicographic order."""
    elements = sorted(itertools.permutations(range(n)))

    def mul(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(n))

    return FiniteGroup(elements, mul, name=f"sym:{n}")


def alternating_group(n: int) -> FiniteGroup:
    def sign(p):
        s = 1
        for i, j in itertools.combinations(range(len(p)), 2):
            if p[i] > p[j]:
                s = -s
        return s
    elements = [p for p in sorted(itertools.permutations(range(n))) if sign(p) == 1]

    def mul(p, q):
        return tuple(p[q[i]] for i in range(n))

    return FiniteGroup(elements, mul, name=f"alt:{n}")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    elements = list(itertools.product(*[f.elements for f in factors]))

    def mul(a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(factors, a, b))

    return FiniteGroup(elements, mul, name="x".join(f.name or "G" for f in factors))


def klein_group() -> FiniteGroup:
    g = direct_product(cyclic_group(2), cyclic_group(2))
    g.name = "klein"
    return g


def extension_by_automorphism(aut: Automorphism) -> FiniteGroup:
    """The semidirect extension of the base group by the cyclic group the
    automorphism generates: elements (s, a) with a counted mod the
    automorphism's order, and (s, a)(t, b) = (s * F^a(t), a + b)."""
    base = aut.group
    n = aut.order
    elements = [(s, a) for a in range(n) for s in base.elements]

    def mul(x, y):
        s, a = x
        t, b = y
        return (base.mul(s, aut.apply_power(a, t)), (a + b) % n)

    return FiniteGroup(elements, mul, name=f"{base.name}:<{aut.name or 'F'}>")


# ---------------------------------------------------------------------------
# automorphism constructors
# ---------------------------------------------------------------------------

def identity_automorphism(g: FiniteGroup) -> Automorphism:
    return Automorphism(g, {x: x for x in g.elements}, name="id")


def inversion_automorphism(g: FiniteGroup) -> Automorphism:
    if not g.is_abelian():
        raise ValueError("inversion is only an automorphism of abelian groups")
    return Automorphism(g, {x: g.inv(x) for x in g.elements}, name="inv")


def power_automorphism(g: FiniteGroup, k: int) -> Automorphism:
    if not g.is_abelian():
        raise ValueError("power maps are only homomorphisms on abelian groups")
    return Automorphism(g, {x: g.power(x, k) for x in g.elements}, name=f"pow:{k}")


def inner_automorphism(g: FiniteGroup, h: El) -> Automorphism:
    return Automorphism(g, {x: g.conj(h, x) for x in g.elements},
                        name=f"inner:g{g.index(h)}")


def swap_automorphism(g: FiniteGroup) -> Automorphism:
    """For groups whose elements are pairs (a, b): the factor swap."""
    images = {}
    for x in g.elements:
        if not (isinstance(x, tuple) and len(x) == 2):
            raise ValueError("swap needs a two-factor product group")
        images[x] = (x[1], x[0])
    return Automorphism(g, images, name="swap")


def index_map_automorphism(g: FiniteGroup, indices: Sequence[int]) -> Automorphism:
    if len(indices) != len(g):
        raise ValueError("need exactly one image index per element")
    images = {g.elements[i]: g.elements[j] for i, j in enumerate(indices)}
    return Automorphism(g, images, name="map:" + ",".join(map(str, indices)))


# ---------------------------------------------------------------------------
# text grammars
# ---------------------------------------------------------------------------

def parse_group_spec(spec: str) -> FiniteGroup:
    spec = spec.strip()
    if spec == "klein":
        return klein_group()
    if spec.startswith("product:"):
        parts = spec[len("product:"):].split(",")
        return direct_product(*[parse_group_spec(p) for p in parts])
    head, _, arg = spec.partition(":")
    builders = {
        "cyclic": cyclic_group,
        "dihedral": dihedral_group,
        "sym": symmetric_group,
        "alt": alternating_group,
    }
    if head in builders:
        if not arg.isdigit():
            raise ValueError(f"group spec {spec!r} needs a numeric parameter")
        return builders[head](int(arg))
    raise ValueError(f"unknown group spec {spec!r}")


def parse_automorphism_spec(group: FiniteGroup, spec: str) -> Automorphism:
    spec = spec.strip()
    if spec in ("id", "identity"):
        return identity_automorphism(group)
    if spec == "inv":
        return inversion_automorphism(group)
    if spec == "swap":
        return swap_automorphism(group)
    head, _, arg = spec.partition(":")
    if head == "pow":
        return power_automorphism(group, int(arg))
    if head == "inner":
        if not arg.startswith("g"):
            raise ValueError("inner automorphisms are written inner:g<index>")
        return inner_automorphism(group, group.elements[int(arg[1:])])
    if head in ("map", "images"):
        arg = arg.strip()
        if arg.startswith("[") and arg.endswith("]"):
            arg = arg[1:-1]
        return index_map_automorphism(group, [int(t) for t in arg.split(",")])
    raise ValueError(f"unknown automorphism spec {spec!r}")


# ---------------------------------------------------------------------------
# isomorphism testing (small orders only; used by tests and sanity checks)
# ---------------------------------------------------------------------------

def _generating_sequence(g: FiniteGroup) -> List[El]:
    gens: List[El] = []
    span = {g.identity}
    for x in sorted(g.elements, key=lambda e: (-g.order(e), g.index(e))):
        if x in span:
            continue
        gens.append(x)
        span = set(g.generated_subgroup(gens).elements)
        if len(span) == len(g):
            break
    return gens


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> Optional[Dict[El, El]]:
    """Backtracking search for a group isomorphism; None when none exists."""
    if len(g) != len(h) or g.order_profile() != h.order_profile():
        return None
    gens = _generating_sequence(g)
    # all words in the generators, as index sequences, producing each element
    words: Dict[El, Tuple[int, ...]] = {g.identity: ()}
    frontier = [g.identity]
    while frontier:
        x = frontier.pop(0)
        for i, s in enumerate(gens):
            y = g.mul(x, s)
            if y not in words:
                words[y] = words[x] + (i,)
                frontier.append(y)

    by_order: Dict[int, List[El]] = {}
    for e in h.elements:
        by_order.setdefault(h.order(e), []).append(e)

    def evaluate(word: Tuple[int, ...], images: List[El]) -> El:
        out = h.identity
        for i in word:
            out = h.mul(out, images[i])
        return out

    def extend(images: List[El]) -> Optional[Dict[El, El]]:
        if len(images) == len(gens):
            iso = {x: evaluate(w, images) for x, w in words.items()}
            if len(set(iso.values())) != len(g):
                return None
            for a in g.elements:
                for b in g.elements:
                    if iso[g.mul(a, b)] != h.mul(iso[a], iso[b]):
                        return None
            return iso
        k = len(images)
        for cand in by_order.get(g.order(gens[k]), []):
            if cand in images:
                continue
            out = extend(images + [cand])
            if out is not None:
                return out
        return None

    return extend([])
