"""Exact arithmetic in cyclotomic fields.

Every scalar that appears in this package -- character values, S-matrix
entries, twists, structure constants -- lives in some Q(zeta_n).  This module
provides a small, self-contained implementation of those fields with exact
rational coefficients, so that identities like (S T)^3 = tau S^2 can be
asserted with ``==`` instead of a numeric tolerance.

Representation
--------------
A :class:`Cyclo` stores a *level* ``n`` and a sparse polynomial
``{exponent: Fraction}`` in ``zeta_n = exp(2*pi*i/n)``, kept reduced modulo
the n-th cyclotomic polynomial (so all exponents are < phi(n)).  Arithmetic
between different levels promotes both operands to the lcm level; nothing is
demoted eagerly.  Canonical questions (hashing, printing, conductor) demote
to the smallest cyclotomic field containing the value.

The rendering grammar is ``"-1/2 + 3*z8 - z8^3"``: rational terms, then
``[coeff*]z{n}[^{k}]`` monomials at the conductor level, joined by signs.
:func:`parse` reads the same grammar back.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple, Union

Rat = Union[int, Fraction]
Poly = Dict[int, Fraction]

__all__ = [
    "Cyclo",
    "zeta",
    "rational",
    "cyclotomic_polynomial",
    "parse",
]


# ---------------------------------------------------------------------------
# dense-free polynomial helpers (dict exponent -> Fraction, zeros omitted)
# ---------------------------------------------------------------------------

def _poly_trim(p: Poly) -> Poly:
    return {e: c for e, c in p.items() if c}


def _poly_degree(p: Poly) -> int:
    return max(p) if p else -1


def _poly_divmod(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    """Quotient and remainder of exact division in Q[x]."""
    num = dict(num)
    dden = _poly_degree(den)
    lead = den[dden]
    quo: Poly = {}
    while num and _poly_degree(num) >= dden:
        dnum = _poly_degree(num)
        coef = num[dnum] / lead
        quo[dnum - dden] = coef
        for e, c in den.items():
            ne = e + dnum - dden
            v = num.get(ne, Fraction(0)) - coef * c
            if v:
                num[ne] = v
            else:
                num.pop(ne, None)
    return quo, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[Tuple[int, Fraction], ...]:
    """The n-th cyclotomic polynomial as a tuple of (exponent, coefficient).

    Computed by exact division of x^n - 1 by the cyclotomic polynomials of
    the proper divisors of n; integral and monic by construction.
    """
    if n < 1:
        raise ValueError("level must be a positive integer")
    poly: Poly = {n: Fraction(1), 0: Fraction(-1)}
    for d in range(1, n):
        if n % d == 0:
            quo, rem = _poly_divmod(poly, dict(cyclotomic_polynomial(d)))
            if rem:
                raise ArithmeticError("cyclotomic division left a remainder")
            poly = quo
    return tuple(sorted(poly.items()))


@lru_cache(maxsize=None)
def _phi_degree(n: int) -> int:
    return _poly_degree(dict(cyclotomic_polynomial(n)))


@lru_cache(maxsize=None)
def _monomial_table(n: int) -> Tuple[Dict[int, Fraction], ...]:
    """x^e mod Phi_n for e in [deg Phi_n, n), indexed by e - deg."""
    phi = dict(cyclotomic_polynomial(n))
    deg = _poly_degree(phi)
    base = {e: -c for e, c in phi.items() if e < deg}
    rows = [base]
    for _ in range(deg + 1, n):
        cur: Poly = {}
        for e, c in rows[-1].items():
            ne = e + 1
            if ne < deg:
                cur[ne] = cur.get(ne, Fraction(0)) + c
            else:
                for be, bc in base.items():
                    cur[be] = cur.get(be, Fraction(0)) + c * bc
        rows.append(_poly_trim(cur))
    return tuple(rows)


def _reduce(n: int, coeffs: Poly) -> Poly:
    """Reduce exponents first mod n (zeta_n^n = 1), then mod Phi_n."""
    deg = _phi_degree(n)
    table = None
    out: Poly = {}
    for e, c in coeffs.items():
        if not c:
            continue
        e %= n
        if e < deg:
            out[e] = out.get(e, Fraction(0)) + c
        else:
            if table is None:
                table = _monomial_table(n)
            for ee, cc in table[e - deg].items():
                out[ee] = out.get(ee, Fraction(0)) + c * cc
    return _poly_trim(out)


# ---------------------------------------------------------------------------
# the field elements
# ---------------------------------------------------------------------------

class Cyclo:
    """An element of the cyclotomic field Q(zeta_level), exactly."""

    __slots__ = ("level", "coeffs", "_canon", "_hash")

    def __init__(self, level: int, coeffs: Poly, *, _reduced: bool = False):
        if level < 1:
            raise ValueError("level must be >= 1")
        self.level = level
        self.coeffs = coeffs if _reduced else _reduce(level, coeffs)
        self._canon: Optional["Cyclo"] = None
        self._hash: Optional[int] = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(q: Rat) -> "Cyclo":
        q = Fraction(q)
        return Cyclo(1, {0: q} if q else {}, _reduced=True)

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Cyclo":
        return Cyclo(n, {k % n: Fraction(1)})

    @staticmethod
    def zero() -> "Cyclo":
        return Cyclo(1, {}, _reduced=True)

    @staticmethod
    def one() -> "Cyclo":
        return Cyclo(1, {0: Fraction(1)}, _reduced=True)

    @staticmethod
    def _coerce(x: Union["Cyclo", Rat]) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo.rational(x)
        return NotImplemented  # type: ignore[return-value]

    # -- level management ---------------------------------------------------

    def promoted(self, m: int) -> "Cyclo":
        """Rewrite at level m (requires level | m)."""
        if m == self.level:
            return self
        if m % self.level:
            raise ValueError(f"cannot promote level {self.level} to {m}")
        k = m // self.level
        return Cyclo(m, {e * k: c for e, c in self.coeffs.items()})

    def _demote_to(self, m: int) -> Optional["Cyclo"]:
        """Exact rewrite in Q(zeta_m) for m | level, or None if not a member.

        Solves a small linear system over the rationals: the power basis of
        the subfield, promoted and reduced at the current level, against this
        element's coefficient vector.
        """
        n = self.level
        if n % m:
            raise ValueError("not a divisor of the level")
        if m == n:
            return self
        if not self.coeffs:
            return Cyclo(m, {}, _reduced=True)
        dm, dn = _phi_degree(m), _phi_degree(n)
        step = n // m
        cols = [_reduce(n, {i * step: Fraction(1)}) for i in range(dm)]
        # Gaussian elimination on the (dn x dm) system  cols * x = self.coeffs
        rows = sorted({e for col in cols for e in col} | set(self.coeffs))
        mat = [[col.get(e, Fraction(0)) for col in cols] + [self.coeffs.get(e, Fraction(0))]
               for e in rows]
        nrows, ncols = len(mat), dm
        rank_col = 0
        sol: Dict[int, Fraction] = {}
        pivots = []
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, nrows) if mat[i][c]), None)
            if piv is None:
                continue
            mat[r], mat[piv] = mat[piv], mat[r]
            pv = mat[r][c]
            mat[r] = [v / pv for v in mat[r]]
            for i in range(nrows):
                if i != r and mat[i][c]:
                    f = mat[i][c]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
            pivots.append(c)
            r += 1
            rank_col = c
        del rank_col
        for i in range(r, nrows):
            if mat[i][ncols]:
                return None  # inconsistent: not in the subfield
        for i, c in enumerate(pivots):
            if mat[i][ncols]:
                sol[c] = mat[i][ncols]
        return Cyclo(m, sol, _reduced=True)

    def demoted(self) -> "Cyclo":
        """This value rewritten in the smallest cyclotomic field it lives in."""
        if self._canon is not None:
            return self._canon
        if not self.coeffs:
            canon = Cyclo(1, {}, _reduced=True)
        else:
            canon = self
            for m in _divisors(self.level):
                cand = self._demote_to(m)
                if cand is not None:
                    canon = cand
                    break
        canon._canon = canon
        self._canon = canon
        return canon

    @property
    def conductor(self) -> int:
        return self.demoted().level

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = math.lcm(self.level, other.level)
        a, b = self.promoted(n), other.promoted(n)
        out = dict(a.coeffs)
        for e, c in b.coeffs.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Cyclo(n, out, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.level, {e: -c for e, c in self.coeffs.items()}, _reduced=True)

    def __sub__(self, other):
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Cyclo.zero()
        # rational fast path (very common: scaling by dimensions, 1/|G|, ...)
        if other.level == 1:
            q = other.coeffs.get(0, Fraction(0))
            return Cyclo(self.level, {e: c * q for e, c in self.coeffs.items()})
        if self.level == 1:
            q = self.coeffs.get(0, Fraction(0))
            return Cyclo(other.level, {e: c * q for e, c in other.coeffs.items()})
        n = math.lcm(self.level, other.level)
        a, b = self.promoted(n), other.promoted(n)
        out: Poly = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Cyclo(n, out)

    __rmul__ = __mul__

    def inv(self) -> "Cyclo":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        # rational
        if self.level == 1 or set(self.coeffs) == {0}:
            q = self.coeffs[0]
            return Cyclo(self.level, {0: 1 / q}, _reduced=True)
        # monomial q * zeta^e
        if len(self.coeffs) == 1:
            (e, q), = self.coeffs.items()
            return Cyclo(self.level, {(-e) % self.level: 1 / q})
        # unit-modulus fast path: z * conj(z) rational
        zz = self * self.conj()
        if zz.is_rational():
            return self.conj() * (1 / zz.as_rational())
        # general: extended Euclid against the cyclotomic polynomial
        n = self.level
        phi = dict(cyclotomic_polynomial(n))
        r0, r1 = phi, dict(self.coeffs)
        s0: Poly = {}
        s1: Poly = {0: Fraction(1)}
        while _poly_degree(r1) > 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            # s_{k+1} = s_{k-1} - q * s_k
            prod: Poly = {}
            for e1, c1 in q.items():
                for e2, c2 in s1.items():
                    prod[e1 + e2] = prod.get(e1 + e2, Fraction(0)) + c1 * c2
            s0, s1 = s1, _poly_trim({e: s0.get(e, Fraction(0)) - prod.get(e, Fraction(0))
                                     for e in set(s0) | set(prod)})
        const = r1.get(0, Fraction(0))
        if not const:
            raise ArithmeticError("element not invertible mod the cyclotomic polynomial")
        return Cyclo(n, {e: c / const for e, c in s1.items()})

    def __truediv__(self, other):
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, k: int) -> "Cyclo":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        # monomial fast path keeps Shintani power chains cheap
        if len(self.coeffs) == 1:
            (e, q), = self.coeffs.items()
            return Cyclo(self.level, {(e * k) % self.level: q ** k})
        result = Cyclo.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conj(self) -> "Cyclo":
        """Complex conjugation, i.e. the Galois map zeta -> zeta^(-1)."""
        n = self.level
        return Cyclo(n, {(-e) % n: c for e, c in self.coeffs.items()})

    def galois(self, j: int) -> "Cyclo":
        """The Galois automorphism zeta_n -> zeta_n^j (requires gcd(j, n) = 1)."""
        n = self.level
        if math.gcd(j % n, n) != 1:
            raise ValueError(f"{j} is not invertible mod {n}")
        return Cyclo(n, {(e * j) % n: c for e, c in self.coeffs.items()})

    # -- predicates & extraction ---------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def as_rational(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if set(self.coeffs) != {0}:
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def is_integral(self) -> bool:
        """True when the value is an algebraic integer.

        In the power basis of a cyclotomic field, algebraic integers are
        exactly the elements with integer coordinates.
        """
        return all(c.denominator == 1 for c in self.coeffs.values())

    def is_real(self) -> bool:
        return self == self.conj()

    def as_root_of_unity(self) -> Optional[Tuple[int, int]]:
        """Recognize the value as zeta_r^k with gcd(k, r) = 1, or None.

        The roots of unity inside Q(zeta_n) form the group of L-th roots with
        L = lcm(2, n); the candidate exponent is guessed from the numeric
        argument and then verified exactly, falling back to a full scan.
        """
        d = self.demoted()
        if not d.coeffs or not d.is_integral():
            return None
        L = math.lcm(2, d.level)
        z = d.embed()
        if abs(abs(z) - 1.0) > 1e-9:
            return None
        k = round(cmath.phase(z) * L / (2 * math.pi)) % L
        if d != Cyclo.zeta(L, k):
            for k in range(L):  # exact but slow path; rarely taken
                if d == Cyclo.zeta(L, k):
                    break
            else:
                return None
        g = math.gcd(k, L)
        return (L // g, k // g) if k else (1, 0)

    def embed(self) -> complex:
        """Numeric image under zeta_n -> exp(2*pi*i/n). For sanity checks only."""
        n = self.level
        return sum((complex(c) * cmath.exp(2j * cmath.pi * e / n)
                    for e, c in self.coeffs.items()), complex(0))

    # -- equality / hashing / rendering ---------------------------------------

    def __eq__(self, other) -> bool:
        other = Cyclo._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.level == other.level:
            return self.coeffs == other.coeffs
        n = math.lcm(self.level, other.level)
        return self.promoted(n).coeffs == other.promoted(n).coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            d = self.demoted()
            if d.is_rational():
                self._hash = hash(d.as_rational())
            else:
                self._hash = hash((d.level, tuple(sorted(d.coeffs.items()))))
        return self._hash

    def render(self) -> str:
        """Stable text form at the conductor, e.g. ``"-1/2 + z8 - 2*z8^3"``."""
        d = self.demoted()
        if not d.coeffs:
            return "0"
        sym = f"z{d.level}"
        parts = []
        for e in sorted(d.coeffs):
            c = d.coeffs[e]
            if e == 0:
                body = str(abs(c))
            else:
                mono = sym if e == 1 else f"{sym}^{e}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = body if sign == "+" else "-" + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"<{self.render()}>"

    def __str__(self) -> str:
        return self.render()


def _divisors(n: int) -> Iterator[int]:
    for d in range(1, n + 1):
        if n % d == 0:
            yield d


def zeta(n: int, k: int = 1) -> Cyclo:
    """The root of unity exp(2*pi*i*k/n)."""
    return Cyclo.zeta(n, k)


def rational(q: Rat) -> Cyclo:
    return Cyclo.rational(q)


_TERM = re.compile(
    r"""\s*(?P<sign>[+-]?)\s*
        (?:
            (?P<coef>\d+(?:/\d+)?)\s*(?:\*\s*(?P<mono1>z\d+(?:\^\d+)?))?
          | (?P<mono2>z\d+(?:\^\d+)?)
        )\s*""",
    re.VERBOSE,
)
_MONO = re.compile(r"z(?P<n>\d+)(?:\^(?P<k>\d+))?$")


def parse(text: str) -> Cyclo:
    """Parse the grammar produced by :meth:`Cyclo.render`."""
    out = Cyclo.zero()
    pos = 0
    text = text.strip()
    if not text:
        raise ValueError("empty cyclotomic literal")
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        sign_txt = m.group("sign")
        if not first and not sign_txt:
            raise ValueError(f"missing sign between terms in {text!r}")
        sign = -1 if sign_txt == "-" else 1
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        mono = m.group("mono1") or m.group("mono2")
        term = Cyclo.rational(sign * coef)
        if mono:
            mm = _MONO.match(mono)
            if not mm:
                raise ValueError(f"bad monomial {mono!r}")
            n = int(mm.group("n"))
            k = int(mm.group("k") or 1)
            term = term * Cyclo.zeta(n, k)
        out = out + term
        pos = m.end()
        first = False
    return out
