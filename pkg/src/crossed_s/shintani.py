"""Shintani matrices, eta normalization, twist diagonals, descent bases, and
the twisting-operator identity.

For a positive integer m, the m-th Shintani matrix has rows indexed by the
F-stable sector-(m mod N) simples, each carrying eta_L = t_L * psi_L whose
m-fold twisted composition is the identity, and columns indexed by the
sector-1 simples carrying the canonical inverse-twist iterate (no free
choice).  Row and column data combine into the same inverse-composite trace
as the crossed S-matrix; everything downstream — the T'/T factorization, the
m0 period, the descent coordinates in the fixed-class and idempotent bases,
and the Gauss-sum twisting-operator identity — is verified exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from .cyclo import Cyclo, zeta
from .linalg import Mat
from .eqcat import Bundle, tensor_mor
from .modular import Report, label_str
from .crossed import CrossedContext

__all__ = ["TwistDiagonals", "ShintaniMatrix", "ShintaniContext"]

Label = Tuple[int, int, int]


def _root_order(v: Cyclo) -> int:
    ru = v.as_root_of_unity()
    if ru is None:
        raise ArithmeticError(f"{v.render()} is not a root of unity")
    r, k = ru
    return r // gcd(r, k) if k else 1


@dataclass
class TwistDiagonals:
    """The diagonal twist data entering the three-factor decomposition.

    ``t_cols`` holds theta_(M, psi_M) for every column; ``t_prime`` holds
    theta'_L = eta_L^{-1} psi_L for every row of the m-th Shintani matrix.
    """
    m: int
    sector: int
    t_cols: Dict[str, Cyclo]
    t_prime: Dict[str, Cyclo]

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "sector": self.sector,
            "T": {k: v.render() for k, v in self.t_cols.items()},
            "T_prime": {k: v.render() for k, v in self.t_prime.items()},
        }


@dataclass
class ShintaniMatrix:
    m: int
    row_labels: List[Label]
    col_labels: List[Label]
    S: Mat
    eta_scalars: Dict[str, Cyclo]     # t_L with eta_L = t_L * psi_L
    twists: TwistDiagonals

    @property
    def rows(self) -> List[str]:
        return [label_str(l) for l in self.row_labels]

    @property
    def cols(self) -> List[str]:
        return [label_str(l) for l in self.col_labels]

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "rows": self.rows,
            "cols": self.cols,
            "Sh": [[self.S.get(r, c).render() for c in self.cols] for r in self.rows],
            "eta": {k: v.render() for k, v in self.eta_scalars.items()},
            "twists": self.twists.to_json_dict(),
        }


class ShintaniContext:
    """Shintani data on top of a crossed context's psi choices."""

    def __init__(self, cc: CrossedContext):
        self.cc = cc
        self.engine = cc.engine
        self.N = cc.N
        self._twist_mats: Dict[Label, Mat] = {}
        self._eta: Dict[int, Dict[Label, Cyclo]] = {}
        self._sh: Dict[int, ShintaniMatrix] = {}
        self._mzero: Optional[int] = None

    # -- twists ---------------------------------------------------------------

    def twist_mat(self, L: Bundle) -> Mat:
        if L.label not in self._twist_mats:
            self._twist_mats[L.label] = self.engine.twist(L)
        return self._twist_mats[L.label]

    def equivariant_twist(self, L: Bundle, psi: Optional[Mat] = None) -> Cyclo:
        """The scalar of psi^(sector) after the categorical twist of L."""
        a = L.sector()
        if psi is None:
            psi = self.cc.choose_psi(a).psi[L.label]
        comp = (psi ** a) @ self.twist_mat(L)
        s = comp.scalar_of_identity()
        if s is None:
            raise ArithmeticError(f"equivariant twist of {L.label} is not scalar")
        if s.as_root_of_unity() is None:
            raise ArithmeticError(f"equivariant twist of {L.label} is not a root of unity")
        return s

    def t_diag(self, a: int) -> Dict[str, Cyclo]:
        """Equivariant twists of the stable sector-a simples, by label string."""
        return {label_str(L.label): self.equivariant_twist(L)
                for L in self.cc.fstable_simples(a)}

    # -- eta normalization ---------------------------------------------------------

    def eta_normalize(self, m: int) -> Dict[Label, Cyclo]:
        """The scalar t_L with eta_L = t_L * psi_L, for every row of Sh_m.

        The defining condition forces t_L^m to invert the equivariant twist;
        the m choices are settled by the same leading-entry argument window
        as the psi gauge, with width 2pi/m.
        """
        if m < 1:
            raise ValueError("m must be a positive integer")
        if m in self._eta:
            return self._eta[m]
        a = m % self.N
        choice = self.cc.choose_psi(a)
        out: Dict[Label, Cyclo] = {}
        for L in self.cc.fstable_simples(a):
            theta = self.equivariant_twist(L, choice.psi[L.label])
            r, k = theta.as_root_of_unity()
            t0 = zeta(r * m, (-k) % (r * m))
            if t0 ** m != theta.inv():
                raise ArithmeticError("m-th root extraction failed")
            lead = choice.leading[L.label]
            two_pi = 2.0 * math.pi
            best_j, best_p = 0, None
            for j in range(m):
                w = zeta(m, j) * t0 * lead
                p = cmath.phase(w.embed()) % two_pi
                if p > two_pi - 1e-8:
                    p = 0.0
                if best_p is None or p < best_p:
                    best_j, best_p = j, p
            out[L.label] = zeta(m, best_j) * t0
        self._eta[m] = out
        return out

    # -- the Shintani matrix -----------------------------------------------------------

    def shintani_matrix(self, m: int) -> ShintaniMatrix:
        if m < 1:
            raise ValueError("m must be a positive integer")
        if m in self._sh:
            return self._sh[m]
        eng = self.engine
        cc = self.cc
        a = m % self.N
        rows = cc.fstable_simples(a)
        cols = eng.simples(1 % self.N)
        choice = cc.choose_psi(a)
        etas = self.eta_normalize(m)
        data = {}
        for L in rows:
            eta_inv = etas[L.label].inv() * choice.psi[L.label].inverse()
            for M in cols:
                # the column carries the m-fold inverse-twist iterate; its
                # inverse is the m-fold composite of the categorical twist
                col_mor_inv = self.twist_mat(M) ** m
                fma = eng.f_act(M, a)
                comp = eng.braiding_inv(L, M) @ eng.braiding_inv(fma, L) \
                    @ tensor_mor(eta_inv, col_mor_inv)
                data[(label_str(L.label), label_str(M.label))] = comp.trace()
        t_cols = {label_str(M.label): self.equivariant_twist(M) for M in cols}
        t_prime = {}
        for L in rows:
            tp = etas[L.label].inv()
            theta = self.equivariant_twist(L)
            if tp ** m != theta:
                raise ArithmeticError("theta-prime power does not recover the twist")
            t_prime[label_str(L.label)] = tp
        sh = ShintaniMatrix(
            m=m,
            row_labels=[L.label for L in rows],
            col_labels=[M.label for M in cols],
            S=Mat([label_str(L.label) for L in rows],
                  [label_str(M.label) for M in cols], data),
            eta_scalars={label_str(l): v for l, v in etas.items()},
            twists=TwistDiagonals(m, a, t_cols, t_prime),
        )
        self._sh[m] = sh
        return sh

    # -- the three-factor identity --------------------------------------------------------

    def verify_decomposition(self, m: int) -> Report:
        """Sh_m = T' . S(sector m) . T^m, with all diagonals roots of unity.

        A mismatch is a hard error: it would falsify the implementation, so it
        raises instead of reporting a failure.
        """
        sh = self.shintani_matrix(m)
        smat = self.cc.crossed_s_matrix(m % self.N)
        rep = Report(f"Shintani decomposition, m = {m}")
        for name, diag in (("T'", sh.twists.t_prime), ("T", sh.twists.t_cols)):
            for k, v in diag.items():
                if v.as_root_of_unity() is None:
                    raise ArithmeticError(f"{name}[{k}] is not a root of unity")
        rep.add("T and T' diagonals are roots of unity", True,
                f"{len(sh.twists.t_prime)} rows, {len(sh.twists.t_cols)} columns")
        tp = Mat.diag(sh.rows, sh.twists.t_prime)
        tm = Mat.diag(sh.cols, {k: v ** m for k, v in sh.twists.t_cols.items()})
        product = tp @ smat.S @ tm
        if product != sh.S:
            diff = product - sh.S
            bad = next(iter(diff.data))
            raise ArithmeticError(f"three-factor identity fails at {bad}")
        rep.add("Sh_m = T'.S.T^m", True, "exact")
        gdim = self.cc.global_dim
        if sh.S @ sh.S.conj_transpose() != gdim * Mat.identity(sh.rows):
            raise ArithmeticError("Shintani matrix is not unitary")
        rep.add("Sh.conj(Sh)^T = dim.I", True, "exact")
        return rep

    # -- the period ------------------------------------------------------------------------

    def m_zero(self) -> int:
        """The least positive multiple of N at which T(M, F)^m = I.

        Computed from the exact orders of the diagonal roots of unity and
        cross-checked by brute-force matrix powers.
        """
        if self._mzero is not None:
            return self._mzero
        t_cols = self.shintani_matrix(1).twists.t_cols
        out = self.N
        for v in t_cols.values():
            o = _root_order(v)
            out = out * o // gcd(out, o)
        # brute-force cross-check over multiples of N
        labels = sorted(t_cols)
        tmat = Mat.diag(labels, t_cols)
        eye = Mat.identity(labels)
        brute = None
        mm = self.N
        while brute is None:
            if tmat ** mm == eye:
                brute = mm
            else:
                mm += self.N
            if mm > 4 * out:
                raise ArithmeticError("brute-force period search exceeded the exact bound")
        if brute != out:
            raise ArithmeticError(f"period mismatch: exact {out}, brute force {brute}")
        self._mzero = out
        return out

    # -- descent ---------------------------------------------------------------------------

    def descent(self, m: int) -> Dict[str, Dict[str, Dict[Label, Cyclo]]]:
        """Row elements of Sh_m as elements of the sector-0 algebra.

        For each row L the element is returned in both coordinate systems:
        ``"class"`` over the basis classes [(C, psi_C)] and ``"idempotent"``
        over the idempotents e_M (coefficient = entry / column dimension).
        """
        sh = self.shintani_matrix(m)
        s0 = self.cc.crossed_s_matrix(0)
        gdim = self.cc.global_dim
        out: Dict[str, Dict[str, Dict[Label, Cyclo]]] = {}
        for L in sh.row_labels:
            lstr = label_str(L)
            idem = {M: sh.S.get(lstr, label_str(M))
                    * Cyclo.rational(Fraction(1, s0.col_dims[label_str(M)]))
                    for M in sh.col_labels}
            cls = {}
            for C in s0.row_labels:
                tot = Cyclo.zero()
                for M in sh.col_labels:
                    tot = tot + sh.S.get(lstr, label_str(M)) \
                        * s0.S.get(label_str(C), label_str(M)).conj()
                tot = tot * gdim.inv()
                if tot:
                    cls[C] = tot
            out[lstr] = {"class": cls, "idempotent": {k: v for k, v in idem.items() if v}}
        return out

    def descent_gram(self, m: int) -> Mat:
        """Hermitian Gram matrix of the m-th descent elements in the algebra."""
        kalg = self.cc.k_algebra(sectors=0)
        desc = self.descent(m)
        rows = list(desc)
        data = {}
        for r1 in rows:
            for r2 in rows:
                v = kalg.inner(desc[r1]["class"], desc[r2]["class"])
                if v:
                    data[(r1, r2)] = v
        return Mat(rows, rows, data)

    # -- the twisting operator and the Gauss-sum identity -------------------------------------

    def gauss_plus(self) -> Cyclo:
        """Sum of twist * dim^2 over the plain (sector-0) simples."""
        tot = Cyclo.zero()
        for L in self.engine.simples(0):
            s = self.twist_mat(L).scalar_of_identity()
            if s is None:
                raise ArithmeticError("sector-0 twist is not scalar")
            tot = tot + s * Cyclo.rational(L.dim * L.dim)
        return tot

    def twisting_operator_check(self) -> Report:
        """Sh_1 rows equal tau+ times the twist-inverted normalized idempotents.

        Also verifies the diagonal ingredient identity
        T_1 S_1 T_1 = (tau+/dim) conj(S_0)^T T_0^{-1} S_0 and the Gauss-sum
        relation between the category and the double of the extension.
        A mismatch is a hard error.
        """
        cc = self.cc
        rep = Report("twisting operator identity")
        tau = self.gauss_plus()
        gdim = cc.global_dim
        if tau * tau.conj() != gdim:
            raise ArithmeticError("tau+ . conj(tau+) differs from the global dimension")
        rep.add("tau+ . tau- = dim", True, f"tau+ = {tau.render()}")

        sh1 = self.shintani_matrix(1)
        s0 = cc.crossed_s_matrix(0)
        desc = self.descent(1)
        theta0 = {label_str(C.label): self.twist_mat(C).scalar_of_identity()
                  for C in cc.fstable_simples(0)}
        for M in sh1.row_labels:          # rows of Sh_1 are the sector-1 simples
            mstr = label_str(M)
            got = desc[mstr]["class"]
            for C in s0.row_labels:
                cstr = label_str(C)
                want = tau * gdim.inv() * s0.S.get(cstr, mstr).conj() \
                    * theta0[cstr].inv()
                if got.get(C, Cyclo.zero()) != want:
                    raise ArithmeticError(
                        f"twisting-operator identity fails at ({mstr}, {cstr})")
        rep.add("Sh_1(M) = tau+ . Theta^{-1}(e_M / dim M)", True,
                f"{len(sh1.row_labels)} columns checked")

        # diagonal ingredient identity
        a1 = 1 % self.N
        s1 = cc.crossed_s_matrix(a1)
        t1_rows = Mat.diag(s1.rows, self.t_diag(a1))
        t1_cols = Mat.diag(s1.cols, self.t_diag(a1))
        t0 = Mat.diag(s0.rows, self.t_diag(0))
        lhs = t1_rows @ s1.S @ t1_cols
        rhs = tau * gdim.inv() * (s0.S.conj_transpose() @ t0.inverse() @ s0.S)
        if lhs != rhs:
            raise ArithmeticError("diagonal ingredient identity fails")
        rep.add("T1.S1.T1 = (tau+/dim).conj(S0)^T.T0^{-1}.S0", True, "exact")

        cover_tau = cc.cover_modular_data().gauss_plus
        if cover_tau != Cyclo.rational(self.N) * tau:
            raise ArithmeticError("Gauss sum of the extension is not N times the base one")
        rep.add("tau+(extension double) = N . tau+", True,
                f"{cover_tau.render()} = {self.N} * {tau.render()}")
        return rep
