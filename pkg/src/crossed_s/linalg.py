"""Sparse exact matrices over the cyclotomic kernel.

Rows and columns are indexed by arbitrary hashable labels (simple-object
labels, basis keys, group elements, ...), so the same class serves both the
small dense S/T-matrices and the very sparse blocks of categorical morphisms.
Only nonzero entries are stored; all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from .cyclo import Cyclo

Label = Hashable
Scalar = Union[Cyclo, int, Fraction]

__all__ = ["Mat", "trace_product"]


def _c(x: Scalar) -> Cyclo:
    return x if isinstance(x, Cyclo) else Cyclo.rational(x)


class Mat:
    """An exact matrix with labelled rows and columns."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: Sequence[Label], cols: Sequence[Label],
                 data: Optional[Dict[Tuple[Label, Label], Scalar]] = None):
        self.rows: Tuple[Label, ...] = tuple(rows)
        self.cols: Tuple[Label, ...] = tuple(cols)
        self.data: Dict[Tuple[Label, Label], Cyclo] = {}
        if data:
            rset, cset = set(self.rows), set(self.cols)
            for (r, c), v in data.items():
                v = _c(v)
                if v:
                    if r not in rset or c not in cset:
                        raise KeyError(f"entry {(r, c)} outside the index sets")
                    self.data[(r, c)] = v

    # -- constructors --------------------------------------------------------

    @staticmethod
    def identity(labels: Sequence[Label]) -> "Mat":
        one = Cyclo.one()
        return Mat(labels, labels, {(l, l): one for l in labels})

    @staticmethod
    def zeros(rows: Sequence[Label], cols: Sequence[Label]) -> "Mat":
        return Mat(rows, cols)

    @staticmethod
    def diag(labels: Sequence[Label], values: Union[Dict[Label, Scalar], Sequence[Scalar]]) -> "Mat":
        if not isinstance(values, dict):
            values = dict(zip(labels, values))
        return Mat(labels, labels, {(l, l): v for l, v in values.items()})

    @staticmethod
    def from_rows(rows: Sequence[Label], cols: Sequence[Label],
                  table: Sequence[Sequence[Scalar]]) -> "Mat":
        data = {}
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                data[(r, c)] = table[i][j]
        return Mat(rows, cols, data)

    # -- access ----------------------------------------------------------------

    def get(self, r: Label, c: Label) -> Cyclo:
        return self.data.get((r, c), Cyclo.zero())

    def entries(self) -> Iterable[Tuple[Label, Label, Cyclo]]:
        for (r, c), v in self.data.items():
            yield r, c, v

    def dense(self) -> List[List[Cyclo]]:
        return [[self.get(r, c) for c in self.cols] for r in self.rows]

    def column(self, c: Label) -> Dict[Label, Cyclo]:
        return {r: v for (r, cc), v in self.data.items() if cc == c}

    def row(self, r: Label) -> Dict[Label, Cyclo]:
        return {c: v for (rr, c), v in self.data.items() if rr == r}

    def restrict(self, rows: Sequence[Label], cols: Sequence[Label]) -> "Mat":
        rset, cset = set(rows), set(cols)
        return Mat(rows, cols, {(r, c): v for (r, c), v in self.data.items()
                                if r in rset and c in cset})

    def relabel(self, row_map: Callable[[Label], Label],
                col_map: Callable[[Label], Label]) -> "Mat":
        return Mat([row_map(r) for r in self.rows],
                   [col_map(c) for c in self.cols],
                   {(row_map(r), col_map(c)): v for (r, c), v in self.data.items()})

    # -- ring structure ---------------------------------------------------------

    def _check_same_shape(self, other: "Mat"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("matrix shapes/labels do not match")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same_shape(other)
        out = dict(self.data)
        for k, v in other.data.items():
            w = out.get(k)
            s = v if w is None else w + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Mat(self.rows, self.cols, out)

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, {k: -v for k, v in self.data.items()})

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "Mat":
        s = _c(scalar)
        return Mat(self.rows, self.cols, {k: v * s for k, v in self.data.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("inner labels do not match")
        by_row: Dict[Label, List[Tuple[Label, Cyclo]]] = {}
        for (r, c), v in other.data.items():
            by_row.setdefault(r, []).append((c, v))
        out: Dict[Tuple[Label, Label], Cyclo] = {}
        for (r, mid), v in self.data.items():
            for c, w in by_row.get(mid, ()):
                k = (r, c)
                prod = v * w
                cur = out.get(k)
                s = prod if cur is None else cur + prod
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return Mat(self.rows, other.cols, out)

    def __pow__(self, k: int) -> "Mat":
        if self.rows != self.cols:
            raise ValueError("only square matrices have powers")
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    # -- involutions, trace -------------------------------------------------------

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, {(c, r): v for (r, c), v in self.data.items()})

    def conj(self) -> "Mat":
        return Mat(self.rows, self.cols, {k: v.conj() for k, v in self.data.items()})

    def conj_transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, {(c, r): v.conj() for (r, c), v in self.data.items()})

    def map_entries(self, f: Callable[[Cyclo], Scalar]) -> "Mat":
        return Mat(self.rows, self.cols, {k: f(v) for k, v in self.data.items()})

    def trace(self) -> Cyclo:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        tot = Cyclo.zero()
        for (r, c), v in self.data.items():
            if r == c:
                tot = tot + v
        return tot

    # -- predicates -----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.data == other.data

    def __hash__(self):
        raise TypeError("matrices are mutable-by-convention; not hashable")

    def is_zero(self) -> bool:
        return not self.data

    def scalar_of_identity(self) -> Optional[Cyclo]:
        """If this matrix equals lambda * I, return lambda (None otherwise)."""
        if self.rows != self.cols:
            return None
        lam = None
        for (r, c), v in self.data.items():
            if r != c:
                return None
            if lam is None:
                lam = v
            elif lam != v:
                return None
        if lam is None:
            lam = Cyclo.zero()
        if len(self.data) != len(self.rows) and lam:
            return None
        return lam

    def as_permutation(self) -> Optional[Dict[Label, Label]]:
        """If every row has a single entry 1 and it is a bijection, return it."""
        if len(self.data) != len(self.rows) or self.rows != self.cols:
            return None
        perm: Dict[Label, Label] = {}
        for (r, c), v in self.data.items():
            if v != 1 or r in perm:
                return None
            perm[r] = c
        if len(set(perm.values())) != len(self.cols) or len(perm) != len(self.rows):
            return None
        return perm

    # -- elimination-based tools -------------------------------------------------------

    def _rref(self, augment: Optional[List[List[Cyclo]]] = None):
        """Reduced row echelon form of a dense copy (optionally augmented)."""
        body = self.dense()
        width = len(self.cols)
        if augment is not None:
            for row, extra in zip(body, augment):
                row.extend(extra)
        pivots: List[int] = []
        r = 0
        zero = Cyclo.zero()
        for c in range(width):
            piv = next((i for i in range(r, len(body)) if body[i][c]), None)
            if piv is None:
                continue
            body[r], body[piv] = body[piv], body[r]
            inv = body[r][c].inv()
            body[r] = [v * inv if v else zero for v in body[r]]
            for i in range(len(body)):
                if i != r and body[i][c]:
                    f = body[i][c]
                    body[i] = [a - f * b if b else a for a, b in zip(body[i], body[r])]
            pivots.append(c)
            r += 1
        return body, pivots

    def rank(self) -> int:
        _, pivots = self._rref()
        return len(pivots)

    def nullspace(self) -> List[Dict[Label, Cyclo]]:
        """A basis of the right kernel, as sparse {column label: value} maps."""
        body, pivots = self._rref()
        free = [j for j in range(len(self.cols)) if j not in pivots]
        basis = []
        one = Cyclo.one()
        for j in free:
            vec: Dict[Label, Cyclo] = {self.cols[j]: one}
            for i, pc in enumerate(pivots):
                v = body[i][j]
                if v:
                    vec[self.cols[pc]] = -v
            basis.append(vec)
        return basis

    def inverse(self) -> "Mat":
        if len(self.rows) != len(self.cols):
            raise ValueError("only square matrices can be inverted")
        n = len(self.rows)
        eye = [[Cyclo.one() if i == j else Cyclo.zero() for j in range(n)] for i in range(n)]
        body, pivots = self._rref(augment=eye)
        if len(pivots) != n:
            raise ArithmeticError("matrix is singular")
        # rows of the inverse are labelled by this matrix's columns and vice versa
        return Mat(self.cols, self.rows, {(self.cols[i], self.rows[j]): body[i][n + j]
                                          for i in range(n) for j in range(n)
                                          if body[i][n + j]})

    def solve_right(self, rhs: Dict[Label, Scalar]) -> Optional[Dict[Label, Cyclo]]:
        """One solution x of self @ x = rhs, or None when inconsistent."""
        vec = [[_c(rhs.get(r, 0))] for r in self.rows]
        body, pivots = self._rref(augment=vec)
        n = len(self.cols)
        for i in range(len(pivots), len(body)):
            if body[i][n]:
                return None
        out: Dict[Label, Cyclo] = {}
        for i, pc in enumerate(pivots):
            if body[i][n]:
                out[self.cols[pc]] = body[i][n]
        return out

    # -- display ---------------------------------------------------------------------------

    def render(self) -> str:
        cells = [[v.render() for v in row] for row in self.dense()]
        if not cells:
            return "(empty)"
        widths = [max(len(cells[i][j]) for i in range(len(self.rows)))
                  for j in range(len(self.cols))]
        lines = []
        for row in cells:
            lines.append("[ " + "  ".join(s.rjust(w) for s, w in zip(row, widths)) + " ]")
        return "\n".join(lines)

    def __repr__(self):
        return f"<Mat {len(self.rows)}x{len(self.cols)}, {len(self.data)} nonzero>"


def trace_product(a: Mat, b: Mat) -> Cyclo:
    """trace(a @ b) without materializing the product."""
    if a.cols != b.rows or a.rows != b.cols:
        raise ValueError("shapes incompatible with a cyclic trace")
    tot = Cyclo.zero()
    small, big = (a, b) if len(a.data) <= len(b.data) else (b, a)
    for (r, c), v in small.data.items():
        w = big.data.get((c, r))
        if w is not None:
            tot = tot + v * w
    return tot
