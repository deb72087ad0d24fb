"""Fraction-free elimination over Scalar entries.

Matrices are lists of rows of :class:`Scalar`.  Elimination is the
Bareiss variant of Gauss-Jordan: every division is exact, the entries stay
polynomial, and at the end each pivot row carries the same pivot value
``D`` (a minor of the input).  A generic solution over the rational-function
field is therefore ``x_col = entry / D``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar, from_sympy, to_sympy

Matrix = List[List[Scalar]]


@dataclass
class Echelon:
    rows: Matrix
    pivots: List[Tuple[int, int]]  # (row, column)
    det: Scalar  # common pivot value D

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _exact(num: Scalar, den: Scalar) -> Scalar:
    if den == ONE:
        return num
    q = num.divide_exact(den)
    if q is None:  # pragma: no cover - impossible for Bareiss updates
        raise ArithmeticError("non-exact Bareiss division")
    return q


def echelon(matrix: Sequence[Sequence[Scalar]], pivot_cols: Optional[int] = None) -> Echelon:
    """Reduced fraction-free echelon form; only the first ``pivot_cols`` columns pivot."""
    M = [list(r) for r in matrix]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    if pivot_cols is None:
        pivot_cols = ncols
    prev = ONE
    pivots: List[Tuple[int, int]] = []
    r = 0
    free_cols = list(range(pivot_cols))
    while r < nrows and free_cols:
        # full pivoting over the admissible columns, simplest entry first
        cands = [(len(M[i][j]), M[i][j].degree(), j, i)
                 for j in free_cols for i in range(r, nrows) if not M[i][j].is_zero()]
        if not cands:
            break
        _, _, col, best = min(cands)
        free_cols.remove(col)
        M[r], M[best] = M[best], M[r]
        piv = M[r][col]
        prow = M[r]
        for i in range(nrows):
            if i == r:
                continue
            row = M[i]
            a = row[col]
            if a.is_zero():
                if prev != piv:
                    M[i] = [_exact(piv * e, prev) if not e.is_zero() else e for e in row]
                continue
            M[i] = [_exact(piv * e - a * p, prev) for e, p in zip(row, prow)]
        pivots.append((r, col))
        prev = piv
        r += 1
    return Echelon(M, pivots, prev if pivots else ONE)


def rank(matrix: Sequence[Sequence[Scalar]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return echelon(matrix).rank


@dataclass
class LinearSolution:
    """Generic solution ``x = numerators / denominator`` (free unknowns set to 0)."""

    consistent: bool
    numerators: List[Scalar] = field(default_factory=list)
    denominator: Scalar = ONE
    kernel: List[List[Scalar]] = field(default_factory=list)

    def polynomial(self) -> Optional[List[Scalar]]:
        """The solution as polynomials, or None when some entry is a proper fraction."""
        out = []
        for n in self.numerators:
            q = n.divide_exact(self.denominator) if not n.is_zero() else ZERO
            if q is None:
                return None
            out.append(q)
        return out

    def locus(self) -> Scalar:
        """Reduced common denominator of the non-polynomial entries."""
        import sympy

        den = to_sympy(self.denominator)
        acc = sympy.Integer(1)
        for n in self.numerators:
            if n.is_zero() or n.divide_exact(self.denominator) is not None:
                continue
            _, reduced = sympy.fraction(sympy.cancel(to_sympy(n) / den))
            acc = sympy.lcm(acc, reduced)
        return _monic(from_sympy(acc))


def _monic(s: Scalar) -> Scalar:
    if s.is_zero():
        return s
    lead = max(s.terms, key=lambda m: (sum(e for _, e in m), m))
    return s * Scalar.const(1 / s.terms[lead])


def solve(columns: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar]) -> LinearSolution:
    """Solve ``sum_j x_j columns[j] = rhs`` over the rational-function field."""
    n = len(columns)
    m = len(rhs)
    M = [[columns[j][i] for j in range(n)] + [rhs[i]] for i in range(m)]
    ech = echelon(M, pivot_cols=n)
    pivot_rows = {row for row, _ in ech.pivots}
    for i in range(m):
        if i not in pivot_rows and not ech.rows[i][n].is_zero():
            return LinearSolution(False)
    nums = [ZERO] * n
    for row, col in ech.pivots:
        nums[col] = ech.rows[row][n]
    return LinearSolution(True, nums, ech.det, _kernel_from(ech, n))


def _kernel_from(ech: Echelon, n: int) -> List[List[Scalar]]:
    pivot_cols = {col: row for row, col in ech.pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [ZERO] * n
        v[free] = ech.det
        for col, row in pivot_cols.items():
            v[col] = -ech.rows[row][free]
        basis.append(v)
    return basis


def kernel(columns: Sequence[Sequence[Scalar]]) -> List[List[Scalar]]:
    """Polynomial generators of the generic kernel of the column matrix."""
    n = len(columns)
    if n == 0:
        return []
    m = len(columns[0])
    if m == 0:
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    M = [[columns[j][i] for j in range(n)] for i in range(m)]
    return _kernel_from(echelon(M), n)
