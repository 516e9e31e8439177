"""Exact dense linear algebra: rank, nullspace bases, particular solutions.

Pivoting is deterministic (first nonzero entry, columns scanned left to
right) and particular solutions set every free variable to zero, so all
results are reproducible.  Matrices are immutable after construction and
all operations return fresh values.
"""

from __future__ import annotations

from .fields import Field, FieldError


def zero_vector(field: Field, n: int) -> list:
    return [field.zero()] * n


def unit_vector(field: Field, n: int, i: int) -> list:
    v = [field.zero()] * n
    v[i] = field.one()
    return v


def vec_add(u: list, v: list) -> list:
    return [a + b for a, b in zip(u, v)]


def vec_sub(u: list, v: list) -> list:
    return [a - b for a, b in zip(u, v)]


def vec_neg(u: list) -> list:
    return [-a for a in u]


def vec_scale(c, u: list) -> list:
    return [c * a for a in u]


def vec_is_zero(u: list) -> bool:
    return not any(u)


class Matrix:
    """Dense row-major matrix over one field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix rows")
            if ncols is None:
                ncols = width
            elif ncols != width:
                raise ValueError(f"declared {ncols} columns, rows have {width}")
        elif ncols is None:
            ncols = 0
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = [[field.coerce(x) for x in r] for r in rows]

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero()
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [unit_vector(field, n, i) for i in range(n)], n)

    def column(self, j: int) -> list:
        return [row[j] for row in self.rows]

    def matvec(self, v: list) -> list:
        if len(v) != self.ncols:
            raise ValueError(
                f"vector of length {len(v)} against {self.ncols} columns")
        out = zero_vector(self.field, self.nrows)
        for i, row in enumerate(self.rows):
            acc = self.field.zero()
            for a, x in zip(row, v):
                if a and x:
                    acc = acc + a * x
            out[i] = acc
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise FieldError("matrix product across different fields")
        if self.ncols != other.nrows:
            raise ValueError(
                f"cannot multiply {self.nrows}x{self.ncols} by "
                f"{other.nrows}x{other.ncols}")
        zero = self.field.zero()
        out = []
        for arow in self.rows:
            crow = [zero] * other.ncols
            for k, a in enumerate(arow):
                if a:
                    brow = other.rows[k]
                    for j, b in enumerate(brow):
                        if b:
                            crow[j] = crow[j] + a * b
            out.append(crow)
        return Matrix(self.field, out, other.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(self.field,
                      [self.column(j) for j in range(self.ncols)], self.nrows)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over {self.field})"


def _row_reduce(rows: list, pivot_width: int) -> list:
    """In-place reduced row echelon form; pivots searched in the first
    pivot_width columns only (row operations apply to full rows).
    Returns the pivot column list, one per pivot row."""
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(pivot_width):
        src = None
        for rr in range(r, nrows):
            if rows[rr][c]:
                src = rr
                break
        if src is None:
            continue
        if src != r:
            rows[r], rows[src] = rows[src], rows[r]
        piv = rows[r][c]
        if piv != 1:
            inv_row = [x / piv for x in rows[r]]
            rows[r] = inv_row
        for rr in range(nrows):
            if rr != r and rows[rr][c]:
                fac = rows[rr][c]
                rows[rr] = [x - fac * y for x, y in zip(rows[rr], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank_nullspace(m: Matrix) -> tuple[int, list[list]]:
    """Exact rank and a basis of the right nullspace.

    rank + len(basis) == m.ncols.  The basis is deterministic: one vector
    per free column in ascending order, with a 1 in the free position.
    """
    red = [list(r) for r in m.rows]
    pivots = _row_reduce(red, m.ncols)
    rank = len(pivots)
    pivot_set = set(pivots)
    basis = []
    one = m.field.one()
    for fc in range(m.ncols):
        if fc in pivot_set:
            continue
        v = zero_vector(m.field, m.ncols)
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return rank, basis


def solve(m: Matrix, b: list) -> list | None:
    """One exact solution of m x = b, or None when inconsistent.

    Free variables are set to zero under first-pivot column ordering, so
    the returned representative is deterministic.  A length mismatch
    between b and the rows of m is a usage error, raised as ValueError.
    """
    if len(b) != m.nrows:
        raise ValueError(
            f"right-hand side of length {len(b)} against {m.nrows} rows")
    b = [m.field.coerce(x) for x in b]
    aug = [row + [bi] for row, bi in zip(m.rows, b)]
    pivots = _row_reduce(aug, m.ncols)
    for row in aug[len(pivots):]:
        if row[m.ncols]:
            return None
    x = zero_vector(m.field, m.ncols)
    for r, pc in enumerate(pivots):
        x[pc] = aug[r][m.ncols]
    return x


def inverse(m: Matrix) -> Matrix | None:
    """Exact inverse of a square matrix, or None when singular."""
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    aug = [list(row) + unit_vector(m.field, n, i)
           for i, row in enumerate(m.rows)]
    pivots = _row_reduce(aug, n)
    if len(pivots) != n:
        return None
    return Matrix(m.field, [row[n:] for row in aug], n)
