"""Exact dense linear algebra over the package's coefficient fields.

Matrices are thin wrappers around row-major nested lists of field elements.
Elimination uses the first nonzero entry of each column as pivot, scanning
rows top to bottom, so all derived data (rref, nullspace bases, particular
solutions) is deterministic for a given input.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence

from hopfmod.fields import Field


class NoSolutionError(ValueError):
    """Raised when a linear system has no solution."""


class Mat:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: list[list[Any]]):
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    # --- constructors -------------------------------------------------------

    @staticmethod
    def zeros(field: Field, nrows: int, ncols: int) -> "Mat":
        z = field.zero
        return Mat(field, [[z] * ncols for _ in range(nrows)])

    @staticmethod
    def identity(field: Field, n: int) -> "Mat":
        m = Mat.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @staticmethod
    def from_rows(field: Field, rows: Iterable[Iterable[Any]]) -> "Mat":
        return Mat(field, [list(r) for r in rows])

    @staticmethod
    def column(field: Field, vec: Sequence[Any]) -> "Mat":
        return Mat(field, [[v] for v in vec])

    @staticmethod
    def row_vector(field: Field, vec: Sequence[Any]) -> "Mat":
        return Mat(field, [list(vec)])

    def copy(self) -> "Mat":
        return Mat(self.field, [row[:] for row in self.rows])

    # --- basic algebra ------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        F = self.field
        return Mat(F, [[F.add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        F = self.field
        return Mat(F, [[F.sub(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        F = self.field
        return Mat(F, [[F.neg(a) for a in row] for row in self.rows])

    def scale(self, c: Any) -> "Mat":
        F = self.field
        return Mat(F, [[F.mul(c, a) for a in row] for row in self.rows])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch: {self.nrows}x{self.ncols} @ "
                f"{other.nrows}x{other.ncols}")
        F = self.field
        z = F.zero
        out = [[z] * other.ncols for _ in range(self.nrows)]
        orows = other.rows
        for i, row in enumerate(self.rows):
            acc = out[i]
            for k, aik in enumerate(row):
                if aik == z:
                    continue
                brow = orows[k]
                for j, bkj in enumerate(brow):
                    if bkj != z:
                        acc[j] = F.add(acc[j], F.mul(aik, bkj))
        return Mat(F, out)

    def transpose(self) -> "Mat":
        return Mat(self.field,
                   [[self.rows[i][j] for i in range(self.nrows)]
                    for j in range(self.ncols)])

    def kron(self, other: "Mat") -> "Mat":
        F = self.field
        z = F.zero
        out = Mat.zeros(F, self.nrows * other.nrows, self.ncols * other.ncols)
        for i in range(self.nrows):
            for j in range(self.ncols):
                a = self.rows[i][j]
                if a == z:
                    continue
                for k in range(other.nrows):
                    base = out.rows[i * other.nrows + k]
                    orow = other.rows[k]
                    for l in range(other.ncols):
                        if orow[l] != z:
                            base[j * other.ncols + l] = F.mul(a, orow[l])
        return out

    def trace(self) -> Any:
        F = self.field
        t = F.zero
        for i in range(min(self.nrows, self.ncols)):
            t = F.add(t, self.rows[i][i])
        return t

    def apply(self, vec: Sequence[Any]) -> list[Any]:
        """Matrix-vector product (columns act on coordinates)."""
        F = self.field
        z = F.zero
        out = [z] * self.nrows
        for i, row in enumerate(self.rows):
            acc = z
            for j, a in enumerate(row):
                if a != z and vec[j] != z:
                    acc = F.add(acc, F.mul(a, vec[j]))
            out[i] = acc
        return out

    def col(self, j: int) -> list[Any]:
        return [self.rows[i][j] for i in range(self.nrows)]

    # --- predicates ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Mat) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):  # pragma: no cover
        return hash(tuple(tuple(r) for r in self.rows))

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for row in self.rows for a in row)

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        F = self.field
        for i, row in enumerate(self.rows):
            for j, a in enumerate(row):
                if a != (F.one if i == j else F.zero):
                    return False
        return True

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Mat({self.nrows}x{self.ncols} over {self.field.describe()!r})"


def rref(mat: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form with its pivot columns.

    Pivots are chosen as the first row with a nonzero entry in the current
    column (no pivoting heuristics), keeping the reduction deterministic.
    """
    F = mat.field
    z = F.zero
    m = mat.copy()
    pivots: list[int] = []
    r = 0
    for c in range(m.ncols):
        pivot_row = None
        for i in range(r, m.nrows):
            if m.rows[i][c] != z:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m.rows[r], m.rows[pivot_row] = m.rows[pivot_row], m.rows[r]
        pv = m.rows[r][c]
        if pv != F.one:
            inv = F.inv(pv)
            m.rows[r] = [F.mul(inv, a) for a in m.rows[r]]
        for i in range(m.nrows):
            if i != r and m.rows[i][c] != z:
                f = m.rows[i][c]
                m.rows[i] = [F.sub(a, F.mul(f, b))
                             for a, b in zip(m.rows[i], m.rows[r])]
        pivots.append(c)
        r += 1
        if r == m.nrows:
            break
    return m, pivots


def rank(mat: Mat) -> int:
    return len(rref(mat)[1])


def nullspace(mat: Mat) -> list[list[Any]]:
    """Basis of the right kernel, one vector per free column, ascending."""
    F = mat.field
    red, pivots = rref(mat)
    pivot_set = set(pivots)
    free = [c for c in range(mat.ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [F.zero] * mat.ncols
        vec[fc] = F.one
        for r, pc in enumerate(pivots):
            vec[pc] = F.neg(red.rows[r][fc])
        basis.append(vec)
    return basis


def solve(mat: Mat, rhs: Mat) -> Mat:
    """One particular solution X of mat @ X = rhs (free variables zero)."""
    if rhs.nrows != mat.nrows:
        raise ValueError("rhs has wrong number of rows")
    F = mat.field
    z = F.zero
    aug = Mat(F, [mat.rows[i] + rhs.rows[i] for i in range(mat.nrows)])
    red, pivots = rref(aug)
    n = mat.ncols
    for r in range(len(pivots)):
        if pivots[r] >= n:
            raise NoSolutionError("inconsistent linear system")
    out = Mat.zeros(F, n, rhs.ncols)
    for r, pc in enumerate(pivots):
        for j in range(rhs.ncols):
            out.rows[pc][j] = red.rows[r][n + j]
    # verify residual exactly; guards against silent misuse
    if (mat @ out) != rhs:
        # rref already guarantees consistency; keep as a cheap invariant
        for r in range(len(pivots), red.nrows):
            if any(red.rows[r][n + j] != z for j in range(rhs.ncols)):
                raise NoSolutionError("inconsistent linear system")
        raise AssertionError("solver produced a non-solution")
    return out


def solve_vec(mat: Mat, rhs: Sequence[Any]) -> list[Any]:
    return solve(mat, Mat.column(mat.field, rhs)).col(0)


def inverse(mat: Mat) -> Mat:
    if mat.nrows != mat.ncols:
        raise ValueError("only square matrices are invertible")
    try:
        out = solve(mat, Mat.identity(mat.field, mat.nrows))
    except NoSolutionError as exc:
        raise NoSolutionError("matrix is singular") from exc
    if not (mat @ out).is_identity():
        raise NoSolutionError("matrix is singular")
    return out
