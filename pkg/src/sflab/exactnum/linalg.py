"""Small dense matrices over exact rings, plus field linear algebra."""

from __future__ import annotations

from typing import Callable, Sequence

from ..errors import DimensionMismatch, DivisionByZero
from .field import ONE, ZERO


class Matrix:
    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise DimensionMismatch("ragged matrix")

    @classmethod
    def filled(cls, nrows: int, ncols: int, f: Callable[[int, int], object]) -> "Matrix":
        return cls([[f(i, j) for j in range(ncols)] for i in range(nrows)])

    @classmethod
    def identity(cls, n: int, one=ONE, zero=ZERO) -> "Matrix":
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def _entry(self):
        return self.rows[0][0]

    def zero_like(self) -> "Matrix":
        z = self._entry() * 0
        return Matrix([[z] * self.ncols for _ in range(self.nrows)])

    def identity_like(self) -> "Matrix":
        z = self._entry() * 0
        return Matrix.identity(self.nrows, z + 1, z)

    def map(self, f: Callable) -> "Matrix":
        return Matrix([[f(x) for x in r] for r in self.rows])

    def __add__(self, o: "Matrix") -> "Matrix":
        if o.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} vs {o.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __sub__(self, o: "Matrix") -> "Matrix":
        if o.shape != self.shape:
            raise DimensionMismatch(f"{self.shape} vs {o.shape}")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.rows])

    def __mul__(self, c) -> "Matrix":
        return Matrix([[a * c for a in r] for r in self.rows])

    def __rmul__(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.rows])

    def __matmul__(self, o: "Matrix") -> "Matrix":
        if self.ncols != o.nrows:
            raise DimensionMismatch(f"{self.shape} @ {o.shape}")
        cols = list(zip(*o.rows))
        out = []
        for r in self.rows:
            row = []
            for col in cols:
                acc = None
                for a, b in zip(r, col):
                    if a and b:
                        p = a * b
                        acc = p if acc is None else acc + p
                row.append(acc if acc is not None else r[0] * 0)
            out.append(row)
        return Matrix(out)

    @property
    def T(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    def is_zero(self) -> bool:
        return not any(x for r in self.rows for x in r)

    def __eq__(self, o):
        if not isinstance(o, Matrix):
            return NotImplemented
        return self.shape == o.shape and all(
            a == b for r, s in zip(self.rows, o.rows) for a, b in zip(r, s))

    def __hash__(self):
        return hash(self.rows)

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix([r[c0:c1] for r in self.rows[r0:r1]])

    def is_skew(self) -> bool:
        return all((self.rows[i][j] + self.rows[j][i]).is_zero() if hasattr(
            self.rows[i][j], "is_zero") else self.rows[i][j] + self.rows[j][i] == 0
            for i in range(self.nrows) for j in range(i, self.ncols))

    # ring-generic determinant and adjugate (cofactor expansion, small n)
    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("det of non-square matrix")
        n = self.nrows
        if n == 0:
            return ONE
        zero = self._entry() * 0
        one = zero + 1
        memo: dict[tuple[int, int], object] = {}

        def minor(row: int, used: int):
            if row == n:
                return one
            key = (row, used)
            if key not in memo:
                acc = zero
                sign = 1
                for j in range(n):
                    if used >> j & 1:
                        continue
                    a = self.rows[row][j]
                    if a:
                        term = a * minor(row + 1, used | (1 << j))
                        acc = acc + term if sign > 0 else acc - term
                    sign = -sign
                memo[key] = acc
            return memo[key]

        return minor(0, 0)

    def adjugate(self) -> "Matrix":
        n = self.nrows
        z = self._entry() * 0
        if n == 1:
            return Matrix([[z + 1]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                sub = Matrix([[self.rows[r][c] for c in range(n) if c != j]
                              for r in range(n) if r != i])
                d = sub.det()
                out[j][i] = d if (i + j) % 2 == 0 else -d
        return Matrix(out)


def field_inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse of a matrix of FieldElements."""
    n = m.nrows
    if m.ncols != n:
        raise DimensionMismatch("inverse of non-square matrix")
    a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise DivisionByZero("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return Matrix([r[n:] for r in a])


def field_rank(m: Matrix) -> int:
    """Rank of a matrix of FieldElements by row reduction."""
    a = [list(r) for r in m.rows]
    rank = 0
    ncols = m.ncols
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][col].inverse()
        for r in range(rank + 1, len(a)):
            if a[r][col]:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def hstack(*ms: Matrix) -> Matrix:
    return Matrix([sum((list(m.rows[i]) for m in ms), []) for i in range(ms[0].nrows)])


def vstack(*ms: Matrix) -> Matrix:
    return Matrix([r for m in ms for r in m.rows])


def same_column_space(a: Matrix, b: Matrix) -> bool:
    ra, rb = field_rank(a), field_rank(b)
    return ra == rb == field_rank(hstack(a, b))


def unit_inverse(m: Matrix) -> Matrix:
    """Inverse of a matrix over a Fourier ring whose determinant is a unit.

    Units of the trigonometric polynomial ring are single terms c*exp(i k.theta)
    with no polynomial factor.  Raises DivisionByZero otherwise.
    """
    d = m.det()
    terms = getattr(d, "terms", None)
    if terms is None:
        return field_inverse(m)
    if len(terms) != 1:
        raise DivisionByZero("determinant is not a unit of the function ring")
    (k, c), = terms.items()
    nt = d.dim - d.npoly
    if any(k[nt:]):
        raise DivisionByZero("determinant is not a unit of the function ring")
    inv = type(d)._raw(d.dim, d.npoly, {tuple(-x for x in k[:nt]) + k[nt:]: c.inverse()})
    return m.adjugate() * inv
