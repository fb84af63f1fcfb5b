"""Dense exact matrices: row reduction, kernels, solves, one-sided inverses,
block assembly, characteristic polynomial, and a Sylvester solver.

Matrices are immutable (tuple-of-tuples of scalars) and every operation is
pure, so values can be shared freely.  Conventions used throughout:

* J_k(lam) has lam on the diagonal and ones on the SUBdiagonal;
* RREF pivots on the leftmost nonzero column, topmost nonzero entry, and
  normalizes leading entries to 1;
* free variables in solves are fixed to zero, so solutions are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    GramUnavailable,
    NonSquare,
    NoSolution,
    NotFullRowRank,
    SingularMatrix,
)
from .fields import Field


@dataclass(frozen=True)
class Matrix:
    field: Field
    rows: tuple

    # ---- constructors ----
    @staticmethod
    def from_rows(field: Field, rows: Iterable[Iterable]) -> "Matrix":
        tup = tuple(tuple(r) for r in rows)
        if tup and any(len(r) != len(tup[0]) for r in tup):
            raise DimensionMismatch("ragged rows")
        return Matrix(field, tup)

    @staticmethod
    def from_int_rows(field: Field, rows: Iterable[Iterable[int]]) -> "Matrix":
        return Matrix.from_rows(field, ((field.of_int(x) for x in r) for r in rows))

    @staticmethod
    def zeros(field: Field, m: int, n: int) -> "Matrix":
        z = field.zero
        return Matrix(field, tuple(tuple(z for _ in range(n)) for _ in range(m)))

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @staticmethod
    def unit(field: Field, m: int, n: int, i: int, j: int) -> "Matrix":
        """E_(i,j): single 1 in entry (i, j), 0-based."""
        z, o = field.zero, field.one
        return Matrix(field, tuple(tuple(o if (r == i and c == j) else z for c in range(n)) for r in range(m)))

    @staticmethod
    def jordan_block(field: Field, k: int, lam) -> "Matrix":
        z = field.zero
        rows = [[z] * k for _ in range(k)]
        for i in range(k):
            rows[i][i] = lam
            if i + 1 < k:
                rows[i + 1][i] = field.one
        return Matrix.from_rows(field, rows)

    @staticmethod
    def diagonal(field: Field, entries: Sequence) -> "Matrix":
        z = field.zero
        n = len(entries)
        return Matrix(field, tuple(tuple(entries[i] if i == j else z for j in range(n)) for i in range(n)))

    @staticmethod
    def column(field: Field, entries: Sequence) -> "Matrix":
        return Matrix(field, tuple((e,) for e in entries))

    # ---- shape ----
    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_square(self) -> bool:
        return self.m == self.n

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def block(self, i0: int, j0: int, m: int, n: int) -> "Matrix":
        return self.submatrix(range(i0, i0 + m), range(j0, j0 + n))

    # ---- arithmetic ----
    def _check_same_shape(self, other: "Matrix"):
        if self.field != other.field or self.m != other.m or self.n != other.n:
            raise DimensionMismatch(f"{self.m}x{self.n} vs {other.m}x{other.n}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        add = self.field.add
        return Matrix(self.field, tuple(
            tuple(add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        sub = self.field.sub
        return Matrix(self.field, tuple(
            tuple(sub(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, tuple(tuple(neg(a) for a in r) for r in self.rows))

    def scale(self, c) -> "Matrix":
        mul = self.field.mul
        return Matrix(self.field, tuple(tuple(mul(c, a) for a in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.__mul__(other)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.n != other.m:
            raise DimensionMismatch(f"{self.m}x{self.n} times {other.m}x{other.n}")
        F = self.field
        cols = tuple(zip(*other.rows)) if other.rows else ()
        if F.is_rationals:
            out = tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows)
        else:
            p = F.p
            out = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows)
        return Matrix(F, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)) if self.rows else ())

    def trace(self):
        if not self.is_square:
            raise NonSquare("trace of a non-square matrix")
        t = self.field.zero
        for i in range(self.m):
            t = self.field.add(t, self.rows[i][i])
        return t

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise NonSquare("power of a non-square matrix")
        acc = Matrix.identity(self.field, self.n)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def is_zero(self) -> bool:
        return all(not e for r in self.rows for e in r)

    def is_square_zero(self) -> bool:
        return self.is_square and (self * self).is_zero()

    def is_nilpotent(self) -> bool:
        if not self.is_square:
            return False
        acc = self
        for _ in range(max(self.n - 1, 0)):
            if acc.is_zero():
                return True
            acc = acc * self
        return acc.is_zero()

    def is_scalar(self) -> bool:
        if not self.is_square or self.m == 0:
            return self.is_square
        lam = self.rows[0][0]
        z = self.field.zero
        return all(self.rows[i][j] == (lam if i == j else z)
                   for i in range(self.m) for j in range(self.n))

    def diagonal_entries(self) -> tuple:
        return tuple(self.rows[i][i] for i in range(min(self.m, self.n)))

    def entries_key(self) -> tuple:
        """Hashable flat key (used by set-based oracles)."""
        return tuple(e for r in self.rows for e in r)

    def __str__(self):
        fmt = self.field.format
        widths = [max((len(fmt(self.rows[i][j])) for i in range(self.m)), default=1)
                  for j in range(self.n)]
        return "\n".join(" ".join(fmt(e).rjust(w) for e, w in zip(r, widths)) for r in self.rows)


# ---- block assembly ----

def hstack(*mats: Matrix) -> Matrix:
    mats = [m for m in mats if m.n > 0 or m.m > 0]
    if not mats:
        raise DimensionMismatch("empty hstack")
    if any(m.m != mats[0].m for m in mats):
        raise DimensionMismatch("hstack row counts differ")
    return Matrix(mats[0].field, tuple(
        tuple(e for mat in mats for e in mat.rows[i]) for i in range(mats[0].m)))


def vstack(*mats: Matrix) -> Matrix:
    mats = [m for m in mats if m.m > 0 or m.n > 0]
    if not mats:
        raise DimensionMismatch("empty vstack")
    if any(m.n != mats[0].n for m in mats):
        raise DimensionMismatch("vstack column counts differ")
    return Matrix(mats[0].field, tuple(r for mat in mats for r in mat.rows))


def block_diag(field: Field, blocks: Sequence[Matrix]) -> Matrix:
    """Dg[B1, ..., Bk]; 0x0 blocks are legal and vanish."""
    m = sum(b.m for b in blocks)
    n = sum(b.n for b in blocks)
    z = field.zero
    rows = [[z] * n for _ in range(m)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.m):
            rows[i0 + i][j0:j0 + b.n] = b.rows[i]
        i0 += b.m
        j0 += b.n
    return Matrix.from_rows(field, rows)


def from_columns(field: Field, cols: Sequence[Sequence]) -> Matrix:
    """Matrix whose j-th column is cols[j]."""
    if not cols:
        raise DimensionMismatch("no columns")
    return Matrix(field, tuple(zip(*cols)))


# ---- row reduction ----

@dataclass(frozen=True)
class RrefResult:
    """Reduced row echelon form R with invertible bookkeeping T: T*M = R."""

    R: Matrix
    T: Matrix
    pivots: tuple
    det_T: object  # determinant of T, tracked during reduction

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(M: Matrix) -> RrefResult:
    F = M.field
    m, n = M.m, M.n
    rows = [list(r) for r in M.rows]
    t = [list(r) for r in Matrix.identity(F, m).rows]
    det_t = F.one
    pivots = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            t[r], t[pivot] = t[pivot], t[r]
            det_t = F.neg(det_t)
        inv = F.inv(rows[r][c])
        if rows[r][c] != F.one:
            rows[r] = [F.mul(inv, x) for x in rows[r]]
            t[r] = [F.mul(inv, x) for x in t[r]]
            det_t = F.mul(det_t, inv)
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
                t[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return RrefResult(Matrix.from_rows(F, rows), Matrix.from_rows(F, t), tuple(pivots), det_t)


def rank(M: Matrix) -> int:
    return rref(M).rank


@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent columns spanning a subspace of F^dim."""

    dim: int
    vectors: tuple  # tuple of column tuples

    @property
    def k(self) -> int:
        return len(self.vectors)

    def matrix(self, field: Field) -> Matrix:
        if not self.vectors:
            return Matrix(field, tuple(() for _ in range(self.dim)))
        return from_columns(field, self.vectors)


def nullspace_basis(M: Matrix) -> SubspaceBasis:
    """Standard free-variable basis of N(M), free variables set to one in index order."""
    F = M.field
    res = rref(M)
    piv = set(res.pivots)
    free = [j for j in range(M.n) if j not in piv]
    vecs = []
    for j in free:
        v = [F.zero] * M.n
        v[j] = F.one
        for r_i, c in enumerate(res.pivots):
            v[c] = F.neg(res.R[r_i, j])
        vecs.append(tuple(v))
    return SubspaceBasis(M.n, tuple(vecs))


def colspace_basis(M: Matrix) -> SubspaceBasis:
    """Pivot columns of M itself."""
    res = rref(M)
    return SubspaceBasis(M.m, tuple(M.col(j) for j in res.pivots))


def subspace_data(M: Matrix):
    """(rank, nullspace basis, column space basis)."""
    res = rref(M)
    piv = set(res.pivots)
    F = M.field
    vecs = []
    for j in range(M.n):
        if j in piv:
            continue
        v = [F.zero] * M.n
        v[j] = F.one
        for r_i, c in enumerate(res.pivots):
            v[c] = F.neg(res.R[r_i, j])
        vecs.append(tuple(v))
    null = SubspaceBasis(M.n, tuple(vecs))
    col = SubspaceBasis(M.m, tuple(M.col(j) for j in res.pivots))
    return res.rank, null, col


def solve_right(A: Matrix, B: Matrix) -> Matrix:
    """X with A*X = B, free variables zero; NoSolution if col(B) is not in col(A)."""
    if A.m != B.m or A.field != B.field:
        raise DimensionMismatch("A and B must have the same row count")
    F = A.field
    res = rref(hstack(A, B))
    for i in range(res.rank):
        if res.pivots[i] >= A.n:
            raise NoSolution("right-hand side outside the column space")
    X = [[F.zero] * B.n for _ in range(A.n)]
    for r_i, c in enumerate(res.pivots):
        for j in range(B.n):
            X[c][j] = res.R[r_i, A.n + j]
    return Matrix.from_rows(F, X)


def solve_left(A: Matrix, B: Matrix) -> Matrix:
    """X with X*A = B (transposed dual of solve_right)."""
    return solve_right(A.transpose(), B.transpose()).transpose()


def inverse(A: Matrix) -> Matrix:
    if not A.is_square:
        raise NonSquare("inverse of a non-square matrix")
    res = rref(A)
    if res.rank != A.n:
        raise SingularMatrix("matrix is singular")
    return res.T


def det(A: Matrix):
    if not A.is_square:
        raise NonSquare("determinant of a non-square matrix")
    F = A.field
    res = rref(A)
    if res.rank != A.n:
        return F.zero
    # T*A = I, so det(A) = 1/det(T)
    return F.inv(res.det_T)


def is_invertible(A: Matrix) -> bool:
    return A.is_square and rref(A).rank == A.n


GRAM = "gram"
RREF_STRATEGY = "rref"


def right_inverse(A: Matrix, strategy: str = None) -> Matrix:
    """A^R with A*A^R = I.

    Gram strategy returns A^T (A A^T)^{-1}, valid over Q where A A^T is
    invertible for full-row-rank A.  The rref strategy returns the
    column-wise particular solution with free variables zero and works over
    any field; it is the default over GF(p).
    """
    F = A.field
    if strategy is None:
        strategy = GRAM if F.is_rationals else RREF_STRATEGY
    if rank(A) != A.m:
        raise NotFullRowRank(f"rank {rank(A)} < {A.m} rows")
    if strategy == GRAM:
        if not F.is_rationals:
            raise GramUnavailable("Gram right inverse needs Q (A*A^T may be singular over GF(p))")
        at = A.transpose()
        return at * inverse(A * at)
    if strategy == RREF_STRATEGY:
        return solve_right(A, Matrix.identity(F, A.m))
    raise ValueError(f"unknown strategy {strategy!r}")


def left_inverse(A: Matrix, strategy: str = None) -> Matrix:
    return right_inverse(A.transpose(), strategy).transpose()


# ---- characteristic polynomial (Berkowitz, division-free) ----

def char_poly_coeffs(A: Matrix) -> list:
    """Coefficients of det(xI - A), ascending, via the Berkowitz vector recursion.

    Division-free, so valid in every characteristic.
    """
    if not A.is_square:
        raise NonSquare("characteristic polynomial of a non-square matrix")
    F = A.field
    n = A.n
    if n == 0:
        return [F.one]
    add, mul, neg = F.add, F.mul, F.neg

    # vector of charpoly coefficients, descending degree; start with 1x1 block
    poly = [F.one, neg(A[0, 0])]
    for k in range(1, n):
        # principal (k+1)x(k+1) block data
        a = A[k, k]
        R = [A[k, j] for j in range(k)]          # row below the k x k block
        Cc = [A[i, k] for i in range(k)]         # column right of the block
        Ak = [[A[i, j] for j in range(k)] for i in range(k)]
        # Toeplitz column: [1, -a, -R*C, -R*A*C, -R*A^2*C, ...]
        col = [F.one, neg(a)]
        v = Cc
        for _ in range(k):
            s = F.zero
            for x, y in zip(R, v):
                s = add(s, mul(x, y))
            col.append(neg(s))
            v = [sum_dot(F, row, v) for row in Ak]
        new = [F.zero] * (k + 2)
        for i, c in enumerate(poly):
            for j in range(k + 2 - i):
                if j < len(col):
                    new[i + j] = add(new[i + j], mul(c, col[j]))
        poly = new
    poly.reverse()  # ascending
    return poly


def sum_dot(F: Field, xs, ys):
    s = F.zero
    for x, y in zip(xs, ys):
        s = F.add(s, F.mul(x, y))
    return s


def solve_sylvester(A: Matrix, B: Matrix, D: Matrix) -> Matrix:
    """X with A*X - X*B = D, free variables zero.

    Always solvable when the characteristic polynomials of A and B are
    coprime; otherwise NoSolution may be raised.
    """
    if not A.is_square or not B.is_square:
        raise NonSquare("Sylvester blocks must be square")
    n, k = A.n, B.n
    if D.m != n or D.n != k:
        raise DimensionMismatch("D must be n x m")
    F = A.field
    # unknowns X[i][j] indexed by i*k + j; equation for each (r, c):
    # sum_i A[r,i] X[i,c] - sum_j X[r,j] B[j,c] = D[r,c]
    rows = []
    rhs = []
    for r in range(n):
        for c in range(k):
            coeff = [F.zero] * (n * k)
            for i in range(n):
                coeff[i * k + c] = F.add(coeff[i * k + c], A[r, i])
            for j in range(k):
                coeff[r * k + j] = F.sub(coeff[r * k + j], B[j, c])
            rows.append(coeff)
            rhs.append((D[r, c],))
    sol = solve_right(Matrix.from_rows(F, rows), Matrix.from_rows(F, rhs))
    entries = [sol[i, 0] for i in range(n * k)]
    return Matrix.from_rows(F, (entries[i * k:(i + 1) * k] for i in range(n)))


# ---- basis utilities ----

def independent_subset(field: Field, vectors: Sequence[Sequence], base: Matrix = None) -> list:
    """Vectors that increase rank when appended after ``base``, kept in index order."""
    kept = []
    cols = [list(base.col(j)) for j in range(base.n)] if base is not None else []
    cur_rank = rank(from_columns(field, cols)) if cols else 0
    for v in vectors:
        trial = cols + [list(v)]
        r = rank(from_columns(field, trial))
        if r > cur_rank:
            kept.append(tuple(v))
            cols = trial
            cur_rank = r
    return kept


def extend_to_basis(field: Field, vectors: Sequence[Sequence], dim: int) -> list:
    """Complete independent ``vectors`` to a basis of F^dim with standard
    basis vectors in index order (the deterministic completion used by every
    construction in this package)."""
    ext = []
    cols = [list(v) for v in vectors]
    cur = rank(from_columns(field, cols)) if cols else 0
    if cur != len(cols):
        raise DimensionMismatch("input vectors are dependent")
    for i in range(dim):
        if cur == dim:
            break
        e = [field.zero] * dim
        e[i] = field.one
        trial = cols + [e]
        r = rank(from_columns(field, trial))
        if r > cur:
            ext.append(tuple(e))
            cols = trial
            cur = r
    return ext


def intersect_subspaces(field: Field, U: Matrix, W: Matrix) -> list:
    """Basis of col(U) ∩ col(W): feed N([U | -W]) through U."""
    if U.n == 0 or W.n == 0:
        return []
    stacked = hstack(U, -W)
    nb = nullspace_basis(stacked)
    vecs = []
    for v in nb.vectors:
        coeffs = Matrix.column(field, v[:U.n])
        vecs.append(tuple((U * coeffs).col(0)))
    return independent_subset(field, vecs)
