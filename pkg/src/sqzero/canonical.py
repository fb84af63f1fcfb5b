"""Canonical forms driven by the Smith reduction of xI - A over F[x]:
invariant polynomials, minimal polynomial, rational canonical form with an
explicit transform, Fitting decomposition, similarity testing and elementary
divisors.

The rational-canonical transform is extracted from the unimodular row
multiplier of the Smith reduction: the columns of its inverse, evaluated at
A, generate the cyclic summands.  The result is validated by exact
multiplication; if validation ever fails a direct intertwiner search is used
as a fallback.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ConstructionFailed, NonSquare, NotFullyFactored
from .fields import Field
from .matrices import (
    Matrix,
    block_diag,
    colspace_basis,
    from_columns,
    inverse,
    is_invertible,
    nullspace_basis,
)
from .polynomials import Poly, companion, factor, parity_class


def char_poly(A: Matrix) -> Poly:
    from .matrices import char_poly_coeffs

    return Poly.make(A.field, char_poly_coeffs(A))


# ---- Smith reduction of the characteristic matrix ----

def _poly_rows_of_char_matrix(A: Matrix) -> list:
    F = A.field
    n = A.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            diag = F.one if i == j else F.zero
            row.append(Poly.make(F, [F.neg(A[i, j]), diag]))
        rows.append(row)
    return rows


def _smith_char_matrix(A: Matrix):
    """Smith form of xI - A: returns (diagonal invariant chain f_1 | ... | f_n,
    Uinv) where U*(xI - A)*V = S and Uinv is the polynomial matrix U^{-1}.

    Pivot choice: minimal-degree nonzero entry, ties broken by (row, col);
    the pivot is made monic immediately.
    """
    if not A.is_square:
        raise NonSquare("Smith form of the characteristic matrix needs a square input")
    F = A.field
    n = A.n
    M = _poly_rows_of_char_matrix(A)
    one = Poly.one(F)
    zero = Poly.zero(F)
    uinv = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        for r in range(n):  # Uinv <- Uinv * swap(i,j): swap columns i, j
            uinv[r][i], uinv[r][j] = uinv[r][j], uinv[r][i]

    def col_swap(i, j):
        for r in range(n):
            M[r][i], M[r][j] = M[r][j], M[r][i]

    def row_addmul(i, j, q: Poly):
        # row_i += q * row_j ; Uinv <- Uinv * (I - q E_ij): col_j -= q * col_i
        M[i] = [a + q * b for a, b in zip(M[i], M[j])]
        for r in range(n):
            uinv[r][j] = uinv[r][j] - q * uinv[r][i]

    def col_addmul(i, j, q: Poly):
        for r in range(n):
            M[r][i] = M[r][i] + q * M[r][j]

    def row_scale(i, c):
        M[i] = [p.scale(c) for p in M[i]]
        cinv = F.inv(c)
        for r in range(n):
            uinv[r][i] = uinv[r][i].scale(cinv)

    for k in range(n):
        while True:
            pivot = None
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    if not M[i][j].is_zero:
                        d = M[i][j].degree
                        if best is None or d < best:
                            best = d
                            pivot = (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            if not M[k][k].is_monic:
                row_scale(k, F.inv(M[k][k].leading))
            dirty = False
            for i in range(k + 1, n):
                if not M[i][k].is_zero:
                    q = M[i][k] // M[k][k]
                    row_addmul(i, k, -q)
                    if not M[i][k].is_zero:
                        dirty = True
            for j in range(k + 1, n):
                if not M[k][j].is_zero:
                    q = M[k][j] // M[k][k]
                    col_addmul(j, k, -q)
                    if not M[k][j].is_zero:
                        dirty = True
            if dirty:
                continue
            # divisibility fix-up: pivot must divide every remaining entry
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if not (M[i][j] % M[k][k]).is_zero:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(k, offender, Poly.one(F))
    diag = [M[i][i].monic() if not M[i][i].is_zero else M[i][i] for i in range(n)]
    return diag, uinv


@dataclass(frozen=True)
class InvariantData:
    """Divisibility chain f_1 | f_2 | ... | f_n of xI - A (monic, possibly
    constant), with the nonconstant tail and derived classifications."""

    chain: tuple
    field: Field

    @property
    def nonconstant(self) -> tuple:
        return tuple(f for f in self.chain if f.degree >= 1)

    @property
    def minimal_polynomial(self) -> Poly:
        return self.chain[-1]

    @property
    def degrees(self) -> tuple:
        return tuple(f.degree for f in self.nonconstant)

    @property
    def parities(self) -> tuple:
        return tuple(parity_class(f) for f in self.nonconstant)

    def __eq__(self, other):
        return isinstance(other, InvariantData) and self.chain == other.chain

    def __hash__(self):
        return hash(self.chain)


def invariant_polynomials(A: Matrix) -> InvariantData:
    diag, _ = _smith_char_matrix(A)
    return InvariantData(tuple(diag), A.field)


def minimal_polynomial(A: Matrix) -> Poly:
    return invariant_polynomials(A).minimal_polynomial


def is_similar(A: Matrix, B: Matrix) -> bool:
    if A.field != B.field:
        return False
    if A.m != B.m or not A.is_square or not B.is_square:
        return False
    return invariant_polynomials(A).chain == invariant_polynomials(B).chain


# ---- rational canonical form ----

@dataclass(frozen=True)
class RcfResult:
    polys: tuple      # nonconstant invariant polynomials f_1 | ... | f_t
    form: Matrix      # Dg[C(f_1), ..., C(f_t)]
    transform: Matrix  # invertible P with P^{-1} A P = form

    def check(self, A: Matrix) -> bool:
        return (A * self.transform) == (self.transform * self.form)


def companion_form(field: Field, polys) -> Matrix:
    return block_diag(field, [companion(f) for f in polys])


def _eval_poly_column(A: Matrix, col) -> tuple:
    """Evaluate a column of polynomials at A: sum_k A^k c_k with c_k the
    vector of k-th coefficients."""
    F = A.field
    n = A.n
    deg = max((p.degree for p in col), default=-1)
    v = Matrix.zeros(F, n, 1)
    power = Matrix.identity(F, n)
    for k in range(deg + 1):
        ck = Matrix.column(F, [p.coeff(k) for p in col])
        v = v + power * ck
        if k < deg:
            power = power * A
    return v.col(0)


def _rcf_from_smith(A: Matrix, inv: InvariantData, uinv) -> Matrix | None:
    F = A.field
    n = A.n
    chain_cols = []
    for idx, f in enumerate(inv.chain):
        if f.degree < 1:
            continue
        gen = _eval_poly_column(A, [uinv[r][idx] for r in range(n)])
        v = Matrix.column(F, gen)
        for _ in range(f.degree):
            chain_cols.append(tuple(v.col(0)))
            v = A * v
    if len(chain_cols) != n:
        return None
    if not chain_cols:
        return Matrix.identity(F, 0)
    P = from_columns(F, chain_cols)
    return P if is_invertible(P) else None


def _rcf_fallback(A: Matrix, form: Matrix, attempts: int = 400) -> Matrix:
    """Find invertible P with A P = P form by searching the intertwiner space."""
    F = A.field
    n = A.n
    # solution space of A X - X form = 0
    from .matrices import Matrix as _M, nullspace_basis as _nb

    rows = []
    for r in range(n):
        for c in range(n):
            coeff = [F.zero] * (n * n)
            for i in range(n):
                coeff[i * n + c] = F.add(coeff[i * n + c], A[r, i])
            for j in range(n):
                coeff[r * n + j] = F.sub(coeff[r * n + j], form[j, c])
            rows.append(coeff)
    basis = _nb(_M.from_rows(F, rows)).vectors
    mats = [Matrix.from_rows(F, (v[i * n:(i + 1) * n] for i in range(n))) for v in basis]
    for X in mats:
        if is_invertible(X):
            return X
    rng = random.Random(0)
    small = [F.of_int(k) for k in range(-2, 4)] if F.is_rationals else [F.of_int(k) for k in range(F.p)]
    for _ in range(attempts):
        X = Matrix.zeros(F, n, n)
        for Mb in mats:
            X = X + Mb.scale(small[rng.randrange(len(small))])
        if is_invertible(X):
            return X
    raise ConstructionFailed("no invertible intertwiner found")


def rcf(A: Matrix) -> RcfResult:
    diag, uinv = _smith_char_matrix(A)
    inv = InvariantData(tuple(diag), A.field)
    form = companion_form(A.field, inv.nonconstant)
    P = _rcf_from_smith(A, inv, uinv)
    if P is None or (A * P) != (P * form):
        P = _rcf_fallback(A, form)
    if (A * P) != (P * form) or not is_invertible(P):
        raise ConstructionFailed("rational form transform failed validation")
    return RcfResult(inv.nonconstant, form, P)


def conjugating_matrix(A: Matrix, B: Matrix) -> Matrix | None:
    """Invertible P with P^{-1} A P = B, or None if A and B are not similar."""
    if A.field != B.field or A.m != B.m or not A.is_square or not B.is_square:
        return None
    ra, rb = rcf(A), rcf(B)
    if ra.polys != rb.polys:
        return None
    return ra.transform * inverse(rb.transform)


# ---- Fitting decomposition ----

@dataclass(frozen=True)
class FittingResult:
    nilpotent: Matrix   # possibly 0x0
    invertible: Matrix  # possibly 0x0
    transform: Matrix   # P^{-1} A P = Dg[nilpotent, invertible]


def fitting(A: Matrix) -> FittingResult:
    """Split F^n = N(A^n) (+) R(A^n), both A-invariant."""
    if not A.is_square:
        raise NonSquare("Fitting decomposition needs a square matrix")
    F = A.field
    n = A.n
    An = A.power(n)
    null = nullspace_basis(An).vectors
    col = colspace_basis(An).vectors
    cols = list(null) + list(col)
    if len(cols) != n:
        raise ConstructionFailed("kernel/image of A^n do not fill the space")
    P = from_columns(F, cols) if cols else Matrix.identity(F, 0)
    if n == 0:
        empty = Matrix(F, ())
        return FittingResult(empty, empty, Matrix.identity(F, 0))
    Pinv = inverse(P)
    C = Pinv * A * P
    k = len(null)
    N = C.block(0, 0, k, k)
    B = C.block(k, k, n - k, n - k)
    if not C.block(0, k, k, n - k).is_zero() or not C.block(k, 0, n - k, k).is_zero():
        raise ConstructionFailed("Fitting blocks are not invariant")
    return FittingResult(N, B, P)


# ---- elementary divisors ----

def elementary_divisors(A: Matrix, seed: int = 0) -> list:
    """[(irreducible monic q, exponent e, multiplicity)] aggregated over the
    nonconstant invariant polynomials; complete factorization required."""
    inv = invariant_polynomials(A)
    found = {}
    for f in inv.nonconstant:
        fl = factor(f, seed)
        if not fl.complete:
            raise NotFullyFactored(f"invariant polynomial {f} does not split", partial=fl)
        for q, e in fl.factors:
            key = (q.coeffs, e)
            if key in found:
                q0, e0, m0 = found[key]
                found[key] = (q0, e0, m0 + 1)
            else:
                found[key] = (q, e, 1)
    return sorted(found.values(), key=lambda t: (t[0].sort_key(), t[1]))


def elementary_divisor_list(A: Matrix, seed: int = 0) -> list:
    """Flat list of prime powers (q, e), one entry per block, sorted."""
    out = []
    for q, e, mult in elementary_divisors(A, seed):
        out.extend([(q, e)] * mult)
    return out


def primary_form(A: Matrix, seed: int = 0):
    """Similarity A = P * Dg[C(q_i^{e_i})] * P^{-1} over the elementary
    divisors, blocks sorted by (factor, exponent).  Returns (blocks, P) with
    blocks the list of (q, e)."""
    blocks = elementary_divisor_list(A, seed)
    F = A.field
    target = block_diag(F, [companion(_poly_pow(q, e)) for q, e in blocks])
    P = conjugating_matrix(A, target)
    if P is None:
        raise ConstructionFailed("primary decomposition transform failed")
    return blocks, P


def _poly_pow(q: Poly, e: int) -> Poly:
    out = Poly.one(q.field)
    for _ in range(e):
        out = out * q
    return out
