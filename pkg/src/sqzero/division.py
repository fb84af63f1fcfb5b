"""Matrix division with rank-controlled quotients, and the square-zero
refinement.

Right division: given G (m x n) and F (k x n), decide whether some H with
G = H*F exists, bound the achievable ranks of H, and construct a quotient of
any requested rank as H = [G X] [F C]^R.  The square-zero variant works with
square quotients (G, F of the same shape) and the refined form
H = [0 G BX C2*S] [G F C1 C2]^R.

All choices are deterministic:

* C comes from the identity-augmented row reduction of the divisor (the
  standard-basis columns at the pivot rows), so reruns are reproducible;
* B is a basis of F(N(G)) purged of vectors already inside col(G), taken in
  index order;
* free blocks default to Dg[I_k, 0] / shift matrices sized from the
  requested rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    BadRecipe,
    DimensionMismatch,
    NoSqzQuotient,
    NotDivisible,
    RankOutOfBounds,
)
from .fields import Field
from .matrices import (
    GRAM,
    RREF_STRATEGY,
    Matrix,
    from_columns,
    hstack,
    independent_subset,
    nullspace_basis,
    rank,
    right_inverse,
    rref,
    vstack,
)

SMALL = "Small"
LARGE = "Large"


@dataclass(frozen=True)
class RankBounds:
    low: int
    high: int
    tag: str = SMALL

    def contains(self, r: int) -> bool:
        return self.low <= r <= self.high


@dataclass(frozen=True)
class QuotientRecipe:
    """Optional overrides for the constructions; every block supplied here is
    validated against its defining property before use."""

    C: Optional[Matrix] = None
    B: Optional[Matrix] = None
    X: Optional[Matrix] = None
    S: Optional[Matrix] = None
    strategy: Optional[str] = None  # right-inverse strategy: "gram" or "rref"


def complement_columns(M: Matrix) -> Matrix:
    """Full-column-rank C with col(M) (+) col(C) = F^m.

    Row-reduce [M : I_m]; the identity columns that pick up pivots are
    exactly the standard basis vectors extending col(M).
    """
    F = M.field
    m = M.m
    aug = hstack(M, Matrix.identity(F, m))
    piv = rref(aug).pivots
    cols = [j - M.n for j in piv if j >= M.n]
    if not cols:
        return Matrix(F, tuple(() for _ in range(m)))
    return from_columns(F, [tuple(Matrix.identity(F, m).col(j)) for j in cols])


def _default_strategy(field: Field) -> str:
    return GRAM if field.is_rationals else RREF_STRATEGY


# ---- general right division ----

def divides_right(G: Matrix, F: Matrix) -> bool:
    """True iff some H with G = H*F exists: r(F) = r([G; F])."""
    if G.n != F.n or G.field != F.field:
        raise DimensionMismatch("right division needs matching column counts")
    return rank(F) == rank(vstack(G, F))


def divides_left(G: Matrix, F: Matrix) -> bool:
    """True iff some H with G = F*H exists."""
    if G.m != F.m or G.field != F.field:
        raise DimensionMismatch("left division needs matching row counts")
    return divides_right(G.transpose(), F.transpose())


def quotient_rank_bounds(G: Matrix, F: Matrix) -> RankBounds:
    """r(G) <= r(H) <= r(G) + min(n(G^T), n(F^T)) for right quotients."""
    if not divides_right(G, F):
        raise NotDivisible("F is not a right divisor of G")
    rg = rank(G)
    return RankBounds(rg, rg + min(G.m - rg, F.m - rank(F)))


def quotient_right(G: Matrix, F: Matrix, target_rank: Optional[int] = None,
                   recipe: Optional[QuotientRecipe] = None) -> Matrix:
    """Right quotient H = [G X] [F C]^R with rank(H) = target_rank.

    C extends col(F) to the full space; X is assembled from the standard
    extension of col(G), one column per unit of extra rank.
    """
    recipe = recipe or QuotientRecipe()
    bounds = quotient_rank_bounds(G, F)
    if target_rank is None:
        target_rank = bounds.low
    if not bounds.contains(target_rank):
        raise RankOutOfBounds(f"rank {target_rank} outside {bounds.low}..{bounds.high}")
    Fld = G.field
    k = F.m
    C = recipe.C if recipe.C is not None else complement_columns(F)
    if C.m != k or C.n != k - rank(F):
        raise BadRecipe("C must have k rows and k - r(F) columns")
    FC = hstack(F, C)
    if rank(FC) != k:
        raise BadRecipe("[F C] must be full row rank")
    extra = target_rank - rank(G)
    if recipe.X is not None:
        X = recipe.X
        if X.m != G.m or X.n != C.n:
            raise BadRecipe("X must be m x (k - r(F))")
        if rank(hstack(G, X)) != rank(G) + rank(X):
            raise BadRecipe("col(X) must meet col(G) trivially")
        if rank(X) != extra:
            raise BadRecipe(f"X must have rank {extra}")
    else:
        ext = complement_columns(G)
        cols = [tuple(ext.col(j)) for j in range(extra)]
        cols += [tuple(Matrix.zeros(Fld, G.m, 1).col(0))] * (C.n - extra)
        X = from_columns(Fld, cols) if cols else Matrix(Fld, tuple(() for _ in range(G.m)))
    H = hstack(G, X) * right_inverse(FC, recipe.strategy or _default_strategy(Fld))
    if H * F != G or rank(H) != target_rank:
        raise BadRecipe("constructed quotient failed validation")
    return H


def quotient_left(G: Matrix, F: Matrix, target_rank: Optional[int] = None,
                  recipe: Optional[QuotientRecipe] = None) -> Matrix:
    """Left quotient H with G = F*H, via transposition."""
    rec = recipe or QuotientRecipe()
    rec_t = QuotientRecipe(
        C=rec.C.transpose() if rec.C is not None else None,
        B=rec.B.transpose() if rec.B is not None else None,
        X=rec.X.transpose() if rec.X is not None else None,
        S=rec.S.transpose() if rec.S is not None else None,
        strategy=rec.strategy,
    )
    return quotient_right(G.transpose(), F.transpose(), target_rank, rec_t).transpose()


# ---- square-zero right division ----

def _restricted_range_basis(G: Matrix, F: Matrix) -> list:
    """Basis of R(F restricted to N(G)), in free-variable index order."""
    null = nullspace_basis(G)
    imgs = [tuple((F * Matrix.column(G.field, v)).col(0)) for v in null.vectors]
    return independent_subset(G.field, imgs)


def sqz_b_matrix(G: Matrix, F: Matrix) -> Matrix:
    """B with R(G) (+) R(B) = R(G) + R(F | N(G)): basis vectors of the
    restricted range that extend col(G), kept in index order."""
    Fld = G.field
    basis = _restricted_range_basis(G, F)
    kept = independent_subset(Fld, basis, base=G)
    if not kept:
        return Matrix(Fld, tuple(() for _ in range(G.m)))
    return from_columns(Fld, kept)


def has_sqz_quotient_right(G: Matrix, F: Matrix) -> bool:
    """True iff a square-zero H with G = H*F exists:
    r(F) = r([G; F]) and r([G F]) = r(G) + r([G F*B0]) with col(B0) = N(G)."""
    if G.m != F.m or G.n != F.n or G.field != F.field:
        raise DimensionMismatch("square-zero quotients need G, F of the same shape")
    if rank(F) != rank(vstack(G, F)):
        return False
    null = nullspace_basis(G)
    if null.k == 0:
        FB = Matrix(G.field, tuple(() for _ in range(G.m)))
    else:
        FB = F * null.matrix(G.field)
    return rank(hstack(G, F)) == rank(G) + rank(hstack(G, FB))


def has_sqz_quotient_left(G: Matrix, F: Matrix) -> bool:
    return has_sqz_quotient_right(G.transpose(), F.transpose())


def sqz_quotient_rank_bounds(G: Matrix, F: Matrix) -> RankBounds:
    """r(G) <= r(H) <= floor(m/2), or m - (r([G F]) - r(G)) in the deficient
    case r([G F]) - r(G) > m/2."""
    if not has_sqz_quotient_right(G, F):
        raise NoSqzQuotient("no square-zero right quotient exists")
    m = G.m
    rg = rank(G)
    gap = rank(hstack(G, F)) - rg
    if 2 * gap <= m:
        return RankBounds(rg, m // 2, SMALL)
    return RankBounds(rg, m - gap, LARGE)


def _shift_matrix(field: Field, t: int, c: int) -> Matrix:
    """t x t square-zero shift: entry (c+j, j) = 1 for j < c, zeros elsewhere."""
    rows = [[field.zero] * t for _ in range(t)]
    for j in range(c):
        rows[c + j][j] = field.one
    return Matrix.from_rows(field, rows)


def sqz_quotient_right(G: Matrix, F: Matrix, target_rank: Optional[int] = None,
                       recipe: Optional[QuotientRecipe] = None) -> Matrix:
    """Square-zero right quotient of each allowable rank.

    Small case (r([G F]) - r(G) <= m/2):
        H = [0 G B*X C2*S] [G F C1 C2]^R,
    with C = [C1 C2] the standard complement of col([G F]), C1 holding r(B)
    columns, X = Dg[I_k, 0] and S the square-zero shift with c ones so that
    rank(H) = r(G) + k + c.

    Large case: H = [0 G B*Y] [G F C]^R with rank(Y) making up the requested
    rank.
    """
    recipe = recipe or QuotientRecipe()
    bounds = sqz_quotient_rank_bounds(G, F)
    if target_rank is None:
        target_rank = bounds.low
    if not bounds.contains(target_rank):
        raise RankOutOfBounds(f"rank {target_rank} outside {bounds.low}..{bounds.high}")
    Fld = G.field
    m = G.m
    rg = rank(G)
    GF_ = hstack(G, F)
    B = recipe.B if recipe.B is not None else sqz_b_matrix(G, F)
    if B.m != m:
        raise BadRecipe("B must have m rows")
    if B.n:
        null = nullspace_basis(G)
        GW = hstack(G, F * null.matrix(Fld)) if null.k else G
        if rank(B) != B.n:
            raise BadRecipe("B must be full column rank")
        if rank(hstack(G, B)) != rg + B.n:
            raise BadRecipe("col(B) must extend col(G)")
        if rank(hstack(GW, B)) != rank(GW):
            raise BadRecipe("col(B) must lie in R(G) + R(F | N(G))")
        if rg + B.n != rank(GW):
            raise BadRecipe("R(G) (+) R(B) must equal R(G) + R(F | N(G))")
    C = recipe.C if recipe.C is not None else complement_columns(GF_)
    if C.m != m or C.n != m - rank(GF_):
        raise BadRecipe("C must have m - r([G F]) columns")
    if C.n and rank(hstack(GF_, C)) != m:
        raise BadRecipe("[G F C] must be full row rank")
    rb = B.n
    strategy = recipe.strategy or _default_strategy(Fld)
    extra = target_rank - rg

    if bounds.tag == SMALL:
        C1 = C.block(0, 0, m, rb)
        C2 = C.block(0, rb, m, C.n - rb)
        t = C2.n
        k = min(extra, rb)
        c = extra - k
        if recipe.X is not None:
            X = recipe.X
            if X.m != rb or X.n != rb:
                raise BadRecipe("X must be square of order r(B)")
            if rank(X) != k:
                raise BadRecipe(f"X must have rank {k}")
        else:
            X = Matrix.from_rows(Fld, ((Fld.one if (i == j and i < k) else Fld.zero
                                        for j in range(rb)) for i in range(rb)))
        if recipe.S is not None:
            S = recipe.S
            if S.m != t or S.n != t:
                raise BadRecipe("S must be square of order r(C) - r(B)")
            if not S.is_square_zero():
                raise BadRecipe("S must be square-zero")
            if rank(S) != c:
                raise BadRecipe(f"S must have rank {c}")
        else:
            S = _shift_matrix(Fld, t, c)
        lhs = hstack(Matrix.zeros(Fld, m, G.n), G, B * X, C2 * S)
        rhs = hstack(G, F, C1, C2)
    else:
        if extra > C.n:
            raise RankOutOfBounds("requested rank above the deficient-case bound")
        Y = Matrix.from_rows(Fld, ((Fld.one if (i == j and i < extra) else Fld.zero
                                    for j in range(C.n)) for i in range(rb)))
        lhs = hstack(Matrix.zeros(Fld, m, G.n), G, B * Y)
        rhs = hstack(G, F, C)
    H = lhs * right_inverse(rhs, strategy)
    if H * F != G or not H.is_square_zero() or rank(H) != target_rank:
        raise BadRecipe("constructed square-zero quotient failed validation")
    return H


def sqz_quotient_left(G: Matrix, F: Matrix, target_rank: Optional[int] = None,
                      recipe: Optional[QuotientRecipe] = None) -> Matrix:
    """Square-zero H with G = F*H, via transposition of the right-division
    construction (rank bounds use the column count)."""
    rec = recipe or QuotientRecipe()
    rec_t = QuotientRecipe(
        C=rec.C.transpose() if rec.C is not None else None,
        B=rec.B.transpose() if rec.B is not None else None,
        X=rec.X.transpose() if rec.X is not None else None,
        S=rec.S.transpose() if rec.S is not None else None,
        strategy=rec.strategy,
    )
    return sqz_quotient_right(G.transpose(), F.transpose(), target_rank, rec_t).transpose()


def sqz_quotient_left_rank_bounds(G: Matrix, F: Matrix) -> RankBounds:
    return sqz_quotient_rank_bounds(G.transpose(), F.transpose())
