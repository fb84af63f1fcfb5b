"""Sum decompositions.

* trace-zero matrices as sums of two nilpotent matrices (three for nonzero
  scalars), via the zero-diagonal similarity recursion;
* sums of two square-zero matrices: possible exactly when every nonconstant
  invariant polynomial is an even- or odd-power polynomial, realized by the
  alternating column split of the companion blocks;
* sums of four square-zero matrices: possible exactly when the trace is
  zero, with a companion-shift gadget for nonzero scalar matrices;
* sums of three square-zero matrices: complete over characteristic two;
  elsewhere a decision procedure combining the nullity bound, the
  divisibility obstruction for split quadratic minimal polynomials, and the
  constructive sufficient branches (nonderogatory resplit, trace-zero
  invariant polynomials, degree >= 2 ladder, well-partitioned coupling);
  inputs outside every branch come back Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .canonical import (
    InvariantData,
    RcfResult,
    char_poly,
    companion_form,
    conjugating_matrix,
    elementary_divisor_list,
    invariant_polynomials,
    rcf,
)
from .errors import (
    ConstructionFailed,
    DegreeMismatch,
    LengthMismatch,
    NonSquare,
    NonzeroTrace,
    NotCompanion,
    NotFullyFactored,
    NotMonic,
    NotSumOfTwo,
    ScalarInput,
    TraceMismatch,
    WrongCharacteristic,
)
from .fields import Field
from .matrices import (
    Matrix,
    block_diag,
    extend_to_basis,
    from_columns,
    hstack,
    inverse,
    is_invertible,
    nullspace_basis,
    rank,
    solve_sylvester,
)
from .polynomials import (
    EVEN_POWER,
    NEITHER,
    ODD_POWER,
    Poly,
    companion,
    parity_class,
)

NILPOTENT = "Nilpotent"
SQUARE_ZERO = "SquareZero"


@dataclass(frozen=True)
class SumCertificate:
    input: Matrix
    summands: tuple
    roles: tuple
    trail: str = ""

    def check_clauses(self) -> list:
        fails = []
        if not self.summands:
            if not self.input.is_zero():
                fails.append("sum mismatch")
            return fails
        total = self.summands[0]
        for s in self.summands[1:]:
            total = total + s
        if total != self.input:
            fails.append("sum mismatch")
        for i, (s, role) in enumerate(zip(self.summands, self.roles)):
            if role == SQUARE_ZERO and not s.is_square_zero():
                fails.append(f"summand {i} role: not square-zero")
            if role == NILPOTENT and not s.is_nilpotent():
                fails.append(f"summand {i} role: not nilpotent")
        return fails

    def verify(self) -> bool:
        return not self.check_clauses()


def _certified_sum(input_matrix, summands, roles, trail) -> SumCertificate:
    cert = SumCertificate(input_matrix, tuple(summands), tuple(roles), trail)
    fails = cert.check_clauses()
    if fails:
        raise ConstructionFailed(f"certificate failed: {fails} [{trail}]")
    return cert


# ---- zero diagonal similarity ----

def _pick_independent_vector(A: Matrix) -> Matrix:
    F = A.field
    n = A.n
    off = next(((i, j) for i in range(n) for j in range(n)
                if i != j and not F.is_zero(A[i, j])), None)
    if off is not None:
        return Matrix.column(F, [F.one if r == off[1] else F.zero for r in range(n)])
    return Matrix.column(F, [F.one] * n)


def _zero_diag_transform(A: Matrix) -> Matrix:
    """P with diag(P^{-1} A P) all zero; A has zero trace and is not a
    nonzero scalar.  Recursive: pin a 0 in the corner, then fix the trailing
    block, de-scalarizing it first when necessary."""
    F = A.field
    n = A.n
    if n == 0 or A.is_zero():
        return Matrix.identity(F, n)
    if A.is_scalar():
        raise ScalarInput("nonzero scalar matrices have no zero-diagonal form")
    x = _pick_independent_vector(A)
    y = A * x
    cols = [tuple(x.col(0)), tuple(y.col(0))]
    cols += extend_to_basis(F, cols, n)
    Q = from_columns(F, cols)
    Ap = inverse(Q) * A * Q
    B = Ap.block(1, 1, n - 1, n - 1)
    if B.is_scalar() and not B.is_zero():
        # trailing block is a nonzero scalar (positive characteristic);
        # conjugating by [[1, e2^T], [0, I]] makes it non-scalar and keeps
        # the corner zero
        from .products import block_of

        e2t = Matrix.unit(F, 1, n - 1, 0, 1)
        P1 = block_of(F, [[Matrix.identity(F, 1), e2t],
                          [Matrix.zeros(F, n - 1, 1), Matrix.identity(F, n - 1)]])
        Ap = P1 * Ap * inverse(P1)
        Q = Q * inverse(P1)
        B = Ap.block(1, 1, n - 1, n - 1)
    PB = _zero_diag_transform(B)
    return Q * block_diag(F, [Matrix.identity(F, 1), PB])


def zero_diagonal_conjugator(A: Matrix) -> Matrix:
    """Invertible P with diag(P^{-1} A P) = 0; needs tr(A) = 0 and A
    non-scalar (or zero)."""
    if not A.is_square:
        raise NonSquare("need a square matrix")
    F = A.field
    if not F.is_zero(A.trace()):
        raise NonzeroTrace("trace must vanish")
    if A.is_scalar() and not A.is_zero():
        raise ScalarInput("nonzero scalar input")
    P = _zero_diag_transform(A)
    Z = inverse(P) * A * P
    if any(not F.is_zero(Z[i, i]) for i in range(A.n)):
        raise ConstructionFailed("diagonal did not vanish")
    return P


def _strict_triangles(Z: Matrix):
    F = Z.field
    n = Z.n
    lower = [[Z[i, j] if i > j else F.zero for j in range(n)] for i in range(n)]
    upper = [[Z[i, j] if i < j else F.zero for j in range(n)] for i in range(n)]
    return Matrix.from_rows(F, lower), Matrix.from_rows(F, upper)


def nilpotent_sum(A: Matrix) -> SumCertificate:
    """Trace-zero A as a sum of nilpotent matrices: two for zero or
    non-scalar A (strict triangles of a zero-diagonal conjugate), three for
    a nonzero scalar (for which two are impossible)."""
    if not A.is_square:
        raise NonSquare("need a square matrix")
    F = A.field
    n = A.n
    if not F.is_zero(A.trace()):
        raise NonzeroTrace("trace must vanish")
    if A.is_zero():
        z = Matrix.zeros(F, n, n)
        return _certified_sum(A, [z, z], [NILPOTENT, NILPOTENT], "zero")
    if A.is_scalar():
        lam = A[0, 0]
        ones = Matrix.from_rows(F, ((F.one for _ in range(n)) for _ in range(n)))
        t1 = Matrix.from_rows(F, ((F.one if i > j else F.zero for j in range(n))
                                  for i in range(n)))
        t2 = Matrix.from_rows(F, ((F.one if i < j else F.zero for j in range(n))
                                  for i in range(n)))
        summands = [t1.scale(F.neg(lam)), ones.scale(lam), t2.scale(F.neg(lam))]
        return _certified_sum(A, summands, [NILPOTENT] * 3, "scalar: three triangles")
    P = zero_diagonal_conjugator(A)
    Z = inverse(P) * A * P
    lo, up = _strict_triangles(Z)
    Pi = inverse(P)
    return _certified_sum(A, [P * lo * Pi, P * up * Pi], [NILPOTENT] * 2,
                          "zero-diagonal triangles")


# ---- sums of two square-zero matrices ----

def is_sum_two_sqz(A: Matrix) -> bool:
    """True iff every nonconstant invariant polynomial is even- or odd-power."""
    if not A.is_square:
        raise NonSquare("need a square matrix")
    return all(p != NEITHER for p in invariant_polynomials(A).parities)


def split_companion_two_sqz(C: Matrix):
    """Companion of an even/odd p as S + T with S^2 = T^2 = 0: alternating
    column split, the parity of p deciding which class keeps column one."""
    F = C.field
    n = C.n
    p = char_poly(C)
    par = parity_class(p)
    if par == NEITHER:
        raise NotSumOfTwo("companion polynomial is neither even nor odd")
    cols_s, cols_t = [], []
    zero_col = tuple(F.zero for _ in range(n))
    for j in range(n):  # 0-based column j is position j+1
        odd_position = (j % 2 == 0)
        take_s = odd_position if n % 2 == 0 else not odd_position
        if take_s:
            cols_s.append(C.col(j))
            cols_t.append(zero_col)
        else:
            cols_s.append(zero_col)
            cols_t.append(C.col(j))
    S = from_columns(F, cols_s)
    T = from_columns(F, cols_t)
    if not S.is_square_zero() or not T.is_square_zero():
        raise ConstructionFailed("companion split is not square-zero")
    return S, T


def sum_two_sqz(A: Matrix) -> SumCertificate:
    """A = S + T with S^2 = T^2 = 0; needs all invariant polynomials even or
    odd.  Works blockwise on the companion form of the invariant
    polynomials; when A is already in that form no conjugation happens."""
    if not is_sum_two_sqz(A):
        raise NotSumOfTwo("some invariant polynomial is neither even nor odd")
    F = A.field
    n = A.n
    inv = invariant_polynomials(A)
    if not inv.nonconstant:
        z = Matrix.zeros(F, n, n)
        return _certified_sum(A, [z, z], [SQUARE_ZERO] * 2, "zero")
    form = companion_form(F, inv.nonconstant)
    if A == form:
        P = Matrix.identity(F, n)
    else:
        P = rcf(A).transform
    parts = [split_companion_two_sqz(companion(f)) for f in inv.nonconstant]
    S = block_diag(F, [p[0] for p in parts])
    T = block_diag(F, [p[1] for p in parts])
    Pi = inverse(P)
    return _certified_sum(A, [P * S * Pi, P * T * Pi], [SQUARE_ZERO] * 2,
                          "companion column split")


# ---- sums of four square-zero matrices ----

def _scalar_gadget_summands(F: Field, lam):
    """lam*I_c (c = char F, lam != 0) as four square-zero summands: the
    companion of p and a conjugate of the companion of p(x-1) differ by I_c
    for p = x^2 (c = 2) or p = x^c - x (odd c), and both split in two."""
    c = F.characteristic
    if c == 2:
        p = Poly.x_power(F, 2)
    else:
        p = Poly.make(F, [F.zero, F.neg(F.one)] + [F.zero] * (c - 2) + [F.one])
    p_shift = p.shift_argument(F.neg(F.one))  # p(x - 1)
    Cp = companion(p)
    Cs = companion(p_shift)
    M = Matrix.identity(F, c) + Cp
    P = conjugating_matrix(M, Cs)
    if P is None:
        raise ConstructionFailed("companion shift is not similar")
    s1, s2 = split_companion_two_sqz(Cs)
    s3, s4 = split_companion_two_sqz(Cp)
    Pi = inverse(P)
    return [(P * s1 * Pi).scale(lam), (P * s2 * Pi).scale(lam),
            (-s3).scale(lam), (-s4).scale(lam)]


def sum_four_sqz(A: Matrix) -> SumCertificate:
    """A as a sum of four square-zero matrices; possible iff tr(A) = 0."""
    if not A.is_square:
        raise NonSquare("need a square matrix")
    F = A.field
    n = A.n
    if not F.is_zero(A.trace()):
        raise NonzeroTrace("trace must vanish")
    z = Matrix.zeros(F, n, n)
    if A.is_zero():
        return _certified_sum(A, [z] * 4, [SQUARE_ZERO] * 4, "zero")
    if A.is_scalar():
        c = F.characteristic
        if c == 0 or n % c:
            raise ConstructionFailed("scalar with zero trace needs char | n")
        lam = A[0, 0]
        per_block = _scalar_gadget_summands(F, lam)
        copies = n // c
        summands = [block_diag(F, [part] * copies) for part in per_block]
        return _certified_sum(A, summands, [SQUARE_ZERO] * 4, "scalar gadget")
    nil = nilpotent_sum(A)
    summands = []
    for N in nil.summands:
        if N.is_zero():
            summands.extend([z, z])
        else:
            two = sum_two_sqz(N)
            summands.extend(two.summands)
    return _certified_sum(A, summands, [SQUARE_ZERO] * 4, "nilpotent halves split")


# ---- companion resplits and couplings ----

def is_companion(C: Matrix) -> bool:
    if not C.is_square or C.n == 0:
        return False
    F = C.field
    n = C.n
    for i in range(n):
        for j in range(n - 1):
            want = F.one if i == j + 1 else F.zero
            if C[i, j] != want:
                return False
    return True


def resplit_companion(Cp: Matrix, b) -> tuple:
    """C(p) = S + C(q): replace the low coefficients of p with the given
    list b (ascending, length n-1), keeping the subleading coefficient; S
    carries the differences in its last column and is square-zero."""
    if not is_companion(Cp):
        raise NotCompanion("input is not a companion matrix")
    F = Cp.field
    n = Cp.n
    b = list(b)
    if len(b) != n - 1:
        raise LengthMismatch(f"need {n - 1} coefficients")
    p = char_poly(Cp)
    q = Poly.make(F, [F.neg(v) for v in b] + [p.coeff(n - 1), F.one])
    Cq = companion(q)
    S = Cp - Cq
    if not S.is_square_zero():
        raise ConstructionFailed("resplit difference is not square-zero")
    return S, Cq


def parity_truncation(p: Poly) -> Poly:
    """Zero every coefficient whose exponent parity differs from deg p; the
    result is even-power (even degree) or odd-power (odd degree)."""
    F = p.field
    n = p.degree
    return Poly.make(F, [c if i % 2 == n % 2 else F.zero for i, c in enumerate(p.coeffs)])


def trace_zero_companion_three_sum(Cp: Matrix):
    """C(p) with tr = 0 as (S1, S2, S3): parity truncation keeps an even/odd
    core, the square-zero remainder carries the off-parity coefficients."""
    F = Cp.field
    p = char_poly(Cp)
    if not F.is_zero(Cp.trace()):
        raise NonzeroTrace("companion trace must vanish")
    q = parity_truncation(p)
    S3, Cq = resplit_companion(Cp, [F.neg(q.coeff(i)) for i in range(p.degree - 1)])
    S1, S2 = split_companion_two_sqz(Cq)
    return S1, S2, S3


def couple_companions(p1: Poly, p2: Poly, p: Poly):
    """(M, D) with M = [[C(p1), D], [N, C(p2)]] nonderogatory of
    characteristic polynomial p; N has a single one in its upper right
    corner.  D is found by back-substitution against the shifted-divisor
    basis p2 // x^i of the low-degree polynomial space."""
    F = p1.field
    for q in (p1, p2, p):
        if not q.is_monic:
            raise NotMonic("all polynomials must be monic")
    k = p1.degree
    nk = p2.degree
    n = p.degree
    if n != k + nk or k < 1 or nk < 1:
        raise DegreeMismatch("degrees must add up")
    if p.coeff(n - 1) != F.add(p1.coeff(k - 1), p2.coeff(nk - 1)):
        raise TraceMismatch("subleading coefficients must add up")
    R = p1 * p2 - p  # degree <= n - 2
    ds = []
    for i in range(1, nk):
        top = R.coeff(n - 1 - i)
        di = Poly.make(F, [F.zero] * (k - 1) + [top])
        ds.append(di)
        R = R - di * (p2 // Poly.x_power(F, i))
    if R.degree > k - 1:
        raise ConstructionFailed("residual degree too high in coupling")
    ds.append(R)
    D = Matrix.from_rows(F, ((ds[c].coeff(r) for c in range(nk)) for r in range(k)))
    N = Matrix.unit(F, nk, k, 0, k - 1)
    from .products import block_of

    M = block_of(F, [[companion(p1), D], [N, companion(p2)]])
    if char_poly(M) != p:
        raise ConstructionFailed("coupled matrix has the wrong characteristic polynomial")
    return M, D


def _chain_with_couplers(F: Field, polys: list) -> Matrix:
    """Dg[C(q_1), ..., C(q_t)] plus unit couplers on the subdiagonal joints,
    giving a nonderogatory matrix with characteristic polynomial prod(q_i)."""
    blocks = [companion(q) for q in polys]
    M = block_diag(F, blocks)
    rows = [list(r) for r in M.rows]
    off = 0
    for b in blocks[:-1]:
        off += b.n
        rows[off][off - 1] = F.one
    return Matrix.from_rows(F, rows)


def _couple_chain_blocks(K1: Matrix, K2: Matrix, target: Poly) -> Matrix:
    """D with char_poly([[K1, D], [N, K2]]) = target, N the corner unit; the
    characteristic polynomial is affine in the entries of D because the
    lower-left block admits only one crossing per permutation term."""
    F = K1.field
    k, nk = K1.n, K2.n
    n = k + nk
    N = Matrix.unit(F, nk, k, 0, k - 1)
    from .products import block_of

    def charpoly_of(D):
        return char_poly(block_of(F, [[K1, D], [N, K2]]))

    from .matrices import solve_right

    base = charpoly_of(Matrix.zeros(F, k, nk))
    cols = []
    for i in range(k):
        for j in range(nk):
            delta = charpoly_of(Matrix.unit(F, k, nk, i, j)) - base
            cols.append(tuple(delta.coeff(d) for d in range(n)))
    rhs = target - base
    lin = from_columns(F, cols)
    rhs_col = Matrix.column(F, [rhs.coeff(d) for d in range(n)])
    sol = solve_right(lin, rhs_col)
    D = Matrix.from_rows(F, ((sol[i * nk + j, 0] for j in range(nk)) for i in range(k)))
    if charpoly_of(D) != target:
        raise ConstructionFailed("chain coupling solve failed")
    return D


# ---- three square-zero summands ----

@dataclass(frozen=True)
class ThreeSumVerdict:
    status: str  # "Yes" | "No" | "Unknown"
    certificate: Optional[SumCertificate] = None
    reason: str = ""
    checks: tuple = ()


def _pad3(parts):
    """[(s1, s2, s3) or shorter] -> exactly three summand slots."""
    out = []
    for p in parts:
        p = list(p)
        z = Matrix.zeros(p[0].field, p[0].m, p[0].n)
        while len(p) < 3:
            p.append(z)
        out.append(p)
    return out


def _assemble_three(A: Matrix, P: Matrix, block_parts: list, trail: str) -> SumCertificate:
    """Blockwise summand triples, block-diagonal assembly, conjugation back."""
    F = A.field
    parts = _pad3(block_parts)
    Pi = inverse(P)
    summands = [P * block_diag(F, [p[i] for p in parts]) * Pi for i in range(3)]
    return _certified_sum(A, summands, [SQUARE_ZERO] * 3, trail)


def _two_sum_parts(M: Matrix):
    two = sum_two_sqz(M)
    return two.summands[0], two.summands[1]


def _well_partition_layout(A: Matrix, seed: int = 0):
    """Companion layout [p-power blocks..., other blocks..., merged linear]
    satisfying the partition rules: only the first p-block and the trailing
    merged block may have degree one, and the p-power group is coprime to
    every other block.  Requires at most one linear elementary divisor per
    root and a minimal polynomial with at least two irreducible factors."""
    eds = elementary_divisor_list(A, seed)
    by_base = {}
    for q, e in eds:
        by_base.setdefault(q.coeffs, []).append((q, e))
    if len(by_base) < 2:
        return None
    for key, lst in by_base.items():
        q = lst[0][0]
        if q.degree == 1 and sum(1 for _, e in lst if e == 1) > 1:
            return None
    # the group with the most blocks plays the chained-power role; ties by key
    best_key = max(by_base, key=lambda kk: (len(by_base[kk]), tuple(str(c) for c in kk)))
    p_group = sorted(by_base[best_key], key=lambda t: t[1])
    others = [t for kk, lst in sorted(by_base.items(),
                                      key=lambda it: tuple(str(c) for c in it[0]))
              for t in lst if kk != best_key]
    linear = sorted([q for q, e in others if e == 1 and q.degree == 1],
                    key=Poly.sort_key)
    rest = [(q, e) for q, e in others if not (e == 1 and q.degree == 1)]
    polys = [_pow(q, e) for q, e in p_group]
    s = len(polys)
    q_polys = [_pow(q, e) for q, e in sorted(rest, key=lambda t: (t[0].sort_key(), t[1]))]
    if linear:
        merged = Poly.one(A.field)
        for q in linear:
            merged = merged * q
        q_polys.append(merged)
    if not q_polys:
        return None
    return polys, q_polys, s


def _pow(q: Poly, e: int) -> Poly:
    out = Poly.one(q.field)
    for _ in range(e):
        out = out * q
    return out


def three_sum_via_well_partitioned(A: Matrix, seed: int = 0) -> Optional[SumCertificate]:
    """Trace-zero A similar to a well-partitioned layout becomes
    C(x^n) + square-zero: couple the two coprime chains into a nonderogatory
    nilpotent matrix, decouple with a Sylvester solve, split C(x^n)."""
    F = A.field
    n = A.n
    layout = _well_partition_layout(A)
    if layout is None:
        return None
    p_polys, q_polys, s = layout
    all_polys = p_polys + q_polys
    W = block_diag(F, [companion(q) for q in all_polys])
    P0 = conjugating_matrix(A, W)
    if P0 is None:
        raise ConstructionFailed("well-partitioned layout is not similar to the input")
    K1 = _chain_with_couplers(F, p_polys)
    K2 = _chain_with_couplers(F, q_polys)
    W1 = block_diag(F, [companion(q) for q in p_polys])
    W2 = block_diag(F, [companion(q) for q in q_polys])
    target = Poly.x_power(F, n)
    D = _couple_chain_blocks(K1, K2, target)
    from .products import block_of

    k = K1.n
    N = Matrix.unit(F, K2.n, k, 0, k - 1)
    K = block_of(F, [[K1, D], [N, K2]])
    Sprime = block_of(F, [[W1 - K1, Matrix.zeros(F, k, K2.n)], [-N, W2 - K2]])
    if not Sprime.is_square_zero():
        raise ConstructionFailed("coupler remainder is not square-zero")
    X = solve_sylvester(W1, W2, D)
    Y = block_of(F, [[Matrix.identity(F, k), X],
                     [Matrix.zeros(F, K2.n, k), Matrix.identity(F, K2.n)]])
    rc = rcf(K)
    if len(rc.polys) != 1 or rc.polys[0] != target:
        raise ConstructionFailed("coupled chain is not nonderogatory nilpotent")
    s1c, s2c = split_companion_two_sqz(companion(target))
    U = P0 * Y * rc.transform
    Ui = inverse(U)
    mid = P0 * Y
    midi = inverse(mid)
    summands = [U * s1c * Ui, U * s2c * Ui, mid * Sprime * midi]
    return _certified_sum(A, summands, [SQUARE_ZERO] * 3, "well-partitioned coupling")


def sum_three_sqz_char2(A: Matrix) -> SumCertificate:
    """Over characteristic two, every trace-zero matrix is a sum of three
    square-zero matrices: pair up repeated linear elementary divisors into
    scalar 2x2 blocks, close a prime-power remainder by exponent parity, and
    route everything else through the well-partitioned coupling."""
    F = A.field
    if F.characteristic != 2:
        raise WrongCharacteristic("this construction needs characteristic two")
    if not A.is_square:
        raise NonSquare("need a square matrix")
    if not F.is_zero(A.trace()):
        raise NonzeroTrace("trace must vanish")
    n = A.n
    if n == 0:
        e = Matrix.identity(F, 0)
        return _certified_sum(A, [e, e, e], [SQUARE_ZERO] * 3, "empty")
    eds = elementary_divisor_list(A)
    linear_counts = {}
    for q, e in eds:
        if e == 1 and q.degree == 1:
            linear_counts[q.coeffs] = linear_counts.get(q.coeffs, 0) + 1
    pair_lams = []
    drop = {}
    for key, cnt in sorted(linear_counts.items(), key=lambda it: tuple(str(c) for c in it[0])):
        pairs = cnt // 2
        if pairs:
            lam = F.neg(key[0])  # root of x - lam stored as (-lam, 1)
            pair_lams.extend([lam] * pairs)
            drop[key] = 2 * pairs
    kept = []
    for q, e in eds:
        key = q.coeffs
        if e == 1 and q.degree == 1 and drop.get(key, 0) > 0:
            drop[key] -= 1
            continue
        kept.append((q, e))

    block_parts = []
    target_blocks = []
    if kept:
        bases = {q.coeffs for q, _ in kept}
        if len(bases) == 1:
            q = kept[0][0]
            exps = sorted(e for _, e in kept)
            kdeg = q.degree
            if F.is_zero(q.coeff(kdeg - 1)):
                for e in exps:
                    Cb = companion(_pow(q, e))
                    target_blocks.append(Cb)
                    block_parts.append(trace_zero_companion_three_sum(Cb))
            else:
                evens = [e for e in exps if e % 2 == 0]
                odds = [e for e in exps if e % 2 == 1]
                if len(odds) % 2:
                    raise ConstructionFailed("odd-exponent blocks do not pair up")
                for e in evens:
                    Cb = companion(_pow(q, e))
                    target_blocks.append(Cb)
                    block_parts.append(_two_sum_parts(Cb))
                from .products import block_of

                for ea, eb in zip(odds[0::2], odds[1::2]):
                    Ca, Cb2 = companion(_pow(q, ea)), companion(_pow(q, eb))
                    Ncoup = Matrix.unit(F, Cb2.n, Ca.n, 0, Ca.n - 1)
                    Spair = block_of(F, [[Matrix.zeros(F, Ca.n, Ca.n),
                                          Matrix.zeros(F, Ca.n, Cb2.n)],
                                         [Ncoup, Matrix.zeros(F, Cb2.n, Cb2.n)]])
                    Cchain = block_of(F, [[Ca, Matrix.zeros(F, Ca.n, Cb2.n)],
                                          [Ncoup, Cb2]])
                    s1, s2 = _two_sum_parts(Cchain)
                    target_blocks.append(block_diag(F, [Ca, Cb2]))
                    block_parts.append((s1, s2, Spair))
        else:
            A1 = block_diag(F, [companion(_pow(q, e)) for q, e in kept])
            cert1 = three_sum_via_well_partitioned(A1)
            if cert1 is None:
                raise ConstructionFailed("well-partitioned layout unavailable")
            target_blocks.append(A1)
            block_parts.append(tuple(cert1.summands))
    for lam in pair_lams:
        lamI2 = Matrix.diagonal(F, [lam, lam])
        J2lam = Matrix.jordan_block(F, 2, lam)
        J20 = Matrix.jordan_block(F, 2, F.zero)
        s1, s2 = _two_sum_parts(J2lam)
        target_blocks.append(lamI2)
        block_parts.append((s1, s2, J20))  # -J2(0) = J2(0) in characteristic two
    target = block_diag(F, target_blocks)
    P = conjugating_matrix(A, target)
    if P is None:
        raise ConstructionFailed("pairing layout is not similar to the input")
    return _assemble_three(A, P, block_parts, "characteristic-two pairing")


# ---- split quadratic minimal polynomial (characteristic zero) ----

def _eigen_pair_transform(F: Field, a, b) -> Matrix:
    """E with E^{-1} C((x-a)(x-b)) E = Dg[a, b]; needs a != b."""
    return Matrix.from_rows(F, [[F.neg(b), F.neg(a)], [F.one, F.one]])


def _takahashi_gadget_pair(F: Field, a, b, c, d):
    """(S, M) with Dg[C(f), C(f)] = S + M for f = (x-a)(x-b): S is
    square-zero and M is similar to Dg[J_2(c), J_2(d)], for any c != d with
    c + d = a + b."""
    f = Poly.make(F, [F.mul(a, b), F.neg(F.add(a, b)), F.one])
    TB = block_diag(F, [companion(f), companion(f)])
    E = block_diag(F, [_eigen_pair_transform(F, a, b)] * 2)
    # Dg[a, b, a, b] in the eigenbasis
    if {c, d} == {a, b}:
        perm = [0, 2, 1, 3] if c == a else [1, 3, 0, 2]  # -> Dg[c, c, d, d]
        Pi = from_columns(F, [tuple(F.one if r == p else F.zero for r in range(4))
                              for p in perm])
        W = E * Pi
        M_local = block_diag(F, [Matrix.jordan_block(F, 2, c), Matrix.jordan_block(F, 2, d)])
        S_local = -block_diag(F, [Matrix.jordan_block(F, 2, F.zero)] * 2)
    else:
        Pi = from_columns(F, [tuple(F.one if r == p else F.zero for r in range(4))
                              for p in [1, 3, 0, 2]])  # -> Dg[b, b, a, a]
        g = F.mul(F.sub(a, c), F.sub(c, b))
        bd = F.div(F.sub(b, d), g)
        ac_inv = F.inv(F.sub(a, c))
        P = Matrix.from_rows(F, [
            [F.zero, bd, F.zero, ac_inv],
            [bd, F.zero, ac_inv, F.zero],
            [F.zero, F.one, F.zero, F.one],
            [F.one, F.zero, F.one, F.zero]])
        if not is_invertible(P):
            raise ConstructionFailed("pairing transform is singular")
        Q = block_diag(F, [Matrix.identity(F, 1), Matrix.jordan_block(F, 2, F.one),
                           Matrix.identity(F, 1)])
        W = E * Pi * inverse(P) * Q
        S_local = Matrix.from_rows(F, [
            [F.zero] * 4,
            [F.zero] * 4,
            [g, F.sub(d, c), F.zero, F.zero],
            [F.zero, g, F.zero, F.zero]])
        M_local = Matrix.from_rows(F, [
            [c, F.one, F.one, F.zero],
            [F.zero, c, F.zero, F.one],
            [F.zero, F.zero, d, F.neg(F.one)],
            [F.zero, F.zero, F.zero, d]])
    Wi = inverse(W)
    S = W * S_local * Wi
    M = W * M_local * Wi
    if TB != S + M or not S.is_square_zero():
        raise ConstructionFailed("quadratic pair gadget failed validation")
    return S, M


def _takahashi_leaves(r: int, m2: int) -> list:
    """Split (r ones, m2 quadratic blocks) into leaves (cnt2, cnt1)."""
    if r % 2 == 1:
        return [(m2 // r, 1)] * r
    s = 2 * m2 // r
    if s % 2 == 0:
        return [(s // 2, 1)] * r
    return [(s, 2)] * (r // 2)


def _ladder_leaf(F: Field, a, b, cnt2: int):
    """Blocks [C(f) x cnt2, [a]] rewritten as (targets, remainders): the
    quadratic blocks are resplit so their roots telescope in plus/minus
    pairs down to zero."""
    f = Poly.make(F, [F.mul(a, b), F.neg(F.add(a, b)), F.one])
    delta = F.add(a, b)
    t = cnt2 + 1
    mus = [F.add(a, F.mul(F.of_int(j), delta)) for j in range(t)]  # mu_1 .. mu_t
    if not F.is_zero(mus[-1]):
        raise ConstructionFailed("ladder does not close at zero")
    targets = []
    remainders = []
    for i in range(2, t + 1):
        # g = (x + mu_{i-1})(x - mu_i), written with 1-based mu indices
        g = Poly.make(F, [F.neg(F.mul(mus[i - 2], mus[i - 1])),
                          F.neg(F.sub(mus[i - 1], mus[i - 2])), F.one])
        S_i, Cg = resplit_companion(companion(f), [F.neg(g.coeff(0))])
        targets.append(Cg)
        remainders.append(S_i)
    targets.append(Matrix.from_rows(F, [[a]]))
    remainders.append(Matrix.zeros(F, 1, 1))
    return targets, remainders


def _gadget_leaf(F: Field, a, b, cnt2: int):
    """Blocks [C(f) x cnt2, [a], [a]] with cnt2 odd: quadratic blocks pair
    into shifted Jordan couples, the two singles close the last pair."""
    kg = (cnt2 - 1) // 2
    ap = F.div(a, F.of_int(cnt2))
    f = Poly.make(F, [F.mul(a, b), F.neg(F.add(a, b)), F.one])
    targets = []
    remainders = []
    sizes = []
    for i in range(1, kg + 1):
        c = F.neg(F.mul(F.of_int(2 * i + 1), ap))
        d = F.mul(F.of_int(2 * i - 1), ap)
        S, M = _takahashi_gadget_pair(F, a, b, c, d)
        targets.append(M)
        remainders.append(S)
        sizes.append(4)
    # trailing quadratic block: resplit onto the double root -a'
    g0 = F.mul(ap, ap)
    S_last, Cg = resplit_companion(companion(f), [F.neg(g0)])
    targets.append(Cg)
    remainders.append(S_last)
    sizes.append(2)
    # the pair of singles: Dg[a, a] = J_2(a) + (Dg[a, a] - J_2(a))
    J2a = Matrix.jordan_block(F, 2, a)
    targets.append(J2a)
    remainders.append(Matrix.diagonal(F, [a, a]) - J2a)
    sizes.append(2)
    return targets, remainders


def takahashi_three_sum(A: Matrix) -> SumCertificate:
    """Three square-zero summands for trace-zero A over a characteristic-zero
    field whose minimal polynomial is (x-a)(x-b) with distinct roots in the
    field; requires the divisibility condition r | 2m on the counts of
    degree-one (r) and degree-two (m) invariant polynomials when r >= 1."""
    F = A.field
    inv = invariant_polynomials(A)
    ones = [f for f in inv.nonconstant if f.degree == 1]
    twos = [f for f in inv.nonconstant if f.degree == 2]
    if len(ones) + len(twos) != len(inv.nonconstant):
        raise ConstructionFailed("minimal polynomial is not quadratic")
    r, m2 = len(ones), len(twos)
    if r == 0:
        two = sum_two_sqz(A)
        z = Matrix.zeros(F, A.n, A.n)
        return _certified_sum(A, [*two.summands, z], [SQUARE_ZERO] * 3,
                              "balanced quadratic blocks")
    if (2 * m2) % r:
        raise ConstructionFailed("divisibility obstruction")
    a = F.neg(ones[0].coeff(0))
    f2 = twos[0]
    b = F.sub(F.neg(f2.coeff(1)), a)
    leaves = _takahashi_leaves(r, m2)
    f = Poly.make(F, [F.mul(a, b), F.neg(F.add(a, b)), F.one])
    layout = []
    targets = []
    remainders = []
    for cnt2, cnt1 in leaves:
        if cnt1 == 1:
            t_blocks, r_blocks = _ladder_leaf(F, a, b, cnt2)
        else:
            t_blocks, r_blocks = _gadget_leaf(F, a, b, cnt2)
        layout += [companion(f)] * cnt2 + [Matrix.from_rows(F, [[a]])] * cnt1
        targets += t_blocks
        remainders += r_blocks
    arrangement = block_diag(F, layout)
    P = conjugating_matrix(A, arrangement)
    if P is None:
        raise ConstructionFailed("leaf arrangement is not similar to the input")
    M = block_diag(F, targets)
    S3 = block_diag(F, remainders)
    if arrangement != M + S3:
        raise ConstructionFailed("leaf targets do not recombine")
    s1, s2 = _two_sum_parts(M)
    Pi = inverse(P)
    return _certified_sum(A, [P * s1 * Pi, P * s2 * Pi, P * S3 * Pi],
                          [SQUARE_ZERO] * 3, "split quadratic ladder")


# ---- all invariant degrees >= 2 (characteristic zero) ----

def _avoidance_element(F: Field, traces: list):
    """Smallest positive integer (as a field element) c with c != 0,
    c != any partial sum, and 2c != any adjacent partial-sum sum."""
    psums = [F.zero]
    for t in traces:
        psums.append(F.add(psums[-1], t))
    k = 1
    while True:
        c = F.of_int(k)
        ok = not F.is_zero(c)
        for i in range(1, len(psums)):
            if c == psums[i] or F.mul(F.of_int(2), c) == F.add(psums[i - 1], psums[i]):
                ok = False
                break
        if ok:
            return c
        k += 1


def three_sum_degrees_two_plus(A: Matrix) -> SumCertificate:
    """Three square-zero summands when every nonconstant invariant
    polynomial has degree >= 2, the trace vanishes, and the characteristic
    is zero: resplit every companion block onto (x - l1)(x - l2) x^(d-2)
    with telescoping nonzero roots, then split the balanced remainder."""
    F = A.field
    n = A.n
    inv = invariant_polynomials(A)
    fs = inv.nonconstant
    if any(f.degree < 2 for f in fs):
        raise ConstructionFailed("a degree-one invariant polynomial is present")
    traces = [F.neg(f.coeff(f.degree - 1)) for f in fs]
    c = _avoidance_element(F, traces)
    psum = F.zero
    targets = []
    remainders = []
    for f, tr in zip(fs, traces):
        lam1 = F.sub(c, psum)
        psum = F.add(psum, tr)
        lam2 = F.sub(psum, c)
        d = f.degree
        g = Poly.make(F, [F.neg(lam1), F.one]) * Poly.make(F, [F.neg(lam2), F.one]) \
            * Poly.x_power(F, d - 2)
        S_i, Cg = resplit_companion(companion(f), [F.neg(g.coeff(i)) for i in range(d - 1)])
        targets.append(Cg)
        remainders.append(S_i)
    form = companion_form(F, fs)
    P = Matrix.identity(F, n) if A == form else rcf(A).transform
    M = block_diag(F, targets)
    S3 = block_diag(F, remainders)
    if form != M + S3:
        raise ConstructionFailed("resplit blocks do not recombine")
    s1, s2 = _two_sum_parts(M)
    Pi = inverse(P)
    return _certified_sum(A, [P * s1 * Pi, P * s2 * Pi, P * S3 * Pi],
                          [SQUARE_ZERO] * 3, "degree>=2 telescoping resplit")


def three_sum_nonderogatory(A: Matrix) -> SumCertificate:
    """Three square-zero summands for a trace-zero nonderogatory matrix (any
    field): one parity resplit of its companion form."""
    F = A.field
    n = A.n
    inv = invariant_polynomials(A)
    if len(inv.nonconstant) != 1:
        raise ConstructionFailed("matrix is derogatory")
    form = companion_form(F, inv.nonconstant)
    P = Matrix.identity(F, n) if A == form else rcf(A).transform
    s1, s2, s3 = trace_zero_companion_three_sum(form)
    Pi = inverse(P)
    return _certified_sum(A, [P * s1 * Pi, P * s2 * Pi, P * s3 * Pi],
                          [SQUARE_ZERO] * 3, "nonderogatory parity resplit")


def three_sum_trace_zero_blocks(A: Matrix) -> SumCertificate:
    """Three square-zero summands when every nonconstant invariant
    polynomial has zero subleading coefficient (any field)."""
    F = A.field
    n = A.n
    inv = invariant_polynomials(A)
    fs = inv.nonconstant
    if any(not F.is_zero(f.coeff(f.degree - 1)) for f in fs):
        raise ConstructionFailed("an invariant polynomial has nonzero trace")
    if not fs:
        z = Matrix.zeros(F, n, n)
        return _certified_sum(A, [z, z, z], [SQUARE_ZERO] * 3, "zero")
    form = companion_form(F, fs)
    P = Matrix.identity(F, n) if A == form else rcf(A).transform
    parts = [trace_zero_companion_three_sum(companion(f)) for f in fs]
    Pi = inverse(P)
    summands = [P * block_diag(F, [p[i] for p in parts]) * Pi for i in range(3)]
    return _certified_sum(A, summands, [SQUARE_ZERO] * 3, "trace-zero blocks resplit")


def _field_eigenvalues(A: Matrix) -> list:
    """Roots of the characteristic polynomial lying in the ground field."""
    F = A.field
    p = char_poly(A)
    if F.is_rationals:
        from .polynomials import _rational_roots

        return sorted(set(_rational_roots(p)))
    return [lam for lam in F.elements() if F.is_zero(p.evaluate(F.of_int(lam)))]


def _nullity(A: Matrix) -> int:
    return A.n - rank(A)


def sum_three_decide(A: Matrix) -> ThreeSumVerdict:
    """Decide whether A is a sum of three square-zero matrices.

    Order of evaluation: nonzero trace is an immediate no; characteristic
    two is a constructive yes; a field eigenvalue whose eigenspace exceeds
    3n/4 is a no; a split quadratic minimal polynomial over characteristic
    zero is decided by the divisibility criterion; then the constructive
    sufficient branches run (nonderogatory, trace-zero invariant
    polynomials, all degrees >= 2, well-partitioned).  Anything left over is
    Unknown - the undecided regime of the three-summand problem.
    """
    if not A.is_square:
        raise NonSquare("need a square matrix")
    F = A.field
    n = A.n
    checks = []
    if not F.is_zero(A.trace()):
        return ThreeSumVerdict("No", reason="nonzero trace", checks=("trace",))
    checks.append("trace zero")
    if F.characteristic == 2:
        cert = sum_three_sqz_char2(A)
        return ThreeSumVerdict("Yes", cert, checks=tuple(checks + ["characteristic two"]))
    if A.is_zero():
        z = Matrix.zeros(F, n, n)
        cert = _certified_sum(A, [z, z, z], [SQUARE_ZERO] * 3, "zero")
        return ThreeSumVerdict("Yes", cert, checks=tuple(checks + ["zero matrix"]))
    for lam in _field_eigenvalues(A):
        if F.is_zero(lam):
            continue
        nullity = _nullity(A - Matrix.identity(F, n).scale(lam))
        if 4 * nullity > 3 * n:
            reason = f"eigenspace too large: n(A - ({F.format(lam)})I) = {nullity} > 3*{n}/4"
            return ThreeSumVerdict("No", reason=reason,
                                   checks=tuple(checks + ["eigenspace bound"]))
    checks.append("eigenspace bound")
    inv = invariant_polynomials(A)
    minp = inv.minimal_polynomial
    if F.characteristic == 0 and minp.degree == 2:
        from .polynomials import _rational_roots

        roots = _rational_roots(minp)
        if len(roots) == 2 and roots[0] != roots[1]:
            r = sum(1 for f in inv.nonconstant if f.degree == 1)
            m2 = sum(1 for f in inv.nonconstant if f.degree == 2)
            checks.append("split quadratic minimal polynomial")
            if r >= 1:
                if (2 * m2) % r:
                    reason = (f"{r} linear invariant polynomials do not divide "
                              f"2*{m2} quadratic ones")
                    return ThreeSumVerdict("No", reason=reason, checks=tuple(checks))
                cert = takahashi_three_sum(A)
                return ThreeSumVerdict("Yes", cert, checks=tuple(checks))
    if len(inv.nonconstant) == 1:
        cert = three_sum_nonderogatory(A)
        return ThreeSumVerdict("Yes", cert, checks=tuple(checks + ["nonderogatory"]))
    checks.append("not nonderogatory")
    if all(F.is_zero(f.coeff(f.degree - 1)) for f in inv.nonconstant):
        cert = three_sum_trace_zero_blocks(A)
        return ThreeSumVerdict("Yes", cert,
                               checks=tuple(checks + ["trace-zero invariant polynomials"]))
    checks.append("some invariant polynomial has nonzero trace")
    if F.characteristic == 0 and all(f.degree >= 2 for f in inv.nonconstant):
        cert = three_sum_degrees_two_plus(A)
        return ThreeSumVerdict("Yes", cert, checks=tuple(checks + ["all degrees >= 2"]))
    try:
        cert = three_sum_via_well_partitioned(A)
    except NotFullyFactored:
        cert = None
        checks.append("well-partitioned layout blocked by incomplete factorization")
    if cert is not None:
        return ThreeSumVerdict("Yes", cert, checks=tuple(checks + ["well-partitioned"]))
    checks.append("no well-partitioned layout")
    return ThreeSumVerdict("Unknown", reason="outside every decided branch",
                           checks=tuple(checks))
