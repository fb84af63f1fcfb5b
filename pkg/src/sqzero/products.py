"""Product decompositions.

* any singular matrix (excluding the nonzero nilpotent 2x2 exception) as a
  product of two nilpotent factors of the same rank, built from explicit
  block recipes for zero-Jordan profiles, a triangular similarity L*U with
  prescribed diagonals, and a rank-one coupling solve;
* products of two / three / k square-zero factors with rank control, riding
  on the square-zero quotient machinery.

Every operation returns a ProductCertificate whose factors are verified
exactly (product, nilpotency / square-zero role, rank claims) before return.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .canonical import conjugating_matrix, fitting
from .division import sqz_quotient_right
from .errors import (
    ConstructionFailed,
    DeterminantMismatch,
    ExceptionalCase,
    KTooSmall,
    NonSingular,
    NonSquare,
    NotTwoSqzFactorable,
    Order2NonzeroNilpotent,
    RankOutOfBounds,
    RankTooHigh,
    ScalarInput,
    SingularInput,
)
from .fields import Field
from .matrices import (
    Matrix,
    block_diag,
    colspace_basis,
    det,
    extend_to_basis,
    from_columns,
    hstack,
    independent_subset,
    intersect_subspaces,
    inverse,
    is_invertible,
    nullspace_basis,
    rank,
    solve_right,
    vstack,
)

NILPOTENT = "Nilpotent"
SQUARE_ZERO = "SquareZero"


@dataclass(frozen=True)
class ProductCertificate:
    input: Matrix
    factors: tuple
    roles: tuple
    claimed_ranks: tuple
    trail: str = ""

    def check_clauses(self) -> list:
        """Empty list when the certificate verifies; failure strings otherwise."""
        fails = []
        if not self.factors:
            fails.append("no factors")
            return fails
        prod = self.factors[0]
        for f in self.factors[1:]:
            prod = prod * f
        if prod != self.input:
            fails.append("product mismatch")
        for i, (f, role, r) in enumerate(zip(self.factors, self.roles, self.claimed_ranks)):
            if role == SQUARE_ZERO and not f.is_square_zero():
                fails.append(f"factor {i} role: not square-zero")
            if role == NILPOTENT and not f.is_nilpotent():
                fails.append(f"factor {i} role: not nilpotent")
            if rank(f) != r:
                fails.append(f"factor {i} rank claim {r} != {rank(f)}")
        return fails

    def verify(self) -> bool:
        return not self.check_clauses()


def _certified(input_matrix, factors, roles, trail) -> ProductCertificate:
    cert = ProductCertificate(input_matrix, tuple(factors), tuple(roles),
                              tuple(rank(f) for f in factors), trail)
    fails = cert.check_clauses()
    if fails:
        raise ConstructionFailed(f"certificate failed: {fails} [{trail}]")
    return cert


def block_of(field: Field, grid) -> Matrix:
    """Assemble a matrix from a 2d grid of compatible blocks."""
    return vstack(*[hstack(*row) for row in grid])


# ---- triangular similarity with prescribed diagonals ----

def _pick_independent_vector(A: Matrix) -> Matrix:
    """x with Ax and x linearly independent; exists for non-scalar A."""
    F = A.field
    n = A.n
    off = next(((i, j) for i in range(n) for j in range(n)
                if i != j and not F.is_zero(A[i, j])), None)
    if off is not None:
        return Matrix.column(F, [F.one if r == off[1] else F.zero for r in range(n)])
    return Matrix.column(F, [F.one] * n)  # diagonal non-scalar: all-ones works


def _specify_corner(A: Matrix, lam):
    """Q with Q^{-1} A Q = [[lam, c], [e1, B]]; A must be non-scalar."""
    F = A.field
    n = A.n
    x = _pick_independent_vector(A)
    y = A * x - x.scale(lam)
    cols = [tuple(x.col(0)), tuple(y.col(0))]
    cols += extend_to_basis(F, cols, n)
    Q = from_columns(F, cols)
    Ap = inverse(Q) * A * Q
    if Ap[0, 0] != lam or any(Ap[i, 0] != (F.one if i == 1 else F.zero) for i in range(1, n)):
        raise ConstructionFailed("corner normalization failed")
    return Q, Ap


def _lu_unit(A: Matrix, zs: list):
    """(P, L1, U1) with P^{-1} A P = L1 U1, L1 unit lower triangular,
    diag(U1) = zs; A invertible non-scalar with prod(zs) = det(A)."""
    F = A.field
    n = A.n
    Q, Ap = _specify_corner(A, zs[0])
    z1 = zs[0]
    z1_inv = F.inv(z1)
    if n == 2:
        y, xx = Ap[0, 1], Ap[1, 1]
        L1 = Matrix.from_rows(F, [[F.one, F.zero], [z1_inv, F.one]])
        U1 = Matrix.from_rows(F, [[z1, y], [F.zero, F.sub(xx, F.mul(z1_inv, y))]])
        return Q, L1, U1
    c = Ap.block(0, 1, 1, n - 1)
    B = Ap.block(1, 1, n - 1, n - 1)
    e1 = Matrix.unit(F, n - 1, 1, 0, 0)
    B1 = B - (e1 * c).scale(z1_inv)
    if B1.is_scalar():
        # conjugate by [[1, e2^T], [0, I]] to de-scalarize the lower block
        e2t = Matrix.unit(F, 1, n - 1, 0, 1)
        P1 = block_of(F, [[Matrix.identity(F, 1), e2t],
                          [Matrix.zeros(F, n - 1, 1), Matrix.identity(F, n - 1)]])
        Ap = P1 * Ap * inverse(P1)
        Q = Q * inverse(P1)
        c = Ap.block(0, 1, 1, n - 1)
        B = Ap.block(1, 1, n - 1, n - 1)
        B1 = B - (e1 * c).scale(z1_inv)
        if B1.is_scalar():
            raise ConstructionFailed("lower block is still scalar")
    Pr, Lr, Ur = _lu_unit(B1, zs[1:])
    Pr_inv = inverse(Pr)
    W = block_diag(F, [Matrix.identity(F, 1), Pr])
    L1 = block_of(F, [[Matrix.identity(F, 1), Matrix.zeros(F, 1, n - 1)],
                      [(Pr_inv * e1).scale(z1_inv), Lr]])
    U1 = block_of(F, [[Matrix.from_rows(F, [[z1]]), c * Pr],
                      [Matrix.zeros(F, n - 1, 1), Ur]])
    return Q * W, L1, U1


def lu_similarity(A: Matrix, xs: Sequence, ys: Sequence):
    """(P, L, U) with P^{-1} A P = L*U, diag(L) = xs, diag(U) = ys; A must be
    invertible and non-scalar with det(A) = prod(xs) * prod(ys)."""
    if not A.is_square:
        raise NonSquare("similarity factorization needs a square matrix")
    F = A.field
    n = A.n
    if A.is_scalar():
        raise ScalarInput("input is a scalar matrix")
    d = det(A)
    if F.is_zero(d):
        raise SingularInput("input is singular")
    if len(xs) != n or len(ys) != n:
        raise DeterminantMismatch("need n diagonal entries on each side")
    prod = F.one
    for v in list(xs) + list(ys):
        prod = F.mul(prod, v)
    if prod != d:
        raise DeterminantMismatch("prod(xs)*prod(ys) != det(A)")
    if any(F.is_zero(v) for v in list(xs) + list(ys)):
        raise DeterminantMismatch("diagonal entries must be nonzero")
    zs = [F.mul(x, y) for x, y in zip(xs, ys)]
    P, L1, U1 = _lu_unit(A, zs)
    D = Matrix.diagonal(F, list(xs))
    L = L1 * D
    U = inverse(D) * U1
    if inverse(P) * A * P != L * U:
        raise ConstructionFailed("triangular similarity failed validation")
    return P, L, U


def _lu_of_invertible(B: Matrix):
    """(P, L, U) with P^{-1} B P = L U and L unit lower triangular; scalar
    blocks are already diagonal so the identity transform works for them."""
    F = B.field
    k = B.n
    if k == 0:
        I0 = Matrix.identity(F, 0)
        return I0, I0, I0
    if B.is_scalar():
        return Matrix.identity(F, k), Matrix.identity(F, k), B
    ys = [F.one] * (k - 1) + [det(B)]
    return lu_similarity(B, [F.one] * k, ys)


# ---- zero-Jordan structure ----

def nilpotency_index(N: Matrix) -> int:
    acc = Matrix.identity(N.field, N.n)
    for s in range(N.n + 1):
        if acc.is_zero():
            return s
        acc = acc * N
    raise ValueError("matrix is not nilpotent")


def jordan_zero_chains(N: Matrix) -> list:
    """Chains [v, Nv, ..., N^(j-1) v] forming a basis adapted to the
    zero-Jordan structure of a nilpotent N (ones on the subdiagonal):
    complements are chosen greedily from the kernel filtration in index
    order, seeded with the images of the taller chains."""
    F = N.field
    n = N.n
    if n == 0:
        return []
    s = nilpotency_index(N)
    kernels = []
    power = Matrix.identity(F, n)
    for _ in range(s + 1):
        kernels.append(nullspace_basis(power).vectors)
        power = power * N
    chains = []
    level = []  # current U_{j+1}
    for j in range(s, 0, -1):
        carried = []
        for v in level:
            w = tuple((N * Matrix.column(F, v)).col(0))
            if any(w):
                carried.append(w)
        base_cols = list(kernels[j - 1]) + carried
        base = from_columns(F, base_cols) if base_cols else None
        added = independent_subset(F, kernels[j], base=base)
        for top in added:
            chain = [top]
            v = Matrix.column(F, top)
            for _ in range(j - 1):
                v = N * v
                chain.append(tuple(v.col(0)))
            chains.append(chain)
        level = carried + list(added)
    if sum(len(c) for c in chains) != n:
        raise ConstructionFailed("Jordan chains do not fill the space")
    return chains


def arrange_chains(field: Field, chains: list, size_sequence: Sequence[int]) -> Matrix:
    """Transform whose columns list one chain per requested size, in order."""
    pool = list(chains)
    cols = []
    for size in size_sequence:
        idx = next(i for i, c in enumerate(pool) if len(c) == size)
        cols.extend(pool.pop(idx))
    return from_columns(field, cols)


def jordan_profile(N: Matrix) -> list:
    """Multiset of zero-Jordan block sizes, descending."""
    return sorted((len(c) for c in jordan_zero_chains(N)), reverse=True)


# ---- block recipes for nilpotent pairs ----

def _sparse(field: Field, n: int, entries) -> Matrix:
    rows = [[field.zero] * n for _ in range(n)]
    for i, j, v in entries:  # 1-based
        rows[i - 1][j - 1] = field.of_int(v) if isinstance(v, int) else v
    return Matrix.from_rows(field, rows)


def _basis_columns(field: Field, n: int, idx_list) -> Matrix:
    """Columns e_i (1-based indices); an index of 0 gives a zero column."""
    cols = []
    for i in idx_list:
        col = [field.zero] * n
        if i:
            col[i - 1] = field.one
        cols.append(tuple(col))
    return from_columns(field, cols)


def _recipe_single(field: Field, k: int):
    """(N1, N2, Q): J_k(0) = N1 * N2, both nilpotent of rank k - 1 (k != 2);
    conjugating by Q moves the pair to the normalized shape."""
    if k == 1:
        z = Matrix.zeros(field, 1, 1)
        return z, z, Matrix.identity(field, 1)
    if k % 2 == 1:
        entries1 = [(2, k, 1)] + [(2 + i, i, 1) for i in range(1, k - 1)]
        entries2 = [(i, 1 + i, 1) for i in range(1, k - 1)] + [(k, 1, 1)]
        q_idx = list(range(1, k + 1, 2)) + list(range(2, k, 2))
        return _sparse(field, k, entries1), _sparse(field, k, entries2), _basis_columns(field, k, q_idx)
    # k even >= 4
    entries1 = [(2, k - 1, 1), (2, k, 1), (3, 1, 1), (3, 2, -1), (4, 2, 1)]
    entries1 += [(4 + i, 2 + i, 1) for i in range(1, k - 3)]
    entries2 = [(i, 1 + i, 1) for i in range(1, k - 1)] + [(k, 1, 1), (1, 3, 1)]
    cols = []
    for i in range(1, k, 2):
        e = [field.zero] * k
        e[i - 1] = field.one
        cols.append(tuple(e))
    e = [field.zero] * k
    e[1] = field.one
    cols.append(tuple(e))
    for i in range(4, k + 1, 2):
        e = [field.zero] * k
        e[i - 1] = field.one
        e[i - 2] = field.neg(field.one)
        cols.append(tuple(e))
    return _sparse(field, k, entries1), _sparse(field, k, entries2), from_columns(field, cols)


def _recipe_pair(field: Field, k: int):
    """(N1, N2, Q): Dg[J_k(0), J_2(0)] = N1 * N2, both nilpotent of rank k."""
    n = k + 2
    if k == 1:
        return (_sparse(field, 3, [(3, 1, 1)]), _sparse(field, 3, [(1, 2, 1)]),
                Matrix.identity(field, 3))
    if k % 2 == 0:
        entries1 = [(i + 1, 2 + i, 1) for i in range(1, k)] + [(k + 2, 2, 1)]
        entries2 = [(2, k + 1, 1)] + [(2 + i, i, 1) for i in range(1, k)]
        return _sparse(field, n, entries1), _sparse(field, n, entries2), Matrix.identity(field, n)
    # k odd >= 3
    a1 = [2, 0]
    for j in range(4, k, 2):
        a1 += [j, j - 1]
    a1.append(k)
    a2 = [1]
    for j in range(4, k, 2):
        a2 += [j, j - 1]
    a2 += [k, 0]
    entries1 = [(k + 2, 1, 1)]
    for c, i in enumerate(a1, start=1):
        if i:
            entries1.append((i, 2 + c, 1))
    entries2 = [(1, k + 1, 1)]
    for c, i in enumerate(a2, start=1):
        if i:
            entries2.append((2 + i, c, 1))
    eps = (-1) ** ((k - 3) // 2)
    idx = [1, k + 2]
    i = k
    while i >= 3 - eps:
        idx += [i, i - 1]
        i -= 4
    idx.append(k + 1)
    i = k - 2
    while i >= 3 + eps:
        idx += [i, i - 1]
        i -= 4
    if sorted(idx) != list(range(1, k + 3)):
        raise ConstructionFailed(f"pair permutation invalid for k={k}")
    return _sparse(field, n, entries1), _sparse(field, n, entries2), _basis_columns(field, n, idx)


def _recipe_triple_22(field: Field):
    """(N5, N6, Q): Dg[J_2, J_2, J_2] = N5 * N6, both nilpotent of rank 3."""
    N5 = _sparse(field, 6, [(2, 6, 1), (4, 1, 1), (6, 3, 1)])
    N6 = _sparse(field, 6, [(1, 3, 1), (3, 5, 1), (6, 1, 1)])
    return N5, N6, _basis_columns(field, 6, [1, 4, 3, 6, 2, 5])


def _group_recipe(field: Field, group: tuple):
    if len(group) == 1:
        return _recipe_single(field, group[0])
    if group == (2, 2, 2):
        return _recipe_triple_22(field)
    return _recipe_pair(field, group[0])


def _group_sizes(sizes: list) -> list:
    """Partition a zero-Jordan profile into recipe groups; raises on the
    lone nonzero 2x2 block."""
    twos = sum(1 for s in sizes if s == 2)
    singles = sorted(s for s in sizes if s != 2)
    if twos == 0:
        return [(s,) for s in singles]
    if twos % 2 == 0:
        return [(s,) for s in singles] + [(2, 2)] * (twos // 2)
    if singles:
        k = singles[0]
        return [(s,) for s in singles[1:]] + [(k, 2)] + [(2, 2)] * ((twos - 1) // 2)
    if twos == 1:
        raise Order2NonzeroNilpotent("a nonzero nilpotent 2x2 block cannot be factored")
    return [(2, 2, 2)] + [(2, 2)] * ((twos - 3) // 2)


def _normalized_group(field: Field, group: tuple):
    """(A0, M1, M2, Q): A0 = Q^{-1} Dg[J_group] Q = M1 * M2 with both factors
    nilpotent, in the normalized shape used by the singular coupling."""
    N1, N2, Q = _group_recipe(field, group)
    J = block_diag(field, [Matrix.jordan_block(field, s, field.zero) for s in group])
    if N1 * N2 != J:
        raise ConstructionFailed(f"recipe product mismatch for group {group}")
    Qi = inverse(Q)
    A0 = Qi * J * Q
    M1 = Qi * N1 * Q
    M2 = Qi * N2 * Q
    if not M1.is_nilpotent() or not M2.is_nilpotent():
        raise ConstructionFailed(f"recipe factor not nilpotent for group {group}")
    return A0, M1, M2, Q


def nilpotent_pair_for_profile(field: Field, sizes: list):
    """(A0, N1, N2): A0 has the requested zero-Jordan profile and equals
    N1*N2 with nilpotent factors of rank = rank(A0), the last column of N1
    zero, and the last row r of N2 satisfying r*A0 = 0; these are the shape
    facts the singular-matrix coupling needs."""
    groups = _group_sizes(list(sizes))
    if not groups:
        z = Matrix.identity(field, 0)
        return z, z, z
    parts = [_normalized_group(field, g) for g in groups]
    order = list(range(len(parts)))
    for last in range(len(parts) - 1, -1, -1):
        perm = [i for i in order if i != last] + [last]
        A0 = block_diag(field, [parts[i][0] for i in perm])
        N1 = block_diag(field, [parts[i][1] for i in perm])
        N2 = block_diag(field, [parts[i][2] for i in perm])
        n = A0.n
        last_col_zero = all(field.is_zero(N1[i, n - 1]) for i in range(n))
        r = Matrix.from_rows(field, [N2.row(n - 1)])
        if last_col_zero and (r * A0).is_zero():
            return A0, N1, N2
    raise ConstructionFailed("no group ordering yields the normalized pair")


def nilpotent_product_nilpotent(N: Matrix) -> ProductCertificate:
    """Factor a nilpotent N (order != 2 unless zero) into two nilpotent
    factors, each of the same rank as N."""
    if not N.is_square:
        raise NonSquare("need a square matrix")
    if not N.is_nilpotent():
        raise ValueError("input is not nilpotent")
    F = N.field
    if N.n == 2 and not N.is_zero():
        raise Order2NonzeroNilpotent("nonzero nilpotent 2x2 input")
    chains = jordan_zero_chains(N)
    groups = _group_sizes([len(c) for c in chains])
    if not groups:
        I0 = Matrix.identity(F, 0)
        return _certified(N, [I0, I0], [NILPOTENT, NILPOTENT], "empty")
    parts = [_normalized_group(F, g) for g in groups]
    size_seq = [s for g in groups for s in g]
    P = arrange_chains(F, chains, size_seq)
    Qall = block_diag(F, [p[3] for p in parts])
    A0 = block_diag(F, [p[0] for p in parts])
    M1 = block_diag(F, [p[1] for p in parts])
    M2 = block_diag(F, [p[2] for p in parts])
    T = P * Qall
    Tinv = inverse(T)
    if Tinv * N * T != A0:
        raise ConstructionFailed("profile transform mismatch")
    return _certified(N, [T * M1 * Tinv, T * M2 * Tinv], [NILPOTENT, NILPOTENT],
                      f"nilpotent profile {sorted((len(c) for c in chains), reverse=True)}")


def nilpotent_product_two(A: Matrix) -> ProductCertificate:
    """Write a singular A as a product of two nilpotent matrices of rank
    rank(A); the nonzero nilpotent 2x2 case is the sole exception."""
    if not A.is_square:
        raise NonSquare("need a square matrix")
    F = A.field
    n = A.n
    if is_invertible(A):
        raise NonSingular("invertible matrices have no nilpotent factorization")
    if A.is_nilpotent():
        if n == 2 and not A.is_zero():
            raise ExceptionalCase("nonzero nilpotent 2x2 input")
        return nilpotent_product_nilpotent(A)
    ft = fitting(A)
    N0, B0, Pf = ft.nilpotent, ft.invertible, ft.transform
    j, k = N0.n, B0.n
    PB, L, U = _lu_of_invertible(B0)

    if N0.is_zero():
        # Dg[0_j, L U] = (L shifted below j zero rows) * (U shifted right)
        rows1 = [[F.zero] * n for _ in range(n)]
        rows2 = [[F.zero] * n for _ in range(n)]
        for i in range(k):
            for t in range(k):
                rows1[j + i][t] = L[i, t]
                rows2[i][j + t] = U[i, t]
        N1 = Matrix.from_rows(F, rows1)
        N2 = Matrix.from_rows(F, rows2)
        T = Pf * block_diag(F, [Matrix.identity(F, j), PB])
        trail = "zero nilpotent block + shifted triangular pair"
    elif j == 2:
        # N0 similar to [[0,1],[0,0]]; couple through the last unit vector
        J2p = Matrix.from_int_rows(F, [[0, 1], [0, 0]])
        P2 = conjugating_matrix(N0, J2p)
        if P2 is None:
            raise ConstructionFailed("2x2 nilpotent block is not a shift")
        rows1 = [[F.zero] * n for _ in range(n)]
        rows2 = [[F.zero] * n for _ in range(n)]
        rows1[0][0] = F.one
        rows1[0][n - 1] = F.one
        rows1[n - 1][0] = F.neg(F.one)
        rows1[n - 1][n - 1] = F.neg(F.one)
        for i in range(k):
            for t in range(k):
                rows1[2 + i][1 + t] = L[i, t]
        rows2[0][1] = F.one
        for i in range(k):
            for t in range(k):
                rows2[1 + i][2 + t] = U[i, t]
        N1 = Matrix.from_rows(F, rows1)
        N2 = Matrix.from_rows(F, rows2)
        A1 = L * U
        x = solve_right(A1, Matrix.unit(F, k, 1, k - 1, 0))
        X = hstack(Matrix.zeros(F, k, 1), x)
        V = block_of(F, [[Matrix.identity(F, 2), Matrix.zeros(F, 2, k)],
                         [X, Matrix.identity(F, k)]])
        T = Pf * block_diag(F, [P2, PB]) * inverse(V)
        trail = "order-2 nilpotent block + rank-one coupling"
    else:
        # general nonzero nilpotent block of order >= 3
        A0n, M1, M2 = nilpotent_pair_for_profile(F, jordan_profile(N0))
        P2 = conjugating_matrix(N0, A0n)
        if P2 is None:
            raise ConstructionFailed("nilpotent block transform failed")
        # F1 = [[M1, 0], [B1, L']], F2 = [[M2, U''], [0, U']] with
        # B1 carrying col 1 of L in its last column, L'/U' the shifted
        # triangles, U'' carrying row 1 of U in its last row
        rows1 = [[F.zero] * n for _ in range(n)]
        rows2 = [[F.zero] * n for _ in range(n)]
        for a in range(j):
            for b in range(j):
                rows1[a][b] = M1[a, b]
                rows2[a][b] = M2[a, b]
        for i in range(k):
            rows1[j + i][j - 1] = L[i, 0]
            for t in range(k - 1):
                rows1[j + i][j + t] = L[i, t + 1]
        for t in range(k):
            rows2[j - 1][j + t] = U[0, t]
        for i in range(k - 1):
            for t in range(k):
                rows2[j + i][j + t] = U[i + 1, t]
        N1 = Matrix.from_rows(F, rows1)
        N2 = Matrix.from_rows(F, rows2)
        r = Matrix.from_rows(F, [M2.row(j - 1)])
        if (r * A0n).is_zero() and not r.is_zero():
            X = (Matrix.unit(F, k, 1, 0, 0) * r).scale(F.neg(F.inv(U[0, 0])))
        else:
            X = Matrix.zeros(F, k, j)
        V = block_of(F, [[Matrix.identity(F, j), Matrix.zeros(F, j, k)],
                         [X, Matrix.identity(F, k)]])
        T = Pf * block_diag(F, [P2, PB]) * inverse(V)
        trail = "nilpotent block recipes + triangular pair"
    Tinv = inverse(T)
    return _certified(A, [T * N1 * Tinv, T * N2 * Tinv], [NILPOTENT, NILPOTENT], trail)


# ---- square-zero products ----

def _range_null_data(G: Matrix):
    rn = intersect_subspaces(G.field, colspace_basis(G).matrix(G.field),
                             nullspace_basis(G).matrix(G.field))
    return nullspace_basis(G), colspace_basis(G), rn


def two_sqz_feasible(G: Matrix) -> bool:
    """r(G) <= n(G) - dim(R(G) ∩ N(G))."""
    if not G.is_square:
        raise NonSquare("square-zero factorization needs a square matrix")
    null, col, rn = _range_null_data(G)
    return rank(G) <= null.k - len(rn)


def _square_zero_divisor(G: Matrix, rank_F: int) -> Matrix:
    """The square-zero right divisor used for a two-factor split: an
    isomorphism of a complement of N(G) onto a piece of N(G) clear of
    R(G) ∩ N(G), plus a shift inside the remaining kernel directions."""
    F = G.field
    m = G.m
    null, _, rn = _range_null_data(G)
    rg = rank(G)
    rn_m = from_columns(F, rn) if rn else None
    ext = independent_subset(F, null.vectors, base=rn_m)
    if len(ext) < rg:
        raise NotTwoSqzFactorable("kernel directions clear of the range are too few")
    w_basis = ext[:rg]
    u_basis = list(rn) + ext[rg:]
    ng_basis = w_basis + u_basis
    v_basis = extend_to_basis(F, ng_basis, m)
    c = rank_F - rg
    if c < 0 or c > len(u_basis) // 2:
        raise RankOutOfBounds(f"divisor rank {rank_F} is not achievable")
    P = from_columns(F, v_basis + ng_basis)
    images = []
    images += [w_basis[i] for i in range(len(v_basis))]
    images += [tuple(F.zero for _ in range(m))] * len(w_basis)
    for i in range(len(u_basis)):
        images.append(u_basis[c + i] if i < c else tuple(F.zero for _ in range(m)))
    img = from_columns(F, images)
    Fm = img * inverse(P)
    if not Fm.is_square_zero() or rank(Fm) != rank_F:
        raise ConstructionFailed("square-zero divisor failed validation")
    return Fm


def sqz_product_two(G: Matrix, rank_H: Optional[int] = None,
                    rank_F: Optional[int] = None) -> ProductCertificate:
    """G = H*F with both factors square-zero and prescribed ranks in
    [r(G), floor(m/2)]; feasible iff r(G) <= n(G) - dim(R(G) ∩ N(G))."""
    if not G.is_square:
        raise NonSquare("need a square matrix")
    if not two_sqz_feasible(G):
        raise NotTwoSqzFactorable("r(G) > n(G) - dim(R(G) ∩ N(G))")
    m = G.m
    rg = rank(G)
    lo, hi = rg, m // 2
    rank_H = rg if rank_H is None else rank_H
    rank_F = rg if rank_F is None else rank_F
    for r in (rank_H, rank_F):
        if not lo <= r <= hi:
            raise RankOutOfBounds(f"factor rank {r} outside {lo}..{hi}")
    Fm = _square_zero_divisor(G, rank_F)
    H = sqz_quotient_right(G, Fm, rank_H)
    return _certified(G, [H, Fm], [SQUARE_ZERO, SQUARE_ZERO], "two-factor split")


def _idempotent_divisor(G: Matrix) -> Matrix:
    """Idempotent F with N(F) = N(G) and R(F) ∩ R(G) = 0: the projection
    along N(G) onto W (+) span{r_i + n_i}, with the tilted directions pairing
    a basis of a complement of R ∩ N inside R(G) with kernel directions."""
    F = G.field
    m = G.m
    null, col, rn = _range_null_data(G)
    rn_m = from_columns(F, rn) if rn else None
    r_ext = independent_subset(F, col.vectors, base=rn_m)
    n_ext = independent_subset(F, null.vectors, base=rn_m)
    if len(r_ext) > len(n_ext):
        raise RankTooHigh("r(G) > n(G): no idempotent clear of the range")
    pool = list(rn) + r_ext + n_ext
    w_basis = extend_to_basis(F, pool, m)
    tilted = []
    for i, rv in enumerate(r_ext):
        nv = n_ext[i]
        tilted.append(tuple(F.add(a, b) for a, b in zip(rv, nv)))
    ng_basis = list(null.vectors)
    cols = w_basis + tilted + ng_basis
    if len(cols) != m:
        raise ConstructionFailed("projection basis has the wrong size")
    P = from_columns(F, cols)
    if not is_invertible(P):
        raise ConstructionFailed("projection basis is not a basis")
    images = list(w_basis + tilted)
    images += [tuple(F.zero for _ in range(m))] * len(ng_basis)
    img = from_columns(F, images)
    Fm = img * inverse(P)
    if Fm * Fm != Fm or rank(Fm) != rank(G):
        raise ConstructionFailed("idempotent divisor failed validation")
    if intersect_subspaces(F, colspace_basis(Fm).matrix(F), colspace_basis(G).matrix(F)):
        raise ConstructionFailed("idempotent range meets the range of G")
    return Fm


def sqz_product_three(G: Matrix, ranks: Optional[Sequence[int]] = None) -> ProductCertificate:
    """G = H1*H2*H3, all square-zero, ranks prescribed in [r(G), floor(m/2)];
    feasible iff 2 r(G) <= n."""
    if not G.is_square:
        raise NonSquare("need a square matrix")
    m = G.m
    rg = rank(G)
    if 2 * rg > m:
        raise RankTooHigh(f"rank {rg} exceeds half the order")
    ranks = tuple(ranks) if ranks is not None else (rg, rg, rg)
    if len(ranks) != 3:
        raise ValueError("need exactly three ranks")
    for r in ranks:
        if not rg <= r <= m // 2:
            raise RankOutOfBounds(f"factor rank {r} outside {rg}..{m // 2}")
    Fm = _idempotent_divisor(G)
    H1 = sqz_quotient_right(G, Fm, ranks[0])
    inner = sqz_product_two(Fm, ranks[1], ranks[2])
    return _certified(G, [H1, *inner.factors], [SQUARE_ZERO] * 3, "idempotent relay")


def sqz_product_chain(G: Matrix, k: int, ranks: Optional[Sequence[int]] = None) -> ProductCertificate:
    """G as a product of k >= 3 square-zero factors (k = 2 routes to the
    two-factor operation), every rank prescribable in [r(G), floor(m/2)]."""
    if k < 2:
        raise KTooSmall("need at least two factors")
    if k == 2:
        r = tuple(ranks) if ranks is not None else (None, None)
        return sqz_product_two(G, r[0], r[1])
    if not G.is_square:
        raise NonSquare("need a square matrix")
    m = G.m
    rg = rank(G)
    if 2 * rg > m:
        raise RankTooHigh(f"rank {rg} exceeds half the order")
    ranks = tuple(ranks) if ranks is not None else (rg,) * k
    if len(ranks) != k:
        raise ValueError(f"need exactly {k} ranks")
    for r in ranks:
        if not rg <= r <= m // 2:
            raise RankOutOfBounds(f"factor rank {r} outside {rg}..{m // 2}")
    factors = []
    cur = G
    for i in range(k - 3):
        Fm = _idempotent_divisor(cur)
        factors.append(sqz_quotient_right(cur, Fm, ranks[i]))
        cur = Fm
    inner = sqz_product_three(cur, ranks[k - 3:])
    factors.extend(inner.factors)
    return _certified(G, factors, [SQUARE_ZERO] * k, f"chain of {k}")
