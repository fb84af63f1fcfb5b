import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_matrix
from sqzero.canonical import (
    char_poly,
    elementary_divisor_list,
    invariant_polynomials,
    is_similar,
)
from sqzero.errors import (
    LengthMismatch,
    NonzeroTrace,
    NotCompanion,
    NotSumOfTwo,
    ScalarInput,
    TraceMismatch,
)
from sqzero.fields import GF, QQ
from sqzero.matrices import Matrix, block_diag, inverse, rank
from sqzero.oracle import EnumSpec, enumerate_matrices
from sqzero.polynomials import EVEN_POWER, ODD_POWER, Poly, companion, parity_class
from sqzero.sums import (
    couple_companions,
    is_sum_two_sqz,
    nilpotent_sum,
    resplit_companion,
    sum_four_sqz,
    sum_three_decide,
    sum_three_sqz_char2,
    sum_two_sqz,
    takahashi_three_sum,
    zero_diagonal_conjugator,
)

F = QQ
F2 = GF(2)
F5 = GF(5)


def test_zero_diagonal_examples():
    A = Matrix.from_int_rows(F, [[1, 2], [3, -1]])
    P = zero_diagonal_conjugator(A)
    Z = inverse(P) * A * P
    assert all(F.is_zero(Z[i, i]) for i in range(2))
    with pytest.raises(ScalarInput):
        zero_diagonal_conjugator(Matrix.diagonal(F, [Fraction(2)] * 2))
    already = Matrix.from_int_rows(F, [[0, 1], [2, 0]])
    P = zero_diagonal_conjugator(already)
    Z = inverse(P) * already * P
    assert all(F.is_zero(Z[i, i]) for i in range(2))


def test_nilpotent_sum_examples():
    cert = nilpotent_sum(Matrix.zeros(F, 2, 2))
    assert cert.verify() and len(cert.summands) == 2
    cert = nilpotent_sum(Matrix.from_int_rows(F, [[1, 2], [3, -1]]))
    assert cert.verify()
    assert all(s.is_square_zero() for s in cert.summands)  # 2x2 nilpotents
    cert = nilpotent_sum(Matrix.identity(F2, 2))
    assert cert.verify() and len(cert.summands) == 3
    # exhaustive: no pair of the four 2x2 nilpotents over GF(2) sums to I
    nilpotents = [N for N in enumerate_matrices(EnumSpec(F2, 2, "Nilpotent"))]
    assert len(nilpotents) == 4
    assert all(N1 + N2 != Matrix.identity(F2, 2) for N1 in nilpotents for N2 in nilpotents)
    with pytest.raises(NonzeroTrace):
        nilpotent_sum(Matrix.identity(F, 2))


def test_is_sum_two_examples():
    assert is_sum_two_sqz(companion(Poly.make(F, [0, -1, 0, -1, 0, 1])))
    assert not is_sum_two_sqz(Matrix.identity(F2, 2))
    # brute force: no pair of the four square-zero matrices sums to I
    sqzs = list(enumerate_matrices(EnumSpec(F2, 2, "SquareZero")))
    assert all(S + T != Matrix.identity(F2, 2) for S in sqzs for T in sqzs)
    C = companion(Poly.make(F, [0, -1, 0, -1, 0, 1]))
    S3 = Matrix.from_int_rows(F, [[1, 1, 0, 0, 0], [-1, -1, 0, 0, 0],
                                  [0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0]])
    CS = C + S3
    assert char_poly(CS) == Poly.make(F, [1, 0, 0, -2, 0, 1])
    assert invariant_polynomials(CS).nonconstant == (char_poly(CS),)  # nonderogatory
    assert not is_sum_two_sqz(CS)


def test_sum_two_printed_split():
    C = companion(Poly.make(F, [0, -1, 0, -1, 0, 1]))
    cert = sum_two_sqz(C)
    assert cert.verify()
    S, T = cert.summands
    zero_col = (Fraction(0),) * 5
    # odd polynomial: the first summand keeps the even positions
    assert S.col(0) == zero_col and S.col(2) == zero_col and S.col(4) == zero_col
    assert S.col(1) == C.col(1) and S.col(3) == C.col(3)
    assert T.col(0) == C.col(0) and T.col(2) == C.col(2) and T.col(4) == C.col(4)
    cert = sum_two_sqz(Matrix.zeros(F, 3, 3))
    assert cert.verify()
    D = Matrix.diagonal(F, [Fraction(1), Fraction(-1)])
    cert = sum_two_sqz(D)
    assert cert.verify()
    with pytest.raises(NotSumOfTwo):
        sum_two_sqz(Matrix.identity(F2, 2))


def test_sum_two_output_involution(rng):
    # S + T is always similar to its negative
    f3 = GF(3)
    done = 0
    while done < 25:
        n = rng.randint(1, 4)
        A = random_matrix(rng, f3, n, n)
        if not is_sum_two_sqz(A):
            continue
        cert = sum_two_sqz(A)
        assert cert.verify()
        total = cert.summands[0] + cert.summands[1]
        assert is_similar(total, -total)
        done += 1


def test_sum_four_examples():
    cert = sum_four_sqz(Matrix.identity(F2, 2))
    assert cert.verify() and len(cert.summands) == 4
    cert = sum_four_sqz(Matrix.from_int_rows(F, [[1, 2], [3, -1]]))
    assert cert.verify() and len(cert.summands) == 4
    with pytest.raises(NonzeroTrace):
        sum_four_sqz(Matrix.identity(F, 3))


def test_sum_four_scalar_gadgets():
    for p in (2, 3, 5):
        field = GF(p)
        for lam in range(1, p):
            A = Matrix.identity(field, p).scale(field.of_int(lam))
            cert = sum_four_sqz(A)
            assert cert.verify()
        # two blocks worth
        A = Matrix.identity(field, 2 * p).scale(field.of_int(1))
        assert sum_four_sqz(A).verify()


def test_resplit_examples():
    Cp = companion(Poly.make(F, [-5, 0, 1]))  # x^2 - 5
    S, Cq = resplit_companion(Cp, [Fraction(0)])
    assert Cq == companion(Poly.x_power(F, 2))
    assert S.col(1) == (Fraction(5), Fraction(0)) and S.col(0) == (Fraction(0),) * 2
    assert S + Cq == Cp and S.is_square_zero()
    # keeping the original coefficients leaves nothing behind
    p = Poly.make(F, [0, -1, 0, 1])  # x^3 - x
    S, Cq = resplit_companion(companion(p), [Fraction(0), Fraction(-1)])
    assert S.is_zero() and Cq == companion(p)
    with pytest.raises(NotCompanion):
        resplit_companion(Matrix.identity(F, 2), [Fraction(0)])
    with pytest.raises(LengthMismatch):
        resplit_companion(companion(p), [Fraction(0)])


def test_couple_companions_examples():
    x = Poly.x(F)
    M, D = couple_companions(x, x, Poly.x_power(F, 2))
    assert D == Matrix.zeros(F, 1, 1)
    assert char_poly(M) == Poly.x_power(F, 2)
    # independent 1x1 solve: M = [[1, d], [1, -1]] needs det = -1 - d = 0
    p1 = Poly.make(F, [-1, 1])
    p2 = Poly.make(F, [1, 1])
    M, D = couple_companions(p1, p2, Poly.x_power(F, 2))
    assert D == Matrix.from_int_rows(F, [[-1]])
    assert char_poly(M) == Poly.x_power(F, 2)
    target = Poly.make(F, [0, -1, 0, 1])
    M, D = couple_companions(Poly.x_power(F, 2), x, target)
    assert char_poly(M) == target
    assert invariant_polynomials(M).nonconstant == (target,)  # nonderogatory
    with pytest.raises(TraceMismatch):
        couple_companions(p1, p2, Poly.make(F, [0, 1, 1]))


def test_couple_companions_random(rng):
    for field in (QQ, GF(5)):
        for _ in range(25):
            k = rng.randint(1, 3)
            nk = rng.randint(1, 3)
            def rand_monic(d):
                if field.is_rationals:
                    cs = [Fraction(rng.randint(-3, 3)) for _ in range(d)]
                else:
                    cs = [field.of_int(rng.randrange(field.p)) for _ in range(d)]
                return Poly.make(field, cs + [field.one])
            p1, p2 = rand_monic(k), rand_monic(nk)
            n = k + nk
            body = [field.of_int(rng.randint(-3, 3)) if field.is_rationals
                    else field.of_int(rng.randrange(field.p)) for _ in range(n - 1)]
            body[n - 2] = field.add(p1.coeff(k - 1), p2.coeff(nk - 1))
            p = Poly.make(field, [field.neg(c) for c in body[:-1]] + [field.neg(body[-1]), field.one])
            M, D = couple_companions(p1, p2, p)
            assert char_poly(M) == p


def test_char2_three_sum_exhaustive():
    for n in (1, 2, 3):
        for A in enumerate_matrices(EnumSpec(F2, n)):
            if not F2.is_zero(A.trace()):
                with pytest.raises(NonzeroTrace):
                    sum_three_sqz_char2(A)
                continue
            cert = sum_three_sqz_char2(A)
            assert cert.verify() and len(cert.summands) == 3


def test_char2_three_sum_prime_power_even():
    q = Poly.make(F2, [1, 1, 1])
    A = companion(q * q)
    cert = sum_three_sqz_char2(A)
    assert cert.verify()
    assert parity_class(q * q) == EVEN_POWER  # squares are even in char 2


def test_char2_wrong_characteristic():
    from sqzero.errors import WrongCharacteristic

    with pytest.raises(WrongCharacteristic):
        sum_three_sqz_char2(Matrix.zeros(F, 2, 2))


def test_three_decide_paper_counterexamples():
    A = Matrix.diagonal(F, [Fraction(v) for v in (-4, 1, 1, 1, 1)])
    v = sum_three_decide(A)
    assert v.status == "No"
    assert "4" in v.reason and "3*5/4" in v.reason
    # exact comparison: n(A - I) = 4 > 15/4
    n_minus = 5 - rank(A - Matrix.identity(F, 5))
    assert n_minus == 4 and Fraction(4) > Fraction(15, 4)

    B = Matrix.diagonal(F, [Fraction(v) for v in (-5, 2, -5, 2, 2, 2, 2)])
    v = sum_three_decide(B)
    assert v.status == "No"
    assert "eigenspace bound" in v.checks  # the nullity test passed first
    assert "3" in v.reason and "2*2" in v.reason
    n_minus = 7 - rank(B - Matrix.identity(F, 7).scale(Fraction(2)))
    assert n_minus == 5 and Fraction(5) <= Fraction(21, 4)


def test_three_decide_nonderogatory_example():
    A = companion(Poly.make(F, [1, 0, 0, -2, 0, 1]))
    v = sum_three_decide(A)
    assert v.status == "Yes"
    assert v.certificate.verify()


def test_three_decide_takahashi_family():
    # split quadratic minimal polynomials: the count criterion decides
    def diag(*vals):
        return Matrix.diagonal(F, [Fraction(x) for x in vals])

    yes_cases = [diag(2, 2, -3, 2, -3),               # r=1, m=2
                 diag(1, 1, 1, -3),                    # r=2, m=1
                 diag(3, 3, 3, -5, 3, -5, 3, -5),      # r=2, m=3
                 diag(1, 1, 1, 1, -2, 1, -2, 1, -2),   # r=3, m=3
                 diag(1, 1, -2)]                       # r=1, m=1
    for A in yes_cases:
        v = sum_three_decide(A)
        assert v.status == "Yes" and v.certificate.verify()
    no = diag(-5, 2, -5, 2, 2, 2, 2)
    assert sum_three_decide(no).status == "No"


def test_three_decide_char2_is_trace():
    for A in enumerate_matrices(EnumSpec(F2, 2)):
        v = sum_three_decide(A)
        expected = "Yes" if F2.is_zero(A.trace()) else "No"
        assert v.status == expected
        if v.certificate:
            assert v.certificate.verify()


def test_three_decide_verdicts_are_verified(rng):
    done = 0
    while done < 30:
        n = rng.randint(1, 4)
        A = random_matrix(rng, F, n, n, span=2)
        v = sum_three_decide(A)
        if v.status == "Yes":
            assert v.certificate.verify()
        done += 1


def test_commutation_with_square_property(rng):
    # square-zero summands commute with the square of their sum
    from conftest import random_square_zero

    for _ in range(500):
        n = rng.randint(1, 4)
        A = random_square_zero(rng, F5, n)
        B = random_square_zero(rng, F5, n)
        assert A.is_square_zero() and B.is_square_zero()
        sq = (A + B) * (A + B)
        assert A * sq == sq * A
        assert B * sq == sq * B


def test_commutation_with_square_bulk():
    # deterministic bulk: all pairs of 2x2 square-zero matrices over GF(5)
    f5 = GF(5)
    sqz = [S for S in enumerate_matrices(EnumSpec(f5, 2, "SquareZero"))]
    count = 0
    for A in sqz:
        for B in sqz:
            sq = (A + B) * (A + B)
            assert A * sq == sq * A and B * sq == sq * B
            count += 1
            if count >= 500:
                return


def test_invertible_two_sum_has_even_polynomials(rng):
    f3 = GF(3)
    done = 0
    while done < 40:
        n = rng.choice((2, 4))
        A = random_matrix(rng, f3, n, n)
        if not is_sum_two_sqz(A):
            continue
        cert = sum_two_sqz(A)
        total = cert.summands[0] + cert.summands[1]
        from sqzero.matrices import is_invertible

        if not is_invertible(total):
            continue
        assert total.n % 2 == 0
        for f in invariant_polynomials(total).nonconstant:
            assert parity_class(f) == EVEN_POWER
        done += 1


def test_two_sum_iff_similar_to_negative():
    # exhaustive over GF(5) 2x2, then a random 3x3 sample
    f5 = GF(5)
    for A in enumerate_matrices(EnumSpec(f5, 2)):
        assert is_sum_two_sqz(A) == is_similar(A, -A)
    rng = random.Random(15)
    for _ in range(500):
        A = random_matrix(rng, f5, 3, 3)
        assert is_sum_two_sqz(A) == is_similar(A, -A)


def test_char2_even_order_criterion():
    # over GF(2): a two-sum exactly when every elementary divisor away from
    # the nilpotent part has even exponent
    for n in (1, 2, 3):
        for A in enumerate_matrices(EnumSpec(F2, n)):
            eds = elementary_divisor_list(A)
            criterion = all(e % 2 == 0 for q, e in eds if str(q) != "x")
            assert is_sum_two_sqz(A) == criterion


def test_eigenvalue_pairing_under_sqz_perturbation(rng):
    # A with quadratic split minimal polynomial: eigenvalues of A + S come in
    # pairs lam, a + b - lam away from a and b
    from conftest import random_square_zero

    f7 = GF(7)
    a, b = f7.of_int(2), f7.of_int(5)
    A = block_diag(f7, [Matrix.identity(f7, 2).scale(a), Matrix.identity(f7, 2).scale(b)])
    for _ in range(200):
        S = random_square_zero(rng, f7, 4)
        M = A + S
        p = char_poly(M)
        eigs = [lam for lam in range(7) if f7.is_zero(p.evaluate(f7.of_int(lam)))]
        for lam in eigs:
            if lam in (a, b):
                continue
            partner = f7.sub(f7.add(a, b), f7.of_int(lam))
            assert partner in eigs
