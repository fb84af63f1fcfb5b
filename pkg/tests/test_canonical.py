import random
from fractions import Fraction

import pytest

from conftest import random_invertible, random_matrix
from sqzero.canonical import (
    char_poly,
    companion_form,
    conjugating_matrix,
    elementary_divisors,
    fitting,
    invariant_polynomials,
    is_similar,
    minimal_polynomial,
    rcf,
)
from sqzero.errors import NotFullyFactored
from sqzero.fields import GF, QQ
from sqzero.matrices import Matrix, block_diag, det, inverse, rank
from sqzero.matrices import from_columns
from sqzero.polynomials import EVEN_POWER, Poly, companion, parity_class

F = QQ


def test_invariant_polynomials_examples():
    two_i = Matrix.diagonal(F, [Fraction(2), Fraction(2)])
    chain = invariant_polynomials(two_i).nonconstant
    assert [str(f) for f in chain] == ["x - 2", "x - 2"]
    p = Poly.make(F, [0, -1, 0, -1, 0, 1])
    assert invariant_polynomials(companion(p)).nonconstant == (p,)
    A = Matrix.diagonal(F, [Fraction(v) for v in (-5, 2, -5, 2, 2, 2, 2)])
    degs = invariant_polynomials(A).degrees
    assert sorted(degs) == [1, 1, 1, 2, 2]


def test_rcf_examples():
    J2 = Matrix.jordan_block(F, 2, Fraction(0))
    res = rcf(J2)
    assert res.form == Matrix.from_int_rows(F, [[0, 0], [1, 0]])
    assert inverse(res.transform) * J2 * res.transform == res.form
    C = companion(Poly.make(F, [1, -3, 1]))
    res = rcf(C)
    assert res.form == C
    # distinct eigenvalues make the diagonal nonderogatory
    D = Matrix.diagonal(F, [Fraction(1), Fraction(-1)])
    res = rcf(D)
    assert res.form == companion(Poly.make(F, [-1, 0, 1]))
    assert inverse(res.transform) * D * res.transform == res.form


def test_fitting_examples():
    B = Matrix.from_int_rows(F, [[2, 1], [1, 1]])
    res = fitting(B)
    assert res.nilpotent.n == 0 and is_similar(res.invertible, B)
    N = Matrix.jordan_block(F, 3, Fraction(0))
    res = fitting(N)
    assert res.invertible.n == 0 and res.nilpotent.n == 3
    A = block_diag(F, [Matrix.jordan_block(F, 2, Fraction(0)),
                       Matrix.diagonal(F, [Fraction(3)])])
    res = fitting(A)
    assert is_similar(res.nilpotent, Matrix.jordan_block(F, 2, Fraction(0)))
    assert res.invertible == Matrix.from_rows(F, [[Fraction(3)]])


def test_is_similar_examples(rng):
    A = random_matrix(rng, F, 3, 3)
    P = random_invertible(rng, F, 3)
    assert is_similar(A, inverse(P) * A * P)
    # shifted companions share the Smith form
    Cx2 = companion(Poly.x_power(F, 2))
    shifted = Matrix.identity(F, 2) + Cx2
    target = companion(Poly.make(F, [1, -2, 1]))  # (x-1)^2
    assert is_similar(shifted, target)
    assert not is_similar(Matrix.jordan_block(F, 2, Fraction(0)), Matrix.zeros(F, 2, 2))


def test_elementary_divisors_examples():
    f3 = GF(3)
    A = block_diag(f3, [Matrix.jordan_block(f3, 2, 0), Matrix.zeros(f3, 1, 1)])
    eds = elementary_divisors(A)
    assert {(str(q), e, m) for q, e, m in eds} == {("x", 2, 1), ("x", 1, 1)}
    q = Poly.make(f3, [1, 0, 1])
    C = companion(q * q)
    eds = elementary_divisors(C)
    assert eds == [(q, 2, 1)]
    with pytest.raises(NotFullyFactored):
        elementary_divisors(companion(Poly.make(F, [-2, 0, 1])))


def _random_suite(field, rng, count):
    for _ in range(count):
        n = rng.randint(1, 5)
        A = random_matrix(rng, field, n, n, span=3)
        inv = invariant_polynomials(A)
        # divisibility chain and charpoly product
        prod = Poly.one(field)
        for i, f in enumerate(inv.chain):
            prod = prod * f
            if i + 1 < len(inv.chain):
                assert f.divides(inv.chain[i + 1])
        assert prod == char_poly(A)
        # minimal polynomial annihilates
        assert inv.minimal_polynomial.matrix_eval(A).is_zero()
        # rcf transform exact
        res = rcf(A)
        assert inverse(res.transform) * A * res.transform == res.form
        # fitting blocks exact
        ft = fitting(A)
        C = inverse(ft.transform) * A * ft.transform
        assert C == block_diag(field, [ft.nilpotent, ft.invertible])
        assert ft.nilpotent.is_nilpotent()
        assert ft.invertible.n == 0 or not field.is_zero(det(ft.invertible))
        # similarity invariance under conjugation
        P = random_invertible(rng, field, n)
        assert invariant_polynomials(inverse(P) * A * P).chain == inv.chain


def test_canonical_random_suite_smoke(rng):
    _random_suite(QQ, rng, 25)
    _random_suite(GF(5), rng, 25)


def test_minimal_polynomial_strictness():
    # proper divisors of the minimal polynomial never annihilate
    f5 = GF(5)
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(2, 4)
        A = random_matrix(rng, f5, n, n)
        mp = minimal_polynomial(A)
        if mp.degree < 1:
            continue
        for q, e, _mult in elementary_divisors(A):
            d = mp // q
            if d.degree >= 1 and (mp % q).is_zero:
                assert not d.matrix_eval(A).is_zero()


def test_anti_diagonal_block_similarity(rng):
    # C(p(x^2)) is similar to [[0, C(p)], [I, 0]]
    f5 = GF(5)
    for _ in range(15):
        d = rng.randint(1, 3)
        p = Poly.make(f5, [f5.of_int(rng.randrange(5)) for _ in range(d)] + [f5.one])
        psq = p.compose(Poly.x_power(f5, 2))
        n = p.degree
        top = block_diag(f5, [Matrix.zeros(f5, n, n)])
        block = Matrix.from_rows(f5, [
            list(Matrix.zeros(f5, n, n).row(i)) + list(companion(p).row(i))
            for i in range(n)] + [
            list(Matrix.identity(f5, n).row(i)) + list(Matrix.zeros(f5, n, n).row(i))
            for i in range(n)])
        assert is_similar(companion(psq), block)
        # and all invariant polynomials of such blocks are even
        for f in invariant_polynomials(block).nonconstant:
            assert parity_class(f) == EVEN_POWER


def test_companion_block_antidiagonal_even(rng):
    f5 = GF(5)
    for _ in range(15):
        n = rng.randint(1, 3)
        A = random_matrix(rng, f5, n, n)
        block = Matrix.from_rows(f5, [
            list(Matrix.zeros(f5, n, n).row(i)) + list(A.row(i)) for i in range(n)] + [
            list(Matrix.identity(f5, n).row(i)) + list(Matrix.zeros(f5, n, n).row(i))
            for i in range(n)])
        for f in invariant_polynomials(block).nonconstant:
            assert parity_class(f) == EVEN_POWER


def test_conjugating_matrix(rng):
    f3 = GF(3)
    for _ in range(20):
        n = rng.randint(1, 4)
        A = random_matrix(rng, f3, n, n)
        P = random_invertible(rng, f3, n)
        B = inverse(P) * A * P
        Q = conjugating_matrix(A, B)
        assert Q is not None
        assert inverse(Q) * A * Q == B
    assert conjugating_matrix(Matrix.zeros(f3, 2, 2), Matrix.identity(f3, 2)) is None
