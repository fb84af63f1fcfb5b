import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sqzero.fields import GF, QQ
from sqzero.matrices import Matrix

settings.register_profile(
    "suite", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("suite")

FIELDS = [QQ, GF(2), GF(3), GF(5), GF(7)]


def scalars(field):
    if field.is_rationals:
        return st.fractions(min_value=-6, max_value=6, max_denominator=4)
    return st.integers(min_value=0, max_value=field.p - 1).map(field.of_int)


def nonzero_scalars(field):
    return scalars(field).filter(lambda s: not field.is_zero(s))


def matrices(field, m, n):
    return st.lists(st.lists(scalars(field), min_size=n, max_size=n),
                    min_size=m, max_size=m).map(lambda rows: Matrix.from_rows(field, rows))


def square_matrices(field, max_n=4):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: matrices(field, n, n))


def monic_polys(field, max_deg=5, min_deg=1):
    from sqzero.polynomials import Poly

    def build(coeffs):
        return Poly.make(field, list(coeffs) + [field.one])

    return st.integers(min_value=min_deg, max_value=max_deg).flatmap(
        lambda d: st.lists(scalars(field), min_size=d, max_size=d).map(build))


def random_matrix(rng: random.Random, field, m, n, span=5):
    if field.is_rationals:
        rows = [[Fraction(rng.randint(-span, span)) for _ in range(n)] for _ in range(m)]
    else:
        rows = [[field.of_int(rng.randrange(field.p)) for _ in range(n)] for _ in range(m)]
    return Matrix.from_rows(field, rows)


def random_invertible(rng: random.Random, field, n, span=3):
    from sqzero.matrices import is_invertible

    while True:
        P = random_matrix(rng, field, n, n, span)
        if is_invertible(P):
            return P


def random_square_zero(rng: random.Random, field, n, span=3):
    """Random conjugate of the canonical square-zero of a random rank."""
    from sqzero.matrices import inverse

    r = rng.randint(0, n // 2)
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(r):
        rows[i][n - r + i] = field.one
    S0 = Matrix.from_rows(field, rows)
    P = random_invertible(rng, field, n, span)
    return P * S0 * inverse(P)


@pytest.fixture
def rng():
    return random.Random(20260809)
