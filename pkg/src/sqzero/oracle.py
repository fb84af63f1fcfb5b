"""Brute-force ground truth over tiny prime fields, plus independent
certificate verification.

Enumeration is exhaustive and duplicate-free over GF(p)^(n x n); sum and
product deciders precompute reachability tables over the full code space
(matrices are encoded as base-p integers, row-major, first entry most
significant, so code order is lexicographic entry order).  numpy carries the
bulk arithmetic; entries stay below p so int64 products are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .fields import Field
from .matrices import Matrix

ALL = "All"
SQUARE_ZERO = "SquareZero"
NILPOTENT = "Nilpotent"
SINGULAR = "Singular"

_GUARD = 2 ** 32


@dataclass(frozen=True)
class EnumSpec:
    field: Field
    n: int
    filter: str = ALL

    def __post_init__(self):
        if self.field.is_rationals:
            raise TooLarge("enumeration needs a finite field")
        if self.field.p ** (self.n * self.n) > _GUARD:
            raise TooLarge(f"{self.field.p}^{self.n * self.n} exceeds the guard")


def _codes_to_digits(p: int, n: int, codes: np.ndarray) -> np.ndarray:
    digits = np.empty((len(codes), n * n), dtype=np.int64)
    rem = codes.copy()
    for i in range(n * n - 1, -1, -1):
        digits[:, i] = rem % p
        rem //= p
    return digits


def _digits_to_codes(p: int, digits: np.ndarray) -> np.ndarray:
    codes = np.zeros(len(digits), dtype=np.int64)
    for i in range(digits.shape[1]):
        codes = codes * p + digits[:, i]
    return codes


def _all_matrices(p: int, n: int) -> np.ndarray:
    count = p ** (n * n)
    digits = _codes_to_digits(p, n, np.arange(count, dtype=np.int64))
    return digits.reshape(count, n, n)


def _mask_for(p: int, n: int, mats: np.ndarray, which: str) -> np.ndarray:
    if which == ALL:
        return np.ones(len(mats), dtype=bool)
    if which == SQUARE_ZERO:
        sq = np.matmul(mats, mats) % p
        return ~sq.reshape(len(mats), -1).any(axis=1)
    if which == NILPOTENT:
        acc = mats
        for _ in range(n - 1):
            acc = np.matmul(acc, mats) % p
        return ~acc.reshape(len(mats), -1).any(axis=1)
    if which == SINGULAR:
        return _det_mod(p, mats) == 0
    raise ValueError(f"unknown filter {which!r}")


def _det_mod(p: int, mats: np.ndarray) -> np.ndarray:
    n = mats.shape[1]
    if n == 1:
        return mats[:, 0, 0] % p
    if n == 2:
        return (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % p
    # Laplace along the first row; n stays tiny here
    total = np.zeros(len(mats), dtype=np.int64)
    cols = list(range(n))
    for j in range(n):
        rest = [c for c in cols if c != j]
        minor = mats[:, 1:, :][:, :, rest]
        term = mats[:, 0, j] * _det_mod(p, minor)
        total = total + ((-1) ** j) * term
    return total % p


class _Tables:
    """Per (p, n) cached enumeration products: codes, masks, reach sets."""

    def __init__(self, p: int, n: int):
        self.p = p
        self.n = n
        self.mats = _all_matrices(p, n)
        self.masks = {}
        self.sum_reach = {}
        self.product_sets = {}

    def mask(self, which: str) -> np.ndarray:
        if which not in self.masks:
            self.masks[which] = _mask_for(self.p, self.n, self.mats, which)
        return self.masks[which]

    def sum_reachable(self, k: int) -> np.ndarray:
        """Boolean over codes: sums of exactly k square-zero matrices."""
        if k in self.sum_reach:
            return self.sum_reach[k]
        p, n = self.p, self.n
        sq_codes = np.where(self.mask(SQUARE_ZERO))[0]
        sq_digits = self.mats[sq_codes].reshape(len(sq_codes), -1)
        digits = self.mats.reshape(len(self.mats), -1)
        if k == 1:
            reach = np.zeros(len(self.mats), dtype=bool)
            reach[sq_codes] = True
        else:
            prev = self.sum_reachable(k - 1)
            reach = np.zeros(len(self.mats), dtype=bool)
            idx = np.where(prev)[0]
            for s in sq_digits:
                shifted = _digits_to_codes(p, (digits[idx] + s) % p)
                reach[shifted] = True
        self.sum_reach[k] = reach
        return reach

    def product_codes(self, k: int, role: str) -> set:
        """Codes of all products of exactly k matrices of the given role."""
        key = (k, role)
        if key in self.product_sets:
            return self.product_sets[key]
        p = self.p
        members = self.mats[np.where(self.mask(role))[0]]
        if k == 1:
            out = set(_digits_to_codes(p, members.reshape(len(members), -1)).tolist())
        else:
            prev = self.product_codes(k - 1, role)
            prev_mats = self.mats[sorted(prev)]
            out = set()
            for S in members:
                prods = np.matmul(S[None, :, :], prev_mats) % p
                out.update(_digits_to_codes(p, prods.reshape(len(prods), -1)).tolist())
        self.product_sets[key] = out
        return out


_tables_cache = {}


def _tables(field: Field, n: int) -> _Tables:
    spec = EnumSpec(field, n)  # validates the guard
    key = (field.p, n)
    if key not in _tables_cache:
        _tables_cache[key] = _Tables(field.p, n)
    return _tables_cache[key]


def matrix_code(A: Matrix) -> int:
    p = A.field.p
    code = 0
    for row in A.rows:
        for e in row:
            code = code * p + int(e)
    return code


def enumerate_matrices(spec: EnumSpec):
    """Yield every matching matrix in lexicographic entry order."""
    tables = _tables(spec.field, spec.n)
    mask = tables.mask(spec.filter)
    n = spec.n
    for code in np.where(mask)[0]:
        rows = tables.mats[code]
        yield Matrix.from_int_rows(spec.field, rows.tolist())


def brute_sum_decide(A: Matrix, k: int) -> bool:
    """True iff A is a sum of exactly k square-zero matrices (k in 2..4),
    decided against the precomputed reachability table."""
    if k not in (2, 3, 4):
        raise ValueError("k must be 2, 3 or 4")
    tables = _tables(A.field, A.n)
    return bool(tables.sum_reachable(k)[matrix_code(A)])


def brute_product_decide(A: Matrix, k: int, role: str) -> bool:
    """True iff A is a product of exactly k matrices of the given role
    (SquareZero or Nilpotent, k in 2..3)."""
    if k not in (2, 3):
        raise ValueError("k must be 2 or 3")
    if role not in (SQUARE_ZERO, NILPOTENT):
        raise ValueError("role must be SquareZero or Nilpotent")
    tables = _tables(A.field, A.n)
    return matrix_code(A) in tables.product_codes(k, role)


@dataclass(frozen=True)
class Report:
    passed: bool
    failures: tuple

    def __str__(self):
        if self.passed:
            return "pass"
        return "fail: " + "; ".join(self.failures)


def verify_certificate(cert) -> Report:
    """Recompute the product/sum, role conditions and rank claims of a
    ProductCertificate or SumCertificate; failures come back as data."""
    fails = cert.check_clauses()
    return Report(not fails, tuple(fails))
