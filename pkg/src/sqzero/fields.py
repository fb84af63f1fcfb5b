"""Exact scalar arithmetic over Q and prime fields GF(p).

Scalars are plain values (no wrapper objects): ``fractions.Fraction`` over Q
and ints in ``[0, p)`` over GF(p).  A :class:`Field` object is passed around
with the values and supplies the operations, so every result is already in
canonical form (reduced fraction / least nonnegative residue).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, MissingModulus, NonPrimeModulus

RATIONALS = "Q"
PRIME_FIELD = "GF"

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24 (covers 64-bit)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Ground field: Q (kind="Q") or GF(p) (kind="GF", prime modulus p)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == PRIME_FIELD:
            if self.p is None:
                raise MissingModulus("prime field requires a modulus")
            if not is_prime(self.p):
                raise NonPrimeModulus(f"{self.p} is not prime")
        elif self.kind == RATIONALS:
            if self.p is not None:
                raise MissingModulus("rationals take no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    # ---- structure ----
    @property
    def characteristic(self) -> int:
        return 0 if self.kind == RATIONALS else self.p

    @property
    def is_rationals(self) -> bool:
        return self.kind == RATIONALS

    @property
    def zero(self):
        return Fraction(0) if self.is_rationals else 0

    @property
    def one(self):
        return Fraction(1) if self.is_rationals else 1

    def of_int(self, k: int):
        return Fraction(k) if self.is_rationals else k % self.p

    # ---- arithmetic (inputs assumed canonical) ----
    def add(self, a, b):
        return a + b if self.is_rationals else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.is_rationals else (a - b) % self.p

    def neg(self, a):
        return -a if self.is_rationals else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.is_rationals else (a * b) % self.p

    def inv(self, a):
        if not a:
            raise DivisionByZero("zero has no inverse")
        return 1 / a if self.is_rationals else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return not a

    # ---- text syntax: optional sign, integer, or a/b with b > 0 (Q only) ----
    def parse(self, text: str):
        text = text.strip()
        if self.is_rationals:
            if "/" in text:
                num, _, den = text.partition("/")
                d = int(den)
                if d <= 0:
                    raise ValueError(f"denominator must be positive: {text!r}")
                return Fraction(int(num), d)
            return Fraction(int(text))
        return int(text) % self.p

    def format(self, a) -> str:
        return str(a)

    def elements(self):
        """All field elements; GF(p) only."""
        if self.is_rationals:
            raise ValueError("Q is infinite")
        return range(self.p)

    def __repr__(self):
        return "Q" if self.is_rationals else f"GF({self.p})"


def make_field(kind: str, modulus: int | None = None) -> Field:
    """Build a validated field from a kind tag ("Q"/"rationals" or "GF"/"prime")."""
    kind_l = kind.lower()
    if kind_l in ("q", "rationals"):
        return Field(RATIONALS)
    if kind_l in ("gf", "prime", "primefield"):
        if modulus is None:
            raise MissingModulus("prime field requires a modulus")
        return Field(PRIME_FIELD, modulus)
    raise ValueError(f"unknown field kind {kind!r}")


QQ = Field(RATIONALS)


def GF(p: int) -> Field:
    return Field(PRIME_FIELD, p)
