"""Univariate polynomials over the ground field.

Coefficients are stored ascending with a nonzero trailing coefficient (the
zero polynomial has an empty tuple).  Includes the even/odd-power
classification, the sign-twist involution f -> (-1)^n f(-x), companion
matrices, and factorization: complete over GF(p) (squarefree split,
distinct-degree, then seeded equal-degree splitting), and squarefree plus
rational linear factors over Q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstantPolynomial, DivisionByZero, NotFullyFactored, NotMonic
from .fields import Field
from .matrices import Matrix

EVEN_POWER = "EvenPower"
ODD_POWER = "OddPower"
NEITHER = "Neither"


@dataclass(frozen=True)
class Poly:
    field: Field
    coeffs: tuple  # ascending, trailing coefficient nonzero

    @staticmethod
    def make(field: Field, coeffs) -> "Poly":
        cs = [field.of_int(c) if isinstance(c, int) else c for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        return Poly(field, tuple(cs))

    @staticmethod
    def zero(field: Field) -> "Poly":
        return Poly(field, ())

    @staticmethod
    def one(field: Field) -> "Poly":
        return Poly(field, (field.one,))

    @staticmethod
    def x(field: Field) -> "Poly":
        return Poly(field, (field.zero, field.one))

    @staticmethod
    def x_power(field: Field, k: int) -> "Poly":
        return Poly(field, tuple(field.zero for _ in range(k)) + (field.one,))

    @staticmethod
    def from_roots(field: Field, roots) -> "Poly":
        p = Poly.one(field)
        for r in roots:
            p = p * Poly.make(field, [field.neg(r), field.one])
        return p

    # ---- structure ----
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    @property
    def leading(self):
        if self.is_zero:
            raise DivisionByZero("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    # ---- arithmetic ----
    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.make(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.make(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, tuple(F.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        if self.is_zero or other.is_zero:
            return Poly.zero(F)
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly.make(F, out)

    def scale(self, c) -> "Poly":
        F = self.field
        return Poly.make(F, [F.mul(c, a) for a in self.coeffs])

    def monic(self) -> "Poly":
        """Divide through by the leading coefficient; idempotent."""
        if self.is_zero or self.is_monic:
            return self
        return self.scale(self.field.inv(self.leading))

    def divmod(self, other: "Poly"):
        F = self.field
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead_inv = F.inv(other.leading)
        quot = [F.zero] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if F.is_zero(c):
                continue
            q = F.mul(c, lead_inv)
            quot[i - d] = q
            for j, b in enumerate(other.coeffs):
                rem[i - d + j] = F.sub(rem[i - d + j], F.mul(q, b))
        return Poly.make(F, quot), Poly.make(F, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a.monic() if not a.is_zero else a

    def pow_mod(self, e: int, mod: "Poly") -> "Poly":
        acc = Poly.one(self.field) % mod
        base = self % mod
        while e:
            if e & 1:
                acc = (acc * base) % mod
            e >>= 1
            if e:
                base = (base * base) % mod
        return acc

    def derivative(self) -> "Poly":
        F = self.field
        return Poly.make(F, [F.mul(F.of_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x):
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x))."""
        F = self.field
        acc = Poly.zero(F)
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.make(F, [c])
        return acc

    def matrix_eval(self, A: Matrix) -> Matrix:
        """self(A) by Horner."""
        F = self.field
        acc = Matrix.zeros(F, A.m, A.n)
        I = Matrix.identity(F, A.n)
        for c in reversed(self.coeffs):
            acc = acc * A + I.scale(c)
        return acc

    def shift_argument(self, a) -> "Poly":
        """self(x + a)."""
        F = self.field
        return self.compose(Poly.make(F, [a, F.one]))

    def __str__(self):
        if self.is_zero:
            return "0"
        F = self.field
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if F.is_zero(c):
                continue
            if i == 0:
                parts.append(F.format(c))
            else:
                xs = "x" if i == 1 else f"x^{i}"
                if c == F.one:
                    parts.append(xs)
                elif c == F.neg(F.one) and F.is_rationals:
                    parts.append(f"-{xs}")
                else:
                    parts.append(f"{F.format(c)}{xs}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def sort_key(self):
        return (self.degree, tuple(str(c) for c in self.coeffs))


def parity_class(p: Poly) -> str:
    """EvenPower iff all odd-index coefficients vanish, OddPower iff all
    even-index coefficients vanish; the zero polynomial counts as EvenPower."""
    F = p.field
    odd_zero = all(F.is_zero(c) for i, c in enumerate(p.coeffs) if i % 2 == 1)
    even_zero = all(F.is_zero(c) for i, c in enumerate(p.coeffs) if i % 2 == 0)
    if odd_zero:
        return EVEN_POWER
    if even_zero:
        return ODD_POWER
    return NEITHER


def star(p: Poly) -> Poly:
    """(-1)^n p(-x): monic of the same degree, fixed exactly by the
    even/odd-power polynomials when the characteristic is not two."""
    if not p.is_monic:
        raise NotMonic("star is defined for monic polynomials")
    F = p.field
    n = p.degree
    sign = F.one if n % 2 == 0 else F.neg(F.one)
    return Poly.make(F, [F.mul(sign, c if i % 2 == 0 else F.neg(c))
                         for i, c in enumerate(p.coeffs)])


def companion(p: Poly) -> Matrix:
    """Companion matrix: ones on the subdiagonal, negated coefficients of p
    in the last column."""
    if not p.is_monic:
        raise NotMonic("companion matrix of a non-monic polynomial")
    if p.degree < 1:
        raise ConstantPolynomial("companion matrix needs degree >= 1")
    F = p.field
    n = p.degree
    rows = [[F.zero] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i + 1][i] = F.one
    for i in range(n):
        rows[i][n - 1] = F.neg(p.coeff(i))
    return Matrix.from_rows(F, rows)


# ---- factorization ----

@dataclass(frozen=True)
class FactorList:
    """Pairs (monic factor, multiplicity), sorted by (degree, coefficients);
    leading stores the unit so leading * prod(q^e) reproduces the input.
    ``complete`` is False when a squarefree non-linear part over Q was left
    unsplit (its factors then carry no irreducibility promise)."""

    leading: object
    factors: tuple  # ((Poly, int), ...)
    complete: bool
    seed: int = 0

    def product(self, field: Field) -> Poly:
        p = Poly.make(field, [self.leading])
        for q, e in self.factors:
            for _ in range(e):
                p = p * q
        return p


def _squarefree_decomposition(p: Poly) -> list:
    """[(squarefree monic part, multiplicity)] with distinct parts, any field."""
    F = p.field
    p = p.monic()
    if p.degree <= 0:
        return []
    d = p.derivative()
    if d.is_zero:
        # characteristic q > 0 and p = h(x^q); take the q-th root coefficientwise
        # (coefficients are already q-th powers in a prime field: c^q = c)
        q = F.characteristic
        root = Poly.make(F, [p.coeff(i * q) for i in range(p.degree // q + 1)])
        return [(part, mult * q) for part, mult in _squarefree_decomposition(root)]
    g = p.gcd(d)
    if g.degree == 0:
        return [(p, 1)]
    out = {}
    w = p // g
    mult = 1
    while w.degree > 0:
        y = w.gcd(g)
        factor = w // y
        if factor.degree > 0:
            out[factor.coeffs] = (factor, out.get(factor.coeffs, (factor, 0))[1] + mult)
        w = y
        g = g // y
        mult += 1
    if g.degree > 0:
        for part, extra in _squarefree_decomposition(g):
            cur = out.get(part.coeffs, (part, 0))[1]
            out[part.coeffs] = (part, cur + extra)
    return sorted(out.values(), key=lambda t: t[0].sort_key())


def _distinct_degree(p: Poly) -> list:
    """[(product of irreducibles of degree d, d)] for squarefree monic p over GF(q)."""
    F = p.field
    q = F.characteristic
    out = []
    h = Poly.x(F) % p
    f = p
    d = 0
    while f.degree > 2 * (d + 1) - 1 and f.degree > 0:
        d += 1
        h = h.pow_mod(q, f)
        g = f.gcd(h - Poly.x(F))
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _equal_degree_split(p: Poly, d: int, rng: random.Random) -> list:
    """Irreducible factors of p (squarefree, all of degree d) over GF(q)."""
    F = p.field
    q = F.characteristic
    if p.degree == d:
        return [p.monic()]
    while True:
        a = Poly.make(F, [F.of_int(rng.randrange(q)) for _ in range(p.degree)])
        if a.degree < 1:
            continue
        if q == 2:
            # trace map splits in characteristic two
            t = a
            acc = a
            for _ in range(d - 1):
                t = t.pow_mod(2, p)
                acc = (acc + t) % p
            g = p.gcd(acc)
        else:
            e = (q ** d - 1) // 2
            g = p.gcd(a.pow_mod(e, p) - Poly.one(F))
        if 0 < g.degree < p.degree:
            return sorted(
                _equal_degree_split(g, d, rng) + _equal_degree_split(p // g, d, rng),
                key=Poly.sort_key)


def _rational_roots(p: Poly) -> list:
    """All rational roots of p with multiplicity stripped off one at a time."""
    roots = []
    # clear denominators to an integer polynomial
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _gcd_int(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    while ints and ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
        p = p // Poly.x(p.field)
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    cands = set()
    for r in _divisors(a0):
        for s in _divisors(an):
            cands.add(Fraction(r, s))
            cands.add(Fraction(-r, s))
    for cand in sorted(cands):
        while not p.is_constant and p.evaluate(cand) == 0:
            roots.append(cand)
            p = p // Poly.make(p.field, [-cand, Fraction(1)])
    return roots


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list:
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def factor(p: Poly, seed: int = 0) -> FactorList:
    """Factor p into monic irreducibles.

    Over GF(q) the factorization is complete; equal-degree splitting is
    randomized with the given seed so runs are reproducible.  Over Q the
    result is the squarefree decomposition with all rational linear factors
    extracted; if a non-linear part remains the list is returned with
    complete=False (callers that need irreducibles must treat that as
    failure and typically raise NotFullyFactored).
    """
    F = p.field
    if p.is_zero:
        raise DivisionByZero("cannot factor the zero polynomial")
    leading = p.leading
    p = p.monic()
    found = {}

    def add(q: Poly, e: int):
        key = q.coeffs
        if key in found:
            found[key] = (q, found[key][1] + e)
        else:
            found[key] = (q, e)

    complete = True
    if F.is_rationals:
        for part, mult in _squarefree_decomposition(p):
            rest = part
            for r in _rational_roots(part):
                add(Poly.make(F, [-r, Fraction(1)]), mult)
                rest = rest // Poly.make(F, [-r, Fraction(1)])
            if rest.degree > 0:
                add(rest, mult)
                complete = False
    else:
        rng = random.Random(seed)
        for part, mult in _squarefree_decomposition(p):
            for prod_d, d in _distinct_degree(part):
                for irr in _equal_degree_split(prod_d, d, rng):
                    add(irr, mult)
    factors = tuple(sorted(found.values(), key=lambda t: t[0].sort_key()))
    return FactorList(leading, factors, complete, seed)


def factor_complete(p: Poly, seed: int = 0) -> FactorList:
    """factor(), but complete or NotFullyFactored."""
    fl = factor(p, seed)
    if not fl.complete:
        raise NotFullyFactored(f"no complete factorization of {p} over Q", partial=fl)
    return fl


def is_irreducible(p: Poly) -> bool:
    """Irreducibility over GF(q): squarefree, no factor of degree <= deg/2
    (trial gcd with x^(q^d) - x)."""
    F = p.field
    q = F.characteristic
    if q == 0:
        raise ValueError("irreducibility test implemented for prime fields only")
    p = p.monic()
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    if p.gcd(p.derivative()).degree > 0 and not p.derivative().is_zero:
        return False
    if p.derivative().is_zero:
        return False
    h = Poly.x(F)
    for d in range(1, p.degree // 2 + 1):
        h = h.pow_mod(q, p)
        if p.gcd(h - Poly.x(F)).degree > 0:
            return False
    return True
