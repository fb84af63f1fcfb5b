"""Exact decompositions of matrices over Q and GF(p) into products and sums
of nilpotent and square-zero factors, with rank control, certificates, and
brute-force oracles over tiny finite fields."""

from .fields import GF, QQ, Field, make_field
from .matrices import Matrix

__all__ = ["Field", "Matrix", "make_field", "QQ", "GF"]
