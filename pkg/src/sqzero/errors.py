"""Exception hierarchy shared by all modules."""


class SqzeroError(Exception):
    """Base class for all library errors."""


# field construction / scalar arithmetic
class NonPrimeModulus(SqzeroError):
    pass


class MissingModulus(SqzeroError):
    pass


class DivisionByZero(SqzeroError):
    pass


# dense matrix operations
class NonSquare(SqzeroError):
    pass


class DimensionMismatch(SqzeroError):
    pass


class NoSolution(SqzeroError):
    pass


class NotFullRowRank(SqzeroError):
    pass


class GramUnavailable(SqzeroError):
    pass


class SingularMatrix(SqzeroError):
    pass


# polynomials
class NotMonic(SqzeroError):
    pass


class ConstantPolynomial(SqzeroError):
    pass


class NotFullyFactored(SqzeroError):
    """Complete factorization over Q is out of reach; carries the partial result."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


# matrix division
class NotDivisible(SqzeroError):
    pass


class NoSqzQuotient(SqzeroError):
    pass


class RankOutOfBounds(SqzeroError):
    pass


class BadRecipe(SqzeroError):
    pass


# factorizations
class ScalarInput(SqzeroError):
    pass


class SingularInput(SqzeroError):
    pass


class DeterminantMismatch(SqzeroError):
    pass


class Order2NonzeroNilpotent(SqzeroError):
    pass


class NonSingular(SqzeroError):
    pass


class ExceptionalCase(SqzeroError):
    pass


class NotTwoSqzFactorable(SqzeroError):
    pass


class RankTooHigh(SqzeroError):
    pass


class KTooSmall(SqzeroError):
    pass


# sum decompositions
class NonzeroTrace(SqzeroError):
    pass


class WrongCharacteristic(SqzeroError):
    pass


class NotSumOfTwo(SqzeroError):
    pass


class NotCompanion(SqzeroError):
    pass


class LengthMismatch(SqzeroError):
    pass


class TraceMismatch(SqzeroError):
    pass


class DegreeMismatch(SqzeroError):
    pass


# oracle
class TooLarge(SqzeroError):
    pass


# cli / io
class ParseError(SqzeroError):
    pass


class ConstructionFailed(SqzeroError):
    """Internal consistency check failed during a constructive proof step."""
