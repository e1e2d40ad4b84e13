"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for all domain errors raised by this package."""


class StructuralError(AlgebraError):
    """Malformed table, out-of-range element, or bad carrier size."""


class EmptyCarrierError(StructuralError):
    """Attempt to build an algebra on an empty carrier."""


class SignatureError(AlgebraError):
    """Operation or point requested that the algebra's signature lacks."""


class MissingOperationError(SignatureError):
    """A division table required by the operation is absent."""


class NotCancellative(AlgebraError):
    """A requested division cannot be derived from the multiplication table."""

    def __init__(self, axis, index):
        self.axis = axis  # "row" or "column"
        self.index = index
        super().__init__(f"multiplication {axis} {index} is not a permutation")


class NoVariableError(AlgebraError):
    """head/tail requested of a term with no variables."""


class ParseError(AlgebraError):
    """Syntax error in a term, identity, or shape string."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnsupportedLanguageError(AlgebraError):
    """Term uses constants outside the language accepted by the operation."""


class NotStarCompatible(AlgebraError):
    """The two defining forms of the derived band operation disagree."""

    def __init__(self, x, y, first, second):
        self.witness = (x, y)
        super().__init__(
            f"(x*y)/y = {second} but (x/y)*y = {first} at (x, y) = ({x}, {y})"
        )


class NotRPQ(AlgebraError):
    """The algebra fails the defining axiom system for decomposability."""

    def __init__(self, label, counterexample):
        self.label = label
        self.counterexample = counterexample
        super().__init__(f"axiom {label} fails at {counterexample}")


class ConsistencyError(AlgebraError):
    """The equation x*a = b has no solution; carries the failed witness."""

    def __init__(self, a, b, witness):
        self.a = a
        self.b = b
        self.witness = witness  # value of (b/a)*a, which differs from b
        super().__init__(f"x*{a} = {b} is inconsistent: (b/a)*a = {witness} != {b}")


class ClassificationError(AlgebraError):
    """The algebra is not in the variety required by the operation."""

    def __init__(self, required):
        self.required = required
        super().__init__(f"algebra is not a {required}")


class TailMismatchError(AlgebraError):
    """An identity transformation that needs equal tails got different ones."""


class SizeLimitError(AlgebraError):
    """Refusal: the requested brute-force search exceeds the documented bound."""


class InvariantError(AlgebraError):
    """An internal invariant guaranteed by theory was violated (a bug)."""
