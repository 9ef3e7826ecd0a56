"""Exception hierarchy shared by the library and the command line front end.

Two broad families matter for the CLI exit-code contract: ``InputError``
(malformed or out-of-bounds input, exit code 1) and ``HypothesisError``
(well-formed input that violates a mathematical hypothesis of the requested
operation, exit code 2).
"""


class BlockpicError(Exception):
    """Base class for every error raised by this package."""


class InputError(BlockpicError):
    """Malformed, inconsistent, or out-of-bounds input."""


class HypothesisError(BlockpicError):
    """Input is valid but a hypothesis of the requested result fails."""


# -- construction / arithmetic ------------------------------------------------

class NonPrime(InputError):
    pass


class EmptyOrNonPositiveExponent(InputError):
    pass


class OrderBoundExceeded(InputError):
    pass


class ParentMismatch(InputError):
    pass


class NotASubgroup(InputError):
    pass


class DivisibilityViolation(InputError):
    pass


class NotBijective(InputError):
    pass


class NotNormal(InputError):
    pass


class ActionNotHomomorphism(InputError):
    pass


class ContextMismatch(InputError):
    pass


class NoCharacterSummandDeclared(InputError):
    pass


class NotComposable(InputError):
    pass


class ShapeMismatch(InputError):
    pass


# -- Brauer trees -------------------------------------------------------------

class NotATree(InputError):
    pass


class BadCyclicOrder(InputError):
    pass


class NotTransitive(InputError):
    pass


# -- hypothesis violations ----------------------------------------------------

class FocalNotWhole(HypothesisError):
    pass


class EnotPPrime(HypothesisError):
    pass


class ENotAbelian(HypothesisError):
    pass


class NotFrobenius(HypothesisError):
    pass


class NotCyclicDefect(HypothesisError):
    pass


class BadDivisor(HypothesisError):
    pass


class TrivialGroup(HypothesisError):
    pass


class NoStabilizedVertex(HypothesisError):
    pass


# -- CLI input parsing ---------------------------------------------------------

class InputSyntaxError(InputError):
    """Bad line in an input file; carries the 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownKey(InputError):
    pass


class MissingKey(InputError):
    pass


class InputTypeError(InputError):
    pass
