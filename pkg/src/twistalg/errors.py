"""Exception types shared across the package."""

from __future__ import annotations


class TwistalgError(Exception):
    """Base class for all package errors."""


class OrderCapExceeded(TwistalgError):
    pass


class InvalidInvariant(TwistalgError):
    pass


class NotAssociative(TwistalgError):
    """Raised with the witnessing triple (a, b, c) of indices."""

    def __init__(self, triple):
        self.triple = tuple(int(t) for t in triple)
        super().__init__(f"not associative at triple {self.triple}")


class NoIdentity(TwistalgError):
    pass


class NoInverse(TwistalgError):
    """Raised with the witnessing element index."""

    def __init__(self, element):
        self.element = int(element)
        super().__init__(f"element {self.element} has no two-sided inverse")


class NotSubgroup(TwistalgError):
    pass


class NotNormal(TwistalgError):
    pass


class InvalidHom(TwistalgError):
    pass


class InvalidCochain(TwistalgError):
    pass


class UnsupportedDegree(TwistalgError):
    pass


class ModulusMismatch(TwistalgError):
    pass


class NotACocycle(TwistalgError):
    pass


class InvalidExtension(TwistalgError):
    pass


class NotPointwiseTrivial(TwistalgError):
    """Raised with the base points at which triviality fails."""

    def __init__(self, failing):
        self.failing = tuple(int(x) for x in failing)
        super().__init__(f"not pointwise trivial at base points {self.failing}")


class TransgressionNotBijective(TwistalgError):
    pass


class NoClassFound(TwistalgError):
    pass


class DeltaNotSubgroup(TwistalgError):
    pass


class ProfileInconsistent(TwistalgError):
    pass


class MismatchAt(TwistalgError):
    """A theorem checker found a mathematical mismatch at a base point."""

    def __init__(self, x, which, left=None, right=None):
        self.x = x
        self.which = which
        self.left = left
        self.right = right
        super().__init__(f"mismatch at base point {x}: {which} (left={left}, right={right})")


class ParseError(TwistalgError):
    pass


class UnresolvedRef(TwistalgError):
    pass


class ValidationFailed(TwistalgError):
    def __init__(self, obj, reason):
        self.obj = obj
        self.reason = reason
        super().__init__(f"validation failed for {obj}: {reason}")
