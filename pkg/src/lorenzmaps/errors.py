"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain a function is defined on."""


class EscapeError(ArithmeticError):
    """An orbit left the invariant interval; the map itself is broken."""


class InternalConsistencyError(RuntimeError):
    """A numerical invariant the code relies on failed (e.g. a bisection
    bracket lost its sign change)."""


class HypothesisNotMetError(ValueError):
    """A checker was called on inputs that violate its hypothesis, as
    opposed to the checked conclusion failing."""


class ContractViolationError(RuntimeError):
    """A caller-supplied callable broke a stated contract (e.g. a
    predicate promised to be monotone is not)."""


class AmbiguousSideError(ValueError):
    """An orbit with no approach side landed exactly on the discontinuity,
    so there is no canonical way to continue it."""
