"""Exception types shared across the solver, simulator, and CLI."""


class ParameterError(ValueError):
    """A model parameter or function argument is outside its valid range."""


class WrongCaseError(ValueError):
    """A case-specific root function was evaluated on the wrong side of its cutoff."""


class DegenerateCaseError(ValueError):
    """The realized first signal sits exactly on a case boundary (r = r0 or r = rbar)."""


class BracketError(RuntimeError):
    """A root bracket failed its sign test; indicates an internal inconsistency."""


class EquilibriumViolationError(RuntimeError):
    """A deviation strictly improved on the equilibrium action beyond tolerance."""
