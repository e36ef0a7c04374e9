"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates a documented precondition."""


class NumericalError(ArithmeticError):
    """A floating-point result cannot be trusted at the required tolerance."""


class BoundaryAmbiguityError(NumericalError):
    """A floor is evaluated too close to an integer to be decided in floating point."""

    def __init__(self, message, n_players=None):
        super().__init__(message)
        self.n_players = n_players


class CertificationError(RuntimeError):
    """Exhaustive search contradicts a closed-form optimum."""

    def __init__(self, message, claimed=None, found=None, witness=None):
        super().__init__(message)
        self.claimed = claimed
        self.found = found
        self.witness = witness
