"""Exception types raised across the package."""


class ShapeError(ValueError):
    """Operands have incompatible matrix shapes."""


class NotComposableError(ValueError):
    """The middle algebras of a composition do not agree."""


class InvalidRelationError(ValueError):
    """A subspace fails the commutant bimodule property."""


class InvalidHomomorphismError(ValueError):
    """A linear map fails to be a unital *-homomorphism into its target."""


class NotAQuantumFunctionError(ValueError):
    """A quantum relation fails one of the two quantum-function inclusions.

    ``inclusion`` names the violated inclusion when it is known.
    """

    def __init__(self, message, inclusion=None):
        super().__init__(message)
        self.inclusion = inclusion


class IllConditionedError(ArithmeticError):
    """A step that is exact in theory lost too much accuracy numerically."""
