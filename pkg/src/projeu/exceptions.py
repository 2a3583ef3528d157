"""Exception hierarchy shared by the library and the command line."""


class PEUError(Exception):
    """Base class for all errors raised by projeu."""


class InvariantError(PEUError, ValueError):
    """A value violates a structural invariant (shape, symmetry, normalization)."""


class ConvergenceError(PEUError, RuntimeError):
    """An iterative routine hit its iteration cap.

    ``state`` carries whatever partial result the routine had reached so the
    caller can inspect or restart from it.
    """

    def __init__(self, message, state=None, residual=None):
        super().__init__(message)
        self.state = state
        self.residual = residual


class NonSphericalMixtureError(InvariantError):
    """A statewise mixture of two acts left the unit sphere."""

    def __init__(self, state, norm):
        super().__init__(
            f"non-spherical mixture in state {state!r}: norm {norm:.12g} != 1"
        )
        self.state = state
        self.norm = norm


class SchemaError(PEUError):
    """A JSON document does not match its expected schema."""

    def __init__(self, message, path=None):
        where = f" at {path}" if path else ""
        super().__init__(f"{message}{where}")
        self.path = path
