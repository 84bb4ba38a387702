"""Exception types shared across the library."""


class DimensionMismatch(ValueError):
    """Operands live in algebras or spaces of different dimension."""


class SingularPoint(ValueError):
    """Evaluation point coincides with (the orbit of) a kernel singularity."""


class PoleError(ValueError):
    """Moebius map evaluated at a pole (cx + d not invertible)."""


class RegimeError(ValueError):
    """Lattice rank outside the convergence regime of the requested series."""


class SurfaceError(ValueError):
    """Quadrature surface violates a precondition (asymmetry, zero on contour)."""


class AccuracyError(RuntimeError):
    """A quantity that must round to an integer missed by more than the margin."""


class ConfigError(ValueError):
    """Invalid run configuration (CLI exit code 2)."""
