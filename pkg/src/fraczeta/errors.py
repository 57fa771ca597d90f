"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside an operation's documented domain."""


class PoleError(DomainError):
    """Evaluation requested at a genuine pole.

    ``location`` records where the pole sits (an integer for Gamma,
    the complex point for the zeta family).
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class RemovableSingularityError(DomainError):
    """Point is too close to a removable singularity of the direct formula.

    The caller should use the circle-averaging evaluator instead; the
    message names it.
    """


class CapacityError(RuntimeError):
    """Request exceeds a configured size or memory budget."""


class ConvergenceMetadataError(ValueError):
    """Infinite-series evaluation requested without finite support or a
    declared absolute-convergence abscissa."""


class TailToleranceError(RuntimeError):
    """Quadrature tail bound exceeds the requested tolerance; rerun with
    more periods or the exact tail mode."""


class UnsupportedPairingError(DomainError):
    """No closed form exists for the requested (order, trig kind) pairing."""


class DivergenceWarning(UserWarning):
    """Partial sum requested where absolute convergence is not declared."""
