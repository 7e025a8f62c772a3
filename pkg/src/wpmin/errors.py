"""Exception hierarchy shared by the numerics and the CLI."""


class WpminError(Exception):
    """Base class for every error raised by this package."""


class PoleProximityError(WpminError, ValueError):
    """An evaluation point lies too close to a pole."""


class ConvergenceError(WpminError, RuntimeError):
    """A series or iteration did not reach the requested accuracy."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted its subdivision budget."""


class PathThroughPoleError(PoleProximityError):
    """An integration path passes through (or too close to) a puncture."""


class GaussMapPoleError(PoleProximityError):
    """A finite value of the Gauss map was requested at one of its poles."""


class FitDegeneracyError(WpminError, ArithmeticError):
    """Sampled cycle integrals are not consistent with a quadratic in lambda."""


class NonpositiveRadicandError(WpminError, ArithmeticError):
    """The scale constant c would be imaginary for the requested lambda."""


class ContourError(WpminError, ValueError):
    """A residue contour encloses or crosses more than one singularity."""


class SamplingError(WpminError, ValueError):
    """The sampling plan is invalid or leaves no usable points."""
