"""Exception hierarchy shared by every module of the package."""


class SchurDPPError(ValueError):
    """Base class for all errors raised by this package."""


class CapExceededError(SchurDPPError):
    """A desk-scale degree or size cap was exceeded."""


class DivergenceError(SchurDPPError):
    """A product or series is evaluated outside its region of convergence."""


class PoleError(SchurDPPError):
    """An argument sits on (or within tolerance of) a pole."""


class CoincidentPointsError(SchurDPPError):
    """Two evaluation points coincide where the formula needs them distinct."""


class RadiusWindowError(SchurDPPError):
    """Contour radii violate the admissible window for the integrand."""


class RadiusChainInfeasibleError(RadiusWindowError):
    """No admissible chain of contour radii exists for a multi-level integral."""


class ParameterWindowError(SchurDPPError):
    """Series parameters lie outside the window guaranteeing convergence."""


class SingularPairError(SchurDPPError):
    """A Cauchy matrix has an entry with zero denominator."""


class DimensionTooLargeError(SchurDPPError):
    """The requested integral dimension exceeds the supported cap."""


class NonFiniteError(SchurDPPError):
    """An integrand returned NaN or infinity."""


class NonRealResultError(SchurDPPError):
    """A quantity that must be real has a non-negligible imaginary part."""


class BudgetExceededError(SchurDPPError):
    """Adaptive quadrature ran out of its evaluation budget.

    The best value reached so far is attached as ``value`` with its last
    successive difference as ``est_error``.
    """

    def __init__(self, message, value=None, est_error=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error
