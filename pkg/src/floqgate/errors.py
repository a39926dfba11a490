"""Exception types shared across the package."""


class FloqgateError(Exception):
    """Base class for all package errors."""


class NonSquare(FloqgateError):
    pass


class NotHermitian(FloqgateError):
    pass


class DimMismatch(FloqgateError):
    pass


class OutOfWindow(FloqgateError):
    """Time argument outside the pulse/evolution window."""


class OutOfDomain(FloqgateError):
    """Argument outside the supported special-function domain."""


class ZeroEffectiveCoupling(FloqgateError):
    pass


class NonPositiveDistance(FloqgateError):
    pass


class ResonanceUnsatisfied(FloqgateError):
    """No integer sideband order bridges the interaction shift."""


class NoRootInWindow(FloqgateError):
    pass


class MultipleRoots(FloqgateError):
    pass


class ToleranceNotMet(FloqgateError):
    """Adaptive integrator failed (step underflow or solver error)."""


class InvariantViolated(FloqgateError):
    """A sampled density matrix broke trace/Hermiticity/positivity bounds."""


class ConfigInvalid(FloqgateError):
    pass


class ExperimentFailed(FloqgateError):
    pass
