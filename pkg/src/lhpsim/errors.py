"""Exception hierarchy for the loop-heat-pipe toolkit."""


class LhpError(Exception):
    """Base class for all toolkit errors."""


class PropertyRangeError(LhpError):
    """Temperature outside the validity range of a property correlation."""


class AntoineDomainError(LhpError):
    """Saturation relation evaluated outside its domain (C_wf + T <= 0, p <= 0, ...)."""


class ModelValidityError(LhpError):
    """A model assumption broke down (non-positive denominator, reversed flow, ...)."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} (at t = {t:.6f} s)"
        super().__init__(message)
        self.t = t


class ModeBoundaryError(LhpError):
    """State left the variable-conductance operating mode (eta or V_cc_l at a bound)."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} (at t = {t:.6f} s)"
        super().__init__(message)
        self.t = t


class FixedPointError(LhpError):
    """An auxiliary fixed-point iteration failed to converge."""


class ConvergenceError(LhpError):
    """A root-finding solve (equilibrium or identification) did not converge."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class InfeasibleError(LhpError):
    """Identification produced a physically inadmissible parameter."""


class ConfigError(LhpError):
    """Invalid or incomplete run configuration."""

    def __init__(self, message, path=None):
        if path is not None:
            message = f"{message} (config path: {path})"
        super().__init__(message)
        self.path = path


class GridMismatchError(LhpError):
    """Signals compared on different sample grids."""
