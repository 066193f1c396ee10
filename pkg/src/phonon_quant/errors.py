"""Exception types shared across the toolkit."""


class PhononQuantError(Exception):
    """Base class for toolkit-specific failures."""


class ConfigError(PhononQuantError):
    """Invalid run configuration or input file."""


class PoleProximityError(PhononQuantError):
    """Requested frequency is unusably close to a pole of the admittance."""


class FitConvergenceError(PhononQuantError):
    """Iterative fit or root search failed to converge."""


class TransmonLimitError(PhononQuantError):
    """E_J / E_C ratio too small for the transmon-limit formulas."""


class ExpansionValidityError(PhononQuantError):
    """Zero-point phase too large for the quartic expansion of the cosine."""
