"""Exception types raised by the solver stack."""


class WenoAdjError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WenoAdjError, ValueError):
    """Invalid grid, time grid, scheme parameters or problem setup."""


class IntegrationError(WenoAdjError, RuntimeError):
    """A forward or adjoint sweep produced non-finite values."""

    def __init__(self, message, step=None, time=None):
        if step is not None:
            message = f"{message} (step {step}"
            message += f", t={time:.6g})" if time is not None else ")"
        super().__init__(message)
        self.step = step
        self.time = time


class OracleFailure(WenoAdjError, RuntimeError):
    """A reference solver did not converge (e.g. post-shock characteristics)."""


class DescentStall(WenoAdjError, RuntimeError):
    """Armijo backtracking exhausted; carries the partial report."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report
