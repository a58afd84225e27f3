"""Exception types shared across the solver stack."""


class SolverError(RuntimeError):
    """Base class for numerical failures in the Floquet/CF machinery."""


class SingularResolventError(SolverError):
    """A continued-fraction rung produced a singular linear system."""

    def __init__(self, rung: int, detail: str = ""):
        self.rung = rung
        msg = f"singular resolvent at ladder rung n={rung}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class DegenerateSteadyStateError(SolverError):
    """The effective Liouvillian has a (numerically) multi-dimensional nullspace."""


class NoSplittingError(ValueError):
    """Polariton peak formula evaluated below the strong-coupling threshold."""


class ConfigError(ValueError):
    """Invalid scenario/config input (bad key, bad value, bad sweep)."""
