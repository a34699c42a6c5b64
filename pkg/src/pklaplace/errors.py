"""Exception types raised by the solver library."""


class PKLaplaceError(Exception):
    """Base class for all library errors."""


class PreconditionError(PKLaplaceError):
    """A stated hypothesis of an operation is not met (not a bug, a gate)."""


class QuadratureError(PKLaplaceError):
    """Adaptive quadrature did not reach the requested tolerance.

    Carries the tolerance actually achieved in ``achieved_tol``.
    """

    def __init__(self, message, achieved_tol):
        super().__init__(f"{message} (achieved tolerance {achieved_tol:.3e})")
        self.achieved_tol = float(achieved_tol)


class IterationBudgetError(PKLaplaceError):
    """An iterative solver exhausted its budget; ``best`` holds the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class JacobianError(PKLaplaceError):
    """Newton's linear system is singular beyond what regularization can absorb."""


class PathCollapseError(PKLaplaceError):
    """The mountain-pass path maximum descended into an endpoint basin.

    Usually signals that the barrier hypothesis (endpoint energies below the
    separating sphere level) does not actually hold for this problem.
    """


class BarrierError(PreconditionError):
    """Endpoint energies do not lie below the required separating level."""


class LambdaScanError(PKLaplaceError):
    """The constant-profile energy never crossed below the barrier.

    With a valid lower growth envelope (exponent m above the largest grid
    exponent) the crossing is guaranteed, so this points at a violated
    envelope or an overflow-guard hit.
    """


class DistinctnessError(PKLaplaceError):
    """The two computed critical points coincide numerically."""


class ConditionRefusalError(PKLaplaceError):
    """A hard condition gate failed; carries the offending ConditionReport."""

    def __init__(self, report):
        super().__init__(
            f"condition {report.condition_id} failed: "
            f"lhs={report.lhs!r}, rhs={report.rhs!r}"
        )
        self.report = report


class SolveStageError(PKLaplaceError):
    """A stage of the two-solution pipeline failed; names the stage."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class ConfigError(PKLaplaceError):
    """A problem configuration file failed to parse or validate."""
