"""Exception types shared across the package."""


class FirefrontError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(FirefrontError, ValueError):
    """Invalid configuration or incompatible inputs.

    Carries a list of problem strings so parsers can report every violation
    at once instead of failing on the first.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class LinearSolverError(FirefrontError, RuntimeError):
    """The inner linear solve missed its residual contract."""

    def __init__(self, residual, iterations, tol):
        self.residual = residual
        self.iterations = iterations
        self.tol = tol
        super().__init__(
            f"linear solve stalled at relative residual {residual:.3e} "
            f"after {iterations} iterations (contract {tol:.1e})"
        )


class JunctionMismatchError(FirefrontError, ValueError):
    """Chunk junction snapshots differ; gluing would be meaningless."""

    def __init__(self, jump, tol):
        self.jump = jump
        self.tol = tol
        super().__init__(
            f"junction snapshots differ by {jump:.3e} per node (limit {tol:.1e}); "
            "restart data must be the previous endpoint"
        )


class NonconvergenceError(FirefrontError, RuntimeError):
    """A fixed-point solve failed to converge within its budget.

    ``partial`` holds the trajectory glued so far (may be None), ``plan`` the
    chunk plan at the moment of failure (may be None), and ``report`` the
    failing fixed-point report.
    """

    def __init__(self, message, report, partial=None, plan=None):
        self.report = report
        self.partial = partial
        self.plan = plan
        super().__init__(message)
