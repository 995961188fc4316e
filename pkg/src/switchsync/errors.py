"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class SingularMatrixError(InvalidInputError):
    """A matrix cannot be inverted reliably.

    Carries the condition-number estimate that triggered the failure.
    """

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class InfeasibleError(RuntimeError):
    """The gain synthesis could not reach a feasible point.

    ``best_margin`` is the smallest worst-case constraint violation seen
    before giving up; positive values mean some constraint was still
    violated at every iterate.
    """

    def __init__(self, message: str, best_margin: float):
        super().__init__(f"{message} (best margin {best_margin:.3e})")
        self.best_margin = best_margin


class DivergenceError(RuntimeError):
    """An integrated trajectory left the finite range.

    ``time`` is the simulation time at which the blow-up was detected.
    """

    def __init__(self, time: float):
        super().__init__(f"trajectory diverged at t = {time:.6f} s")
        self.time = time
