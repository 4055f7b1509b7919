class NonConvergence(RuntimeError):
    """A numerical solve ran out of iterations or restarts.

    Never a proof of infeasibility; ``best_residual`` and ``best_margin``
    describe the closest attempt.
    """

    def __init__(self, message, best_residual=float("inf"), best_margin=0.0):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_margin = best_margin


class NowhereZeroFailure(RuntimeError):
    """No nowhere-zero vector/matrix was found within the retry budget."""

    def __init__(self, message, best_min_abs=0.0, attempts=0):
        super().__init__(message)
        self.best_min_abs = best_min_abs
        self.attempts = attempts
