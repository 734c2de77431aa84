"""Exception types shared across the solver stack."""


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class NumericalBlowupError(RuntimeError):
    """Non-finite values appeared during time stepping.

    Carries the step index at which the blowup was detected (or None when
    raised outside a time loop).
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class RankOverflowError(RuntimeError):
    """The truncation tolerance cannot be met within the configured maximum
    rank; rerun with a larger tolerance or a larger rank cap."""
