class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


class TrainingAborted(RuntimeError):
    """A training run hit a non-finite objective; ``record`` holds the partial history."""

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record
