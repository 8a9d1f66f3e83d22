class GraphError(ValueError):
    """Invalid graph construction or parameters. ``pair`` names the offending edge."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


class InvariantViolation(RuntimeError):
    """A walk engine or resource tally broke one of its guaranteed invariants."""
