class ArgumentError(ValueError):
    """Invalid arguments to a sievelab operation (CLI exit code 2)."""


class CheckFailure(AssertionError):
    """A verification suite found a violated identity or inequality (CLI exit code 3)."""
