"""Exception types shared across the engine."""


class InputError(ValueError):
    """Bad user input: malformed equation, cap exceeded, missing assignment."""


class InvariantError(RuntimeError):
    """An internal self-check failed. Always a bug, never a user mistake."""
