class ParameterError(ValueError):
    """Invalid argument combination (bad sizes, mismatched grids, bad config)."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""
