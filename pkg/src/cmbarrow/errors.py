class DomainError(ValueError):
    """Argument outside the domain of an operation."""
