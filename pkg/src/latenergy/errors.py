class BudgetExceeded(RuntimeError):
    """A configured memory / tuple / grid budget would be exceeded."""
