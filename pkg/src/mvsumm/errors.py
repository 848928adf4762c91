"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid or inconsistent input data (files, matrices, metadata)."""


class NumericalError(RuntimeError):
    """A numerical routine failed (non-finite values, factorization failure)."""
