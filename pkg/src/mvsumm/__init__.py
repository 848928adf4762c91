"""Multi-view shot summarization via joint spectral embedding and row-sparse selection."""

__version__ = "0.1.0"

from .errors import DataError, NumericalError

__all__ = ["DataError", "NumericalError", "__version__"]
