"""Error types shared across the package."""


class PrecisionTooLow(ValueError):
    """Requested working precision is below the supported minimum."""


class PrecisionExhausted(ArithmeticError):
    """A tracked error bound crossed its budget; raise precision and retry."""
