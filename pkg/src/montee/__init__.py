"""Modality- and negation-aware event extraction over CCG dependency graphs."""

__version__ = "0.1.0"
SCHEMA_VERSION = 1

from montee.errors import MonteeError  # noqa: E402

__all__ = ["MonteeError", "SCHEMA_VERSION", "__version__"]
