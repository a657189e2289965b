"""Eye-movement analytics for code-reading studies."""

__version__ = "0.1.0"
