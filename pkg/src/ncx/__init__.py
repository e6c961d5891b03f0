"""ncx: exact computational toolkit for nearly convex polyhedral sets and
convex functions with prescribed subdifferential domains."""

__version__ = "0.1.0"
