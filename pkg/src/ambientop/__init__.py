"""Exact verification engine for ambient-space conformally invariant operators."""

__version__ = "0.1.0"
