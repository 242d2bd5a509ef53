"""Personalized local search with click/dwell re-ranking and sequential pattern mining."""

__version__ = "0.1.0"
