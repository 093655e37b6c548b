"""Streaming weak Schur sampling: simulator, oracle and resource models."""

__version__ = "0.1.0"
