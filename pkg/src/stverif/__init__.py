"""Bounded verification of PLC Structured Text programs."""

__version__ = "0.1.0"
