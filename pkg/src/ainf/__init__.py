"""Exact computations with finite A-infinity categories."""

__version__ = "0.1.0"
