"""Exact symbolic workbench for finite A-infinity categories."""

__version__ = "0.1.0"
