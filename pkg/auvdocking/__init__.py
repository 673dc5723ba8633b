"""Headless AUV optical docking simulator."""

__version__ = "0.1.0"
