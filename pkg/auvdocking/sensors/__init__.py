# auvdocking/sensors/__init__.py

from .acoustic import AcousticChannel, AcousticFix

__all__ = ["AcousticChannel", "AcousticFix"]
