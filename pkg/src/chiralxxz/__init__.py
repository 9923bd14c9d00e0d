"""Stark-dressed chiral molecules as an XXZ spin chain with emergent DMI."""

__version__ = "0.1.0"
