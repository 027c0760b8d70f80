"""Tomographic-probability toolkit for continuous-variable and spin systems."""

__version__ = "0.1.0"
