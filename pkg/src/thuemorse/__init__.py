"""Numerics for the Thue-Morse measure: potentials, cylinder masses, pressure and spectra."""

__version__ = "0.1.0"
