"""Casimir free energy of plasma and Drude mirrors in two frequency representations."""
__version__ = "0.1.0"
