"""Computations with right-angled Artin groups and their automorphisms."""
__version__ = "0.1.0"
