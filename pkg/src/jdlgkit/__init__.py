"""Reversible/stable splitting of completely positive dynamics on finite-dimensional W*-algebras."""

__version__ = "0.1.0"
