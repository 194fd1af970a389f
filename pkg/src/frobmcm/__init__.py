"""Frobenius pushforwards, decompositions and para-canonical modules over graded rings in characteristic p."""

__version__ = "0.1.0"
