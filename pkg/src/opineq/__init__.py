"""Numerical verification of refined Young-type inequalities for scalars and
positive definite matrices."""

__version__ = "0.1.0"
