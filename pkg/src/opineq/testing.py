"""Hooks for negative-control tests. Not for production use."""

from contextlib import contextmanager

from . import scalar_bounds


@contextmanager
def perturbed_m_factor(shift: float = 1.0):
    """Temporarily replace the ``2**v`` constant of ``m_factor`` by ``2**(v + shift)``."""
    saved = scalar_bounds._M_FACTOR_SHIFT
    scalar_bounds._M_FACTOR_SHIFT = shift
    try:
        yield
    finally:
        scalar_bounds._M_FACTOR_SHIFT = saved
