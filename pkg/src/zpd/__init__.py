"""zpd: zeta-zero phases and twisted von Mangoldt sums, checked numerically."""

from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
