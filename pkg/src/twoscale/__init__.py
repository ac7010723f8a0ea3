"""Two-scale refinement equations, Bernoulli convolutions, and linear
independence analysis of finite wavelet systems."""

from . import bernoulli, numerics, refinement, serialize, wavelet_system
from .errors import TwoscaleError

__version__ = "0.1.0"

__all__ = [
    "TwoscaleError",
    "bernoulli",
    "numerics",
    "refinement",
    "serialize",
    "wavelet_system",
    "__version__",
]
