"""Symmetric Bernoulli convolution approximants.

The contraction ``alpha in (0, 1)`` parameterizes the compactly supported
probability measure solving ``phi(x) = (lambda/2)(phi(lambda x - 1) +
phi(lambda x + 1))`` with ``lambda = 1/alpha``; equivalently the law of the
random series ``sum_{j>=1} (+-1) alpha^j`` with fair independent signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BadParameterError, BudgetExceededError
from .refinement import TwoScaleEquation

__all__ = [
    "BernoulliModel",
    "DensityHistogram",
    "SmoothnessVerdict",
    "threshold",
    "smoothness_verdict",
    "fourier",
    "density",
    "as_equation",
]

_MAX_DEPTH = 26
_BLOCK_BITS = 20


@dataclass(frozen=True)
class BernoulliModel:
    """Contraction ratio alpha = 1/lambda of the two-term equation."""

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise BadParameterError(
                f"alpha must lie in (0, 1); the dilation regime lambda < 1 "
                f"(alpha >= 1) is out of scope (got alpha={self.alpha!r})"
            )

    @property
    def lam(self) -> float:
        return 1.0 / self.alpha

    def support_radius(self) -> float:
        return self.alpha / (1.0 - self.alpha)


@dataclass(frozen=True, eq=False)
class DensityHistogram:
    """Exact dyadic-weight histogram of the depth-truncated sign series.

    Bins are half-open [left, right) with the last bin closed, matching
    numpy's histogram convention; an atom exactly on an interior edge lands
    in the bin opening at that edge.  Masses are counts times 2^-depth, so
    they sum to exactly 1.  Truncation at ``depth`` displaces each atom by
    at most alpha^(depth+1)/(1-alpha), recorded as ``positional_error``.
    """

    bin_edges: np.ndarray
    masses: np.ndarray
    depth: int
    positional_error: float

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])


class SmoothnessVerdict(str, Enum):
    RULED_OUT = "RuledOut"
    UNKNOWN = "Unknown"


def threshold(n: int) -> float:
    """Contraction cutoff 2^(-1/(n+1)) below which no C^n solution exists."""
    if n < 0:
        raise BadParameterError("smoothness order must be nonnegative")
    return 2.0 ** (-1.0 / (n + 1))


def smoothness_verdict(alpha: float, n: int) -> SmoothnessVerdict:
    """RuledOut iff alpha < threshold(n); no claim is made above it.

    The cutoff is strict, so equality classifies as Unknown.
    """
    if not (0.0 < alpha < 1.0):
        raise BadParameterError("alpha must lie in (0, 1)")
    if alpha < threshold(n):
        return SmoothnessVerdict.RULED_OUT
    return SmoothnessVerdict.UNKNOWN


def fourier(model: BernoulliModel, gamma: float, tol: float) -> float:
    """Characteristic function: truncated product of cos(2 pi alpha^j gamma).

    The truncation depth J satisfies sum_{j>J} (2 pi alpha^j gamma)^2 / 2
    <= tol, using 1 - cos(u) <= u^2/2 on each neglected factor.  The result
    is real because the measure is symmetric.
    """
    if not (tol > 0.0):
        raise ValueError("tolerance must be positive")
    if gamma == 0.0:
        return 1.0
    alpha = model.alpha
    # tail bound: (2 pi |gamma|)^2 alpha^(2(J+1)) / (2 (1 - alpha^2)) <= tol
    lead = (2.0 * math.pi * abs(gamma)) ** 2 / (2.0 * (1.0 - alpha * alpha))
    depth = 1
    if lead > tol:
        depth = max(1, math.ceil(0.5 * math.log(lead / tol) / -math.log(alpha)))
    product = 1.0
    scale = 1.0
    for _ in range(depth):
        scale *= alpha
        product *= math.cos(2.0 * math.pi * scale * gamma)
    return product


def _sign_sums(alpha: float, exponents: range) -> np.ndarray:
    """All 2^len(exponents) values of sum_j (+-1) alpha^j, ordered by sign bits."""
    sums = np.zeros(1)
    for j in exponents:
        term = alpha**j
        sums = np.concatenate([sums - term, sums + term])
    return sums


def _symmetric_edges(radius: float, bins: int) -> np.ndarray:
    idx = np.arange(bins + 1, dtype=np.float64) - bins / 2.0
    edges = idx * (2.0 * radius / bins)
    edges[0] = -radius
    edges[-1] = radius
    return edges


def density(model: BernoulliModel, depth: int, bins: int) -> DensityHistogram:
    """Exact enumeration of the depth-truncated sign series, binned.

    All 2^depth sign patterns are enumerated (blockwise, in fixed branch
    order) with weight 2^-depth each, so the histogram is deterministic and
    its masses are exact dyadic rationals.
    """
    if depth < 1:
        raise BadParameterError("depth must be positive")
    if depth > _MAX_DEPTH:
        raise BudgetExceededError(
            f"depth {depth} exceeds the exact enumeration budget of {_MAX_DEPTH}"
        )
    if bins < 1:
        raise BadParameterError("bin count must be positive")

    alpha = model.alpha
    radius = model.support_radius()
    edges = _symmetric_edges(radius, bins)

    tail_bits = min(depth, _BLOCK_BITS)
    prefix_bits = depth - tail_bits
    # sums over the deepest tail_bits exponents, reused for every prefix
    tail = _sign_sums(alpha, range(prefix_bits + 1, depth + 1))

    counts = np.zeros(bins, dtype=np.int64)
    prefix_terms = [alpha**j for j in range(1, prefix_bits + 1)]
    for prefix_index in range(1 << prefix_bits):
        offset = 0.0
        for bit, term in enumerate(prefix_terms):
            offset += term if (prefix_index >> bit) & 1 else -term
        block_counts, _ = np.histogram(offset + tail, bins=edges)
        counts += block_counts

    weight = 2.0 ** (-depth)
    masses = counts * weight
    positional_error = alpha ** (depth + 1) / (1.0 - alpha)
    return DensityHistogram(
        bin_edges=edges,
        masses=masses,
        depth=depth,
        positional_error=positional_error,
    )


def as_equation(model: BernoulliModel) -> TwoScaleEquation:
    """The two-term refinement equation with dilation 1/alpha."""
    lam = model.lam
    return TwoScaleEquation(lam, [(lam / 2.0, -1.0), (lam / 2.0, 1.0)])
