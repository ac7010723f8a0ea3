import numpy as np

from twoscale.generators import SampledGenerator
from twoscale.refinement import SampledFunction


def smooth_bump_generator(tags=("schwartz",), count=4097):
    """C-infinity bump exp(-1/(1-x^2)) on (-1, 1), sampled and tagged."""
    xs = np.linspace(-1.0, 1.0, count)
    values = np.zeros(count)
    interior = np.abs(xs) < 1.0
    values[interior] = np.exp(-1.0 / (1.0 - xs[interior] ** 2))
    sampled = SampledFunction(
        start=-1.0, step=2.0 / (count - 1), values=values, support=(-1.0, 1.0)
    )
    return SampledGenerator(sampled, extra_tags=tags)
