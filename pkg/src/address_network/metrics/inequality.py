import math
from typing import NamedTuple, Sequence

import numpy as np

from ..utils.errors import DataValidationError, DegenerateDistributionError, EmptyInputError

UNDEFINED = math.nan


class Moments(NamedTuple):
    mean: float
    std: float
    skewness: float
    kurtosis: float  # excess


def _as_array(values: Sequence[float]) -> np.ndarray:
    x = np.asarray([float(v) for v in values], dtype=np.float64)
    if x.size == 0:
        raise EmptyInputError("statistic of an empty list")
    return x


def distribution_moments(values: Sequence[float]) -> Moments:
    """Population mean, standard deviation, skewness and excess kurtosis."""
    x = _as_array(values)
    mean = float(x.mean())
    if np.ptp(x) == 0:
        return Moments(mean, 0.0, UNDEFINED, UNDEFINED)
    d = x - mean
    m2 = float(np.mean(d ** 2))
    m3 = float(np.mean(d ** 3))
    m4 = float(np.mean(d ** 4))
    return Moments(mean, math.sqrt(m2), m3 / m2 ** 1.5, m4 / m2 ** 2 - 3.0)


def gini(values: Sequence[float]) -> float:
    """
    Gini coefficient sum|x_i - x_j| / (2 n^2 mean), via the sorted form
    G = 2 * sum(i * x_(i)) / (n * sum x) - (n + 1) / n.
    """
    x = np.sort(_as_array(values))
    if x[0] < 0:
        raise DataValidationError("gini needs non-negative values")
    total = float(x.sum())
    if total == 0:
        raise DegenerateDistributionError("gini of an all-zero vector")
    n = x.size
    index = np.arange(1, n + 1, dtype=np.float64)
    coefficient = 2.0 * float(np.dot(index, x)) / (n * total) - (n + 1) / n
    return min(max(coefficient, 0.0), (n - 1) / n)
