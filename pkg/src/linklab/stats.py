"""Single-pass, mergeable moment summaries.

Central moment sums up to order five are kept and combined with the
pairwise update rule for arbitrary-order central moments, so partial
summaries from independent streams merge associatively and give the same
answer as one pass over the concatenated data (up to rounding).
"""

from dataclasses import dataclass
from math import comb, inf, sqrt

import numpy as np

__all__ = ["MomentAccumulator", "StatsSummary", "summarize", "normalized_histogram"]

_ORDER = 5


@dataclass(frozen=True)
class StatsSummary:
    count: int
    mean: float
    variance: float
    skewness: float
    m4: float
    m5: float
    min: float
    max: float

    @property
    def std(self):
        return sqrt(self.variance)

    def sem(self):
        return sqrt(self.variance / self.count) if self.count > 1 else inf


class MomentAccumulator:
    """Running count, mean and central moment sums M2..M5, plus min/max."""

    __slots__ = ("n", "mean", "M", "lo", "hi")

    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.M = [0.0] * (_ORDER + 1)
        self.lo = inf
        self.hi = -inf

    def add(self, x):
        other = MomentAccumulator()
        other.n = 1
        other.mean = float(x)
        other.lo = other.hi = float(x)
        self.merge(other)
        return self

    def extend(self, xs):
        for x in xs:
            self.add(x)
        return self

    def merge(self, other):
        if other.n == 0:
            return self
        if self.n == 0:
            self.n, self.mean, self.M = other.n, other.mean, list(other.M)
            self.lo, self.hi = other.lo, other.hi
            return self
        na, nb = self.n, other.n
        n = na + nb
        delta = other.mean - self.mean
        A, B = self.M, other.M
        out = [0.0] * (_ORDER + 1)
        for p in range(2, _ORDER + 1):
            s = A[p] + B[p]
            for k in range(1, p - 1):
                s += comb(p, k) * delta**k * ((-nb / n) ** k * A[p - k] + (na / n) ** k * B[p - k])
            s += (na * nb / n * delta) ** p * (1 / nb ** (p - 1) - (-1 / na) ** (p - 1))
            out[p] = s
        self.n = n
        self.mean += delta * nb / n
        self.M = out
        self.lo = min(self.lo, other.lo)
        self.hi = max(self.hi, other.hi)
        return self

    def summary(self):
        n = self.n
        if n == 0:
            nan = float("nan")
            return StatsSummary(0, nan, nan, nan, nan, nan, nan, nan)
        m2 = self.M[2] / n
        var = self.M[2] / (n - 1) if n > 1 else 0.0
        if m2 > 0:
            g1 = (self.M[3] / n) / m2**1.5
            s4 = (self.M[4] / n) / m2**2
            s5 = (self.M[5] / n) / m2**2.5
        else:
            g1 = s4 = s5 = 0.0
        return StatsSummary(n, self.mean, max(var, 0.0), g1, s4, s5, self.lo, self.hi)


def summarize(values):
    return MomentAccumulator().extend(values).summary()


def normalized_histogram(values, bins=20):
    """Histogram of (x - mean) / std as a density; returns (edges, density)."""
    x = np.asarray(values, dtype=float)
    sd = x.std()
    z = (x - x.mean()) / sd if sd > 0 else np.zeros_like(x)
    density, edges = np.histogram(z, bins=bins, density=True)
    return edges, density
