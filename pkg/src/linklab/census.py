"""Exact enumeration formulas, probabilities and volume-bound arithmetic.

Counts are Python integers and probabilities are ``fractions.Fraction``;
nothing is rounded until a value is rendered with ``float()``.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

__all__ = [
    "V3",
    "V8",
    "factorial",
    "set_factorial_cap",
    "count_sq",
    "count_sq_m",
    "prob_root_face",
    "expected_m_gons",
    "p_n2_expansion",
    "count_q",
    "count_q_boundary",
    "tangle_prob",
    "tangle_prob_limit",
    "diagram_prob_with_crossings",
    "expected_rooting_count",
    "expected_rooting_count_limit",
    "VolumeBounds",
    "volume_bounds_from_twist",
    "expected_volume_bounds",
    "expected_twist",
    "LOWER_SLOPE",
    "UPPER_SLOPE",
    "PRE_OCTAHEDRAL_UPPER_SLOPE",
]

# regular ideal tetrahedron: Cl2(pi/3); regular ideal octahedron: 4 * Catalan's constant
V3 = 1.01494160640965362502
V8 = 3.66386237670887606022

LOWER_SLOPE = 19 * V3 / 54
UPPER_SLOPE = V8
PRE_OCTAHEDRAL_UPPER_SLOPE = 190 * V3 / 27


class _FactorialTable:
    def __init__(self, cap=10**5):
        self.cap = cap
        self._table = [1]
        self._lock = threading.Lock()

    def __call__(self, k):
        if k < 0:
            raise DomainError(f"factorial of negative number {k}")
        t = self._table
        if k < len(t):
            return t[k]
        if k > self.cap:
            return math.factorial(k)
        with self._lock:
            t = self._table
            while len(t) <= k:
                t.append(t[-1] * len(t))
        return self._table[k]


factorial = _FactorialTable()


def set_factorial_cap(cap):
    factorial.cap = int(cap)


def _exact(x):
    return Fraction(x)


def count_sq(n):
    """Rooted nonseparable planar maps with n edges, i.e. |SQ(n)|."""
    if n < 2:
        raise DomainError("count_sq needs n >= 2")
    f = factorial
    num = 2 * f(3 * n - 3)
    den = f(n) * f(2 * n - 1)
    q, r = divmod(num, den)
    assert r == 0
    return q


def count_sq_m(n, m):
    """Rooted nonseparable maps with n edges and root vertex of valence m."""
    if not (n >= m >= 2):
        raise DomainError("count_sq_m needs n >= m >= 2")
    f = factorial
    total = Fraction(0)
    for j in range(m, min(n, 2 * m) + 1):
        num = (3 * m - 2 * j - 1) * (2 * j - m) * f(j - 2) * f(3 * n - j - m - 1)
        den = f(n - j) * f(j - m) * f(j - m + 1) * f(2 * m - j)
        total += Fraction(num, den)
    total *= Fraction(m, f(2 * n - m))
    assert total.denominator == 1
    return total.numerator


def prob_root_face(n, m):
    """P(n, m): probability that the root face of a uniform SQ(n) map is an m-gon."""
    return Fraction(count_sq_m(n, m), count_sq(n))


def expected_m_gons(n, m):
    """Expected number of m-gons in a uniform diagram on SQ(n): (4n/m) P(n, m).

    Automorphisms of a rooted 4-valent map act freely on its 4n darts, so
    averaging the root-face indicator over the rootings of each unrooted
    map gives this value exactly, with no correction for symmetric maps.
    """
    return Fraction(4 * n, m) * prob_root_face(n, m)


def p_n2_expansion(n):
    """(exact P(n,2) from its product form, 4/27 + 10/(27n), residual)."""
    if n <= 3:
        raise DomainError("the product form of P(n, 2) needs n >= 4")
    exact = Fraction((2 * n - 1) * n * (n - 1) * (n - 2) * (n - 3),
                     (3 * n - 3) * (3 * n - 4) * (3 * n - 5) * (3 * n - 6)) * Fraction(6, n - 3)
    asym = Fraction(4, 27) + Fraction(10, 27 * n)
    return exact, float(asym), float(exact - asym)


def count_q(n):
    """Rooted quadrangulations with n faces (= rooted 4-valent maps with n vertices)."""
    if n < 1:
        raise DomainError("count_q needs n >= 1")
    f = factorial
    q, r = divmod(2 * 3**n * f(2 * n), f(n) * f(n + 2))
    assert r == 0
    return q


def count_q_boundary(n, p):
    """Rooted quadrangulations with n inner faces and a self-avoiding boundary of length 2p."""
    if p < 1 or n < p - 1:
        raise DomainError("count_q_boundary needs p >= 1 and n >= p - 1")
    f = factorial
    v = Fraction(3) ** (n - p) * Fraction(f(3 * p), f(p) * f(2 * p - 1)) \
        * Fraction(f(2 * n + p - 1), f(n - p + 1) * f(n + 2 * p))
    assert v.denominator == 1
    return v.numerator


def tangle_prob(n, p, N):
    """P(n, p, N) = |Q(N - n, p)| / |Q(N)|."""
    if N <= n or n < 0 or p < 1:
        raise DomainError("tangle_prob needs N > n >= 0 and p >= 1")
    if N - n < p - 1:
        return Fraction(0)
    return Fraction(count_q_boundary(N - n, p), count_q(N))


def _p_lim_exact(n, p):
    return Fraction(factorial(3 * p), 9 * factorial(p) * factorial(2 * p - 1)) \
        * Fraction(2, 3) ** (p - 2) * Fraction(1, 12**n)


def tangle_prob_limit(n, p):
    if n < 0 or p < 1:
        raise DomainError("tangle_prob_limit needs n >= 0 and p >= 1")
    return float(_p_lim_exact(n, p))


def diagram_prob_with_crossings(n, p, N):
    """Probability that a fixed n-crossing tangle sits at the root: 2^-n P(n, p, N)."""
    return float(tangle_prob(n, p, N) / 2**n)


def expected_rooting_count(n, p, c):
    """(4c) 2^-n P(n, p, c); exact for the same reason as :func:`expected_m_gons`."""
    if c <= n:
        raise DomainError("expected_rooting_count needs c > n")
    return float(4 * c * tangle_prob(n, p, c) / 2**n)


def expected_rooting_count_limit(n, p):
    return float(4 * _p_lim_exact(n, p) / 2**n)


@dataclass(frozen=True)
class VolumeBounds:
    lower: float
    upper: float
    v3: float = V3
    v8: float = V8

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def contains(self, volume, tol=1e-9):
        return self.lower - tol <= volume <= self.upper + tol


def volume_bounds_from_twist(t, n):
    """Twist-number bounds on the volume, capped above by the octahedral bound."""
    if t < 1 or n < t:
        raise DomainError("need 1 <= t <= n")
    lower = max(0.0, V3 * (t - 2) / 2)
    upper = min(10 * V3 * (t - 1), V8 * n)
    return VolumeBounds(lower, upper)


def expected_volume_bounds(n):
    """Leading-order bounds on the mean volume of a random alternating n-crossing link.

    The O(1/n) terms are omitted.
    """
    if n < 2:
        raise DomainError("expected_volume_bounds needs n >= 2")
    lower = LOWER_SLOPE * n + (10 * V3 / 27 - 2)
    return VolumeBounds(lower, V8 * n)


def expected_twist(n):
    """n - E[N_2] over SQ(n), using the exact P(n, 2)."""
    exact, _, _ = p_n2_expansion(n)
    return float(n - 2 * n * exact)
