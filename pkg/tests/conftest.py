"""Shared oracles for the test suite.

Everything here is computed independently of the package code paths: pi via
a Machin formula in exact rational arithmetic, square roots via isqrt, e
via its factorial series, continued fractions via the Euclidean algorithm,
and reference sums via mpmath at high working precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Tuple

import mpmath
import pytest


def arctan_inv_fraction(x: int, digits: int) -> Fraction:
    """atan(1/x) as a Fraction with error below 10^-digits (alternating tail)."""
    tol = Fraction(1, 10 ** (digits + 1))
    total = Fraction(0)
    k = 0
    while True:
        term = Fraction(1, (2 * k + 1) * x ** (2 * k + 1))
        total += -term if k % 2 else term
        if term < tol:
            return total
        k += 1


def pi_fraction(digits: int) -> Fraction:
    """Machin: pi = 16 atan(1/5) - 4 atan(1/239), error < 10^-digits."""
    return 16 * arctan_inv_fraction(5, digits + 2) - 4 * arctan_inv_fraction(239, digits + 2)


def sqrt_fraction(d: int, digits: int) -> Fraction:
    """Lower rational approximation of sqrt(d), within 10^-digits."""
    scale = 10 ** digits
    return Fraction(math.isqrt(d * scale * scale), scale)


def e_fraction(digits: int) -> Fraction:
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    while term >= Fraction(1, 10 ** (digits + 1)):
        total += term
        k += 1
        term /= k
    return total


def euclid_cf(x: Fraction, limit: int = 10 ** 6) -> List[int]:
    """Canonical continued fraction of a rational via the Euclidean algorithm."""
    out = []
    for _ in range(limit):
        a = math.floor(x)
        out.append(a)
        frac = x - a
        if frac == 0:
            return out
        x = 1 / frac
    raise AssertionError("rational expansion did not terminate")


def cf_convergents(pqs: List[int]) -> List[Tuple[int, int]]:
    p_prev, p = 1, pqs[0]
    q_prev, q = 0, 1
    out = [(p, q)]
    for a in pqs[1:]:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def record_points_fraction(alpha: Fraction, q_max: int) -> List[Tuple[int, int]]:
    """Strict records of |q*alpha - p| over q = 1..q_max, exact arithmetic."""
    records = []
    best = None
    for q in range(1, q_max + 1):
        scaled = alpha * q
        p = math.floor(scaled)
        if scaled - p > Fraction(1, 2):
            p += 1
        d = abs(scaled - p)
        if best is None or d < best:
            records.append((p, q))
            best = d
            if d == 0:
                break
    return records


def mp_partial_sum(alpha_mp, p: float, N: int, M: int, dps: int = 60) -> float:
    """Reference sum of (-1)^n n^-p |sin(n pi alpha)| over n = N+1..N+M."""
    with mpmath.workdps(dps):
        alpha = mpmath.mpf(alpha_mp) if not isinstance(alpha_mp, mpmath.mpf) else alpha_mp
        total = mpmath.mpf(0)
        for n in range(N + 1, N + M + 1):
            term = abs(mpmath.sin(mpmath.pi * n * alpha)) / mpmath.mpf(n) ** p
            total += -term if n % 2 else term
        return float(total)


@pytest.fixture(scope="session")
def pi_oracle() -> Fraction:
    return pi_fraction(120)


@pytest.fixture(scope="session")
def sqrt2_oracle() -> Fraction:
    return sqrt_fraction(2, 120)


@pytest.fixture(scope="session")
def e_oracle() -> Fraction:
    return e_fraction(120)
