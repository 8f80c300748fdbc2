"""Numerical evaluation of the alternating sine-weighted partial sums.

S(alpha; M, N) = sum over n = N+1 .. N+M of (-1)^n f(n) |sin(n pi alpha)|.

The direct path reduces n*alpha modulo 1 with an error-free product of n
against a three-double split of a certified enclosure midpoint, so the
reduced argument never accumulates O(M) rounding drift.  The periodic path
exploits a rational alpha = a/q by computing the q sine weights once.
Every result carries an explicit worst-case rounding bound.  The module
also hosts the small numeric kernel used by the analysis: the Fourier
expansion of |sin|, geometric sums, oscillatory integrals and their
constant, and two direct bound checks.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .criterion import FDescriptor
from .errors import DSeriesError, TermLimitError
from .realsource import RealSource, Kind

__all__ = [
    "PartialSumResult",
    "DriftPrediction",
    "TraceRow",
    "SumTrace",
    "OscIntegralResult",
    "ApConstant",
    "partial_sum_direct",
    "partial_sum_periodic",
    "scan_partial_sums",
    "geometric_checkpoints",
    "drift_predict",
    "fourier_abs_sin",
    "geometric_sum",
    "osc_integral",
    "a_p_constant",
    "progression_sum_bound_check",
    "alternating_tail_check",
]

DEFAULT_MAX_TERMS = 10 ** 9
_EPS = 2.0 ** -52
_CHUNK = 1 << 20
_SPLIT = 2.0 ** 27 + 1.0  # Dekker splitter for exact double products

# Allowance multiplier for the O(q f(N)) remainder of the drift law;
# calibrated against direct summation on the acceptance grid.
DRIFT_ALLOWANCE_FACTOR = 4.0


@dataclass(frozen=True)
class PartialSumResult:
    value: float
    rounding_bound: float
    terms: int
    mode: str


@dataclass(frozen=True)
class DriftPrediction:
    """Predicted secular term of S(a/q; M, N) for even q.

    The sign follows the numerically verified convention (-1)^(N+1): the
    weight pattern sums to -tan(pi/2q) over one period, so an even starting
    index N drives the sum negative.
    """

    magnitude: float
    sign: int
    error_allowance: float

    @property
    def predicted(self) -> float:
        return self.sign * self.magnitude


@dataclass(frozen=True)
class TraceRow:
    m: int
    value: float
    rounding_bound: float


@dataclass(frozen=True)
class SumTrace:
    rows: Tuple[TraceRow, ...]
    final: PartialSumResult
    max_abs: Optional[float] = None
    max_abs_at: Optional[int] = None


def _require_range(N: int, M: int, max_terms: int) -> None:
    if N < 0 or M < 1:
        raise ValueError("need N >= 0 and M >= 1")
    if N + M > max_terms:
        raise TermLimitError(
            f"N + M = {N + M} exceeds the configured term limit {max_terms}"
        )


def _split3(x: Fraction) -> Tuple[float, float, float]:
    a1 = float(x)
    r = x - Fraction(a1)
    a2 = float(r)
    r -= Fraction(a2)
    a3 = float(r)
    return a1, a2, a3


def _f_values(f: FDescriptor, ns: np.ndarray) -> np.ndarray:
    if f.eval_vec is not None:
        return f.eval_vec(ns)
    return np.array([f.eval(float(t)) for t in ns], dtype=np.float64)


def _make_term_fn(
    source: RealSource, f: FDescriptor, N: int, M: int
) -> Tuple[Callable[[int, int], Tuple[np.ndarray, float]], float]:
    """Build chunk evaluator for terms with n in [lo, hi); returns it plus
    the per-term absolute error coefficient (multiplies f(n) in the bound)."""
    if source.kind is Kind.RATIONAL:
        a, q = source.a, source.q
        table = np.abs(np.sin(np.pi * (np.arange(q) * a % q) / q))

        def chunk_rational(lo: int, hi: int) -> Tuple[np.ndarray, float]:
            ns = np.arange(lo, hi, dtype=np.int64)
            w = table[ns % q]
            nf = ns.astype(np.float64)
            fv = _f_values(f, nf)
            signs = 1.0 - 2.0 * (ns & 1)
            terms = signs * fv * w
            return terms, float(np.sum(fv))

        return chunk_rational, 2.0e-15

    bits = (N + M).bit_length() + 64
    interval = source.approximate(bits)
    a1, a2, a3 = _split3(interval.midpoint)
    arg_err = float((N + M) * interval.width / 2) + 6.0e-16
    coeff = math.pi * arg_err + 1.2e-15

    def chunk_direct(lo: int, hi: int) -> Tuple[np.ndarray, float]:
        ns = np.arange(lo, hi, dtype=np.int64)
        nf = ns.astype(np.float64)
        # exact product nf * a1 via Dekker splitting
        p1 = nf * a1
        c = _SPLIT * nf
        nhi = c - (c - nf)
        nlo = nf - nhi
        c = _SPLIT * a1
        ahi = c - (c - a1)
        alo = a1 - ahi
        err = ((nhi * ahi - p1) + nhi * alo + nlo * ahi) + nlo * alo
        x = p1 - np.floor(p1)
        x += err + nf * a2 + nf * a3
        x -= np.floor(x)
        w = np.abs(np.sin(np.pi * x))
        fv = _f_values(f, nf)
        signs = 1.0 - 2.0 * (ns & 1)
        terms = signs * fv * w
        return terms, float(np.sum(fv))

    return chunk_direct, coeff


def _chunk_bound(absf: float, length: int, coeff: float) -> float:
    pairwise = _EPS * (math.log2(max(length, 2)) + 3.0)
    return absf * (coeff + pairwise)


def partial_sum_direct(
    source: RealSource,
    f: FDescriptor,
    N: int,
    M: int,
    *,
    max_terms: int = DEFAULT_MAX_TERMS,
    workers: int = 1,
    reverse: bool = False,
) -> PartialSumResult:
    """Sum the M terms after index N straight from an enclosure of alpha.

    The result is deterministic for fixed inputs regardless of `workers`:
    chunks are always combined in index order with exact accumulation of
    the chunk sums.  `reverse` sums the same terms backwards and exists to
    probe the rounding bound (the two orders must agree within it).
    """
    _require_range(N, M, max_terms)
    term_fn, coeff = _make_term_fn(source, f, N, M)
    ranges = [
        (lo, min(lo + _CHUNK, N + M + 1))
        for lo in range(N + 1, N + M + 1, _CHUNK)
    ]

    def eval_range(r: Tuple[int, int]) -> Tuple[float, float, float]:
        terms, absf = term_fn(*r)
        if reverse:
            terms = terms[::-1]
        return float(np.sum(terms)), absf, _chunk_bound(absf, r[1] - r[0], coeff)

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(eval_range, ranges))
    else:
        parts = [eval_range(r) for r in ranges]
    if reverse:
        parts = parts[::-1]
    value = math.fsum(p[0] for p in parts)
    bound = math.fsum(p[2] for p in parts) + 2 * _EPS * abs(value)
    return PartialSumResult(value=value, rounding_bound=bound, terms=M, mode="direct")


def partial_sum_periodic(
    a: int,
    q: int,
    f: FDescriptor,
    N: int,
    M: int,
    *,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> PartialSumResult:
    """Residue-class evaluation of S(a/q; M, N).

    Each class n = h (mod q) shares one weight |sin(pi a h / q)|; for even
    q the class has constant sign, for odd q it alternates.  Classes are
    summed separately (chunked, pairwise) and combined exactly.
    """
    if q < 1:
        raise ValueError("q must be positive")
    if math.gcd(a, q) != 1:
        raise ValueError("a/q must be in lowest terms")
    _require_range(N, M, max_terms)
    class_sums: List[float] = []
    absf_total = 0.0
    bound = 0.0
    for h in range(1, q + 1):
        w = abs(math.sin(math.pi * ((a * h) % q) / q))
        first = N + 1 + ((h - (N + 1)) % q)
        if first > N + M:
            continue
        count = (N + M - first) // q + 1
        if w == 0.0:
            continue
        pieces: List[float] = []
        absf_cls = 0.0
        step_chunk = _CHUNK
        for start_idx in range(0, count, step_chunk):
            stop_idx = min(start_idx + step_chunk, count)
            ns = first + q * np.arange(start_idx, stop_idx, dtype=np.int64)
            nf = ns.astype(np.float64)
            fv = _f_values(f, nf)
            if q % 2 == 0:
                signs = 1.0 if first % 2 == 0 else -1.0
                terms = signs * fv
            else:
                terms = (1.0 - 2.0 * (ns & 1)) * fv
            pieces.append(float(np.sum(terms)))
            absf_cls += float(np.sum(fv))
        s_cls = math.fsum(pieces) * w
        class_sums.append(s_cls)
        absf_total += absf_cls * w
        bound += _chunk_bound(absf_cls * w, count, 2.0e-15)
    value = math.fsum(class_sums)
    bound += 2 * _EPS * abs(value) + 2 * _EPS * absf_total
    return PartialSumResult(value=value, rounding_bound=bound, terms=M, mode="periodic")


def geometric_checkpoints(M: int) -> List[int]:
    """Checkpoints ceil(M / 2^j), deduplicated, ascending, ending at M."""
    if M < 1:
        raise ValueError("M must be positive")
    cps = set()
    m = M
    while True:
        cps.add(m)
        if m == 1:
            break
        m = -(-m // 2)
    return sorted(cps)


def scan_partial_sums(
    source: RealSource,
    f: FDescriptor,
    N: int,
    M: int,
    checkpoints: Optional[Sequence[int]] = None,
    *,
    track_max: bool = False,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SumTrace:
    """Single pass over the terms recording running sums at checkpoints.

    With track_max, also records the running maximum of |S(m)| over every
    m = 1..M (not just checkpoints) via per-chunk cumulative sums.
    """
    _require_range(N, M, max_terms)
    if checkpoints is None:
        cps = geometric_checkpoints(M)
    else:
        cps = sorted(set(int(c) for c in checkpoints))
        if cps and (cps[0] < 1 or cps[-1] > M):
            raise ValueError("checkpoints must lie in [1, M]")
    term_fn, coeff = _make_term_fn(source, f, N, M)
    chunk_sums: List[float] = []
    rows: List[TraceRow] = []
    bound = 0.0
    max_abs = 0.0
    max_at: Optional[int] = None
    cp_iter = iter(cps)
    next_cp = next(cp_iter, None)
    pos = N + 1
    end = N + M
    while pos <= end:
        hi = min(pos + _CHUNK - 1, end)
        if next_cp is not None:
            hi = min(hi, N + next_cp)
        terms, absf = term_fn(pos, hi + 1)
        offset = math.fsum(chunk_sums)
        if track_max:
            running = np.cumsum(terms) + offset
            i = int(np.argmax(np.abs(running)))
            cand = abs(float(running[i]))
            if cand > max_abs:
                max_abs = cand
                max_at = pos + i - N
        chunk_sums.append(float(np.sum(terms)))
        bound += _chunk_bound(absf, hi + 1 - pos, coeff)
        if next_cp is not None and hi == N + next_cp:
            value = math.fsum(chunk_sums)
            rows.append(
                TraceRow(m=next_cp, value=value, rounding_bound=bound + 2 * _EPS * abs(value))
            )
            next_cp = next(cp_iter, None)
        pos = hi + 1
    value = math.fsum(chunk_sums)
    final = PartialSumResult(
        value=value,
        rounding_bound=bound + 2 * _EPS * abs(value),
        terms=M,
        mode="direct",
    )
    return SumTrace(
        rows=tuple(rows),
        final=final,
        max_abs=max_abs if track_max else None,
        max_abs_at=max_at if track_max else None,
    )


def drift_predict(
    a: int, q: int, f: FDescriptor, N: int, M: int
) -> DriftPrediction:
    """Secular drift of S(a/q; M, N) for even q: magnitude, sign, allowance.

    magnitude = (tan(pi/2q)/q) * (F(N+M) - F(N)); the residual is of order
    q f(N), covered by error_allowance = 4 q f(N).
    """
    if q < 2 or q % 2 != 0:
        raise ValueError("drift law requires even q >= 2 (odd q stays bounded)")
    if math.gcd(a, q) != 1:
        raise ValueError("a/q must be in lowest terms")
    if N < 2 or N % 2 != 0:
        raise ValueError("N must be even and >= 2 (sign convention anchor)")
    if M < 1:
        raise ValueError("M must be positive")
    magnitude = (
        math.tan(math.pi / (2 * q))
        / q
        * (f.antiderivative(float(N + M)) - f.antiderivative(float(N)))
    )
    sign = -1 if N % 2 == 0 else 1
    return DriftPrediction(
        magnitude=magnitude,
        sign=sign,
        error_allowance=DRIFT_ALLOWANCE_FACTOR * q * f.eval(float(N)),
    )


def fourier_abs_sin(x: float, K: int) -> Tuple[float, float]:
    """Truncated cosine expansion of |sin(pi x)| with its tail bound.

    |sin(pi x)| = 2/pi - (4/pi) sum_{k>=1} cos(2 pi k x)/(4k^2 - 1); the
    truncation after K terms is off by at most 2/(pi (2K+1)).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    ks = np.arange(1, K + 1, dtype=np.float64)
    series = float(np.sum(np.cos((2.0 * math.pi * x) * ks) / (4.0 * ks * ks - 1.0)))
    value = 2.0 / math.pi - (4.0 / math.pi) * series
    return value, 2.0 / (math.pi * (2 * K + 1))


def geometric_sum(alpha: float, N: int) -> Tuple[complex, float]:
    """Sum of exp(2 pi i n alpha) for n = 0..N-1, with the standard bound.

    The bound min(N, 1/(2 ||alpha||)) always dominates |value|.  Integer
    alpha is rejected: the closed form is singular and the sum is just N.
    """
    if N < 1:
        raise ValueError("N must be positive")
    fracpart = alpha - math.floor(alpha)
    dist = min(fracpart, 1.0 - fracpart)
    if dist == 0.0:
        raise ValueError("alpha must not be an integer (sum degenerates to N)")
    # value = e(alpha (N-1)/2) * sin(pi N alpha) / sin(pi alpha)
    num = math.sin(math.pi * math.fmod(N * alpha, 2.0))
    den = math.sin(math.pi * fracpart)
    phase = cmath.exp(1j * math.pi * (N - 1) * alpha)
    value = phase * (num / den)
    bound = min(float(N), 1.0 / (2.0 * dist))
    return value, bound


_GL_CACHE: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    rule = _GL_CACHE.get(order)
    if rule is None:
        rule = np.polynomial.legendre.leggauss(order)
        _GL_CACHE[order] = rule
    return rule


def _gl_panel(p: float, a: float, b: float, order: int) -> float:
    xs, ws = _gl_rule(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = mid + half * xs
    return half * float(np.sum(ws * t ** (-p) * np.cos(t)))


@dataclass(frozen=True)
class OscIntegralResult:
    value: float
    lemma_bound: float
    quad_error: float


def osc_integral(
    p: float, nu: float, mu: float = math.inf, *, tol: float = 1.0e-9
) -> OscIntegralResult:
    """Integral of t^(-p) cos(t) over [nu, mu] with certified-size panels.

    Panels are geometric below 1 (integrable singularity at 0) and at most
    pi/4 wide above; each is evaluated with nested Gauss rules whose
    difference estimates the error.  For mu = infinity the integral beyond
    a cutoff T is replaced by four steps of partial integration; the
    remainder is at most 2 p(p+1)(p+2)(p+3) T^(-p-4), which at T = 2000
    stays below 2e-15 for every p in (0,1).
    lemma_bound = 2 nu^(-p) dominates |value| up to quad_error.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("exponent p must lie strictly between 0 and 1")
    if nu <= 0 or mu < nu:
        raise ValueError("need 0 < nu <= mu")
    lemma = 2.0 * nu ** (-p)
    if mu == nu:
        return OscIntegralResult(0.0, lemma, 0.0)
    if math.isinf(mu):
        cutoff = max(nu, 2000.0)
        s, c = math.sin(cutoff), math.cos(cutoff)
        tail_value = -(cutoff ** -p) * s + p * cutoff ** (-p - 1.0) * c
        tail_value -= p * (p + 1.0) * (
            -(cutoff ** (-p - 2.0)) * s + (p + 2.0) * cutoff ** (-p - 3.0) * c
        )
        tail_err = (
            2.0 * p * (p + 1.0) * (p + 2.0) * (p + 3.0) * cutoff ** (-p - 4.0)
        )
    else:
        cutoff = mu
        tail_value = 0.0
        tail_err = 0.0
    value = tail_value
    err = tail_err
    a = nu
    width = math.pi / 4.0
    while a < cutoff:
        if a < 1.0:
            b = min(2.0 * a, 1.0, cutoff)
        else:
            b = min(a + width, cutoff)
        coarse = _gl_panel(p, a, b, 12)
        fine = _gl_panel(p, a, b, 24)
        value += fine
        err += abs(fine - coarse)
        a = b
    if err > max(tol, 64 * _EPS * (abs(value) + 1.0)):
        raise DSeriesError(
            f"oscillatory quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}"
        )
    return OscIntegralResult(value=value, lemma_bound=lemma, quad_error=err)


@dataclass(frozen=True)
class ApConstant:
    closed_form: float
    quadrature: float
    lower_bound: float


def a_p_constant(p: float) -> ApConstant:
    """The constant integral of t^(-p) cos t over (0, infinity), two ways.

    closed_form = Gamma(1-p) sin(pi p / 2); the quadrature path integrates
    from a small nu upward, approximating the head piece on (0, nu) by
    nu^(1-p)/(1-p), which is off by at most nu^(3-p)/(2(3-p)).  The closed
    form always exceeds p/(1-p), which is asserted.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("exponent p must lie strictly between 0 and 1")
    closed = math.gamma(1.0 - p) * math.sin(math.pi * p / 2.0)
    nu = 1.0e-8
    head = nu ** (1.0 - p) / (1.0 - p)
    rest = osc_integral(p, nu, math.inf)
    quadrature = head + rest.value
    lower = p / (1.0 - p)
    if not closed > lower:
        raise AssertionError(
            f"closed form {closed:.12g} fails its lower bound {lower:.12g}"
        )
    return ApConstant(closed_form=closed, quadrature=quadrature, lower_bound=lower)


def progression_sum_bound_check(q: int, r: int) -> Tuple[float, float]:
    """Sum of 1/(k^2 - 1) over k = q, 3q, 5q, ... up to r, with bound 2/q^2.

    The terms are k = q (mod 2q); the bound is strict for every q >= 3.
    """
    if not (isinstance(q, int) and isinstance(r, int)):
        raise TypeError("q and r must be integers")
    if not 3 <= q <= r:
        raise ValueError("need 3 <= q <= r")
    ks = np.arange(q, r + 1, 2 * q, dtype=np.float64)
    total = float(np.sum(1.0 / (ks * ks - 1.0)))
    bound = 2.0 / (q * q)
    if not total < bound:
        raise AssertionError(
            f"progression sum {total:.12g} reached its bound {bound:.12g}"
        )
    return total, bound


def alternating_tail_check(f: FDescriptor, X: float, Y: float) -> Tuple[float, float]:
    """|sum of (-1)^n f(n) over integers n in [X, Y]| against the bound f(X).

    The alternating-series device: consecutive terms of a decreasing f
    telescope, so the block never exceeds its first weight.
    """
    if X < 1 or Y < X:
        raise ValueError("need 1 <= X <= Y")
    lo = math.ceil(X)
    hi = math.floor(Y)
    bound = f.eval(float(X))
    if lo > hi:
        return 0.0, bound
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    fv = _f_values(f, ns.astype(np.float64))
    total = float(np.sum((1.0 - 2.0 * (ns & 1)) * fv))
    slack = 1e-12 * bound + 1e-300
    if not abs(total) <= bound + slack:
        raise AssertionError(
            f"alternating block {total:.12g} exceeds its bound {bound:.12g}"
        )
    return total, bound
