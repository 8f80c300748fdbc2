"""Certified real-number sources.

A RealSource describes one real number alpha and can produce arbitrarily
tight two-sided dyadic enclosures of it on demand.  Enclosures are certified
(alpha always lies inside), nested as precision grows, and deterministic for
a given (source, bits) pair.  Supported kinds:

* exact rationals a/q,
* quadratic surds (p + r*sqrt(d))/s with d not a perfect square,
* the named constants pi, 1/pi and e,
* lacunary decimal ("Liouville-type") numbers a/q + sum d_k 10^(-e_k)
  with digits d_k in {1, 3} and a factorial or tower exponent schedule,
* finite partial-quotient prefixes (optionally with a declared all-ones tail).

This module does not implement general real arithmetic; the only operations
are construction and refinement of a single number's enclosure.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from .errors import PrecisionLimitError

__all__ = [
    "DEFAULT_MAX_BITS",
    "Kind",
    "Constant",
    "Schedule",
    "DyadicInterval",
    "LiouvilleSpec",
    "RealSource",
    "make_rational",
    "make_surd",
    "make_constant",
    "make_liouville",
    "make_pq_stream",
    "approximate",
    "liouville_partial",
    "liouville_truncation",
]

DEFAULT_MAX_BITS = 1 << 20

# Enclosures are produced on a fixed ladder of working precisions and
# intersected downward, which makes nesting a construction property rather
# than a property of any underlying library.
_LADDER_BASE = 64
_GRID_GUARD = 32

_LOG10_2 = math.log10(2.0)


class Kind(Enum):
    RATIONAL = "rational"
    QUADRATIC_SURD = "surd"
    NAMED_CONSTANT = "const"
    LIOUVILLE = "liouville"
    PQ_STREAM = "cf"


class Constant(Enum):
    PI = "pi"
    INV_PI = "invpi"
    E = "e"


class Schedule(Enum):
    FACTORIAL = "factorial"
    TOWER100 = "tower100"


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class DyadicInterval:
    """Closed interval [lo, hi] with dyadic-rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.lo, Fraction) or not isinstance(self.hi, Fraction):
            raise TypeError("endpoints must be Fractions")
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        if not _is_pow2(self.lo.denominator) or not _is_pow2(self.hi.denominator):
            raise ValueError("endpoints must be dyadic rationals")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def is_subset_of(self, other: "DyadicInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersect(self, other: "DyadicInterval") -> "DyadicInterval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("empty intersection of enclosures")
        return DyadicInterval(lo, hi)

    def scale_int(self, k: int) -> "DyadicInterval":
        """Interval image under x -> k*x for a positive integer k."""
        if k <= 0:
            raise ValueError("scale factor must be positive")
        return DyadicInterval(self.lo * k, self.hi * k)

    def shift_int(self, m: int) -> "DyadicInterval":
        return DyadicInterval(self.lo - m, self.hi - m)

    def abs(self) -> "DyadicInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return DyadicInterval(-self.hi, -self.lo)
        return DyadicInterval(Fraction(0), max(-self.lo, self.hi))

    @staticmethod
    def enclosing(lo: Fraction, hi: Fraction, grid_bits: int) -> "DyadicInterval":
        """Smallest interval with endpoints on the 2^-grid_bits grid
        containing [lo, hi].  Rounds outward."""
        scale = 1 << grid_bits
        glo = Fraction(math.floor(lo * scale), scale)
        ghi = Fraction(math.ceil(hi * scale), scale)
        return DyadicInterval(glo, ghi)


@dataclass(frozen=True)
class LiouvilleSpec:
    """Parameters of a lacunary decimal number
    base + sum_{k >= start} d_k 10^(-e_k).

    digits is a repeating pattern cycled over k; every entry must be 1 or 3.
    The factorial schedule uses e_k = k!, the tower schedule e_1 = 1 and
    e_{k+1} = 100^{e_k}.
    """

    base_num: int = 0
    base_den: int = 1
    digits: Tuple[int, ...] = (1,)
    start: int = 1
    schedule: Schedule = Schedule.FACTORIAL

    def __post_init__(self) -> None:
        if self.base_den <= 0:
            raise ValueError("base denominator must be positive")
        if math.gcd(self.base_num, self.base_den) != 1:
            raise ValueError("base must be in lowest terms")
        if not self.digits or any(d not in (1, 3) for d in self.digits):
            raise ValueError("digits must be a nonempty pattern over {1, 3}")
        if self.start < 1:
            raise ValueError("start index must be >= 1")

    def digit(self, k: int) -> int:
        return self.digits[(k - self.start) % len(self.digits)]

    def exponent(self, k: int, limit: int) -> Optional[int]:
        """e_k, or None when it exceeds `limit` (possibly without being
        representable at all)."""
        if k < 1:
            raise ValueError("exponent index must be >= 1")
        if self.schedule is Schedule.FACTORIAL:
            e = 1
            for j in range(2, k + 1):
                e *= j
                if e > limit:
                    return None
            return e if e <= limit else None
        e = 1
        for _ in range(k - 1):
            # e_{k+1} = 100^{e_k} has about 2*e_k decimal digits; refuse to
            # materialize it once that provably exceeds the limit.
            if 2 * e > len(str(limit)) + 1:
                return None
            e = 100 ** e
            if e > limit:
                return None
        return e

    def exponent_log10(self, k: int) -> float:
        """log10(e_k) as a float, computable even when e_k is huge."""
        if k < 1:
            raise ValueError("exponent index must be >= 1")
        if self.schedule is Schedule.FACTORIAL:
            return math.lgamma(k + 1) / math.log(10.0)
        # tower: log10(e_{j+1}) = 2 * e_j, carrying e_j exactly while it fits
        e = 1
        for step in range(k - 1):
            if e > 10 ** 304:
                return math.inf
            if step == k - 2:
                return 2.0 * e
            if 2 * e > 400:
                # the level after next has log10 = 2 * 100^e, beyond float range
                return math.inf
            e = 100 ** e
        return 0.0


@dataclass(eq=False)
class RealSource:
    """One real number with a certified enclosure generator.

    Payload fields depend on kind; use the make_* constructors.  The
    enclosure cache tolerates concurrent readers: refinement is guarded by a
    per-source lock and results for a given precision level never change.
    """

    kind: Kind
    a: int = 0
    q: int = 1
    p: int = 0
    r: int = 0
    d: int = 0
    s: int = 1
    const: Optional[Constant] = None
    liouville: Optional[LiouvilleSpec] = None
    pqs: Tuple[int, ...] = ()
    all_ones_tail: bool = False
    max_bits: int = DEFAULT_MAX_BITS
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    # -- enclosure machinery -------------------------------------------------

    def approximate(self, bits: int) -> DyadicInterval:
        """Certified dyadic enclosure of the value with width <= 2^-bits.

        Deterministic for a given (source, bits); enclosures at increasing
        bits are nested.  Raises PrecisionLimitError beyond max_bits or when
        the source cannot be refined that far.
        """
        if bits < 1:
            raise ValueError("bits must be >= 1")
        if bits > self.max_bits:
            raise PrecisionLimitError(
                f"requested {bits} bits exceeds the configured cap of {self.max_bits}"
            )
        level = _LADDER_BASE
        while level < bits + _GRID_GUARD:
            level *= 2
        lo, hi = self._nested_raw(level)
        out = DyadicInterval.enclosing(lo, hi, bits + _GRID_GUARD)
        assert out.width <= Fraction(1, 1 << bits)
        return out

    def _nested_raw(self, level: int) -> Tuple[Fraction, Fraction]:
        with self._lock:
            return self._nested_raw_locked(level)

    def _nested_raw_locked(self, level: int) -> Tuple[Fraction, Fraction]:
        cached = self._cache.get(level)
        if cached is not None:
            return cached
        lo, hi = self._raw(level)
        if level > _LADDER_BASE:
            plo, phi = self._nested_raw_locked(level // 2)
            lo, hi = max(lo, plo), min(hi, phi)
            if lo > hi:
                raise AssertionError("enclosure ladder intersection is empty")
        self._cache[level] = (lo, hi)
        return lo, hi

    def _raw(self, level: int) -> Tuple[Fraction, Fraction]:
        """Certified enclosure with width <= 2^-level, exact Fraction
        endpoints (not necessarily dyadic)."""
        if self.kind is Kind.RATIONAL:
            v = Fraction(self.a, self.q)
            return v, v
        if self.kind is Kind.QUADRATIC_SURD:
            return self._raw_surd(level)
        if self.kind is Kind.NAMED_CONSTANT:
            return self._raw_constant(level)
        if self.kind is Kind.LIOUVILLE:
            return self._raw_liouville(level)
        if self.kind is Kind.PQ_STREAM:
            return self._raw_stream(level)
        raise AssertionError(f"unhandled kind {self.kind}")

    def _raw_surd(self, level: int) -> Tuple[Fraction, Fraction]:
        t = level + abs(self.r).bit_length() + 2
        m = math.isqrt(self.d << (2 * t))
        root_lo = Fraction(m, 1 << t)
        root_hi = Fraction(m + 1, 1 << t)
        if self.r > 0:
            lo = (self.p + self.r * root_lo) / self.s
            hi = (self.p + self.r * root_hi) / self.s
        else:
            lo = (self.p + self.r * root_hi) / self.s
            hi = (self.p + self.r * root_lo) / self.s
        return lo, hi

    def _raw_constant(self, level: int) -> Tuple[Fraction, Fraction]:
        if self.const is Constant.E:
            return _e_series(level)
        prec = level + 8
        lo, hi = _pi_bounds(prec)
        while hi - lo > Fraction(1, 1 << level):
            prec *= 2
            lo, hi = _pi_bounds(prec)
        if self.const is Constant.PI:
            return lo, hi
        # 1/pi: exact reciprocal of a positive interval swaps the endpoints.
        return 1 / hi, 1 / lo

    def _raw_liouville(self, level: int) -> Tuple[Fraction, Fraction]:
        spec = self.liouville
        assert spec is not None
        # Decimal places needed so the materialized tail bound fits 2^-level.
        dec = int(math.ceil((level + 2) * _LOG10_2)) + 3
        total = Fraction(spec.base_num, spec.base_den)
        k = spec.start
        last_included = spec.start - 1
        while True:
            e = spec.exponent(k, dec)
            if e is None:
                break
            total += Fraction(spec.digit(k), 10 ** e)
            last_included = k
            k += 1
        # Tail bound: digits <= 3 and exponents strictly increase, so
        # sum_{k > K} d_k 10^-e_k < (10/3) * 10^-e_{K+1} <= (10/3) * 10^-(dec+1).
        e_next = spec.exponent(last_included + 1, 8 * dec)
        if e_next is not None:
            bound = Fraction(10, 3) / 10 ** e_next
        else:
            bound = Fraction(1, 10 ** (dec + 1))
        return total, total + bound

    def _raw_stream(self, level: int) -> Tuple[Fraction, Fraction]:
        # The set of reals whose expansion starts with the prefix is the
        # closed interval between the last convergent and its mediant with
        # the one before.
        pk, pk1 = _prefix_convergents(self.pqs)
        lo = Fraction(pk[0], pk[1])
        hi = Fraction(pk[0] + pk1[0], pk[1] + pk1[1])
        if lo > hi:
            lo, hi = hi, lo
        if hi - lo > Fraction(1, 1 << level):
            raise PrecisionLimitError(
                "partial-quotient prefix exhausted: cannot certify "
                f"{level} bits from {len(self.pqs)} quotients"
            )
        return lo, hi

    # -- conveniences --------------------------------------------------------

    def exact_value(self) -> Fraction:
        if self.kind is not Kind.RATIONAL:
            raise ValueError("exact_value only applies to rational sources")
        return Fraction(self.a, self.q)

    def is_rational(self) -> bool:
        return self.kind is Kind.RATIONAL


def _prefix_convergents(pqs: Tuple[int, ...]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(p_k, q_k) and (p_{k-1}, q_{k-1}) of a partial-quotient prefix."""
    pm1, qm1 = 1, 0
    pm2, qm2 = 0, 1
    for a in pqs:
        pm1, pm2 = a * pm1 + pm2, pm1
        qm1, qm2 = a * qm1 + qm2, qm1
    return (pm1, qm1), (pm2, qm2)


def _pi_bounds(prec: int) -> Tuple[Fraction, Fraction]:
    from mpmath.libmp import mpf_pi

    return _mpf_to_frac(mpf_pi(prec, "d")), _mpf_to_frac(mpf_pi(prec, "u"))


def _mpf_to_frac(t) -> Fraction:
    sign, man, exp, _ = t
    v = Fraction(int(man)) * Fraction(2) ** exp
    return -v if sign else v


def _e_series(level: int) -> Tuple[Fraction, Fraction]:
    # sum_{k <= K} 1/k! with tail < (K+2) / ((K+1) (K+1)!).
    target = Fraction(1, 1 << (level + 2))
    total = Fraction(2)
    fact = 1
    k = 1
    while True:
        k += 1
        fact *= k
        total += Fraction(1, fact)
        tail = Fraction(k + 2, (k + 1) * fact * (k + 1))
        if tail <= target:
            return total, total + tail


def make_rational(a: int, q: int, *, max_bits: int = DEFAULT_MAX_BITS) -> RealSource:
    """Exact rational a/q, reduced to lowest terms with q > 0."""
    if q == 0:
        raise ValueError("denominator must be nonzero")
    if q < 0:
        a, q = -a, -q
    g = math.gcd(a, q)
    return RealSource(Kind.RATIONAL, a=a // g, q=q // g, max_bits=max_bits)


def make_surd(
    p: int,
    r: int,
    d: int,
    s: int,
    *,
    all_ones_tail: bool = False,
    max_bits: int = DEFAULT_MAX_BITS,
) -> RealSource:
    """Quadratic surd (p + r*sqrt(d))/s.

    d must be >= 2 and not a perfect square, and r nonzero, so the value is
    irrational.  all_ones_tail declares (as trusted caller knowledge) that
    all but finitely many partial quotients equal 1; it is classical for the
    golden ratio (1 + sqrt(5))/2 and its conjugates.
    """
    if s == 0:
        raise ValueError("denominator must be nonzero")
    if r == 0:
        raise ValueError("r = 0 would make the value rational; use make_rational")
    if d < 2 or math.isqrt(d) ** 2 == d:
        raise ValueError("d must be >= 2 and not a perfect square")
    if s < 0:
        p, r, s = -p, -r, -s
    return RealSource(
        Kind.QUADRATIC_SURD,
        p=p,
        r=r,
        d=d,
        s=s,
        all_ones_tail=all_ones_tail,
        max_bits=max_bits,
    )


def make_constant(name, *, max_bits: int = DEFAULT_MAX_BITS) -> RealSource:
    """Named constant: pi, 1/pi or e."""
    if isinstance(name, str):
        try:
            name = Constant(name.lower())
        except ValueError:
            raise ValueError(f"unknown constant {name!r}; choose pi, invpi or e") from None
    return RealSource(Kind.NAMED_CONSTANT, const=name, max_bits=max_bits)


def make_liouville(spec: LiouvilleSpec, *, max_bits: int = DEFAULT_MAX_BITS) -> RealSource:
    return RealSource(Kind.LIOUVILLE, liouville=spec, max_bits=max_bits)


def make_pq_stream(
    pqs,
    *,
    all_ones_tail: bool = False,
    max_bits: int = DEFAULT_MAX_BITS,
) -> RealSource:
    """Source defined by a finite partial-quotient prefix [a0; a1, ...].

    Without a declared tail the refinement depth is limited by the prefix.
    With all_ones_tail the prefix composed with the golden-ratio tail is an
    exact quadratic surd and the source is converted accordingly.
    """
    pqs = tuple(int(a) for a in pqs)
    if not pqs:
        raise ValueError("at least the integer part a0 is required")
    if any(a < 1 for a in pqs[1:]):
        raise ValueError("partial quotients after a0 must be >= 1")
    if all_ones_tail:
        (pk, qk), (pk1, qk1) = _prefix_convergents(pqs)
        # value = (p_k*phi + p_{k-1}) / (q_k*phi + q_{k-1}) with phi = (1+sqrt5)/2,
        # rationalized to the form (num + coef*sqrt(5)) / den.
        A, B = pk + 2 * pk1, pk
        C, D = qk + 2 * qk1, qk
        den = C * C - 5 * D * D
        num = A * C - 5 * B * D
        coef = B * C - A * D
        src = make_surd(num, coef, 5, den, all_ones_tail=True, max_bits=max_bits)
        src.pqs = pqs  # keep the declared prefix so serializers can round-trip it
        return src
    return RealSource(Kind.PQ_STREAM, pqs=pqs, max_bits=max_bits)


def approximate(source: RealSource, bits: int) -> DyadicInterval:
    """Module-level alias for RealSource.approximate."""
    return source.approximate(bits)


def liouville_partial(spec: LiouvilleSpec, level: int) -> Fraction:
    """Exact truncation lambda_level = base + sum_{start <= k <= level} d_k 10^-e_k.

    The exponents must be materializable; levels below start return the base.
    """
    total = Fraction(spec.base_num, spec.base_den)
    for k in range(spec.start, level + 1):
        e = spec.exponent(k, 10 ** 9)
        if e is None:
            raise PrecisionLimitError(f"exponent e_{k} is not representable")
        total += Fraction(spec.digit(k), 10 ** e)
    return total


def liouville_truncation(source: RealSource, bits: int) -> Tuple[int, Fraction]:
    """(level N, exact lambda_N) used internally by approximate(source, bits).

    Exposed so tests can verify |midpoint - lambda_N| against the documented
    tail bound.
    """
    if source.kind is not Kind.LIOUVILLE:
        raise ValueError("not a Liouville source")
    spec = source.liouville
    level = _LADDER_BASE
    while level < bits + _GRID_GUARD:
        level *= 2
    dec = int(math.ceil((level + 2) * _LOG10_2)) + 3
    k = spec.start
    last = spec.start - 1
    while spec.exponent(k, dec) is not None:
        last = k
        k += 1
    return last, liouville_partial(spec, last)
