"""Continued-fraction expansion and best rational approximations.

expand() turns a RealSource into its sequence of best approximations
(record minimizers of ||q * alpha||), working on certified enclosures: a
partial quotient is accepted only when it is shared by every point of the
current enclosure, with automatic precision escalation.  brute_force_best()
is the independent record scan used as an oracle.  q_alpha() extracts the
subsequence of even denominators whose successor is at least twice as large,
which drives the convergence criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import AmbiguousOrderError, PrecisionLimitError
from .realsource import DyadicInterval, Kind, RealSource

__all__ = [
    "Convergent",
    "QAlphaEntry",
    "RecordPoint",
    "Expansion",
    "expand",
    "brute_force_best",
    "q_alpha",
]


@dataclass(frozen=True)
class Convergent:
    """One best rational approximation a/q of the source value.

    n is the 1-based position in the emitted sequence, cf_index the position
    in the raw recurrence (0 = integer part).  dist encloses ||q * alpha||.
    """

    n: int
    a: int
    q: int
    partial_quotient: int
    dist: DyadicInterval
    cf_index: int

    @property
    def from_integer_part(self) -> bool:
        return self.cf_index == 0


@dataclass(frozen=True)
class QAlphaEntry:
    """An even denominator q_n whose successor satisfies q_{n+1} >= 2 q_n."""

    n: int
    q: int
    q_next: int

    def __post_init__(self) -> None:
        if self.q % 2 != 0:
            raise ValueError("entry denominator must be even")
        if self.q_next < 2 * self.q:
            raise ValueError("successor must be at least twice the denominator")


@dataclass(frozen=True)
class RecordPoint:
    """Record minimizer found by the brute-force scan."""

    q: int
    a: int
    dist: DyadicInterval


@dataclass(frozen=True)
class Expansion:
    convergents: Tuple[Convergent, ...]
    partial_quotients: Tuple[int, ...]
    exact: bool
    capped: bool
    cap_reason: Optional[str] = None
    bits_used: int = 0


def _common_pqs(lo: Fraction, hi: Fraction, limit: int) -> List[int]:
    """Partial quotients shared by every point of [lo, hi]."""
    out: List[int] = []
    while len(out) < limit:
        flo = math.floor(lo)
        fhi = math.floor(hi)
        if flo != fhi:
            break
        out.append(flo)
        a, b = lo - flo, hi - flo
        if a == 0 or b == 0:
            break
        lo, hi = 1 / b, 1 / a
    return out


def _recurrence(pqs: Sequence[int]) -> List[Tuple[int, int]]:
    convs: List[Tuple[int, int]] = []
    pm1, qm1 = 1, 0
    pm2, qm2 = 0, 1
    for a in pqs:
        pm1, pm2 = a * pm1 + pm2, pm1
        qm1, qm2 = a * qm1 + qm2, qm1
        convs.append((pm1, qm1))
    return convs


def _emit_start(pqs: Sequence[int]) -> int:
    # With a_1 = 1 the integer part a_0/1 is not the nearest integer, so the
    # record sequence starts at p_1/q_1 = (a_0+1)/1 instead.
    return 1 if len(pqs) >= 2 and pqs[1] == 1 else 0


def _dist_grid_bits(q_last: int) -> int:
    return max(64, 2 * q_last.bit_length() + 16)


def _expand_rational(source: RealSource, count: int) -> Expansion:
    a, q = source.a, source.q
    pqs: List[int] = []
    x, y = a, q
    while y:
        d = x // y
        pqs.append(d)
        x, y = y, x - d * y
    convs = _recurrence(pqs)
    start = _emit_start(pqs)
    grid = _dist_grid_bits(q)
    emitted: List[Convergent] = []
    for n, idx in enumerate(range(start, len(convs)), start=1):
        p_n, q_n = convs[idx]
        v = Fraction(abs(q_n * a - p_n * q), q)
        emitted.append(
            Convergent(
                n=n,
                a=p_n,
                q=q_n,
                partial_quotient=pqs[idx],
                dist=DyadicInterval.enclosing(v, v, grid),
                cf_index=idx,
            )
        )
    exact = len(emitted) <= count
    return Expansion(
        convergents=tuple(emitted[:count]),
        partial_quotients=tuple(pqs),
        exact=exact,
        capped=False,
        bits_used=0,
    )


def _build_irrational(
    pqs: Sequence[int],
    interval: DyadicInterval,
    count: int,
    bits: int,
    capped: bool,
    cap_reason: Optional[str],
) -> Expansion:
    convs = _recurrence(pqs)
    start = _emit_start(pqs)
    emitted: List[Convergent] = []
    for n, idx in enumerate(range(start, len(convs)), start=1):
        if n > count:
            break
        p_n, q_n = convs[idx]
        dist = interval.scale_int(q_n).shift_int(p_n).abs()
        emitted.append(
            Convergent(
                n=n,
                a=p_n,
                q=q_n,
                partial_quotient=pqs[idx],
                dist=dist,
                cf_index=idx,
            )
        )
    return Expansion(
        convergents=tuple(emitted),
        partial_quotients=tuple(pqs[: start + len(emitted)]),
        exact=False,
        capped=capped,
        cap_reason=cap_reason,
        bits_used=bits,
    )


def _certified_emit_count(
    pqs: Sequence[int], interval: DyadicInterval, count: int
) -> int:
    """Largest m <= count convergents whose distance enclosures stay tight.

    Emitting m entries needs the (m+1)-th recurrence denominator as the
    tightness reference: interval width * q_ref^2 must clear a 2^25 margin.
    """
    rec = _recurrence(pqs)
    start = _emit_start(pqs)
    limit = min(count, max(len(pqs) - start - 1, 0))
    for m in range(limit, 0, -1):
        q_ref = rec[start + m][1]
        if interval.width * (q_ref * q_ref << 25) <= 1:
            return m
    return 0


def _capped_expansion(
    pqs: Sequence[int],
    interval: DyadicInterval,
    count: int,
    bits: int,
    reason: str,
) -> Expansion:
    m = _certified_emit_count(pqs, interval, count)
    return _build_irrational(
        pqs, interval, m, bits, capped=True, cap_reason=f"{reason}; emitted {m} of {count}"
    )


def _expand_prefix(source: RealSource, count: int) -> Expansion:
    """Expansion of an explicit finite quotient prefix.

    The prefix pins down the convergent list but not the value, so distance
    enclosures come from the exact interval of reals sharing the prefix and
    the final convergent (whose distance range touches zero) is never
    emitted.
    """
    pqs = list(source.pqs)
    rec = _recurrence(pqs)
    k = len(pqs) - 1
    p_k, q_k = rec[k]
    p_k1, q_k1 = rec[k - 1] if k >= 1 else (1, 0)
    lo = Fraction(p_k, q_k)
    hi = Fraction(p_k + p_k1, q_k + q_k1)
    if lo > hi:
        lo, hi = hi, lo
    interval = DyadicInterval.enclosing(lo, hi, _dist_grid_bits(q_k + q_k1))
    m = _certified_emit_count(pqs, interval, count)
    exp = _build_irrational(pqs, interval, m, 0, capped=m < count, cap_reason=None)
    reason = None
    if m < count:
        reason = (
            f"partial-quotient prefix of {len(pqs)} quotients certifies "
            f"only {m} of {count} convergents"
        )
    return Expansion(
        convergents=exp.convergents,
        partial_quotients=tuple(pqs),
        exact=False,
        capped=m < count,
        cap_reason=reason,
        bits_used=0,
    )


def expand(source: RealSource, count: int, *, max_bits: Optional[int] = None) -> Expansion:
    """First `count` best approximations of the source value.

    Rational sources terminate exactly (possibly with fewer entries) with
    the canonical last partial quotient >= 2.  Other sources escalate the
    enclosure precision until each emitted convergent is certified and its
    distance enclosure is tight relative to the next denominator.  If the
    precision cap is reached first, the certified prefix is returned with
    capped=True and cap_reason set.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if source.kind is Kind.RATIONAL:
        return _expand_rational(source, count)
    if source.kind is Kind.PQ_STREAM:
        return _expand_prefix(source, count)

    effective_cap = source.max_bits if max_bits is None else min(max_bits, source.max_bits)
    bits = min(128, effective_cap)
    last_good: Optional[Tuple[List[int], DyadicInterval, int]] = None
    while True:
        try:
            interval = source.approximate(bits)
        except PrecisionLimitError as exc:
            if last_good is None:
                raise
            pqs, interval, used = last_good
            return _capped_expansion(pqs, interval, count, used, str(exc))
        pqs = _common_pqs(interval.lo, interval.hi, limit=count + 4)
        last_good = (pqs, interval, bits)
        start = _emit_start(pqs)
        have = len(pqs) - start
        if have >= count + 1:
            q_ref = _recurrence(pqs)[start + count][1]
            if interval.width * (q_ref * q_ref << 25) <= 1:
                return _build_irrational(
                    pqs, interval, count, bits, capped=False, cap_reason=None
                )
        if bits >= effective_cap:
            return _capped_expansion(
                pqs,
                interval,
                count,
                bits,
                f"precision cap {effective_cap} bits reached",
            )
        bits = min(bits * 2, effective_cap)


def _rational_records(source: RealSource, q_max: int) -> List[RecordPoint]:
    a, den = source.a, source.q
    grid = _dist_grid_bits(den)
    out: List[RecordPoint] = []
    best: Optional[Fraction] = None
    for q in range(1, q_max + 1):
        r = (a * q) % den
        num = min(r, den - r)
        v = Fraction(num, den)
        if best is None or v < best:
            best = v
            floor_part = (a * q - r) // den
            nearest = floor_part + (1 if 2 * r > den else 0)
            out.append(
                RecordPoint(q=q, a=nearest, dist=DyadicInterval.enclosing(v, v, grid))
            )
            if num == 0:
                break
    return out


def brute_force_best(source: RealSource, q_max: int, *, bits: int = 256) -> List[RecordPoint]:
    """Record minimizers of ||q * alpha|| for q = 1..q_max, scanned directly.

    Exact integer arithmetic for rational sources; otherwise an
    enclosure-driven scan at the given working precision that raises
    AmbiguousOrderError if two candidate records cannot be separated.
    """
    if not 1 <= q_max <= 10 ** 7:
        raise ValueError("q_max must be in [1, 10^7]")
    if source.kind is Kind.RATIONAL:
        return _rational_records(source, q_max)

    interval = source.approximate(bits)
    shift = bits + 32
    scale = 1 << shift
    lo_i = int(interval.lo * scale)
    hi_i = int(math.ceil(interval.hi * scale))
    half = scale >> 1
    out: List[RecordPoint] = []
    best_lo: Optional[int] = None
    best_hi: Optional[int] = None
    for q in range(1, q_max + 1):
        c_lo = q * lo_i
        c_hi = q * hi_i
        k = (c_lo + half) // scale
        k2 = (c_hi + half) // scale
        if k2 == k:
            e1 = c_lo - k * scale
            e2 = c_hi - k * scale
            if e1 >= 0:
                d_lo, d_hi = e1, e2
            elif e2 <= 0:
                d_lo, d_hi = -e2, -e1
            else:
                d_lo, d_hi = 0, max(-e1, e2)
            nearest = k
        elif k2 == k + 1:
            d1 = abs(c_lo - k * scale)
            d2 = abs(c_hi - k2 * scale)
            d_lo, d_hi = min(d1, d2), half
            nearest = k if d1 <= d2 else k2
        else:
            raise AmbiguousOrderError(
                f"enclosure too wide at q={q}; increase working precision"
            )
        if best_lo is None:
            pass  # q = 1 is always the first record
        elif d_hi < best_lo:
            pass  # certified strict improvement
        elif d_lo >= best_hi:
            continue
        else:
            raise AmbiguousOrderError(
                f"cannot order candidate record at q={q} against the current "
                f"best at {bits} working bits"
            )
        best_lo, best_hi = d_lo, d_hi
        out.append(
            RecordPoint(
                q=q,
                a=nearest,
                dist=DyadicInterval(Fraction(d_lo, scale), Fraction(d_hi, scale)),
            )
        )
    return out


def q_alpha(convergents: Sequence[Convergent]) -> List[QAlphaEntry]:
    """Entries (q_n, q_{n+1}) with q_n even and q_{n+1} >= 2 q_n.

    Only consecutive pairs present in the input are considered; the last
    convergent has no successor and cannot produce an entry.  For n >= 2 the
    ratio condition is equivalent to the next partial quotient being >= 2.
    """
    entries: List[QAlphaEntry] = []
    for cur, nxt in zip(convergents, convergents[1:]):
        if cur.q % 2 == 0 and nxt.q >= 2 * cur.q:
            entries.append(QAlphaEntry(n=cur.n, q=cur.q, q_next=nxt.q))
    return entries
