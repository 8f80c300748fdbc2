"""Weight-function descriptors and the convergence classifier.

The series under study is sum of (-1)^n f(n) |sin(n pi alpha)|.  Its
behavior is decided by the auxiliary series over the even-denominator
entries (q, q_next): sum of (1/q^2) * integral of f from 1 to q_next.
This module evaluates that series, bounds its tail under a denominator
growth certificate q_next <= C * q^(mu-1), and classifies sources through
an explicit decision ladder that refuses to extrapolate: anything not
settled by exact structure or a certificate comes back Inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import cfrac
from .cfrac import QAlphaEntry
from .errors import CertificateError, PrecisionLimitError
from .realsource import Constant, Kind, RealSource, Schedule

__all__ = [
    "FDescriptor",
    "CriterionTerm",
    "CriterionSeries",
    "MeasureCertificate",
    "Budget",
    "Outcome",
    "VerdictCertificate",
    "Verdict",
    "make_power_f",
    "validate_f",
    "criterion_partial_sum",
    "measure_tail_bound",
    "roth_certificate",
    "mahler_certificate",
    "classify",
]

# Relative error carried by a criterion term evaluated in double precision;
# a handful of multiplications, one pow and one log, each good to ~1 ulp.
_TERM_REL_ERR = 1e-13


@dataclass(frozen=True)
class FDescriptor:
    """A weight function f on [1, oo): positive, decreasing, vanishing.

    antiderivative must satisfy F' = f with F(1) = 0.  power_exponent is
    set when f(x) = x^(-p); it unlocks the log-space evaluation path for
    denominators far beyond float range.  eval_vec, when present, maps a
    numpy array to f applied elementwise and is only a fast path.
    """

    name: str
    eval: Callable[[float], float]
    antiderivative: Callable[[float], float]
    parameters: Dict[str, float] = field(default_factory=dict)
    decreasing: bool = True
    limit_zero: bool = True
    integral_divergent: bool = True
    power_exponent: Optional[Fraction] = None
    eval_vec: Optional[Callable] = None


def make_power_f(p: Union[Fraction, float, int, str]) -> FDescriptor:
    """Descriptor for f(x) = x^(-p) with 0 < p <= 1.

    p > 1 is rejected: the series then converges absolutely by comparison
    with sum of n^(-p), so nothing here applies.  p <= 0 gives a weight
    that does not decrease to zero.
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError(
            "power exponent must satisfy 0 < p <= 1 "
            "(p > 1 converges absolutely, p <= 0 is not a vanishing weight)"
        )
    pf = float(p)
    if p == 1:
        antider = math.log
    else:
        one_minus = float(1 - p)

        def antider(x: float, _c: float = one_minus) -> float:
            return (x ** _c - 1.0) / _c

    def f_eval(x: float, _p: float = pf) -> float:
        return x ** (-_p)

    def f_vec(xs, _p: float = pf):
        return xs ** (-_p)

    return FDescriptor(
        name=f"x^-{p}",
        eval=f_eval,
        antiderivative=antider,
        parameters={"p": pf},
        power_exponent=p,
        eval_vec=f_vec,
    )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: Tuple[str, ...]
    x_max: float
    points: int


def validate_f(
    f: FDescriptor, *, x_max: float = 1.0e6, points: int = 256
) -> ValidationReport:
    """Sample-based sanity check of a descriptor; returns a report, never raises.

    Checks positivity and monotone non-increase of f on a log-spaced grid
    over [1, x_max], that a central difference of the antiderivative agrees
    with f to 1e-6 relative, and that the divergence flag is consistent
    with the observed growth of F.
    """
    if x_max <= 1 or points < 8:
        return ValidationReport(False, ("grid must cover (1, x_max] with >= 8 points",), x_max, points)
    violations: List[str] = []
    grid = [math.exp(math.log(x_max) * i / (points - 1)) for i in range(points)]
    prev = None
    for x in grid:
        v = f.eval(x)
        if not v > 0:
            violations.append(f"f({x:.6g}) = {v:.6g} is not positive")
            break
        if prev is not None and v > prev * (1 + 1e-12):
            violations.append(f"f increases across {x:.6g}")
            break
        prev = v
    # Central difference of F against f, relative tolerance 1e-6.
    for x in grid[:: max(1, points // 16)]:
        h = max(x * 1e-5, 1e-7)
        if x - h < 1.0:
            continue
        deriv = (f.antiderivative(x + h) - f.antiderivative(x - h)) / (2 * h)
        ref = f.eval(x)
        if abs(deriv - ref) > 1e-6 * max(abs(ref), 1e-300):
            violations.append(
                f"antiderivative slope {deriv:.9g} != f({x:.6g}) = {ref:.9g}"
            )
            break
    if f.limit_zero and prev is not None and prev > max(10.0 / x_max ** 0.1, 1e-2):
        violations.append(f"f({x_max:.3g}) = {prev:.6g}; vanishing flag looks wrong")
    if f.integral_divergent:
        # For a divergent integral F must keep growing; compare two scales.
        half = f.antiderivative(math.sqrt(x_max))
        full = f.antiderivative(x_max)
        if not full > half > 0:
            violations.append("antiderivative does not grow although flagged divergent")
    return ValidationReport(not violations, tuple(violations), x_max, points)


@dataclass(frozen=True)
class CriterionTerm:
    """One term (1/q^2) * (F(q_next) - F(1)) of the criterion series.

    value is the double-precision magnitude (inf if above float range);
    log10_value is always finite and is the reliable representation for
    astronomically large denominators.
    """

    n: int
    q: int
    q_next: int
    value: float
    log10_value: float
    rel_err: float = _TERM_REL_ERR


def _log10_fraction(x: Fraction) -> float:
    return math.log10(x.numerator) - math.log10(x.denominator)


def _power_term(p: Fraction, entry: QAlphaEntry) -> CriterionTerm:
    q, q_next = entry.q, entry.q_next
    lg_q = math.log10(q)
    lg_next = math.log10(q_next)
    if p == 1:
        ln_next = lg_next * math.log(10.0)
        lg_val = math.log10(ln_next) - 2 * lg_q
    else:
        c = float(1 - p)
        lg_val = c * lg_next - math.log10(c) - 2 * lg_q
        # correction for the "- 1" in Y^(1-p) - 1, negligible for large Y
        head = c * lg_next
        if head < 300:
            lg_val += math.log10(1.0 - 10.0 ** (-head)) if head > 1e-15 else 0.0
    value = 10.0 ** lg_val if lg_val < 308 else math.inf
    return CriterionTerm(n=entry.n, q=q, q_next=q_next, value=value, log10_value=lg_val)


def _general_term(f: FDescriptor, entry: QAlphaEntry) -> CriterionTerm:
    q, q_next = entry.q, entry.q_next
    try:
        y = float(q_next)
    except OverflowError:
        raise OverflowError(
            f"q_next with {len(str(q_next))} digits exceeds float range and "
            f"{f.name} has no log-space evaluation path"
        )
    if math.isinf(y):
        raise OverflowError(
            f"q_next with {len(str(q_next))} digits exceeds float range and "
            f"{f.name} has no log-space evaluation path"
        )
    value = (f.antiderivative(y) - f.antiderivative(1.0)) / (q * q)
    lg = math.log10(value) if value > 0 else -math.inf
    return CriterionTerm(n=entry.n, q=q, q_next=q_next, value=value, log10_value=lg)


@dataclass(frozen=True)
class CriterionSeries:
    terms: Tuple[CriterionTerm, ...]
    partial_sums: Tuple[float, ...]

    @property
    def total(self) -> float:
        return self.partial_sums[-1] if self.partial_sums else 0.0


def criterion_partial_sum(
    entries: Sequence[QAlphaEntry], f: FDescriptor
) -> CriterionSeries:
    """Evaluate the criterion terms for the given entries, with running sums."""
    terms: List[CriterionTerm] = []
    sums: List[float] = []
    acc = 0.0
    for entry in entries:
        if f.power_exponent is not None:
            term = _power_term(f.power_exponent, entry)
        else:
            term = _general_term(f, entry)
        terms.append(term)
        acc += term.value
        sums.append(acc)
    return CriterionSeries(terms=tuple(terms), partial_sums=tuple(sums))


@dataclass(frozen=True)
class MeasureCertificate:
    """Asserted denominator growth law q_next <= C * q^(mu - 1).

    label records provenance: "roth" (algebraic irrationals of degree >= 2,
    exponent 5/2), "mahler" (pi and 1/pi, exponent 42), or "user".
    eventual certificates allow finitely many exceptions; tail bounds are
    then only applied from the caller-supplied threshold onward.
    """

    mu: float
    C: float
    label: str = "user"
    eventual: bool = False

    def __post_init__(self) -> None:
        if not self.mu > 2:
            raise ValueError("irrationality measure exponent must exceed 2")
        if not self.C > 0:
            raise ValueError("growth constant must be positive")

    def check_applicable(self, source: RealSource) -> None:
        if self.label == "mahler":
            ok = source.kind is Kind.NAMED_CONSTANT and source.const in (
                Constant.PI,
                Constant.INV_PI,
            )
            if not ok:
                raise CertificateError(
                    "the transcendence-measure certificate applies only to "
                    "the circle constant and its reciprocal"
                )
        elif self.label == "roth":
            if source.kind is not Kind.QUADRATIC_SURD:
                raise CertificateError(
                    "the algebraic-number certificate requires a declared "
                    "quadratic surd source"
                )
        else:
            if source.kind is Kind.RATIONAL:
                raise CertificateError(
                    "a growth certificate is meaningless for a rational source"
                )


def roth_certificate() -> MeasureCertificate:
    return MeasureCertificate(mu=2.5, C=1.0, label="roth", eventual=True)


def mahler_certificate(C: float = 10.0) -> MeasureCertificate:
    return MeasureCertificate(mu=42.0, C=C, label="mahler")


def measure_tail_bound(
    mu: float,
    C: float,
    p: Union[Fraction, float, str],
    from_q: int = 2,
) -> Optional[float]:
    """Upper bound on the criterion tail over entries with q >= from_q.

    Uses the geometric floor q_k >= from_q * 2^(k/2) (denominators at least
    double every second step) together with q_next <= C * q^(mu - 1).
    Returns None when the exponent condition (mu - 1)(1 - p) < 2 fails, in
    which case the certificate says nothing about convergence.
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("exponent p must lie in (0, 1]")
    if mu <= 2 or C <= 0 or from_q < 1:
        raise ValueError("need mu > 2, C > 0, from_q >= 1")
    c_eff = max(C, 1.0)  # enlarging C only weakens the bound, keeps logs >= 0
    if p == 1:
        # term(q) <= (ln C + (mu-1) ln q) / q^2, summed over q_k = from_q * 2^(k/2):
        # sum 2^-k = 2 and sum k 2^-k = 2.
        base = math.log(c_eff) + (mu - 1) * math.log(from_q)
        tail = (2.0 * base + (mu - 1) * math.log(2.0)) / (from_q * from_q)
        return tail
    beta = 2.0 - (mu - 1.0) * float(1 - p)
    if beta <= 0:
        return None
    one_minus = float(1 - p)
    lead = c_eff ** one_minus / one_minus
    return lead * from_q ** (-beta) / (1.0 - 2.0 ** (-beta / 2.0))


class Outcome(str, Enum):
    CONVERGES = "Converges"
    DIVERGES = "Diverges"
    INCONCLUSIVE = "Inconclusive"


class VerdictCertificate(str, Enum):
    RATIONAL_ODD_Q = "RationalOddQ"
    RATIONAL_EVEN_Q = "RationalEvenQ"
    CRITERION_BOUNDED = "CriterionBounded"
    LIOUVILLE_FAMILY = "LiouvilleFamily"
    QALPHA_EMPTY_STRUCTURAL = "QAlphaEmptyStructural"
    EVIDENCE = "Evidence"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    certificate: VerdictCertificate
    parameters: Dict[str, object]
    evidence: Tuple[CriterionTerm, ...] = ()
    evidence_partial_sum: float = 0.0
    notes: Tuple[str, ...] = ()

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "outcome": self.outcome.value,
            "certificate": self.certificate.value,
            "parameters": dict(self.parameters),
            "evidence": [
                {
                    "n": t.n,
                    "q": str(t.q),
                    "q_next": str(t.q_next),
                    "value": t.value if math.isfinite(t.value) else None,
                    "log10_value": t.log10_value,
                }
                for t in self.evidence
            ],
            "evidence_partial_sum": self.evidence_partial_sum,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class Budget:
    convergents: int = 24
    max_bits: Optional[int] = None


def _liouville_divergence(source: RealSource, p: Fraction) -> Optional[str]:
    """Reason string when the staircase family forces divergence, else None.

    The exponent jumps e_k drive the criterion terms: at the level-k
    convergent, log10(term) grows like (1-p) e_{k+1} - 2 e_k.  For the
    factorial schedule that tends to infinity exactly when p < 1 (at p = 1
    the terms decay and this test is silent).  For the doubly exponential
    schedule (e_{k+1} = 100^{e_k} = 10^{2 e_k}) the p = 1 terms approach
    the constant ln 10, so the series still diverges for every p <= 1.
    """
    spec = source.liouville
    assert spec is not None
    if spec.schedule is Schedule.FACTORIAL:
        if p < 1:
            return (
                "factorial exponent schedule: log10 of the level-k criterion "
                "term grows like k! ((1-p)(k+1) - 2), unbounded for p < 1"
            )
        return None
    if spec.schedule is Schedule.TOWER100:
        if p < 1:
            return (
                "doubly exponential schedule: (1-p) e_{k+1} - 2 e_k tends to "
                "infinity, criterion terms unbounded"
            )
        return (
            "doubly exponential schedule at p = 1: criterion terms approach "
            "ln 10 > 0, so the criterion series diverges by the term test"
        )
    return None


def _expansion_evidence(
    source: RealSource, f: FDescriptor, budget: Budget
) -> Tuple[Tuple[QAlphaEntry, ...], CriterionSeries, Tuple[str, ...]]:
    notes: List[str] = []
    try:
        exp = cfrac.expand(source, budget.convergents, max_bits=budget.max_bits)
    except PrecisionLimitError as exc:
        return (), CriterionSeries((), ()), (f"expansion unavailable: {exc}",)
    if exp.capped:
        notes.append(f"expansion capped: {exp.cap_reason}")
    entries = tuple(cfrac.q_alpha(exp.convergents))
    try:
        series = criterion_partial_sum(entries, f)
    except OverflowError as exc:
        notes.append(f"criterion terms beyond float range: {exc}")
        series = CriterionSeries((), ())
        entries = ()
    return entries, series, tuple(notes)


def classify(
    source: RealSource,
    f: FDescriptor,
    budget: Optional[Budget] = None,
    certs: Sequence[MeasureCertificate] = (),
) -> Verdict:
    """Decision ladder for the alternating sine-weighted series.

    1. Rational a/q: exact parity decision (odd q converges, even diverges).
    2. Declared all-ones partial-quotient tail: the entry set is provably
       finite, so the criterion sum is finite and the series converges.
    3. Growth certificates: if q_next <= C q^(mu-1) applies to this source
       and (mu-1)(1-p) < 2 (power weights; mu < 3 for general f), the
       criterion series is bounded and the series converges.
    4. Staircase (Liouville-type) sources with power weights whose criterion
       terms are provably unbounded: diverges.
    5. Otherwise Inconclusive, carrying computed partial sums as evidence.
    """
    budget = budget or Budget()
    for cert in certs:
        cert.check_applicable(source)

    if source.kind is Kind.RATIONAL:
        q = source.q
        if q % 2 == 1:
            return Verdict(
                outcome=Outcome.CONVERGES,
                certificate=VerdictCertificate.RATIONAL_ODD_Q,
                parameters={"a": source.a, "q": q},
                notes=("partial sums stay within q*f(N) of one another; exact parity rule",),
            )
        return Verdict(
            outcome=Outcome.DIVERGES,
            certificate=VerdictCertificate.RATIONAL_EVEN_Q,
            parameters={"a": source.a, "q": q},
            notes=("even denominator forces secular drift of size tan(pi/2q)/q * integral of f",),
        )

    if source.all_ones_tail:
        entries, series, notes = _expansion_evidence(source, f, budget)
        return Verdict(
            outcome=Outcome.CONVERGES,
            certificate=VerdictCertificate.QALPHA_EMPTY_STRUCTURAL,
            parameters={"entries_found": len(entries)},
            evidence=series.terms,
            evidence_partial_sum=series.total,
            notes=notes
            + (
                "all partial quotients are eventually 1, so only finitely many "
                "denominators can double; the criterion sum is finite",
            ),
        )

    p = f.power_exponent
    for cert in certs:
        if p is not None:
            applicable = (cert.mu - 1.0) * float(1 - p) < 2.0
        else:
            applicable = cert.mu < 3.0
        if not applicable:
            continue
        entries, series, notes = _expansion_evidence(source, f, budget)
        if entries:
            from_q = 2 * entries[-1].q
        else:
            from_q = 2
        if p is not None:
            tail = measure_tail_bound(cert.mu, cert.C, p, from_q)
        else:
            # integral of f over [1, Q] <= f(1) * Q turns each term into
            # f(1) * C * q^(mu-3); geometric floor q_k >= from_q * 2^(k/2).
            beta = 3.0 - cert.mu
            tail = (
                f.eval(1.0)
                * max(cert.C, 1.0)
                * from_q ** (-beta)
                / (1.0 - 2.0 ** (-beta / 2.0))
            )
        if tail is None:
            continue
        return Verdict(
            outcome=Outcome.CONVERGES,
            certificate=VerdictCertificate.CRITERION_BOUNDED,
            parameters={
                "measure": cert.label,
                "mu": cert.mu,
                "C": cert.C,
                "eventual": cert.eventual,
                "tail_from_q": str(from_q),
                "tail_bound": tail,
                "series_bound": series.total + tail,
            },
            evidence=series.terms,
            evidence_partial_sum=series.total,
            notes=notes,
        )

    if source.kind is Kind.LIOUVILLE and p is not None:
        reason = _liouville_divergence(source, p)
        if reason is not None:
            return Verdict(
                outcome=Outcome.DIVERGES,
                certificate=VerdictCertificate.LIOUVILLE_FAMILY,
                parameters={"schedule": source.liouville.schedule.value, "p": float(p)},
                notes=(reason,),
            )

    entries, series, notes = _expansion_evidence(source, f, budget)
    return Verdict(
        outcome=Outcome.INCONCLUSIVE,
        certificate=VerdictCertificate.EVIDENCE,
        parameters={"entries_found": len(entries), "budget_convergents": budget.convergents},
        evidence=series.terms,
        evidence_partial_sum=series.total,
        notes=notes
        + (
            "no exact structure or growth certificate applies; the computed "
            "partial sums are evidence only",
        ),
    )
