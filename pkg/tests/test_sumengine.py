"""Partial-sum engine: accuracy against mpmath references, bound honesty."""

import math
from fractions import Fraction

import mpmath
import pytest

import dseries as ds
from conftest import mp_partial_sum


def test_alpha_half_first_four_terms_exact():
    # |sin(n pi / 2)| kills even n: S = -1 - 1/3 = -4/3
    r = ds.partial_sum_direct(ds.make_rational(1, 2), ds.make_power_f(1), 0, 4)
    assert r.value == pytest.approx(-4.0 / 3.0, abs=1e-14)
    assert abs(r.value + 4.0 / 3.0) <= r.rounding_bound


def test_alpha_third_matches_closed_form():
    # -sqrt(3)/4
    r = ds.partial_sum_direct(ds.make_rational(1, 3), ds.make_power_f(1), 0, 3)
    assert r.value == pytest.approx(-math.sqrt(3.0) / 4.0, abs=1e-14)


def test_direct_matches_mpmath_for_sqrt2():
    src = ds.make_surd(0, 1, 2, 1)
    r = ds.partial_sum_direct(src, ds.make_power_f(1), 0, 1500)
    with mpmath.workdps(60):
        oracle = mp_partial_sum(mpmath.sqrt(2), 1.0, 0, 1500)
    assert abs(r.value - oracle) <= r.rounding_bound + 1e-15


def test_direct_matches_mpmath_for_pi_window():
    src = ds.make_constant("pi")
    r = ds.partial_sum_direct(src, ds.make_power_f(Fraction(1, 2)), 50, 1200)
    with mpmath.workdps(60):
        oracle = mp_partial_sum(mpmath.pi, 0.5, 50, 1200)
    assert abs(r.value - oracle) <= r.rounding_bound + 1e-15


def test_periodic_equals_direct_for_rationals():
    f = ds.make_power_f(1)
    for a, q in [(1, 3), (2, 5), (1, 2), (3, 8), (5, 12)]:
        src = ds.make_rational(a, q)
        d = ds.partial_sum_direct(src, f, 7, 5000)
        p = ds.partial_sum_periodic(a, q, f, 7, 5000)
        assert abs(d.value - p.value) <= d.rounding_bound + p.rounding_bound


def test_periodic_requires_reduced_fraction():
    with pytest.raises(ValueError):
        ds.partial_sum_periodic(2, 4, ds.make_power_f(1), 0, 10)


def test_workers_do_not_change_the_bits():
    src = ds.make_constant("pi")
    f = ds.make_power_f(1)
    r1 = ds.partial_sum_direct(src, f, 0, 20000, workers=1)
    r4 = ds.partial_sum_direct(src, f, 0, 20000, workers=4)
    assert r1.value == r4.value
    assert r1.rounding_bound == r4.rounding_bound


def test_reverse_summation_agrees_within_bounds():
    src = ds.make_constant("invpi")
    f = ds.make_power_f(1)
    fwd = ds.partial_sum_direct(src, f, 0, 30000)
    rev = ds.partial_sum_direct(src, f, 0, 30000, reverse=True)
    assert abs(fwd.value - rev.value) <= fwd.rounding_bound + rev.rounding_bound


def test_term_cap_enforced():
    with pytest.raises(ds.TermLimitError):
        ds.partial_sum_direct(
            ds.make_constant("pi"), ds.make_power_f(1), 0, 10 ** 7, max_terms=10 ** 6
        )


def test_geometric_checkpoints_shape():
    cps = ds.geometric_checkpoints(100)
    assert cps[-1] == 100
    assert cps[0] >= 1
    assert all(a < b for a, b in zip(cps, cps[1:]))
    # halving from the top
    assert 50 in cps and 25 in cps and 13 in cps


def test_scan_rows_match_direct_sums():
    src = ds.make_rational(2, 7)
    f = ds.make_power_f(Fraction(1, 2))
    trace = ds.scan_partial_sums(src, f, 3, 4096)
    for row in trace.rows:
        ref = ds.partial_sum_direct(src, f, 3, row.m)
        assert abs(row.value - ref.value) <= row.rounding_bound + ref.rounding_bound
    assert trace.final.terms == 4096


def test_scan_track_max_matches_bruteforce():
    src = ds.make_rational(3, 8)
    f = ds.make_power_f(1)
    trace = ds.scan_partial_sums(src, f, 0, 3000, track_max=True)
    # brute force running max
    best, best_at, acc = -1.0, 0, 0.0
    table = [abs(math.sin(math.pi * n * 3 / 8)) for n in range(8)]
    for n in range(1, 3001):
        acc += (-1.0) ** n * table[n % 8] / n
        if abs(acc) > best:
            best, best_at = abs(acc), n
    assert trace.max_abs == pytest.approx(best, abs=1e-9)
    assert trace.max_abs_at == best_at


def test_drift_prediction_against_measured_q2():
    f = ds.make_power_f(1)
    pred = ds.drift_predict(1, 2, f, 10 ** 4, 99 * 10 ** 4)
    assert pred.magnitude == pytest.approx(0.5 * math.log(100.0), rel=1e-12)
    assert pred.sign == -1
    measured = ds.partial_sum_periodic(1, 2, f, 10 ** 4, 99 * 10 ** 4)
    assert abs(measured.value - pred.predicted) <= pred.error_allowance


def test_drift_rejects_bad_inputs():
    f = ds.make_power_f(1)
    with pytest.raises(ValueError):
        ds.drift_predict(1, 3, f, 100, 10)  # odd q
    with pytest.raises(ValueError):
        ds.drift_predict(1, 2, f, 101, 10)  # odd N
    with pytest.raises(ValueError):
        ds.drift_predict(2, 4, f, 100, 10)  # not reduced


def test_drift_sign_depends_on_parity_anchor():
    f = ds.make_power_f(1)
    assert ds.drift_predict(1, 2, f, 10, 100).sign == -1


def test_fourier_abs_sin_known_points():
    v, err = ds.fourier_abs_sin(0.5, 1000)
    assert abs(v - 1.0) <= err
    # x = 0 attains the truncation bound exactly; allow float-eval noise
    v0, err0 = ds.fourier_abs_sin(0.0, 1000)
    assert abs(v0 - 0.0) <= err0 + 1e-12
    v3, err3 = ds.fourier_abs_sin(1.0 / 3.0, 500)
    assert abs(v3 - math.sin(math.pi / 3.0)) <= err3


def test_fourier_error_bound_formula():
    _, err = ds.fourier_abs_sin(0.25, 10 ** 4)
    assert err == pytest.approx(2.0 / (math.pi * 20001.0), rel=1e-12)


def test_geometric_sum_spec_example():
    value, bound = ds.geometric_sum(0.1, 5)
    assert abs(value) == pytest.approx(3.23607, abs=1e-5)
    assert abs(value) <= bound + 1e-12
    # oracle: direct complex sum
    direct = sum(complex(math.cos(2 * math.pi * n * 0.1), math.sin(2 * math.pi * n * 0.1)) for n in range(5))
    assert value == pytest.approx(direct, abs=1e-12)


def test_geometric_sum_rejects_integer_alpha():
    with pytest.raises(ValueError):
        ds.geometric_sum(3.0, 10)


def test_osc_integral_spec_window():
    res = ds.osc_integral(0.5, math.pi / 2.0, 3.0 * math.pi / 2.0)
    assert res.lemma_bound == pytest.approx(2.0 * (math.pi / 2.0) ** -0.5, rel=1e-12)
    assert res.lemma_bound == pytest.approx(1.5957691, abs=1e-6)
    assert abs(res.value) <= res.lemma_bound
    with mpmath.workdps(40):
        oracle = float(
            mpmath.quad(lambda t: mpmath.cos(t) / mpmath.sqrt(t), [math.pi / 2.0, 3.0 * math.pi / 2.0])
        )
    assert res.value == pytest.approx(oracle, abs=1e-11)


def test_osc_integral_infinite_tail_against_mpmath():
    res = ds.osc_integral(0.5, 1.0)
    with mpmath.workdps(40):
        oracle = float(
            mpmath.quadosc(
                lambda t: mpmath.cos(t) / mpmath.sqrt(t), [1, mpmath.inf], period=2 * mpmath.pi
            )
        )
    assert res.value == pytest.approx(oracle, abs=1e-7)


def test_a_p_constant_half():
    r = ds.a_p_constant(Fraction(1, 2))
    assert r.closed_form == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-12)
    assert abs(r.quadrature - r.closed_form) <= 1e-6
    assert r.closed_form > r.lower_bound


def test_a_p_constant_rejects_p_one():
    with pytest.raises(ValueError):
        ds.a_p_constant(1)


def test_progression_sum_bound_spec_values():
    s, bound = ds.progression_sum_bound_check(3, 100)
    assert bound == pytest.approx(2.0 / 9.0, rel=1e-12)
    # independent enumeration over k = 3, 9, ..., 99
    oracle = sum(1.0 / (k * k - 1.0) for k in range(3, 101, 6))
    assert s == pytest.approx(oracle, rel=1e-12)
    assert s < bound
    s2, _ = ds.progression_sum_bound_check(3, 3)
    assert s2 == pytest.approx(0.125, rel=1e-12)
    s3, _ = ds.progression_sum_bound_check(10, 10 ** 4)
    assert s3 < 0.02


def test_progression_sum_rejects_bad_types():
    with pytest.raises(TypeError):
        ds.progression_sum_bound_check(3.0, 100)


def test_alternating_tail_within_first_term():
    f = ds.make_power_f(1)
    s, bound = ds.alternating_tail_check(f, 10, 20)
    assert bound == pytest.approx(0.1, rel=1e-12)
    assert abs(s) <= bound
    # inclusive range: sum over n = 10..20 starts with +f(10)
    oracle = sum((-1.0) ** n / n for n in range(10, 21))
    assert s == pytest.approx(oracle, rel=1e-12)
    # X = Y keeps the single boundary term, making the bound tight
    s2, bound2 = ds.alternating_tail_check(f, 10, 10)
    assert abs(s2) == pytest.approx(bound2, rel=1e-12)


def test_alternating_tail_real_endpoints():
    f = ds.make_power_f(Fraction(1, 2))
    s, bound = ds.alternating_tail_check(f, 10.5, 30.7)
    oracle = sum((-1.0) ** n / math.sqrt(n) for n in range(11, 31))
    assert s == pytest.approx(oracle, rel=1e-12)
    assert abs(s) <= bound


def test_trace_final_agrees_with_direct():
    src = ds.make_constant("pi")
    f = ds.make_power_f(1)
    tr = ds.scan_partial_sums(src, f, 0, 2 ** 14)
    d = ds.partial_sum_direct(src, f, 0, 2 ** 14)
    assert abs(tr.final.value - d.value) <= tr.final.rounding_bound + d.rounding_bound
