"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s``.  Criterion 4 is split in
two: the gap-vanishing half passes, while the magnetization-jump half fails
by construction of the model for transverse fields above sqrt(3)/2 ~ 0.866
(the discontinuity is 2*sqrt(1 - gamma^2), which drops below 1 there); the
failing test states this precisely rather than papering over it.
"""

import math
import random
import time
from fractions import Fraction

from conftest import min_excitation_brute
from xygap.classical import FieldPoint, magnetization_x, thermo_gap
from xygap.errors import DegenerateDeltaError
from xygap.exactnum import (
    TruncatedSeries,
    gamma_bounds_check,
    gamma_value,
    tail_bound,
)
from xygap.gaplaw import delta_frac, exact_gap, gap_times_size_values
from xygap.scaling import (
    CLASS_EXPONENTIAL,
    CLASS_FACTORIAL,
    CLASS_POLYNOMIAL,
    RULE_DOUBLED,
    RULE_PLAIN,
    SizeSequence,
    build_scaling_report,
    dense_gamma_in_interval,
    injection_gamma,
    interval_membership_certified,
    scaling_row,
)
from xygap.sector import finite_gap_numeric
from xygap.sequences import SequenceKind, terms

DEXP = SequenceKind.DOUBLE_EXP
FACT = SequenceKind.FACTORIAL


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_exact_vs_numeric_oracle():
    started = time.perf_counter()
    gammas = [Fraction(0), Fraction(1, 5), Fraction(1, 3), Fraction(7, 10), Fraction(99, 100)]
    tol = Fraction(1, 10**12)
    worst = Fraction(0)
    rows = 0
    for gamma in gammas:
        for size in range(2, 65, 2):
            if delta_frac(size, gamma).degenerate:
                continue
            diff = abs(
                exact_gap(size, gamma)
                - Fraction(finite_gap_numeric(size, FieldPoint(float(gamma), 0.0)))
            )
            worst = max(worst, diff)
            rows += 1
    elapsed = time.perf_counter() - started
    ok = worst < tol and elapsed < 5.0
    _line(1, ok, f"{rows} rows, worst |exact - numeric| = {float(worst):.2e}, {elapsed:.2f}s")
    assert worst < tol
    assert elapsed < 5.0


def test_criterion_2_brute_force_level_oracle():
    started = time.perf_counter()
    rng = random.Random(1729)
    gammas = []
    while len(gammas) < 50:
        den = rng.randrange(1, 51)
        gamma = Fraction(rng.randrange(0, den), den)
        if gamma < 1:
            gammas.append(gamma)
    checked = degenerate = 0
    for gamma in gammas:
        for size in range(1, 201):
            expected = min_excitation_brute(size, gamma)
            if expected is None:
                degenerate += 1
                try:
                    exact_gap(size, gamma)
                    raise AssertionError(f"missed crossing at N={size}, gamma={gamma}")
                except DegenerateDeltaError:
                    continue
            assert exact_gap(size, gamma) == expected  # exact rational equality
            checked += 1
    elapsed = time.perf_counter() - started
    ok = elapsed < 10.0
    _line(2, ok, f"{checked} rows equal by enumeration, {degenerate} crossings flagged, {elapsed:.2f}s")
    assert elapsed < 10.0


def test_criterion_3_thermodynamic_gap():
    started = time.perf_counter()
    worst = 0.0
    for i in range(100):
        h = 2.0 * i / 99
        worst = max(worst, abs(thermo_gap(FieldPoint(0.0, h)) - math.sqrt(h + h * h)))
    finite = finite_gap_numeric(4096, FieldPoint(0.0, 0.5))
    finite_err = abs(finite - math.sqrt(0.75))
    elapsed = time.perf_counter() - started
    ok = worst < 1e-14 and finite_err < 1e-2 and elapsed < 30.0
    _line(3, ok, f"curve max err {worst:.2e}, N=4096 gap off by {finite_err:.2e}, {elapsed:.2f}s")
    assert worst < 1e-14
    assert finite_err < 1e-2
    assert elapsed < 30.0


_FIRST_ORDER_GAMMAS = [0.99 * i / 19 for i in range(20)]


def test_criterion_4_first_order_gap_line():
    worst = max(thermo_gap(FieldPoint(g, 0.0)) for g in _FIRST_ORDER_GAMMAS)
    ok = worst <= 1e-14
    _line(4, ok, f"gap at h=0 is zero after clamp for 20 fields in [0, 0.99] (max {worst:.1e})")
    assert worst <= 1e-14


def test_criterion_4_magnetization_jump_exceeds_one():
    """Fails for transverse fields above sqrt(3)/2, and must: the model's
    discontinuity is 2*sqrt(1 - gamma^2) = 0.28 at gamma = 0.99, so a jump
    above 1 across all of [0, 0.99] is unattainable.  Kept as stated rather
    than weakened; the companion test in test_classical.py checks the jump
    against its true closed form."""
    eps = 1e-8
    jumps = {
        g: magnetization_x(FieldPoint(g, eps)) - magnetization_x(FieldPoint(g, -eps))
        for g in _FIRST_ORDER_GAMMAS
    }
    failing = {g: j for g, j in jumps.items() if not j > 1.0}
    _line(
        4,
        not failing,
        "m_x jump > 1 across h=0 for the same 20 fields"
        + (
            f"; fails at gamma in {sorted(round(g, 3) for g in failing)} where the "
            f"jump 2*sqrt(1-gamma^2) is below 1"
            if failing
            else ""
        ),
    )
    assert not failing, (
        f"m_x jump is 2*sqrt(1-gamma^2) < 1 for gamma > sqrt(3)/2 ~ 0.866: "
        f"{ {round(g, 3): round(j, 3) for g, j in failing.items()} }"
    )


def test_criterion_5_scaling_trichotomy():
    started = time.perf_counter()
    dexp_field = TruncatedSeries(DEXP, 5)
    fact_field = TruncatedSeries(FACT, 4)

    # (a) exponential rate on sizes N_n = a_n; the row value is exact
    row_exp = scaling_row(SizeSequence(DEXP, RULE_PLAIN), 3, dexp_field)
    assert row_exp.size == 16
    assert row_exp.gap == Fraction(1, 2**16) + Fraction(1, 2**65536)
    assert Fraction(1, 2) <= row_exp.gap * 2**16 <= 2
    report_exp = build_scaling_report(SizeSequence(DEXP, RULE_PLAIN), dexp_field)
    assert report_exp.classification == CLASS_EXPONENTIAL

    # (b) polynomial rate on doubled sizes with the same field
    row_poly = scaling_row(SizeSequence(DEXP, RULE_DOUBLED), 3, dexp_field)
    assert row_poly.size == 32
    assert row_poly.gap == (1 - Fraction(1, 2**11) - Fraction(1, 2**65531)) / 32
    assert Fraction(1, 2) <= row_poly.gap * 32 <= 1
    report_poly = build_scaling_report(SizeSequence(DEXP, RULE_DOUBLED), dexp_field)
    assert report_poly.classification == CLASS_POLYNOMIAL

    # (c) factorial rate on the factorial sequence with its own field
    row_fact = scaling_row(SizeSequence(FACT, RULE_PLAIN), 2, fact_field)
    assert row_fact.size == 6
    assert row_fact.gap == Fraction(1, 720) + Fraction(1, math.factorial(720))
    assert Fraction(1, 2) <= row_fact.gap * 720 <= 2
    report_fact = build_scaling_report(SizeSequence(FACT, RULE_PLAIN), fact_field)
    assert report_fact.classification == CLASS_FACTORIAL

    # every row above was already computed along two independent routes
    # (direct fractional split vs closed form) inside delta_closed_form
    elapsed = time.perf_counter() - started
    ok = elapsed < 10.0
    _line(
        5, ok,
        "exact gaps 2^-16+2^-65536 (Exponential), (1-2^-11-2^-65531)/32 (Polynomial), "
        f"1/720+1/720! (Factorial), {elapsed:.2f}s",
    )
    assert elapsed < 10.0


def test_criterion_6_rational_field_polynomial_law():
    sizes = range(2, 1001, 2)
    pairs = 0
    for den in range(1, 21):
        for num in range(den):
            gamma = Fraction(num, den)
            if gamma.denominator != den or gamma >= 1:
                continue
            values = gap_times_size_values(gamma, sizes)
            assert len(values) <= den, f"gamma={gamma}: {len(values)} > {den}"
            pairs += 1
    _line(6, True, f"|{{N*gap}}| <= q for all {pairs} reduced fields with q <= 20, even N <= 1000")


def test_criterion_7_appendix_suite():
    started = time.perf_counter()

    # (a) certified enclosure in (1/2, 1) for truncations K = 2..5
    assert all(gamma_bounds_check(TruncatedSeries(DEXP, k)) for k in range(2, 6))

    # (b) tail bound 2/a_n dominates every explicit partial sum
    dexp_terms = terms(DEXP, 5)
    for n in range(1, 5):
        partial = sum(Fraction(1, a) for a in dexp_terms[n - 1 :])
        assert partial < tail_bound(DEXP, n)
    fact_terms = terms(FACT, 4)
    for n in range(1, 4):
        partial = sum(Fraction(1, a) for a in fact_terms[n - 1 :])
        assert partial < tail_bound(FACT, n)

    # (c) dense-interval construction with certified membership
    rng = random.Random(271828)
    for _ in range(100):
        width = rng.randrange(10, 50000)  # >= 1e-4 on the 1e-5 grid
        lo_units = rng.randrange(1, 10**5 - width - 1)
        spec = dense_gamma_in_interval(
            Fraction(lo_units, 10**5), Fraction(lo_units + width, 10**5)
        )
        assert interval_membership_certified(spec)

    # (d) digit injection is injective over all length-3 strings
    values = {
        gamma_value(injection_gamma((b0, b1, b2)))
        for b0 in range(10)
        for b1 in range(10)
        for b2 in range(10)
    }
    assert len(values) == 1000

    elapsed = time.perf_counter() - started
    ok = elapsed < 10.0
    _line(7, ok, f"bounds, tail bounds, 100 dense intervals, 1000-string injectivity, {elapsed:.2f}s")
    assert elapsed < 10.0
