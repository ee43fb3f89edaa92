"""Cross-oracle verification suites, runnable from the command line.

Every suite pits two independent computations of the same quantity against
each other: the exact h = 0 gap law against the tridiagonal eigensolver,
the closed-form offset against the direct fractional split, the certified
tail bounds against explicit partial sums, and the interval construction
against exact membership checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gaplaw, scaling, sector
from .classical import FieldPoint
from .exactnum import TruncatedSeries, gamma_bounds_check, gamma_value, tail_bound
from .sequences import DEFAULT_BIT_BUDGET, SequenceKind, terms

DEFAULT_SEED = 20240817


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_exact_vs_numeric(max_size: int = 64) -> CheckResult:
    """Exact gap law vs Sturm-bisection eigensolver on the h = 0 line."""
    gammas = [Fraction(0), Fraction(1, 5), Fraction(1, 3), Fraction(7, 10), Fraction(99, 100)]
    tol = Fraction(1, 10**12)
    worst = Fraction(0)
    rows = 0
    for gamma in gammas:
        for size in range(2, max_size + 1, 2):
            if gaplaw.delta_frac(size, gamma).degenerate:
                continue
            exact = gaplaw.exact_gap(size, gamma)
            numeric = sector.finite_gap_numeric(size, FieldPoint(float(gamma), 0.0))
            diff = abs(exact - Fraction(numeric))
            worst = max(worst, diff)
            rows += 1
            if diff >= tol:
                return CheckResult(
                    "exact-vs-numeric", False,
                    f"N={size}, gamma={gamma}: |exact - numeric| = {float(diff):.3e}",
                )
    return CheckResult(
        "exact-vs-numeric", True,
        f"{rows} rows agree within 1e-12 (worst {float(worst):.3e})",
    )


def check_closed_form_routes(bit_budget: int = DEFAULT_BIT_BUDGET) -> CheckResult:
    """Two-route offset equality over every in-budget (sequence, rule, n)."""
    combos = 0
    for kind, k_trunc in ((SequenceKind.DOUBLE_EXP, 5), (SequenceKind.FACTORIAL, 4)):
        spec = TruncatedSeries(kind, k_trunc)
        for rule in (scaling.RULE_PLAIN, scaling.RULE_DOUBLED):
            seq = scaling.SizeSequence(kind, rule)
            for n in range(1, k_trunc - 1):
                scaling.delta_closed_form(seq, n, spec, bit_budget)  # raises on mismatch
                combos += 1
    return CheckResult("closed-form-routes", True, f"{combos} (sequence, rule, n) combinations agree")


def check_appendix_bounds(bit_budget: int = DEFAULT_BIT_BUDGET) -> CheckResult:
    """Field enclosure in (1/2, 1) and tail bounds vs explicit partial sums."""
    for k_trunc in range(2, 6):
        if not gamma_bounds_check(TruncatedSeries(SequenceKind.DOUBLE_EXP, k_trunc), bit_budget):
            return CheckResult("appendix-bounds", False, f"enclosure check failed at K={k_trunc}")
    seq = terms(SequenceKind.DOUBLE_EXP, 5, bit_budget)
    for n in range(1, 5):
        bound = tail_bound(SequenceKind.DOUBLE_EXP, n, bit_budget)
        partial = sum(Fraction(1, a) for a in seq[n - 1 :])
        if not partial < bound:
            return CheckResult(
                "appendix-bounds", False, f"partial sum from index {n} exceeds 2/a_{n}"
            )
    return CheckResult("appendix-bounds", True, "enclosures for K=2..5 and tail bounds for n=1..4 hold")


def check_dense_intervals(
    samples: int = 100, seed: int = DEFAULT_SEED, bit_budget: int = DEFAULT_BIT_BUDGET
) -> CheckResult:
    """Certified membership for random target intervals of width >= 1e-4."""
    rng = random.Random(seed)
    for _ in range(samples):
        width_units = rng.randrange(10, 40000)  # >= 1e-4 on a 1e-5 grid
        lo_units = rng.randrange(1, 10**5 - width_units - 1)
        lo = Fraction(lo_units, 10**5)
        hi = Fraction(lo_units + width_units, 10**5)
        spec = scaling.dense_gamma_in_interval(lo, hi, bit_budget)
        if not scaling.interval_membership_certified(spec, bit_budget):
            return CheckResult("dense-intervals", False, f"membership failed for ({lo}, {hi})")
        bound = tail_bound(SequenceKind.DOUBLE_EXP, spec.series_index, bit_budget)
        if not bound < Fraction(1, 2 ** (spec.scale_exp + 1)):
            return CheckResult(
                "dense-intervals", False, f"tail bound not below 2^-(k+1) for ({lo}, {hi})"
            )
    return CheckResult("dense-intervals", True, f"{samples} random intervals certified")


def check_injection_injective(bit_budget: int = DEFAULT_BIT_BUDGET) -> CheckResult:
    """All 1000 length-3 digit strings map to distinct field values."""
    values = {
        gamma_value(scaling.injection_gamma((b0, b1, b2), bit_budget), bit_budget)
        for b0 in range(10) for b1 in range(10) for b2 in range(10)
    }
    ok = len(values) == 1000
    return CheckResult(
        "injection-injective", ok,
        f"{len(values)} distinct values from 1000 digit strings",
    )


def check_gauge_invariance(size: int = 32, gamma: float = 0.3, h: float = 0.7) -> CheckResult:
    """Flipping one off-diagonal sign must leave the spectrum untouched."""
    ham = sector.build_sector_hamiltonian(size, FieldPoint(gamma, h))
    flipped_off = ham.offdiag.copy()
    flipped_off[size // 2] *= -1.0
    flipped = sector.SectorHamiltonian(
        size=ham.size, gamma=ham.gamma, h=ham.h, diag=ham.diag, offdiag=flipped_off
    )
    ref = sector.lowest_eigenvalues(ham, 3).eigenvalues
    alt = sector.lowest_eigenvalues(flipped, 3).eigenvalues
    worst = float(np.max(np.abs(ref - alt)))
    ok = worst < 1e-11 * max(sector.norm_bound(ham), 1.0)
    return CheckResult("gauge-invariance", ok, f"spectra differ by at most {worst:.3e}")


def run_all(
    max_size: int = 64, seed: int = DEFAULT_SEED, bit_budget: int = DEFAULT_BIT_BUDGET
) -> list[CheckResult]:
    return [
        check_exact_vs_numeric(max_size),
        check_closed_form_routes(bit_budget),
        check_appendix_bounds(bit_budget),
        check_dense_intervals(seed=seed, bit_budget=bit_budget),
        check_injection_injective(bit_budget),
        check_gauge_invariance(),
    ]
