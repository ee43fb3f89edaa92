"""Engineered size sequences and the exact gap-closing trichotomy.

The h = 0 gap law gap = |1 - 2*delta|/N makes the closing rate a question
about how fast the fractional offset delta(N) approaches 1/2 (or 0) along a
chosen sequence of system sizes.  Three regimes are realized exactly:

* sizes N_n = a_n on the double-exponential sequence, field = sum(1/a_n):
  delta - 1/2 ~ N * 2**-N / 2, so the gap closes exponentially;
* sizes N_n = 2*a_n with the same field: delta ~ N * 2**(-N/2) / 2 tends to
  0, so the gap closes polynomially (as 1/N);
* sizes N_n = a_n on the factorial sequence with its own field:
  the gap closes as 1/N!.

For a size N_n drawn from the defining sequence the offset has a closed
form.  With the field truncated at K >= n + 2 terms,

    delta = 1/2 + (a_n/2) * sum_{k=n+1..K} 1/a_k     (N_n = a_n, even)
    delta =       (a_n/2) * sum_{k=n+1..K} 1/a_k     (N_n = a_n, odd)
    delta =        a_n    * sum_{k=n+1..K} 1/a_k     (N_n = 2*a_n)

because the discarded head sum_{k<n} a_n/(2*a_k) is an integer.  Every row
is computed along two independent routes (this closed form, and the direct
fractional split of field*N/2) and the two exact rationals are required to
agree.  A certified bound on the truncation tail accompanies each row so
that branch decisions and classification bands provably hold for the
untruncated field, or the row fails loudly as truncation-insufficient.

The appendix constructions live here too: the digit-injection map that
embeds arbitrary decimal strings into anomalous field values, and the
interval construction that plants such a value inside any target
subinterval of (0, 1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from . import gaplaw
from .errors import DegenerateDeltaError, TruncationInsufficientError
from .exactnum import (
    DigitInjection,
    IntervalConstruction,
    TruncatedSeries,
    decimal_str,
    format_rational,
    gamma_enclosure,
    gamma_value,
    series_tail_bound_after,
)
from .sequences import DEFAULT_BIT_BUDGET, SequenceKind, next_term_bits, terms

RULE_PLAIN = "a_n"
RULE_DOUBLED = "2a_n"

CLASS_EXPONENTIAL = "Exponential"
CLASS_POLYNOMIAL = "Polynomial"
CLASS_FACTORIAL = "Factorial"
CLASS_INDETERMINATE = "Indeterminate"

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class SizeSequence:
    """A term recurrence plus the rule turning terms into system sizes."""

    kind: SequenceKind
    rule: str = RULE_PLAIN

    def __post_init__(self):
        if self.rule not in (RULE_PLAIN, RULE_DOUBLED):
            raise ValueError(f"rule must be {RULE_PLAIN!r} or {RULE_DOUBLED!r}, got {self.rule!r}")


def sequence_terms(seq: SizeSequence, count: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> list[int]:
    """Exact terms a_1..a_count of the underlying recurrence."""
    return terms(seq.kind, count, bit_budget)


def sequence_sizes(seq: SizeSequence, count: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> list[int]:
    """System sizes N_1..N_count under the size rule."""
    scale = 1 if seq.rule == RULE_PLAIN else 2
    return [scale * a for a in sequence_terms(seq, count, bit_budget)]


@dataclass(frozen=True)
class ScalingRow:
    """One certified (n, N_n) row of a scaling run.

    ``deviation_bound`` bounds how far the offset of the *untruncated* field
    can sit above the exact truncated ``delta``.
    """

    index: int
    size: int
    delta: Fraction
    branch: str
    gap: Fraction
    deviation_bound: Fraction

    @property
    def delta_minus_half(self) -> Fraction:
        return self.delta - _HALF


@dataclass(frozen=True)
class ScalingReport:
    sequence: SizeSequence
    truncation: int
    rows: Tuple[ScalingRow, ...]
    classification: str
    certificate: Tuple[str, ...]


def _series_for(seq: SizeSequence, gamma_spec) -> TruncatedSeries:
    if not isinstance(gamma_spec, TruncatedSeries):
        raise TypeError("scaling rows require a truncated-series field spec")
    if gamma_spec.kind is not seq.kind:
        raise ValueError(
            f"field series kind {gamma_spec.kind.value} does not match size sequence "
            f"kind {seq.kind.value}"
        )
    return gamma_spec


def delta_closed_form(
    seq: SizeSequence, n: int, gamma_spec: TruncatedSeries,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> Fraction:
    """Offset at N_n, computed two independent ways and checked for equality.

    Route one is the definition: the fractional split of field*N/2.  Route
    two is the closed form above.  Exact disagreement would mean the
    integer-part argument failed, so it is a hard error.
    """
    spec = _series_for(seq, gamma_spec)
    if n < 1:
        raise ValueError(f"row index must be >= 1, got {n}")
    if spec.count < n + 2:
        raise ValueError(
            f"field must be truncated at K >= n + 2 = {n + 2} terms, got K = {spec.count}"
        )
    seq_terms = sequence_terms(seq, spec.count, bit_budget)
    a_n = seq_terms[n - 1]
    size = a_n if seq.rule == RULE_PLAIN else 2 * a_n
    tail = sum((Fraction(1, a) for a in seq_terms[n:]), Fraction(0))
    if seq.rule == RULE_DOUBLED:
        closed = a_n * tail
    elif size % 2 == 0:
        closed = _HALF + Fraction(a_n, 2) * tail
    else:
        closed = Fraction(a_n, 2) * tail
    direct = gaplaw.delta_frac(size, gamma_value(spec, bit_budget)).value
    if direct != closed:
        raise ArithmeticError(
            f"offset routes disagree at n={n}, N={size}: direct {direct} vs closed {closed}"
        )
    return direct


def delta_deviation_bound(
    seq: SizeSequence, n: int, gamma_spec: TruncatedSeries,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> Fraction:
    """Bound on the offset shift if the field series were extended past K.

    Extending the field by its tail raises field*N/2 by at most
    (N/2) * tail, and the tail is certified below 2/a_{K+1} (or 1/a_K when
    a_{K+1} is out of budget).
    """
    spec = _series_for(seq, gamma_spec)
    a_n = sequence_terms(seq, n, bit_budget)[-1]
    size = a_n if seq.rule == RULE_PLAIN else 2 * a_n
    return Fraction(size, 2) * series_tail_bound_after(seq.kind, spec.count, bit_budget)


def certify_branch(delta: Fraction, deviation_bound: Fraction, size: int, gamma) -> str:
    """Branch of the gap law that provably holds for the untruncated field.

    The untruncated offset lies in [delta, delta + deviation_bound); a
    certificate exists only when that whole interval sits strictly on one
    side of 1/2 and below the wraparound at 1.
    """
    if delta == _HALF:
        raise DegenerateDeltaError(size, gamma)
    if delta < _HALF and delta + deviation_bound >= _HALF:
        raise TruncationInsufficientError(
            f"offset {decimal_str(delta, 12)} + tail bound {decimal_str(deviation_bound, 6)} "
            f"straddles 1/2 at N={size}; increase the truncation"
        )
    if delta + deviation_bound >= 1:
        raise TruncationInsufficientError(
            f"offset enclosure wraps past 1 at N={size}; increase the truncation"
        )
    return gaplaw.BRANCH_LOW if delta < _HALF else gaplaw.BRANCH_HIGH


def scaling_row(
    seq: SizeSequence, n: int, gamma_spec: TruncatedSeries,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> ScalingRow:
    """Build one certified row of a scaling run."""
    delta = delta_closed_form(seq, n, gamma_spec, bit_budget)
    dev = delta_deviation_bound(seq, n, gamma_spec, bit_budget)
    seq_terms = sequence_terms(seq, n, bit_budget)
    size = seq_terms[-1] if seq.rule == RULE_PLAIN else 2 * seq_terms[-1]
    branch = certify_branch(delta, dev, size, gamma_value(gamma_spec, bit_budget))
    gap = gaplaw.exact_gap(size, gamma_value(gamma_spec, bit_budget))
    assert gap == abs(1 - 2 * delta) / size
    return ScalingRow(
        index=n, size=size, delta=delta, branch=branch, gap=gap, deviation_bound=dev
    )


def scaling_gap(
    seq: SizeSequence, n: int, gamma_spec: TruncatedSeries,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> Fraction:
    """Exact gap at N_n for the truncated field."""
    return scaling_row(seq, n, gamma_spec, bit_budget).gap


# ---------------------------------------------------------------------------
# classification

def _pow2_in_budget(size: int, bit_budget: int) -> Optional[int]:
    return 2**size if size + 1 <= bit_budget else None


def _factorial_in_budget(size: int, bit_budget: int) -> Optional[int]:
    bits = next_term_bits(SequenceKind.FACTORIAL, size)
    if bits is None or bits > bit_budget:
        return None
    return math.factorial(size)


def _band_value(row: ScalingRow, label: str, bit_budget: int) -> Optional[Fraction]:
    if label == CLASS_EXPONENTIAL:
        scale = _pow2_in_budget(row.size, bit_budget)
    elif label == CLASS_FACTORIAL:
        scale = _factorial_in_budget(row.size, bit_budget)
    else:
        scale = row.size
    if scale is None:
        return None
    return row.gap * scale


_BANDS = {
    CLASS_EXPONENTIAL: (Fraction(1, 2), Fraction(2)),
    CLASS_POLYNOMIAL: (Fraction(1, 2), Fraction(1)),
    CLASS_FACTORIAL: (Fraction(1, 2), Fraction(2)),
}

_BAND_TEXT = {
    CLASS_EXPONENTIAL: "gap*2^N in [1/2, 2]",
    CLASS_POLYNOMIAL: "gap*N in [1/2, 1]",
    CLASS_FACTORIAL: "gap*N! in [1/2, 2]",
}


def _row_passes(row: ScalingRow, label: str, bit_budget: int) -> bool:
    """Band membership, robust under the certified truncation deviation.

    The untruncated gap differs from the row gap by at most
    2*deviation_bound/N, so the scaled band value is perturbed by at most
    that times the scale; the whole perturbed interval must stay in band.
    """
    value = _band_value(row, label, bit_budget)
    if value is None:
        return False
    lo, hi = _BANDS[label]
    slack = value / row.gap * (2 * row.deviation_bound / row.size)
    return lo <= value - slack and value + slack <= hi


def classify_scaling(
    rows: Sequence[ScalingRow], bit_budget: int = DEFAULT_BIT_BUDGET
) -> Tuple[str, Tuple[str, ...]]:
    """Assign Exponential / Polynomial / Factorial from certified band checks.

    A label applies when every row satisfies its band (including the
    truncation slack).  Small-index rows sit outside the asymptotic regime
    (at n = 2 on the doubled rule the exact value of gap*N is
    1/2 - 2**-13, a hair under the band), so when no label covers all rows
    the leading rows are dropped one at a time and the longest suffix with a
    unique label decides, with the drops recorded in the certificate.
    Anything else is Indeterminate; a label is never forced.
    """
    if len(rows) < 2:
        raise ValueError("classification needs at least 2 certified rows")
    labels = (CLASS_EXPONENTIAL, CLASS_POLYNOMIAL, CLASS_FACTORIAL)
    for start in range(len(rows)):
        suffix = rows[start:]
        passing = [
            label for label in labels
            if all(_row_passes(row, label, bit_budget) for row in suffix)
        ]
        if len(passing) == 1:
            label = passing[0]
            cert = [
                f"{_BAND_TEXT[label]} holds for rows n={suffix[0].index}..{suffix[-1].index}"
            ]
            for row in suffix:
                value = _band_value(row, label, bit_budget)
                cert.append(
                    f"n={row.index}, N={row.size}: band value {decimal_str(value, 12)}, "
                    f"offset tail bound {decimal_str(row.deviation_bound, 4)}"
                )
            if start:
                dropped = ", ".join(str(r.index) for r in rows[:start])
                cert.append(
                    f"rows n={dropped} are below the asymptotic regime and were "
                    f"excluded from the certificate"
                )
            return label, tuple(cert)
        if len(passing) > 1:
            return CLASS_INDETERMINATE, (
                f"rows from n={suffix[0].index} satisfy several bands; refusing to pick",
            )
    return CLASS_INDETERMINATE, ("no classification band covers any suffix of the rows",)


def build_scaling_report(
    seq: SizeSequence, gamma_spec: TruncatedSeries,
    bit_budget: int = DEFAULT_BIT_BUDGET,
    indices: Optional[Sequence[int]] = None,
) -> ScalingReport:
    """Rows n = 1..K-2 (or the given indices) plus the certified classification."""
    spec = _series_for(seq, gamma_spec)
    if indices is None:
        indices = range(1, spec.count - 1)
    rows = tuple(scaling_row(seq, n, spec, bit_budget) for n in indices)
    classification, certificate = classify_scaling(rows, bit_budget)
    return ScalingReport(
        sequence=seq,
        truncation=spec.count,
        rows=rows,
        classification=classification,
        certificate=certificate,
    )


# ---------------------------------------------------------------------------
# appendix constructions

def injection_gamma(digits: Iterable[int], bit_budget: int = DEFAULT_BIT_BUDGET) -> DigitInjection:
    """Field value encoding a decimal digit string, sum((2 b_i + 1)/a_pos).

    Positions start at the third double-exponential term (16, 65536, ...):
    from there each denominator exceeds 21 times the previous one, so the
    ten possible digits at one position occupy disjoint value windows and
    distinct digit strings always give distinct values.  The value is not
    confined to (0, 1); leading digits 8 or 9 push it above 1, which callers
    can detect with :func:`xygap.exactnum.gamma_in_unit_interval`.
    """
    spec = DigitInjection(digits=tuple(digits))
    gamma_value(spec, bit_budget)  # materialize positions; certifies separation
    return spec


def dense_gamma_in_interval(
    lo, hi, bit_budget: int = DEFAULT_BIT_BUDGET
) -> IntervalConstruction:
    """An anomalous-scaling field value certified to lie in (lo, hi).

    Takes the smallest scale k with hi - lo > 2**-k, the smallest dyadic
    numerator with lo < anchor < hi, and the smallest sequence index n with
    a_n > 2**(k+2); the series tail from n is then provably below
    2**-(k+1), which is less than the anchor's distance to the farther
    endpoint, so anchor +- tail stays inside.  Ties between the two branch
    rules pick the positive branch.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not 0 < lo < hi < 1:
        raise ValueError(f"need 0 < lo < hi < 1, got ({lo}, {hi})")
    width = hi - lo
    k = 1
    while Fraction(1, 2**k) >= width:
        k += 1
    scale = 2**k
    anchor_num = math.floor(lo * scale) + 1
    anchor = Fraction(anchor_num, scale)
    assert lo < anchor < hi, "dyadic anchor must exist when width > 2^-k"
    positive = hi - anchor >= anchor - lo
    threshold = 2 ** (k + 2)
    seq = terms(SequenceKind.DOUBLE_EXP, 1, bit_budget)
    while seq[-1] <= threshold:
        seq = terms(SequenceKind.DOUBLE_EXP, len(seq) + 1, bit_budget)
    n = len(seq)
    spec = IntervalConstruction(
        lo=lo, hi=hi, scale_exp=k, anchor_num=anchor_num,
        positive_branch=positive, series_index=n,
    )
    enc_lo, enc_hi = gamma_enclosure(spec, bit_budget)
    if not (lo < enc_lo and enc_hi < hi):
        raise ArithmeticError(
            f"interval construction failed its own certificate for ({lo}, {hi})"
        )
    return spec


def interval_membership_certified(
    spec: IntervalConstruction, bit_budget: int = DEFAULT_BIT_BUDGET
) -> bool:
    """Exact check that the untruncated enclosure sits inside the target interval."""
    enc_lo, enc_hi = gamma_enclosure(spec, bit_budget)
    return spec.lo < enc_lo and enc_hi < spec.hi


# ---------------------------------------------------------------------------
# serialization

def _rational_json(r: Fraction, digits: int = 17) -> dict:
    return {
        "ratio": format_rational(r),
        "decimal": decimal_str(r, digits),
        "num_bits": r.numerator.bit_length(),
        "den_bits": r.denominator.bit_length(),
    }


def report_to_json_dict(report: ScalingReport) -> dict:
    return {
        "schema_version": 1,
        "sequence": {"kind": report.sequence.kind.value, "rule": report.sequence.rule},
        "field": {"kind": "truncated-series", "sequence": report.sequence.kind.value,
                  "terms": report.truncation},
        "rows": [
            {
                "n": row.index,
                "N": row.size,
                "delta": _rational_json(row.delta),
                "delta_minus_half": _rational_json(row.delta_minus_half),
                "gap": _rational_json(row.gap),
                "branch": row.branch,
                "deviation_bound": _rational_json(row.deviation_bound, 6),
            }
            for row in report.rows
        ],
        "classification": report.classification,
        "certificate": list(report.certificate),
    }


def report_to_json(report: ScalingReport) -> str:
    return json.dumps(report_to_json_dict(report), indent=2)


SCALING_CSV_HEADER = "n,N,delta_minus_half,gap,gap_decimal"


def report_csv_lines(report: ScalingReport) -> list[str]:
    lines = [SCALING_CSV_HEADER]
    for row in report.rows:
        lines.append(
            f"{row.index},{row.size},{format_rational(row.delta_minus_half)},"
            f"{format_rational(row.gap)},{decimal_str(row.gap, 17)}"
        )
    return lines
