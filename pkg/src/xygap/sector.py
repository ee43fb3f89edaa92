"""Exact diagonalization in the maximal total-spin sector.

The collective Hamiltonian restricted to total spin S = N/2 acts on the
(N+1)-dimensional ladder basis |m>, m = -S..S, as a symmetric tridiagonal
matrix:

    diag[m]          = -(S(S+1) - m**2)/N - gamma*m
    offdiag[m, m+1]  = -(h/2) * sqrt((S - m)(S + m + 1))

The off-diagonal sign is a gauge choice (a diagonal +-1 similarity flips
it), which the test suite checks explicitly.  Only the bottom of the
spectrum is ever needed, so eigenvalues come from Sturm-count bisection
(O(N) per probe, no factorization) and the ground-state vector from shifted
inverse iteration; both scale comfortably to N ~ 1e5.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classical import FieldPoint
from .errors import DegenerateGroundStateError, XYGapError

DEGENERACY_RTOL = 1e-13   # isolation threshold, relative to the norm bound
RESIDUAL_RTOL = 1e-10

_SAFMIN = 2.2250738585072014e-308


@dataclass(frozen=True)
class SectorHamiltonian:
    size: int
    gamma: float
    h: float
    diag: np.ndarray      # length N+1, entry per m = -N/2 .. N/2
    offdiag: np.ndarray   # length N, couples m and m+1


@dataclass(frozen=True)
class SpectrumSlice:
    eigenvalues: np.ndarray
    vector: Optional[np.ndarray] = None


def build_sector_hamiltonian(size: int, point: FieldPoint) -> SectorHamiltonian:
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    n = size
    i = np.arange(n + 1, dtype=float)
    m = i - n / 2.0
    s_sq = n * (n + 2) / 4.0  # S(S+1)
    diag = -(s_sq - m * m) / n - point.gamma * m
    j = np.arange(n, dtype=float)
    ladder = (n - j) * (j + 1.0)  # (S - m)(S + m + 1) at m = j - S
    offdiag = -(point.h / 2.0) * np.sqrt(ladder)
    diag.setflags(write=False)
    offdiag.setflags(write=False)
    return SectorHamiltonian(size=n, gamma=point.gamma, h=point.h, diag=diag, offdiag=offdiag)


def norm_bound(ham: SectorHamiltonian) -> float:
    """Max row sum of absolute values; cheap and sufficient for tolerances."""
    n = ham.size
    row = np.abs(ham.diag).copy()
    if n >= 1:
        row[:-1] += np.abs(ham.offdiag)
        row[1:] += np.abs(ham.offdiag)
    return float(row.max())


def _sturm_count(diag: list, off_sq: list, shift: float, pivmin: float) -> int:
    """Number of eigenvalues strictly below ``shift`` (LAPACK-style recurrence)."""
    count = 0
    q = 1.0
    for i, d in enumerate(diag):
        q = d - shift - (off_sq[i - 1] / q if i else 0.0)
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def lowest_eigenvalues(ham: SectorHamiltonian, k: int) -> SpectrumSlice:
    """The k smallest eigenvalues by Sturm-count bisection, ascending.

    Each eigenvalue is located to an interval of width ~1e-15 times the norm
    bound, comfortably below the 1e-13 relative / 1e-14 * norm absolute
    accuracy contract.
    """
    n = ham.size
    if not 1 <= k <= n + 1:
        raise ValueError(f"k must lie in 1..{n + 1}, got {k}")
    diag = ham.diag.tolist()
    off_sq = (ham.offdiag * ham.offdiag).tolist()
    anorm = norm_bound(ham)
    pivmin = _SAFMIN * max(1.0, max(off_sq, default=0.0))
    span = max(anorm, 1.0)
    lo0 = min(diag) - (max(np.abs(ham.offdiag).tolist(), default=0.0) * 2 + 1e-3 * span)
    hi0 = max(diag) + (max(np.abs(ham.offdiag).tolist(), default=0.0) * 2 + 1e-3 * span)
    tol = 1e-15 * span
    values = []
    for index in range(k):
        lo, hi = lo0, hi0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _sturm_count(diag, off_sq, mid, pivmin) >= index + 1:
                hi = mid
            else:
                lo = mid
        values.append(0.5 * (lo + hi))
    return SpectrumSlice(eigenvalues=np.array(values))


def _solve_shifted(diag: np.ndarray, off: np.ndarray, shift: float, rhs: np.ndarray,
                   pivmin: float) -> np.ndarray:
    """Solve (T - shift*I) x = rhs by tridiagonal LU with partial pivoting."""
    n = diag.size
    d = (diag - shift).astype(float)
    if n == 1:
        piv = d[0] if abs(d[0]) >= pivmin else pivmin
        return rhs / piv
    dl = off.astype(float).copy()
    du = off.astype(float).copy()
    du2 = np.zeros(max(n - 2, 0))
    swap = np.zeros(n - 1, dtype=bool)
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            if abs(d[i]) < pivmin:
                d[i] = pivmin
            fact = dl[i] / d[i]
            dl[i] = fact
            d[i + 1] -= fact * du[i]
            if i < n - 2:
                du2[i] = 0.0
        else:
            fact = d[i] / dl[i]
            d[i] = dl[i]
            dl[i] = fact
            tmp = du[i]
            du[i] = d[i + 1]
            d[i + 1] = tmp - fact * d[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            swap[i] = True
    x = rhs.astype(float).copy()
    for i in range(n - 1):
        if swap[i]:
            x[i], x[i + 1] = x[i + 1], x[i] - dl[i] * x[i + 1]
        else:
            x[i + 1] -= dl[i] * x[i]
    for i in range(n):
        if abs(d[i]) < pivmin:
            d[i] = pivmin
    x[n - 1] /= d[n - 1]
    x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i]
    return x


def _residual(ham: SectorHamiltonian, lam: float, vec: np.ndarray) -> float:
    r = ham.diag * vec - lam * vec
    r[:-1] += ham.offdiag * vec[1:]
    r[1:] += ham.offdiag * vec[:-1]
    return float(np.linalg.norm(r))


def ground_state_vector(ham: SectorHamiltonian) -> SpectrumSlice:
    """Unit-norm ground state by inverse iteration at the bisection eigenvalue.

    Requires the lowest eigenvalue to be isolated from the second by more
    than DEGENERACY_RTOL times the norm bound; true crossings (h = 0 with
    the offset at exactly 1/2) raise :class:`DegenerateGroundStateError`.
    """
    pair = lowest_eigenvalues(ham, min(2, ham.size + 1))
    anorm = norm_bound(ham)
    lam = float(pair.eigenvalues[0])
    if len(pair.eigenvalues) > 1 and pair.eigenvalues[1] - lam <= DEGENERACY_RTOL * max(anorm, 1.0):
        raise DegenerateGroundStateError(
            f"lowest eigenvalues separated by {pair.eigenvalues[1] - lam:.3e} "
            f"at N={ham.size}, gamma={ham.gamma}, h={ham.h}"
        )
    pivmin = _SAFMIN * max(1.0, anorm)
    rng = np.random.default_rng(20160923)
    vec = rng.standard_normal(ham.size + 1)
    vec /= np.linalg.norm(vec)
    tol = RESIDUAL_RTOL * max(anorm, 1.0)
    for _ in range(8):
        vec = _solve_shifted(ham.diag, ham.offdiag, lam, vec, pivmin)
        vec /= np.linalg.norm(vec)
        if _residual(ham, lam, vec) < 0.5 * tol:
            break
    if _residual(ham, lam, vec) >= tol:
        raise XYGapError(
            f"inverse iteration stalled at N={ham.size}, gamma={ham.gamma}, h={ham.h}"
        )
    lead = np.flatnonzero(np.abs(vec) > 1e-8)
    if lead.size and vec[lead[0]] < 0:
        vec = -vec
    vec.setflags(write=False)
    return SpectrumSlice(eigenvalues=pair.eigenvalues, vector=vec)


def finite_gap_numeric(size: int, point: FieldPoint) -> float:
    """E1 - E0 for the finite system; the numerical route used when h != 0."""
    ham = build_sector_hamiltonian(size, point)
    if size == 0:  # pragma: no cover - build rejects this first
        raise ValueError("empty sector")
    pair = lowest_eigenvalues(ham, min(2, size + 1))
    if len(pair.eigenvalues) < 2:
        return 0.0
    diff = float(pair.eigenvalues[1] - pair.eigenvalues[0])
    if diff < -1e-13 * max(norm_bound(ham), 1.0):
        raise XYGapError(f"eigenvalue ordering violated: gap {diff:.3e}")
    return max(diff, 0.0)


def spectrum_csv_lines(spectrum: SpectrumSlice) -> list[str]:
    """Debug dump of the computed eigenvalues."""
    lines = ["index,eigenvalue"]
    for i, val in enumerate(spectrum.eigenvalues):
        lines.append(f"{i},{format(float(val), '.17g')}")
    return lines
