"""Zero-table ingestion, counting, and V-typical ordinate machinery.

Zeros are inputs, never located here: RH is assumed operationally in that
every ingested ordinate is treated as a critical-line zero of multiplicity
one.  Tables are validated on load against the Riemann-von Mangoldt count
round(theta(t)/pi + 1), which the true zero counting function tracks
within |S(t)| < 3 at every height this library touches.

An ordinate t of size T is V-typical when
  (i)   |sum_{n<=x} Lambda(n)/(n^(sigma+it) log n) * log(x/n)/log x| <= 2V
        for every sigma >= 1/2, with x = T^(1/V);
  (ii)  every subinterval of [t-1, t+1] of length 2 pi delta V / log T
        holds at most (1+delta) V zero ordinates;
  (iii) every subinterval of length 2 pi V / (log V log T) holds at most V.

Criterion (i) is checked on a geometric sigma sample {1/2 + 10*2^-j} plus a
cap at sigma = 50 (terms decay like n^-sigma); (ii)/(iii) are exact sliding
scans over the table.  The admissible window for V is
[(loglog T)^2, log T / loglog T]; it is nonempty only for astronomically
large T, so when empty at desk scale the search falls back to integer
V >= 2 up to the window's endpoints (documented, and consistent with the
theoretical cap on minimal typical V).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arithmetic import VonMangoldtTable
from .errors import (FormatError, HeightExceeded, NoTypicalV, TableTooSmall,
                     ValidationError, WindowViolation)
from .reports import MonitorReport
from .special_functions import rs_theta, fsum_c

_RVM_TOLERANCE = 3
_FIRST_ZERO_WINDOW = (14.13, 14.14)


@dataclass(frozen=True)
class ZeroTable:
    """Ascending critical-line zero ordinates, validated up to ``height``."""

    ordinates: np.ndarray
    height: float
    source: str


def load_zero_table(path) -> ZeroTable:
    """Read one ordinate per line ('#' comments allowed) and validate.

    Validation: strictly increasing positives, first ordinate in
    (14.13, 14.14), and the running count within 3 of round(theta/pi + 1)
    on both sides of every jump.
    """
    values = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: unparsable ordinate {line!r}")
    if not values:
        raise ValidationError("zero table is empty")
    ordinates = np.asarray(values, dtype=np.float64)
    if ordinates[0] <= 0:
        raise ValidationError("ordinates must be positive",
                              offending=float(ordinates[0]))
    if np.any(np.diff(ordinates) <= 0):
        bad = int(np.argmax(np.diff(ordinates) <= 0))
        raise ValidationError("ordinates must be strictly increasing",
                              offending=float(ordinates[bad + 1]))
    lo, hi = _FIRST_ZERO_WINDOW
    if not lo < ordinates[0] < hi:
        raise ValidationError(
            f"first ordinate must lie in ({lo}, {hi})",
            offending=float(ordinates[0]))
    main = np.round(rs_theta(ordinates) / math.pi + 1.0)
    k = np.arange(1, ordinates.size + 1, dtype=np.float64)
    dev = np.maximum(np.abs(k - main), np.abs(k - 1.0 - main))
    if float(np.max(dev)) > _RVM_TOLERANCE:
        bad = int(np.argmax(dev))
        raise ValidationError(
            f"Riemann-von Mangoldt deviation {dev[bad]:.1f} > {_RVM_TOLERANCE}",
            offending=float(ordinates[bad]))
    return ZeroTable(ordinates=ordinates, height=float(ordinates[-1]),
                     source=str(path))


def rvm_deviation(table: ZeroTable) -> float:
    """Max |count - round(theta/pi + 1)| over both sides of every jump."""
    main = np.round(rs_theta(table.ordinates) / math.pi + 1.0)
    k = np.arange(1, table.ordinates.size + 1, dtype=np.float64)
    return float(np.max(np.maximum(np.abs(k - main), np.abs(k - 1.0 - main))))


def zero_count(table: ZeroTable, a: float, b: float) -> int:
    """Exact count of ordinates in (a, b]."""
    if b > table.height:
        raise HeightExceeded(f"b = {b:g} beyond table height {table.height:g}")
    hi = int(np.searchsorted(table.ordinates, b, side="right"))
    lo = int(np.searchsorted(table.ordinates, a, side="right"))
    return hi - lo


def criterion_i_sum(t: float, sigma: float, x: float,
                    lam: VonMangoldtTable) -> float:
    """|sum_{n<=x} Lambda(n)/(n^(sigma+it) log n) * log(x/n)/log x|."""
    if x < 2:
        raise ValueError("x must be >= 2")
    if sigma < 0.5:
        raise ValueError("sigma must be >= 1/2")
    if lam.limit < x:
        raise TableTooSmall(f"Lambda table limit {lam.limit} < x = {x:g}")
    idx = lam.prime_power_indices()
    idx = idx[idx <= int(x)]
    nf = idx.astype(np.float64)
    ln = np.log(nf)
    weights = (math.log(x) - ln) / math.log(x)
    terms = (lam.values[idx] / ln) * weights * np.exp(-(sigma + 1j * t) * ln)
    return abs(fsum_c(terms))


# sigma sample for criterion (i): geometric descent to the critical line
# plus a coarse cap; beyond sigma ~ 10 the sum is already negligible.
_SIGMA_SAMPLE = tuple([0.5] + [0.5 + 10.0 * 2.0 ** -j for j in range(21)] + [50.0])


@dataclass(frozen=True)
class TypicalityReport:
    """Outcome of the three V-typicality criteria at a single ordinate."""

    t: float
    V: float
    T: float
    x: float
    pass_i: bool
    pass_ii: bool
    pass_iii: bool
    witness_i: float
    witness_ii: int
    witness_iii: int

    @property
    def typical(self) -> bool:
        return (self.pass_i and self.pass_ii and self.pass_iii
                and self.T <= self.t <= 2.0 * self.T)


def _max_window_count(ordinates: np.ndarray, length: float):
    """Max zero count over sliding windows of the given length inside the
    2-unit host interval, with the witness window.  Lengths above 2 admit
    no subwindow at all, so the condition is vacuous."""
    if length > 2.0:
        return 0, None
    if ordinates.size == 0:
        return 0, None
    hi = np.searchsorted(ordinates, ordinates + length, side="right")
    counts = hi - np.arange(ordinates.size)
    best = int(np.argmax(counts))
    witness = (float(ordinates[best]),
               float(ordinates[min(int(hi[best]) - 1, ordinates.size - 1)]))
    return int(counts[best]), witness


def _criterion_i_witness(t: float, x: float, lam: VonMangoldtTable) -> float:
    idx = lam.prime_power_indices()
    idx = idx[idx <= int(x)]
    if idx.size == 0:
        return 0.0
    nf = idx.astype(np.float64)
    ln = np.log(nf)
    weights = (math.log(x) - ln) / math.log(x)
    base = (lam.values[idx] / ln) * weights
    phases = np.exp(-1j * t * ln)
    worst = 0.0
    for sigma in _SIGMA_SAMPLE:
        val = abs(fsum_c(base * nf ** (-sigma) * phases))
        worst = max(worst, val)
    return worst


def is_v_typical(t: float, v: float, t_size: float, table: ZeroTable,
                 lam: VonMangoldtTable, delta: float = 0.1,
                 strict: bool = False) -> TypicalityReport:
    """Check the three criteria for t as a V-typical ordinate of size T.

    Requires V > 1 (criterion (iii) divides by log V); the classical window
    [(loglog T)^2, log T/loglog T] is not enforced because it is empty at
    any height a zero table can reach.  In strict mode a failed window scan
    raises WindowViolation with the witness window.
    """
    if v <= 1.0:
        raise ValueError("V must exceed 1")
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    if t + 1.0 > table.height:
        raise HeightExceeded(
            f"need ordinates to {t + 1.0:g}, table height {table.height:g}")
    x = t_size ** (1.0 / v)
    if lam.limit < x:
        raise TableTooSmall(f"Lambda table limit {lam.limit} < x = {x:g}")
    witness_i = _criterion_i_witness(t, x, lam)
    pass_i = witness_i <= 2.0 * v

    log_t = math.log(t_size)
    local = table.ordinates[np.searchsorted(table.ordinates, t - 1.0):
                            np.searchsorted(table.ordinates, t + 1.0, "right")]
    len_ii = 2.0 * math.pi * delta * v / log_t
    count_ii, win_ii = _max_window_count(local, len_ii)
    pass_ii = count_ii <= (1.0 + delta) * v
    len_iii = 2.0 * math.pi * v / (math.log(v) * log_t)
    count_iii, win_iii = _max_window_count(local, len_iii)
    pass_iii = count_iii <= v

    if strict and not pass_ii:
        raise WindowViolation(f"criterion (ii): {count_ii} ordinates in a "
                              f"window of length {len_ii:g}", interval=win_ii)
    if strict and not pass_iii:
        raise WindowViolation(f"criterion (iii): {count_iii} ordinates in a "
                              f"window of length {len_iii:g}", interval=win_iii)
    return TypicalityReport(t=t, V=v, T=t_size, x=x, pass_i=pass_i,
                            pass_ii=pass_ii, pass_iii=pass_iii,
                            witness_i=witness_i, witness_ii=count_ii,
                            witness_iii=count_iii)


def v_window(t_size: float):
    """Integer V-window [(loglog T)^2, log T/loglog T] and its desk-scale
    fallback.  Returns (lo, hi, fallback_used)."""
    log_t = math.log(t_size)
    loglog_t = math.log(log_t)
    if loglog_t <= 0:
        raise ValueError("T too small for the V-window")
    lo = math.ceil(loglog_t ** 2)
    hi = math.floor(log_t / loglog_t)
    if lo <= hi:
        return max(lo, 2), max(hi, 2), False
    return 2, max(hi, 2), True


def typical_v_cap(n: float, delta: float) -> float:
    """Theoretical cap on the minimal typical V per unit interval:
    (1/2) log n/loglog n + (1/2+delta) log n logloglog n/(loglog n)^2 + 1."""
    ln = math.log(n)
    lln = math.log(ln)
    llln = math.log(lln)
    return 0.5 * ln / lln + (0.5 + delta) * ln * llln / (lln * lln) + 1.0


@dataclass(frozen=True)
class TypicalVResult:
    v: int
    theoretical_cap: float
    window_lo: int
    window_hi: int
    fallback_window: bool


def _criterion_i_witness_grid(ts: np.ndarray, x: float,
                              lam: VonMangoldtTable) -> np.ndarray:
    """max over the sigma sample of the criterion (i) modulus, per t."""
    idx = lam.prime_power_indices()
    idx = idx[idx <= int(x)]
    if idx.size == 0:
        return np.zeros(ts.size)
    nf = idx.astype(np.float64)
    ln = np.log(nf)
    base = (lam.values[idx] / ln) * (math.log(x) - ln) / math.log(x)
    phases = np.exp(-1j * np.multiply.outer(ts, ln))
    worst = np.zeros(ts.size)
    for sigma in _SIGMA_SAMPLE:
        np.maximum(worst, np.abs(phases @ (base * nf ** (-sigma))), out=worst)
    return worst


def _windows_pass(t: float, v: float, log_t: float, table: ZeroTable,
                  delta: float) -> bool:
    local = table.ordinates[np.searchsorted(table.ordinates, t - 1.0):
                            np.searchsorted(table.ordinates, t + 1.0, "right")]
    len_ii = 2.0 * math.pi * delta * v / log_t
    count_ii, _ = _max_window_count(local, len_ii)
    if count_ii > (1.0 + delta) * v:
        return False
    len_iii = 2.0 * math.pi * v / (math.log(v) * log_t)
    count_iii, _ = _max_window_count(local, len_iii)
    return count_iii <= v


def min_typical_v(n: int, t_size: float, table: ZeroTable,
                  lam: VonMangoldtTable, delta: float = 0.1) -> TypicalVResult:
    """Smallest admissible integer V making all of [n, n+1] V-typical.

    "All points" is verified on a grid of spacing 2 pi delta V/(4 log T)
    aligned with the narrowest window, so a violation between grid points
    would be caught by the half-window overlap of adjacent samples.
    """
    if t_size < 16:
        raise ValueError("T must be >= 16")
    if not t_size <= n < 2 * t_size:
        raise ValueError("need n in [T, 2T)")
    if n + 2.0 > table.height:
        raise HeightExceeded(
            f"need ordinates to {n + 2.0:g}, table height {table.height:g}")
    lo, hi, fallback = v_window(t_size)
    cap = typical_v_cap(float(n + 1), delta)
    log_t = math.log(t_size)
    for v in range(lo, hi + 1):
        x = t_size ** (1.0 / v)
        if lam.limit < x:
            raise TableTooSmall(f"Lambda table limit {lam.limit} < x = {x:g}")
        spacing = 2.0 * math.pi * delta * v / (4.0 * log_t)
        count = max(2, int(math.ceil(1.0 / spacing)) + 1)
        ts = np.linspace(float(n), float(n + 1), count)
        if np.any(_criterion_i_witness_grid(ts, x, lam) > 2.0 * v):
            continue
        if all(_windows_pass(float(t), float(v), log_t, table, delta)
               for t in ts):
            return TypicalVResult(v=v, theoretical_cap=cap, window_lo=lo,
                                  window_hi=hi, fallback_window=fallback)
    raise NoTypicalV(f"no typical V in [{lo}, {hi}] for n = {n} (T = {t_size:g})")


def gg_monitor(t: float, h: float, table: ZeroTable) -> MonitorReport:
    """Zero-count surplus N(t+h) - N(t-h) - (h/pi) log(t/2pi) against the
    Goldston-Gonek-shaped cap (log t)/(2 loglog t) + (1/2) log t logloglog t/(loglog t)^2."""
    if h > math.sqrt(t):
        raise ValueError("requires h <= sqrt(t)")
    if t + h > table.height:
        raise HeightExceeded(
            f"need ordinates to {t + h:g}, table height {table.height:g}")
    lhs = (zero_count(table, t - h, t + h)
           - (h / math.pi) * math.log(t / (2.0 * math.pi)))
    ln = math.log(t)
    lln = math.log(ln)
    rhs = ln / (2.0 * lln) + 0.5 * ln * math.log(lln) / (lln * lln)
    return MonitorReport.from_points(
        "zero_count_surplus_vs_cap", [(t, lhs, rhs)],
        note=f"h={h:g} count={zero_count(table, t - h, t + h)}")
