"""Geometry of H = L^2((0, inf), dt/t^2): dilates, Gram system, d_N, nu.

Inner products among the dilates e_n(t) = {t/n} and the indicator
chi = [t >= 1] are computed by piecewise-exact integration: between
consecutive multiples of m and n the integrand ({t/m}{t/n})/t^2 is
(quadratic in t)/t^2, so each piece has the closed antiderivative
a t + b log t - c/t.  Pieces are summed to a cutoff T0 that is a whole
number of periods; the remaining tail is the periodic mean over T0 plus a
rigorously bounded remainder (<= B/T0^2 with B the maximal partial
integral of the mean-free part).

The pair (m, n) is reduced by gcd before integration: substituting
t -> k t gives <e_km, e_kn> = <e_m, e_n>/k exactly, so only coprime pairs
are ever integrated (and cached).  Entry computation is deterministic:
fixed piece order, exactly rounded sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import digamma

from .arithmetic import MobiusTable, mobius_table
from .errors import CutoffInsufficient, IllConditioned, ZerosInsufficient
from .quadrature import QuadratureResult, kronrod_panels, line_edges
from .special_functions import EULER_GAMMA, zeta, zeta_on_line, fsum_c

_MAX_PIECES = 4_000_000
_DENSE_ENVELOPE = 500        # dense Gram path
_PAIR_ENVELOPE = 10_000      # single inner products
_EIG_TRUNCATION = 1e-13      # relative eigenvalue cut in the Gram solve


def integrate_dilate_product(m: int, n: int, tol: float = 1e-8) -> QuadratureResult:
    """<e_m, e_n> by direct piecewise-exact integration, no gcd reduction.

    This is the integration core behind ``inner_e``; it is exposed so the
    scaling law <e_km, e_kn> = <e_m, e_n>/k can be checked against honest
    integration of the non-reduced pair.
    """
    if m < 1 or n < 1:
        raise ValueError("dilation indices must be >= 1")
    period = m * n
    k_periods = max(1, math.ceil(math.sqrt(4.0 / (tol * period))))
    while k_periods * (m + n) > _MAX_PIECES:
        if 1.0 / (k_periods ** 2 * period) > tol:
            raise CutoffInsufficient(
                f"pair ({m},{n}): tail bound cannot reach {tol:g} "
                f"within {_MAX_PIECES} pieces")
        k_periods //= 2
    t0 = k_periods * period

    edges = np.union1d(np.arange(0, t0 + 1, m, dtype=np.int64),
                       np.arange(0, t0 + 1, n, dtype=np.int64))
    left, right = edges[:-1], edges[1:]
    a = left // m
    b = left // n
    lf = left.astype(np.float64)
    rf = right.astype(np.float64)
    dt = rf - lf
    # Piece integral: dt/(mn) - (a/n + b/m) log(r/l) + a b (1/l - 1/r);
    # the first piece (l = 0) has a = b = 0 and contributes dt/(mn) alone.
    interior = slice(1, None)
    pieces = dt / period
    pieces[interior] -= (a[interior] / n + b[interior] / m) * np.log(rf[interior] / lf[interior])
    pieces[interior] += (a[interior] * b[interior]) * (1.0 / lf[interior] - 1.0 / rf[interior])
    body = math.fsum(pieces)

    mean, b_partial = _period_mean_and_deviation(m, n)
    tail = mean / t0
    bound = b_partial / (t0 * t0) + 1e-13
    if bound > tol:
        raise CutoffInsufficient(f"pair ({m},{n}): bound {bound:.2e} > {tol:g}")
    return QuadratureResult(value=body + tail, error_bound=bound,
                            panels=int(len(pieces)))


def _period_mean_and_deviation(m: int, n: int):
    """Mean of {t/m}{t/n} over one period and a bound on the partial
    integrals of the mean-free part (drives the tail remainder)."""
    period = m * n
    edges = np.union1d(np.arange(0, period + 1, m, dtype=np.int64),
                       np.arange(0, period + 1, n, dtype=np.int64))
    lf = edges[:-1].astype(np.float64)
    rf = edges[1:].astype(np.float64)
    a = (edges[:-1] // m).astype(np.float64)
    b = (edges[:-1] // n).astype(np.float64)
    # integral of (t/m - a)(t/n - b) over each piece
    coef = a / n + b / m
    vals = ((rf ** 3 - lf ** 3) / (3.0 * period)
            - coef * (rf ** 2 - lf ** 2) / 2.0
            + a * b * (rf - lf))
    mean = math.fsum(vals) / period
    centered = vals - mean * (rf - lf)
    partial = np.concatenate(([0.0], np.cumsum(centered)))
    b_partial = float(np.max(np.abs(partial))) + float(np.max(rf - lf))
    return mean, b_partial


@lru_cache(maxsize=100_000)
def _coprime_inner(m: int, n: int, tol: float):
    r = integrate_dilate_product(m, n, tol)
    return r.value, r.error_bound, r.panels


def inner_e(m: int, n: int, tol: float = 1e-8) -> QuadratureResult:
    """<e_m, e_n> in H, with gcd reduction and caching of coprime cores."""
    if not (1 <= m <= _PAIR_ENVELOPE and 1 <= n <= _PAIR_ENVELOPE):
        raise ValueError(f"dilation indices must lie in [1, {_PAIR_ENVELOPE}]")
    g = math.gcd(m, n)
    a, b = sorted((m // g, n // g))
    value, err, panels = _coprime_inner(a, b, tol)
    return QuadratureResult(value=value / g, error_bound=err / g, panels=panels)


def inner_chi_e(n: int, tol: float = 1e-10) -> QuadratureResult:
    """<chi, e_n> = int_1^inf {t/n} dt/t^2, piecewise exact.

    The tail past T0 = K n telescopes exactly: int_{Kn}^inf {t/n} dt/t^2
    = (psi(K+1) - log K)/n, so the only residual error is rounding.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    k_periods = 1024
    edges = np.arange(n, (k_periods + 1) * n, n, dtype=np.int64)
    if edges[0] > 1:
        edges = np.concatenate(([1], edges))
    lf = edges[:-1].astype(np.float64)
    rf = edges[1:].astype(np.float64)
    k = (edges[:-1] // n).astype(np.float64)
    pieces = np.log(rf / lf) / n + k * (1.0 / rf - 1.0 / lf)
    body = math.fsum(pieces)
    tail = (float(digamma(k_periods + 1)) - math.log(k_periods)) / n
    bound = 1e-12 / n + 1e-15
    if bound > tol:
        raise CutoffInsufficient(f"inner_chi_e({n}): bound {bound:.2e} > {tol:g}")
    return QuadratureResult(value=body + tail, error_bound=bound,
                            panels=int(len(pieces)))


def chi_norm_squared() -> float:
    """<chi, chi> = int_1^inf dt/t^2 = 1."""
    return 1.0


def mellin_e(alpha: float, s) -> complex:
    """Mellin transform of the dilate e_alpha on the critical line:
    alpha^-s zeta(s)/(-s)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    s = complex(s)
    if abs(s.real - 0.5) > 1e-12:
        raise ValueError("mellin_e is defined on the critical line Re s = 1/2")
    return alpha ** (-s) * zeta(s) / (-s)


def mellin_chi(s) -> complex:
    """Mellin transform of chi: 1/s."""
    s = complex(s)
    return 1.0 / s


@dataclass(frozen=True)
class GramSystem:
    """Gram matrix G[m,n] = <e_m, e_n> with right-hand side b[n] = <chi, e_n>."""

    n: int
    gram: np.ndarray
    rhs: np.ndarray
    chi_norm: float
    entry_error: float


def gram_system(n: int, tol: float = 1e-8) -> GramSystem:
    """Assemble the order-n Gram system; only coprime pairs are integrated."""
    if n < 0 or n > _DENSE_ENVELOPE:
        raise ValueError(f"dense Gram envelope is n <= {_DENSE_ENVELOPE}")
    gram = np.zeros((n, n))
    entry_error = 0.0
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            r = inner_e(i, j, tol)
            gram[i - 1, j - 1] = gram[j - 1, i - 1] = r.value
            entry_error = max(entry_error, r.error_bound)
    rhs = np.zeros(n)
    for i in range(1, n + 1):
        r = inner_chi_e(i)
        rhs[i - 1] = r.value
        entry_error = max(entry_error, r.error_bound)
    return GramSystem(n=n, gram=gram, rhs=rhs, chi_norm=1.0,
                      entry_error=entry_error)


@dataclass(frozen=True)
class DistanceResult:
    """Least-squares distance d_n^2 plus conditioning diagnostics."""

    n: int
    dn_squared: float
    coefficients: np.ndarray
    truncated_modes: int
    residual_check: float

    @property
    def ill_conditioned(self) -> bool:
        return self.truncated_modes > self.n / 2


def distance_dn(sys: GramSystem) -> DistanceResult:
    """Solve min_c ||chi - sum c_k e_k||^2 = 1 - b.c with G c = b.

    The dilate family is near-degenerate, so the system is solved by
    symmetric eigendecomposition with eigenvalues below 1e-13 * lambda_max
    truncated; the discarded-mode count is an honest conditioning
    diagnostic.  If more than half the spectrum is truncated the result is
    still returned, flagged through an IllConditioned warning.
    """
    if sys.n == 0:
        return DistanceResult(n=0, dn_squared=1.0,
                              coefficients=np.zeros(0), truncated_modes=0,
                              residual_check=0.0)
    w, v = np.linalg.eigh(sys.gram)
    cut = _EIG_TRUNCATION * float(w[-1])
    keep = w > cut
    proj = v[:, keep].T @ sys.rhs
    coeff = v[:, keep] @ (proj / w[keep])
    dn2 = 1.0 - float(sys.rhs @ coeff)
    residual = float(np.max(np.abs(sys.gram @ coeff - sys.rhs)))
    truncated = int(np.count_nonzero(~keep))
    result = DistanceResult(n=sys.n, dn_squared=dn2, coefficients=coeff,
                            truncated_modes=truncated, residual_check=residual)
    if result.ill_conditioned:
        import warnings
        warnings.warn(f"Gram solve truncated {truncated}/{sys.n} modes",
                      IllConditioned)
    return result


def _mobius_weights(table: MobiusTable, n: int, eps: float) -> np.ndarray:
    idx = np.arange(1, n + 1, dtype=np.float64)
    return table.values[1:n + 1].astype(np.float64) * idx ** (-eps)


def nu(n: int, eps: float, route: str = "gram", tau_max: float | None = None,
       mobius: MobiusTable | None = None, zeros=None,
       tol: float = 1e-6) -> QuadratureResult:
    """nu_{N,eps} = || chi + sum_{n<=N} mu(n) n^-eps e_n ||^2, two routes.

    route="gram" expands the squared norm through the Gram system (exact
    given the entries).  route="mellin_line" integrates the Plancherel
    image |1 - zeta(s) M_N(s+eps)|^2 / |s|^2 over |tau| <= tau_max with
    panels refined near zero ordinates, reporting a ~1/tau_max tail
    estimate separately.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if mobius is None or mobius.limit < n:
        mobius = mobius_table(max(n, 1))
    if route == "gram":
        sys = gram_system(n)
        w = _mobius_weights(mobius, n, eps)
        value = 1.0 + 2.0 * float(w @ sys.rhs) + float(w @ sys.gram @ w)
        wsum = float(np.sum(np.abs(w)))
        err = 2.0 * wsum * sys.entry_error + wsum * wsum * sys.entry_error
        return QuadratureResult(value=value, error_bound=err,
                                panels=n * (n + 1) // 2)
    if route != "mellin_line":
        raise ValueError(f"unknown route {route!r}")
    if tau_max is None or tau_max < 1e3:
        raise ValueError("mellin_line route requires tau_max >= 1e3")
    if zeros is None:
        raise ValueError("mellin_line route requires a zero table")
    if zeros.height < tau_max:
        raise ZerosInsufficient(
            f"zero table height {zeros.height:.1f} < tau_max {tau_max:g}")

    def integrand(taus):
        z = zeta_on_line([0.5], taus)[0]
        mn = _mn_grid(mobius, n, 0.5 + eps, taus)
        return np.abs(1.0 - z * mn) ** 2 / (0.25 + taus * taus)

    edges = line_edges(tau_max, eps, zeros.ordinates)
    value, err, panels = kronrod_panels(integrand, edges, tol * math.pi)
    tail_taus = np.linspace(0.8 * tau_max, tau_max, 64)
    z = zeta_on_line([0.5], tail_taus)[0]
    mn = _mn_grid(mobius, n, 0.5 + eps, tail_taus)
    mean_sq = float(np.mean(np.abs(1.0 - z * mn) ** 2))
    tail = 1.5 * mean_sq / (math.pi * tau_max)
    return QuadratureResult(value=float(value[0].real) / math.pi,
                            error_bound=err / math.pi, panels=panels,
                            tail_estimate=tail)


def _mn_grid(table: MobiusTable, n: int, sigma: float, taus) -> np.ndarray:
    from .arithmetic import dirichlet_partial_sum_grid
    if table.limit == n:
        return dirichlet_partial_sum_grid(table, sigma, taus)
    sub = MobiusTable(limit=n, values=table.values[:n + 1],
                      prefix=table.prefix[:n + 1])
    return dirichlet_partial_sum_grid(sub, sigma, taus)


def dn_sweep(n_max: int, eps: float = 0.3, tol: float = 1e-8):
    """Rows (N, dn2, nu, eps, truncated_modes, entry_error) for N = 1..n_max.

    The full Gram system is assembled once; each N solves the leading
    minor, so the sweep is O(n_max) integrations plus small eigensolves.
    """
    sys = gram_system(n_max, tol)
    table = mobius_table(n_max)
    rows = []
    for n in range(1, n_max + 1):
        sub = GramSystem(n=n, gram=sys.gram[:n, :n], rhs=sys.rhs[:n],
                         chi_norm=1.0, entry_error=sys.entry_error)
        d = distance_dn(sub)
        w = _mobius_weights(table, n, eps)
        nu_val = 1.0 + 2.0 * float(w @ sub.rhs) + float(w @ sub.gram @ w)
        rows.append((n, d.dn_squared, nu_val, eps, d.truncated_modes,
                     sys.entry_error))
    return rows


def write_dn_sweep_csv(path, rows) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("N,dn2,nu,eps,truncated_modes,entry_error\n")
        for n, dn2, nu_val, eps, trunc, entry_error in rows:
            fh.write(f"{n},{dn2:.17g},{nu_val:.17g},{eps:.17g},"
                     f"{trunc},{entry_error:.17g}\n")
