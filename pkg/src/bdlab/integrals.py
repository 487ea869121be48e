"""Critical-line integrals J, K, L and I_{N,eps}, with ratio monitors.

With s = 1/2 + i tau and eps in (0, 1/2]:

    K_eps = (1/2pi) int |zeta(s)/zeta(s+eps)|^2  dtau/|s|^2
    L_eps = (1/2pi) int  zeta(s)/zeta(s+eps)     dtau/|s|^2
    J_eps = (1/2pi) int |zeta(s)/zeta(s+eps) - 1|^2 dtau/|s|^2
          = K_eps - 2 L_eps + 1

L has the exact residue value (gamma-1)/zeta(1+eps) - zeta'(1+eps)/zeta(1+eps)^2
(double pole of the integrand at s = 1), which serves as the oracle for the
quadrature route.  I_{N,eps} integrates
|zeta(s)|^2 |M_N(s+eps) - 1/zeta(s+eps)|^2 / |s|^2 up to |tau| = N^(3/4).

All integrands are even in tau, so integration runs over [0, tau_max] and
the 1/2pi normalisation becomes 1/pi.  Truncation tails are estimated and
reported separately, never folded into values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arithmetic import MobiusTable, mobius_table, dirichlet_partial_sum_grid
from .errors import ZerosInsufficient
from .hilbert import _mn_grid
from .quadrature import QuadratureResult, kronrod_panels, line_edges
from .reports import MonitorReport
from .special_functions import (EULER_GAMMA, zeta, zeta_derivative,
                                zeta_on_line)


def beta_exponent(tau) -> float:
    """beta(tau) = logloglog(16+|tau|) / (2 loglog(16+|tau|))."""
    t = abs(float(tau))
    ll = math.log(math.log(16.0 + t))
    return math.log(ll) / (2.0 * ll) if ll > 0 else math.nan


def kappa_exponent(tau) -> float:
    """kappa(tau) = (1/2) logloglog|tau| / loglog|tau|, for |tau| >= 16."""
    t = abs(float(tau))
    if t < 16.0:
        raise ValueError("kappa_exponent requires |tau| >= 16")
    ll = math.log(math.log(t))
    if ll <= 0:
        raise ValueError("kappa_exponent needs loglog|tau| > 0")
    return 0.5 * math.log(ll) / ll


def residue_l_closed(eps: float) -> float:
    """Residue value of L_eps: (gamma-1)/zeta(1+eps) - zeta'(1+eps)/zeta(1+eps)^2."""
    z = zeta(1.0 + eps).real
    dz = zeta_derivative(1.0 + eps).real
    return (EULER_GAMMA - 1.0) / z - dz / (z * z)


@dataclass(frozen=True)
class JklResult:
    eps: float
    K: QuadratureResult
    L_quad: QuadratureResult
    L_closed: float
    J: float


def jkl_integrals(eps: float, tau_max: float, zeros,
                  tol: float = 1e-6) -> JklResult:
    """K and L by adaptive panels plus the residue closed form; J = K - 2L + 1.

    K and L share every integrand evaluation (two components per node).
    Panel boundaries sit on every zero ordinate below tau_max, refined to
    width eps/4 within 2 eps of each ordinate.
    """
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    if tau_max < 1e3:
        raise ValueError("tau_max must be >= 1e3")
    if zeros.height < tau_max:
        raise ZerosInsufficient(
            f"zero table height {zeros.height:.1f} < tau_max {tau_max:g}")

    def integrand(taus):
        z = zeta_on_line([0.5, 0.5 + eps], taus)
        q = z[0] / z[1]
        w = 1.0 / (0.25 + taus * taus)
        out = np.empty((taus.size, 2), dtype=np.complex128)
        out[:, 0] = (q.real * q.real + q.imag * q.imag) * w
        out[:, 1] = q * w
        return out

    edges = line_edges(tau_max, eps, zeros.ordinates)
    value, err, panels = kronrod_panels(integrand, edges, tol * math.pi)
    k_val = float(value[0].real) / math.pi
    l_val = float(value[1].real) / math.pi

    # Tail envelopes beyond tau_max, from the pointwise bounds on the
    # quotient: |q|^2 <= 1 + C eps sqrt(tau) empirically calibrated on the
    # last decade; reported, never added to the values.
    tail_taus = np.linspace(0.8 * tau_max, tau_max, 64)
    z = zeta_on_line([0.5, 0.5 + eps], tail_taus)
    q = z[0] / z[1]
    qsq = np.abs(q) ** 2
    c_emp = float(np.max(np.maximum(qsq - 1.0, 0.0) / (eps * np.sqrt(tail_taus))))
    tail_k = (1.0 / tau_max + 2.0 * c_emp * eps / math.sqrt(tau_max)) / math.pi
    tail_l = 1.5 * float(np.mean(np.abs(q))) / (math.pi * tau_max)

    l_closed = residue_l_closed(eps)
    j_val = k_val - 2.0 * l_closed + 1.0
    return JklResult(
        eps=eps,
        K=QuadratureResult(value=k_val, error_bound=err / math.pi,
                           panels=panels, tail_estimate=tail_k),
        L_quad=QuadratureResult(value=l_val, error_bound=err / math.pi,
                                panels=panels, tail_estimate=tail_l),
        L_closed=l_closed,
        J=j_val)


def i_n_eps(n: int, eps: float, zeros, mobius: MobiusTable | None = None,
            tol: float = 1e-7) -> QuadratureResult:
    """I_{N,eps} over |tau| <= N^(3/4), plus a dyadic-block tail estimate.

    The tail has the theoretical shape c N^(-1/9); c is calibrated from a
    coarse integral over the first dyadic block past the cutoff times the
    geometric factor sum 2^(-k/2), and the product is reported as
    ``tail_estimate`` (heuristic, kept separate from the value).
    """
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    if n > 10 ** 5:
        raise ValueError("N beyond the 1e5 envelope")
    cutoff = float(n) ** 0.75
    if zeros.height < cutoff:
        raise ZerosInsufficient(
            f"zero table height {zeros.height:.1f} < cutoff {cutoff:.1f}")
    if mobius is None or mobius.limit < n:
        mobius = mobius_table(n)

    def integrand(taus):
        z = zeta_on_line([0.5, 0.5 + eps], taus)
        mn = _mn_grid(mobius, n, 0.5 + eps, taus)
        diff = np.abs(mn - 1.0 / z[1]) ** 2
        return np.abs(z[0]) ** 2 * diff / (0.25 + taus * taus)

    edges = line_edges(cutoff, eps, zeros.ordinates)
    value, err, panels = kronrod_panels(integrand, edges, tol * math.pi)
    i_val = float(value[0].real) / math.pi

    block = np.linspace(cutoff, 2.0 * cutoff, 129)
    mids = 0.5 * (block[:-1] + block[1:])
    widths = np.diff(block)
    first_block = float(np.sum(integrand(mids) * widths).real) / math.pi
    tail = first_block * (1.0 / (1.0 - 2.0 ** -0.5))
    return QuadratureResult(value=i_val, error_bound=err / math.pi,
                            panels=panels, tail_estimate=tail)


def quotient_monitor(eps: float, tau_grid) -> list[MonitorReport]:
    """|zeta(s)/zeta(s+eps)|^2 on the grid against its two pointwise bounds:
    |s|^eps and 1 + eps |s|^(1/2)."""
    taus = np.asarray(tau_grid, dtype=np.float64)
    z = zeta_on_line([0.5, 0.5 + eps], taus)
    qsq = np.abs(z[0] / z[1]) ** 2
    smod = np.sqrt(0.25 + taus * taus)
    rep_i = MonitorReport.from_points(
        "quotient_sq_vs_size_power",
        [(t, q, m ** eps) for t, q, m in zip(taus, qsq, smod)])
    rep_ii = MonitorReport.from_points(
        "quotient_sq_vs_one_plus_sqrt",
        [(t, q, 1.0 + eps * math.sqrt(m)) for t, q, m in zip(taus, qsq, smod)])
    return [rep_i, rep_ii]


def mean_value_monitor(n: int, eps: float, t_lower: float,
                       mobius: MobiusTable | None = None,
                       tol: float = 1e-6) -> MonitorReport:
    """Second moment of M_N on [T, 2T] against the mean-value bound
    (T + N) sum mu^2(n) n^(-1-2 eps)."""
    if t_lower < float(n) ** 0.75:
        raise ValueError("requires T >= N^(3/4)")
    if mobius is None or mobius.limit < n:
        mobius = mobius_table(n)

    def integrand(taus):
        mn = _mn_grid(mobius, n, 0.5 + eps, taus)
        return np.abs(mn) ** 2

    edges = np.linspace(t_lower, 2.0 * t_lower, 65)
    value, err, panels = kronrod_panels(integrand, edges, tol * t_lower)
    lhs = float(value[0].real)
    sf = mobius.squarefree_indices()
    sf = sf[sf <= n].astype(np.float64)
    rhs = (t_lower + n) * float(np.sum(sf ** (-1.0 - 2.0 * eps)))
    return MonitorReport.from_points(
        "mn_second_moment_vs_mean_value",
        [(t_lower, lhs, rhs)],
        note=f"N={n} eps={eps:g} panels={panels} quad_err={err:.3e}")
