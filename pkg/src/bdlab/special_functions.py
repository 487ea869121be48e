"""Riemann zeta, its derivative, the completed xi, and the Riemann-Siegel phase.

All evaluations are double precision with compensated (error-free transform)
summation in the series accumulators.  zeta and zeta_derivative use the
Euler-Maclaurin formula

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{k=1..M} B_2k/(2k)! * N^(1-s-2k) * prod_{j=0..2k-2}(s+j)

with N tied to |Im s| and M = 8 correction terms, which keeps uniform
accuracy on the vertical strips used by the line integrals without the
complexity of Riemann-Siegel on the main path.  The remainder is bounded by
|first omitted term| * |s+2M+1|/(sigma+2M+1); leading terms are doubled
until the bound meets the requested target.

Everything here is pure and re-entrant; inputs are scalars or arrays and
nothing is cached or mutated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import loggamma

from .errors import AccuracyUnreachable, DomainTooSmall, PoleAtOne

# Named constants, 20 digits; they enter closed-form residue oracles.
EULER_GAMMA = 0.57721566490153286061
LOG_2PI = 1.8378770664093454836
LOG_PI = 1.1447298858494001741

# Stieltjes constants gamma_1..gamma_3 for the Laurent expansion of zeta at 1;
# used only to evaluate (s-1)*zeta(s) stably in a tiny disc around s = 1.
_STIELTJES = (-0.072815845483676724861,
              -0.0096903631928723184845,
              0.0020538344203033458662)

# B_{2k}/(2k)! for k = 1..9 as exact rationals (k = 9 feeds the error bound).
_EM_COEFF = [float(Fraction(b) / math.factorial(2 * k))
             for k, b in enumerate([Fraction(1, 6), Fraction(-1, 30),
                                    Fraction(1, 42), Fraction(-1, 30),
                                    Fraction(5, 66), Fraction(-691, 2730),
                                    Fraction(7, 6), Fraction(-3617, 510),
                                    Fraction(43867, 798)], start=1)]

_EM_CORRECTIONS = 8          # M in the docstring formula
_TAU_ENVELOPE = 1.0e7        # documented accuracy envelope for |Im s|
_CHUNK = 1 << 18             # elements per accumulation chunk


@dataclass(frozen=True)
class EvaluationAccuracy:
    """Absolute-error target plus a hard cap on leading series terms."""

    target_abs_error: float = 1.0e-12
    max_terms: int = 4_000_000

    def __post_init__(self):
        if not (self.target_abs_error >= 1e-14):
            raise ValueError("target_abs_error must be >= 1e-14")
        if self.max_terms < 16:
            raise ValueError("max_terms must be >= 16")


DEFAULT_ACCURACY = EvaluationAccuracy()


def fsum_c(values) -> complex:
    """Exactly rounded sum of a complex array (Shewchuk fsum per component)."""
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real), math.fsum(arr.imag))
    return complex(math.fsum(arr), 0.0)


def _check_finite(s: complex):
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise ValueError(f"non-finite argument {s!r}")


def _em_leading_count(tau_abs: float) -> int:
    return max(int(math.ceil(tau_abs)) + 20, 24)


def _em_eval(s: complex, n_lead: int, want_derivative: bool):
    """One Euler-Maclaurin pass at fixed truncation; returns value(s) + bound."""
    n = np.arange(1, n_lead, dtype=np.float64)
    ln = np.log(n)
    powers = np.exp(-s * ln)
    value = fsum_c(powers)
    if want_derivative:
        dvalue = -fsum_c(ln * powers)

    log_n = math.log(n_lead)
    n_pow = np.exp(-s * log_n)            # N^-s
    sm1 = s - 1.0
    t_int = n_lead * n_pow / sm1          # N^(1-s)/(s-1)
    value += t_int + 0.5 * n_pow
    if want_derivative:
        dvalue += t_int * (-log_n - 1.0 / sm1) - 0.5 * log_n * n_pow

    prod = s                              # prod_{j=0..2k-2}(s+j), k = 1
    dprod = 1.0 + 0j                      # d/ds of that product
    scale = n_lead * n_pow
    for k in range(1, _EM_CORRECTIONS + 1):
        scale /= n_lead * n_lead          # N^(1-s-2k)
        coeff = _EM_COEFF[k - 1] * scale
        value += coeff * prod
        if want_derivative:
            dvalue += coeff * (dprod - prod * log_n)
        f1, f2 = s + 2 * k - 1, s + 2 * k
        dprod = dprod * f1 * f2 + prod * (f1 + f2)
        prod *= f1 * f2

    # First omitted term times the standard remainder factor.
    scale /= n_lead * n_lead
    omitted = abs(_EM_COEFF[_EM_CORRECTIONS] * scale * prod)
    factor = abs(s + 2 * _EM_CORRECTIONS + 1) / (s.real + 2 * _EM_CORRECTIONS + 1)
    bound = omitted * factor
    if want_derivative:
        domitted = abs(_EM_COEFF[_EM_CORRECTIONS] * scale) * (
            abs(dprod) + abs(prod) * log_n)
        return value, dvalue, bound, 2.0 * domitted * factor
    return value, bound


def _em_adaptive(s: complex, acc: EvaluationAccuracy, want_derivative: bool):
    _check_finite(s)
    if s == 1:
        raise PoleAtOne("zeta has its simple pole at s = 1")
    if abs(s.imag) > _TAU_ENVELOPE:
        raise ValueError(f"|Im s| beyond the {_TAU_ENVELOPE:g} accuracy envelope")
    if s.real <= -2 * _EM_CORRECTIONS:
        raise ValueError("Re s below the Euler-Maclaurin envelope")
    n_lead = _em_leading_count(abs(s.imag))
    while True:
        out = _em_eval(s, n_lead, want_derivative)
        if out[-2 if want_derivative else -1] <= acc.target_abs_error and (
                not want_derivative or out[-1] <= acc.target_abs_error):
            return out
        if n_lead >= acc.max_terms:
            raise AccuracyUnreachable(
                f"error bound {out[-1]:.3e} > {acc.target_abs_error:.3e} "
                f"with {n_lead} leading terms")
        n_lead = min(2 * n_lead, acc.max_terms)


def zeta(s, acc: EvaluationAccuracy = DEFAULT_ACCURACY) -> complex:
    """zeta(s) by Euler-Maclaurin, absolute error <= acc.target_abs_error."""
    value, _ = _em_adaptive(complex(s), acc, want_derivative=False)
    return value


def zeta_derivative(s, acc: EvaluationAccuracy = DEFAULT_ACCURACY) -> complex:
    """zeta'(s), termwise-differentiated Euler-Maclaurin, same error contract."""
    _, dvalue, _, _ = _em_adaptive(complex(s), acc, want_derivative=True)
    return dvalue


def zeta_many(s_values, acc: EvaluationAccuracy = DEFAULT_ACCURACY) -> np.ndarray:
    """Vectorized zeta over an array of points (shared truncation).

    The leading-term count is chosen from max |Im s| over the batch, which
    only tightens the bound for the remaining points.
    """
    s = np.asarray(s_values, dtype=np.complex128)
    if s.size == 0:
        return s.copy()
    if np.any(s == 1):
        raise PoleAtOne("zeta has its simple pole at s = 1")
    tau_max = float(np.max(np.abs(s.imag)))
    if tau_max > _TAU_ENVELOPE:
        raise ValueError(f"|Im s| beyond the {_TAU_ENVELOPE:g} accuracy envelope")
    n_lead = _em_leading_count(tau_max)
    while True:
        values, bound = _em_eval_batch(s, n_lead)
        if bound <= acc.target_abs_error:
            return values
        if n_lead >= acc.max_terms:
            raise AccuracyUnreachable(
                f"batch error bound {bound:.3e} > {acc.target_abs_error:.3e}")
        n_lead = min(2 * n_lead, acc.max_terms)


def _em_eval_batch(s: np.ndarray, n_lead: int):
    flat = s.ravel()
    values = np.zeros(flat.shape, dtype=np.complex128)
    n = np.arange(1, n_lead, dtype=np.float64)
    ln = np.log(n)
    for lo in range(0, ln.size, 2048):
        ln_c = ln[lo:lo + 2048]
        for plo in range(0, flat.size, 2048):
            sc = flat[plo:plo + 2048]
            values[plo:plo + 2048] += np.exp(-np.multiply.outer(sc, ln_c)).sum(axis=1)

    log_n = math.log(n_lead)
    n_pow = np.exp(-flat * log_n)
    values += n_lead * n_pow / (flat - 1.0) + 0.5 * n_pow

    prod = flat.copy()
    scale = n_lead * n_pow
    for k in range(1, _EM_CORRECTIONS + 1):
        scale = scale / (n_lead * n_lead)
        values += _EM_COEFF[k - 1] * scale * prod
        prod = prod * (flat + 2 * k - 1) * (flat + 2 * k)
    scale = scale / (n_lead * n_lead)
    omitted = np.abs(_EM_COEFF[_EM_CORRECTIONS] * scale * prod)
    factor = np.abs(flat + 2 * _EM_CORRECTIONS + 1) / (flat.real + 2 * _EM_CORRECTIONS + 1)
    bound = float(np.max(omitted * factor)) if flat.size else 0.0
    return values.reshape(s.shape), bound


def zeta_on_line(sigmas, taus, acc: EvaluationAccuracy = DEFAULT_ACCURACY) -> np.ndarray:
    """zeta(sigma_i + i*tau_j) for a few sigmas over a shared tau grid.

    The oscillatory factor exp(-i*tau*log n) is computed once and reused for
    every sigma, which is the dominant cost on critical-line grids.
    Returns an array of shape (len(sigmas), len(taus)).
    """
    sig = [float(x) for x in sigmas]
    tau = np.asarray(taus, dtype=np.float64).ravel()
    if tau.size == 0:
        return np.zeros((len(sig), 0), dtype=np.complex128)
    tau_max = float(np.max(np.abs(tau)))
    if tau_max > _TAU_ENVELOPE:
        raise ValueError(f"|Im s| beyond the {_TAU_ENVELOPE:g} accuracy envelope")
    n_lead = _em_leading_count(tau_max)
    while True:
        values, bound = _em_line_eval(sig, tau, n_lead)
        if bound <= acc.target_abs_error:
            return values
        if n_lead >= acc.max_terms:
            raise AccuracyUnreachable(
                f"line error bound {bound:.3e} > {acc.target_abs_error:.3e}")
        n_lead = min(2 * n_lead, acc.max_terms)


def _em_line_eval(sig, tau, n_lead):
    values = np.zeros((len(sig), tau.size), dtype=np.complex128)
    n = np.arange(1, n_lead, dtype=np.float64)
    ln = np.log(n)
    weights = [n ** (-s0) for s0 in sig]
    n_chunk = 2048
    t_chunk = 2048
    for plo in range(0, tau.size, t_chunk):
        tc = tau[plo:plo + t_chunk]
        for lo in range(0, ln.size, n_chunk):
            ln_c = ln[lo:lo + n_chunk]
            phases = np.exp(-1j * np.multiply.outer(tc, ln_c))
            for i, w in enumerate(weights):
                values[i, plo:plo + t_chunk] += phases @ w[lo:lo + n_chunk]

    bound = 0.0
    for i, s0 in enumerate(sig):
        flat = s0 + 1j * tau
        log_n = math.log(n_lead)
        n_pow = np.exp(-flat * log_n)
        values[i] += n_lead * n_pow / (flat - 1.0) + 0.5 * n_pow
        prod = flat.copy()
        scale = n_lead * n_pow
        for k in range(1, _EM_CORRECTIONS + 1):
            scale = scale / (n_lead * n_lead)
            values[i] += _EM_COEFF[k - 1] * scale * prod
            prod = prod * (flat + 2 * k - 1) * (flat + 2 * k)
        scale = scale / (n_lead * n_lead)
        omitted = np.abs(_EM_COEFF[_EM_CORRECTIONS] * scale * prod)
        factor = np.abs(flat + 17) / (flat.real + 17)
        bound = max(bound, float(np.max(omitted * factor)))
    return values, bound


def _s_minus_one_zeta(s: complex) -> complex:
    """(s-1)*zeta(s), stable through the pole at s = 1."""
    w = s - 1.0
    if abs(w) < 1e-3:
        # Laurent coefficients: (s-1)zeta(s) = 1 + sum (-1)^n gamma_n w^(n+1)/n!
        out = 1.0 + EULER_GAMMA * w
        wp = w
        for i, g in enumerate(_STIELTJES, start=1):
            wp *= w
            out += (-1) ** i * g * wp / math.factorial(i)
        return out
    return w * zeta(s)


def xi_completed(s) -> complex:
    """Completed zeta: xi(s) = (1/2) s (s-1) pi^(-s/2) Gamma(s/2) zeta(s).

    Computed as (s-1) pi^(-s/2) Gamma(s/2 + 1) zeta(s), which absorbs the
    factor s/2 into the Gamma argument and keeps s = 0 regular; the pole of
    zeta at s = 1 is cancelled against (s-1) explicitly.  Arguments with
    Re s < 0 are reflected through the functional symmetry xi(s) = xi(1-s)
    so Gamma is only ever evaluated away from its poles.
    """
    s = complex(s)
    _check_finite(s)
    if s.real < 0.0:
        s = 1.0 - s
    gamma_half = np.exp(loggamma(s / 2.0 + 1.0))
    return complex(_s_minus_one_zeta(s) * np.exp(-0.5 * s * LOG_PI) * gamma_half)


# Asymptotic coefficients of the Riemann-Siegel phase, terms in t^-(2k-1).
_THETA_COEFF = (1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0,
                127.0 / 430080.0, 511.0 / 1216512.0)


def rs_theta(t):
    """Riemann-Siegel phase theta(t) via its asymptotic expansion.

    theta(t) = (t/2) log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3) + ...

    Accepts a scalar or array; absolute error <= 1e-8 for t >= 10 (the first
    omitted term is below 1e-12 there).  Rejects t < 2, where the expansion
    is meaningless.
    """
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 2.0):
        raise DomainTooSmall("rs_theta requires t >= 2")
    half = 0.5 * arr
    out = half * np.log(arr / (2.0 * math.pi)) - half - math.pi / 8.0
    inv2 = 1.0 / (arr * arr)
    corr = np.zeros_like(out)
    power = 1.0 / arr
    for c in _THETA_COEFF:
        corr += c * power
        power = power * inv2
    out += corr
    if np.isscalar(t) or arr.ndim == 0:
        return float(out)
    return out


def zero_count_estimate(t) -> int:
    """Riemann-von Mangoldt main term: round(theta(t)/pi + 1)."""
    return int(round(rs_theta(float(t)) / math.pi + 1.0))
