"""Perron evaluation of Mobius partial sums on a typicality-deformed contour.

For N >= 3 and |tau| <= N/5, the Perron step gives

    M_N(i tau) = N^(-i tau) B_N + O((1 + |tau|) log N),
    B_N = (1/2 pi i) int zeta(z)^-1 N^z / (z - i tau) dz

over the vertical segment Re z = 1 + 1/log N, |Im z| <= N1 = 2^K.  By
Cauchy's theorem the segment can be deformed to the staircase S_N whose
vertical pieces sit at abscissa 1/2 + V_n/log N, with V_n the minimal
typical V for [n, n+1]: there 1/zeta stays controlled.  The construction
uses

    kappa = floor(sqrt(log N) (loglog N)^(5/2)),  K = floor(log N / log 2),

which targets asymptotically large N; at desk scale kappa >= K, and the
builder refuses with KappaExceedsK unless an explicit kappa_override is
supplied (silently clamping would misrepresent the construction).

Only the upper half of the path is stored; the lower half is its mirror
image, folded into the quadrature through conjugation symmetry of the
integrand (real Dirichlet coefficients).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arithmetic import (MobiusTable, VonMangoldtTable, mobius_table,
                         von_mangoldt_table, dirichlet_partial_sum)
from .errors import KappaExceedsK, NearPole, ZeroTableTooShort
from .quadrature import QuadratureResult, kronrod_path
from .reports import MonitorReport
from .special_functions import EvaluationAccuracy, zeta, zeta_many, fsum_c
from .zeros import ZeroTable, min_typical_v


@dataclass(frozen=True, slots=True)
class Segment:
    kind: str            # "vertical" | "horizontal"
    start: complex
    end: complex


@dataclass(frozen=True)
class ContourPath:
    """Upper half of the integration path, real axis upward.

    ``segments`` runs from 1/2 + 1/log N (deformed) or 1 + 1/log N
    (straight) on the real axis up to 1 + 1/log N + i N1; the symmetric
    completion about the real axis is implied.
    """

    n_param: int
    kappa: int | None
    big_k: int
    n0: float
    n1: float
    segments: tuple
    v_table: dict


def kappa_formula(n: int) -> int:
    """kappa = floor((log N)^(1/2) (loglog N)^(5/2))."""
    ln = math.log(n)
    return int(math.floor(math.sqrt(ln) * math.log(ln) ** 2.5))


def big_k_formula(n: int) -> int:
    """K = floor(log N / log 2)."""
    return int(math.floor(math.log(n) / math.log(2.0) + 1e-12))


def build_contour(n: int, kappa_override: int | None = None,
                  table: ZeroTable | None = None,
                  lam: VonMangoldtTable | None = None,
                  delta: float = 0.1, v_source=None) -> ContourPath:
    """Assemble the deformed staircase for N, checking kappa against K.

    ``v_source(n, T_k) -> int`` may replace the default minimal-typical-V
    computation (it must stay within the admissible window for the path
    abscissae to remain in [1/2 + 1/log N, 1 + 1/log N]).  The default
    needs ``table`` valid past 2^K + 1 and a Lambda table covering
    sqrt(2) * 2^(K/2); both are built or rejected here, never extrapolated.
    """
    if n < 16:
        raise ValueError("N must be >= 16")
    kappa_paper = kappa_formula(n)
    big_k = big_k_formula(n)
    if kappa_override is None:
        kappa_eff = kappa_paper
        if kappa_eff >= big_k:
            raise KappaExceedsK(
                f"kappa = {kappa_paper} >= K = {big_k} at N = {n}: the "
                "construction targets asymptotically large N; supply "
                "kappa_override for desk-scale experiments")
    else:
        kappa_eff = int(kappa_override)
    if not 4 <= kappa_eff <= big_k - 1:
        raise ValueError(f"effective kappa must lie in [4, {big_k - 1}]")
    n0 = 2 ** kappa_eff
    n1 = 2 ** big_k

    if v_source is None:
        if table is None:
            raise ValueError("a zero table is required without v_source")
        if table.height < n1 + 1:
            raise ZeroTableTooShort(
                f"typicality windows reach {n1 + 1}, table height "
                f"{table.height:g}")
        if lam is None:
            lam = von_mangoldt_table(int(math.sqrt(2.0 * n1)) + 2)

        def v_source(m, t_k):
            return min_typical_v(m, t_k, table, lam, delta).v

    log_n = math.log(n)
    a0 = 0.5 + 1.0 / log_n
    a_right = 1.0 + 1.0 / log_n

    v_table = {}
    for k in range(kappa_eff, big_k):
        t_k = float(2 ** k)
        for m in range(2 ** k, 2 ** (k + 1)):
            v_table[m] = int(v_source(m, t_k))

    def absc(m):
        return 0.5 + v_table[m] / log_n

    segments = [Segment("vertical", complex(a0, 0.0), complex(a0, n0))]
    segments.append(Segment("horizontal", complex(a0, n0),
                            complex(absc(n0), n0)))
    for m in range(n0, n1):
        x = absc(m)
        segments.append(Segment("vertical", complex(x, m), complex(x, m + 1)))
        if m + 1 < n1:
            segments.append(Segment("horizontal", complex(x, m + 1),
                                    complex(absc(m + 1), m + 1)))
    segments.append(Segment("horizontal", complex(absc(n1 - 1), n1),
                            complex(a_right, n1)))

    path = ContourPath(n_param=n, kappa=kappa_eff, big_k=big_k,
                       n0=float(n0), n1=float(n1),
                       segments=tuple(segments), v_table=v_table)
    validate_contour(path)
    return path


def straight_path(n: int) -> ContourPath:
    """Pre-deformation Perron contour: the vertical segment at
    Re z = 1 + 1/log N up to height N1 (upper half)."""
    big_k = big_k_formula(n)
    n1 = 2 ** big_k
    a = 1.0 + 1.0 / math.log(n)
    seg = Segment("vertical", complex(a, 0.0), complex(a, n1))
    return ContourPath(n_param=n, kappa=None, big_k=big_k, n0=float(n1),
                       n1=float(n1), segments=(seg,), v_table={})


def validate_contour(path: ContourPath) -> None:
    """Connectivity and abscissa-range assertions (exact geometry)."""
    log_n = math.log(path.n_param)
    lo = 0.5 + 1.0 / log_n - 1e-12
    hi = 1.0 + 1.0 / log_n + 1e-12
    prev_end = None
    for seg in path.segments:
        if prev_end is not None and seg.start != prev_end:
            raise ValueError(f"disconnected at {prev_end!r} -> {seg.start!r}")
        for z in (seg.start, seg.end):
            if not lo <= z.real <= hi:
                raise ValueError(f"abscissa {z.real:.6f} outside "
                                 f"[{lo:.6f}, {hi:.6f}]")
        if seg.kind == "vertical" and seg.start.real != seg.end.real:
            raise ValueError("vertical segment drifts horizontally")
        if seg.kind == "horizontal" and seg.start.imag != seg.end.imag:
            raise ValueError("horizontal segment drifts vertically")
        prev_end = seg.end
    if path.segments[0].start.imag != 0.0:
        raise ValueError("path must start on the real axis")
    if prev_end != complex(1.0 + 1.0 / log_n, path.n1):
        raise ValueError("path must end at 1 + 1/log N + i N1")


def b_n_integral(n: int, tau: float, path: ContourPath,
                 acc: EvaluationAccuracy | None = None,
                 tol: float = 1e-8) -> QuadratureResult:
    """B_N(i tau) = (1/2 pi i) int_path zeta(z)^-1 N^z/(z - i tau) dz.

    The stored upper half is integrated for +tau and -tau; conjugation
    symmetry supplies the mirrored lower half:
    B_N = (I_up(tau) - conj(I_up(-tau))) / (2 pi i).
    """
    heights = [seg.start.imag for seg in path.segments
               if seg.kind == "horizontal"]
    if any(abs(abs(tau) - h) < 1e-6 for h in heights):
        tau = tau + 1e-6      # nudge off a horizontal height
    log_n = math.log(n)
    min_dist = math.inf

    def integrand(zs):
        nonlocal min_dist
        d1 = np.abs(zs - 1j * tau)
        d2 = np.abs(zs + 1j * tau)
        min_dist = min(min_dist, float(np.min(d1)), float(np.min(d2)))
        inv_zeta = 1.0 / zeta_many(zs, acc or EvaluationAccuracy(1e-12, 4_000_000))
        npow = np.exp(log_n * zs)
        return np.stack([inv_zeta * npow / (zs - 1j * tau),
                         inv_zeta * npow / (zs + 1j * tau)], axis=1)

    segs = [(seg.start, seg.end) for seg in path.segments]
    value, err, panels = _kronrod_path_2(integrand, segs, tol * 2.0 * math.pi)
    if min_dist < 1e-3:
        raise NearPole(f"path approaches i*tau within {min_dist:.2e}")
    b_val = (value[0] - value[1].conjugate()) / (2.0j * math.pi)
    return QuadratureResult(value=complex(b_val),
                            error_bound=(err / math.pi), panels=panels)


def _kronrod_path_2(f, segments, tol):
    """kronrod_path for a two-component integrand (shared evaluations)."""
    import math as _m

    from .quadrature import _GAUSS_IDX, _WG, _WK, _XK
    segs = [(complex(z0), complex(z1)) for z0, z1 in segments]
    total_arc = sum(abs(z1 - z0) for z0, z1 in segs)
    pending = [(i, 0.0, 1.0, 0) for i in range(len(segs))]
    accepted = []
    n_panels = 0
    while pending:
        zs = []
        for i, ua, ub, _ in pending:
            z0, z1 = segs[i]
            um = 0.5 * (ua + ub) + 0.5 * (ub - ua) * _XK
            zs.append(z0 + um * (z1 - z0))
        vals = np.asarray(f(np.concatenate(zs))).reshape(len(pending), 15, 2)
        nxt = []
        for row, (i, ua, ub, depth) in enumerate(pending):
            z0, z1 = segs[i]
            dz = (z1 - z0) * 0.5 * (ub - ua)
            k15 = dz * np.tensordot(vals[row], _WK, axes=(0, 0))
            g7 = dz * np.tensordot(vals[row][_GAUSS_IDX], _WG, axes=(0, 0))
            err = float(np.max(np.abs(k15 - g7)))
            arc = abs(z1 - z0) * (ub - ua)
            if err <= tol * arc / total_arc or depth >= 14 or \
                    n_panels + len(pending) + len(nxt) >= 200_000:
                accepted.append(((i, ua), k15, err))
                n_panels += 1
            else:
                um = 0.5 * (ua + ub)
                nxt.append((i, ua, um, depth + 1))
                nxt.append((i, um, ub, depth + 1))
        pending = nxt
    accepted.sort(key=lambda r: r[0])
    value = np.array([fsum_c([r[1][c] for r in accepted]) for c in range(2)])
    err_total = _m.fsum(r[2] for r in accepted)
    return value, err_total, n_panels


def perron_check(n: int, tau: float, path: ContourPath,
                 mobius: MobiusTable | None = None,
                 tol: float = 1e-8) -> MonitorReport:
    """Residual |M_N(i tau) - N^(-i tau) B_N| against (1 + |tau|) log N."""
    if abs(tau) > n / 5.0:
        raise ValueError("Perron step requires |tau| <= N/5")
    if mobius is None or mobius.limit < n:
        mobius = mobius_table(n)
    sub = MobiusTable(limit=n, values=mobius.values[:n + 1],
                      prefix=mobius.prefix[:n + 1])
    mn = dirichlet_partial_sum(sub, 1j * tau)
    b = b_n_integral(n, tau, path, tol=tol)
    phase = complex(math.cos(tau * math.log(n)), -math.sin(tau * math.log(n)))
    residual = abs(mn - phase * b.value)
    rhs = (1.0 + abs(tau)) * math.log(n)
    return MonitorReport.from_points(
        "perron_residual_vs_tau_logN", [(tau, residual, rhs)],
        note=f"N={n} M_N={mn:.6g} B_N={b.value:.6g} quad_err={b.error_bound:.2e}")


def tail_identity_check(n: int, eps: float, tau: float, t_max: int,
                        mobius: MobiusTable | None = None) -> MonitorReport:
    """Partial-summation identity tying M_N to 1/zeta at s = 1/2 + i tau:

        1/zeta(s+eps) - M_N(s+eps)
            = -M_N(i tau) N^(-1/2-eps)
              + (1/2+eps) int_N^inf t^(-3/2-eps) M_t(i tau) dt.

    M_t is constant on [j, j+1), so the truncated integral is an exact
    Stieltjes sum of closed-form pieces; the only gap is the tail past
    t_max, whose magnitude estimate t_max^-eps * max |M_t|/sqrt(t) is
    reported as the rhs of the ratio record.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if t_max < 100 * n:
        raise ValueError("t_max must be >= 100 N")
    if mobius is None or mobius.limit < t_max:
        mobius = mobius_table(t_max)
    s_plus = 0.5 + eps + 1j * tau

    sub = MobiusTable(limit=n, values=mobius.values[:n + 1],
                      prefix=mobius.prefix[:n + 1])
    lhs = 1.0 / zeta(s_plus) - dirichlet_partial_sum(sub, s_plus)

    idx = np.arange(1, t_max + 1, dtype=np.float64)
    terms = mobius.values[1:t_max + 1].astype(np.float64) \
        * np.exp(-1j * tau * np.log(idx))
    m_t = np.cumsum(terms)
    j = np.arange(n, t_max, dtype=np.float64)
    weights = j ** (-0.5 - eps) - (j + 1.0) ** (-0.5 - eps)
    integral = fsum_c(m_t[n - 1:t_max - 1] * weights)
    mn_itau = m_t[n - 1]
    rhs = -mn_itau * float(n) ** (-0.5 - eps) + integral

    tail = float(t_max) ** (-eps) * float(np.max(np.abs(m_t) / np.sqrt(idx)))
    residual = abs(lhs - rhs)
    return MonitorReport.from_points(
        "tail_identity_residual_vs_tail", [(tau, residual, tail)],
        note=f"N={n} eps={eps:g} t_max={t_max} lhs={lhs:.8g} rhs={rhs:.8g}")


def mn_bound_monitors(n: int, tau_grid, delta: float = 0.1,
                      mobius: MobiusTable | None = None) -> list[MonitorReport]:
    """Finite-range ratio evidence for the three M_N growth bounds.

    The second (|tau| power saving) and third (inverse-zeta tail) bounds
    have applicability windows that are empty at every desk-scale N; the
    emptiness is recorded in the report note, never skipped silently.
    """
    from .integrals import beta_exponent, kappa_exponent
    taus = [float(t) for t in tau_grid]
    if mobius is None or mobius.limit < n:
        mobius = mobius_table(n)
    sub = MobiusTable(limit=n, values=mobius.values[:n + 1],
                      prefix=mobius.prefix[:n + 1])
    ln = math.log(n)
    lln = math.log(ln)
    c_of_log_n = math.sqrt(ln) * lln ** (2.5 + delta)

    points = []
    for t in taus:
        lhs = abs(dirichlet_partial_sum(sub, 1j * t))
        rhs = (1.0 + abs(t)) * math.sqrt(n) * math.exp(c_of_log_n)
        points.append((t, lhs, rhs))
    rep1 = MonitorReport.from_points(
        "mn_vs_sqrtN_exp_C", points, note=f"N={n} C(log N)={c_of_log_n:.4g}")

    window_lo = math.exp(3.0 * math.sqrt(ln) * lln ** (2.5 + 6.0 * delta))
    window_hi = float(n) ** 0.75
    inside = [t for t in taus if window_lo <= abs(t) <= window_hi]
    if inside:
        pts = [(t, abs(dirichlet_partial_sum(sub, 1j * t)),
                math.sqrt(n) * abs(t) ** (0.5 - kappa_exponent(t)))
               for t in inside]
        rep2 = MonitorReport.from_points("mn_vs_tau_power_saving", pts,
                                         note=f"window=[{window_lo:.4g}, {window_hi:.4g}]")
    else:
        rep2 = MonitorReport.from_points(
            "mn_vs_tau_power_saving", [],
            note=f"window empty at N={n}: lower endpoint {window_lo:.4g} "
                 f"exceeds N^(3/4) = {window_hi:.4g}")

    eps_lo = 25.0 * lln ** (2.5 + 6.0 * delta) / math.sqrt(ln)
    if eps_lo <= 0.5:
        eps = eps_lo
        pts = []
        for t in taus:
            if abs(t) > window_hi:
                continue
            s_plus = 0.5 + eps + 1j * t
            lhs = abs(1.0 / zeta(s_plus) - dirichlet_partial_sum(sub, s_plus))
            rhs = float(n) ** (-eps / 4.0) * (1.0 + abs(t)) ** (0.5 - beta_exponent(t))
            pts.append((t, lhs, rhs))
        rep3 = MonitorReport.from_points("inverse_zeta_tail_vs_beta_power",
                                         pts, note=f"eps={eps:.4g}")
    else:
        rep3 = MonitorReport.from_points(
            "inverse_zeta_tail_vs_beta_power", [],
            note=f"window empty at N={n}: requires eps >= {eps_lo:.4g} > 1/2")
    return [rep1, rep2, rep3]


def contour_to_json(path: ContourPath) -> dict:
    """Plot-ready export: segment endpoints plus the construction parameters."""
    return {
        "parameters": {"N": path.n_param,
                       "kappa": path.kappa,
                       "K": path.big_k},
        "segments": [{"kind": seg.kind,
                      "re0": seg.start.real, "im0": seg.start.imag,
                      "re1": seg.end.real, "im1": seg.end.imag}
                     for seg in path.segments],
    }
