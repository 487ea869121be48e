"""Command-line surface: one subcommand per computation, reproducible runs.

Every run writes its report files plus a manifest echoing the fully
resolved configuration; reports are byte-identical across reruns with the
same configuration and inputs (timestamps are confined to the manifest).
Validation failures exit with status 2 and a machine-readable error JSON
on stdout.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .arithmetic import (chebyshev_constant, chebyshev_sandwich,
                         chebyshev_sandwich_exact, mobius_table,
                         save_mertens_prefix, von_mangoldt_table)
from .contour import (b_n_integral, build_contour, contour_to_json,
                      mn_bound_monitors, perron_check, straight_path,
                      tail_identity_check)
from .errors import LabError
from .hilbert import dn_sweep, nu, write_dn_sweep_csv
from .integrals import i_n_eps, jkl_integrals, mean_value_monitor, quotient_monitor
from .reports import format_float, write_csv, write_json
from .zeros import gg_monitor, load_zero_table, min_typical_v, zero_count

_ZERO_TABLE_ENV = "BDLAB_ZERO_TABLE"

COMMANDS = ("dn-sweep", "nu", "jkl", "ieps", "mertens", "sandwich",
            "typical", "contour", "perron", "tail-identity", "zeros-import",
            "monitors")


@dataclass
class RunConfig:
    """Fully resolved invocation: command, parameters, output paths."""

    command: str
    params: dict
    out_dir: Path
    seed: int = 0
    zero_table: str | None = None


def _resolve_zero_table(args) -> str | None:
    path = getattr(args, "zero_table", None) or os.environ.get(_ZERO_TABLE_ENV)
    return path


def _write_manifest(config: RunConfig, outputs: list[str]) -> None:
    manifest = {
        "tool": "bdlab",
        "version": __version__,
        "command": config.command,
        "params": {k: (format_float(v) if isinstance(v, float) else v)
                   for k, v in sorted(config.params.items())},
        "seed": config.seed,
        "zero_table": config.zero_table,
        "outputs": sorted(outputs),
        "timestamp_unix": time.time(),
    }
    write_json(config.out_dir / "manifest.json", manifest)


def _need_zeros(config: RunConfig):
    if not config.zero_table:
        raise LabError(f"this command needs a zero table (--zero-table or "
                       f"${_ZERO_TABLE_ENV})")
    return load_zero_table(config.zero_table)


def _cmd_dn_sweep(config: RunConfig):
    rows = dn_sweep(int(config.params["n_max"]), float(config.params["eps"]))
    out = config.out_dir / "dn_sweep.csv"
    write_dn_sweep_csv(out, rows)
    print(f"wrote {out} ({len(rows)} rows)")
    return [out.name]


def _cmd_nu(config: RunConfig):
    p = config.params
    zeros = _need_zeros(config) if p["route"] == "mellin_line" else None
    result = nu(int(p["n"]), float(p["eps"]), route=p["route"],
                tau_max=float(p["tau_max"]) if p["route"] == "mellin_line" else None,
                zeros=zeros)
    payload = {"N": int(p["n"]), "eps": float(p["eps"]), "route": p["route"],
               "value": result.value, "error_bound": result.error_bound,
               "tail_estimate": result.tail_estimate, "panels": result.panels}
    write_json(config.out_dir / "nu.json", payload)
    print(f"nu = {format_float(result.value)}")
    return ["nu.json"]


def _cmd_jkl(config: RunConfig):
    p = config.params
    zeros = _need_zeros(config)
    r = jkl_integrals(float(p["eps"]), float(p["tau_max"]), zeros)
    payload = {"eps": r.eps, "K": r.K.value, "tail_K": r.K.tail_estimate,
               "L_quad": r.L_quad.value, "tail_L": r.L_quad.tail_estimate,
               "L_closed": r.L_closed, "J": r.J,
               "quad_error": r.K.error_bound, "panels": r.K.panels,
               "residue_gap": abs(r.L_quad.value - r.L_closed)}
    write_json(config.out_dir / "jkl.json", payload)
    write_csv(config.out_dir / "jkl.csv", "eps,K,L_quad,L_closed,J,tail_K",
              [(r.eps, r.K.value, r.L_quad.value, r.L_closed, r.J,
                r.K.tail_estimate)])
    print(f"K = {format_float(r.K.value)}  L_closed = {format_float(r.L_closed)}"
          f"  J = {format_float(r.J)}")
    return ["jkl.json", "jkl.csv"]


def _cmd_ieps(config: RunConfig):
    p = config.params
    zeros = _need_zeros(config)
    r = i_n_eps(int(p["n"]), float(p["eps"]), zeros)
    write_csv(config.out_dir / "ieps.csv", "N,eps,I,tail_I",
              [(int(p["n"]), float(p["eps"]), r.value, r.tail_estimate)])
    write_json(config.out_dir / "ieps.json",
               {"N": int(p["n"]), "eps": float(p["eps"]), "I": r.value,
                "tail_I": r.tail_estimate, "error_bound": r.error_bound,
                "panels": r.panels})
    print(f"I = {format_float(r.value)} (+ tail ~ {format_float(r.tail_estimate)})")
    return ["ieps.csv", "ieps.json"]


def _cmd_mertens(config: RunConfig):
    n_max = int(config.params["n_max"])
    table = mobius_table(n_max)
    out_bin = config.out_dir / "mertens.bin"
    save_mertens_prefix(table, out_bin)
    ratios = np.abs(table.prefix[3:].astype(np.float64)) / np.sqrt(
        np.arange(3, n_max + 1, dtype=np.float64))
    write_json(config.out_dir / "mertens.json",
               {"N": n_max, "mertens_N": int(table.prefix[n_max]),
                "max_abs_m_over_sqrt": float(np.max(ratios)) if ratios.size else 0.0})
    print(f"M({n_max}) = {table.prefix[n_max]}")
    return ["mertens.bin", "mertens.json"]


def _cmd_sandwich(config: RunConfig):
    p = config.params
    rng = np.random.default_rng(config.seed)
    samples = int(p["samples"])
    failures = 0
    for _ in range(samples):
        x = Fraction(float(rng.uniform(1e-6, 1e4))).limit_denominator(10 ** 9)
        _, _, _, ok = chebyshev_sandwich_exact(x)
        if not ok:
            failures += 1
    report = chebyshev_sandwich(float(p["x"]))
    payload = {"x": report.x, "phi": report.phi, "upper": report.upper,
               "chi": report.chi, "holds": report.holds,
               "truncation_bound": report.truncation_bound,
               "random_samples": samples, "random_failures": failures,
               "A": chebyshev_constant()}
    write_json(config.out_dir / "sandwich.json", payload)
    print(f"A = {chebyshev_constant():.8f}")
    print(f"sandwich holds at x={report.x:g}: {report.holds}; "
          f"{samples} random rational checks, {failures} failures")
    return ["sandwich.json"]


def _cmd_typical(config: RunConfig):
    p = config.params
    zeros = _need_zeros(config)
    t_size = float(p["big_t"])
    delta = float(p["delta"])
    rng = np.random.default_rng(config.seed)
    lam = von_mangoldt_table(int(t_size ** 0.5 * 1.5) + 2)
    ns = sorted(int(v) for v in
                rng.integers(int(t_size), int(2 * t_size) - 1,
                             size=int(p["samples"])))
    rows = []
    for n in ns:
        r = min_typical_v(n, t_size, zeros, lam, delta)
        rows.append((n, r.v, r.theoretical_cap, int(r.fallback_window)))
    write_csv(config.out_dir / "typical.csv", "n,v,cap,fallback_window", rows)
    worst = max((r[1] - r[2]) for r in rows)
    print(f"{len(rows)} samples at T = {t_size:g}; max (V - cap) = "
          f"{format_float(worst)}")
    return ["typical.csv"]


def _cmd_contour(config: RunConfig):
    p = config.params
    zeros = _need_zeros(config)
    path = build_contour(int(p["n"]), kappa_override=p.get("kappa_override"),
                         table=zeros, delta=float(p["delta"]))
    write_json(config.out_dir / "contour.json", contour_to_json(path))
    print(f"contour for N = {p['n']}: {len(path.segments)} segments "
          f"(kappa = {path.kappa}, K = {path.big_k})")
    return ["contour.json"]


def _cmd_perron(config: RunConfig):
    p = config.params
    zeros = _need_zeros(config)
    path = build_contour(int(p["n"]), kappa_override=p.get("kappa_override"),
                         table=zeros, delta=float(p["delta"]))
    rep = perron_check(int(p["n"]), float(p["tau"]), path)
    write_json(config.out_dir / "perron.json",
               {"report": rep.to_jsonable(),
                "contour": contour_to_json(path)["parameters"]})
    rec = rep.grid[0]
    print(f"perron residual = {format_float(rec.lhs)}  "
          f"ratio = {format_float(rec.ratio)}")
    return ["perron.json"]


def _cmd_tail_identity(config: RunConfig):
    p = config.params
    rep = tail_identity_check(int(p["n"]), float(p["eps"]), float(p["tau"]),
                              int(p["t_max"]))
    write_json(config.out_dir / "tail_identity.json", rep.to_jsonable())
    rec = rep.grid[0]
    print(f"residual = {format_float(rec.lhs)}  tail estimate = "
          f"{format_float(rec.rhs)}")
    return ["tail_identity.json"]


def _cmd_zeros_import(config: RunConfig):
    zeros = _need_zeros(config)
    payload = {"height": zeros.height, "count": int(zeros.ordinates.size),
               "source": zeros.source}
    write_json(config.out_dir / "zeros.json", payload)
    print(f"height = {format_float(zeros.height)}")
    print(f"count = {zeros.ordinates.size}")
    return ["zeros.json"]


def _cmd_monitors(config: RunConfig):
    p = config.params
    reports = []
    eps = float(p["eps"])
    n = int(p["n"])
    which = p["which"]
    if which in ("quotient", "all"):
        grid = np.linspace(0.5, 100.0, 40)
        reports.extend(quotient_monitor(eps, grid))
    if which in ("mean-value", "all"):
        reports.append(mean_value_monitor(n, eps, max(1e3, float(n) ** 0.75)))
    if which in ("gg", "all"):
        zeros = _need_zeros(config)
        reports.append(gg_monitor(float(p["t"]), float(p["h"]), zeros))
    if which in ("mn-bounds", "all"):
        taus = [0.0, 1.0, 5.0, 10.0, 50.0]
        reports.extend(mn_bound_monitors(n, taus, delta=float(p["delta"])))
    write_json(config.out_dir / "monitors.json",
               [r.to_jsonable() for r in reports])
    for r in reports:
        print(f"{r.quantity}: max_ratio = {format_float(r.max_ratio)}"
              + (f" ({r.note})" if r.note else ""))
    return ["monitors.json"]


_HANDLERS = {
    "dn-sweep": _cmd_dn_sweep,
    "nu": _cmd_nu,
    "jkl": _cmd_jkl,
    "ieps": _cmd_ieps,
    "mertens": _cmd_mertens,
    "sandwich": _cmd_sandwich,
    "typical": _cmd_typical,
    "contour": _cmd_contour,
    "perron": _cmd_perron,
    "tail-identity": _cmd_tail_identity,
    "zeros-import": _cmd_zeros_import,
    "monitors": _cmd_monitors,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdlab",
        description="Numerical laboratory for the Baez-Duarte criterion")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out-dir", default="runs", metavar="DIR")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--zero-table", default=None, metavar="FILE",
                        help=f"zero ordinate file (default ${_ZERO_TABLE_ENV})")

    sp = sub.add_parser("dn-sweep", help="d_N^2 and nu_{N,eps} for N = 1..n-max")
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--eps", type=float, default=0.3)
    common(sp)

    sp = sub.add_parser("nu", help="nu_{N,eps} by the gram or mellin_line route")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--route", choices=("gram", "mellin_line"), default="gram")
    sp.add_argument("--tau-max", type=float, default=1e3)
    common(sp)

    sp = sub.add_parser("jkl", help="critical-line integrals K, L (+residue), J")
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--tau-max", type=float, default=1e3)
    common(sp)

    sp = sub.add_parser("ieps", help="I_{N,eps} with the N^(3/4) split")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    common(sp)

    sp = sub.add_parser("mertens", help="Mobius sieve and Mertens prefix sums")
    sp.add_argument("--n-max", type=int, required=True)
    common(sp)

    sp = sub.add_parser("sandwich", help="Chebyshev sandwich and the constant A")
    sp.add_argument("--x", type=float, default=100.0)
    sp.add_argument("--samples", type=int, default=1000)
    common(sp)

    sp = sub.add_parser("typical", help="minimal typical V on a sample of [T, 2T]")
    sp.add_argument("--big-t", type=float, required=True, metavar="T")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--delta", type=float, default=0.1)
    common(sp)

    sp = sub.add_parser("contour", help="build and export the deformed contour")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kappa-override", type=int, default=None)
    sp.add_argument("--delta", type=float, default=0.1)
    common(sp)

    sp = sub.add_parser("perron", help="Perron residual monitor at (N, tau)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tau", type=float, default=0.0)
    sp.add_argument("--kappa-override", type=int, default=None)
    sp.add_argument("--delta", type=float, default=0.1)
    common(sp)

    sp = sub.add_parser("tail-identity",
                        help="exact Stieltjes check of the 1/zeta tail identity")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--tau", type=float, default=0.0)
    sp.add_argument("--t-max", type=int, required=True)
    common(sp)

    sp = sub.add_parser("zeros-import", help="validate and summarize a zero table")
    common(sp)

    sp = sub.add_parser("monitors", help="ratio monitors for the << bounds")
    sp.add_argument("--which", default="all",
                    choices=("quotient", "mean-value", "gg", "mn-bounds", "all"))
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--t", type=float, default=1e4)
    sp.add_argument("--h", type=float, default=1.0)
    sp.add_argument("--delta", type=float, default=0.1)
    common(sp)

    return parser


def _config_from_args(args) -> RunConfig:
    reserved = {"command", "out_dir", "seed", "zero_table"}
    params = {k: v for k, v in vars(args).items() if k not in reserved}
    return RunConfig(command=args.command, params=params,
                     out_dir=Path(args.out_dir), seed=args.seed,
                     zero_table=_resolve_zero_table(args))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _config_from_args(args)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    try:
        outputs = _HANDLERS[config.command](config)
    except LabError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc),
                   "command": config.command}
        from .reports import dumps_deterministic
        sys.stdout.write(dumps_deterministic(payload))
        return 2
    _write_manifest(config, outputs)
    return 0


if __name__ == "__main__":
    sys.exit(main())
