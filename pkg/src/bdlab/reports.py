"""Monitor reports and deterministic CSV/JSON serialization.

Asymptotic << bounds from the theory cannot be asserted numerically; they
are realized as finite-range ratio evidence.  A MonitorReport records, for
each grid point, the measured left side, the bound's right side, and their
ratio; empty applicability windows are reported as such (note field), never
skipped silently.

All floating-point output is printed with 17 significant digits so every
emitted file round-trips exactly and reruns are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class MonitorRecord:
    parameter: float
    lhs: float
    rhs: float
    ratio: float


@dataclass(frozen=True)
class MonitorReport:
    quantity: str
    grid: tuple
    max_ratio: float
    min_ratio: float
    note: str = ""

    @staticmethod
    def from_points(quantity: str, points, note: str = "") -> "MonitorReport":
        """Build from (parameter, lhs, rhs) triples; ratios where rhs > 0."""
        grid = []
        ratios = []
        for parameter, lhs, rhs in points:
            ratio = lhs / rhs if rhs > 0 else math.inf
            if math.isfinite(ratio):
                ratios.append(ratio)
            grid.append(MonitorRecord(parameter=float(parameter),
                                      lhs=float(lhs), rhs=float(rhs),
                                      ratio=float(ratio)))
        return MonitorReport(quantity=quantity, grid=tuple(grid),
                             max_ratio=max(ratios) if ratios else math.nan,
                             min_ratio=min(ratios) if ratios else math.nan,
                             note=note)

    def to_jsonable(self) -> dict:
        return {
            "quantity": self.quantity,
            "note": self.note,
            "max_ratio": self.max_ratio,
            "min_ratio": self.min_ratio,
            "grid": [{"parameter": r.parameter, "lhs": r.lhs,
                      "rhs": r.rhs, "ratio": r.ratio} for r in self.grid],
        }


def format_float(x) -> str:
    """17-significant-digit rendering used by every emitter."""
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return format(x, ".17g")
    return format(float(x), ".17g")


def _json_render(obj, out: list, indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            out.append(f'{pad}  "{k}": ')
            _json_render(obj[k], out, indent + 1)
            out.append(",\n" if i + 1 < len(keys) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad + "  ")
            _json_render(v, out, indent + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        out.append(f'"{escaped}"')
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_deterministic(obj) -> str:
    """JSON with sorted keys and 17-digit floats; byte-stable across runs."""
    out: list = []
    _json_render(obj, out, 0)
    out.append("\n")
    return "".join(out)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_deterministic(obj))


def write_csv(path, header: str, rows) -> None:
    """CSV with a fixed header; floats at 17 significant digits."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            cells = [str(c) if isinstance(c, int) else format_float(c)
                     for c in row]
            fh.write(",".join(cells) + "\n")
