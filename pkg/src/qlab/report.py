"""Byte-deterministic report emission.

JSON is written by a small recursive serializer so float formatting stays
fixed (17 significant digits) and keys keep insertion order; the stdlib
encoder's shortest-roundtrip floats would also be deterministic, but
pinning the format makes the contract explicit.  Complex numbers are
emitted as two-element [re, im] arrays.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    text = format(x, ".17g")
    # bare exponents like '1e-05' are valid JSON; '.17g' never yields them
    # without a mantissa, so the string is a valid JSON number as-is
    return text


def dumps(obj) -> str:
    """Serialize nested plain data deterministically."""
    if isinstance(obj, dict):
        items = ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{format_float(obj.real)},{format_float(obj.imag)}]"
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class ReportBundle:
    """Everything one experiment run produces."""

    report: dict
    cyclicity_rows: list[tuple[str, int, float]] | None = None
    profile_rows: list[tuple[int, float, float, float]] | None = None
    consistent: bool = True


def _write_text(path: Path, text: str) -> None:
    path.write_bytes(text.encode("utf-8"))


def emit_report(bundle: ReportBundle, out_dir) -> list[Path]:
    """Write report.json plus any CSV tables; creates the directory.

    CSV site and mode labels are 1-based for human readers; the JSON
    report keeps 0-based indices throughout.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    report_path = out / "report.json"
    _write_text(report_path, dumps(bundle.report) + "\n")
    written.append(report_path)

    if bundle.cyclicity_rows is not None:
        lines = ["basis_label,max_degree,residual"]
        for label, degree, residual in bundle.cyclicity_rows:
            lines.append(f'"{label}",{degree},{format_float(residual)}')
        path = out / "cyclicity.csv"
        _write_text(path, "\n".join(lines) + "\n")
        written.append(path)

    if bundle.profile_rows is not None:
        lines = ["site,vacuum_variance,post_variance,relative_deviation"]
        for site, vac_var, post_var, rel in bundle.profile_rows:
            lines.append(
                f"{site + 1},{format_float(vac_var)},"
                f"{format_float(post_var)},{format_float(rel)}"
            )
        path = out / "profile.csv"
        _write_text(path, "\n".join(lines) + "\n")
        written.append(path)
    return written
