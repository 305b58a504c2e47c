"""Report records, decimal serialization, and the JSON schema shipped with the tool."""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from importlib import resources

import mpmath

SCHEMA_VERSION = "1.0.0"
SCHEMA_FILE = "report.schema.json"


def load_schema() -> dict:
    return json.loads(resources.files("meroform").joinpath(SCHEMA_FILE).read_text())


def decimal_digits(prec_bits: int) -> int:
    return max(1, math.floor(prec_bits * math.log10(2)))


def dec(x, digits: int) -> str:
    """Decimal string for an exact rational or an mpf; never a binary float."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return mpmath.nstr(mpmath.mpf(x), digits, min_fixed=-6, max_fixed=digits)


def short(x) -> str:
    return mpmath.nstr(mpmath.mpf(x), 6)


def digits_matched(rel_err, prec_bits: int) -> int:
    """floor(-log10 rel_err); a zero error is capped at the working-precision digit count."""
    if rel_err == 0:
        return decimal_digits(prec_bits)
    with mpmath.workprec(128):
        return int(mpmath.floor(-mpmath.log10(rel_err)))


def prefix_digits(exact: Fraction, approx) -> int:
    """Count of identical leading decimal digits of an exact integer and a rounded approximation."""
    if exact.denominator != 1 or exact == 0:
        return 0
    s = str(abs(exact.numerator))
    with mpmath.workprec(4 * len(s) + 64):
        a = int(mpmath.nint(mpmath.mpc(approx).real))
    if (exact < 0) != (a < 0):
        return 0
    t = str(abs(a))
    if len(t) != len(s):
        return 0
    k = 0
    for u, v in zip(s, t):
        if u != v:
            break
        k += 1
    return k


def compare_record(n: int, oracle, formula, tail, prec_bits: int, tolerance=None) -> dict:
    """Per-n comparison record.  A zero oracle switches rel_err to the absolute error."""
    digits = decimal_digits(prec_bits)
    with mpmath.workprec(prec_bits + 32):
        o = oracle if not isinstance(oracle, Fraction) else (
            mpmath.mpf(oracle.numerator) / oracle.denominator)
        o = mpmath.mpc(o)
        f = mpmath.mpc(formula)
        abs_err = abs(f - o)
        rel_err = abs_err / abs(o) if o != 0 else abs_err
        rec = {
            "n": n,
            "oracle": dec(oracle, digits) if isinstance(oracle, Fraction) else dec(o.real, digits),
            "formula": dec(f.real, digits),
            "abs_err": short(abs_err),
            "rel_err": short(rel_err),
            "tail_estimate": short(tail),
            "digits_matched": digits_matched(rel_err, prec_bits),
        }
        if o.imag != 0 or f.imag != 0:
            rec["oracle_imag"] = dec(o.imag, digits)
            rec["formula_imag"] = dec(f.imag, digits)
        if tolerance is not None:
            rec["pass"] = bool(rel_err < tolerance)
        return rec


def envelope(command: str, metadata: dict, records: list, status: str = "ok",
             error: dict | None = None) -> dict:
    from . import __version__
    out = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "meroform", "version": __version__},
        "command": command,
        "status": status,
        "metadata": metadata,
        "records": records,
    }
    if error:
        out["error"] = error
    return out


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return _csv(report)
    if fmt == "text":
        return _text(report)
    raise ValueError(f"unknown format {fmt!r}")


def _columns(records):
    cols = []
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def _csv(report: dict) -> str:
    buf = io.StringIO()
    recs = report["records"]
    if not recs:
        return ""
    w = csv.DictWriter(buf, fieldnames=_columns(recs), lineterminator="\n")
    w.writeheader()
    for r in recs:
        w.writerow(r)
    return buf.getvalue()


def _text(report: dict) -> str:
    md = report["metadata"]
    lines = [f"# meroform {report['command']}  status={report['status']}"]
    lines += [f"# {k}: {v}" for k, v in md.items() if k != "wall_time"]
    if "error" in report:
        lines.append(f"error ({report['error']['kind']}): {report['error']['message']}")
    recs = report["records"]
    if recs:
        cols = _columns(recs)
        rows = [[str(r.get(c, "")) for c in cols] for r in recs]
        widths = [max(len(c), *(len(row[i]) for row in rows)) for i, c in enumerate(cols)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
        for row in rows:
            lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines) + "\n"
