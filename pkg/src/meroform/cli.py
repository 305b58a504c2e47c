"""Command-line entry point: ``meroform <verb> [options]``.

Numeric options resolve as: command-line flag, then MEROFORM_<NAME>
environment variable, then the built-in default.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

import mpmath

from . import report as rep
from .expansions import DEFAULT_CUTOFF, DEFAULT_PRECISION, formula_coefficients
from .numerics import InsufficientOrderError, PrecisionError
from .poincare import (IDENTITIES, SAMPLE_POINTS, LatticeSumConfig, NearPoleError,
                       identity_residual)
from .pole_family import (DEFAULT_POLE_CUTOFF, EllipticPointError, pole_family_coefficient,
                          pole_family_oracle)
from .qseries import canonical_target, oracle_coefficients

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3

VERBS = ("oracle", "compare", "convergence", "poincare-check", "pole-family")

# per-verb defaults; env vars override these, flags override env vars
DEFAULTS = {
    "oracle": dict(n_to=10),
    "compare": dict(n_to=10, cutoff=DEFAULT_CUTOFF, tolerance="1e-10"),
    "convergence": dict(n_to=None, cutoff=4096),
    "poincare-check": dict(box_bound=60, precision_bits=192, tolerance=None),
    "pole-family": dict(n_to=5, cutoff=DEFAULT_POLE_CUTOFF, tolerance="1e-10", tau0="2i"),
}
COMMON = dict(n_from=0, cutoff=DEFAULT_CUTOFF, precision_bits=DEFAULT_PRECISION, box_bound=60,
              tolerance="1e-10", format="json", out=None, route="recipe")
ENV_KEYS = ("cutoff", "precision_bits", "box_bound", "tolerance", "format")
IDENTITY_TOLERANCE = {"residue_H6": "1e-10", "zresidue_H6": "1e-10"}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="meroform",
                                description="Fourier coefficients of meromorphic modular forms")
    sub = p.add_subparsers(dest="command", required=True)
    for verb in VERBS:
        s = sub.add_parser(verb)
        s.add_argument("--target", help="named form, or identity name for poincare-check")
        s.add_argument("--n-from", type=int)
        s.add_argument("--n-to", type=int)
        s.add_argument("--cutoff", type=int, help="norm cutoff Lambda (ladder top for convergence)")
        s.add_argument("--precision-bits", type=int)
        s.add_argument("--box-bound", type=int)
        s.add_argument("--tolerance")
        s.add_argument("--format", choices=("json", "csv", "text"))
        s.add_argument("--out")
        if verb in ("compare", "convergence"):
            s.add_argument("--route", choices=("recipe", "bn2"))
        if verb == "pole-family":
            s.add_argument("--tau0", help="'2i', 'i', 'rho' or 're,im' with rational parts")
        if verb == "poincare-check":
            s.add_argument("--samples",
                           help="';'-separated 'Z:z' pairs, each point as 're,im'")
    return p


def resolve(args, environ=None) -> dict:
    """Merge flags, MEROFORM_* variables and defaults into a run configuration."""
    environ = os.environ if environ is None else environ
    cfg = dict(COMMON)
    cfg.update({k: v for k, v in DEFAULTS[args.command].items()})
    for key in ENV_KEYS:
        val = environ.get(f"MEROFORM_{key.upper()}")
        if val not in (None, ""):
            cfg[key] = val if key in ("tolerance", "format") else _int(val, key)
    for key, val in vars(args).items():
        if val is not None and key != "command":
            cfg[key] = val
    cfg["command"] = args.command
    if cfg["format"] not in ("json", "csv", "text"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    if cfg.get("n_to") is None:
        cfg["n_to"] = cfg["n_from"]
    for key in ("cutoff", "precision_bits", "box_bound"):
        if cfg[key] <= 0:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    if cfg["n_from"] < 0 or cfg["n_to"] < cfg["n_from"]:
        raise UsageError("n range must satisfy 0 <= n-from <= n-to")
    if cfg["box_bound"] < 2:
        raise UsageError("--box-bound must be at least 2")
    if cfg["tolerance"] is not None:
        try:
            if not mpmath.mpf(cfg["tolerance"]) > 0:
                raise ValueError
        except (ValueError, TypeError):
            raise UsageError(f"--tolerance must be a positive number, got {cfg['tolerance']!r}") from None
    return cfg


def _int(text, key):
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"MEROFORM_{key.upper()} must be an integer, got {text!r}") from None


def _need_target(cfg) -> str:
    if not cfg.get("target"):
        raise UsageError("--target is required")
    try:
        return canonical_target(cfg["target"])
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _ns(cfg):
    return list(range(cfg["n_from"], cfg["n_to"] + 1))


# --- verbs -----------------------------------------------------------------------------

def cmd_oracle(cfg):
    target = _need_target(cfg)
    series = oracle_coefficients(target, cfg["n_to"])
    recs = [{"n": n, "value": rep.dec(series[n], 0)} for n in _ns(cfg)]
    md = {"target": target, "n_from": cfg["n_from"], "n_to": cfg["n_to"],
          "precision_bits": cfg["precision_bits"]}
    return md, recs, True


def cmd_compare(cfg):
    target = _need_target(cfg)
    tol = mpmath.mpf(cfg["tolerance"])
    series = oracle_coefficients(target, cfg["n_to"])
    values = formula_coefficients(target, _ns(cfg), cfg["cutoff"], cfg["precision_bits"],
                                  route=cfg["route"])
    recs = [rep.compare_record(v.n, series[v.n], v.value, v.tail_estimate,
                               cfg["precision_bits"], tol) for v in values]
    md = {"target": target, "n_from": cfg["n_from"], "n_to": cfg["n_to"],
          "norm_cutoff": cfg["cutoff"], "precision_bits": cfg["precision_bits"],
          "decimal_digits": rep.decimal_digits(cfg["precision_bits"]),
          "tolerance": cfg["tolerance"], "route": cfg["route"]}
    return md, recs, all(r["pass"] for r in recs)


def ladder(top: int):
    """1, 2, 4, ... up to top, with top itself appended when it is not a power of two."""
    out, lam = [], 1
    while lam <= top:
        out.append(lam)
        lam *= 2
    if out[-1] != top:
        out.append(top)
    return out


def cmd_convergence(cfg):
    target = _need_target(cfg)
    series = oracle_coefficients(target, cfg["n_to"])
    recs = []
    for lam in ladder(cfg["cutoff"]):
        for v in formula_coefficients(target, _ns(cfg), lam, cfg["precision_bits"],
                                      route=cfg["route"]):
            r = rep.compare_record(v.n, series[v.n], v.value, v.tail_estimate,
                                   cfg["precision_bits"])
            r = {"n": v.n, "norm_cutoff": lam, **{k: r[k] for k in r if k != "n"}}
            r["prefix_digits"] = rep.prefix_digits(series[v.n], v.value)
            recs.append(r)
    md = {"target": target, "n_from": cfg["n_from"], "n_to": cfg["n_to"],
          "norm_cutoff": cfg["cutoff"], "precision_bits": cfg["precision_bits"],
          "decimal_digits": rep.decimal_digits(cfg["precision_bits"]), "route": cfg["route"]}
    return md, recs, True


def parse_samples(text):
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            Z, z = chunk.split(":")
        except ValueError:
            raise UsageError(f"sample {chunk!r} is not of the form 'Zre,Zim:zre,zim'") from None
        pairs.append((Z.strip(), z.strip()))
    if not pairs:
        raise UsageError("empty sample list")
    return pairs


def cmd_poincare_check(cfg):
    name = cfg.get("target")
    if not name:
        raise UsageError(f"--target is required; catalog: {', '.join(sorted(IDENTITIES))}")
    if name not in IDENTITIES:
        raise UsageError(f"unknown identity {name!r}; catalog: {', '.join(sorted(IDENTITIES))}")
    samples = SAMPLE_POINTS if cfg.get("samples") is None else parse_samples(cfg["samples"])
    tol_text = cfg["tolerance"] or IDENTITY_TOLERANCE.get(name, "1e-20")
    tol = mpmath.mpf(tol_text)
    lcfg = LatticeSumConfig(cfg["box_bound"], cfg["precision_bits"])
    try:
        res = identity_residual(name, samples, lcfg)
    except ValueError as exc:
        if isinstance(exc, NearPoleError):
            raise
        raise UsageError(str(exc)) from None
    recs = [{"sample": i, "Z": Z, "z": z, "residual": rep.short(r), "pass": bool(r < tol)}
            for i, ((Z, z), r) in enumerate(zip(samples, res))]
    md = {"identity": name, "box_bound": cfg["box_bound"],
          "precision_bits": cfg["precision_bits"], "tolerance": tol_text}
    return md, recs, all(r["pass"] for r in recs)


def cmd_pole_family(cfg):
    tau0 = cfg["tau0"]
    tol = mpmath.mpf(cfg["tolerance"])
    try:
        oracle = pole_family_oracle(tau0, cfg["n_to"], cfg["precision_bits"])
    except EllipticPointError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    recs = []
    for n in _ns(cfg):
        v = pole_family_coefficient(tau0, n, cfg["cutoff"], cfg["precision_bits"])
        recs.append(rep.compare_record(n, oracle[n], v.value, v.tail_estimate,
                                       cfg["precision_bits"], tol))
    md = {"tau0": str(tau0), "n_from": cfg["n_from"], "n_to": cfg["n_to"],
          "norm_cutoff": cfg["cutoff"], "precision_bits": cfg["precision_bits"],
          "decimal_digits": rep.decimal_digits(cfg["precision_bits"]),
          "tolerance": cfg["tolerance"]}
    return md, recs, all(r["pass"] for r in recs)


HANDLERS = {
    "oracle": cmd_oracle,
    "compare": cmd_compare,
    "convergence": cmd_convergence,
    "poincare-check": cmd_poincare_check,
    "pole-family": cmd_pole_family,
}

REFUSALS = (EllipticPointError, NearPoleError, PrecisionError, InsufficientOrderError)


def run(argv=None, environ=None):
    """Execute one command; returns (exit_code, report dict, format, output path)."""
    parser = _parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    fmt, out = "json", None
    try:
        cfg = resolve(args, environ)
        fmt, out = cfg["format"], cfg.get("out")
        md, recs, ok = HANDLERS[cfg["command"]](cfg)
        code = EXIT_OK if ok else EXIT_TOLERANCE
        status = "ok" if ok else "tolerance_failure"
        error = None
    except UsageError as exc:
        md, recs, code, status = {"precision_bits": args.precision_bits or DEFAULT_PRECISION}, [], EXIT_USAGE, "usage_error"
        error = {"kind": "usage", "message": str(exc)}
    except REFUSALS as exc:
        md, recs, code, status = {"precision_bits": args.precision_bits or DEFAULT_PRECISION}, [], EXIT_REFUSED, "domain_refusal"
        error = {"kind": type(exc).__name__, "message": str(exc)}
    md["wall_time"] = round(time.perf_counter() - start, 3)
    return code, rep.envelope(args.command, md, recs, status, error), fmt, out


def main(argv=None) -> int:
    code, report, fmt, out = run(argv)
    text = rep.render(report, fmt)
    if "error" in report:
        print(f"meroform: {report['error']['message']}", file=sys.stderr)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
