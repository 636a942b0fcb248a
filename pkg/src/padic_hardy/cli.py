"""Command-line front end.

Exit codes: 0 success, 2 configuration or validation error, 3 divergence,
4 tolerance failure.  Records are JSON with a fixed field order and floats
rounded to 9 significant digits, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .config import (ConfigError, RunConfig, k0_scan, load_config, preset_dir, require,
                     resolve_preset, shell_range)
from .errors import DivergenceError, InconclusiveSupError, PadicHardyError, TruncationError
from .hardy import (apply_dual_hardy, apply_hardy, char_const, mc_char_const, slot_exponents)
from .herz import HerzParams, MorreyHerzParams, herz_norm_estimate, lq_norm_estimate, morrey_herz_sup
from .sharpness import SharpnessConfig, ratio_mh, sharpness_sweep, validate_balance

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENT, EXIT_TOLERANCE = 0, 2, 3, 4
SIG_DIGITS = 9


def _round(obj: Any) -> Any:
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return str(obj)
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def render(record: dict, fmt: str) -> str:
    record = _round(record)
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    buf = io.StringIO()
    rows = record.get("rows")
    if isinstance(rows, list) and rows and isinstance(rows[0], dict):
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        flat = {k: (json.dumps(v) if isinstance(v, (dict, list)) else v)
                for k, v in record.items()}
        writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
    return buf.getvalue()


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    dest = Path(out)
    dest.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dest.parent, prefix=f".{dest.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, dest)


def _check_balance(cfg: RunConfig) -> None:
    if cfg.params is None:
        return
    report = validate_balance(cfg.params)
    if not report.ok:
        raise ConfigError("balance constraints violated: " + "; ".join(report.violations))


def _divergent_record(base: dict, exc: DivergenceError) -> dict:
    return {**base, "value": "divergent", "where": exc.where, "message": str(exc)}


# commands ----------------------------------------------------------------------------

def cmd_constant(cfg: RunConfig, args=None) -> tuple[int, dict]:
    kind = cfg.section("constant").get("kind", "herz")
    params, psi = require(cfg, "params"), require(cfg, "weight")
    base = {"record": "constant", "preset": cfg.name, "constant": kind}
    try:
        res = char_const(kind, psi, params, cfg.tol)
    except DivergenceError as exc:
        return EXIT_DIVERGENT, {**_divergent_record(base, exc), "slot_factors": None,
                                "truncation_bound": None}
    return EXIT_OK, {**base, "value": res.value,
                     "slot_factors": None if res.slot_factors is None else list(res.slot_factors),
                     "truncation_bound": res.bound}


def cmd_apply(cfg: RunConfig, args=None) -> tuple[int, dict]:
    sec = cfg.section("apply")
    op = sec.get("operator", "forward")
    if op not in ("forward", "dual"):
        raise ConfigError(f"apply.operator: expected 'forward' or 'dual', got '{op}'")
    psi = require(cfg, "weight")
    if len(cfg.functions) != psi.m:
        raise ConfigError(f"function: the weight is {psi.m}-linear but "
                          f"{len(cfg.functions)} [[function]] entries are given")
    shells = shell_range(cfg)
    fn = apply_dual_hardy if op == "dual" else apply_hardy
    res = fn(cfg.functions, psi, cfg.ctx, shells=shells, tol=cfg.tol)
    rows = [{"k": k, "value": "divergent" if v is None else v, "bound": None if v is None else b}
            for k, v, b in zip(res.shells, res.shell_values, res.bounds)]
    record = {"record": "apply", "preset": cfg.name, "operator": op, "shells": rows,
              "divergent_shells": list(res.divergent),
              "function": None if res.values is None else res.values.to_dict()}
    code = EXIT_DIVERGENT if shells and len(res.divergent) == len(shells) else EXIT_OK
    return code, record


def _norm_params(sec: dict) -> tuple[str, Any]:
    kind = sec.get("kind", "herz")
    try:
        if kind == "lq":
            return kind, float(sec["q"])
        if kind == "herz":
            return kind, HerzParams(float(sec["alpha"]), float(sec["r"]), float(sec["q"]))
        if kind == "morrey-herz":
            return kind, MorreyHerzParams(float(sec["alpha"]), float(sec["r"]), float(sec["q"]),
                                          float(sec["lambda"]))
    except KeyError as exc:
        raise ConfigError(f"norm.{exc.args[0]}: required field is missing") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"norm: {exc}") from exc
    raise ConfigError(f"norm.kind: expected lq, herz or morrey-herz, got '{kind}'")


def cmd_norm(cfg: RunConfig, args=None) -> tuple[int, dict]:
    sec = cfg.section("norm")
    kind, np_ = _norm_params(sec)
    idx = sec.get("function", 0)
    if not isinstance(idx, int) or not 0 <= idx < len(cfg.functions):
        raise ConfigError(f"norm.function: no [[function]] entry with index {idx}")
    f = cfg.functions[idx]
    base = {"record": "norm", "preset": cfg.name, "norm": kind}
    try:
        if kind == "lq":
            est = lq_norm_estimate(f, np_, cfg.tol)
            return EXIT_OK, {**base, "value": est.value, "error": est.error, "attained": None,
                             "k0": None}
        if kind == "herz":
            est = herz_norm_estimate(f, np_, cfg.tol)
            return EXIT_OK, {**base, "value": est.value, "error": est.error, "attained": None,
                             "k0": None}
        sup = morrey_herz_sup(f, np_, cfg.tol, k0_scan(cfg))
    except DivergenceError as exc:
        return EXIT_DIVERGENT, {**_divergent_record(base, exc), "error": None, "attained": None,
                                "k0": None}
    except InconclusiveSupError as exc:
        return EXIT_TOLERANCE, {**base, "value": None, "error": None, "attained": "inconclusive",
                                "k0": None, "message": str(exc)}
    return EXIT_OK, {**base, "value": sup.value, "error": sup.error, "attained": sup.attained,
                     "k0": sup.k0}


def cmd_sharpness(cfg: RunConfig, args=None) -> tuple[int, dict]:
    sec = cfg.section("sharpness")
    params, psi = require(cfg, "params"), require(cfg, "weight")
    if not params.symmetric_split:
        raise ConfigError(
            "sharpness refused: the converse hypothesis needs the symmetric split "
            "q_i = m*q and r_i = m*r for every slot (and lambda_i = lambda/m)")
    op = sec.get("operator", "forward")
    if op not in ("forward", "dual"):
        raise ConfigError(f"sharpness.operator: expected 'forward' or 'dual', got '{op}'")
    grid = sec.get("epsilons")
    if grid is None and "levels" in sec:
        grid = [float(cfg.ctx.p) ** -l for l in range(int(sec["levels"]) + 1)]
    try:
        scfg = SharpnessConfig(params, psi, None if grid is None else tuple(grid),
                               float(sec.get("upper_rtol", 1e-9)),
                               float(sec.get("convergence_rtol", 2e-2)), op == "dual", cfg.tol)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sharpness: {exc}") from exc
    record: dict = {"record": "sharpness", "preset": cfg.name, "operator": op}
    passed = True
    try:
        if sec.get("herz", True):
            rep = sharpness_sweep(scfg)
            record.update({"constant_kind": scfg.herz_kind, "constant": rep.constant,
                           "rows": [r.as_dict() for r in rep.rows],
                           "upper_ok": rep.upper_ok, "converged": rep.converged})
            passed &= rep.passed
        if sec.get("mh", params.lams is not None):
            ratio, tag = ratio_mh(scfg)
            const = char_const(scfg.mh_kind, psi, params, cfg.tol).value
            rel = abs(ratio - const) / const
            ok = rel <= float(sec.get("mh_rtol", 1e-9))
            record["mh"] = {"constant_kind": scfg.mh_kind, "case": tag, "ratio": ratio,
                            "constant": const, "relative_error": rel, "passed": ok}
            passed &= ok
    except DivergenceError as exc:
        return EXIT_DIVERGENT, {**record, "passed": False, "where": exc.where,
                                "message": str(exc)}
    record["passed"] = passed
    return (EXIT_OK if passed else EXIT_TOLERANCE), record


def cmd_mc_check(cfg: RunConfig, args=None) -> tuple[int, dict]:
    sec = cfg.section("mc")
    params, psi = require(cfg, "params"), require(cfg, "weight")
    kind = sec.get("kind", cfg.section("constant").get("kind", "herz"))
    samples = int(sec.get("samples", 100_000))
    seed = args.seed if args is not None and args.seed is not None else sec.get("seed", cfg.seed)
    limit = float(sec.get("fail_sigmas", 4.0))
    if psi.evaluator is None:
        raise ConfigError("weight: mc-check needs a weight with a pointwise evaluator")
    if samples < 1000:
        raise ConfigError("mc.samples: at least 1000 samples are required")
    base = {"record": "mc-check", "preset": cfg.name, "constant": kind}
    try:
        ref = char_const(kind, psi, params, cfg.tol).value
        res = mc_char_const(psi, slot_exponents(kind, params), cfg.ctx, samples, int(seed))
    except DivergenceError as exc:
        return EXIT_DIVERGENT, _divergent_record(base, exc)
    diff = abs(res.estimate - ref)
    sigmas = diff / res.stderr if res.stderr > 0 else (0.0 if diff == 0 else math.inf)
    ok = sigmas <= limit
    record = {**base, "estimate": res.estimate, "stderr": res.stderr,
              "statistical_stderr": res.statistical_stderr, "tail_bound": res.tail_bound,
              "reference": ref, "sigmas": sigmas, "samples": res.samples, "seed": int(seed),
              "passed": ok}
    return (EXIT_OK if ok else EXIT_TOLERANCE), record


COMMANDS: dict[str, Callable[[RunConfig, Any], tuple[int, dict]]] = {
    "constant": cmd_constant, "apply": cmd_apply, "norm": cmd_norm,
    "sharpness": cmd_sharpness, "mc-check": cmd_mc_check,
}


def run_command(name: str, cfg: RunConfig, args=None) -> tuple[int, dict]:
    """Run one subcommand; configuration problems come back as exit 2 records."""
    try:
        _check_balance(cfg)
        return COMMANDS[name](cfg, args)
    except ConfigError as exc:
        return EXIT_CONFIG, {"record": "error", "preset": cfg.name, "command": name,
                             "message": str(exc)}
    except (TruncationError, InconclusiveSupError) as exc:
        return EXIT_TOLERANCE, {"record": "error", "preset": cfg.name, "command": name,
                                "message": str(exc)}


# verify-all ----------------------------------------------------------------------------

def _close(value, expected, rtol) -> bool:
    return isinstance(value, (int, float)) and abs(value - expected) <= rtol * max(abs(expected), 1e-300)


def _verify_check(cfg: RunConfig, check: str, want_cfg: dict) -> tuple[int, str]:
    if check not in COMMANDS:
        return EXIT_CONFIG, f"unknown check '{check}'"
    code, rec = run_command(check, cfg)
    expect = want_cfg.get("expect", "value")
    rtol = float(want_cfg.get("rtol", 1e-9))
    if expect == "divergent":
        if code == EXIT_DIVERGENT:
            return EXIT_OK, "divergence signalled as expected"
        return (code or EXIT_TOLERANCE), f"expected a divergence signal, got exit {code}"
    if code != EXIT_OK:
        return code, rec.get("message", f"exit {code}")
    if check == "constant" and "expected" in want_cfg:
        if not _close(rec["value"], float(want_cfg["expected"]), rtol):
            return EXIT_TOLERANCE, (f"constant {rec['value']!r} differs from expected "
                                    f"{want_cfg['expected']!r} (rtol {rtol:g})")
    if check == "norm" and "expected" in want_cfg:
        if not _close(rec["value"], float(want_cfg["expected"]), rtol):
            return EXIT_TOLERANCE, f"norm {rec['value']!r} differs from {want_cfg['expected']!r}"
        if "attained" in want_cfg and rec["attained"] != want_cfg["attained"]:
            return EXIT_TOLERANCE, f"attained '{rec['attained']}' != '{want_cfg['attained']}'"
    if check == "apply" and "expected_values" in want_cfg:
        got = [row["value"] for row in rec["shells"]]
        want = [float(v) for v in want_cfg["expected_values"]]
        if len(got) != len(want) or not all(_close(g, w, rtol) for g, w in zip(got, want)):
            return EXIT_TOLERANCE, f"shell values {got} differ from {want}"
    return EXIT_OK, "pass"


def verify_all(directory: Path) -> tuple[int, dict]:
    files = sorted(directory.glob("*.toml")) if directory.is_dir() else []
    if not files:
        return EXIT_CONFIG, {"record": "verify-all", "directory": str(directory),
                             "message": "no preset files (*.toml) found", "presets": [],
                             "criteria": {}, "passed": False}
    presets, criteria, codes = [], {}, []
    for path in files:
        try:
            cfg = load_config(path)
        except ConfigError as exc:
            presets.append({"name": path.stem, "criteria": [], "status": "error",
                            "checks": [{"check": "load", "status": "error", "code": EXIT_CONFIG,
                                        "detail": str(exc)}]})
            codes.append(EXIT_CONFIG)
            continue
        want_cfg = cfg.section("verify")
        crit = [int(c) for c in want_cfg.get("criteria", [])]
        checks = []
        ok = True
        for check in want_cfg.get("checks", []):
            code, detail = _verify_check(cfg, check, want_cfg)
            checks.append({"check": check, "status": "pass" if code == EXIT_OK else "fail",
                           "code": code, "detail": detail})
            if code != EXIT_OK:
                ok = False
                codes.append(code)
        presets.append({"name": cfg.name, "criteria": crit, "status": "pass" if ok else "fail",
                        "checks": checks})
        for c in crit:
            criteria[str(c)] = "pass" if ok and criteria.get(str(c), "pass") == "pass" else "fail"
    criteria = dict(sorted(criteria.items(), key=lambda kv: int(kv[0])))
    # configuration errors dominate tolerance failures, which dominate divergences
    code = next((c for c in (EXIT_CONFIG, EXIT_TOLERANCE, EXIT_DIVERGENT) if c in codes), EXIT_OK)
    failed = sorted({c for p in presets if p["status"] != "pass" for c in p["criteria"]})
    return code, {"record": "verify-all", "directory": str(directory), "presets": presets,
                  "criteria": criteria, "failed_criteria": failed, "passed": code == EXIT_OK}


# argument parsing ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--preset", metavar="NAME",
                        help="preset name looked up in $PADIC_HARDY_PRESETS or the shipped presets")
    common.add_argument("--out", metavar="PATH", help="write the record here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None, help="overrides the file's seed")

    parser = argparse.ArgumentParser(
        prog="padic-hardy",
        description="Norms, operators and sharp constants for multilinear p-adic Hardy operators.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "constant": "characteristic constant (herz | herz-dual | mh | mh-dual)",
        "apply": "apply the forward or dual operator on a shell range",
        "norm": "Lebesgue, Herz or Morrey-Herz norm of a radial function",
        "sharpness": "extremal-family ratio sweep against the constant",
        "mc-check": "Monte-Carlo cross-check of a constant",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    va = sub.add_parser("verify-all", parents=[common], help="run every preset in a directory")
    va.add_argument("directory", nargs="?", default=None,
                    help="preset directory (default: $PADIC_HARDY_PRESETS or the shipped presets)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    if args.command == "verify-all":
        directory = Path(args.directory) if args.directory else preset_dir()
        code, record = verify_all(directory)
    else:
        try:
            if bool(args.config) == bool(args.preset):
                raise ConfigError("give exactly one of --config PATH or --preset NAME")
            cfg = load_config(args.config or resolve_preset(args.preset))
            if args.seed is not None:
                cfg.seed = args.seed
        except ConfigError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            code, record = run_command(args.command, cfg, args)
        except PadicHardyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    if record.get("record") == "error":
        print(f"error: {record['message']}", file=sys.stderr)
    _write(render(record, args.format), args.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
