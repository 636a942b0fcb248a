"""TOML run configurations and shipped presets.

Precedence: command-line flags override values from the file, which override
the defaults defined here.  Every parse problem raises :class:`ConfigError`
naming the offending field (and the line for TOML syntax errors).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import PadicHardyError
from .hardy import CONSTANT_KINDS, MultilinearParams, ShellWeight
from .herz import DEFAULT_K0_SCAN
from .padic import PadicContext
from .radial import RadialFunction, Segment, from_table, indicator, power_law
from .series import Term, ToleranceSpec

PRESET_ENV = "PADIC_HARDY_PRESETS"
_MISSING = object()


class ConfigError(PadicHardyError, ValueError):
    """The configuration file is malformed or inconsistent."""


def builtin_preset_dir() -> Path:
    return Path(str(resources.files("padic_hardy") / "presets"))


def preset_dir() -> Path:
    env = os.environ.get(PRESET_ENV)
    return Path(env) if env else builtin_preset_dir()


def resolve_preset(name: str) -> Path:
    base = preset_dir()
    for cand in (base / name, base / f"{name}.toml"):
        if cand.is_file():
            return cand
    raise ConfigError(f"preset '{name}' not found in {base}")


def _get(table: Mapping[str, Any], key: str, kind, where: str, default=_MISSING):
    if key not in table:
        if default is _MISSING:
            raise ConfigError(f"{where}.{key}: required field is missing")
        return default
    val = table[key]
    if kind is float and isinstance(val, int) and not isinstance(val, bool):
        val = float(val)
    if kind is not None and not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ConfigError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}, "
                          f"got {type(val).__name__}")
    return val


def _floats(table, key, where, default=_MISSING):
    val = _get(table, key, list, where, default)
    if val is None:
        return None
    out = []
    for i, v in enumerate(val):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{where}.{key}[{i}]: expected a number")
        out.append(float(v))
    return tuple(out)


def _section(data, key, required=False) -> dict:
    val = data.get(key)
    if val is None:
        if required:
            raise ConfigError(f"[{key}]: required section is missing")
        return {}
    if not isinstance(val, dict):
        raise ConfigError(f"{key}: expected a table")
    return val


@dataclass
class RunConfig:
    name: str
    source: str
    ctx: PadicContext
    params: MultilinearParams | None
    psi: ShellWeight | None
    functions: list[RadialFunction]
    sections: dict[str, dict] = field(default_factory=dict)
    tol: ToleranceSpec = field(default_factory=ToleranceSpec)
    seed: int = 0

    def section(self, name: str) -> dict:
        return self.sections.get(name, {})


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data, source=str(path))


def parse_config(data: Mapping[str, Any], source: str = "<memory>") -> RunConfig:
    name = _get(data, "name", str, "", Path(source).stem)
    ctx_t = _section(data, "context", required=True)
    try:
        ctx = PadicContext(_get(ctx_t, "p", int, "context"), _get(ctx_t, "n", int, "context", 1))
    except ValueError as exc:
        raise ConfigError(f"context: {exc}") from exc
    params = _parse_params(ctx, _section(data, "exponents"))
    psi = _parse_weight(ctx, _section(data, "weight"))
    if psi is not None and params is not None and psi.m != params.m:
        raise ConfigError(f"weight: {psi.m}-linear weight but {params.m} exponent slots")
    funcs_raw = data.get("function", [])
    if not isinstance(funcs_raw, list):
        raise ConfigError("function: expected an array of tables ([[function]])")
    functions = [_parse_function(ctx, f, f"function[{i}]") for i, f in enumerate(funcs_raw)]
    tol_t = _section(data, "tolerance")
    tol = ToleranceSpec(_get(tol_t, "rtol", float, "tolerance", 1e-14),
                        _get(tol_t, "max_terms", int, "tolerance", 100_000))
    seed = _get(data, "seed", int, "", 0)
    known = {"name", "description", "context", "exponents", "weight", "function", "tolerance",
             "seed", "constant", "apply", "norm", "sharpness", "mc", "verify"}
    extra = sorted(set(data) - known)
    if extra:
        raise ConfigError(f"unknown top-level key(s): {', '.join(extra)}")
    sections = {k: _section(data, k) for k in ("constant", "apply", "norm", "sharpness", "mc",
                                               "verify")}
    kind = sections["constant"].get("kind")
    if kind is not None and kind not in CONSTANT_KINDS:
        raise ConfigError(f"constant.kind: '{kind}' is not one of {', '.join(CONSTANT_KINDS)}")
    return RunConfig(name, source, ctx, params, psi, functions, sections, tol, seed)


def _parse_params(ctx: PadicContext, t: dict) -> MultilinearParams | None:
    if not t:
        return None
    w = "exponents"
    alphas = _floats(t, "alpha", w)
    rs = _floats(t, "r", w)
    qs = _floats(t, "q", w)
    lams = _floats(t, "lambda", w, None)
    agg = _section(t, "aggregate")
    kw = {}
    for key, attr in (("alpha", "alpha"), ("r", "r"), ("q", "q"), ("lambda", "lam")):
        if key in agg:
            kw[attr] = _get(agg, key, float, f"{w}.aggregate")
    if "lam" in kw and lams is None:
        raise ConfigError(f"{w}.aggregate.lambda: per-slot lambda list is missing")
    try:
        return MultilinearParams(ctx, alphas, rs, qs, lams, **kw)
    except ValueError as exc:
        raise ConfigError(f"{w}: {exc}") from exc


def _parse_weight(ctx: PadicContext, t: dict) -> ShellWeight | None:
    if not t:
        return None
    w = "weight"
    kind = _get(t, "kind", str, w)
    try:
        if kind == "constant":
            return ShellWeight.constant(_get(t, "m", int, w), _get(t, "c", float, w, 1.0))
        if kind == "separable":
            return ShellWeight.separable(_floats(t, "coefs", w), _floats(t, "betas", w))
        if kind == "leading-digit":
            return ShellWeight.leading_digit_weight(_get(t, "m", int, w), ctx.p)
        if kind == "table":
            entries = {}
            for i, e in enumerate(_get(t, "entries", list, w)):
                if not isinstance(e, dict):
                    raise ConfigError(f"{w}.entries[{i}]: expected a table with j and value")
                j = _get(e, "j", list, f"{w}.entries[{i}]")
                entries[tuple(int(x) for x in j)] = _get(e, "value", float, f"{w}.entries[{i}]")
            return ShellWeight.from_table(_get(t, "m", int, w), entries)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{w}: {exc}") from exc
    raise ConfigError(f"{w}.kind: unknown weight kind '{kind}'")


def _opt_int(t, key, where):
    v = t.get(key)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{where}.{key}: expected an integer shell")
    return v


def _parse_function(ctx: PadicContext, t: Any, w: str) -> RadialFunction:
    if not isinstance(t, dict):
        raise ConfigError(f"{w}: expected a table")
    kind = _get(t, "kind", str, w)
    try:
        if kind == "power":
            if "s" in t:
                a = -_get(t, "s", float, w)
            else:
                a = _get(t, "a", float, w)
            return power_law(ctx, _get(t, "c", float, w, 1.0), a, _opt_int(t, "lo", w),
                             _opt_int(t, "hi", w))
        if kind == "constant":
            return power_law(ctx, _get(t, "c", float, w, 1.0), 0.0)
        if kind == "ball":
            return power_law(ctx, 1.0, 0.0, None, _get(t, "gamma", int, w, 0))
        if kind == "indicator":
            return indicator(ctx, _get(t, "shell", int, w))
        if kind == "table":
            vals = _get(t, "values", dict, w)
            return from_table(ctx, {int(k): float(v) for k, v in vals.items()})
        if kind == "composite":
            vals = {int(k): float(v) for k, v in _get(t, "values", dict, w, {}).items()}
            segs = []
            for i, s in enumerate(_get(t, "segments", list, w, [])):
                sw = f"{w}.segments[{i}]"
                segs.append(Segment(_opt_int(s, "lo", sw), _opt_int(s, "hi", sw),
                                    (Term(_get(s, "c", float, sw), _get(s, "a", float, sw)),)))
            return RadialFunction(ctx, vals, tuple(segs))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{w}: {exc}") from exc
    raise ConfigError(f"{w}.kind: unknown function kind '{kind}'")


def k0_scan(cfg: RunConfig) -> tuple[int, int]:
    raw = cfg.section("norm").get("k0_scan", list(DEFAULT_K0_SCAN))
    if (not isinstance(raw, list) or len(raw) != 2 or not all(isinstance(v, int) for v in raw)
            or raw[0] > raw[1]):
        raise ConfigError("norm.k0_scan: expected [lo, hi] integers with lo <= hi")
    return raw[0], raw[1]


def shell_range(cfg: RunConfig) -> list[int]:
    raw = cfg.section("apply").get("shells")
    if raw is None:
        raise ConfigError("apply.shells: required field is missing")
    if (not isinstance(raw, list) or len(raw) != 2 or not all(isinstance(v, int) for v in raw)
            or raw[0] > raw[1]):
        raise ConfigError("apply.shells: expected [lo, hi] integers with lo <= hi")
    return list(range(raw[0], raw[1] + 1))


def require(cfg: RunConfig, what: str):
    val = {"params": cfg.params, "weight": cfg.psi}[what]
    if val is None:
        section = {"params": "exponents", "weight": "weight"}[what]
        raise ConfigError(f"[{section}]: required section is missing")
    return val
