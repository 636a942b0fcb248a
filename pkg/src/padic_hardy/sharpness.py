"""Extremal families and numerical operator-norm ratios.

The Herz family ``|x|^{-(alpha_i + n/q_i + eps)}`` cut to ``|x| >= 1`` drives
the forward ratio up to the constant as eps -> 0; the dual family mirrors it
on ``|x| <= 1``.  The Morrey-Herz family ``|x|^{-(alpha_i + n/q_i - lambda_i)}``
attains the constant exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .errors import PreconditionError
from .hardy import MultilinearParams, ShellWeight, apply_dual_hardy, apply_hardy, char_const
from .herz import herz_norm, morrey_herz_norm
from .radial import RadialFunction, power_law
from .series import DEFAULT_TOL, ToleranceSpec

BALANCE_TOL = 1e-12
NEAR_EQUAL = 1e-12


def default_grid(p: int, levels: int = 12) -> tuple[float, ...]:
    return tuple(float(p) ** -l for l in range(levels + 1))


@dataclass(frozen=True)
class BalanceReport:
    ok: bool
    violations: tuple[str, ...] = ()


def validate_balance(params: MultilinearParams) -> BalanceReport:
    """Check the aggregate exponents against the per-slot ones (absolute error 1e-12)."""
    bad = []
    s = math.fsum(params.alphas)
    if abs(s - params.alpha) > BALANCE_TOL:
        bad.append(f"alpha: sum alpha_i = {s:.12g} but alpha = {params.alpha:.12g}")
    s = math.fsum(1.0 / r for r in params.rs)
    if abs(s - 1.0 / params.r) > BALANCE_TOL:
        bad.append(f"r: sum 1/r_i = {s:.12g} but 1/r = {1.0 / params.r:.12g}")
    s = math.fsum(1.0 / q for q in params.qs)
    if abs(s - 1.0 / params.q) > BALANCE_TOL:
        bad.append(f"q: sum 1/q_i = {s:.12g} but 1/q = {1.0 / params.q:.12g}")
    if params.lams is not None and params.lam is not None:
        s = math.fsum(params.lams)
        if abs(s - params.lam) > BALANCE_TOL:
            bad.append(f"lambda: sum lambda_i = {s:.12g} but lambda = {params.lam:.12g}")
    return BalanceReport(not bad, tuple(bad))


@dataclass(frozen=True)
class SharpnessConfig:
    params: MultilinearParams
    psi: ShellWeight
    grid: tuple[float, ...] | None = None
    upper_rtol: float = 1e-9
    convergence_rtol: float = 2e-2
    dual: bool = False
    tol: ToleranceSpec = field(default=DEFAULT_TOL)

    def __post_init__(self):
        if not self.params.symmetric_split:
            raise PreconditionError(
                "sharpness needs the symmetric split q_i = m q, r_i = m r (and lambda_i = "
                "lambda/m); the converse is only claimed there")
        grid = default_grid(self.params.ctx.p) if self.grid is None else self.grid
        grid = tuple(float(e) for e in grid)
        if any(not 0 < e <= 1 for e in grid):
            raise PreconditionError("every eps must lie in (0, 1]")
        if any(b >= a for a, b in zip(grid, grid[1:])):
            raise PreconditionError("the eps grid must be strictly decreasing")
        object.__setattr__(self, "grid", grid)

    @property
    def herz_kind(self) -> str:
        return "herz-dual" if self.dual else "herz"

    @property
    def mh_kind(self) -> str:
        return "mh-dual" if self.dual else "mh"


def herz_extremal(i: int, params: MultilinearParams, eps: float, dual: bool = False
                  ) -> RadialFunction:
    """Slot ``i`` of the Herz family; ``dual`` flips both the support and the sign of eps."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    ctx = params.ctx
    a = params.alphas[i] + ctx.n / params.qs[i]
    if dual:
        return power_law(ctx, 1.0, -(a - eps), lo=None, hi=0)
    return power_law(ctx, 1.0, -(a + eps), lo=0, hi=None)


def mh_extremal(i: int, params: MultilinearParams) -> RadialFunction:
    if params.lams is None:
        raise PreconditionError("the Morrey-Herz family needs lambda_i")
    ctx = params.ctx
    return power_law(ctx, 1.0, -(params.alphas[i] + ctx.n / params.qs[i] - params.lams[i]))


def _operator(dual: bool):
    return apply_dual_hardy if dual else apply_hardy


def ratio_herz(cfg: SharpnessConfig, eps: float) -> float:
    p = cfg.params
    fs = [herz_extremal(i, p, eps, cfg.dual) for i in range(p.m)]
    out = _operator(cfg.dual)(fs, cfg.psi, p).values
    denom = math.prod(herz_norm(f, p.slot_herz(i), cfg.tol) for i, f in enumerate(fs))
    return herz_norm(out, p.target_herz(), cfg.tol) / denom


def mh_case(params: MultilinearParams) -> str:
    if params.lams is None:
        raise PreconditionError("case detection needs lambda_i")
    for a, l in zip(params.alphas, params.lams):
        if a != l and abs(a - l) < NEAR_EQUAL:
            warnings.warn(f"alpha_i = {a!r} and lambda_i = {l!r} differ by less than 1e-12; "
                          "treated as distinct", RuntimeWarning, stacklevel=3)
    same = [a == l for a, l in zip(params.alphas, params.lams)]
    if all(same):
        return "all equal"
    if not any(same):
        return "all distinct"
    return "mixed"


def ratio_mh(cfg: SharpnessConfig) -> tuple[float, str]:
    p = cfg.params
    tag = mh_case(p)
    if any(l <= 0 for l in p.lams):
        raise PreconditionError("the Morrey-Herz converse needs lambda_i > 0")
    fs = [mh_extremal(i, p) for i in range(p.m)]
    out = _operator(cfg.dual)(fs, cfg.psi, p).values
    denom = math.prod(morrey_herz_norm(f, p.slot_mh(i), cfg.tol) for i, f in enumerate(fs))
    return morrey_herz_norm(out, p.target_mh(), cfg.tol) / denom, tag


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    ratio: float
    constant: float
    relative_gap: float
    status: str

    def as_dict(self) -> dict:
        return {"epsilon": self.epsilon, "ratio": self.ratio, "constant": self.constant,
                "relative_gap": self.relative_gap, "status": self.status}


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    constant: float
    upper_ok: bool
    converged: bool

    @property
    def passed(self) -> bool:
        return self.upper_ok and self.converged


def sharpness_sweep(cfg: SharpnessConfig) -> SweepReport:
    if not cfg.grid:
        raise PreconditionError("the eps grid is empty")
    const = char_const(cfg.herz_kind, cfg.psi, cfg.params, cfg.tol).value
    rows = []
    for eps in cfg.grid:
        r = ratio_herz(cfg, eps)
        gap = (const - r) / const
        status = "ok" if r <= const * (1 + cfg.upper_rtol) else "exceeds-constant"
        rows.append(SweepRow(eps, r, const, gap, status))
    upper = all(row.status == "ok" for row in rows)
    converged = rows[-1].relative_gap <= cfg.convergence_rtol
    return SweepReport(tuple(rows), const, upper, converged)


__all__ = [
    "BalanceReport", "SharpnessConfig", "SweepRow", "SweepReport", "default_grid",
    "validate_balance", "herz_extremal", "mh_extremal", "ratio_herz", "ratio_mh", "mh_case",
    "sharpness_sweep",
]
