"""Weighted multilinear p-adic Hardy operators on radial functions.

For radial inputs both operators only see the shell averages of the weight psi
over ``S_{-j_1} x ... x S_{-j_m}``.  On shell k,

    forward:  sum_j psibar(j) prod_i f_i(k - j_i) p^{-j_i n} (1 - p^-n)
    dual:     sum_j psibar(j) prod_i f_i(k + j_i) (1 - p^-n)

(the dual's ``|t_i|^-n`` cancels the shell measure).  A separable weight
``prod_i c_i |t_i|^beta_i`` turns each slot into a geometric convolution that
is summed in closed form, so outputs are exact exp-poly radial functions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import DivergenceError, PreconditionError
from .herz import HerzParams, MorreyHerzParams
from .padic import PadicContext, PadicVector, UnitSampler
from .radial import RadialFunction, Segment, shift
from .series import EXPONENT_TOL, Term, ToleranceSpec, DEFAULT_TOL, geometric_sum, merge_terms

Evaluator = Callable[[Sequence[PadicVector]], float]

CONSTANT_KINDS = ("herz", "herz-dual", "mh", "mh-dual")

# digits per sampled component; weights only read the norm and leading digits
MC_DEPTH = 16


# weights ---------------------------------------------------------------------

def _product_power(coefs: Sequence[float], betas: Sequence[float]) -> Evaluator:
    def psi(ts: Sequence[PadicVector]) -> float:
        out = 1.0
        for c, b, t in zip(coefs, betas, ts):
            out *= c * t.norm() ** b
        return out
    return psi


def leading_digit(t: PadicVector) -> int:
    """First nonzero digit of the component that attains ``|t|_p``."""
    v = min(c.valuation for c in t.components if c.valuation is not None)
    comp = next(c for c in t.components if c.valuation == v)
    return comp.digits[0]


@dataclass(frozen=True)
class ShellWeight:
    """Shell averages of a nonnegative weight on ``(Z_p^n minus 0)^m``.

    The separable part ``prod_i c_i |t_i|^beta_i`` and the finite table part
    ``{(j_1..j_m): value}`` are added.  ``evaluator`` is a pointwise version
    of psi used only by the Monte-Carlo oracle.
    """

    m: int
    coefs: tuple[float, ...] | None = None
    betas: tuple[float, ...] | None = None
    table: Mapping[tuple[int, ...], float] = field(default_factory=dict)
    evaluator: Evaluator | None = field(default=None, compare=False)
    label: str = "custom"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("multilinearity m must be >= 1")
        if (self.coefs is None) != (self.betas is None):
            raise ValueError("separable weights need both coefficients and exponents")
        if self.coefs is not None:
            coefs = tuple(float(c) for c in self.coefs)
            betas = tuple(float(b) for b in self.betas)
            if len(coefs) != self.m or len(betas) != self.m:
                raise ValueError(f"expected {self.m} coefficients and exponents")
            if any(c < 0 or not math.isfinite(c) for c in coefs):
                raise ValueError("weight coefficients must be finite and nonnegative")
            object.__setattr__(self, "coefs", coefs)
            object.__setattr__(self, "betas", betas)
        table = {}
        for key, v in dict(self.table).items():
            key = tuple(int(j) for j in key)
            if len(key) != self.m or any(j < 0 for j in key):
                raise ValueError(f"table index {key} must be {self.m} nonnegative integers")
            if v < 0 or not math.isfinite(v):
                raise ValueError("shell averages must be finite and nonnegative")
            if v:
                table[key] = float(v)
        object.__setattr__(self, "table", table)

    @classmethod
    def constant(cls, m: int, c: float = 1.0) -> ShellWeight:
        return cls.separable([c] + [1.0] * (m - 1), [0.0] * m, label="constant")

    @classmethod
    def separable(cls, coefs: Sequence[float], betas: Sequence[float],
                  evaluator: Evaluator | None = None, label: str = "product-power") -> ShellWeight:
        coefs, betas = tuple(coefs), tuple(betas)
        return cls(len(coefs), coefs, betas, {}, evaluator or _product_power(coefs, betas), label)

    @classmethod
    def from_table(cls, m: int, entries: Mapping[tuple[int, ...], float]) -> ShellWeight:
        return cls(m, None, None, dict(entries), None, "table")

    @classmethod
    def leading_digit_weight(cls, m: int, p: int) -> ShellWeight:
        """``psi(t) = prod_i (leading digit of t_i)``; every shell average is ``(p/2)^m``."""
        def psi(ts):
            out = 1.0
            for t in ts:
                out *= leading_digit(t)
            return out
        return cls(m, (p / 2.0,) * m, (0.0,) * m, {}, psi, "leading-digit")

    @property
    def is_separable(self) -> bool:
        return self.coefs is not None and not self.table

    def shell_average(self, j: Sequence[int], p: int) -> float:
        val = self.table.get(tuple(j), 0.0)
        if self.coefs is not None:
            prod = 1.0
            for c, b, ji in zip(self.coefs, self.betas, j):
                prod *= c * float(p) ** (-ji * b)
            val += prod
        return val

    def scale(self, c: float) -> ShellWeight:
        if c < 0:
            raise ValueError("weights stay nonnegative")
        coefs = None if self.coefs is None else (self.coefs[0] * c,) + self.coefs[1:]
        ev = self.evaluator
        return ShellWeight(self.m, coefs, self.betas, {k: c * v for k, v in self.table.items()},
                           None if ev is None else (lambda ts: c * ev(ts)), self.label)

    def to_dict(self) -> dict:
        out: dict = {"m": self.m, "label": self.label}
        if self.coefs is not None:
            out["coefs"] = list(self.coefs)
            out["betas"] = list(self.betas)
        if self.table:
            out["table"] = [[list(k), v] for k, v in sorted(self.table.items())]
        return out


# parameters ------------------------------------------------------------------

@dataclass(frozen=True)
class MultilinearParams:
    """Per-slot exponents and their aggregates (derived from the slots when omitted)."""

    ctx: PadicContext
    alphas: tuple[float, ...]
    rs: tuple[float, ...]
    qs: tuple[float, ...]
    lams: tuple[float, ...] | None = None
    alpha: float | None = None
    r: float | None = None
    q: float | None = None
    lam: float | None = None

    def __post_init__(self):
        m = len(self.alphas)
        if m < 1 or len(self.rs) != m or len(self.qs) != m:
            raise ValueError("alphas, rs and qs must have the same positive length")
        for name, vals in (("r", self.rs), ("q", self.qs)):
            if any(not 1 < v < math.inf for v in vals):
                raise ValueError(f"every slot {name}_i must lie in (1, inf)")
        for name in ("alphas", "rs", "qs"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if self.lams is not None:
            if len(self.lams) != m:
                raise ValueError("lams must have one entry per slot")
            object.__setattr__(self, "lams", tuple(float(v) for v in self.lams))
            if any(v < 0 for v in self.lams):
                raise ValueError("lambda_i must be nonnegative")
        if self.alpha is None:
            object.__setattr__(self, "alpha", math.fsum(self.alphas))
        if self.r is None:
            object.__setattr__(self, "r", 1.0 / math.fsum(1.0 / v for v in self.rs))
        if self.q is None:
            object.__setattr__(self, "q", 1.0 / math.fsum(1.0 / v for v in self.qs))
        if self.lam is None and self.lams is not None:
            object.__setattr__(self, "lam", math.fsum(self.lams))
        if not (self.r > 0 and self.q > 0):
            raise ValueError("aggregate r and q must be positive")

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def symmetric_split(self) -> bool:
        """``q_i = m q`` and ``r_i = m r`` for every slot (plus ``lambda_i = lambda/m`` if present)."""
        m = self.m
        ok = all(_close(qi, m * self.q) for qi in self.qs) and all(_close(ri, m * self.r)
                                                                  for ri in self.rs)
        if ok and self.lams is not None:
            ok = all(_close(li, self.lam / m) for li in self.lams)
        return ok

    def slot_herz(self, i: int) -> HerzParams:
        return HerzParams(self.alphas[i], self.rs[i], self.qs[i])

    def slot_mh(self, i: int) -> MorreyHerzParams:
        self._need_lams()
        return MorreyHerzParams(self.alphas[i], self.rs[i], self.qs[i], self.lams[i])

    def target_herz(self) -> HerzParams:
        return HerzParams(self.alpha, self.r, self.q)

    def target_mh(self) -> MorreyHerzParams:
        self._need_lams()
        return MorreyHerzParams(self.alpha, self.r, self.q, self.lam)

    def _need_lams(self):
        if self.lams is None:
            raise PreconditionError("Morrey-Herz exponents lambda_i are not set")


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


# per-slot closed forms ---------------------------------------------------------

def _inv_one_minus(s: float, ln_p: float) -> float:
    """``1 / (1 - p^s)``."""
    return -1.0 / math.expm1(s * ln_p)


def _forward_piece(lo, hi, t: Term, C: float, log_rho: float, p: int, slot: str):
    ln_p = math.log(p)
    c, a = C * t.coef, t.rate
    s = log_rho - a
    unit = abs(s) <= EXPONENT_TOL
    out = []
    if lo is not None and lo == hi:
        out.append((lo, lo, (Term(c * math.exp(lo * a * ln_p), 0.0),)))
    elif lo is None:
        if s >= -EXPONENT_TOL:
            raise DivergenceError(f"{slot}: shell ratio {math.exp(s * ln_p):.6g} >= 1 "
                                  "on a lower tail",
                                  where=slot)
        out.append((None, hi, (Term(c * _inv_one_minus(s, ln_p), a),)))
    elif unit:
        out.append((lo, hi, (Term(c, a, 1), Term(c * (1 - lo), a, 0))))
    else:
        g = _inv_one_minus(s, ln_p)
        out.append((lo, hi, (Term(c * g, a), Term(-c * g * math.exp((1 - lo) * s * ln_p), log_rho))))
    if hi is not None:
        if lo is None:
            coef = c * math.exp(-hi * s * ln_p) * _inv_one_minus(s, ln_p)
        else:
            coef = c * math.exp(-hi * s * ln_p) * geometric_sum(p, s, 0, hi - lo)
        out.append((hi + 1, None, (Term(coef, log_rho),)))
    return out


def _dual_piece(lo, hi, t: Term, C: float, log_rho: float, p: int, slot: str):
    ln_p = math.log(p)
    c, a = C * t.coef, t.rate
    s = log_rho + a
    unit = abs(s) <= EXPONENT_TOL
    out = []
    if lo is not None and lo == hi:
        out.append((lo, lo, (Term(c * math.exp(lo * a * ln_p), 0.0),)))
    elif hi is None:
        if s >= -EXPONENT_TOL:
            raise DivergenceError(f"{slot}: shell ratio {math.exp(s * ln_p):.6g} >= 1 "
                                  "on an upper tail",
                                  where=slot)
        out.append((lo, None, (Term(c * _inv_one_minus(s, ln_p), a),)))
    elif unit:
        out.append((lo, hi, (Term(-c, a, 1), Term(c * (hi + 1), a, 0))))
    else:
        g = _inv_one_minus(s, ln_p)
        out.append((lo, hi, (Term(c * g, a), Term(-c * g * math.exp((hi + 1) * s * ln_p), -log_rho))))
    if lo is not None:
        if hi is None:
            coef = c * math.exp(lo * s * ln_p) * _inv_one_minus(s, ln_p)
        else:
            coef = c * math.exp(lo * s * ln_p) * geometric_sum(p, s, 0, hi - lo)
        out.append((None, lo - 1, (Term(coef, -log_rho),)))
    return out


def _assemble(ctx: PadicContext, pieces) -> RadialFunction:
    """Sum possibly overlapping ``(lo, hi, terms)`` pieces into one radial function."""
    cuts = set()
    for lo, hi, _ in pieces:
        if lo is not None:
            cuts.add(lo)
        if hi is not None:
            cuts.add(hi + 1)
    cuts = sorted(cuts)
    table: dict[int, float] = {}
    segs: list[Segment] = []
    for lo, hi in zip([None, *cuts], [*(c - 1 for c in cuts), None]):
        rep = lo if lo is not None else (hi if hi is not None else 0)
        covering = [terms for a, b, terms in pieces
                    if (a is None or a <= rep) and (b is None or rep <= b)]
        terms = merge_terms(t for ts in covering for t in ts)
        if not terms:
            continue
        if lo is not None and lo == hi:
            table[lo] = math.fsum(t.coef * float(lo) ** t.degree * float(ctx.p) ** (lo * t.rate)
                                  for t in terms)
        else:
            segs.append(Segment(lo, hi, terms))
    return RadialFunction(ctx, {k: v for k, v in table.items() if v != 0.0}, tuple(segs))


def slot_operator(f: RadialFunction, C: float, log_rho: float, dual: bool,
                  slot: str = "slot") -> RadialFunction:
    """``k -> sum_{j>=0} C rho^j f(k -+ j)`` in closed form (``-`` forward, ``+`` dual)."""
    if C == 0.0:
        return RadialFunction(f.ctx)
    piece = _dual_piece if dual else _forward_piece
    out = []
    for lo, hi, terms in f.pieces():
        for t in terms:
            if t.degree:
                raise ValueError("operator inputs must be sums of power laws")
            out.extend(piece(lo, hi, t, C, log_rho, f.ctx.p, slot))
    return _assemble(f.ctx, out)


# operators ---------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorResult:
    """Output of a Hardy operator.

    ``values`` is the whole output function (``None`` if some shell diverges);
    ``shells``/``shell_values``/``bounds`` report the requested shells, with
    ``None`` marking a divergent shell.  Every value comes from closed-form
    sums, so the truncation bounds are zero.
    """

    values: RadialFunction | None
    shells: tuple[int, ...] = ()
    shell_values: tuple[float | None, ...] = ()
    bounds: tuple[float, ...] = ()
    divergent: tuple[int, ...] = ()
    divergent_slots: tuple[int, ...] = ()

    def __call__(self, k: int) -> float:
        if self.values is None:
            raise DivergenceError(f"operator output diverges (slots {self.divergent_slots})")
        return self.values.evaluate(k)


def _ctx_of(params) -> PadicContext:
    return params if isinstance(params, PadicContext) else params.ctx


def _apply(fs: Sequence[RadialFunction], psi: ShellWeight, params, shells, dual: bool
           ) -> OperatorResult:
    ctx = _ctx_of(params)
    fs = list(fs)
    if len(fs) != psi.m:
        raise ValueError(f"weight is {psi.m}-linear but {len(fs)} functions were given")
    if any(f.ctx != ctx for f in fs):
        raise ValueError("every input must live over the operator's context")
    p, n, mass = ctx.p, ctx.n, ctx.unit_mass
    parts: list[RadialFunction] = []
    bad: list[int] = []
    slot_outs: list[RadialFunction | None] = []
    if psi.coefs is not None:
        for i, (f, c, b) in enumerate(zip(fs, psi.coefs, psi.betas)):
            log_rho = -b if dual else -(b + n)
            try:
                slot_outs.append(slot_operator(f, c * mass, log_rho, dual, slot=f"slot {i + 1}"))
            except DivergenceError:
                slot_outs.append(None)
                bad.append(i + 1)
        if not bad:
            prod = slot_outs[0]
            for g in slot_outs[1:]:
                prod = prod.multiply(g)
            parts.append(prod)
    for key, v in psi.table.items():
        prod = None
        for f, j in zip(fs, key):
            w = mass if dual else mass * float(p) ** (-j * n)
            g = shift(f, j if dual else -j).scale(w)
            prod = g if prod is None else prod.multiply(g)
        parts.append(prod.scale(v))
    total = None
    if not bad:
        total = RadialFunction(ctx)
        for g in parts:
            total = total + g
    if shells is None:
        if bad:
            raise DivergenceError(f"operator diverges in slot(s) {bad}", where=f"slot {bad[0]}")
        return OperatorResult(total)
    shells = tuple(int(k) for k in shells)
    vals: list[float | None] = []
    div: list[int] = []
    for k in shells:
        if total is not None:
            vals.append(total.evaluate(k))
            continue
        # a divergent slot is harmless only where another slot vanishes identically
        killed = any(g is not None and g.evaluate(k) == 0.0 for g in slot_outs)
        if killed:
            vals.append(_table_at(fs, psi, ctx, k, dual))
        else:
            vals.append(None)
            div.append(k)
    return OperatorResult(total, shells, tuple(vals), tuple(0.0 for _ in shells), tuple(div),
                          tuple(bad))


def _table_at(fs, psi: ShellWeight, ctx: PadicContext, k: int, dual: bool) -> float:
    p, n, mass = ctx.p, ctx.n, ctx.unit_mass
    acc = []
    for key, v in psi.table.items():
        prod = v
        for f, j in zip(fs, key):
            prod *= f.evaluate(k + j if dual else k - j) * (mass if dual else mass * float(p) ** (-j * n))
        acc.append(prod)
    return math.fsum(acc)


def apply_hardy(fs: Sequence[RadialFunction], psi: ShellWeight, params,
                shells: Sequence[int] | None = None,
                tol: ToleranceSpec = DEFAULT_TOL) -> OperatorResult:
    """The forward operator; ``params`` is a MultilinearParams or a bare PadicContext."""
    return _apply(fs, psi, params, shells, dual=False)


def apply_dual_hardy(fs: Sequence[RadialFunction], psi: ShellWeight, params,
                     shells: Sequence[int] | None = None,
                     tol: ToleranceSpec = DEFAULT_TOL) -> OperatorResult:
    return _apply(fs, psi, params, shells, dual=True)


# characteristic constants --------------------------------------------------------

def slot_exponents(kind: str, params: MultilinearParams) -> tuple[float, ...]:
    """Exponents ``e_i`` with the constant's integrand ``psi(t) prod_i |t_i|^{e_i}``."""
    n = params.ctx.n
    a, q = params.alphas, params.qs
    if kind == "herz":
        return tuple(-(ai + n / qi) for ai, qi in zip(a, q))
    if kind == "herz-dual":
        return tuple(ai - n * (1 - 1 / qi) for ai, qi in zip(a, q))
    if kind in ("mh", "mh-dual"):
        if params.lams is None:
            raise PreconditionError(f"constant '{kind}' needs lambda_i")
        lam = params.lams
        if kind == "mh":
            return tuple(-(ai + n / qi - li) for ai, qi, li in zip(a, q, lam))
        return tuple(ai - li - n * (1 - 1 / qi) for ai, qi, li in zip(a, q, lam))
    raise ValueError(f"unknown constant '{kind}', expected one of {CONSTANT_KINDS}")


@dataclass(frozen=True)
class ConstantResult:
    kind: str
    value: float
    slot_factors: tuple[float, ...] | None
    bound: float = 0.0


def weighted_shell_integral(psi: ShellWeight, exponents: Sequence[float], ctx: PadicContext,
                            box: Sequence[int] | None = None) -> tuple[float, tuple[float, ...] | None]:
    """``sum_j psibar(j) prod_i p^{-j_i (e_i + n)} (1 - p^-n)``; ``box`` limits j_i <= box_i."""
    p, n, mass = ctx.p, ctx.n, ctx.unit_mass
    ln_p = math.log(p)
    if len(exponents) != psi.m:
        raise ValueError("one exponent per slot is required")
    total = []
    factors = None
    if psi.coefs is not None and all(c > 0 for c in psi.coefs):
        factors = []
        for i, (c, b, e) in enumerate(zip(psi.coefs, psi.betas, exponents)):
            s = b + e + n
            if box is None:
                if s <= EXPONENT_TOL * max(1.0, abs(b), abs(e), n):
                    raise DivergenceError(
                        f"slot {i + 1}: shell ratio {math.exp(-s * ln_p):.6g} >= 1, "
                        "the integral diverges", where=f"slot {i + 1}")
                factors.append(c * mass / -math.expm1(-s * ln_p))
            else:
                factors.append(c * mass * geometric_sum(p, -s, 0, box[i]))
        total.append(math.prod(factors))
    for key, v in psi.table.items():
        if box is not None and any(j > b for j, b in zip(key, box)):
            continue
        total.append(v * math.prod(mass * math.exp(-j * (e + n) * ln_p)
                                   for j, e in zip(key, exponents)))
    return math.fsum(total), (tuple(factors) if factors is not None and not psi.table else None)


def char_const(kind: str, psi: ShellWeight, params: MultilinearParams,
               tol: ToleranceSpec = DEFAULT_TOL) -> ConstantResult:
    if psi.m != params.m:
        raise ValueError(f"weight is {psi.m}-linear but the parameters have {params.m} slots")
    value, factors = weighted_shell_integral(psi, slot_exponents(kind, params), params.ctx)
    return ConstantResult(kind, value, factors)


def char_const_herz(psi: ShellWeight, params: MultilinearParams,
                    tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return char_const("herz", psi, params, tol).value


def char_const_herz_dual(psi: ShellWeight, params: MultilinearParams,
                         tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return char_const("herz-dual", psi, params, tol).value


def char_const_mh(psi: ShellWeight, params: MultilinearParams,
                  tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return char_const("mh", psi, params, tol).value


def char_const_mh_dual(psi: ShellWeight, params: MultilinearParams,
                       tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return char_const("mh-dual", psi, params, tol).value


# Monte-Carlo oracle ----------------------------------------------------------------

@dataclass(frozen=True)
class MCResult:
    """``stderr`` is the statistical standard error plus the analytic tail bound."""

    estimate: float
    stderr: float
    statistical_stderr: float
    tail_bound: float
    box: tuple[int, ...]
    samples: int


def _choose_box(psi: ShellWeight, exponents, ctx, total: float, samples: int) -> tuple[int, ...]:
    if psi.coefs is None:
        top = [max((k[i] for k in psi.table), default=0) for i in range(psi.m)]
        return tuple(top)
    budget = max(1, samples // 4)
    J = 0
    while True:
        box = (J,) * psi.m
        inside, _ = weighted_shell_integral(psi, exponents, ctx, box)
        if total - inside <= 1e-6 * abs(total) or (J + 2) ** psi.m > budget:
            return box
        J += 1


def mc_char_const(psi: ShellWeight, exponents: Sequence[float], ctx: PadicContext,
                  samples: int, seed: int, box: Sequence[int] | None = None,
                  depth: int = MC_DEPTH) -> MCResult:
    """Stratified estimate of ``int psi(t) prod_i |t_i|^{e_i} dt`` over ``(Z_p^n minus 0)^m``.

    Strata are shell multi-indices inside ``box``; each stratum weight is exact
    and the mass outside the box is bounded analytically from the shell averages.
    """
    if samples < 1000:
        raise PreconditionError("the Monte-Carlo oracle needs at least 1000 samples")
    if psi.evaluator is None:
        raise PreconditionError("the weight has no pointwise evaluator")
    total, _ = weighted_shell_integral(psi, exponents, ctx)   # raises on divergence
    box = tuple(box) if box is not None else _choose_box(psi, exponents, ctx, total, samples)
    inside, _ = weighted_shell_integral(psi, exponents, ctx, box)
    tail = max(total - inside, 0.0)
    p, n, mass = ctx.p, ctx.n, ctx.unit_mass
    ln_p = math.log(p)
    strata = list(itertools.product(*(range(b + 1) for b in box)))
    weights = np.array([math.prod(mass * math.exp(-j * (e + n) * ln_p)
                                  for j, e in zip(J, exponents)) for J in strata])
    alloc = np.maximum(2, np.floor(samples * weights / weights.sum())).astype(int)
    root = UnitSampler(ctx, seed, depth)
    subs = root.spawn(len(strata))
    est, var = [], []
    for J, w, count, sampler in zip(strata, weights, alloc, subs):
        slots = [sampler.draw_units(int(count), j) for j in J]
        vals = np.array([psi.evaluator(pt) for pt in zip(*slots)], dtype=float)
        est.append(w * vals.mean())
        var.append(w * w * vals.var(ddof=1) / count)
    stat = math.sqrt(math.fsum(var))
    return MCResult(math.fsum(est), stat + tail, stat, tail, box, int(alloc.sum()))


__all__ = [
    "ShellWeight", "MultilinearParams", "OperatorResult", "ConstantResult", "MCResult",
    "CONSTANT_KINDS", "apply_hardy", "apply_dual_hardy", "slot_operator", "slot_exponents",
    "weighted_shell_integral", "char_const", "char_const_herz", "char_const_herz_dual",
    "char_const_mh", "char_const_mh_dual", "mc_char_const", "leading_digit",
]
