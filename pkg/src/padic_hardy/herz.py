"""Homogeneous p-adic Herz and Morrey-Herz norms of radial functions.

The outer sequence exponent is called ``r`` throughout; the inner Lebesgue
exponent is ``q``.  For a radial f,

    herz:         ( sum_k p^{k alpha r} ||f chi_k||_q^r )^{1/r}
    morrey-herz:  sup_{k0} p^{-k0 lam} ( sum_{k <= k0} p^{k alpha r} ||f chi_k||_q^r )^{1/r}

and ``||f chi_k||_q^r = (1-p^-n)^{r/q} |F(k)|^r p^{k n r / q}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, InconclusiveSupError
from .padic import sphere_measure
from .radial import RadialFunction
from .series import (DEFAULT_TOL, EXPONENT_TOL, Estimate, Term, ToleranceSpec, eval_terms,
                     geometric_sum, piece_sum, same_exponent)

DEFAULT_K0_SCAN = (-64, 64)
_SUP_RTOL = 1e-12
_MAX_WIDENINGS = 3


@dataclass(frozen=True)
class HerzParams:
    alpha: float
    r: float
    q: float

    def __post_init__(self):
        if not 0 < self.r < math.inf:
            raise ValueError(f"r must be finite and positive, got {self.r}")
        if not 0 < self.q < math.inf:
            raise ValueError(f"q must be finite and positive, got {self.q}")


@dataclass(frozen=True)
class MorreyHerzParams:
    alpha: float
    r: float
    q: float
    lam: float

    def __post_init__(self):
        HerzParams(self.alpha, self.r, self.q)
        if not self.lam >= 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")

    @property
    def herz(self) -> HerzParams:
        return HerzParams(self.alpha, self.r, self.q)


@dataclass(frozen=True)
class MorreyHerzSup:
    """Value of the supremum and where it is attained.

    ``attained`` is ``"k0"`` (a finite maximiser, given in ``k0``),
    ``"sup over closed form"`` (the whole-line power-law formula, constant in k0),
    ``"limit k0->-inf"``/``"limit k0->+inf"``, or ``"herz"`` when lambda is 0 and f has
    infinite support (the supremum is then the full Herz sum).
    """

    value: float
    error: float
    attained: str
    k0: int | None = None


def _root_estimate(total: Estimate, r: float, scale: float = 1.0) -> Estimate:
    value = (scale * total.value) ** (1.0 / r)
    upper = (scale * (total.value + total.error)) ** (1.0 / r)
    return Estimate(value, upper - value)


def shell_power_sum(f: RadialFunction, alpha: float, r: float, q: float,
                    lo: int | None = None, hi: int | None = None,
                    tol: ToleranceSpec = DEFAULT_TOL) -> Estimate:
    """``sum_{lo<=k<=hi} p^{k alpha r} ||f chi_k||_q^r``."""
    ctx = f.ctx
    tilt = alpha + ctx.n / q
    total = Estimate(0.0)
    for a, b, terms in f.pieces(lo, hi):
        total = total + piece_sum(terms, ctx.p, a, b, power=r, tilt=tilt, tol=tol)
    w = ctx.unit_mass ** (r / q)
    return Estimate(w * total.value, w * total.error)


def herz_norm_estimate(f: RadialFunction, hp: HerzParams,
                       tol: ToleranceSpec = DEFAULT_TOL) -> Estimate:
    try:
        total = shell_power_sum(f, hp.alpha, hp.r, hp.q, tol=tol)
    except DivergenceError as exc:
        raise DivergenceError(f"Herz norm diverges: {exc}", where=exc.where) from exc
    return _root_estimate(total, hp.r)


def herz_norm(f: RadialFunction, hp: HerzParams, tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return herz_norm_estimate(f, hp, tol).value


def lq_norm_estimate(f: RadialFunction, q: float, tol: ToleranceSpec = DEFAULT_TOL) -> Estimate:
    """``(int |f|^q dx)^{1/q}``: table shells weighted by their Haar measure, segments in closed form."""
    if not 0 < q < math.inf:
        raise ValueError(f"q must be finite and positive, got {q}")
    ctx = f.ctx
    table = math.fsum(abs(v) ** q * sphere_measure(ctx, k) for k, v in f.table.items())
    total = Estimate(table)
    try:
        for s in f.segments:
            est = piece_sum(s.terms, ctx.p, s.lo, s.hi, power=q, tilt=ctx.n / q, tol=tol)
            total = total + Estimate(est.value * ctx.unit_mass, est.error * ctx.unit_mass)
    except DivergenceError as exc:
        raise DivergenceError(f"L^q norm diverges: {exc}", where=exc.where) from exc
    return _root_estimate(total, q)


def lq_norm(f: RadialFunction, q: float, tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return lq_norm_estimate(f, q, tol).value


def morrey_herz_norm(f: RadialFunction, mp: MorreyHerzParams,
                     tol: ToleranceSpec = DEFAULT_TOL,
                     k0_scan: tuple[int, int] = DEFAULT_K0_SCAN) -> float:
    return morrey_herz_sup(f, mp, tol, k0_scan).value


def morrey_herz_sup(f: RadialFunction, mp: MorreyHerzParams,
                    tol: ToleranceSpec = DEFAULT_TOL,
                    k0_scan: tuple[int, int] = DEFAULT_K0_SCAN) -> MorreyHerzSup:
    if mp.lam == 0 and not f.is_finitely_supported:
        est = herz_norm_estimate(f, mp.herz, tol)
        return MorreyHerzSup(est.value, est.error, "herz")
    whole = _whole_line_power(f)
    if whole is not None:
        return _closed_form_sup(f, whole, mp)
    lo, hi = k0_scan
    feats = f.features()
    if feats:
        lo, hi = min(lo, feats[0] - 1), max(hi, feats[-1] + 1)
    width = hi - lo
    for _ in range(_MAX_WIDENINGS + 1):
        try:
            result = _scan_sup(f, mp, lo, hi, tol)
        except OverflowError as exc:
            raise InconclusiveSupError(f"scan [{lo}, {hi}] left the float range") from exc
        if result is not None:
            return result
        lo, hi = lo - width, hi + width
        width *= 2
    raise InconclusiveSupError(
        f"supremum over k0 not certified on [{lo + width // 2}, {hi - width // 2}]")


def _whole_line_power(f: RadialFunction) -> Term | None:
    if f.table or len(f.segments) != 1:
        return None
    s = f.segments[0]
    if s.lo is None and s.hi is None and len(s.terms) == 1 and s.terms[0].degree == 0:
        return s.terms[0]
    return None


def _critical_limit(coef: float, mp: MorreyHerzParams, unit_mass: float, p: int) -> float:
    """``lim p^{-k0 lam} (sum_{k<=k0} ...)^{1/r}`` for a pure ``|c| p^{k lam}`` shell profile."""
    w = unit_mass ** (1.0 / mp.q)
    return abs(coef) * w / (-math.expm1(-mp.lam * mp.r * math.log(p))) ** (1.0 / mp.r)


def _closed_form_sup(f: RadialFunction, t: Term, mp: MorreyHerzParams) -> MorreyHerzSup:
    ctx = f.ctx
    b = t.rate + mp.alpha + ctx.n / mp.q
    if t.coef == 0.0:
        return MorreyHerzSup(0.0, 0.0, "sup over closed form")
    if not same_exponent(b, mp.lam):
        raise DivergenceError(
            f"whole-line power law with shell exponent {b:.6g} != lambda {mp.lam:.6g} "
            "has infinite Morrey-Herz norm", where="k0 sweep")
    value = _critical_limit(t.coef, mp, ctx.unit_mass, ctx.p)
    return MorreyHerzSup(value, 0.0, "sup over closed form")


def _sup_power_exp(amp: float, delta: float, h: float, x0: float, p: int) -> float:
    """``amp * max_{x >= x0} x**delta * p**(-x h)`` for ``h > 0``, ``x0 >= 1``."""
    x_star = delta / (h * math.log(p))
    x = max(x0, x_star)
    return amp * x ** delta * math.exp(-x * h * math.log(p))


def _scan_sup(f: RadialFunction, mp: MorreyHerzParams, lo: int, hi: int,
              tol: ToleranceSpec) -> MorreyHerzSup | None:
    """Scan k0 in [lo, hi]; certify the outside or return None to ask for a wider scan."""
    ctx, p, r, lam = f.ctx, f.ctx.p, mp.r, mp.lam
    tilt = mp.alpha + ctx.n / mp.q
    w = ctx.unit_mass ** (r / mp.q)
    ln_p = math.log(p)
    try:
        start = shell_power_sum(f, mp.alpha, r, mp.q, None, lo, tol)
    except DivergenceError as exc:
        raise DivergenceError(f"Morrey-Herz norm diverges: {exc}", where=exc.where) from exc

    def value_at(k0: int, partial: float) -> float:
        if partial <= 0.0:
            return 0.0
        return math.exp(-k0 * lam * ln_p + math.log(partial) / r)

    best, best_k0 = value_at(lo, start.value), lo
    partials = [start.value]
    for k0 in range(lo + 1, hi + 1):
        v = abs(f.evaluate(k0))
        if v > 0.0:
            partials.append(math.exp(math.log(w) + r * (math.log(v) + k0 * tilt * ln_p)))
        v = value_at(k0, math.fsum(partials))
        if v > best:
            best, best_k0 = v, k0
    p_hi = math.fsum(partials)
    attained, cand_k0 = "k0", best_k0
    err = start.error ** (1.0 / r) * math.exp(-lo * lam * ln_p) if start.error else 0.0

    # below the scan: only the lower-tail segment contributes
    end, low_terms = f.lower_tail()
    limits: list[tuple[float, str]] = []
    low_bound = 0.0
    if low_terms:
        dom = min(low_terms, key=lambda t: (t.rate, -t.degree))
        g_dom = dom.rate + tilt
        if g_dom < lam - EXPONENT_TOL * max(1.0, lam):
            raise DivergenceError("lower tail decays slower than p^{k lambda}: sup is infinite",
                                  where="k0 -> -inf")
        if same_exponent(g_dom, lam):
            if dom.degree > 0:
                raise DivergenceError("critical lower tail with polynomial factor",
                                      where="k0 -> -inf")
            limits.append((_critical_limit(dom.coef, mp, ctx.unit_mass, p), "limit k0->-inf"))
            others = [t for t in low_terms if t is not dom]
        else:
            others = list(low_terms)
        x0 = float(abs(lo) + 1)
        for t in others:
            g = t.rate + tilt
            if t.degree:
                ratio = (1.0 + 1.0 / x0) ** (t.degree * r) * math.exp(-g * r * ln_p)
                if ratio >= 1.0:
                    return None
                denom = 1.0 - ratio
            else:
                denom = -math.expm1(-g * r * ln_p)
            amp = abs(t.coef) * w ** (1.0 / r) / denom ** (1.0 / r)
            if lo > -1:
                return None
            low_bound += _sup_power_exp(amp, float(t.degree), g - lam, x0, p)

    # above the scan: partial sums grow only through the upper-tail segment
    up_bound = 0.0
    _, up_terms = f.upper_tail()
    if up_terms:
        dom = max(up_terms, key=lambda t: (t.rate, t.degree))
        g_dom = dom.rate + tilt
        if g_dom > lam + EXPONENT_TOL * max(1.0, lam):
            raise DivergenceError("upper tail grows faster than p^{k lambda}: sup is infinite",
                                  where="k0 -> +inf")
        if same_exponent(g_dom, lam):
            if len(up_terms) != 1 or dom.degree:
                raise InconclusiveSupError("critical multi-term upper tail has no closed form")
            limit = _critical_limit(dom.coef, mp, ctx.unit_mass, p)
            # p^{-k0 lam r} P(k0) = p^{-k0 lam r} D + limit^r / w ... monotone in k0
            c_r = abs(dom.coef) ** r * w
            drift = p_hi - c_r * math.exp(lam * r * (hi + 1) * ln_p) / math.expm1(lam * r * ln_p)
            if drift <= 0:
                limits.append((limit, "limit k0->+inf"))
        else:
            if hi < 1:
                return None
            x0 = float(hi + 1)
            up_bound += ((w * p_hi) ** (1.0 / r)) * math.exp(-x0 * lam * ln_p)
            for t in up_terms:
                g = t.rate + tilt
                if g > EXPONENT_TOL:
                    amp = abs(t.coef) * w ** (1.0 / r) / (-math.expm1(-g * r * ln_p)) ** (1.0 / r)
                    up_bound += _sup_power_exp(amp, float(t.degree), lam - g, x0, p)
                elif g < -EXPONENT_TOL:
                    tail = geometric_sum(p, g * r, hi + 1, None)
                    amp = abs(t.coef) * (w * tail) ** (1.0 / r)
                    up_bound += _sup_power_exp(amp, float(t.degree), lam, x0, p)
                else:
                    amp = abs(t.coef) * w ** (1.0 / r)
                    up_bound += _sup_power_exp(amp, t.degree + 1.0 / r, lam, x0, p)

    for value, tag in limits:
        # a tie means the finite profile has already converged to the limit
        if value >= best:
            best, attained, cand_k0 = value, tag, None
    slack = best * (1.0 + _SUP_RTOL)
    if low_bound > slack or up_bound > slack:
        return None
    return MorreyHerzSup(best, err, attained, cand_k0)


def partial_herz_sums(f: RadialFunction, hp: HerzParams, k_lo: int, k_hi: int) -> list[float]:
    """Running sums over the window ``[k_lo, k]`` for k = k_lo..k_hi (nonnegative summands)."""
    tilt = hp.alpha + f.ctx.n / hp.q
    w = f.ctx.unit_mass ** (hp.r / hp.q)
    out, acc = [], []
    for k in range(k_lo, k_hi + 1):
        acc.append(w * abs(f.evaluate(k)) ** hp.r * float(f.ctx.p) ** (k * hp.r * tilt))
        out.append(math.fsum(acc))
    return out


__all__ = [
    "HerzParams", "MorreyHerzParams", "MorreyHerzSup", "herz_norm", "herz_norm_estimate",
    "lq_norm", "lq_norm_estimate", "morrey_herz_norm", "morrey_herz_sup", "shell_power_sum",
    "partial_herz_sums", "eval_terms",
]
