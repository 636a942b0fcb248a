"""Exponential-polynomial terms and certified sums over integer shells.

A :class:`Term` ``(coef, rate, degree)`` stands for ``coef * k**degree * p**(k*rate)``.
Single degree-0 terms are summed in closed geometric form; anything else is
summed numerically outward from its finite end until an explicit geometric
tail bound drops below ``rtol`` times the partial sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DivergenceError, TruncationError

# exponents closer than this are treated as equal (ratio exactly 1)
EXPONENT_TOL = 1e-12
_CANCEL_TOL = 1e-13


class Term(NamedTuple):
    coef: float
    rate: float
    degree: int = 0


@dataclass(frozen=True)
class ToleranceSpec:
    """Stop when the certified tail is below ``rtol * |partial sum|``."""

    rtol: float = 1e-14
    max_terms: int = 100_000


DEFAULT_TOL = ToleranceSpec()


@dataclass(frozen=True)
class Estimate:
    """A value together with a certified bound on its truncation error."""

    value: float
    error: float = 0.0

    def __add__(self, other: Estimate) -> Estimate:
        return Estimate(self.value + other.value, self.error + other.error)


def same_exponent(a: float, b: float) -> bool:
    return abs(a - b) <= EXPONENT_TOL * max(1.0, abs(a), abs(b))


def merge_terms(terms: Iterable[Term]) -> tuple[Term, ...]:
    """Combine like terms; drop terms that cancel to rounding level."""
    ordered = sorted((t for t in terms if t.coef != 0.0), key=lambda t: (t.degree, t.rate))
    out: list[Term] = []
    groups: list[list[Term]] = []
    for t in ordered:
        if groups and groups[-1][0].degree == t.degree and same_exponent(groups[-1][0].rate, t.rate):
            groups[-1].append(t)
        else:
            groups.append([t])
    for g in groups:
        total = math.fsum(t.coef for t in g)
        scale = math.fsum(abs(t.coef) for t in g)
        if abs(total) > _CANCEL_TOL * scale:
            out.append(Term(total, g[0].rate, g[0].degree))
    return tuple(out)


def multiply_terms(a: Sequence[Term], b: Sequence[Term]) -> tuple[Term, ...]:
    return merge_terms(Term(x.coef * y.coef, x.rate + y.rate, x.degree + y.degree)
                       for x in a for y in b)


def shift_terms(terms: Sequence[Term], s: int, p: int) -> tuple[Term, ...]:
    """Terms of ``k -> F(k + s)``."""
    out = []
    for t in terms:
        head = t.coef * float(p) ** (s * t.rate)
        for e in range(t.degree + 1):
            out.append(Term(head * math.comb(t.degree, e) * float(s) ** (t.degree - e), t.rate, e))
    return merge_terms(out)


def eval_terms(terms: Sequence[Term], k: int, p: int) -> float:
    return math.fsum(t.coef * float(k) ** t.degree * float(p) ** (k * t.rate) for t in terms)


def _eval_array(terms: Sequence[Term], ks: np.ndarray, p: int, tilt: float) -> np.ndarray:
    """``sum_l c_l k^d p^{k (a_l + tilt)}`` evaluated without forming p^{k a} alone."""
    ln_p = math.log(p)
    out = np.zeros(ks.shape, dtype=float)
    kf = ks.astype(float)
    for t in terms:
        out += t.coef * kf ** t.degree * np.exp(kf * (t.rate + tilt) * ln_p)
    return out


def geometric_sum(p: int, s: float, lo: int | None, hi: int | None) -> float:
    """``sum_{k=lo}^{hi} p**(k*s)`` with ``None`` meaning an infinite end."""
    ln_p = math.log(p)
    if lo is not None and hi is not None:
        if hi < lo:
            return 0.0
        if abs(s) <= EXPONENT_TOL:
            return float(hi - lo + 1)
        return math.exp(lo * s * ln_p) * math.expm1((hi - lo + 1) * s * ln_p) / math.expm1(s * ln_p)
    if lo is not None:
        if s >= -EXPONENT_TOL:
            raise DivergenceError(f"upward geometric ratio p^{s:.6g} >= 1", where="upper tail")
        return math.exp(lo * s * ln_p) / -math.expm1(s * ln_p)
    if hi is not None:
        if s <= EXPONENT_TOL:
            raise DivergenceError(f"downward geometric ratio p^{-s:.6g} >= 1", where="lower tail")
        return math.exp(hi * s * ln_p) / -math.expm1(-s * ln_p)
    raise DivergenceError("two-sided geometric series always diverges", where="both tails")


def _dominant(terms: Sequence[Term], upward: bool) -> Term:
    if upward:
        return max(terms, key=lambda t: (t.rate, t.degree))
    return min(terms, key=lambda t: (t.rate, -t.degree))


def piece_sum(terms: Sequence[Term], p: int, lo: int | None, hi: int | None, *,
              power: float = 1.0, tilt: float = 0.0, signed: bool = False,
              tol: ToleranceSpec = DEFAULT_TOL) -> Estimate:
    """Sum over ``lo <= k <= hi`` of ``|F(k)|**power * p**(k*tilt*power)``.

    With ``signed=True`` (``power`` must be 1) the summand keeps the sign of F.
    ``F`` is the exp-poly sum of ``terms``.
    """
    terms = merge_terms(terms)
    if not terms or (lo is not None and hi is not None and hi < lo):
        return Estimate(0.0)
    if signed and power != 1.0:
        raise ValueError("signed sums are linear")
    if len(terms) == 1 and terms[0].degree == 0:
        t = terms[0]
        c = t.coef if signed else abs(t.coef) ** power
        return Estimate(c * geometric_sum(p, power * (t.rate + tilt), lo, hi))
    if lo is None and hi is None:
        return (piece_sum(terms, p, None, -1, power=power, tilt=tilt, signed=signed, tol=tol)
                + piece_sum(terms, p, 0, None, power=power, tilt=tilt, signed=signed, tol=tol))
    if lo is not None and hi is not None:
        if hi - lo + 1 > tol.max_terms:
            raise TruncationError(f"finite piece of {hi - lo + 1} shells exceeds the term cap")
        vals = _eval_array(terms, np.arange(lo, hi + 1), p, tilt)
        return Estimate(_reduce(vals, power, signed))
    upward = hi is None
    dom = _dominant(terms, upward)
    growth = dom.rate + tilt
    if (growth >= -EXPONENT_TOL) if upward else (growth <= EXPONENT_TOL):
        raise DivergenceError(
            f"{'upper' if upward else 'lower'} tail grows like p^(k*{growth:.6g})",
            where="upper tail" if upward else "lower tail")
    return _numeric_tail(terms, p, lo if upward else hi, upward, power, tilt, signed, tol)


def _reduce(vals: np.ndarray, power: float, signed: bool) -> float:
    if signed:
        return math.fsum(vals.tolist())
    return math.fsum((np.abs(vals) ** power).tolist())


def _tail_bound(terms: Sequence[Term], p: int, edge: int, upward: bool,
                power: float, tilt: float) -> float:
    """Bound on the sum over shells strictly beyond ``edge`` (|edge| >= 1)."""
    K = abs(edge)
    sign = 1.0 if upward else -1.0
    head = 0.0
    worst = 0.0
    for t in terms:
        # |k|^d p^{k a} <= K^d p^{edge a} * ((1+1/K)^d p^{+-a})^{|k - edge|}
        head += abs(t.coef) * float(K) ** t.degree * float(p) ** (edge * (t.rate + tilt))
        worst = max(worst, (1.0 + 1.0 / K) ** t.degree * float(p) ** (sign * (t.rate + tilt)))
    omega = worst ** power
    if omega >= 1.0:
        return math.inf
    return head ** power * omega / (1.0 - omega)


def _numeric_tail(terms, p, start, upward, power, tilt, signed, tol) -> Estimate:
    step = 1 if upward else -1
    partial: list[float] = []
    k = start
    used = 0
    chunk = 64
    while True:
        n = min(chunk, tol.max_terms - used)
        if n <= 0:
            raise TruncationError(
                f"tail from shell {start} not certified within {tol.max_terms} terms")
        ks = np.arange(k, k + step * n, step)
        partial.append(_reduce(_eval_array(terms, ks, p, tilt), power, signed))
        used += n
        k += step * n
        edge = k - step
        if (edge >= 1) if upward else (edge <= -1):
            bound = _tail_bound(terms, p, edge, upward, power, tilt)
            total = math.fsum(partial)
            if bound == 0.0 or bound <= tol.rtol * abs(total):
                return Estimate(total, bound)
        chunk = min(chunk * 2, 8192)
