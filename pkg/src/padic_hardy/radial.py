"""Radial functions on Q_p^n stored shell by shell.

``F(k)`` is the value of ``f`` on the shell ``|x|_p = p**k``.  A function is a
finite table of shell values plus disjoint segments, each an exp-poly sum of
:class:`~padic_hardy.series.Term` on a shell range that may be unbounded on
either side.  User-built segments are single power laws ``c * p**(k*a)``;
operator outputs may carry several terms per tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Iterator, Mapping, Sequence

from .errors import OverlapError
from .padic import PadicContext, sphere_measure
from .series import (DEFAULT_TOL, Estimate, Term, ToleranceSpec, eval_terms, merge_terms,
                     multiply_terms, piece_sum, shift_terms)


@dataclass(frozen=True)
class Segment:
    lo: int | None
    hi: int | None
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty shell range [{self.lo}, {self.hi}]")
        object.__setattr__(self, "terms", tuple(Term(*t) for t in self.terms))

    def contains(self, k: int) -> bool:
        return (self.lo is None or k >= self.lo) and (self.hi is None or k <= self.hi)

    def overlaps(self, other: Segment) -> bool:
        lo = max(_lo(self.lo), _lo(other.lo))
        hi = min(_hi(self.hi), _hi(other.hi))
        return lo <= hi


def _lo(v):
    return -math.inf if v is None else v


def _hi(v):
    return math.inf if v is None else v


@dataclass(frozen=True)
class RadialFunction:
    ctx: PadicContext
    table: Mapping[int, float] = field(default_factory=dict)
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        table = {int(k): float(v) for k, v in self.table.items()}
        segs = tuple(sorted(self.segments, key=lambda s: _lo(s.lo)))
        for a, b in zip(segs, segs[1:]):
            if a.overlaps(b):
                raise OverlapError(f"segments [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] overlap")
        for k in table:
            if any(s.contains(k) for s in segs):
                raise OverlapError(f"table shell {k} lies inside a segment")
        object.__setattr__(self, "table", MappingProxyType(dict(sorted(table.items()))))
        object.__setattr__(self, "segments", segs)

    def __call__(self, k: int) -> float:
        return self.evaluate(k)

    def evaluate(self, k: int) -> float:
        if k in self.table:
            return self.table[k]
        for s in self.segments:
            if s.contains(k):
                return eval_terms(s.terms, k, self.ctx.p)
        return 0.0

    def pieces(self, lo: int | None = None, hi: int | None = None
               ) -> Iterator[tuple[int | None, int | None, tuple[Term, ...]]]:
        """Table entries and segments clipped to ``[lo, hi]``."""
        for k, v in self.table.items():
            if (lo is None or k >= lo) and (hi is None or k <= hi):
                yield k, k, (Term(v, 0.0, 0),)
        for s in self.segments:
            a = s.lo if lo is None else (lo if s.lo is None else max(s.lo, lo))
            b = s.hi if hi is None else (hi if s.hi is None else min(s.hi, hi))
            if a is not None and b is not None and b < a:
                continue
            yield a, b, s.terms

    def features(self) -> list[int]:
        """Finite shells where the representation changes."""
        pts = list(self.table)
        for s in self.segments:
            pts += [v for v in (s.lo, s.hi) if v is not None]
        return sorted(set(pts))

    def upper_tail(self) -> tuple[int | None, tuple[Term, ...]]:
        """Terms valid for every shell ``>= start``, or ``(None, ())`` if f vanishes there."""
        for s in self.segments:
            if s.hi is None:
                return s.lo, s.terms
        return None, ()

    def lower_tail(self) -> tuple[int | None, tuple[Term, ...]]:
        for s in self.segments:
            if s.lo is None:
                return s.hi, s.terms
        return None, ()

    @property
    def is_finitely_supported(self) -> bool:
        return all(s.lo is not None and s.hi is not None for s in self.segments)

    def scale(self, c: float) -> RadialFunction:
        return RadialFunction(
            self.ctx, {k: c * v for k, v in self.table.items()},
            tuple(Segment(s.lo, s.hi, tuple(Term(c * t.coef, t.rate, t.degree) for t in s.terms))
                  for s in self.segments))

    def __mul__(self, c: float) -> RadialFunction:
        return self.scale(float(c))

    __rmul__ = __mul__

    def __neg__(self) -> RadialFunction:
        return self.scale(-1.0)

    def __add__(self, other: RadialFunction) -> RadialFunction:
        if not isinstance(other, RadialFunction):
            return NotImplemented
        return self._combine(other, product=False)

    def multiply(self, other: RadialFunction) -> RadialFunction:
        """Pointwise product."""
        return self._combine(other, product=True)

    def _combine(self, other: RadialFunction, product: bool) -> RadialFunction:
        if other.ctx != self.ctx:
            raise ValueError("cannot combine radial functions over different contexts")
        cuts = set()
        for f in (self, other):
            for k in f.table:
                cuts.update((k, k + 1))
            for s in f.segments:
                cuts.update(v for v in (s.lo, None if s.hi is None else s.hi + 1) if v is not None)
        cuts = sorted(cuts)
        bounds = [None, *cuts]
        ends = [*(c - 1 for c in cuts), None]
        table: dict[int, float] = {}
        segs: list[Segment] = []
        for lo, hi in zip(bounds, ends):
            rep = lo if lo is not None else (hi if hi is not None else 0)
            if lo is not None and lo == hi and (lo in self.table or lo in other.table):
                a, b = self.evaluate(lo), other.evaluate(lo)
                v = a * b if product else a + b
                if v != 0.0:
                    table[lo] = v
                continue
            mine, theirs = self._terms_at(rep), other._terms_at(rep)
            if product:
                terms = multiply_terms(mine, theirs)
            else:
                terms = merge_terms([*mine, *theirs])
            if terms:
                segs.append(Segment(lo, hi, terms))
        return RadialFunction(self.ctx, table, tuple(segs))

    def __sub__(self, other: RadialFunction) -> RadialFunction:
        return self + (-other)

    def _terms_at(self, k: int) -> tuple[Term, ...]:
        for s in self.segments:
            if s.contains(k):
                return s.terms
        return ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.ctx.p,
            "n": self.ctx.n,
            "table": {str(k): v for k, v in self.table.items()},
            "segments": [{"lo": s.lo, "hi": s.hi,
                          "terms": [[t.coef, t.rate, t.degree] for t in s.terms]}
                         for s in self.segments],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RadialFunction:
        ctx = PadicContext(int(data["p"]), int(data.get("n", 1)))
        table = {int(k): float(v) for k, v in data.get("table", {}).items()}
        segs = tuple(Segment(s.get("lo"), s.get("hi"),
                             tuple(Term(float(c), float(a), int(d)) for c, a, d in s["terms"]))
                     for s in data.get("segments", []))
        return cls(ctx, table, segs)


def power_law(ctx: PadicContext, c: float, a: float,
              lo: int | None = None, hi: int | None = None) -> RadialFunction:
    """``F(k) = c * p**(k*a)`` on ``lo <= k <= hi`` (``None`` = unbounded), else 0."""
    return RadialFunction(ctx, {}, (Segment(lo, hi, (Term(float(c), float(a), 0),)),))


def radial_power(ctx: PadicContext, s: float, c: float = 1.0,
                 lo: int | None = None, hi: int | None = None) -> RadialFunction:
    """``c * |x|_p**(-s)`` on the shells ``lo..hi``."""
    return power_law(ctx, c, -s, lo, hi)


def indicator(ctx: PadicContext, k: int) -> RadialFunction:
    return RadialFunction(ctx, {k: 1.0})


def from_table(ctx: PadicContext, values: Mapping[int, float]) -> RadialFunction:
    return RadialFunction(ctx, dict(values))


def composite(ctx: PadicContext, table: Mapping[int, float],
              segments: Sequence[Segment]) -> RadialFunction:
    return RadialFunction(ctx, dict(table), tuple(segments))


def evaluate(f: RadialFunction, k: int) -> float:
    return f.evaluate(k)


def restrict_norm(f: RadialFunction, k: int, q: float) -> float:
    """``L^q`` norm of ``f`` restricted to the shell ``S_k``."""
    if not 0 < q < math.inf:
        raise ValueError("q must be finite and positive")
    return abs(f.evaluate(k)) * sphere_measure(f.ctx, k) ** (1.0 / q)


def shift(f: RadialFunction, s: int) -> RadialFunction:
    """The function whose value on shell k is ``f``'s value on shell ``k + s``."""
    p = f.ctx.p
    return RadialFunction(
        f.ctx, {k - s: v for k, v in f.table.items()},
        tuple(Segment(None if g.lo is None else g.lo - s, None if g.hi is None else g.hi - s,
                      shift_terms(g.terms, s, p))
              for g in f.segments))


def integrate_zp_star_estimate(ctx: PadicContext, g: RadialFunction,
                               tol: ToleranceSpec = DEFAULT_TOL) -> Estimate:
    """``sum_{j>=0} g(j) p**(-j n) (1 - p**-n)``: the Haar integral over Z_p^n minus 0
    of a function whose value on ``|t|_p = p**-j`` is ``g(j)``."""
    total = Estimate(0.0)
    for lo, hi, terms in g.pieces(0, None):
        total = total + piece_sum(terms, ctx.p, lo, hi, tilt=-ctx.n, signed=True, tol=tol)
    return Estimate(total.value * ctx.unit_mass, total.error * ctx.unit_mass)


def integrate_zp_star(ctx: PadicContext, g: RadialFunction,
                      tol: ToleranceSpec = DEFAULT_TOL) -> float:
    return integrate_zp_star_estimate(ctx, g, tol).value
