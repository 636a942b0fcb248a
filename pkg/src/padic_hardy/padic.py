"""Truncated p-adic scalars and vectors, Haar measures of balls and shells.

A nonzero scalar is stored as ``p**valuation * sum(digits[j] * p**j)`` with
``digits[0] != 0``; ``len(digits)`` is its relative precision.  The exact
zero has ``valuation is None`` and no digits.  Valuations are Python ints so
the ultrametric checks compare integers, never floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import PrecisionExhausted, ZeroVectorError

DEFAULT_PRECISION = 64
DEFAULT_DEPTH = 64

_ASCII = bytes(b"0123456789abcdefghijklmnopqrstuvwxyz").ljust(256, b"?")
_TABLE_MAX = 4096
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_valuation(value: int, p: int) -> int:
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def _digit_table(p: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Little-endian base-p digits of every integer below ``p**block``."""
    block = max(1, int(math.log(_TABLE_MAX, p) + 1e-9))
    rows = [()]
    for _ in range(block):
        rows = [row + (d,) for row in rows for d in range(p)]
    # rows[i] lists digits most-significant-last after reversing the build order
    return block, tuple(tuple(reversed(r)) for r in rows)


@dataclass(frozen=True)
class PadicContext:
    """The prime ``p`` and dimension ``n`` that fix Q_p^n and its Haar measure."""

    p: int
    n: int = 1

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"p must be a prime integer, got {self.p!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")

    @property
    def unit_mass(self) -> float:
        """Haar measure of the unit shell, ``1 - p**-n``."""
        return 1.0 - float(self.p) ** -self.n


@dataclass(frozen=True)
class PadicScalar:
    p: int
    valuation: int | None
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.valuation is None:
            if self.digits:
                raise ValueError("the zero marker carries no digits")
            return
        if not self.digits:
            raise ValueError("a nonzero scalar needs at least one digit")
        if self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        if min(self.digits) < 0 or max(self.digits) >= self.p:
            raise ValueError(f"digits must lie in [0, {self.p - 1}]")

    @classmethod
    def zero(cls, p: int) -> PadicScalar:
        return cls(p, None)

    @classmethod
    def from_rational(cls, value: int | Fraction, p: int,
                      precision: int = DEFAULT_PRECISION) -> PadicScalar:
        """Canonical nonnegative-digit expansion of a rational number."""
        value = Fraction(value)
        if value == 0:
            return cls.zero(p)
        num, den = value.numerator, value.denominator
        vn, vd = _int_valuation(num, p), _int_valuation(den, p)
        num //= p ** vn
        den //= p ** vd
        modulus = p ** precision
        return cls._from_unit_int(p, vn - vd, num * pow(den, -1, modulus) % modulus, precision)

    @classmethod
    def _from_unit_int(cls, p: int, valuation: int, mantissa: int, precision: int) -> PadicScalar:
        if p <= _TABLE_MAX:
            block, table = _digit_table(p)
            big = p ** block
            parts = []
            for _ in range(-(-precision // block)):
                mantissa, chunk = divmod(mantissa, big)
                parts.append(table[chunk])
            digits = sum(parts, ())[:precision]
        else:
            out_digits = []
            for _ in range(precision):
                mantissa, d = divmod(mantissa, p)
                out_digits.append(d)
            digits = tuple(out_digits)
        if not digits or digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        # digits come from a table of valid base-p expansions: skip re-validation
        out = object.__new__(cls)
        object.__setattr__(out, "p", p)
        object.__setattr__(out, "valuation", valuation)
        object.__setattr__(out, "digits", digits)
        return out

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def precision(self) -> int:
        return len(self.digits)

    @cached_property
    def mantissa(self) -> int:
        """The unit part as an integer modulo ``p**precision``."""
        if self.p <= 36:
            return int(bytes(self.digits[::-1]).translate(_ASCII) or b"0", self.p)
        out = 0
        for d in reversed(self.digits):
            out = out * self.p + d
        return out

    def norm(self) -> float:
        if self.valuation is None:
            return 0.0
        return float(self.p) ** -self.valuation

    def to_fraction(self) -> Fraction:
        """The rational represented by the stored digits."""
        if self.valuation is None:
            return Fraction(0)
        return Fraction(self.p) ** self.valuation * self.mantissa

    def _check_same(self, other: PadicScalar):
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"cannot combine {self.p}-adic and {other.p}-adic scalars")
        return None

    def __neg__(self) -> PadicScalar:
        if self.valuation is None:
            return self
        modulus = self.p ** self.precision
        return PadicScalar._from_unit_int(self.p, self.valuation,
                                          (-self.mantissa) % modulus, self.precision)

    def __add__(self, other: PadicScalar) -> PadicScalar:
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        if self.valuation is None:
            return other
        if other.valuation is None:
            return self
        base = min(self.valuation, other.valuation)
        # absolute precision of the sum is the coarser of the two
        top = min(self.valuation + self.precision, other.valuation + other.precision)
        width = top - base
        total = (self.mantissa * self.p ** (self.valuation - base)
                 + other.mantissa * self.p ** (other.valuation - base)) % self.p ** width
        if total == 0:
            raise PrecisionExhausted(
                f"sum cancels all {width} digits below p^{top}; valuation unknown")
        shift = _int_valuation(total, self.p)
        return PadicScalar._from_unit_int(self.p, base + shift, total // self.p ** shift,
                                          width - shift)

    def __sub__(self, other: PadicScalar) -> PadicScalar:
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: PadicScalar) -> PadicScalar:
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        if self.valuation is None or other.valuation is None:
            return PadicScalar.zero(self.p)
        width = min(self.precision, other.precision)
        product = self.mantissa * other.mantissa % self.p ** width
        return PadicScalar._from_unit_int(self.p, self.valuation + other.valuation,
                                          product, width)


@dataclass(frozen=True)
class PadicVector:
    context: PadicContext
    components: tuple[PadicScalar, ...]

    def __post_init__(self):
        if len(self.components) != self.context.n:
            raise ValueError(f"expected {self.context.n} components, got {len(self.components)}")
        if any(c.p != self.context.p for c in self.components):
            raise ValueError("components must share the context prime")

    @classmethod
    def from_rationals(cls, context: PadicContext, values: Sequence[int | Fraction],
                       precision: int = DEFAULT_PRECISION) -> PadicVector:
        return cls(context, tuple(PadicScalar.from_rational(v, context.p, precision)
                                  for v in values))

    def norm(self) -> float:
        return max(c.norm() for c in self.components)

    def valuation(self) -> int | float:
        vals = [c.valuation for c in self.components if c.valuation is not None]
        return min(vals) if vals else math.inf


def valuation(x: PadicScalar) -> int | float:
    """Exponent of p in ``x``; ``math.inf`` for zero."""
    return math.inf if x.valuation is None else x.valuation


def norm_scalar(x: PadicScalar) -> float:
    return x.norm()


def add(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    return x + y


def mul(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    return x * y


def norm_vector(v: PadicVector) -> float:
    return v.norm()


def shell_of(v: PadicVector) -> int:
    """The k with ``|v|_p = p**k``."""
    val = v.valuation()
    if val == math.inf:
        raise ZeroVectorError("the zero vector lies on no shell")
    return -int(val)


def ball_measure(ctx: PadicContext, gamma: int) -> float:
    """Haar measure ``p**(n*gamma)`` of the ball of radius ``p**gamma``."""
    exponent = ctx.n * gamma
    if exponent * math.log2(ctx.p) > 1023:
        raise OverflowError(f"p^{exponent} exceeds the float range")
    return float(ctx.p) ** exponent


def sphere_measure(ctx: PadicContext, gamma: int) -> float:
    """Haar measure ``p**(n*gamma) * (1 - p**-n)`` of the sphere of radius ``p**gamma``."""
    return ball_measure(ctx, gamma) * ctx.unit_mass


class UnitSampler:
    """Haar-distributed points of Z_p^n with i.i.d. uniform digits.

    Each component carries ``depth`` digits.  A component whose digits are all
    zero is returned as the zero scalar; a vector with every component zero is
    assigned shell ``-depth`` by :meth:`shells`.  The sampler is stateful, so
    share it across tasks only through :meth:`spawn`.
    """

    def __init__(self, ctx: PadicContext, seed: int | np.random.SeedSequence,
                 depth: int = DEFAULT_DEPTH):
        self.ctx = ctx
        self.depth = depth
        self._seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self._rng = np.random.default_rng(self._seq)

    def spawn(self, count: int) -> list[UnitSampler]:
        return [UnitSampler(self.ctx, s, self.depth) for s in self._seq.spawn(count)]

    def digits(self, count: int) -> np.ndarray:
        """Raw digit array of shape ``(count, n, depth)``."""
        return self._rng.integers(0, self.ctx.p, size=(count, self.ctx.n, self.depth))

    def shells(self, count: int) -> np.ndarray:
        return _shells_from_digits(self.digits(count), self.depth)

    def draw(self, count: int) -> list[PadicVector]:
        return list(self._vectors(self.digits(count)))

    def draw_units(self, count: int, scale: int = 0) -> list[PadicVector]:
        """Haar samples conditioned on the unit shell ``|x|_p = 1``, times ``p**scale``."""
        out: list[PadicVector] = []
        while len(out) < count:
            batch = self.digits(max(8, 2 * (count - len(out))))
            keep = (batch[:, :, 0] != 0).any(axis=1)
            out.extend(self._vectors(batch[keep], scale))
        return out[:count]

    def _vectors(self, digits: np.ndarray, scale: int = 0) -> Iterator[PadicVector]:
        p = self.ctx.p
        for row in digits.tolist():
            comps = []
            for comp in row:
                v = next((j for j, d in enumerate(comp) if d), None)
                comps.append(PadicScalar.zero(p) if v is None
                             else PadicScalar(p, v + scale, tuple(comp[v:])))
            yield PadicVector(self.ctx, tuple(comps))


def _shells_from_digits(digits: np.ndarray, depth: int) -> np.ndarray:
    nonzero = digits != 0
    first = np.where(nonzero.any(axis=2), nonzero.argmax(axis=2), depth)
    return -first.min(axis=1)


def sample_unit(ctx: PadicContext, count: int, seed: int,
                depth: int = DEFAULT_DEPTH) -> list[PadicVector]:
    """``count`` Haar samples from Z_p^n, deterministic in ``seed``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return UnitSampler(ctx, seed, depth).draw(count)
