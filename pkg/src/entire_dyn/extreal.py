"""Level-index magnitudes.

An :class:`ExtReal` stores a nonnegative number as ``exp`` applied ``level``
times to a machine float ``base``.  This is enough to compare orbit
magnitudes such as ``exp(exp(exp(10)))`` against iterated maximum moduli
without ever forming them.

Two representations of the same value can coexist: ``exp`` simply bumps the
level, so ``ExtReal(1, 2.0)`` and ``ExtReal(0, e**2)`` are equal.  Equality,
ordering and hashing go through :meth:`ExtReal.canonical`, which pushes the
value down to the lowest level whose base stays below ``BASE_CAP``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

BASE_CAP = 1e300
LOG_CAP = math.log(BASE_CAP)  # ~690.78; exp(base) < BASE_CAP below this


@dataclass(frozen=True, eq=False)
class ExtReal:
    level: int
    base: float

    def __post_init__(self):
        level, base = int(self.level), float(self.base)
        if level < 0:
            raise ValueError("level must be nonnegative")
        if not base >= 0.0 or math.isinf(base):
            raise ValueError(f"base must be finite and nonnegative, got {base!r}")
        while base >= BASE_CAP:
            base = math.log(base)
            level += 1
        while level >= 1 and base < 1.0:
            base = math.exp(base)
            level -= 1
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "base", base)

    # -- construction -----------------------------------------------------
    @classmethod
    def from_float(cls, x: float) -> "ExtReal":
        x = float(x)
        if math.isinf(x):
            raise OverflowError("cannot represent inf; use from_log")
        return cls(0, abs(x))

    @classmethod
    def from_log(cls, log_value) -> "ExtReal":
        """Return ``exp(log_value)``; ``log_value`` may be a float or an ExtReal."""
        if isinstance(log_value, ExtReal):
            return log_value.exp()
        log_value = float(log_value)
        if log_value == -math.inf:
            return ZERO
        if log_value < LOG_CAP:
            return cls(0, math.exp(log_value))
        return cls(1, log_value)

    @classmethod
    def coerce(cls, x) -> "ExtReal":
        return x if isinstance(x, ExtReal) else cls.from_float(x)

    # -- normal form ------------------------------------------------------
    def canonical(self) -> tuple[int, float]:
        level, base = self.level, self.base
        while level >= 1 and base < LOG_CAP:
            base = math.exp(base)
            level -= 1
        return level, base

    def __float__(self) -> float:
        level, base = self.canonical()
        return base if level == 0 else math.inf

    def is_finite_float(self) -> bool:
        return self.canonical()[0] == 0

    # -- elementary maps --------------------------------------------------
    def exp(self) -> "ExtReal":
        if self.level == 0 and self.base < 1.0:
            return ExtReal(0, math.exp(self.base))
        return ExtReal(self.level + 1, self.base)

    def log(self) -> "ExtReal":
        """Natural log; the value must be at least 1."""
        if self.level >= 1:
            return ExtReal(self.level - 1, self.base)
        if self.base < 1.0:
            raise ValueError("log of a value below 1 is negative")
        return ExtReal(0, math.log(self.base))

    def log_float(self) -> float:
        """``log`` of the value as a float (``inf`` past level 1, ``-inf`` at 0)."""
        level, base = self.canonical()
        if level == 0:
            return math.log(base) if base > 0.0 else -math.inf
        if level == 1:
            return base
        return math.inf

    def add(self, c: float) -> "ExtReal":
        """Return ``self + c`` (``c`` may be negative; result must stay >= 0)."""
        c = float(c)
        if c == 0.0:
            return self
        level, base = self.canonical()
        if level == 0:
            total = base + c
            if total < 0.0:
                if total > -1e-12 * max(1.0, abs(c)):
                    return ZERO
                raise ValueError("ExtReal.add would go negative")
            if math.isinf(total):
                return ExtReal(1, math.log(base) + math.log1p(c / base))
            return ExtReal(0, total)
        if level == 1:
            if c > 0.0:
                return ExtReal(1, _logaddexp(base, math.log(c)))
            shift = math.log(-c) - base
            if shift >= 0.0:
                raise ValueError("ExtReal.add would go negative")
            return ExtReal(1, base + math.log1p(-math.exp(shift)))
        return self  # c is below the resolution of the base at level >= 2

    def scale(self, c: float) -> "ExtReal":
        """Return ``c * self`` for ``c > 0``."""
        c = float(c)
        if c <= 0.0:
            if c == 0.0:
                return ZERO
            raise ValueError("scale factor must be positive")
        if c == 1.0:
            return self
        level, base = self.canonical()
        if level == 0:
            prod = base * c
            if math.isinf(prod):
                return ExtReal(1, math.log(base) + math.log(c))
            return ExtReal(0, prod)
        return ExtReal(level - 1, base).add(math.log(c)).exp()

    def pow(self, a: float) -> "ExtReal":
        """Return ``self ** a`` for ``a > 0``."""
        a = float(a)
        if a <= 0.0:
            raise ValueError("exponent must be positive")
        level, base = self.canonical()
        if level == 0:
            if base == 0.0:
                return ZERO
            lg = a * math.log(base)
            return ExtReal.from_log(lg)
        return ExtReal(level - 1, base).scale(a).exp()

    def plus(self, other: "ExtReal") -> "ExtReal":
        """Sum of two ExtReal values."""
        other = ExtReal.coerce(other)
        big, small = (self, other) if self >= other else (other, self)
        small_f = float(small)
        if small_f < math.inf:
            return big.add(small_f)
        (lb, bb), (ls, bs) = big.canonical(), small.canonical()
        if lb == ls == 1:
            return ExtReal(1, _logaddexp(bb, bs))
        return big  # the smaller term is below the resolution of the larger

    def multiply(self, other: "ExtReal") -> "ExtReal":
        other = ExtReal.coerce(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        a, b = self.canonical(), other.canonical()
        if a[0] == 0 and b[0] == 0 and not math.isinf(a[1] * b[1]):
            return ExtReal(0, a[1] * b[1])
        big, small = (self, other) if self >= other else (other, self)
        if small < ONE:
            return big.scale(float(small))
        return big.log().plus(small.log()).exp()

    def is_zero(self) -> bool:
        return self.level == 0 and self.base == 0.0

    # -- comparison -------------------------------------------------------
    def _key(self):
        return self.canonical()

    def __eq__(self, other):
        if isinstance(other, (int, float)):
            other = ExtReal.from_float(other) if other >= 0 and not math.isinf(other) else None
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _cmp_other(self, other):
        if isinstance(other, ExtReal):
            return other._key()
        other = float(other)
        if other == math.inf:
            return (math.inf, math.inf)
        if other < 0.0:
            return (-1, 0.0)
        return ExtReal.from_float(other)._key()

    def __lt__(self, other):
        return self._key() < self._cmp_other(other)

    def __le__(self, other):
        return self._key() <= self._cmp_other(other)

    def __gt__(self, other):
        return self._key() > self._cmp_other(other)

    def __ge__(self, other):
        return self._key() >= self._cmp_other(other)

    def isclose(self, other: "ExtReal", rel: float = 1e-9) -> bool:
        """Same canonical level and bases equal to relative tolerance ``rel``."""
        a, b = self.canonical(), ExtReal.coerce(other).canonical()
        return a[0] == b[0] and math.isclose(a[1], b[1], rel_tol=rel, abs_tol=0.0)

    def __repr__(self):
        return f"ExtReal(level={self.level}, base={self.base!r})"

    def __str__(self):
        level, base = self.canonical()
        if level == 0:
            return f"{base:.12g}"
        return "exp^%d(%.12g)" % (level, base)


def _logaddexp(a: float, b: float) -> float:
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def ext_max(values):
    return max(values, key=lambda v: v._key())


ZERO = ExtReal(0, 0.0)
ONE = ExtReal(0, 1.0)
