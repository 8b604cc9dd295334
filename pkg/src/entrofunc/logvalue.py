"""Exact norm and entropy values.

A finite exact value is ``c + sum_a q_a * log a`` where ``c`` and every
``q_a`` are rationals and the bases ``a`` are pairwise coprime integers.
Bases are primes in practice; only a cofactor too large for trial
division stays composite.  ``1`` and the logarithms of pairwise coprime
integers are linearly independent over the rationals, so two exact values
are equal iff their coefficients agree.
The rational part ``c`` carries pure cardinalities (set-theoretic norms,
word-combinatorial norms) and the logarithmic part carries
``log |group|`` style quantities; the two can be mixed and multiplied
against each other when one side is a pure count.

Besides exact values there is a symbolic infinity and a float fallback
(``approx``) for norms such as ``x**p`` whose values are irrational.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

import mpmath
from sympy import primerange

Rational = Union[int, Fraction]

_COMPARE_BITS = 128
_COMPARE_MAX_BITS = 1 << 15
_INTEGER_COMPARE_BUDGET = 1 << 20


def set_comparison_precision(bits: int) -> None:
    """Starting precision (in bits) for comparisons that need numerics."""
    global _COMPARE_BITS
    if bits < 53:
        raise ValueError("comparison precision below double precision")
    _COMPARE_BITS = int(bits)


def comparison_precision() -> int:
    return _COMPARE_BITS


_TRIAL_LIMIT = 1 << 16
# a cofactor left by trial division below this bound is prime
_PRIME_BOUND = _TRIAL_LIMIT * _TRIAL_LIMIT
_SMALL_PRIMES = tuple(primerange(2, _TRIAL_LIMIT))


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    # Trial division only.  A large cofactor is kept as a single base;
    # _refine keeps such bases pairwise coprime, which is all that exact
    # zero tests need (pairwise coprime integers > 1 have Q-linearly
    # independent logarithms).
    out: list[tuple[int, int]] = []
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _refine(terms: dict[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite ``sum q_a log a`` over a pairwise coprime set of bases."""
    items = {a: q for a, q in terms.items() if q and a > 1}
    if all(a < _PRIME_BOUND for a in items):
        return items
    while True:
        keys = sorted(items)
        split = None
        for i, a in enumerate(keys):
            for b in keys[i + 1:]:
                g = math.gcd(a, b)
                if g > 1:
                    split = (a, b, g)
                    break
            if split:
                break
        if split is None:
            return items
        a, b, g = split
        qa, qb = items.pop(a), items.pop(b)
        for base, q in ((a // g, qa), (b // g, qb), (g, qa + qb)):
            if base > 1 and q:
                items[base] = items.get(base, Fraction(0)) + q
        items = {k: v for k, v in items.items() if v}


def _as_fraction(x: Rational | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an int or Fraction, got {type(x).__name__}")


def _fraction_json(x: Fraction) -> int | str:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class LogValue:
    """Immutable exact/infinite/approximate value; see module docstring."""

    __slots__ = ("_kind", "_count", "_logs", "_approx")

    def __init__(self, kind: str = "exact", count: Rational = 0,
                 logs: Mapping[int, Rational] | Iterable[tuple[int, Rational]] = (),
                 approx: float = 0.0):
        if kind not in ("exact", "inf", "approx"):
            raise ValueError(f"unknown kind {kind!r}")
        self._kind = kind
        self._count = Fraction(0)
        self._logs: tuple[tuple[int, Fraction], ...] = ()
        self._approx = 0.0
        if kind == "exact":
            self._count = _as_fraction(count)
            items = logs.items() if isinstance(logs, Mapping) else logs
            acc: dict[int, Fraction] = {}
            for p, q in items:
                q = _as_fraction(q)
                if q:
                    acc[int(p)] = acc.get(int(p), Fraction(0)) + q
            self._logs = tuple(sorted(_refine(acc).items()))
        elif kind == "approx":
            x = float(approx)
            if math.isnan(x):
                raise ValueError("NaN is not a value")
            if math.isinf(x):
                self._kind = "inf"
            else:
                self._approx = x

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "LogValue":
        return cls()

    @classmethod
    def inf(cls) -> "LogValue":
        return cls("inf")

    @classmethod
    def count(cls, c: Rational) -> "LogValue":
        """A pure (log-free) quantity such as a cardinality."""
        return cls(count=c)

    @classmethod
    def log(cls, m: Rational | str, q: Rational = 1) -> "LogValue":
        """``q * log m`` for a positive rational ``m``."""
        m = _as_fraction(m)
        if m <= 0:
            raise ValueError("log of a non-positive number")
        q = _as_fraction(q)
        logs: dict[int, Fraction] = {}
        for p, e in _factor(m.numerator) if m.numerator > 1 else ():
            logs[p] = logs.get(p, Fraction(0)) + q * e
        for p, e in _factor(m.denominator) if m.denominator > 1 else ():
            logs[p] = logs.get(p, Fraction(0)) - q * e
        return cls(logs=logs)

    @classmethod
    def approx(cls, x: float) -> "LogValue":
        return cls("approx", approx=x)

    # inspection -------------------------------------------------------

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def is_exact(self) -> bool:
        return self._kind == "exact"

    @property
    def is_infinite(self) -> bool:
        return self._kind == "inf"

    @property
    def is_zero(self) -> bool:
        if self._kind == "exact":
            return not self._count and not self._logs
        return self._kind == "approx" and self._approx == 0.0

    @property
    def is_pure_count(self) -> bool:
        return self._kind == "exact" and not self._logs

    @property
    def count_part(self) -> Fraction:
        return self._count

    @property
    def log_terms(self) -> tuple[tuple[int, Fraction], ...]:
        return self._logs

    def __float__(self) -> float:
        if self._kind == "inf":
            return math.inf
        if self._kind == "approx":
            return self._approx
        return float(self._count) + sum(float(q) * math.log(p) for p, q in self._logs)

    def to_mpf(self, bits: int | None = None):
        with mpmath.workprec(bits or _COMPARE_BITS):
            if self._kind == "inf":
                return mpmath.inf
            if self._kind == "approx":
                return mpmath.mpf(self._approx)
            total = mpmath.mpf(self._count.numerator) / self._count.denominator
            for p, q in self._logs:
                total += (mpmath.mpf(q.numerator) / q.denominator) * mpmath.log(p)
            return total

    # ordering ---------------------------------------------------------

    def sign(self) -> int:
        if self._kind == "inf":
            return 1
        if self._kind == "approx":
            return (self._approx > 0) - (self._approx < 0)
        if not self._logs:
            return (self._count > 0) - (self._count < 0)
        if not self._count:
            s = self._integer_log_sign()
            if s is not None:
                return s
        return self._numeric_sign()

    def _integer_log_sign(self) -> int | None:
        lcm = 1
        for _, q in self._logs:
            lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
        bits = sum(abs(int(q * lcm)) * p.bit_length() for p, q in self._logs)
        if bits > _INTEGER_COMPARE_BUDGET:
            return None
        num = den = 1
        for p, q in self._logs:
            e = int(q * lcm)
            if e > 0:
                num *= p ** e
            else:
                den *= p ** (-e)
        return (num > den) - (num < den)

    def _numeric_sign(self) -> int:
        # c + log r with c rational nonzero never vanishes (e^c is
        # transcendental), so escalation terminates in exact arithmetic.
        bits = _COMPARE_BITS
        while True:
            with mpmath.workprec(bits):
                val = self.to_mpf(bits)
                if abs(val) > mpmath.ldexp(1, -(bits // 2)):
                    return 1 if val > 0 else -1
            if bits >= _COMPARE_MAX_BITS:
                raise ArithmeticError("comparison did not resolve at maximum precision")
            bits *= 2

    def _cmp(self, other: "LogValue") -> int:
        other = _coerce(other)
        if self._kind == "inf" or other._kind == "inf":
            return (self._kind == "inf") - (other._kind == "inf")
        if self._kind == "approx" or other._kind == "approx":
            a, b = float(self), float(other)
            return (a > b) - (a < b)
        return (self - other).sign()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = LogValue.count(other)
        if not isinstance(other, LogValue):
            return NotImplemented
        if self._kind != other._kind:
            if "approx" in (self._kind, other._kind) and "inf" not in (self._kind, other._kind):
                return float(self) == float(other)
            return False
        if self._kind == "inf":
            return True
        if self._kind == "approx":
            return self._approx == other._approx
        if self._count != other._count:
            return False
        if self._logs == other._logs:
            return True
        if all(p < _PRIME_BOUND for p, _ in self._logs + other._logs):
            return False
        return (self - other).is_zero

    def __hash__(self) -> int:
        if self._kind == "exact":
            # log parts over unfactored bases have no canonical form
            return hash(self._count)
        if self._kind == "inf":
            return hash(math.inf)
        return hash(self._approx)

    def __lt__(self, other: "LogValue") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "LogValue") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "LogValue") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "LogValue") -> bool:
        return self._cmp(other) >= 0

    # arithmetic -------------------------------------------------------

    def __add__(self, other: "LogValue | Rational") -> "LogValue":
        other = _coerce(other)
        if self._kind == "inf" or other._kind == "inf":
            return LogValue.inf()
        if self._kind == "approx" or other._kind == "approx":
            return LogValue.approx(float(self) + float(other))
        logs = dict(self._logs)
        for p, q in other._logs:
            logs[p] = logs.get(p, Fraction(0)) + q
        return LogValue(count=self._count + other._count, logs=logs)

    __radd__ = __add__

    def __neg__(self) -> "LogValue":
        if self._kind == "inf":
            raise ArithmeticError("negating infinity")
        if self._kind == "approx":
            return LogValue.approx(-self._approx)
        return LogValue(count=-self._count, logs=[(p, -q) for p, q in self._logs])

    def __sub__(self, other: "LogValue | Rational") -> "LogValue":
        other = _coerce(other)
        if other._kind == "inf":
            raise ArithmeticError("subtracting infinity")
        if self._kind == "inf":
            return self
        return self + (-other)

    def __rsub__(self, other: Rational) -> "LogValue":
        return _coerce(other) - self

    def __mul__(self, other: "LogValue | Rational") -> "LogValue":
        if isinstance(other, LogValue):
            if other.is_pure_count:
                return self._scale(other._count)
            if self.is_pure_count:
                return other._scale(self._count)
            if self.is_zero or other.is_zero:
                return LogValue.zero()
            if self._kind == "inf" or other._kind == "inf":
                return LogValue.inf()
            if self._kind == "approx" or other._kind == "approx":
                return LogValue.approx(float(self) * float(other))
            raise ArithmeticError("product of two logarithmic values is not representable")
        return self._scale(_as_fraction(other))

    __rmul__ = __mul__

    def _scale(self, k: Fraction) -> "LogValue":
        # infinity times zero is zero: the coefficient convention for bridges
        if self._kind == "inf":
            if k < 0:
                raise ArithmeticError("negative multiple of infinity")
            return LogValue.zero() if k == 0 else self
        if self._kind == "approx":
            return LogValue.approx(self._approx * float(k))
        return LogValue(count=self._count * k, logs=[(p, q * k) for p, q in self._logs])

    def __truediv__(self, k: Rational) -> "LogValue":
        k = _as_fraction(k)
        if k == 0:
            raise ZeroDivisionError("LogValue division by zero")
        return self._scale(1 / k)

    def ratio(self, other: "LogValue") -> Fraction | None:
        """``self / other`` when it is rational, else ``None``."""
        if not (self.is_exact and other.is_exact) or other.is_zero:
            return None
        if other._count:
            k = self._count / other._count
        elif other._logs:
            k = self._logs[0][1] / other._logs[0][1] if self._logs else Fraction(0)
        else:
            return None
        return k if other._scale(k) == self else None

    # rendering --------------------------------------------------------

    def qm(self) -> tuple[Fraction, Fraction] | None:
        """``(q, m)`` with ``self == q log m``, ``q > 0`` and ``m > 1``.

        Returns ``None`` when a count part is present.  ``m`` is an integer
        unless the log coefficients have mixed signs.
        """
        if self._kind != "exact" or self._count:
            return None
        if not self._logs:
            return Fraction(0), Fraction(1)
        num = 0
        den = 1
        for _, q in self._logs:
            num = math.gcd(num, q.numerator)
            den = den * q.denominator // math.gcd(den, q.denominator)
        g = Fraction(num, den)
        m = Fraction(1)
        for p, q in self._logs:
            m *= Fraction(p) ** int(q / g)
        if m < 1:
            g, m = -g, 1 / m
        return g, m

    def to_json(self) -> dict:
        if self._kind == "inf":
            return {"kind": "inf", "float": "inf"}
        if self._kind == "approx":
            return {"kind": "approx", "float": _float_json(self._approx)}
        out: dict = {"kind": "exact"}
        if self._count or not self._logs:
            out["count"] = _fraction_json(self._count)
        if self._logs:
            q, m = LogValue(logs=self._logs).qm()
            out["q"] = _fraction_json(q)
            out["m"] = _fraction_json(m)
            out["terms"] = [[p, _fraction_json(c)] for p, c in self._logs]
        out["float"] = _float_json(float(self))
        return out

    @classmethod
    def from_json(cls, data: dict | str | int) -> "LogValue":
        if isinstance(data, (int, str)) and not isinstance(data, bool):
            if data == "inf":
                return cls.inf()
            return cls.count(_as_fraction(data))
        kind = data.get("kind", "exact")
        if kind == "inf":
            return cls.inf()
        if kind == "approx":
            return cls.approx(float(data["float"]))
        value = cls.count(_as_fraction(data.get("count", 0)))
        if "terms" in data:
            value = value + cls(logs=[(int(p), _as_fraction(c)) for p, c in data["terms"]])
        elif "q" in data:
            value = value + cls.log(_as_fraction(data["m"]), _as_fraction(data["q"]))
        return value

    def __str__(self) -> str:
        if self._kind == "inf":
            return "inf"
        if self._kind == "approx":
            return f"~{self._approx:.12g}"
        parts = []
        if self._count or not self._logs:
            parts.append(str(self._count))
        if self._logs:
            q, m = LogValue(logs=self._logs).qm()
            parts.append(f"log {m}" if q == 1 else f"{q}*log {m}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LogValue({self})"


def _float_json(x: float) -> float:
    # fixed 12 significant digits keeps reports byte-stable across platforms
    return float(f"{x:.12g}")


def _coerce(x: "LogValue | Rational") -> LogValue:
    if isinstance(x, LogValue):
        return x
    return LogValue.count(_as_fraction(x))


def lv_max(values: Iterable[LogValue]) -> LogValue:
    best: LogValue | None = None
    for v in values:
        if best is None or v > best:
            best = v
    if best is None:
        raise ValueError("max of no values")
    return best


def lv_sum(values: Iterable[LogValue]) -> LogValue:
    total = LogValue.zero()
    for v in values:
        total = total + v
    return total
