"""Measure entropy of finite-alphabet shifts with exact rational measures.

Partitions are cylinder partitions: the blocks of depth ``d`` are the
words of length ``d`` with positive measure.  Pulling a depth-``d``
partition back ``n - 1`` times and joining gives the depth ``n + d - 1``
partition, so every ``c_n`` is an exact Boltzmann entropy.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from entrofunc.core.estimate import DEFAULT_WINDOW, EntropyEstimate, estimate_entropy
from entrofunc.core.semigroup import DEFAULT_LIMITS, CarrierFlags, Limits
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue

Word = tuple[int, ...]


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise SpecError("probabilities must be exact rationals such as \"1/3\"")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"bad probability {x!r}") from exc


@dataclass(frozen=True)
class SymbolicSystem:
    """The left shift on ``{0..a-1}^N`` with a Bernoulli or stationary Markov measure."""

    alphabet: int
    pi: tuple[Fraction, ...]
    P: tuple[tuple[Fraction, ...], ...] | None = None

    def __post_init__(self):
        a = self.alphabet
        if a < 1 or len(self.pi) != a:
            raise SpecError("distribution length must equal the alphabet size")
        if any(p < 0 for p in self.pi) or sum(self.pi) != 1:
            raise SpecError("distribution must be non-negative and sum to exactly 1")
        if self.P is not None:
            if len(self.P) != a or any(len(r) != a for r in self.P):
                raise SpecError("transition matrix must be alphabet x alphabet")
            for r in self.P:
                if any(p < 0 for p in r) or sum(r) != 1:
                    raise SpecError("transition rows must be non-negative and sum to exactly 1")
            for j in range(a):
                if sum(self.pi[i] * self.P[i][j] for i in range(a)) != self.pi[j]:
                    raise SpecError("initial distribution is not stationary")

    @classmethod
    def bernoulli(cls, p: Sequence) -> "SymbolicSystem":
        p = tuple(_frac(x) for x in p)
        return cls(len(p), p)

    @classmethod
    def markov(cls, pi: Sequence, P: Sequence[Sequence]) -> "SymbolicSystem":
        return cls(len(pi), tuple(_frac(x) for x in pi), tuple(tuple(_frac(x) for x in r) for r in P))

    @property
    def is_markov(self) -> bool:
        return self.P is not None

    def word_measure(self, w: Word) -> Fraction:
        if not w:
            return Fraction(1)
        m = self.pi[w[0]]
        for x, y in zip(w, w[1:]):
            if not m:
                return m
            m *= self.P[x][y] if self.P is not None else self.pi[y]
        return m

    def to_json(self) -> dict:
        if self.P is None:
            return {"alphabet": self.alphabet, "bernoulli": [str(p) for p in self.pi]}
        return {"alphabet": self.alphabet,
                "markov": {"pi": [str(p) for p in self.pi], "P": [[str(p) for p in r] for r in self.P]}}

    @classmethod
    def from_json(cls, data: Mapping) -> "SymbolicSystem":
        if not isinstance(data, Mapping) or set(data) - {"alphabet", "bernoulli", "markov"}:
            raise SpecError("symbolic system needs alphabet plus bernoulli or markov")
        if ("bernoulli" in data) == ("markov" in data):
            raise SpecError("give exactly one of bernoulli or markov")
        if "bernoulli" in data:
            s = cls.bernoulli(data["bernoulli"])
        else:
            m = data["markov"]
            if not isinstance(m, Mapping) or set(m) != {"pi", "P"}:
                raise SpecError("markov needs pi and P")
            s = cls.markov(m["pi"], m["P"])
        if "alphabet" in data and data["alphabet"] != s.alphabet:
            raise SpecError("alphabet size does not match the distribution")
        return s


@dataclass(frozen=True)
class CylinderPartition:
    depth: int
    blocks: tuple[tuple[Word, Fraction], ...]

    def __post_init__(self):
        if sum(m for _, m in self.blocks) != 1:
            raise SpecError("block measures must sum to 1")


def cylinders(system: SymbolicSystem, depth: int, limits: Limits = DEFAULT_LIMITS
              ) -> CylinderPartition:
    """Depth-``depth`` cylinders of positive measure, grown one letter at a time."""
    if depth < 0:
        raise SpecError("depth must be non-negative")
    blocks: list[tuple[Word, Fraction]] = [((), Fraction(1))]
    for _ in range(depth):
        blocks = _grow(system, blocks, limits)
    return CylinderPartition(depth, tuple(blocks))


def _grow(system: SymbolicSystem, blocks, limits: Limits) -> list[tuple[Word, Fraction]]:
    out = []
    for w, m in blocks:
        for y in range(system.alphabet):
            q = system.P[w[-1]][y] if (w and system.P is not None) else system.pi[y]
            if q:
                out.append((w + (y,), m * q))
    limits.check_count(len(out), "cylinder blocks")
    return out


def join_pullback(system: SymbolicSystem, xi: CylinderPartition, n: int,
                  limits: Limits = DEFAULT_LIMITS) -> CylinderPartition:
    """``xi v T^{-1} xi v ... v T^{-(n-1)} xi`` for the left shift ``T``."""
    if n < 1:
        raise SpecError("n must be at least 1")
    return cylinders(system, xi.depth + n - 1, limits)


def boltzmann(xi: CylinderPartition) -> LogValue:
    """``-sum mu log mu`` accumulated exactly over the prime atoms of each ``mu``."""
    logs: dict[int, Fraction] = {}
    # equal-measure blocks share one factorisation
    mass = Counter(m for _, m in xi.blocks if m)
    for m, k in mass.items():
        term = LogValue.log(1 / m, k * m)
        for p, q in term.log_terms:
            logs[p] = logs.get(p, Fraction(0)) + q
    return LogValue(logs=logs)


def h_mes(system: SymbolicSystem, depth: int = 1, n_max: int = 12, window: int = DEFAULT_WINDOW,
          limits: Limits = DEFAULT_LIMITS) -> EntropyEstimate:
    """``lim H(xi v ... v T^{-(n-1)} xi) / n`` for the depth-``depth`` cylinder partition.

    Only cylinder partitions are supported, so the value is restricted to
    that witness; it equals the measure entropy when the partition is
    generating, which is the case for the coordinate partition.
    """
    # the next letter only sees the last one, so words collapse to
    # (last letter, measure) classes with multiplicities
    classes = Counter((w[-1] if w else None, m) for w, m in cylinders(system, depth, limits).blocks)
    c = []
    for n in range(1, n_max + 1):
        if n > 1:
            classes = _grow_classes(system, classes, limits)
        c.append(_boltzmann_classes(classes))
    # for Bernoulli and Markov measures c_n is affine in n whenever the
    # depth is at least one, so a stable difference is the exact rate
    flags = CarrierFlags(subadditive=True, structured=True)
    return estimate_entropy(c, flags, window, witness={"depth": depth})


def _grow_classes(system: SymbolicSystem, classes: Counter, limits: Limits) -> Counter:
    out: Counter = Counter()
    for (last, m), k in classes.items():
        for y in range(system.alphabet):
            q = system.P[last][y] if (last is not None and system.P is not None) else system.pi[y]
            if q:
                out[(y, m * q)] += k
    limits.check_count(len(out), "cylinder classes")
    return out


def _boltzmann_classes(classes: Counter) -> LogValue:
    mass: Counter = Counter()
    for (_, m), k in classes.items():
        mass[m] += k
    logs: dict[int, Fraction] = {}
    for m, k in mass.items():
        for p, q in LogValue.log(1 / m, k * m).log_terms:
            logs[p] = logs.get(p, Fraction(0)) + q
    return LogValue(logs=logs)


def markov_rate(system: SymbolicSystem) -> LogValue:
    """``-sum_i pi_i sum_j P_ij log P_ij`` (``-sum p log p`` in the Bernoulli case)."""
    total = LogValue.zero()
    if system.P is None:
        for p in system.pi:
            if p:
                total = total + LogValue.log(1 / p, p)
        return total
    for i, row in enumerate(system.P):
        for p in row:
            if system.pi[i] and p:
                total = total + LogValue.log(1 / p, system.pi[i] * p)
    return total


def product_system(s: SymbolicSystem, t: SymbolicSystem) -> SymbolicSystem:
    """The product shift on pairs of letters, ``(x, y)`` encoded as ``x * |B| + y``."""
    b = t.alphabet
    pi = [p * q for p in s.pi for q in t.pi]
    if s.P is None and t.P is None:
        return SymbolicSystem(s.alphabet * b, tuple(pi))
    ps = s.P if s.P is not None else tuple(s.pi for _ in range(s.alphabet))
    pt = t.P if t.P is not None else tuple(t.pi for _ in range(b))
    P = tuple(tuple(ps[i // b][j // b] * pt[i % b][j % b] for j in range(s.alphabet * b))
              for i in range(s.alphabet * b))
    return SymbolicSystem(s.alphabet * b, tuple(pi), P)


def weak_addition_evidence(s: SymbolicSystem, t: SymbolicSystem, n_max: int = 8) -> dict:
    """``h_mes`` of the product system against the sum over the factors.

    The general formula needs extra hypotheses, so the outcome is labelled
    as evidence on this instance.
    """
    lhs = h_mes(product_system(s, t), n_max=n_max)
    a = h_mes(s, n_max=n_max)
    b = h_mes(t, n_max=n_max)
    rhs = a.value + b.value
    exact = lhs.is_exact and a.is_exact and b.is_exact
    return {"label": "evidence", "lhs": lhs.value, "rhs": rhs,
            "status": ("consistent" if lhs.value == rhs else "inconsistent") if exact else "inconclusive"}
