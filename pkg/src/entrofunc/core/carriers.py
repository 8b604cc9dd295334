"""Concrete normed semigroups and the flows used as reference instances."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from entrofunc.core.estimate import Upgrade, declared_cofinal, scaling_upgrade
from entrofunc.core.semigroup import Carrier, CarrierFlags, Flow
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue


# (N, +) -------------------------------------------------------------------

def _is_nat(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def naturals(norm: str = "log", p: Fraction | float | None = None, a: int | None = None) -> Carrier:
    """``(N, +)`` with one of the norms ``log`` (log(x+1)), ``linear`` (x),
    ``power`` (x**p, float valued) or ``avoid`` (0 on multiples of ``a``, else x)."""
    if norm == "log":
        fn = lambda x: LogValue.log(x + 1)
        flags = CarrierFlags(subadditive=True, arithmetic=True, monotone_norm=True,
                             d_monotone=True, commutative=True, has_identity=True)
    elif norm == "linear":
        fn = LogValue.count
        flags = CarrierFlags(subadditive=True, monotone_norm=True, d_monotone=True,
                             commutative=True, has_identity=True)
    elif norm == "power":
        if p is None or not 0 < float(p) <= 1:
            raise SpecError("power norm needs 0 < p <= 1")
        pf = float(p)
        fn = lambda x: LogValue.approx(float(x) ** pf) if x else LogValue.zero()
        flags = CarrierFlags(subadditive=True, monotone_norm=True, d_monotone=True,
                             commutative=True, has_identity=True)
    elif norm == "avoid":
        if a is None or a < 2:
            raise SpecError("avoid norm needs a >= 2")
        fn = lambda x: LogValue.zero() if x % a == 0 else LogValue.count(x)
        flags = CarrierFlags(commutative=True, has_identity=True)
    else:
        raise SpecError(f"unknown norm on N: {norm!r}")
    return Carrier(f"N[{norm}]", lambda x, y: x + y, fn, flags, leq=lambda x, y: x <= y,
                   identity=0, size=lambda x: x.bit_length(), contains=_is_nat)


def multiply_flow(carrier: Carrier, b: int) -> Flow:
    """``x -> b x`` on a carrier built by :func:`naturals`."""
    if b < 1:
        raise SpecError("multiplier must be positive")
    contractive = carrier.name == "N[log]" and b == 1

    def certify(x, value: LogValue):
        # T_n = x (b^n - 1)/(b - 1), so log(T_n + 1) - n log b tends to log(x/(b-1))
        if carrier.name == "N[log]" and b >= 2 and x >= 1 and value == LogValue.log(b):
            return f"T_n = x(b^n-1)/(b-1) with b={b}; log(T_n+1) - n log b is bounded"
        return None

    return Flow(carrier, lambda x: b * x, contractive=contractive, name=f"mul{b}", certify=certify,
                meta={"kind": "naturals", "b": b})


def identity_flow(carrier: Carrier) -> Flow:
    return Flow(carrier, lambda x: x, contractive=True, inverse=lambda x: x, name="id")


def naturals_scaling_upgrade() -> Upgrade:
    """Cofinality for additive endomorphisms of ``(N, +)`` under the linear norm."""
    return scaling_upgrade("v(kx) = k v(x) and T_n(phi, kx) = k T_n(phi, x), so h(phi, kx) = k h(phi, x)")


# free semigroup over Z-indexed letters ----------------------------------------

def ascent_norm(w: tuple[int, ...]) -> LogValue:
    """One plus the number of adjacent increasing index pairs."""
    return LogValue.count(1 + sum(1 for a, b in zip(w, w[1:]) if a < b))


def run_norm(w: tuple[int, ...]) -> LogValue:
    """Length of the longest block of consecutive indices ``i, i+1, i+2, ...``."""
    best = run = 1
    for a, b in zip(w, w[1:]):
        run = run + 1 if b == a + 1 else 1
        best = max(best, run)
    return LogValue.count(best)


def free_words(norm: str = "runs") -> Carrier:
    if norm == "runs":
        fn = run_norm
    elif norm == "ascents":
        fn = ascent_norm
    else:
        raise SpecError(f"unknown word norm {norm!r}")
    return Carrier(f"Words[{norm}]", lambda u, v: u + v, fn,
                   CarrierFlags(subadditive=True),
                   size=len,
                   contains=lambda w: isinstance(w, tuple) and len(w) > 0
                   and all(isinstance(i, int) for i in w))


def index_shift_flow(carrier: Carrier, step: int = 1) -> Flow:
    """The automorphism sending each letter ``x_i`` to ``x_{i+step}``."""
    return Flow(carrier, lambda w: tuple(i + step for i in w),
                inverse=lambda w: tuple(i - step for i in w), name=f"shift{step:+d}",
                contractive=True)


def letter_upgrade(side: str) -> Upgrade:
    """Longer words have bounded run norm along trajectories, letters give 1 on
    the right and 0 on the left, and all letters are conjugate under the shift."""
    target = LogValue.count(1) if side == "right" else LogValue.zero()

    def apply(estimates):
        if all(e.is_exact and e.value == target and len(e.witness) == 1 for e in estimates):
            return target
        return None

    return Upgrade("words of length k > 1 keep run norm below 2k on both trajectory sides", apply)


# finite subsets of Z under union ------------------------------------------

def finite_sets() -> Carrier:
    """Finite subsets of the integers under union, normed by cardinality."""
    return Carrier("FinSets", lambda a, b: a | b, lambda a: LogValue.count(len(a)),
                   CarrierFlags(subadditive=True, arithmetic=True, monotone_norm=True,
                                d_monotone=True, commutative=True, has_identity=True,
                                structured=True),
                   leq=lambda a, b: a <= b, identity=frozenset(), size=len,
                   contains=lambda a: isinstance(a, frozenset))


def translate_flow(step: int = 1, modulus: int | None = None) -> Flow:
    """``A -> A + step`` on finite subsets; reduced mod ``modulus`` when given."""
    if modulus:
        fwd = lambda a: frozenset((x + step) % modulus for x in a)
        inv = lambda a: frozenset((x - step) % modulus for x in a)
    else:
        fwd = lambda a: frozenset(x + step for x in a)
        inv = lambda a: frozenset(x - step for x in a)
    return Flow(finite_sets(), fwd, contractive=True, inverse=inv,
                name=f"translate{step:+d}" + (f"mod{modulus}" if modulus else ""))


# finite normed monoids and their Bernoulli sums ------------------------------

@dataclass(frozen=True)
class FiniteMonoid:
    name: str
    elements: tuple[Hashable, ...]
    op: Callable[[Hashable, Hashable], Hashable]
    unit: Hashable
    norm: Mapping[Hashable, LogValue]

    def __post_init__(self):
        if self.unit not in self.elements:
            raise SpecError("unit must be an element")
        if not self.norm[self.unit].is_zero:
            raise SpecError("the unit must have norm 0 for the Bernoulli sum norm to be finite")
        for x in self.elements:
            if self.op(self.unit, x) != x or self.op(x, self.unit) != x:
                raise SpecError(f"{self.unit!r} is not a two-sided unit")

    def is_subadditive(self) -> bool:
        return all(self.norm[self.op(x, y)] <= self.norm[x] + self.norm[y]
                   for x in self.elements for y in self.elements)

    def is_commutative(self) -> bool:
        return all(self.op(x, y) == self.op(y, x) for x in self.elements for y in self.elements)

    def max_norm(self) -> LogValue:
        best = LogValue.zero()
        for x in self.elements:
            if self.norm[x] > best:
                best = self.norm[x]
        return best


def cyclic_monoid(n: int, norm: Mapping[int, LogValue]) -> FiniteMonoid:
    return FiniteMonoid(f"Z{n}", tuple(range(n)), lambda x, y: (x + y) % n, 0, dict(norm))


def chain_semilattice(k: int) -> FiniteMonoid:
    """``{0, ..., k}`` under max with norm ``x``."""
    return FiniteMonoid(f"Chain{k}", tuple(range(k + 1)), max, 0,
                        {x: LogValue.count(x) for x in range(k + 1)})


def sample_monoids() -> list[FiniteMonoid]:
    """Three small monoids used for Bernoulli checks."""
    z2 = cyclic_monoid(2, {0: LogValue.zero(), 1: LogValue.log(2)})
    z4 = cyclic_monoid(4, {0: LogValue.zero(), 1: LogValue.log(2), 2: LogValue.log(3),
                           3: LogValue.log(2)})
    return [z2, chain_semilattice(2), z4]


def bernoulli_carrier(m: FiniteMonoid) -> Carrier:
    """Finitely supported sequences over ``m`` with the sum norm.

    Elements are tuples with trailing units stripped.
    """
    unit = m.unit

    def trim(t: tuple) -> tuple:
        end = len(t)
        while end and t[end - 1] == unit:
            end -= 1
        return t[:end]

    def op(x: tuple, y: tuple) -> tuple:
        n = max(len(x), len(y))
        x = x + (unit,) * (n - len(x))
        y = y + (unit,) * (n - len(y))
        return trim(tuple(m.op(a, b) for a, b in zip(x, y)))

    def norm(x: tuple) -> LogValue:
        total = LogValue.zero()
        for a in x:
            total = total + m.norm[a]
        return total

    flags = CarrierFlags(subadditive=m.is_subadditive(), commutative=m.is_commutative(),
                         has_identity=True)
    return Carrier(f"B({m.name})", op, norm, flags, identity=(),
                   size=len,
                   contains=lambda x: isinstance(x, tuple) and all(a in m.elements for a in x)
                   and trim(x) == x)


def right_bernoulli_flow(m: FiniteMonoid) -> Flow:
    carrier = bernoulli_carrier(m)
    return Flow(carrier, lambda x: (m.unit,) + x if x else x, contractive=True,
                name=f"beta_{m.name}",
                meta={"monoid": m})


def left_bernoulli_flow(m: FiniteMonoid) -> Flow:
    carrier = bernoulli_carrier(m)
    return Flow(carrier, lambda x: x[1:], contractive=True, name=f"{m.name}_beta", meta={"monoid": m})


def letter_witnesses(m: FiniteMonoid) -> list[tuple]:
    return [(x,) for x in m.elements if x != m.unit] or [()]


def bernoulli_upgrade(m: FiniteMonoid) -> Upgrade:
    """Every finitely supported sequence has entropy ``v(x_k ... x_0)`` for some
    product of letters, which is again a letter value."""
    return declared_cofinal(f"single letters realise sup v over {m.name}")


# products and coproducts ------------------------------------------------------

def product_carrier(a: Carrier, b: Carrier) -> Carrier:
    """Direct product with the max norm."""
    fa, fb = a.flags, b.flags
    flags = CarrierFlags(
        subadditive=fa.subadditive and fb.subadditive,
        arithmetic=fa.arithmetic and fb.arithmetic,
        commutative=fa.commutative and fb.commutative,
        d_monotone=fa.d_monotone and fb.d_monotone,
        has_identity=fa.has_identity and fb.has_identity,
        structured=fa.structured and fb.structured,
    )

    def norm(x):
        u, v = a.norm(x[0]), b.norm(x[1])
        return u if u >= v else v

    ident = (a.identity, b.identity) if flags.has_identity else None
    return Carrier(f"{a.name}x{b.name}", lambda x, y: (a.op(x[0], y[0]), b.op(x[1], y[1])),
                   norm, flags, identity=ident,
                   size=lambda x: max((a.size or (lambda _: 0))(x[0]), (b.size or (lambda _: 0))(x[1])))


def coproduct_carrier(a: Carrier, b: Carrier) -> Carrier:
    """Direct sum of two monoids with the sum norm."""
    if not (a.flags.has_identity and b.flags.has_identity):
        raise SpecError("the coproduct needs monoids")
    fa, fb = a.flags, b.flags
    flags = CarrierFlags(
        subadditive=fa.subadditive and fb.subadditive,
        arithmetic=fa.arithmetic and fb.arithmetic,
        commutative=fa.commutative and fb.commutative,
        d_monotone=fa.d_monotone and fb.d_monotone,
        has_identity=True,
        structured=fa.structured and fb.structured,
    )
    return Carrier(f"{a.name}+{b.name}", lambda x, y: (a.op(x[0], y[0]), b.op(x[1], y[1])),
                   lambda x: a.norm(x[0]) + b.norm(x[1]), flags, identity=(a.identity, b.identity),
                   size=lambda x: max((a.size or (lambda _: 0))(x[0]), (b.size or (lambda _: 0))(x[1])))


def pair_flow(carrier: Carrier, f: Flow, g: Flow) -> Flow:
    inv = None
    if f.inverse is not None and g.inverse is not None:
        inv = lambda x: (f.inverse(x[0]), g.inverse(x[1]))
    return Flow(carrier, lambda x: (f.endo(x[0]), g.endo(x[1])),
                contractive=f.contractive and g.contractive, inverse=inv,
                name=f"({f.name},{g.name})")


def pairs(xs: Sequence, ys: Sequence) -> list[tuple]:
    return [(x, y) for x in xs for y in ys]
