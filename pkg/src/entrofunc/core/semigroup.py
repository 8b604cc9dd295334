"""Normed semigroup carriers, flows and trajectory norms."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Hashable, Optional

from entrofunc.errors import ContractivityError, ResourceLimitError, SpecError
from entrofunc.logvalue import LogValue

Element = Hashable


@dataclass(frozen=True)
class CarrierFlags:
    """Declared properties of a normed semigroup.

    ``structured`` marks carriers (semilattices of finite sets, subgroups,
    covers) whose trajectory norms are known to become arithmetic
    progressions; slope detection on them is reported as ``exact``
    rather than ``exact_heuristic``.
    """

    subadditive: bool = False
    arithmetic: bool = False
    monotone_norm: bool = False
    d_monotone: bool = False
    commutative: bool = False
    has_identity: bool = False
    structured: bool = False


@dataclass(frozen=True)
class Limits:
    """Hard resource ceilings; exceeding one raises ResourceLimitError."""

    max_element_size: int = 1 << 16
    max_cardinality: int = 1 << 22

    @classmethod
    def from_env(cls) -> "Limits":
        cap_mb = os.environ.get("ENTROFUNC_CAP_MB")
        if not cap_mb:
            return cls()
        try:
            mb = int(cap_mb)
        except ValueError as exc:
            raise SpecError(f"ENTROFUNC_CAP_MB must be an integer, got {cap_mb!r}") from exc
        # roughly 64 bytes per enumerated item
        return cls(max_cardinality=max(1, mb * (1 << 20) // 64))

    def check_size(self, size: int, what: str = "element") -> None:
        if size > self.max_element_size:
            raise ResourceLimitError(
                f"{what} size {size} exceeds the configured ceiling {self.max_element_size}")

    def check_count(self, count: int, what: str = "enumeration") -> None:
        if count > self.max_cardinality:
            raise ResourceLimitError(
                f"{what} of {count} items exceeds the configured ceiling {self.max_cardinality}")


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Carrier:
    name: str
    op: Callable[[Element, Element], Element]
    norm: Callable[[Element], LogValue]
    flags: CarrierFlags = CarrierFlags()
    leq: Optional[Callable[[Element, Element], bool]] = None
    identity: Optional[Element] = None
    size: Optional[Callable[[Element], int]] = None
    contains: Optional[Callable[[Element], bool]] = None

    def mul(self, *xs: Element) -> Element:
        acc = xs[0]
        for y in xs[1:]:
            acc = self.op(acc, y)
        return acc

    def power(self, x: Element, n: int) -> Element:
        if n < 1:
            raise ValueError("semigroup powers start at 1")
        acc = x
        for _ in range(n - 1):
            acc = self.op(acc, x)
        return acc


@dataclass(frozen=True)
class Flow:
    """A carrier together with an endomorphism.

    ``inverse`` is set for automorphisms.  ``certify`` optionally receives
    ``(witness, value)`` for a heuristically exact slope and returns a
    closed-form justification string when the value is provably correct.
    """

    carrier: Carrier
    endo: Callable[[Element], Element]
    contractive: bool = False
    inverse: Optional[Callable[[Element], Element]] = None
    name: str = ""
    certify: Optional[Callable[[Element, LogValue], Optional[str]]] = None
    meta: dict = field(default_factory=dict, compare=False)

    def iterate(self, x: Element, k: int) -> Element:
        for _ in range(k):
            x = self.endo(x)
        return x

    def power(self, k: int) -> "Flow":
        if k < 1:
            raise ValueError("flow powers start at 1")
        endo = self.endo
        inv = self.inverse

        def endo_k(x: Element) -> Element:
            for _ in range(k):
                x = endo(x)
            return x

        inv_k = None
        if inv is not None:
            def inv_k(x: Element) -> Element:
                for _ in range(k):
                    x = inv(x)
                return x

        return replace(self, endo=endo_k, inverse=inv_k, name=f"{self.name}^{k}", certify=None)

    def inverted(self) -> "Flow":
        if self.inverse is None:
            raise SpecError(f"flow {self.name!r} has no inverse")
        return replace(self, endo=self.inverse, inverse=self.endo,
                       name=f"{self.name}^-1", certify=None)


def _check_member(flow: Flow, x: Element) -> None:
    contains = flow.carrier.contains
    if contains is not None and not contains(x):
        raise SpecError(f"{x!r} is not an element of {flow.carrier.name}")


def trajectory(flow: Flow, x: Element, n_max: int, side: str = "right",
               limits: Limits = DEFAULT_LIMITS) -> list[Element]:
    """Elements ``T_1, ..., T_{n_max}``.

    Right: ``T_{n+1} = T_n * phi^n(x)``.  Left: ``T_{n+1} = phi^n(x) * T_n``.
    """
    if n_max < 1:
        raise SpecError("n_max must be at least 1")
    if side not in ("right", "left"):
        raise SpecError(f"side must be 'right' or 'left', got {side!r}")
    _check_member(flow, x)
    carrier = flow.carrier
    size = carrier.size
    out = [x]
    t = x
    y = x
    for _ in range(n_max - 1):
        z = flow.endo(y)
        if flow.contractive and carrier.norm(z) > carrier.norm(y):
            raise ContractivityError(
                f"flow {flow.name!r} flagged contractive increased the norm of {y!r}")
        y = z
        t = carrier.op(t, y) if side == "right" else carrier.op(y, t)
        if size is not None:
            limits.check_size(size(t), "trajectory element")
        out.append(t)
    return out


def trajectory_norms(flow: Flow, x: Element, n_max: int, side: str = "right",
                     limits: Limits = DEFAULT_LIMITS) -> list[LogValue]:
    norm = flow.carrier.norm
    return [norm(t) for t in trajectory(flow, x, n_max, side, limits)]


def quasi_period(flow: Flow, x: Element, max_steps: int = 4096,
                 key: Callable[[Element], Any] = lambda e: e) -> tuple[int, int] | None:
    """First ``(k, m)`` with ``k > m`` and ``phi^k(x) = phi^m(x)``, if found."""
    seen: dict[Any, int] = {}
    y = x
    for i in range(max_steps + 1):
        kx = key(y)
        if kx in seen:
            return i, seen[kx]
        seen[kx] = i
        y = flow.endo(y)
    return None
