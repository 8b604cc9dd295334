"""Executable checks of the structural laws of semigroup entropy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from entrofunc.core.carriers import coproduct_carrier, pair_flow, pairs, product_carrier
from entrofunc.core.estimate import (DEFAULT_N_MAX, DEFAULT_WINDOW, EXACT, EntropyEstimate,
                                     estimate_entropy, semigroup_entropy)
from entrofunc.core.semigroup import Carrier, Flow, quasi_period, trajectory, trajectory_norms
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class LawVerdict:
    law: str
    status: str
    lhs: Optional[EntropyEstimate] = None
    rhs_value: Optional[LogValue] = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "status": self.status,
            "lhs": None if self.lhs is None else self.lhs.value.to_json(),
            "lhs_classification": None if self.lhs is None else self.lhs.classification,
            "rhs": None if self.rhs_value is None else self.rhs_value.to_json(),
            "detail": self.detail,
        }


def _compare(law: str, lhs: EntropyEstimate, rhs: LogValue, rhs_exact: bool, detail: str,
             **extra) -> LawVerdict:
    if not (lhs.is_exact and rhs_exact):
        return LawVerdict(law, INCONCLUSIVE, lhs, rhs, detail + "; a side is not exactly classified",
                          extra)
    status = HOLDS if lhs.value == rhs else FAILS
    return LawVerdict(law, status, lhs, rhs, detail, extra)


def log_law(flow: Flow, k: int, witnesses: Sequence[Any], n_max: int = DEFAULT_N_MAX,
            window: int = DEFAULT_WINDOW) -> LawVerdict:
    """``h(phi^k) = k h(phi)`` over the witness family.

    The ``phi^k`` side also uses the trajectory products ``T_k(phi, x)``,
    which realise the lower bound ``h(phi^k) >= k h(phi, x)``.
    """
    law = f"log_law(k={k})"
    flags = flow.carrier.flags
    if k < 1:
        raise SpecError("k must be positive")
    if not (flags.commutative and flags.d_monotone):
        return LawVerdict(law, INAPPLICABLE, detail="needs a commutative d-monotone carrier")
    base, _ = semigroup_entropy(flow, witnesses, n_max, window)
    ext = list(witnesses) + [trajectory(flow, x, k)[-1] for x in witnesses]
    powered, _ = semigroup_entropy(flow.power(k), ext, max(2, n_max // k), window)
    return _compare(law, powered, base.value * k, base.is_exact, f"k * h(phi) = {base.value * k}",
                    base=base)


def conjugation(flow: Flow, alpha: Callable, alpha_inv: Callable, target: Carrier,
                witnesses: Sequence[Any], n_max: int = DEFAULT_N_MAX,
                window: int = DEFAULT_WINDOW) -> LawVerdict:
    """A norm-preserving isomorphism carries trajectories to trajectories."""
    law = "conjugation"
    for x in witnesses:
        if target.norm(alpha(x)) != flow.carrier.norm(x):
            return LawVerdict(law, INAPPLICABLE, detail=f"alpha does not preserve the norm at {x!r}")
    conj = Flow(target, lambda y: alpha(flow.endo(alpha_inv(y))), name=f"conj({flow.name})")
    for x in witnesses:
        a = trajectory_norms(flow, x, n_max)
        b = trajectory_norms(conj, alpha(x), n_max)
        if a != b:
            n = next(i for i, (u, v) in enumerate(zip(a, b), start=1) if u != v)
            return LawVerdict(law, FAILS, detail=f"c_n differ at n={n} for witness {x!r}")
    lhs, _ = semigroup_entropy(conj, [alpha(x) for x in witnesses], n_max, window)
    rhs, _ = semigroup_entropy(flow, witnesses, n_max, window)
    return _compare(law, lhs, rhs.value, rhs.is_exact, "identical c_n sequences")


def product_max(f: Flow, g: Flow, wf: Sequence[Any], wg: Sequence[Any],
                n_max: int = DEFAULT_N_MAX, window: int = DEFAULT_WINDOW) -> LawVerdict:
    law = "product_max"
    carrier = product_carrier(f.carrier, g.carrier)
    lhs, _ = semigroup_entropy(pair_flow(carrier, f, g), pairs(wf, wg), n_max, window)
    hf, _ = semigroup_entropy(f, wf, n_max, window)
    hg, _ = semigroup_entropy(g, wg, n_max, window)
    rhs = hf.value if hf.value >= hg.value else hg.value
    return _compare(law, lhs, rhs, hf.is_exact and hg.is_exact, "max of the factor entropies")


def coproduct_sum(f: Flow, g: Flow, wf: Sequence[Any], wg: Sequence[Any],
                  n_max: int = DEFAULT_N_MAX, window: int = DEFAULT_WINDOW) -> LawVerdict:
    law = "coproduct_sum"
    fa, fb = f.carrier.flags, g.carrier.flags
    if not (fa.has_identity and fb.has_identity):
        return LawVerdict(law, INAPPLICABLE, detail="needs monoids")
    if not (fa.subadditive and fb.subadditive):
        return LawVerdict(law, INAPPLICABLE, detail="needs subadditive norms")
    carrier = coproduct_carrier(f.carrier, g.carrier)
    lhs, _ = semigroup_entropy(pair_flow(carrier, f, g), pairs(wf, wg), n_max, window)
    hf, _ = semigroup_entropy(f, wf, n_max, window)
    hg, _ = semigroup_entropy(g, wg, n_max, window)
    return _compare(law, lhs, hf.value + hg.value, hf.is_exact and hg.is_exact,
                    "sum of the summand entropies")


def inversion(flow: Flow, witnesses: Sequence[Any], n_max: int = DEFAULT_N_MAX,
              window: int = DEFAULT_WINDOW) -> LawVerdict:
    law = "inversion"
    if flow.inverse is None:
        return LawVerdict(law, INAPPLICABLE, detail="endomorphism is not invertible")
    if not flow.carrier.flags.commutative:
        return LawVerdict(law, INAPPLICABLE, detail="needs a commutative carrier")
    lhs, _ = semigroup_entropy(flow.inverted(), witnesses, n_max, window)
    rhs, _ = semigroup_entropy(flow, witnesses, n_max, window)
    return _compare(law, lhs, rhs.value, rhs.is_exact, "h(phi^-1) against h(phi)")


def quasi_periodic_zero(flow: Flow, witnesses: Sequence[Any], n_max: int = DEFAULT_N_MAX,
                        window: int = DEFAULT_WINDOW, max_steps: int = 4096,
                        key: Callable = lambda e: e) -> EntropyEstimate:
    """Certified zero entropy for locally quasi-periodic flows.

    Needs a subadditive arithmetic carrier and, for every witness, a pair
    ``k > m`` with ``phi^k(x) = phi^m(x)``; the pairs are attached as
    certificates.  Raises ``InapplicableError`` otherwise.
    """
    from entrofunc.errors import InapplicableError

    flags = flow.carrier.flags
    if not (flags.subadditive and flags.arithmetic):
        raise InapplicableError("vanishing needs a subadditive arithmetic norm")
    pairs_found = []
    c_best: tuple = ()
    for x in witnesses:
        km = quasi_period(flow, x, max_steps, key)
        if km is None:
            raise InapplicableError(f"no quasi-period found for {x!r} within {max_steps} steps")
        pairs_found.append(list(km))
        c = tuple(trajectory_norms(flow, x, n_max))
        if not c_best:
            c_best = c
    est = estimate_entropy(c_best, flags, window)
    certs = {"rule": "quasi_periodic", "pairs": pairs_found,
             "slope_rule": est.certificates.get("rule")}
    return EntropyEstimate(c_best, EXACT, LogValue.zero(), witnesses[0] if witnesses else None,
                           window, est.window_slope, est.residual, certs, witness_restricted=True)


def check_law(flow: Flow, law: str, witnesses: Sequence[Any], n_max: int = DEFAULT_N_MAX,
              window: int = DEFAULT_WINDOW, k: int = 2, other: Optional[Flow] = None,
              other_witnesses: Optional[Sequence[Any]] = None,
              iso: Optional[tuple[Callable, Callable, Carrier]] = None) -> LawVerdict:
    """Dispatch by law name: ``log_law``, ``conjugation``, ``product_max``,
    ``coproduct_sum`` or ``inversion``."""
    if law == "log_law":
        return log_law(flow, k, witnesses, n_max, window)
    if law == "conjugation":
        if iso is None:
            raise SpecError("conjugation needs (alpha, alpha_inv, target carrier)")
        return conjugation(flow, iso[0], iso[1], iso[2], witnesses, n_max, window)
    if law in ("product_max", "coproduct_sum"):
        if other is None or other_witnesses is None:
            raise SpecError(f"{law} needs a second flow and its witnesses")
        fn = product_max if law == "product_max" else coproduct_sum
        return fn(flow, other, witnesses, other_witnesses, n_max, window)
    if law == "inversion":
        return inversion(flow, witnesses, n_max, window)
    raise SpecError(f"unknown law {law!r}")
