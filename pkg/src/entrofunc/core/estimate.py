"""Classifying the growth rate of a trajectory norm sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from entrofunc.core.semigroup import DEFAULT_LIMITS, CarrierFlags, Flow, Limits, trajectory_norms
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue

EXACT = "exact"
EXACT_HEURISTIC = "exact_heuristic"
FEKETE = "fekete_upper_bound"
NUMERIC = "numeric"

DEFAULT_WINDOW = 5
DEFAULT_N_MAX = 64


@dataclass(frozen=True)
class EntropyEstimate:
    c: tuple[LogValue, ...]
    classification: str
    value: LogValue
    witness: Any = None
    window: int = DEFAULT_WINDOW
    window_slope: Optional[float] = None
    residual: Optional[float] = None
    certificates: Mapping[str, Any] = field(default_factory=dict)
    witness_restricted: bool = True

    @property
    def is_exact(self) -> bool:
        return self.classification in (EXACT, EXACT_HEURISTIC)

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "value": self.value.to_json(),
            "witness_restricted": self.witness_restricted,
            "window": self.window,
            "window_slope": None if self.window_slope is None else _fixed(self.window_slope),
            "residual": _residual_json(self.residual),
            "certificates": _jsonable(self.certificates),
            "c": [v.to_json() for v in self.c],
        }


def _fixed(x: float) -> float | str:
    if math.isinf(x):
        return "inf"
    return float(f"{x:.12g}")


def _residual_json(r: Optional[float]):
    if r is None:
        return None
    return _fixed(r)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, LogValue):
        return obj.to_json()
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return _fixed(obj)
    return obj


def _slope_fit(c: Sequence[LogValue]) -> tuple[float, float]:
    """Least-squares slope and RMS residual over the last half."""
    n = len(c)
    if n < 2:
        return float(c[0]) if c else 0.0, math.inf
    start = n // 2 if n >= 4 else 0
    xs = np.arange(start + 1, n + 1, dtype=float)
    ys = np.array([float(v) for v in c[start:]], dtype=float)
    if not np.all(np.isfinite(ys)):
        return math.inf, math.inf
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return float(slope), float(np.sqrt(np.mean(resid ** 2)))


def _pure_log_rational(v: LogValue) -> Fraction | None:
    """``m`` with ``v == log m`` when the log coefficients are integers."""
    if not v.is_exact or v.count_part:
        return None
    m = Fraction(1)
    for p, q in v.log_terms:
        if q.denominator != 1:
            return None
        m *= Fraction(p) ** int(q)
    return m


def _ratio_limit(c: Sequence[LogValue], window: int) -> tuple[LogValue, int] | None:
    """Slope ``log a`` when ``exp(c_{n+1}) / exp(c_n)`` converges geometrically to ``a``.

    Needs ``window + 1`` consecutive ratios whose distance to the
    recognised rational ``a`` shrinks by a factor at most 0.9 each step.
    """
    if len(c) < window + 2:
        return None
    tail = [_pure_log_rational(v) for v in c[-(window + 2):]]
    if any(m is None or m <= 0 for m in tail):
        return None
    ratios = [b / a for a, b in zip(tail, tail[1:])]
    last = ratios[-1]
    a = last.limit_denominator(64)
    if a <= 1:
        return None
    devs = [abs(r - a) for r in ratios]
    if devs[-1] == 0 or devs[-1] > Fraction(1, 10 ** 6):
        return None
    for prev, cur in zip(devs, devs[1:]):
        if cur == 0 or cur * 10 > prev * 9:
            return None
    return LogValue.log(a), len(c) - window - 1


def estimate_entropy(c: Sequence[LogValue], flags: CarrierFlags = CarrierFlags(),
                     window: int = DEFAULT_WINDOW, witness: Any = None) -> EntropyEstimate:
    """Classify ``lim c_n / n``.

    Order of rules: identical last ``window`` differences give an exact
    slope (a zero slope covers eventually constant sequences); otherwise
    geometric convergence of ``exp`` ratios to a rational ``a`` gives the
    slope ``log a`` as ``exact_heuristic``; differences growing by a factor
    of at least 1.5 give ``inf`` as ``exact_heuristic``; otherwise a subadditive carrier
    gives the Fekete bound ``min c_n / n``; otherwise a least-squares slope
    over the last half with its residual.
    """
    if not c:
        raise SpecError("cannot estimate from an empty sequence")
    if window < 1:
        raise SpecError("window must be positive")
    c = tuple(c)
    slope, residual = _slope_fit(c)
    exact_tag = EXACT if flags.structured else EXACT_HEURISTIC

    if any(v.is_infinite for v in c):
        first = next(i for i, v in enumerate(c) if v.is_infinite)
        return EntropyEstimate(c, exact_tag, LogValue.inf(), witness, window, slope, residual,
                               {"rule": "infinite_norm", "from_n": first + 1})

    if len(c) == 1:
        return EntropyEstimate(c, NUMERIC, c[0], witness, window, None, math.inf,
                               {"rule": "single_point"})

    diffs = [b - a for a, b in zip(c, c[1:])]
    if len(diffs) >= window:
        tail = diffs[-window:]
        d = tail[-1]
        if d.is_exact and all(t == d for t in tail) and d.sign() >= 0:
            rule = "eventually_constant" if d.is_zero else "constant_difference"
            start = len(diffs) - window
            while start > 0 and diffs[start - 1] == d:
                start -= 1
            return EntropyEstimate(c, exact_tag, d, witness, window, slope, residual,
                                   {"rule": rule, "from_n": start + 1})

    ratio = _ratio_limit(c, window)
    if ratio is not None:
        value, start = ratio
        return EntropyEstimate(c, EXACT_HEURISTIC, value, witness, window, slope, residual,
                               {"rule": "ratio_limit", "from_n": start + 1})

    if len(diffs) >= window + 1:
        tail = [float(d) for d in diffs[-(window + 1):]]
        if tail[0] > 0 and all(b >= 1.5 * a for a, b in zip(tail, tail[1:])):
            # differences grow geometrically, so c_n / n is unbounded
            return EntropyEstimate(c, EXACT_HEURISTIC, LogValue.inf(), witness, window, slope,
                                   residual, {"rule": "geometric_divergence",
                                              "from_n": len(c) - window - 1})

    if flags.subadditive:
        best = None
        best_n = 0
        for n, v in enumerate(c, start=1):
            q = v / n
            if best is None or q < best:
                best, best_n = q, n
        return EntropyEstimate(c, FEKETE, best, witness, window, slope, residual,
                               {"rule": "fekete", "argmin_n": best_n})

    value = LogValue.approx(max(slope, 0.0))
    return EntropyEstimate(c, NUMERIC, value, witness, window, slope, residual,
                           {"rule": "least_squares"})


def fekete_bounds(c: Sequence[LogValue]) -> list[LogValue]:
    """Running ``min_{n <= N} c_n / n`` for ``N = 1, 2, ...``."""
    out: list[LogValue] = []
    best: LogValue | None = None
    for n, v in enumerate(c, start=1):
        q = v / n
        if best is None or q < best:
            best = q
        out.append(best)
    return out


@dataclass(frozen=True)
class Upgrade:
    """A cofinality argument lifting a witness-restricted sup to the true value.

    ``apply`` receives the per-witness estimates and returns the certified
    global value, or ``None`` when its hypotheses are not met.
    """

    reason: str
    apply: Callable[[Sequence[EntropyEstimate]], Optional[LogValue]]


def declared_cofinal(reason: str) -> Upgrade:
    """The witness family is known to realise the supremum."""

    def apply(estimates: Sequence[EntropyEstimate]) -> Optional[LogValue]:
        if not all(e.is_exact for e in estimates):
            return None
        return max((e.value for e in estimates), default=LogValue.zero())

    return Upgrade(reason, apply)


def scaling_upgrade(reason: str) -> Upgrade:
    """``h(phi, k x) = k h(phi, x)`` for all ``k``: any positive witness makes the sup infinite."""

    def apply(estimates: Sequence[EntropyEstimate]) -> Optional[LogValue]:
        if not all(e.is_exact for e in estimates):
            return None
        if any(e.value.sign() > 0 for e in estimates):
            return LogValue.inf()
        return LogValue.zero()

    return Upgrade(reason, apply)


def _certify(flow: Flow, est: EntropyEstimate) -> EntropyEstimate:
    if est.classification != EXACT_HEURISTIC or flow.certify is None:
        return est
    reason = flow.certify(est.witness, est.value)
    if reason is None:
        return est
    certs = dict(est.certificates)
    certs["closed_form"] = reason
    return replace(est, classification=EXACT, certificates=certs)


def witness_estimate(flow: Flow, x: Any, n_max: int = DEFAULT_N_MAX, window: int = DEFAULT_WINDOW,
                     side: str = "right", limits: Limits = DEFAULT_LIMITS) -> EntropyEstimate:
    c = trajectory_norms(flow, x, n_max, side, limits)
    # c_n is subadditive only when the norm is and phi does not raise it
    flags = flow.carrier.flags
    if flags.subadditive and not flow.contractive:
        flags = replace(flags, subadditive=False)
    return _certify(flow, estimate_entropy(c, flags, window, witness=x))


def semigroup_entropy(flow: Flow, witnesses: Iterable[Any], n_max: int = DEFAULT_N_MAX,
                      window: int = DEFAULT_WINDOW, upgrade: Optional[Upgrade] = None,
                      side: str = "right", limits: Limits = DEFAULT_LIMITS
                      ) -> tuple[EntropyEstimate, list[EntropyEstimate]]:
    """Supremum of per-witness estimates.

    The result is labelled witness-restricted unless ``upgrade`` certifies
    the global value from the per-witness table.
    """
    witnesses = list(witnesses)
    if not witnesses:
        raise SpecError("at least one witness is required")
    table = [witness_estimate(flow, x, n_max, window, side, limits) for x in witnesses]
    best = table[0]
    for est in table[1:]:
        if est.value > best.value:
            best = est
    certs = dict(best.certificates)
    certs["witness_count"] = len(table)
    restricted = True
    value = best.value
    if upgrade is not None:
        lifted = upgrade.apply(table)
        if lifted is not None:
            restricted = False
            value = lifted
            certs["upgrade"] = upgrade.reason
    return replace(best, value=value, certificates=certs, witness_restricted=restricted), table


def left_entropy(flow: Flow, witnesses: Iterable[Any], n_max: int = DEFAULT_N_MAX,
                 window: int = DEFAULT_WINDOW, upgrade: Optional[Upgrade] = None,
                 limits: Limits = DEFAULT_LIMITS) -> tuple[EntropyEstimate, list[EntropyEstimate]]:
    return semigroup_entropy(flow, witnesses, n_max, window, upgrade, side="left", limits=limits)
