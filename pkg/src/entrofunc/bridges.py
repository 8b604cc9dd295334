"""Executable bridge checks between entropy functions of different categories.

A bridge case relates a source entropy ``h1`` and a target entropy ``h2``
through a coefficient ``C = num / den``: the claim is ``h2 = C h1``,
checked as ``h2 * den == num * h1`` so that no division of logarithms is
needed.  Cases with ``mode = per_n_identity`` compare the two trajectory
sequences step by step; ``limit_equality`` compares classified limits.

Cases live as JSON files in ``bridge_cases/``.  Questions the theory
leaves open are registered with ``kind = open`` and are never evaluated.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable, Iterable, Optional, Sequence

from entrofunc import abelian, selfmaps, shifts, topology
from entrofunc.errors import InapplicableError, SpecError
from entrofunc.logvalue import LogValue
from entrofunc.schema import validate

KINDS = ("weiss_finite", "sigma_tau", "set_to_top", "set_to_alg", "set_to_alg_oplus",
         "frame_O", "t0_reflection", "open")


@dataclass(frozen=True)
class BridgeCase:
    name: str
    kind: str
    mode: str
    payload: dict
    num: LogValue = field(default_factory=lambda: LogValue.count(1))
    den: LogValue = field(default_factory=lambda: LogValue.count(1))
    n_max: int = 8
    direction: str = "forward"
    inverse_of: Optional[str] = None
    note: str = ""

    @classmethod
    def from_json(cls, data: dict) -> "BridgeCase":
        validate(data, "bridge_case")
        coef = data.get("coefficient", {})
        return cls(data["name"], data["kind"], data.get("mode", "limit_equality"),
                   data.get("payload", {}),
                   LogValue.from_json(coef.get("num", 1)), LogValue.from_json(coef.get("den", 1)),
                   data.get("n_max", 8), data.get("direction", "forward"),
                   data.get("inverse_of"), data.get("note", ""))

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "mode": self.mode,
               "coefficient": {"num": _coef_json(self.num), "den": _coef_json(self.den)},
               "n_max": self.n_max, "direction": self.direction, "payload": self.payload}
        if self.inverse_of:
            out["inverse_of"] = self.inverse_of
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Verdict:
    case: str
    status: str               # pass, fail, open
    n: Optional[int]
    lhs: Any
    rhs: Any
    detail: str = ""
    limit: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"case": self.case, "n": self.n, "lhs": _plain(self.lhs), "rhs": _plain(self.rhs),
               "pass": None if self.status == "open" else self.passed, "status": self.status,
               "detail": self.detail}
        if self.limit is not None:
            out["limit"] = _plain(self.limit)
        return out


def _coef_json(v: LogValue):
    """The short form the case schema accepts: an integer, ``"inf"`` or ``{count, q, m}``."""
    if v.is_infinite:
        return "inf"
    if v.is_pure_count:
        c = v.count_part
        return c.numerator if c.denominator == 1 and c >= 0 else str(c)
    q, m = LogValue(logs=v.log_terms).qm()
    out = {"q": _frac_json(q), "m": _frac_json(m)}
    if v.count_part:
        out["count"] = _frac_json(v.count_part)
    return out


def _frac_json(x):
    return x.numerator if x.denominator == 1 else str(x)


def _plain(x):
    if isinstance(x, LogValue):
        return x.to_json()
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def scaled_equal(target: LogValue, source: LogValue, num: LogValue, den: LogValue) -> bool:
    """``target == (num / den) * source`` with the convention ``inf * 0 = 0``."""
    return target * den == num * source


def _base(payload: dict) -> Optional[abelian.FiniteAbelianGroup]:
    b = payload.get("base", "Z2")
    return None if b == "inf" else abelian.FiniteAbelianGroup.parse(b)


def _seq_verdict(case: BridgeCase, lhs: list, rhs: list, limit: Optional[dict] = None) -> Verdict:
    bad = next((n for n, (a, b) in enumerate(zip(lhs, rhs), start=1) if a != b), None)
    if bad is not None:
        return Verdict(case.name, "fail", bad, lhs, rhs, f"sequences differ at n={bad}", limit)
    if limit is not None and not limit.get("pass", True):
        return Verdict(case.name, "fail", len(lhs), lhs, rhs, "per-step identity holds but limits differ",
                       limit)
    return Verdict(case.name, "pass", len(lhs), lhs, rhs, "", limit)


def _run_weiss(case: BridgeCase) -> Verdict:
    p = case.payload
    g = abelian.FiniteAbelianGroup.parse(p["group"])
    phi = abelian.endomorphism_from_json(g, p["endomorphism"])
    n = abelian.subgroup_from_json(g, p["subgroup"])
    res = abelian.bridge_check_weiss(phi, n, case.n_max)
    return _seq_verdict(case, res.lhs, res.rhs)


def _run_sigma_tau(case: BridgeCase) -> Verdict:
    p = case.payload
    res = shifts.sigma_hat_equals_tau(selfmaps.SelfmapGraph.from_json(p["map"]), _base(p))
    return Verdict(case.name, "pass" if res.equal else "fail", None,
                   [list(r) for r in res.sigma_dual], [list(r) for r in res.tau],
                   "dual of sigma against tau as matrices")


def _set_limit(case: BridgeCase, g: selfmaps.SelfmapGraph, target_value: LogValue,
               source: LogValue) -> dict:
    if case.direction == "inverse":
        ok = scaled_equal(source, target_value, case.num, case.den)
    else:
        ok = scaled_equal(target_value, source, case.num, case.den)
    return {"source": source, "target": target_value, "pass": ok}


def _run_set_bridge(case: BridgeCase) -> Verdict:
    """``h_top(sigma)`` or ``h_alg(tau)`` against ``log|K|`` times the set entropy."""
    p = case.payload
    g = selfmaps.SelfmapGraph.from_json(p["map"])
    k = _base(p)
    source = selfmaps.covariant_entropy(g, n_max=max(case.n_max, 16))
    if not source.is_exact:
        raise InapplicableError("set-theoretic entropy did not classify exactly")
    if k is None:
        # infinite coefficient: the target is inf * h, with inf * 0 = 0
        target = LogValue.inf() * source.value
        limit = {"source": source.value, "target": target, "pass": True}
        lhs_rhs = (target, LogValue.inf() * source.value)
        return Verdict(case.name, "pass", None, lhs_rhs[0], lhs_rhs[1],
                       "infinite base group: coefficient is inf", limit)
    direction = "sigma" if case.kind == "set_to_top" else "tau"
    flow = shifts.ShiftFlow(k, g, direction)
    if direction == "sigma":
        target = shifts.h_top_sigma(flow, n_max=max(case.n_max, 16))
    else:
        target = shifts.h_alg_tau(flow, n_max=max(case.n_max, 16))
    limit = _set_limit(case, g, target.value, source.value)
    if case.mode == "per_n_identity":
        d = selfmaps.subset_from_json(p["witness"]) if "witness" in p else g.cofinal_witness()
        sizes = selfmaps.trajectory_sizes(g, d, case.n_max)
        if direction == "sigma":
            lhs = shifts.sigma_cotrajectory_indices(g, k, d, case.n_max)
        else:
            lhs = shifts.tau_trajectory_orders(g, k, d, case.n_max)
        rhs = [k.order ** s for s in sizes]
        return _seq_verdict(case, lhs, rhs, limit)
    return Verdict(case.name, "pass" if limit["pass"] else "fail", None, target.value,
                   source.value, "target entropy against coefficient times source", limit)


def _run_oplus(case: BridgeCase) -> Verdict:
    p = case.payload
    g = selfmaps.SelfmapGraph.from_json(p["map"])
    k = _base(p)
    if k is None:
        raise InapplicableError("sigma_oplus needs a finite base group")
    source = selfmaps.contravariant_entropy(g, variant="star_p", mode="exact_structural")
    target = shifts.h_alg_sigma_oplus(shifts.ShiftFlow(k, g, "sigma_oplus"), n_max=case.n_max)
    limit = _set_limit(case, g, target.value, source.value)
    ok = target.is_exact and limit["pass"]
    return Verdict(case.name, "pass" if ok else "fail", None, target.value, source.value,
                   f"target classified {target.classification}", limit)


def _space_payload(p: dict):
    space = topology.FiniteSpace.from_json(p["space"])
    phi = topology.ContinuousMap.from_mapping(space, p["map"])
    cover = topology.cover_from_json(space, p["cover"])
    return phi, cover


def _run_frame(case: BridgeCase) -> Verdict:
    phi, cover = _space_payload(case.payload)
    res = topology.o_functor_check(phi, cover, case.n_max)
    return _seq_verdict(case, res.lhs, res.rhs)


def _run_t0(case: BridgeCase) -> Verdict:
    phi, cover = _space_payload(case.payload)
    res = topology.reflection_bridge_check(phi, cover, case.n_max)
    return _seq_verdict(case, res.lhs, res.rhs)


_RUNNERS: dict[str, Callable[[BridgeCase], Verdict]] = {
    "weiss_finite": _run_weiss,
    "sigma_tau": _run_sigma_tau,
    "set_to_top": _run_set_bridge,
    "set_to_alg": _run_set_bridge,
    "set_to_alg_oplus": _run_oplus,
    "frame_O": _run_frame,
    "t0_reflection": _run_t0,
}


def run_bridge(case: BridgeCase, n_max: Optional[int] = None) -> Verdict:
    if n_max is not None:
        case = BridgeCase(case.name, case.kind, case.mode, case.payload, case.num, case.den,
                          n_max, case.direction, case.inverse_of, case.note)
    if case.kind == "open":
        return Verdict(case.name, "open", None, None, None,
                       case.payload.get("question", "open question; no check is run"))
    try:
        runner = _RUNNERS[case.kind]
    except KeyError:
        raise SpecError(f"unknown bridge kind {case.kind!r}") from None
    return runner(case)


def registry() -> list[BridgeCase]:
    """The shipped cases, sorted by file name."""
    root = resources.files("entrofunc") / "bridge_cases"
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out.append(BridgeCase.from_json(json.loads(entry.read_text())))
    return out


def load_case(path_or_name: str) -> BridgeCase:
    for case in registry():
        if case.name == path_or_name:
            return case
    try:
        with open(path_or_name, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise SpecError(f"no bridge case named or stored at {path_or_name!r}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON in {path_or_name}: {exc}") from exc
    return BridgeCase.from_json(data)


# isomorphism checks ---------------------------------------------------------------

@dataclass(frozen=True)
class IsoVerdict:
    uniform: bool
    weak: Optional[bool]
    detail: str

    def to_json(self) -> dict:
        return {"uniform": self.uniform, "weak": self.weak, "detail": self.detail}


def check_uniform_iso(alpha: Callable, elements: Sequence, op_src: Callable, op_tgt: Callable,
                      norm_src: Callable, norm_tgt: Callable, r: LogValue,
                      target_elements: Optional[Sequence] = None, samples: int = 2000,
                      seed: int = 0) -> IsoVerdict:
    """``alpha`` is a homomorphism with ``v'(alpha x) = r v(x)``, and a bijection
    onto ``target_elements`` when they are given."""
    rng = random.Random(seed)
    elements = list(elements)
    if not elements:
        raise SpecError("need at least one element")
    pairs = ([(x, y) for x in elements for y in elements]
             if len(elements) ** 2 <= samples else
             [(rng.choice(elements), rng.choice(elements)) for _ in range(samples)])
    for x, y in pairs:
        if alpha(op_src(x, y)) != op_tgt(alpha(x), alpha(y)):
            return IsoVerdict(False, False, "alpha is not a homomorphism on a sampled pair")
    for x in elements:
        if norm_tgt(alpha(x)) != r * norm_src(x):
            return IsoVerdict(False, False, f"norm not scaled by {r} at a sampled element")
    if target_elements is not None:
        image = {alpha(x) for x in elements}
        if len(image) != len(elements) or image != set(target_elements):
            return IsoVerdict(False, False, "alpha is not a bijection onto the target")
    return IsoVerdict(True, True, "homomorphism, norm scaled exactly, bijective where checked")


def check_weak_iso(alpha: Callable, elements: Sequence, op_src: Callable, op_tgt: Callable,
                   norm_src: Callable, norm_tgt: Callable, r: LogValue,
                   target_family: Iterable, dominates: Callable[[Any, Any], bool],
                   samples: int = 2000, seed: int = 0) -> IsoVerdict:
    """Like :func:`check_uniform_iso` without bijectivity; instead every member of
    ``target_family`` must be dominated by ``alpha`` of some element
    (``dominates(t, alpha(x))``), so the image is cofinal."""
    base = check_uniform_iso(alpha, elements, op_src, op_tgt, norm_src, norm_tgt, r,
                             None, samples, seed)
    if not base.uniform:
        return IsoVerdict(False, False, base.detail)
    images = [alpha(x) for x in elements]
    for t in target_family:
        if not any(dominates(t, a) for a in images):
            return IsoVerdict(False, False, "image is not cofinal in the target family")
    injective = len(set(images)) == len(images)
    return IsoVerdict(False, True, "weak isomorphism: cofinal image, norms scaled"
                      + ("" if injective else ", not injective"))
