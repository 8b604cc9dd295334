"""Flow specs: the JSON descriptions consumed by the command line.

A spec has a ``kind``, a kind-specific ``payload``, optional
``witnesses`` and optional ``params``.  :func:`parse_spec` validates it
against ``schemas/flow_spec.json`` and builds the library objects;
:meth:`FlowSpec.to_json` serializes them back in a fixed field order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from entrofunc import abelian, measure, selfmaps, shifts, topology
from entrofunc.core import carriers, laws
from entrofunc.core.estimate import (DEFAULT_N_MAX, DEFAULT_WINDOW, EXACT, EntropyEstimate,
                                     semigroup_entropy)
from entrofunc.core.semigroup import Flow, Limits
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue
from entrofunc.schema import validate

PARAM_ORDER = ("n_max", "window", "side", "depth", "cap_bits")


@dataclass(frozen=True)
class FlowSpec:
    kind: str
    payload: dict
    name: str = ""
    witnesses: Optional[list] = None
    params: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return self.params.get("n_max", _default_n_max(self.kind))

    @property
    def window(self) -> int:
        return self.params.get("window", DEFAULT_WINDOW)

    def limits(self) -> Limits:
        lim = Limits.from_env()
        if "cap_bits" in self.params:
            lim = replace(lim, max_element_size=self.params["cap_bits"])
        return lim

    def with_params(self, **kw) -> "FlowSpec":
        params = dict(self.params)
        params.update({k: v for k, v in kw.items() if v is not None})
        return replace(self, params=params)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.name:
            out["name"] = self.name
        out["payload"] = self.payload
        if self.witnesses is not None:
            out["witnesses"] = self.witnesses
        if self.params:
            out["params"] = {k: self.params[k] for k in PARAM_ORDER if k in self.params}
        return out


def _default_n_max(kind: str) -> int:
    return {"shift": 32, "space": 8, "frame": 8, "symbolic": 10, "finite_abelian": 12}.get(
        kind, DEFAULT_N_MAX)


def parse_spec(data: Any) -> FlowSpec:
    validate(data, "flow_spec")
    spec = FlowSpec(data["kind"], data["payload"], data.get("name", ""), data.get("witnesses"),
                    dict(data.get("params", {})))
    build(spec)   # semantic checks beyond the schema
    return spec


def load_spec(path: str) -> FlowSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise SpecError(f"spec file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON in {path}: {exc}") from exc
    return parse_spec(data)


# building library objects ---------------------------------------------------

@dataclass
class Built:
    """A core flow with witnesses, or a closure producing an estimate directly."""

    flow: Optional[Flow] = None
    witnesses: Optional[list] = None
    upgrade: Any = None
    side: str = "right"
    direct: Any = None


_MONOIDS = {m.name: m for m in carriers.sample_monoids()}


def _semigroup(spec: FlowSpec) -> Built:
    p = spec.payload
    c = p["carrier"]
    endo = p.get("endo", "identity")
    side = spec.params.get("side", "right")
    upgrade = None
    ws = spec.witnesses
    if c == "naturals":
        norm = p.get("norm", "log")
        if norm not in ("log", "linear", "avoid"):
            raise SpecError(f"norm {norm!r} is not available on the naturals")
        carrier = carriers.naturals(norm, a=p.get("a"))
        if endo == "identity":
            flow = carriers.identity_flow(carrier)
        elif isinstance(endo, dict) and "multiply" in endo:
            flow = carriers.multiply_flow(carrier, endo["multiply"])
        else:
            raise SpecError("endomorphism of the naturals must be identity or multiply")
        ws = [int(x) for x in ws] if ws is not None else [1]
        if any(x < 0 for x in ws):
            raise SpecError("witnesses must be natural numbers")
        if p.get("upgrade") and norm == "linear":
            upgrade = carriers.naturals_scaling_upgrade()
    elif c == "words":
        norm = p.get("norm", "runs")
        if norm not in ("runs", "ascents"):
            raise SpecError(f"norm {norm!r} is not available on words")
        if endo != "shift":
            raise SpecError("words support the index shift only")
        flow = carriers.index_shift_flow(carriers.free_words(norm))
        ws = [tuple(int(i) for i in w) for w in ws] if ws is not None else [(0,)]
        if any(not w for w in ws):
            raise SpecError("words must be non-empty")
        if p.get("upgrade"):
            upgrade = carriers.letter_upgrade(side)
    elif c == "bernoulli":
        m = _MONOIDS[p.get("monoid", "Z2")]
        if endo == "shift":
            flow = carriers.right_bernoulli_flow(m)
        elif endo == "left_shift":
            flow = carriers.left_bernoulli_flow(m)
        else:
            raise SpecError("Bernoulli carriers support shift and left_shift")
        ws = ([_trim(tuple(w), m.unit) for w in ws] if ws is not None
              else carriers.letter_witnesses(m))
        for w in ws:
            if not flow.carrier.contains(w):
                raise SpecError(f"{list(w)} is not a sequence over {m.name}")
        if p.get("upgrade") and endo == "shift":
            upgrade = carriers.bernoulli_upgrade(m)
    else:
        if not (isinstance(endo, dict) and "translate" in endo):
            raise SpecError("finite sets support translate endomorphisms only")
        flow = carriers.translate_flow(endo["translate"], endo.get("modulus"))
        ws = [frozenset(int(i) for i in w) for w in ws] if ws is not None else [frozenset([0])]
    return Built(flow, ws, upgrade, side)


def _trim(t: tuple, unit) -> tuple:
    end = len(t)
    while end and t[end - 1] == unit:
        end -= 1
    return t[:end]


def _subsets(spec: FlowSpec) -> Optional[list]:
    if spec.witnesses is None:
        return None
    return [selfmaps.subset_from_json(w) for w in spec.witnesses]


def _selfmap(spec: FlowSpec) -> Built:
    p = spec.payload
    g = selfmaps.SelfmapGraph.from_json(p["map"])
    ws = _subsets(spec)
    if ws is not None:
        for w in ws:
            bad = [h for h in w if not g.contains(h)]
            if bad:
                raise SpecError(f"witness vertex {list(bad[0])} is not in the graph")
    entropy = p.get("entropy", "covariant")
    mode = p.get("mode", "trajectory")
    lim = spec.limits()

    def run() -> EntropyEstimate:
        if entropy == "covariant":
            return selfmaps.covariant_entropy(g, ws, mode, spec.n_max, spec.window, lim)
        return selfmaps.contravariant_entropy(g, ws, entropy, mode, spec.n_max, spec.window, lim)

    flow = None
    if entropy == "covariant":
        flow = selfmaps.image_flow(g)
    elif entropy == "star":
        flow = selfmaps.preimage_flow(g)
    else:
        selfmaps.preimage_flow(g)   # raises for maps that are not finite-to-one
    return Built(flow, ws if ws is not None else [g.cofinal_witness()], direct=run)


def _finite_abelian(spec: FlowSpec) -> Built:
    p = spec.payload
    g = abelian.FiniteAbelianGroup.parse(p["group"])
    phi = abelian.endomorphism_from_json(g, p["endomorphism"])
    entropy = p.get("entropy", "ent")
    if entropy == "ent_dim" and g.is_elementary() is None:
        raise SpecError(f"{g} is not elementary abelian")
    ws = ([abelian.subgroup_from_json(g, w) for w in spec.witnesses]
          if spec.witnesses is not None else [g.whole()])
    flow = abelian.cov_flow(phi) if entropy == "ent_star" else abelian.sub_flow(phi)

    def run() -> EntropyEstimate:
        est, _ = semigroup_entropy(flow, ws, spec.n_max, spec.window, limits=spec.limits())
        cert = {"ent": abelian.ent_finite, "ent_star": abelian.ent_star_finite,
                "ent_dim": abelian.ent_dim}[entropy](phi)
        c = est.c
        if entropy == "ent_dim":
            p_ = g.is_elementary()
            c = tuple(LogValue.count(_dim(v, p_)) for v in c)
        certs = dict(cert.certificates)
        certs["slope_rule"] = est.certificates.get("rule")
        return EntropyEstimate(c, EXACT, cert.value, est.witness, spec.window, est.window_slope,
                               est.residual, certs, witness_restricted=False)

    return Built(flow, ws, direct=run)


def _dim(v: LogValue, p: int) -> int:
    r = v.ratio(LogValue.log(p)) if not v.is_zero else 0
    if r is None or getattr(r, "denominator", 1) != 1:
        raise SpecError("subgroup order is not a power of p")
    return int(r)


def _shift(spec: FlowSpec) -> Built:
    p = spec.payload
    flow = shifts.ShiftFlow(abelian.FiniteAbelianGroup.parse(p["base"]),
                            selfmaps.SelfmapGraph.from_json(p["map"]), p["direction"])
    ws = _subsets(spec)
    lim = spec.limits()

    def run() -> EntropyEstimate:
        if flow.direction == "tau":
            return shifts.h_alg_tau(flow, ws, spec.n_max, spec.window, lim)
        if flow.direction == "sigma":
            return shifts.h_top_sigma(flow, ws, spec.n_max, spec.window, lim)
        return shifts.h_alg_sigma_oplus(flow, ws, min(spec.n_max, 16), spec.window, lim)

    return Built(direct=run)


def _space(spec: FlowSpec) -> Built:
    p = spec.payload
    space = topology.FiniteSpace.from_json(p["space"])
    phi = topology.ContinuousMap.from_mapping(space, p["map"])
    if spec.witnesses is not None:
        covers = [topology.cover_from_json(space, u) for u in spec.witnesses]
    else:
        covers = [tuple(sorted(set(space.up)))]

    def run() -> EntropyEstimate:
        return topology.h_fin_top(phi, covers, spec.n_max, spec.window)[0]

    return Built(direct=run)


def _frame(spec: FlowSpec) -> Built:
    p = spec.payload
    frame = topology.FiniteFrame.from_json({"below": p["below"], "labels": p.get("labels", [])})

    def element(js) -> int:
        m = 0
        for j in js:
            if not 0 <= j < frame.size:
                raise SpecError("join-irreducible index out of range")
            m |= frame.below[j]
        return m

    h = topology.FrameHom(frame, tuple(element(js) for js in p["images"]))
    if spec.witnesses is not None:
        covers = [[element(a) for a in u] for u in spec.witnesses]
    else:
        covers = [list(frame.below)]

    def run() -> EntropyEstimate:
        return topology.h_fr(h, covers, spec.n_max, spec.window)[0]

    return Built(direct=run)


def _symbolic(spec: FlowSpec) -> Built:
    system = measure.SymbolicSystem.from_json(spec.payload)
    depth = spec.params.get("depth", 1)

    def run() -> EntropyEstimate:
        return measure.h_mes(system, depth, spec.n_max, spec.window, spec.limits())

    return Built(direct=run)


_BUILDERS = {"semigroup": _semigroup, "selfmap": _selfmap, "finite_abelian": _finite_abelian,
             "shift": _shift, "space": _space, "frame": _frame, "symbolic": _symbolic}


def build(spec: FlowSpec) -> Built:
    return _BUILDERS[spec.kind](spec)


def evaluate(spec: FlowSpec) -> EntropyEstimate:
    b = build(spec)
    if b.direct is not None:
        return b.direct()
    est, _ = semigroup_entropy(b.flow, b.witnesses, spec.n_max, spec.window, b.upgrade,
                               side=b.side, limits=spec.limits())
    return est


def check_props(spec: FlowSpec, law: str, k: int = 2,
                other: Optional[FlowSpec] = None) -> laws.LawVerdict:
    """Run a structural law on a spec that exposes a core flow."""
    b = build(spec)
    if b.flow is None:
        raise SpecError(f"laws need a semigroup or selfmap spec, got {spec.kind}")
    ob = None
    if law in ("product_max", "coproduct_sum"):
        if other is None:
            raise SpecError(f"{law} needs a second spec")
        ob = build(other)
        if ob.flow is None:
            raise SpecError("the second spec must expose a core flow")
    return laws.check_law(b.flow, law, b.witnesses, spec.n_max, spec.window, k=k,
                          other=None if ob is None else ob.flow,
                          other_witnesses=None if ob is None else ob.witnesses)
