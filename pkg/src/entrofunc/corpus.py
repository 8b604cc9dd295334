"""Named flows with known entropies, shared by the property suites and demos.

``expected`` is the value the theory gives for the listed witnesses, or
``None`` when the corpus makes no claim.  ``finite`` marks flows whose
orbits are finite, which are the locally quasi-periodic ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

from entrofunc import abelian, selfmaps
from entrofunc.core import carriers
from entrofunc.core.semigroup import Flow
from entrofunc.logvalue import LogValue


@dataclass(frozen=True)
class CorpusFlow:
    name: str
    flow: Flow
    witnesses: tuple
    expected: Optional[LogValue] = None
    finite: bool = False
    key: Callable[[Any], Any] = lambda e: e


def _naturals() -> list[CorpusFlow]:
    log = carriers.naturals("log")
    out = [CorpusFlow(f"rho{a}_log", carriers.multiply_flow(log, a), (1, 2, 7), LogValue.log(a))
           for a in (2, 3, 5)]
    out.append(CorpusFlow("identity_log", carriers.identity_flow(log), (1, 4), LogValue.zero()))
    out.append(CorpusFlow("identity_linear", carriers.identity_flow(carriers.naturals("linear")),
                          (1,), LogValue.count(1)))
    return out


def _words() -> list[CorpusFlow]:
    return [
        CorpusFlow("word_shift_runs", carriers.index_shift_flow(carriers.free_words("runs")),
                   ((0,), (1,)), LogValue.count(1)),
        CorpusFlow("word_shift_ascents", carriers.index_shift_flow(carriers.free_words("ascents")),
                   ((0,),), LogValue.count(1)),
    ]


def _bernoulli() -> list[CorpusFlow]:
    out = []
    for m in carriers.sample_monoids():
        out.append(CorpusFlow(f"bernoulli_right_{m.name}", carriers.right_bernoulli_flow(m),
                              tuple(carriers.letter_witnesses(m)), m.max_norm()))
    return out


def _finite_sets() -> list[CorpusFlow]:
    return [
        CorpusFlow("translate_mod3", carriers.translate_flow(1, 3), (frozenset({0}), frozenset({0, 1})),
                   LogValue.zero(), finite=True),
        CorpusFlow("translate_mod5_by2", carriers.translate_flow(2, 5), (frozenset({0}),),
                   LogValue.zero(), finite=True),
        CorpusFlow("translate_Z", carriers.translate_flow(1), (frozenset({0}),), LogValue.count(1)),
    ]


def _abelian() -> list[CorpusFlow]:
    out = []
    g = abelian.FiniteAbelianGroup.parse("Z4xZ2")
    phi = abelian.Endomorphism(g, ((1, 0), (1, 1)))
    ws = (abelian.Subgroup.generated(g, [(1, 0)]), abelian.Subgroup.generated(g, [(0, 1)]))
    out.append(CorpusFlow("subgroups_Z4xZ2", abelian.sub_flow(phi), ws, LogValue.zero(), finite=True))
    h = abelian.FiniteAbelianGroup.parse("Z2xZ2xZ2")
    cyc = abelian.Endomorphism(h, ((0, 0, 1), (1, 0, 0), (0, 1, 0)))
    ws = (abelian.Subgroup.generated(h, [(1, 0, 0)]), h.zero())
    out.append(CorpusFlow("subgroups_Z2cubed_cycle", abelian.sub_flow(cyc), ws, LogValue.zero(),
                          finite=True))
    out.append(CorpusFlow("cofinite_Z2cubed_cycle", abelian.cov_flow(cyc),
                          (abelian.Subgroup.generated(h, [(0, 1, 0), (0, 0, 1)]),), LogValue.zero(),
                          finite=True))
    return out


def _selfmaps() -> list[CorpusFlow]:
    rho = selfmaps.rho_shape(2, 3)
    return [
        CorpusFlow("image_rho_2_3", selfmaps.image_flow(rho), (frozenset({("c", "t0")}),),
                   LogValue.zero(), finite=True),
        CorpusFlow("preimage_rho_2_3", selfmaps.preimage_flow(rho), (frozenset({("c", "c0")}),),
                   LogValue.zero(), finite=True),
        CorpusFlow("image_successor", selfmaps.image_flow(selfmaps.successor_ray()),
                   (frozenset({("r", 0, 0)}),), LogValue.count(1)),
        CorpusFlow("preimage_two_sided", selfmaps.preimage_flow(selfmaps.two_sided_shift()),
                   (frozenset({("r", 0, 0)}),), LogValue.count(1)),
    ]


def corpus() -> list[CorpusFlow]:
    return _naturals() + _words() + _bernoulli() + _finite_sets() + _abelian() + _selfmaps()


def by_name(name: str) -> CorpusFlow:
    for entry in corpus():
        if entry.name == name:
            return entry
    raise KeyError(name)
