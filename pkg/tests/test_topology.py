import itertools
import random

import pytest

from entrofunc import topology
from entrofunc.errors import SpecError

import oracles


def _space():
    # a <= b makes every open set containing a also contain b
    return topology.FiniteSpace(("a", "b", "c", "d"), (("a", "b"),))


def test_opens_are_up_sets():
    sp = _space()
    opens = set(sp.opens())
    for m in range(1 << 4):
        up = all(not (m >> i & 1) or (m & sp.up[i]) == sp.up[i] for i in range(4))
        assert (m in opens) == up
    assert sp.mask(["a"]) not in opens and sp.mask(["a", "b"]) in opens


def test_continuity_is_checked():
    sp = _space()
    # b -> c, a -> d breaks a <= b unless c <= d
    with pytest.raises(SpecError):
        topology.ContinuousMap.from_mapping(sp, {"a": "c", "b": "d", "c": "c", "d": "d"})
    # the discrete space admits every map
    disc = topology.FiniteSpace.discrete(3)
    assert len(topology.continuous_selfmaps(disc)) == 27
    assert len(topology.continuous_selfmaps(topology.FiniteSpace.indiscrete(3))) == 27


def test_continuous_selfmaps_by_enumeration():
    rng = random.Random(2)
    for _ in range(20):
        sp = oracles.random_space(rng, 4)
        n = len(sp.points)
        opens = set(sp.opens())
        good = []
        for t in itertools.product(range(n), repeat=n):
            pre = lambda m: sum(1 << i for i in range(n) if m >> t[i] & 1)
            if all(pre(u) in opens for u in opens):
                good.append(t)
        assert sorted(m.table for m in topology.continuous_selfmaps(sp)) == sorted(good)


def test_min_subcover_on_random_covers():
    rng = random.Random(3)
    for _ in range(100):
        sp = oracles.random_space(rng, 6)
        cov = oracles.random_open_cover(rng, sp, rng.randint(1, 8))
        assert topology.min_subcover(sp, cov) == oracles.bf_min_cover(cov, sp.full)


def test_cover_norms_against_unreduced_joins():
    rng = random.Random(4)
    for _ in range(60):
        sp = oracles.random_space(rng, 5)
        phi = oracles.random_map(rng, sp)
        cov = oracles.random_open_cover(rng, sp, rng.randint(1, 4))
        assert topology.cover_norms(phi, cov, 5) == oracles.bf_cover_norms(phi, cov, 5)


def test_finite_entropy_is_zero_with_certificate():
    sp = topology.FiniteSpace.discrete(3)
    phi = topology.ContinuousMap(sp, (1, 2, 0))
    cover = [sp.mask([p]) for p in sp.points]
    est, tables = topology.h_fin_top(phi, [cover], 8)
    assert est.value.is_zero and est.certificates["pair"] == [4, 1]
    assert tables == [[3] * 8]


def test_t0_reflection_collapses_equivalent_points():
    sp = topology.FiniteSpace(("a", "b", "c"), (("a", "b"), ("b", "a")))
    r = topology.t0_reflection(sp)
    assert len(r.quotient.points) == 2 and r.classes[0] == r.classes[1]


def test_frame_of_a_space_and_bridge():
    sp = _space()
    phi = topology.ContinuousMap.from_mapping(sp, {"a": "a", "b": "a", "c": "a", "d": "c"})
    cover = topology.cover_from_json(sp, [["a", "b"], ["b", "c"], ["b", "c", "d"]])
    v = topology.o_functor_check(phi, cover, 6)
    assert v.ok and v.lhs == [2, 3, 3, 3, 3, 3]


def test_abstract_frame():
    h, cover = topology.four_element_frame()
    est, tables = topology.h_fr(h, [cover], 6)
    assert est.value.is_zero and tables == [[2] * 6]
    with pytest.raises(SpecError):
        topology.h_fr(h, [[0b01]], 4)


def test_frame_hom_must_preserve_meets():
    f = topology.FiniteFrame((0b01, 0b10), ("a", "b"))
    with pytest.raises(SpecError):
        topology.FrameHom(f, (0b01, 0b01))


def test_frame_from_json_rejects_cycles():
    with pytest.raises(SpecError):
        topology.FiniteFrame.from_json({"below": [[1], [0]]})


def test_product_evidence_on_random_pairs():
    rng = random.Random(8)
    for _ in range(30):
        x, y = oracles.random_space(rng, 3), oracles.random_space(rng, 3)
        phi, psi = oracles.random_map(rng, x), oracles.random_map(rng, y)
        u, v = oracles.random_open_cover(rng, x, 2), oracles.random_open_cover(rng, y, 2)
        e = topology.weak_addition_evidence(phi, psi, u, v, 5)
        prod = topology.product_map(phi, psi)
        w = topology.product_cover(x, y, u, v)
        assert e.product == oracles.bf_cover_norms(prod, w, 5)
        assert e.consistent and e.to_json()["label"] == "evidence"
