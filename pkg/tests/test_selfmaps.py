import itertools
import random

import pytest

from entrofunc import selfmaps
from entrofunc.errors import NotFiniteToOneError, SpecError
from entrofunc.logvalue import LogValue

import oracles


def test_named_examples():
    assert selfmaps.covariant_entropy(selfmaps.successor_ray()).value == LogValue.count(1)
    two = selfmaps.two_sided_shift()
    assert selfmaps.covariant_entropy(two).value == LogValue.count(1)
    assert selfmaps.contravariant_entropy(two).value == LogValue.count(1)
    assert selfmaps.contravariant_entropy(selfmaps.pakex()).value == LogValue.count(2)


def test_pakex_labels_and_preimages():
    g = selfmaps.pakex()
    # 2n+2 -> 2n and 2n+3 -> 2n+1
    for h in [("a", 0, 0), ("a", 1, 0), ("a", 0, 3), ("a", 1, 5)]:
        n = selfmaps.pakex_label(h)
        assert selfmaps.pakex_label(g.step(h)) == n - 2
    assert selfmaps.pakex_label(g.step(("c", "1"))) == 0


def test_surjective_core_of_finite_maps_matches_iterated_images():
    rng = random.Random(5)
    for _ in range(200):
        size = rng.randint(1, 7)
        table = {str(i): str(rng.randrange(size)) for i in range(size)}
        img = set(table)
        while True:
            nxt = {table[x] for x in img}
            if nxt == img:
                break
            img = nxt
        sc = selfmaps.surjective_core(selfmaps.from_finite_map(table))
        assert {n for n, _ in sc.core} == img


def test_star_p_ignores_finite_backward_chains():
    # pakex with its anti-rays is surjective, so the two variants agree there
    g = selfmaps.pakex()
    assert selfmaps.contravariant_entropy(g, variant="star_p").value == LogValue.count(2)
    # a tail hanging off a ray has no infinite backward orbit
    h = selfmaps.SelfmapGraph(core=(("t", ("r", 0, 0)),), rays=(0,), antirays=((0, ("c", "t")),))
    assert selfmaps.contravariant_entropy(h).value == LogValue.count(1)
    assert selfmaps.contravariant_entropy(h, variant="star_p").value == LogValue.count(1)


def test_trajectory_matches_structural_on_random_graphs():
    rng = random.Random(6)
    for _ in range(40):
        g = oracles.random_tame_graph(rng)
        for fn in (selfmaps.covariant_entropy, selfmaps.contravariant_entropy):
            assert fn(g, n_max=24).value == fn(g, mode="exact_structural").value


def test_finite_witness_restricted_values():
    g = selfmaps.rho_shape(3, 4)
    est = selfmaps.covariant_entropy(g, [[("c", "t0")]])
    assert est.value.is_zero and est.witness_restricted
    assert selfmaps.trajectory_sizes(g, [("c", "t0")], 9) == [1, 2, 3, 4, 5, 6, 7, 7, 7]


def test_collapsing_rays_are_not_finite_to_one():
    g = selfmaps.SelfmapGraph(core=(("0", ("c", "0")),), collapses=((0, ("c", "0")),))
    assert not g.finite_to_one
    with pytest.raises(NotFiniteToOneError):
        selfmaps.contravariant_entropy(g)
    assert selfmaps.covariant_entropy(g).value.is_zero


@pytest.mark.parametrize("bad", [
    {"core": [["x", ["c", "y"]]]},
    {"rays": [0, 0]},
    {"antirays": [[0, ["a", 0, 0]]]},
])
def test_invalid_graphs_are_rejected(bad):
    with pytest.raises(SpecError):
        selfmaps.SelfmapGraph.from_json(bad)


def test_json_round_trip():
    for g in (selfmaps.pakex(), selfmaps.two_sided_shift(), selfmaps.rho_shape(2, 3)):
        assert selfmaps.SelfmapGraph.from_json(g.to_json()) == g


def test_image_of_all_handles_is_step():
    g = selfmaps.two_sided_shift()
    pts = [("r", 0, i) for i in range(4)] + [("a", 0, i) for i in range(4)]
    for a, b in itertools.product(pts, pts):
        assert (b in g.preimage(a)) == (g.step(b) == a)
