import random

import pytest

from entrofunc import abelian, selfmaps, shifts
from entrofunc.errors import NotFiniteToOneError, SpecError
from entrofunc.logvalue import LogValue

import oracles

G = abelian.FiniteAbelianGroup.parse


def _random_finite_map(rng, size):
    return selfmaps.from_finite_map({str(i): str(rng.randrange(size)) for i in range(size)})


def test_named_values():
    z2 = G("Z2")
    tau = shifts.ShiftFlow(z2, selfmaps.successor_ray(), "tau")
    assert shifts.h_alg_tau(tau).value == LogValue.log(2)
    sig = shifts.ShiftFlow(G("Z3"), selfmaps.SelfmapGraph(rays=(0, 1)), "sigma")
    assert shifts.h_top_sigma(sig).value == LogValue.log(9)
    oplus = shifts.ShiftFlow(z2, selfmaps.pakex(), "sigma_oplus")
    assert shifts.h_alg_sigma_oplus(oplus).value == LogValue.log(4)


def test_tau_moves_mass_along_the_map():
    flow = shifts.ShiftFlow(G("Z4"), selfmaps.from_finite_map({"a": "c", "b": "c", "c": "c"}), "tau")
    out = shifts.tau_apply(flow, {("c", "a"): (1,), ("c", "b"): (3,), ("c", "c"): (2,)})
    # 1 + 3 + 2 = 2 mod 4, all landing on c
    assert out == {("c", "c"): (2,)}


def test_sigma_oplus_pulls_back_along_preimages():
    flow = shifts.ShiftFlow(G("Z2"), selfmaps.pakex(), "sigma_oplus")
    out = shifts.sigma_oplus_apply(flow, {("c", "0"): (1,)})
    assert sorted(selfmaps.pakex_label(h) for h in out) == [0, 1, 2]


def test_finite_index_sets_match_the_lattice_engine():
    rng = random.Random(3)
    for _ in range(60):
        g = _random_finite_map(rng, rng.randint(1, 4))
        k = G(rng.choice(["Z2", "Z3", "Z4", "Z2xZ2"]))
        pts = [("c", n) for n, _ in g.core]
        f = rng.sample(pts, rng.randint(1, len(pts)))
        sizes = selfmaps.trajectory_sizes(g, f, 5)
        # eta(T_n(lam, F)) has index |K|^|T_n|, and tau(K^(D)) has order |K|^|T_n|
        assert shifts.sigma_cotrajectory_indices(g, k, f, 5) == [k.order ** s for s in sizes]
        assert shifts.tau_trajectory_orders(g, k, f, 5) == [k.order ** s for s in sizes]
        sigma = shifts.sigma_matrix(g, k)
        elems = oracles.bf_subgroup(shifts.eta(g, k, f))
        assert oracles.bf_cotrajectory_indices(sigma, elems, 5) == [k.order ** s for s in sizes]


def test_sigma_oplus_orders_against_enumeration():
    rng = random.Random(4)
    for _ in range(8):
        g = oracles.random_tame_graph(rng, 5)
        k = G(rng.choice(["Z2", "Z3"]))
        flow = shifts.ShiftFlow(k, g, "sigma_oplus")
        d = sorted(g.cofinal_witness(), key=repr)[:1]
        lib = shifts.sigma_oplus_orders(flow, d, 5)
        if lib[-1] <= 1 << 12:
            assert oracles.bf_sigma_oplus_orders(g, k, d, 5) == lib


def test_sigma_oplus_needs_finite_to_one():
    g = selfmaps.SelfmapGraph(core=(("0", ("c", "0")),), collapses=((0, ("c", "0")),))
    with pytest.raises(NotFiniteToOneError):
        shifts.ShiftFlow(G("Z2"), g, "sigma_oplus")


def test_direction_checked():
    with pytest.raises(SpecError):
        shifts.ShiftFlow(G("Z2"), selfmaps.successor_ray(), "rho")
    flow = shifts.ShiftFlow(G("Z2"), selfmaps.successor_ray(), "sigma")
    with pytest.raises(SpecError):
        shifts.tau_apply(flow, {})


def test_duality_on_a_fixed_map():
    g = selfmaps.from_finite_map({"0": "1", "1": "1", "2": "0"})
    assert shifts.sigma_hat_equals_tau(g, G("Z4xZ2")).equal


def test_json_round_trip():
    flow = shifts.ShiftFlow(G("Z2xZ4"), selfmaps.two_sided_shift(), "sigma")
    assert shifts.ShiftFlow.from_json(flow.to_json()) == flow
