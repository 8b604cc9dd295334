from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from entrofunc.core import carriers, laws
from entrofunc.core.estimate import (EXACT, EXACT_HEURISTIC, FEKETE, NUMERIC, estimate_entropy,
                                     fekete_bounds, left_entropy, semigroup_entropy)
from entrofunc.core.semigroup import CarrierFlags, Flow, Limits, quasi_period, trajectory
from entrofunc.errors import ContractivityError, InapplicableError, ResourceLimitError, SpecError
from entrofunc.logvalue import LogValue

C = LogValue.count
STRUCT = CarrierFlags(subadditive=True, structured=True)


def test_constant_difference_is_exact_on_structured_carriers():
    est = estimate_entropy([C(3 * n + 1) for n in range(10)], STRUCT)
    assert est.classification == EXACT and est.value == C(3)
    assert est.certificates["rule"] == "constant_difference"


def test_heuristic_tag_without_structure():
    est = estimate_entropy([C(2 * n) for n in range(10)])
    assert est.classification == EXACT_HEURISTIC and est.value == C(2)


def test_eventually_constant_reports_first_index():
    c = [C(1), C(3), C(4), C(4), C(4), C(4), C(4), C(4), C(4)]
    est = estimate_entropy(c, STRUCT)
    assert est.value.is_zero and est.certificates["from_n"] == 3


def test_ratio_limit_recovers_a_log():
    # log(1 + 2^n) has differences converging to log 2
    c = [LogValue.log(1 + 2 ** n) for n in range(1, 30)]
    est = estimate_entropy(c)
    assert est.classification == EXACT_HEURISTIC and est.value == LogValue.log(2)


def test_geometric_divergence():
    est = estimate_entropy([C(2 ** n) for n in range(20)])
    assert est.value.is_infinite and est.certificates["rule"] == "geometric_divergence"


def test_fekete_and_numeric_fallbacks():
    c = [LogValue.approx(n ** 0.5) for n in range(1, 20)]
    assert estimate_entropy(c, CarrierFlags(subadditive=True)).classification == FEKETE
    assert estimate_entropy(c).classification == NUMERIC


def test_infinite_norm_short_circuits():
    est = estimate_entropy([C(1), LogValue.inf()], STRUCT)
    assert est.value.is_infinite and est.certificates["from_n"] == 2


def test_bad_arguments():
    with pytest.raises(SpecError):
        estimate_entropy([])
    with pytest.raises(SpecError):
        estimate_entropy([C(1)], window=0)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=30))
def test_fekete_bounds_non_increasing(xs):
    b = fekete_bounds([C(x) for x in xs])
    assert all(y <= x for x, y in zip(b, b[1:]))
    assert b[-1] == min(Fraction(x, n) for n, x in enumerate(xs, start=1))


def test_trajectory_right_and_left():
    flow = carriers.index_shift_flow(carriers.free_words("runs"))
    assert trajectory(flow, (0,), 3) == [(0,), (0, 1), (0, 1, 2)]
    assert trajectory(flow, (0,), 3, side="left") == [(0,), (1, 0), (2, 1, 0)]


def test_contractivity_is_enforced():
    log = carriers.naturals("log")
    bad = Flow(log, lambda x: 2 * x, contractive=True, name="doubling")
    with pytest.raises(ContractivityError):
        trajectory(bad, 1, 3)


def test_element_size_ceiling():
    flow = carriers.multiply_flow(carriers.naturals("log"), 2)
    with pytest.raises(ResourceLimitError):
        trajectory(flow, 1, 64, limits=Limits(max_element_size=8))


def test_quasi_period():
    flow = carriers.translate_flow(1, 3)
    assert quasi_period(flow, frozenset({0})) == (3, 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.integers(1, 50))
def test_multiplication_entropy_is_independent_of_witness(a, x):
    flow = carriers.multiply_flow(carriers.naturals("log"), a)
    est, _ = semigroup_entropy(flow, [x], n_max=32)
    assert est.value == LogValue.log(a)


def test_scaling_upgrade_drops_restriction():
    flow = carriers.multiply_flow(carriers.naturals("log"), 3)
    est, _ = semigroup_entropy(flow, [1], n_max=32, upgrade=carriers.naturals_scaling_upgrade())
    assert not est.witness_restricted
    est2, _ = semigroup_entropy(flow, [1], n_max=32)
    assert est2.witness_restricted


def test_left_right_asymmetry_on_words():
    flow = carriers.index_shift_flow(carriers.free_words("runs"))
    right, _ = semigroup_entropy(flow, [(0,)], 24)
    left, _ = left_entropy(flow, [(0,)], 24)
    assert right.value == C(1) and left.value.is_zero


def test_left_bernoulli_shift_has_zero_entropy():
    z4 = carriers.sample_monoids()[2]
    ws = carriers.letter_witnesses(z4)
    r, _ = semigroup_entropy(carriers.right_bernoulli_flow(z4), ws, 16)
    l, _ = semigroup_entropy(carriers.left_bernoulli_flow(z4), ws, 16)
    assert r.value == z4.max_norm() and l.value.is_zero


def test_log_law_and_inversion():
    flow = carriers.multiply_flow(carriers.naturals("log"), 2)
    assert laws.log_law(flow, 3, [1], 32).status == laws.HOLDS
    shift = carriers.translate_flow(1)
    assert laws.inversion(shift, [frozenset({0})], 32).status == laws.HOLDS
    assert laws.inversion(flow, [1], 32).status == laws.INAPPLICABLE


def test_product_and_coproduct():
    a = carriers.multiply_flow(carriers.naturals("log"), 2)
    b = carriers.translate_flow(1)
    pm = laws.product_max(a, b, [1], [frozenset({0})], 24)
    assert pm.status == laws.HOLDS and pm.rhs_value == C(1)
    cs = laws.coproduct_sum(a, b, [1], [frozenset({0})], 24)
    assert cs.status == laws.HOLDS and cs.rhs_value == C(1) + LogValue.log(2)


def test_quasi_periodic_needs_an_arithmetic_norm():
    flow = carriers.multiply_flow(carriers.naturals("log"), 2)
    with pytest.raises(InapplicableError):
        laws.quasi_periodic_zero(flow, [1])


def test_check_law_dispatch_rejects_unknown():
    with pytest.raises(SpecError):
        laws.check_law(carriers.translate_flow(1), "nonsense", [frozenset({0})])
