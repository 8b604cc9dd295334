from fractions import Fraction

import mpmath
import pytest

from entrofunc import measure
from entrofunc.errors import ResourceLimitError, SpecError
from entrofunc.core.semigroup import Limits
from entrofunc.logvalue import LogValue

import oracles

GOLDEN = measure.SymbolicSystem.markov(("2/3", "1/3"), (("1/2", "1/2"), ("1", "0")))


def test_bernoulli_values():
    s = measure.SymbolicSystem.bernoulli(("1/4", "3/4"))
    est = measure.h_mes(s, n_max=4, window=2)
    assert est.value == LogValue.log("256/27", "1/4")
    assert [str(v) for v in est.c] == ["1/4*log 256/27", "1/2*log 256/27", "3/4*log 256/27",
                                       "log 256/27"]


def test_markov_rate_and_depth_independence():
    assert measure.markov_rate(GOLDEN) == LogValue.log(2, "2/3")
    for depth in (1, 2, 3):
        assert measure.h_mes(GOLDEN, depth=depth, n_max=8).value == LogValue.log(2, "2/3")


def test_block_entropies_match_word_enumeration():
    with mpmath.workdps(40):
        est = measure.h_mes(GOLDEN, n_max=8)
        for n, v in enumerate(est.c, start=1):
            assert abs(v.to_mpf(160) - oracles.bf_block_entropy(GOLDEN, n)) < mpmath.mpf(10) ** -30


def test_cylinders_exclude_null_words():
    cyl = measure.cylinders(GOLDEN, 3)
    words = {w for w, _ in cyl.blocks}
    assert (1, 1, 0) not in words and len(words) == 5
    assert sum(m for _, m in cyl.blocks) == 1
    assert all(GOLDEN.word_measure(w) == m for w, m in cyl.blocks)


def test_boltzmann_of_a_partition():
    s = measure.SymbolicSystem.bernoulli(("1/3", "2/3"))
    h = measure.boltzmann(measure.cylinders(s, 1))
    assert h == LogValue.log(3) - LogValue.log(2, Fraction(2, 3))


@pytest.mark.parametrize("bad", [
    {"bernoulli": ["1/2", "1/3"]},
    {"bernoulli": [0.5, 0.5]},
    {"markov": {"pi": ["1/2", "1/2"], "P": [["1", "0"], ["1", "0"]]}},
    {"alphabet": 3, "bernoulli": ["1/2", "1/2"]},
    {"bernoulli": ["1/2", "1/2"], "markov": {}},
])
def test_invalid_systems(bad):
    with pytest.raises(SpecError):
        measure.SymbolicSystem.from_json(bad)


def test_json_round_trip():
    for s in (GOLDEN, measure.SymbolicSystem.bernoulli(("1/6", "1/3", "1/2"))):
        assert measure.SymbolicSystem.from_json(s.to_json()) == s


def test_cylinder_ceiling():
    s = measure.SymbolicSystem.bernoulli(("1/3", "1/3", "1/3"))
    with pytest.raises(ResourceLimitError):
        measure.cylinders(s, 6, Limits(max_cardinality=100))


def test_product_system_adds_entropy():
    b = measure.SymbolicSystem.bernoulli(("1/4", "3/4"))
    prod = measure.product_system(GOLDEN, b)
    # the product measure of a pair word is the product of the factor measures
    for w in [(0, 1, 2), (3, 2, 0), (1, 1, 1)]:
        left = tuple(x // 2 for x in w)
        right = tuple(x % 2 for x in w)
        assert prod.word_measure(w) == GOLDEN.word_measure(left) * b.word_measure(right)
    ev = measure.weak_addition_evidence(GOLDEN, b)
    assert ev["status"] == "consistent" and ev["label"] == "evidence"
