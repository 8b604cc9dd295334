import pytest

from entrofunc import bridges
from entrofunc.errors import SpecError
from entrofunc.logvalue import LogValue

CASES = {c.name: c for c in bridges.registry()}


@pytest.mark.parametrize("name", sorted(n for n, c in CASES.items() if c.kind != "open"))
def test_registered_case_passes(name):
    v = bridges.run_bridge(CASES[name])
    assert v.status == "pass", v.to_json()


@pytest.mark.parametrize("name", sorted(n for n, c in CASES.items() if c.kind == "open"))
def test_open_cases_run_no_check(name):
    v = bridges.run_bridge(CASES[name])
    assert v.status == "open" and v.to_json()["pass"] is None


def test_inverse_cases_use_reciprocal_coefficients():
    pairs = [(c, CASES[c.inverse_of]) for c in CASES.values() if c.inverse_of]
    assert pairs
    for inv, fwd in pairs:
        assert inv.num * fwd.num == inv.den * fwd.den


def test_per_step_cases_also_agree_in_the_limit():
    # entropy bridges carry a limit comparison next to the per-step one
    per_n = [c for c in CASES.values() if c.mode == "per_n_identity" and c.kind.startswith("set_to")]
    assert per_n
    for c in per_n:
        v = bridges.run_bridge(c)
        assert v.status == "pass" and v.limit is not None and v.limit["pass"]


def test_wrong_coefficient_fails():
    data = CASES["set_to_top_two_rays"].to_json()
    data["coefficient"] = {"num": {"q": 1, "m": 3}, "den": 1}
    assert bridges.run_bridge(bridges.BridgeCase.from_json(data)).status == "fail"


def test_infinite_base_gives_infinite_coefficient():
    case = CASES["set_to_top_infinite_base"]
    assert case.num.is_infinite
    assert bridges.scaled_equal(LogValue.inf(), LogValue.count(1), case.num, case.den)
    # zero set entropy stays zero: inf * 0 = 0
    assert bridges.scaled_equal(LogValue.zero(), LogValue.zero(), case.num, case.den)


def test_unknown_case_name():
    with pytest.raises(SpecError):
        bridges.load_case("no_such_case")


def test_schema_rejects_unknown_kind():
    with pytest.raises(SpecError):
        bridges.BridgeCase.from_json({"name": "x", "kind": "mystery", "payload": {}})


def test_case_json_round_trip():
    for c in CASES.values():
        assert bridges.BridgeCase.from_json(c.to_json()) == c


def test_uniform_iso_checker():
    add = lambda a, b: (a + b) % 4
    ok = bridges.check_uniform_iso(lambda x: (3 * x) % 4, range(4), add, add,
                                   lambda x: LogValue.count(min(x, 4 - x)),
                                   lambda x: LogValue.count(min(x, 4 - x)), LogValue.count(1),
                                   target_elements=range(4))
    assert ok.uniform
    doubling = bridges.check_uniform_iso(lambda x: (2 * x) % 4, range(4), add, add,
                                         lambda x: LogValue.count(min(x, 4 - x)),
                                         lambda x: LogValue.count(min(x, 4 - x)), LogValue.count(1),
                                         target_elements=range(4))
    assert not doubling.uniform
