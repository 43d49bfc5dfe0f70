import json
from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from pnmodal.model import (Frame, Model, ModelFormatError, all_strict_orders, check_cond1,
                           check_cond2, check_order, check_star, check_starstar, full_report,
                           is_upset, load, model_from_json, upward_closure, validate_frame,
                           validate_model, witness_holds, worldset)

from conftest import frames, k_model, models, star_model


def holds(reports):
    return {r.condition: r.holds for r in reports}


def test_k_frame_is_well_formed():
    assert all(r.holds for r in validate_frame(k_model().frame))


def test_one_world_empty_family():
    assert all(r.holds for r in validate_frame(Frame.build(1, (), {0: []})))


def test_cond1_violation_witness():
    fr = Frame.build(2, [(0, 1)], {0: [[1]], 1: []})
    order, cond1 = validate_frame(fr)
    assert order.holds
    assert not cond1.holds
    assert cond1.witness == (0, 1, frozenset({1}))


def test_cond2_holds():
    fr = Frame.build(2, [(0, 1)], {0: [[0, 1]], 1: [[0, 1]]})
    assert check_cond2(fr).holds


def test_cond2_strictly_stronger_than_cond1():
    fr = Frame.build(2, [(0, 1)], {0: [[0]], 1: []})
    assert check_cond1(fr).holds
    r = check_cond2(fr)
    assert not r.holds and r.witness == (0, 1, frozenset({0}))


def test_cond2_identity_order_vacuous():
    fr = Frame.build(3, (), {0: [[1]], 1: [[0, 2], []], 2: []})
    assert check_cond2(fr).holds


def test_star_holds_on_star_model():
    assert check_star(star_model().frame).holds


def test_star_vacuous_for_empty_families():
    assert check_star(Frame.build(3)).holds


def test_star_fails_for_empty_neighborhood():
    fr = Frame.build(1, (), {0: [[]]})
    # direct reading: X = {} in N_0, {v : X in N_v} = {0}, and {0} is not in N_0
    assert {v for v in range(1) if worldset([]) in fr.nbhd[v]} == {0}
    assert worldset([0]) not in fr.nbhd[0]
    assert not check_star(fr).holds


def test_starstar_fails_on_star_model():
    r = check_starstar(star_model().frame)
    assert not r.holds
    w, x, y = r.witness
    assert y < x and worldset(x) in star_model().frame.nbhd[w]


def test_starstar_vacuous_and_powerset():
    assert check_starstar(Frame.build(2)).holds
    power = [[w for w in range(3) if s >> w & 1] for s in range(8)]
    assert check_starstar(Frame.build(3, (), {w: power for w in range(3)})).holds


def test_validate_model():
    assert all(r.holds for r in validate_model(k_model()))
    bad = Model.build(Frame.build(2, [(0, 1)]), {"p": [0]})
    r = validate_model(bad)[-1]
    assert r.condition == "valuation-monotone" and r.witness == ("p", 0, 1)
    assert all(r.holds for r in validate_model(Model(Frame.build(2), {})))


def test_order_axioms():
    assert not check_order(Frame(2, frozenset({(0, 0)}), ((), ()))).holds
    cyc = Frame.build(2, [(0, 1), (1, 0)])
    assert check_order(cyc).witness[0] == "antisymmetry"
    chain = Frame.build(3, [(0, 1), (1, 2)])
    assert check_order(chain).witness == ("transitivity", 0, 1, 2)


@pytest.mark.parametrize("order, s, expected", [
    ([(0, 1)], [0], [0, 1]),
    ([], [0], [0]),
    ([(0, 1)], [], []),
])
def test_upward_closure(order, s, expected):
    fr = Frame.build(2, order)
    assert upward_closure(fr, worldset(s)) == worldset(expected)


def test_partial_order_counts():
    # labeled posets on 1, 2, 3 points
    assert [len(all_strict_orders(n)) for n in (1, 2, 3)] == [1, 3, 19]
    assert all_strict_orders(2)[0] == ()


def test_nbhd_canonical_and_deduplicated():
    a = Frame.build(2, (), {0: [[1], [0], [1, 0], [0, 1]]})
    b = Frame.build(2, (), {0: [[0, 1], [0], [1]]})
    assert a == b and a.nbhd[0] == (1, 2, 3)


# --------------------------------------------------------------- file format


def test_json_round_trip(tmp_path):
    m = k_model()
    path = tmp_path / "k.json"
    path.write_text(json.dumps(m.to_json()))
    assert load(path) == m


def test_frame_file_has_no_valuation(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"worlds": 2, "order": [[0, 1]], "nbhd": {"0": [[1]], "1": [[1]]}}))
    fr = load(path)
    assert isinstance(fr, Frame) and (0, 0) in fr.order


@pytest.mark.parametrize("data", [
    {"worlds": 2, "order": [[0, 2]]},
    {"worlds": 2, "nbhd": {"2": []}},
    {"worlds": 2, "nbhd": {"0": [[0, 5]]}},
    {"worlds": 2, "valuation": {"p": [3]}},
    {"worlds": 0},
    {"worlds": 17},
    {"order": []},
])
def test_loader_rejects(data):
    with pytest.raises(ModelFormatError):
        model_from_json(data)


def test_reflexive_closure_warns(caplog):
    model_from_json({"worlds": 2, "order": [], "valuation": {}})
    assert "reflexive" in caplog.text


# ---------------------------------------------------------------- properties


@settings(max_examples=300, deadline=None)
@given(frames())
def test_witnesses_replay(fr):
    for r in full_report(fr):
        if not r.holds:
            assert not witness_holds(r.condition, fr, r.witness)


@settings(max_examples=200, deadline=None)
@given(models())
def test_valuation_witness_replays(m):
    m = Model(m.frame, {"p": m.valuation["p"] | 1})  # may break monotonicity
    r = validate_model(m)[-1]
    if not r.holds:
        assert not witness_holds(r.condition, m, r.witness)


@settings(max_examples=300, deadline=None)
@given(frames(), st.data())
def test_cond1_sampled_triples(fr, data):
    if not check_cond1(fr).holds:
        return
    pairs = sorted(fr.order)
    w, v = data.draw(st.sampled_from(pairs))
    candidates = [x for x in fr.nbhd[w] if x >> v & 1]
    if candidates:
        assert data.draw(st.sampled_from(candidates)) in fr.nbhd[v]


@settings(max_examples=300, deadline=None)
@given(frames(), st.integers(0, 7), st.integers(0, 7))
def test_upward_closure_laws(fr, a, b):
    a &= fr.full
    b &= fr.full
    ca = upward_closure(fr, a)
    assert a & ~ca == 0                            # extensive
    assert upward_closure(fr, ca) == ca            # idempotent
    assert is_upset(fr, ca)
    assert upward_closure(fr, a & b) & ~ca == 0    # monotone


def test_cond2_implies_cond1_up_to_two_worlds():
    # exhaustive over every order and every neighborhood assignment with <= 2 worlds
    for n in (1, 2):
        sets = range(1 << n)
        fams = [c for k in range(len(sets) + 1) for c in combinations(sets, k)]
        for order in all_strict_orders(n):
            for combo in product(fams, repeat=n):
                fr = Frame.from_masks(n, order, combo)
                if check_cond2(fr).holds:
                    assert check_cond1(fr).holds
