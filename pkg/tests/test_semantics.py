import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from pnmodal import _batch
from pnmodal.formula import BOT, And, Atom, Box, Diamond, Implies, Nabla, Or, parse
from pnmodal.model import Frame, Model, check_cond1, check_cond2, members
from pnmodal.replicate import bundled_model
from pnmodal.semantics import (BoxMode, EvalContext, EvaluationError, birelational_refutation,
                               check_monotonicity, extension, forces)

from conftest import k_model, models, naive_forces, star_model


def formulas(atoms=("p", "q"), ops=("and", "or", "imp", "box", "nabla", "diamond"), max_leaves=12):
    makers = {"and": lambda s: st.builds(And, s, s), "or": lambda s: st.builds(Or, s, s),
              "imp": lambda s: st.builds(Implies, s, s), "box": lambda s: st.builds(Box, s),
              "nabla": lambda s: st.builds(Nabla, s), "diamond": lambda s: st.builds(Diamond, s)}
    leaves = st.one_of(st.sampled_from(atoms).map(Atom), st.just(BOT))
    return st.recursive(leaves, lambda s: st.one_of(*[makers[o](s) for o in ops]),
                        max_leaves=max_leaves)


# ------------------------------------------------------------------ examples


def test_birelational_model_conjunction():
    ctx = EvalContext(bundled_model("birelational"))
    assert members(extension(ctx, parse("p & q"))) == [0]


def test_bottom_is_empty():
    assert extension(EvalContext(k_model()), BOT) == 0


def test_star_model_box():
    assert members(extension(EvalContext(star_model()), parse("[]p"))) == [0]


def test_k_model_forcing():
    ctx = EvalContext(k_model())
    v = 2
    assert forces(ctx, v, parse("[](p -> q)"))
    assert not forces(ctx, v, parse("[]p -> []q"))
    assert all(forces(ctx, w, parse("p -> p")) for w in range(3))


def test_k_model_monotone_box():
    ctx = EvalContext(k_model())
    f = parse("[](p -> q)")
    ext = extension(ctx, f)
    # brute force: every order pair preserves membership
    assert all(not ext >> w & 1 or ext >> v & 1 for w, v in ctx.model.frame.order)
    assert check_monotonicity(ctx, f) is None


def test_identity_order_never_violates():
    ctx = EvalContext(bundled_model("birelational"))
    for text in ["[](p & q)", "~[]p", "p -> q", "<*>p | <>q"]:
        assert check_monotonicity(ctx, parse(text)) is None


def test_simple_mode_needs_cond2():
    # as stated: N_0 = {{0,1}}, N_1 = {}; this frame also breaks cond1
    m = Model.build(Frame.build(2, [(0, 1)], {0: [[0, 1]], 1: []}), {"p": [0, 1]})
    assert not check_cond1(m.frame).holds
    assert check_monotonicity(EvalContext(m, BoxMode.SIMPLE), parse("[]p")) == (0, 1)
    # a PN-frame that fails only cond2 shows the same
    m = Model.build(Frame.build(2, [(0, 1)], {0: [[]], 1: []}), {"p": []})
    assert check_cond1(m.frame).holds and not check_cond2(m.frame).holds
    assert check_monotonicity(EvalContext(m, BoxMode.SIMPLE), parse("[]p")) == (0, 1)
    assert check_monotonicity(EvalContext(m), parse("[]p")) is None


@pytest.mark.parametrize("clause", [BoxMode.REL_PLAIN, BoxMode.REL_REFLEXIVE])
def test_birelational_refutation(clause):
    t = birelational_refutation(clause)
    assert len(t.rows) == 16
    assert len({r.relation for r in t.rows}) == 16
    assert t.matches == []
    assert t.neighborhood_box_conj and not t.neighborhood_box_p
    assert t.refuted


def test_birelational_empty_relation_row():
    row = birelational_refutation(BoxMode.REL_PLAIN).rows[0]
    assert row.relation == ()
    assert row.box_p and not row.match


def test_relational_context_rules():
    m = k_model()
    with pytest.raises(EvaluationError):
        EvalContext(m, BoxMode.REL_PLAIN)
    with pytest.raises(EvaluationError):
        EvalContext(m, BoxMode.STANDARD, frozenset({(0, 1)}))
    with pytest.raises(EvaluationError):
        EvalContext(m, BoxMode.REL_PLAIN, frozenset({(0, 5)}))
    ctx = EvalContext(m, BoxMode.REL_PLAIN, frozenset({(0, 1)}))
    with pytest.raises(EvaluationError):
        extension(ctx, parse("<>p"))
    with pytest.raises(EvaluationError):
        extension(ctx, parse("[]<*>p"))


def test_missing_atom_is_empty():
    assert extension(EvalContext(k_model()), parse("fresh")) == 0


def test_diamond_not_monotone_on_cond2_model():
    # the possibility clause quantifying over every neighborhood is not hereditary:
    # 0 has no neighborhoods, its successor 1 has one without a p-world
    m = Model.build(Frame.build(2, [(0, 1)], {0: [], 1: [[0]]}), {"p": [1]})
    assert check_cond1(m.frame).holds and check_cond2(m.frame).holds
    assert check_monotonicity(EvalContext(m), parse("<*>p")) == (0, 1)
    assert naive_forces(m, BoxMode.STANDARD, 0, parse("<*>p"))
    assert not naive_forces(m, BoxMode.STANDARD, 1, parse("<*>p"))


# ---------------------------------------------------------------- properties

pn_models = models().filter(lambda m: check_cond1(m.frame).holds)


@settings(max_examples=300, deadline=None)
@given(models(), formulas(), st.sampled_from([BoxMode.STANDARD, BoxMode.SIMPLE]))
def test_extension_matches_naive_oracle(m, f, mode):
    ext = extension(EvalContext(m, mode), f)
    assert members(ext) == [w for w in range(m.frame.world_count) if naive_forces(m, mode, w, f)]


@settings(max_examples=300, deadline=None)
@given(pn_models, formulas(ops=("and", "or", "imp", "box")))
def test_monotone_standard(m, f):
    assert check_monotonicity(EvalContext(m), f) is None


@settings(max_examples=300, deadline=None)
@given(pn_models, formulas(ops=("and", "or", "imp", "box", "nabla")))
def test_monotone_nabla_on_cond2(m, f):
    assume(check_cond2(m.frame).holds)
    assert check_monotonicity(EvalContext(m), f) is None


@settings(max_examples=200, deadline=None)
@given(pn_models, formulas())
def test_box_implies_body(m, f):
    ctx = EvalContext(m)
    assert extension(ctx, Box(f)) & ~extension(ctx, f) == 0


@settings(max_examples=200, deadline=None)
@given(models(), formulas(), st.data())
def test_simple_equals_standard_on_reflexive_families(m, f, data):
    fr = m.frame
    fams = [[x | (1 << w) for x in fam] for w, fam in enumerate(fr.nbhd)]
    m = Model(Frame.from_masks(fr.world_count, fr.strict_pairs(), fams), m.valuation)
    std = extension(EvalContext(m), Box(f))
    simple = extension(EvalContext(m, BoxMode.SIMPLE), Box(f))
    assert std == simple


def test_simple_and_standard_differ_somewhere():
    m = Model.build(Frame.build(1, (), {0: [[]]}), {})
    assert extension(EvalContext(m), parse("[]p")) == 0
    assert extension(EvalContext(m, BoxMode.SIMPLE), parse("[]p")) == 1


@settings(max_examples=200, deadline=None)
@given(pn_models, formulas())
def test_negation_coherence(m, f):
    fr = m.frame
    ext = extension(EvalContext(m), f)
    expected = sum(1 << w for w in range(fr.world_count) if not fr.up[w] & ext)
    assert extension(EvalContext(m), Implies(f, BOT)) == expected


# --------------------------------------------------- vectorised vs scalar


@settings(max_examples=200, deadline=None)
@given(st.lists(models(), min_size=1, max_size=6), formulas(),
       st.sampled_from([BoxMode.STANDARD, BoxMode.SIMPLE]), st.data())
def test_batch_evaluator_matches_scalar(ms, f, mode, data):
    n = data.draw(st.integers(1, 3))
    order = ms[0].frame.strict_pairs() if ms[0].frame.world_count == n else ()
    ms = [m for m in ms if m.frame.world_count == n and m.frame.strict_pairs() == list(order)]
    assume(ms)
    fams = np.array([[sum(1 << x for x in fam) for fam in m.frame.nbhd] for m in ms], dtype=np.uint8)
    batch = _batch.FrameBatch(n, tuple(order), fams)
    env = dict(ms[0].valuation)
    got = _batch.evaluate(batch, f, env, mode.value)
    got = np.broadcast_to(np.asarray(got, dtype=np.int64), (len(ms),))
    for i, m in enumerate(ms):
        assert int(got[i]) == extension(EvalContext(Model(m.frame, env), mode), f)
