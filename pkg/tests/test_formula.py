import pytest
from hypothesis import given, settings, strategies as st

from pnmodal.formula import (BOT, And, Atom, Box, Diamond, FormulaSyntaxError, Implies, Nabla,
                             Or, UnboundMetavariable, atoms, parse, substitute, subformulas,
                             to_text)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("[]p -> p", Implies(Box(p), p)),
    ("~p", Implies(p, BOT)),
    ("[](p & q)", Box(And(p, q))),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("p & q & r", And(And(p, q), r)),
    ("p | q & r", Or(p, And(q, r))),
    ("p <-> q", And(Implies(p, q), Implies(q, p))),
    ("<>p & <*>q", And(Nabla(p), Diamond(q))),
    ("~[]~p", Implies(Box(Implies(p, BOT)), BOT)),
    ("_|_", BOT),
    ("x_1 | aB9", Or(Atom("x_1"), Atom("aB9"))),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (Implies(Box(p), p), "[]p -> p"),
    (Implies(p, BOT), "~p"),
    (And(Implies(p, q), Implies(q, p)), "p <-> q"),
    (Implies(Implies(p, q), r), "(p -> q) -> r"),
    (And(p, And(q, r)), "p & (q & r)"),
    (Box(Or(p, q)), "[](p | q)"),
    (Implies(And(p, p), p), "p & p -> p"),
])
def test_print(f, text):
    assert to_text(f) == text


def test_unicode_output():
    assert to_text(parse("[]p -> ~<>q & <*>r"), unicode=True) == "□p → ¬∇q ∧ ◇r"


@pytest.mark.parametrize("text, offset", [
    ("p &", 3),
    ("(p -> q", 7),
    ("p q", 2),
    ("P", 0),
    ("[] ", 3),
    ("p -> #", 5),
])
def test_syntax_error_offsets(text, offset):
    with pytest.raises(FormulaSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset
    assert info.value.expected


@pytest.mark.parametrize("text, expected", [
    ("[](p & q)", {"p", "q"}),
    ("_|_", set()),
    ("p -> (p | q)", {"p", "q"}),
])
def test_atoms(text, expected):
    assert atoms(parse(text)) == expected


@pytest.mark.parametrize("scheme, mapping, expected", [
    ("[]a -> a", {"a": "p&q"}, "[](p&q) -> (p&q)"),
    ("a -> (b -> a)", {"a": "p", "b": "[]p"}, "p -> ([]p -> p)"),
    ("a", {"a": "_|_"}, "_|_"),
])
def test_substitute(scheme, mapping, expected):
    sub = {k: parse(v) for k, v in mapping.items()}
    assert substitute(parse(scheme), sub) == parse(expected)


def test_substitute_missing_binding():
    with pytest.raises(UnboundMetavariable) as info:
        substitute(parse("a -> b"), {"a": p})
    assert info.value.name == "b"


# ---------------------------------------------------------------- properties

names = st.sampled_from(["p", "q", "r", "a1"])


def formulas(max_depth=6):
    leaves = st.one_of(names.map(Atom), st.just(BOT))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Implies, sub, sub),
            st.builds(Box, sub), st.builds(Nabla, sub), st.builds(Diamond, sub)),
        max_leaves=2 ** max_depth,
    )


@settings(max_examples=400, deadline=None)
@given(formulas())
def test_round_trip(f):
    assert parse(to_text(f)) == f


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_sugar_never_in_ast(f):
    text = to_text(f)
    for g in subformulas(parse(text)):
        assert type(g).__name__ in {"Atom", "Bottom", "And", "Or", "Implies", "Box", "Nabla", "Diamond"}


@settings(max_examples=200, deadline=None)
@given(formulas(3), formulas(3), formulas(3))
def test_substitute_composes(s, f1, f2):
    m1 = {"p": f1, "q": f2}
    m1.update({n: Atom(n) for n in atoms(s) if n not in m1})
    inner = substitute(s, m1)
    m2 = {n: Box(Atom(n)) for img in m1.values() for n in atoms(img)}
    composed = {n: substitute(img, m2) for n, img in m1.items()}
    assert substitute(inner, m2) == substitute(s, composed)
