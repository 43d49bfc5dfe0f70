from hypothesis import strategies as st

from pnmodal.formula import BOT, And, Atom, Box, Diamond, Implies, Nabla, Or
from pnmodal.model import Frame, Model, all_strict_orders, is_upset, members
from pnmodal.replicate import bundled_model
from pnmodal.semantics import BoxMode

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def k_model() -> Model:
    return bundled_model("k_countermodel")


def star_model() -> Model:
    return bundled_model("star_not_four")


@st.composite
def frames(draw, max_worlds=3, max_family=3):
    """Random frames; the order is a partial order but cond1 is not enforced."""
    n = draw(st.integers(1, max_worlds))
    order = draw(st.sampled_from(all_strict_orders(n)))
    sets = st.integers(0, (1 << n) - 1)
    fams = [draw(st.lists(sets, max_size=max_family, unique=True)) for _ in range(n)]
    return Frame.from_masks(n, order, fams)


@st.composite
def models(draw, max_worlds=3, max_family=3, atoms=("p", "q")):
    frame = draw(frames(max_worlds, max_family))
    ups = [s for s in range(frame.full + 1) if is_upset(frame, s)]
    return Model(frame, {a: draw(st.sampled_from(ups)) for a in atoms})


def naive_forces(model, mode, w, f):
    """Forcing read clause by clause over Python sets; no bitmasks, no memo."""
    fr = model.frame
    worlds = range(fr.world_count)
    nbhd = [[frozenset(members(x)) for x in fam] for fam in fr.nbhd]

    def ext(g):
        return frozenset(z for z in worlds if go(z, g))

    def go(w, g):
        if isinstance(g, Atom):
            return w in members(model.valuation.get(g.name, 0))
        if g == BOT:
            return False
        if isinstance(g, And):
            return go(w, g.left) and go(w, g.right)
        if isinstance(g, Or):
            return go(w, g.left) or go(w, g.right)
        if isinstance(g, Implies):
            return all(not go(v, g.left) or go(v, g.right) for v in worlds if (w, v) in fr.order)
        if isinstance(g, Box):
            inside = ext(g.body) in nbhd[w]
            return inside if mode is BoxMode.SIMPLE else go(w, g.body) and inside
        if isinstance(g, Nabla):
            return any(go(z, g.body) for x in nbhd[w] for z in x)
        if isinstance(g, Diamond):
            return all(any(go(z, g.body) for z in x) for x in nbhd[w])
        raise TypeError(g)

    return go(w, f)


def _sets(n):
    return [frozenset(w for w in range(n) if s >> w & 1) for s in range(1 << n)]


def naive_conditions(n, order, nbhd):
    """Frame conditions read off Python sets; ``nbhd`` holds lists of frozensets."""
    leq = set(order) | {(w, w) for w in range(n)}
    return {
        "cond1": all(x in nbhd[v] for w, v in leq for x in nbhd[w] if v in x),
        "cond2": all(set(nbhd[w]) <= set(nbhd[v]) for w, v in leq),
        "star": all(frozenset(v for v in range(n) if x in nbhd[v]) in nbhd[w]
                    for w in range(n) for x in nbhd[w]),
        "starstar": all(y in nbhd[w] for w in range(n) for x in nbhd[w] for y in _sets(n) if y <= x),
    }
