"""Forcing and formula extensions in neighborhood models."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .formula import And, Atom, Bottom, Box, Diamond, Formula, Implies, Nabla, Or, parse
from .model import Frame, Model, WorldSet, worldset


class BoxMode(enum.Enum):
    STANDARD = "standard"        # w |- []f  iff  w |- f and ext(f) in N_w
    SIMPLE = "simple"            # w |- []f  iff  ext(f) in N_w
    REL_PLAIN = "rel-plain"      # w |- []f  iff  every R-successor forces f
    REL_REFLEXIVE = "rel-reflexive"  # as REL_PLAIN, and w |- f

    @property
    def relational(self) -> bool:
        return self in (BoxMode.REL_PLAIN, BoxMode.REL_REFLEXIVE)


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class EvalContext:
    model: Model
    box_mode: BoxMode = BoxMode.STANDARD
    relation: Optional[frozenset[tuple[int, int]]] = None
    _succ: tuple[WorldSet, ...] = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        if self.box_mode.relational:
            if self.relation is None:
                raise EvaluationError(f"{self.box_mode.value} mode needs a relation")
            n = self.model.frame.world_count
            succ = [0] * n
            for w, v in self.relation:
                if not (0 <= w < n and 0 <= v < n):
                    raise EvaluationError(f"relation pair {(w, v)} outside the universe")
                succ[w] |= 1 << v
            object.__setattr__(self, "relation", frozenset(self.relation))
            object.__setattr__(self, "_succ", tuple(succ))
        elif self.relation is not None:
            raise EvaluationError(f"{self.box_mode.value} mode takes no relation")


def _implies(frame: Frame, a: WorldSet, b: WorldSet) -> WorldSet:
    bad = a & ~b
    out = 0
    for w, up in enumerate(frame.up):
        if not up & bad:
            out |= 1 << w
    return out


def extension(ctx: EvalContext, f: Formula) -> WorldSet:
    """The set of worlds forcing ``f``, as a bitmask."""
    model = ctx.model
    frame = model.frame
    mode = ctx.box_mode
    memo: dict[Formula, WorldSet] = {}

    def ev(g: Formula) -> WorldSet:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            r = model.valuation.get(g.name, 0)
        elif isinstance(g, Bottom):
            r = 0
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Implies):
            r = _implies(frame, ev(g.left), ev(g.right))
        elif isinstance(g, Box):
            a = ev(g.body)
            if mode is BoxMode.STANDARD:
                r = a & frame.holders.get(a, 0)
            elif mode is BoxMode.SIMPLE:
                r = frame.holders.get(a, 0)
            else:
                r = 0
                for w, succ in enumerate(ctx._succ):
                    if succ & ~a == 0:
                        r |= 1 << w
                if mode is BoxMode.REL_REFLEXIVE:
                    r &= a
        elif isinstance(g, (Nabla, Diamond)):
            if mode.relational:
                raise EvaluationError(f"{type(g).__name__} is undefined in {mode.value} mode")
            a = ev(g.body)
            r = 0
            for w, fam in enumerate(frame.nbhd):
                if isinstance(g, Nabla):
                    ok = any(x & a for x in fam)
                else:
                    ok = all(x & a for x in fam)
                if ok:
                    r |= 1 << w
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ev(f)


def forces(ctx: EvalContext, w: int, f: Formula) -> bool:
    if not 0 <= w < ctx.model.frame.world_count:
        raise EvaluationError(f"world {w} out of range")
    return bool(extension(ctx, f) >> w & 1)


def check_monotonicity(ctx: EvalContext, f: Formula) -> Optional[tuple[int, int]]:
    """Return the first ``(w, v)`` with ``w <= v``, ``w`` forcing ``f`` and ``v`` not."""
    if ctx.box_mode.relational:
        raise EvaluationError("monotonicity is checked in standard or simple mode only")
    ext = extension(ctx, f)
    for w, v in sorted(ctx.model.frame.order):
        if ext >> w & 1 and not ext >> v & 1:
            return (w, v)
    return None


# ----------------------------------------------------- bi-relational refutation

# Two worlds w=0, v=1 with identity order, N_w = {{w}}, N_v = {{v}}.
BIREL_MODEL = Model.build(Frame.build(2, (), {0: [[0]], 1: [[1]]}), {"p": [0, 1], "q": [0]})
BIREL_TARGET = (parse("[](p & q)"), parse("[]p"))


@dataclass(frozen=True)
class RefutationRow:
    relation: tuple[tuple[int, int], ...]
    box_conj: bool
    box_p: bool

    @property
    def match(self) -> bool:
        return self.box_conj and not self.box_p


@dataclass(frozen=True)
class RefutationTranscript:
    clause: BoxMode
    world: int
    neighborhood_box_conj: bool
    neighborhood_box_p: bool
    rows: tuple[RefutationRow, ...]

    @property
    def matches(self) -> list[RefutationRow]:
        return [r for r in self.rows if r.match]

    @property
    def refuted(self) -> bool:
        """True when the neighborhood model separates the formulas and no relation does."""
        return self.neighborhood_box_conj and not self.neighborhood_box_p and not self.matches

    def to_json(self) -> dict:
        return {
            "clause": self.clause.value,
            "world": self.world,
            "neighborhood": {"box_conj": self.neighborhood_box_conj, "box_p": self.neighborhood_box_p},
            "rows": [{"relation": [list(p) for p in r.relation], "box_conj": r.box_conj,
                      "box_p": r.box_p, "match": r.match} for r in self.rows],
            "matches": len(self.matches),
        }


def all_relations(n: int) -> Iterable[tuple[tuple[int, int], ...]]:
    pairs = [(w, v) for w in range(n) for v in range(n)]
    for bits in product((0, 1), repeat=len(pairs)):
        yield tuple(p for p, b in zip(pairs, bits) if b)


def birelational_refutation(clause: BoxMode, model: Model = BIREL_MODEL,
                            world: int = 0) -> RefutationTranscript:
    """Try every relation R on the model's worlds under a relational box clause.

    A row matches when ``[](p & q)`` holds and ``[]p`` fails at ``world``, the
    behaviour the neighborhood semantics exhibits on the same model.
    """
    if not clause.relational:
        raise EvaluationError("clause must be a relational box mode")
    box_conj, box_p = BIREL_TARGET
    nctx = EvalContext(model)
    rows = []
    for rel in all_relations(model.frame.world_count):
        ctx = EvalContext(model, clause, frozenset(rel))
        rows.append(RefutationRow(rel, forces(ctx, world, box_conj), forces(ctx, world, box_p)))
    return RefutationTranscript(clause, world, forces(nctx, world, box_conj),
                                forces(nctx, world, box_p), tuple(rows))


__all__ = [
    "BoxMode", "EvalContext", "EvaluationError", "extension", "forces", "check_monotonicity",
    "birelational_refutation", "RefutationTranscript", "RefutationRow", "BIREL_MODEL",
    "all_relations", "worldset",
]
