"""Vectorised enumeration and evaluation over many small frames at once.

All labeled frames with ``n <= 3`` worlds sharing one order are held in a
``uint8`` matrix ``fams`` of shape ``(F, n)``: bit ``X`` of ``fams[i, w]`` is
set iff the world set with mask ``X`` belongs to ``N_w`` in frame ``i``.
Extensions are then ``uint8`` arrays of world masks, one entry per frame, or
plain ints when they do not depend on the neighborhoods.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Callable, Iterator, Mapping, Optional, Union

import numpy as np

from .formula import And, Atom, Bottom, Box, Diamond, Formula, Implies, Nabla, Or
from .model import Frame, all_strict_orders, submasks

MAX_BATCH_WORLDS = 3

Ext = Union[int, np.ndarray]


@lru_cache(maxsize=None)
def candidate_families(n: int, cap: int) -> tuple[tuple[int, ...], ...]:
    """Families of at most ``cap`` subsets of an ``n``-world universe, in lexicographic order."""
    sets = range(1 << n)
    fams = [c for k in range(cap + 1) for c in combinations(sets, k)]
    return tuple(sorted(fams))


def _family_bits(fam: tuple[int, ...]) -> int:
    return sum(1 << x for x in fam)


def _bits(v) -> np.ndarray:
    return np.asarray(v, dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class FrameBatch:
    n: int
    order: tuple[tuple[int, int], ...]
    fams: np.ndarray

    def __len__(self) -> int:
        return self.fams.shape[0]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def up(self) -> tuple[int, ...]:
        succ = [1 << w for w in range(self.n)]
        for w, v in self.order:
            succ[w] |= 1 << v
        return tuple(succ)

    @cached_property
    def upsets(self) -> tuple[int, ...]:
        return tuple(a for a in range(1 << self.n)
                     if all(self.up[w] & ~a == 0 for w in range(self.n) if a >> w & 1))

    @cached_property
    def imp(self) -> np.ndarray:
        size = 1 << self.n
        table = np.zeros((size, size), dtype=np.uint8)
        for a in range(size):
            for b in range(size):
                bad = a & ~b
                table[a, b] = sum(1 << w for w in range(self.n) if not self.up[w] & bad)
        return table

    @cached_property
    def miss(self) -> np.ndarray:
        size = 1 << self.n
        return _bits([sum(1 << x for x in range(size) if not x & a) for a in range(size)])

    @cached_property
    def holders(self) -> np.ndarray:
        """``holders[i, X]`` = worlds ``w`` of frame ``i`` with ``X in N_w``."""
        h = np.zeros((len(self), 1 << self.n), dtype=np.uint8)
        for w in range(self.n):
            col = self.fams[:, w]
            for x in range(1 << self.n):
                h[:, x] |= ((col >> x) & 1) << w
        return h

    @cached_property
    def unions(self) -> np.ndarray:
        u = np.zeros((len(self), self.n), dtype=np.uint8)
        for w in range(self.n):
            col = self.fams[:, w]
            for x in range(1, 1 << self.n):
                u[:, w] |= np.where((col >> x) & 1, np.uint8(x), np.uint8(0))
        return u

    @cached_property
    def rows(self) -> np.ndarray:
        return np.arange(len(self))

    def frame(self, i: int) -> Frame:
        families = [[x for x in range(1 << self.n) if int(self.fams[i, w]) >> x & 1]
                    for w in range(self.n)]
        return Frame.from_masks(self.n, self.order, families)

    def select(self, keep: np.ndarray) -> "FrameBatch":
        fams = self.fams[keep]
        fams.setflags(write=False)
        return FrameBatch(self.n, self.order, fams)


# --------------------------------------------------------------- enumeration


def _cond1_mask(fams: np.ndarray, n: int, order) -> np.ndarray:
    keep = np.ones(fams.shape[0], dtype=bool)
    for w, v in order:
        contains_v = _family_bits(tuple(x for x in range(1 << n) if x >> v & 1))
        keep &= (fams[:, w] & contains_v & ~fams[:, v]) == 0
    return keep


def _condition_mask(batch: FrameBatch, cond: str) -> np.ndarray:
    fams, n = batch.fams, batch.n
    keep = np.ones(len(batch), dtype=bool)
    if cond == "cond2":
        for w, v in batch.order:
            keep &= (fams[:, w] & ~fams[:, v]) == 0
    elif cond == "star":
        h = batch.holders
        for w in range(n):
            col = fams[:, w]
            for x in range(1 << n):
                present = (col >> x) & 1
                keep &= (present == 0) | (((col >> h[:, x]) & 1) == 1)
    elif cond == "starstar":
        for w in range(n):
            col = fams[:, w]
            for x in range(1 << n):
                sub = _family_bits(tuple(submasks(x)))
                present = (col >> x) & 1
                keep &= (present == 0) | ((col & sub) == sub)
    else:
        raise ValueError(f"unknown frame condition {cond!r}")
    return keep


@lru_cache(maxsize=None)
def _raw_batch(n: int, cap: int, order: tuple[tuple[int, int], ...]) -> FrameBatch:
    cands = _bits([_family_bits(f) for f in candidate_families(n, cap)])
    idx = np.indices((len(cands),) * n).reshape(n, -1).T
    fams = cands[idx]
    fams = fams[_cond1_mask(fams, n, order)]
    fams.setflags(write=False)
    return FrameBatch(n, order, fams)


@lru_cache(maxsize=256)
def order_batch(n: int, cap: int, order: tuple[tuple[int, int], ...],
                conditions: frozenset[str] = frozenset()) -> FrameBatch:
    """All frames on ``n`` worlds with the given strict order satisfying cond1
    and ``conditions``, in enumeration order."""
    batch = _raw_batch(n, cap, order)
    for cond in sorted(conditions):
        batch = batch.select(_condition_mask(batch, cond))
    return batch


def batches(max_worlds: int, cap: int, conditions=frozenset()) -> Iterator[FrameBatch]:
    if not 1 <= max_worlds <= MAX_BATCH_WORLDS:
        raise ValueError(f"max_worlds must be in 1..{MAX_BATCH_WORLDS}")
    conditions = frozenset(conditions)
    for n in range(1, max_worlds + 1):
        for order in all_strict_orders(n):
            batch = order_batch(n, cap, order, conditions)
            if len(batch):
                yield batch


def candidate_batch(n: int, cap: int, order) -> FrameBatch:
    """All neighborhood assignments for ``order``, without the cond1 filter."""
    cands = _bits([_family_bits(f) for f in candidate_families(n, cap)])
    idx = np.indices((len(cands),) * n).reshape(n, -1).T
    return FrameBatch(n, tuple(order), cands[idx])


# ---------------------------------------------------------------- evaluation


def evaluate(batch: FrameBatch, f: Formula, env: Mapping[str, int], mode: str,
             memo: Optional[dict] = None) -> Ext:
    """Extension of ``f`` in every frame of the batch (``mode``: standard/simple)."""
    if memo is None:
        memo = {}

    def ev(g: Formula) -> Ext:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Atom):
            r = env.get(g.name, 0)
        elif isinstance(g, Bottom):
            r = 0
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Implies):
            a, b = ev(g.left), ev(g.right)
            r = batch.imp[a, b]
            if isinstance(a, int) and isinstance(b, int):
                r = int(r)
        elif isinstance(g, Box):
            a = ev(g.body)
            h = batch.holders[:, a] if isinstance(a, int) else batch.holders[batch.rows, a]
            r = a & h if mode == "standard" else h
        elif isinstance(g, Nabla):
            a = ev(g.body)
            r = np.zeros(len(batch), dtype=np.uint8)
            for w in range(batch.n):
                r |= ((batch.unions[:, w] & a) != 0).astype(np.uint8) << w
        elif isinstance(g, Diamond):
            m = batch.miss[ev(g.body)]
            r = np.zeros(len(batch), dtype=np.uint8)
            for w in range(batch.n):
                r |= ((batch.fams[:, w] & m) == 0).astype(np.uint8) << w
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ev(f)


class AssignmentBudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{needed} valuations per frame exceed the budget of {budget}")


@dataclass
class BatchHit:
    index: int
    assignment: dict[str, int]
    evaluated: int


def first_failure(batch: FrameBatch, metavars: list[str],
                  fails: Callable[[FrameBatch, dict[str, int]], Union[bool, np.ndarray]],
                  budget: int) -> tuple[Optional[BatchHit], int]:
    """Find the first frame (then first valuation) for which ``fails`` holds.

    Metavariables range over the upward-closed sets of the batch's order.
    Returns the hit (or None) and the number of (frame, valuation) pairs evaluated.
    """
    k = len(metavars)
    needed = len(batch.upsets) ** k
    if needed > budget:
        raise AssignmentBudgetExceeded(needed, budget)
    first = np.full(len(batch), -1, dtype=np.int64)
    assignments = []
    evaluated = 0
    for ai, values in enumerate(product(batch.upsets, repeat=k)):
        env = dict(zip(metavars, values))
        assignments.append(env)
        bad = fails(batch, env)
        evaluated += len(batch)
        if isinstance(bad, (bool, np.bool_)):
            bad = np.full(len(batch), bool(bad))
        first[(first < 0) & bad] = ai
        if first[0] >= 0:
            break
    hit_rows = np.flatnonzero(first >= 0)
    if not len(hit_rows):
        return None, evaluated
    i = int(hit_rows[0])
    return BatchHit(i, assignments[int(first[i])], evaluated), evaluated


def scheme_fails(formula: Formula, mode: str):
    def fails(batch: FrameBatch, env):
        ext = evaluate(batch, formula, env, mode)
        return ext != batch.full
    return fails
