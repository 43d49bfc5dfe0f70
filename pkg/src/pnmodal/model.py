"""Pre-ordered neighborhood frames and models, their conditions and file format.

World sets are plain ``int`` bitmasks (bit ``w`` set iff world ``w`` is a
member); frames are capped at 16 worlds.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Optional

log = logging.getLogger(__name__)

MAX_WORLDS = 16

WorldSet = int

CONDITIONS = ("order-axioms", "cond1", "cond2", "star", "starstar", "valuation-monotone")


class ModelFormatError(ValueError):
    """Malformed frame/model data (bad JSON shape, out-of-range world index...)."""


def worldset(worlds: Iterable[int]) -> WorldSet:
    mask = 0
    for w in worlds:
        mask |= 1 << w
    return mask


def members(mask: WorldSet) -> list[int]:
    out = []
    w = 0
    while mask:
        if mask & 1:
            out.append(w)
        mask >>= 1
        w += 1
    return out


def is_subset(a: WorldSet, b: WorldSet) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class Frame:
    """A frame ``<W, N, <=>`` with ``W = {0, ..., world_count - 1}``.

    ``order`` always contains the reflexive pairs; ``nbhd[w]`` is the family
    ``N_w`` as a sorted, duplicate-free tuple of world-set masks.
    """

    world_count: int
    order: frozenset[tuple[int, int]]
    nbhd: tuple[tuple[WorldSet, ...], ...]

    @classmethod
    def build(cls, world_count: int, order: Iterable[tuple[int, int]] = (),
              nbhd: Mapping[int, Iterable[Iterable[int]]] | Iterable[Iterable[Iterable[int]]] = ()
              ) -> "Frame":
        """Construct from world lists; reflexive pairs are added automatically."""
        if not isinstance(world_count, int) or not 1 <= world_count <= MAX_WORLDS:
            raise ModelFormatError(f"world count must be in 1..{MAX_WORLDS}, got {world_count!r}")
        pairs = set()
        for w, v in order:
            _check_world(w, world_count)
            _check_world(v, world_count)
            pairs.add((w, v))
        pairs.update((w, w) for w in range(world_count))
        if isinstance(nbhd, Mapping):
            items = dict(nbhd)
        else:
            items = dict(enumerate(nbhd))
        families = []
        for w in range(world_count):
            fam = set()
            for xs in items.pop(w, ()):
                xs = list(xs)
                for x in xs:
                    _check_world(x, world_count)
                fam.add(worldset(xs))
            families.append(tuple(sorted(fam)))
        if items:
            raise ModelFormatError(f"neighborhoods given for unknown worlds {sorted(items)}")
        return cls(world_count, frozenset(pairs), tuple(families))

    @classmethod
    def from_masks(cls, world_count: int, strict_order: Iterable[tuple[int, int]],
                   families: Iterable[Iterable[WorldSet]]) -> "Frame":
        pairs = set(strict_order) | {(w, w) for w in range(world_count)}
        return cls(world_count, frozenset(pairs), tuple(tuple(sorted(set(f))) for f in families))

    @property
    def full(self) -> WorldSet:
        return (1 << self.world_count) - 1

    @cached_property
    def up(self) -> tuple[WorldSet, ...]:
        """``up[w]`` = set of ``v`` with ``w <= v`` (as stored, not closed)."""
        succ = [0] * self.world_count
        for w, v in self.order:
            succ[w] |= 1 << v
        return tuple(succ)

    @cached_property
    def holders(self) -> dict[WorldSet, WorldSet]:
        """Map a world set ``X`` to the set of worlds ``w`` with ``X in N_w``."""
        table: dict[WorldSet, WorldSet] = {}
        for w, fam in enumerate(self.nbhd):
            for x in fam:
                table[x] = table.get(x, 0) | (1 << w)
        return table

    def strict_pairs(self) -> list[tuple[int, int]]:
        return sorted(p for p in self.order if p[0] != p[1])

    def upward_closure(self, s: WorldSet) -> WorldSet:
        return upward_closure(self, s)

    def to_json(self) -> dict:
        return {
            "worlds": self.world_count,
            "order": [list(p) for p in self.strict_pairs()],
            "nbhd": {str(w): [members(x) for x in fam] for w, fam in enumerate(self.nbhd)},
        }


@dataclass(frozen=True)
class Model:
    frame: Frame
    valuation: Mapping[str, WorldSet] = field(default_factory=dict)

    @classmethod
    def build(cls, frame: Frame, valuation: Mapping[str, Iterable[int]]) -> "Model":
        val = {}
        for name, ws in valuation.items():
            ws = list(ws)
            for w in ws:
                _check_world(w, frame.world_count)
            val[name] = worldset(ws)
        return cls(frame, dict(sorted(val.items())))

    def to_json(self) -> dict:
        data = self.frame.to_json()
        data["valuation"] = {k: members(v) for k, v in sorted(self.valuation.items())}
        return data


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    holds: bool
    witness: Optional[tuple] = None

    def to_json(self) -> dict:
        return {"condition": self.condition, "holds": self.holds,
                "witness": _jsonable(self.witness)}


def _jsonable(w):
    if w is None:
        return None
    return [sorted(x) if isinstance(x, frozenset) else x for x in w]


def _check_world(w, n: int) -> None:
    if not isinstance(w, int) or isinstance(w, bool) or not 0 <= w < n:
        raise ModelFormatError(f"world index {w!r} out of range for {n} worlds")


def _ws(mask: WorldSet) -> frozenset[int]:
    return frozenset(members(mask))


# ------------------------------------------------------------------ conditions


def upward_closure(frame: Frame, s: WorldSet) -> WorldSet:
    """Least superset of ``s`` closed under the order (closing transitively)."""
    result = s
    frontier = s
    while frontier:
        nxt = 0
        for w in members(frontier):
            nxt |= frame.up[w]
        frontier = nxt & ~result
        result |= nxt
    return result


def is_upset(frame: Frame, s: WorldSet) -> bool:
    return all(is_subset(frame.up[w], s) for w in members(s))


def check_order(frame: Frame) -> ConditionReport:
    n = frame.world_count
    order = frame.order
    for w in range(n):
        if (w, w) not in order:
            return ConditionReport("order-axioms", False, ("reflexivity", w))
    for w, v in sorted(order):
        if w != v and (v, w) in order:
            return ConditionReport("order-axioms", False, ("antisymmetry", w, v))
    for w, v in sorted(order):
        for u in members(frame.up[v]):
            if (w, u) not in order:
                return ConditionReport("order-axioms", False, ("transitivity", w, v, u))
    return ConditionReport("order-axioms", True)


def check_cond1(frame: Frame) -> ConditionReport:
    """``w <= v``, ``v in X``, ``X in N_w``  implies  ``X in N_v``."""
    for w, v in sorted(frame.order):
        for x in frame.nbhd[w]:
            if x >> v & 1 and x not in frame.nbhd[v]:
                return ConditionReport("cond1", False, (w, v, _ws(x)))
    return ConditionReport("cond1", True)


def validate_frame(frame: Frame) -> list[ConditionReport]:
    return [check_order(frame), check_cond1(frame)]


def check_cond2(frame: Frame) -> ConditionReport:
    """``w <= v`` implies ``N_w`` is a subfamily of ``N_v``."""
    for w, v in sorted(frame.order):
        for x in frame.nbhd[w]:
            if x not in frame.nbhd[v]:
                return ConditionReport("cond2", False, (w, v, _ws(x)))
    return ConditionReport("cond2", True)


def check_star(frame: Frame) -> ConditionReport:
    """``X in N_w`` implies ``{v : X in N_v} in N_w``."""
    for w, fam in enumerate(frame.nbhd):
        for x in fam:
            h = frame.holders[x]
            if h not in fam:
                return ConditionReport("star", False, (w, _ws(x), _ws(h)))
    return ConditionReport("star", True)


def check_starstar(frame: Frame) -> ConditionReport:
    """Every ``N_w`` is closed under subsets."""
    for w, fam in enumerate(frame.nbhd):
        present = set(fam)
        for x in fam:
            for y in submasks(x):
                if y not in present:
                    return ConditionReport("starstar", False, (w, _ws(x), _ws(y)))
    return ConditionReport("starstar", True)


def submasks(x: WorldSet) -> list[WorldSet]:
    """All subsets of ``x`` in ascending mask order."""
    out = []
    y = x
    while True:
        out.append(y)
        if y == 0:
            break
        y = (y - 1) & x
    return out[::-1]


def check_valuation(model: Model) -> ConditionReport:
    frame = model.frame
    for name, s in sorted(model.valuation.items()):
        for w in members(s):
            for v in members(frame.up[w]):
                if not s >> v & 1:
                    return ConditionReport("valuation-monotone", False, (name, w, v))
    return ConditionReport("valuation-monotone", True)


def validate_model(model: Model) -> list[ConditionReport]:
    return validate_frame(model.frame) + [check_valuation(model)]


FRAME_CHECKS = {
    "cond2": check_cond2,
    "star": check_star,
    "starstar": check_starstar,
}


def full_report(frame: Frame, model: Model | None = None) -> list[ConditionReport]:
    reports = validate_frame(frame) + [check(frame) for check in FRAME_CHECKS.values()]
    if model is not None:
        reports.append(check_valuation(model))
    return reports


def is_well_formed(frame: Frame) -> bool:
    return all(r.holds for r in validate_frame(frame))


def witness_holds(condition: str, structure: Frame | Model, witness: tuple) -> bool:
    """Re-evaluate one instance of ``condition`` at ``witness``.

    Returns whether the instance is satisfied; a reported witness must give
    ``False``.
    """
    model = structure if isinstance(structure, Model) else None
    frame = model.frame if model else structure
    if condition == "order-axioms":
        kind, *ws = witness
        if kind == "reflexivity":
            return (ws[0], ws[0]) in frame.order
        if kind == "antisymmetry":
            w, v = ws
            return not ((w, v) in frame.order and (v, w) in frame.order)
        if kind == "transitivity":
            w, v, u = ws
            return not ((w, v) in frame.order and (v, u) in frame.order) or (w, u) in frame.order
        raise ValueError(f"unknown order witness {witness!r}")
    if condition == "cond1":
        w, v, x = witness
        x = worldset(x)
        premise = (w, v) in frame.order and v in members(x) and x in frame.nbhd[w]
        return not premise or x in frame.nbhd[v]
    if condition == "cond2":
        w, v, x = witness
        x = worldset(x)
        return not ((w, v) in frame.order and x in frame.nbhd[w]) or x in frame.nbhd[v]
    if condition == "star":
        w, x, _ = witness
        x = worldset(x)
        return x not in frame.nbhd[w] or frame.holders[x] in frame.nbhd[w]
    if condition == "starstar":
        w, x, y = witness
        x, y = worldset(x), worldset(y)
        return not (x in frame.nbhd[w] and is_subset(y, x)) or y in frame.nbhd[w]
    if condition == "valuation-monotone":
        name, w, v = witness
        s = model.valuation.get(name, 0)
        return not (s >> w & 1 and (w, v) in frame.order) or bool(s >> v & 1)
    raise ValueError(f"unknown condition {condition!r}")


# ----------------------------------------------------------------- file format


def frame_from_json(data: Mapping, warn: bool = True) -> Frame:
    if not isinstance(data, Mapping):
        raise ModelFormatError("top-level JSON value must be an object")
    try:
        n = data["worlds"]
    except KeyError:
        raise ModelFormatError("missing 'worlds'") from None
    order = data.get("order", [])
    nbhd = data.get("nbhd", {})
    if not isinstance(order, list) or not all(isinstance(p, list) and len(p) == 2 for p in order):
        raise ModelFormatError("'order' must be a list of [w, v] pairs")
    if not isinstance(nbhd, Mapping):
        raise ModelFormatError("'nbhd' must be an object keyed by world index")
    families = {}
    for key, fam in nbhd.items():
        try:
            w = int(key)
        except ValueError:
            raise ModelFormatError(f"bad world key {key!r} in 'nbhd'") from None
        if not isinstance(n, int) or not 0 <= w < n:
            raise ModelFormatError(f"world index {w} out of range for {n} worlds")
        if not isinstance(fam, list) or not all(isinstance(x, list) for x in fam):
            raise ModelFormatError(f"'nbhd[{key}]' must be a list of world lists")
        families[w] = fam
    frame = Frame.build(n, [tuple(p) for p in order], families)
    stated = {tuple(p) for p in order}
    missing = [w for w in range(frame.world_count) if (w, w) not in stated]
    if missing and warn:
        log.warning("order: added reflexive pairs for worlds %s", missing)
    return frame


def model_from_json(data: Mapping, warn: bool = True) -> Model:
    frame = frame_from_json(data, warn)
    val = data.get("valuation", {})
    if not isinstance(val, Mapping) or not all(isinstance(v, list) for v in val.values()):
        raise ModelFormatError("'valuation' must map atom names to world lists")
    return Model.build(frame, val)


def load(path) -> Frame | Model:
    """Load a model file, or a frame file when it has no ``valuation`` key."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: {exc}") from None
    if isinstance(data, Mapping) and "valuation" in data:
        return model_from_json(data)
    return frame_from_json(data)


def dumps(structure: Frame | Model, **extra) -> str:
    data = structure.to_json()
    data.update(extra)
    return json.dumps(data, indent=2, sort_keys=False)


def all_strict_orders(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Every partial order on ``n`` labeled worlds, as sorted strict-pair tuples.

    Sorted lexicographically by that tuple, so the identity order comes first.
    """
    pairs = [(w, v) for w in range(n) for v in range(n) if w != v]
    result = []
    for k in range(len(pairs) + 1):
        for rel in combinations(pairs, k):
            s = set(rel)
            if any((v, w) in s for w, v in s):
                continue
            if any((w, u) not in s for w, v in s for v2, u in s if v2 == v and u != w):
                continue
            result.append(tuple(sorted(rel)))
    return sorted(result)
