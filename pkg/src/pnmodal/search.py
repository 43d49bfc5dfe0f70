"""Frame enumeration, finite validity and countermodel search."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional

from . import _batch
from .formula import Formula, atoms, parse, to_text
from .model import Frame, Model, WorldSet, check_star, check_starstar, is_upset, members
from .semantics import BoxMode, EvalContext, extension, forces

FRAME_CONDITIONS = ("cond2", "star", "starstar")
DEFAULT_CAP = 3
MAX_CAP = 4
MAX_SEARCH_WORLDS = 3
DEFAULT_BUDGET = 1 << 16

FOUND = "countermodel-found"
EXHAUSTED = "exhausted-no-countermodel"
BUDGET = "sample-budget-exhausted"


class SearchBudgetError(RuntimeError):
    """Too many valuations to enumerate for one frame."""


@dataclass(frozen=True)
class SearchSpec:
    scheme: Formula
    max_worlds: int = 3
    required_conditions: frozenset[str] = frozenset()
    box_mode: BoxMode = BoxMode.STANDARD
    nbhd_family_cap: int = DEFAULT_CAP

    def __post_init__(self):
        if isinstance(self.scheme, str):
            object.__setattr__(self, "scheme", parse(self.scheme))
        object.__setattr__(self, "required_conditions", frozenset(self.required_conditions))
        if not 1 <= self.max_worlds <= MAX_SEARCH_WORLDS:
            raise ValueError(f"max_worlds must be in 1..{MAX_SEARCH_WORLDS}")
        if not 0 <= self.nbhd_family_cap <= MAX_CAP:
            raise ValueError(f"nbhd_family_cap must be in 0..{MAX_CAP}")
        unknown = self.required_conditions - set(FRAME_CONDITIONS)
        if unknown:
            raise ValueError(f"unknown frame conditions {sorted(unknown)}")
        if self.box_mode not in (BoxMode.STANDARD, BoxMode.SIMPLE):
            raise ValueError("search supports standard and simple box modes only")


@dataclass
class SearchStats:
    frames_visited: int = 0
    models_visited: int = 0
    elapsed: float = field(default=0.0, compare=False)

    def to_json(self, timing: bool = False) -> dict:
        data = {"frames_visited": self.frames_visited, "models_visited": self.models_visited}
        if timing:
            data["elapsed_s"] = round(self.elapsed, 3)
        return data


@dataclass
class SearchOutcome:
    verdict: str
    model: Optional[Model] = None
    world: Optional[int] = None
    assignment: Optional[dict[str, WorldSet]] = None
    stats: SearchStats = field(default_factory=SearchStats)
    message: str = ""

    @property
    def found(self) -> bool:
        return self.verdict == FOUND

    def witness_json(self, scheme: Formula) -> dict:
        return {
            "scheme": to_text(scheme),
            "assignment": {k: members(v) for k, v in sorted(self.assignment.items())},
            "world": self.world,
        }

    def to_json(self, spec: SearchSpec | None = None, timing: bool = False) -> dict:
        data = {"verdict": self.verdict, "stats": self.stats.to_json(timing)}
        if spec is not None:
            data["scheme"] = to_text(spec.scheme)
        if self.model is not None:
            data["countermodel"] = self.model.to_json()
            data["world"] = self.world
            if spec is not None:
                data["witness"] = self.witness_json(spec.scheme)
        if self.message:
            data["message"] = self.message
        return data


# ---------------------------------------------------------------- validity


def valid_in_model(model: Model, mode: BoxMode, f: Formula) -> bool:
    return extension(EvalContext(model, mode), f) == model.frame.full


def upsets(frame: Frame) -> list[WorldSet]:
    """Every upward-closed world set of the frame, ascending by mask."""
    return [s for s in range(frame.full + 1) if is_upset(frame, s)]


def scheme_valid_in_frame(frame: Frame, mode: BoxMode, scheme: Formula,
                          budget: int = DEFAULT_BUDGET) -> bool:
    return scheme_counterexample(frame, mode, scheme, budget) is None


def scheme_counterexample(frame: Frame, mode: BoxMode, scheme: Formula,
                          budget: int = DEFAULT_BUDGET) -> Optional[tuple[dict[str, WorldSet], int]]:
    """First (assignment, world) refuting the scheme on the frame, or None."""
    metavars = sorted(atoms(scheme))
    ups = upsets(frame)
    if len(ups) ** len(metavars) > budget:
        raise SearchBudgetError(
            f"{len(metavars)} metavariables x {len(ups)} upsets exceed the budget of {budget}")
    for values in product(ups, repeat=len(metavars)):
        assignment = dict(zip(metavars, values))
        ext = extension(EvalContext(Model(frame, assignment), mode), scheme)
        if ext != frame.full:
            return assignment, members(frame.full & ~ext)[0]
    return None


# ------------------------------------------------------------- enumeration


def _check_bounds(max_worlds: int, cap: int, conditions: Iterable[str]) -> frozenset[str]:
    if not 1 <= max_worlds <= MAX_SEARCH_WORLDS:
        raise ValueError(f"max_worlds must be in 1..{MAX_SEARCH_WORLDS}")
    if not 0 <= cap <= MAX_CAP:
        raise ValueError(f"cap must be in 0..{MAX_CAP}")
    conditions = frozenset(conditions)
    unknown = conditions - set(FRAME_CONDITIONS)
    if unknown:
        raise ValueError(f"unknown frame conditions {sorted(unknown)}")
    return conditions


def enumerate_frames(max_worlds: int, nbhd_family_cap: int = DEFAULT_CAP,
                     required_conditions: Iterable[str] = ()) -> Iterator[Frame]:
    """Every labeled frame up to the caps that satisfies cond1 and the required conditions.

    Order: world count, then strict order relation (lexicographic), then the
    neighborhood families world by world (lexicographic).
    """
    conditions = _check_bounds(max_worlds, nbhd_family_cap, required_conditions)
    for batch in _batch.batches(max_worlds, nbhd_family_cap, conditions):
        for i in range(len(batch)):
            yield batch.frame(i)


def count_frames(max_worlds: int, nbhd_family_cap: int = DEFAULT_CAP,
                 required_conditions: Iterable[str] = ()) -> int:
    conditions = _check_bounds(max_worlds, nbhd_family_cap, required_conditions)
    return sum(len(b) for b in _batch.batches(max_worlds, nbhd_family_cap, conditions))


# ------------------------------------------------------------------ search


def _run(max_worlds, cap, conditions, metavars, fails, budget):
    stats = SearchStats()
    for batch in _batch.batches(max_worlds, cap, conditions):
        try:
            hit, evaluated = _batch.first_failure(batch, metavars, fails, budget)
        except _batch.AssignmentBudgetExceeded as exc:
            return None, None, stats, str(exc)
        stats.models_visited += evaluated
        if hit is not None:
            stats.frames_visited += hit.index + 1
            return batch.frame(hit.index), hit.assignment, stats, ""
        stats.frames_visited += len(batch)
    return None, None, stats, ""


def find_countermodel(spec: SearchSpec, budget: int = DEFAULT_BUDGET) -> SearchOutcome:
    """Search the frames allowed by ``spec`` for one refuting the scheme.

    Metavariables range over upward-closed sets. The first frame in
    enumeration order with a refuting valuation wins; within it, the first
    valuation and then the lowest refuting world.
    """
    start = time.perf_counter()
    metavars = sorted(atoms(spec.scheme))
    fails = _batch.scheme_fails(spec.scheme, spec.box_mode.value)
    frame, assignment, stats, err = _run(spec.max_worlds, spec.nbhd_family_cap,
                                         spec.required_conditions, metavars, fails, budget)
    stats.elapsed = time.perf_counter() - start
    if err:
        return SearchOutcome(BUDGET, stats=stats, message=err)
    if frame is None:
        return SearchOutcome(EXHAUSTED, stats=stats)
    model = Model(frame, assignment)
    ext = extension(EvalContext(model, spec.box_mode), spec.scheme)
    if ext == frame.full:
        raise AssertionError(f"vectorised and scalar evaluation disagree on {frame}")
    world = members(frame.full & ~ext)[0]
    return SearchOutcome(FOUND, model, world, assignment, stats)


MON_PREMISE = parse("p -> q")
MON_CONCLUSION = parse("[]p -> []q")


def rule_countermodel_mon(max_worlds: int = 2, nbhd_family_cap: int = DEFAULT_CAP,
                          mode: BoxMode = BoxMode.STANDARD) -> SearchOutcome:
    """Find a model where ``p -> q`` is valid but ``[]p -> []q`` is not."""
    start = time.perf_counter()
    _check_bounds(max_worlds, nbhd_family_cap, ())

    def fails(batch, env):
        # the premise is box-free, so its validity is the same for the whole batch
        if _batch.evaluate(batch, MON_PREMISE, env, mode.value) != batch.full:
            return False
        return _batch.evaluate(batch, MON_CONCLUSION, env, mode.value) != batch.full

    frame, assignment, stats, err = _run(max_worlds, nbhd_family_cap, frozenset(),
                                         ["p", "q"], fails, DEFAULT_BUDGET)
    stats.elapsed = time.perf_counter() - start
    if frame is None:
        return SearchOutcome(BUDGET if err else EXHAUSTED, stats=stats, message=err)
    model = Model(frame, assignment)
    ctx = EvalContext(model, mode)
    if extension(ctx, MON_PREMISE) != frame.full:
        raise AssertionError("premise not valid in the reported model")
    world = members(frame.full & ~extension(ctx, MON_CONCLUSION))[0]
    return SearchOutcome(FOUND, model, world, assignment, stats)


# ------------------------------------------------------------------ axiom 4

AXIOM_FOUR = parse("[]a -> [][]a")

# Worlds v=0, z=1, u=2, identity order.
STAR_MODEL = Model.build(
    Frame.build(3, (), {0: [[0, 2], [0, 1]], 1: [[0, 2], [0, 1]], 2: [[2]]}),
    {"p": [0, 2]},
)


class StarStarCounterexample(AssertionError):
    def __init__(self, frame: Frame):
        self.frame = frame
        super().__init__(f"axiom 4 fails on a starstar frame: {frame.to_json()}")


@dataclass
class FourReport:
    frames_checked: int
    star_model_star: bool
    star_model_starstar: bool
    star_model_box: list[int]
    star_model_boxbox_at_v: bool
    star_model_four_valid: bool

    @property
    def ok(self) -> bool:
        return (self.star_model_star and not self.star_model_starstar
                and not self.star_model_boxbox_at_v and not self.star_model_four_valid)

    def to_json(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def verify_starstar_implies_four(max_worlds: int = 3,
                                 nbhd_family_cap: int = DEFAULT_CAP) -> FourReport:
    """Check axiom 4 on every starstar frame, and replay the star-but-not-4 model."""
    spec = SearchSpec(AXIOM_FOUR, max_worlds, {"starstar"}, BoxMode.STANDARD, nbhd_family_cap)
    outcome = find_countermodel(spec)
    if outcome.found:
        raise StarStarCounterexample(outcome.model.frame)
    ctx = EvalContext(STAR_MODEL)
    frame = STAR_MODEL.frame
    return FourReport(
        frames_checked=outcome.stats.frames_visited,
        star_model_star=check_star(frame).holds,
        star_model_starstar=check_starstar(frame).holds,
        star_model_box=members(extension(ctx, parse("[]p"))),
        star_model_boxbox_at_v=forces(ctx, 0, parse("[][]p")),
        star_model_four_valid=scheme_valid_in_frame(frame, BoxMode.STANDARD, AXIOM_FOUR),
    )


__all__ = [
    "SearchSpec", "SearchOutcome", "SearchStats", "SearchBudgetError", "valid_in_model",
    "scheme_valid_in_frame", "scheme_counterexample", "enumerate_frames", "count_frames",
    "find_countermodel", "rule_countermodel_mon", "verify_starstar_implies_four", "upsets",
    "FOUND", "EXHAUSTED", "BUDGET", "STAR_MODEL",
]
