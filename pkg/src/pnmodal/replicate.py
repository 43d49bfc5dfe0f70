"""Self-contained scenarios reproducing the logic's headline claims."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable

from .formula import parse
from .model import Model, members, model_from_json, validate_model, check_star, check_starstar
from .proof import check_proof, parse_proof
from .search import (EXHAUSTED, FOUND, SearchSpec, find_countermodel, rule_countermodel_mon,
                     scheme_valid_in_frame, valid_in_model, verify_starstar_implies_four)
from .semantics import BoxMode, EvalContext, birelational_refutation, extension, forces

STANDARD = BoxMode.STANDARD


def bundled_model(name: str) -> Model:
    text = resources.files("pnmodal.data.models").joinpath(f"{name}.json").read_text("utf-8")
    return model_from_json(json.loads(text), warn=False)


def bundled_proof_names() -> list[str]:
    root = resources.files("pnmodal.data.proofs")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".prf"))


def bundled_proof_text(name: str) -> str:
    return resources.files("pnmodal.data.proofs").joinpath(f"{name}.prf").read_text("utf-8")


@dataclass
class CaseResult:
    name: str
    checks: list[dict[str, Any]] = field(default_factory=list)

    def expect(self, what: str, expected, actual) -> None:
        self.checks.append({"check": what, "expected": expected, "actual": actual,
                            "ok": expected == actual})

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c["ok"] for c in self.checks)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks}


def _ext(ctx: EvalContext, text: str) -> list[int]:
    return members(extension(ctx, parse(text)))


def case_birel(r: CaseResult) -> None:
    for clause in (BoxMode.REL_PLAIN, BoxMode.REL_REFLEXIVE):
        t = birelational_refutation(clause)
        r.expect(f"{clause.value}: relations tried", 16, len(t.rows))
        r.expect(f"{clause.value}: relations reproducing []( p & q ) & ~[]p at w", 0, len(t.matches))
        r.expect(f"{clause.value}: neighborhood model separates the formulas", True, t.refuted)
    ctx = EvalContext(bundled_model("birelational"))
    r.expect("extension of p & q", [0], _ext(ctx, "p & q"))


def case_k_fail(r: CaseResult) -> None:
    m = bundled_model("k_countermodel")
    ctx = EvalContext(m)
    s, v = 0, 2
    r.expect("model conditions hold", True, all(x.holds for x in validate_model(m)))
    r.expect("v forces [](p -> q)", True, forces(ctx, v, parse("[](p -> q)")))
    r.expect("v forces []p -> []q", False, forces(ctx, v, parse("[]p -> []q")))
    r.expect("s forces []p", True, forces(ctx, s, parse("[]p")))
    r.expect("s forces []q", False, forces(ctx, s, parse("[]q")))
    r.expect("K valid in the model", False,
             valid_in_model(m, STANDARD, parse("[](p -> q) -> ([]p -> []q)")))
    out = find_countermodel(SearchSpec(parse("[](a -> b) -> ([]a -> []b)"), 3))
    r.expect("search for a K countermodel (3 worlds)", FOUND, out.verdict)


def case_mon_fail(r: CaseResult) -> None:
    m = bundled_model("mon_countermodel")
    ctx = EvalContext(m)
    r.expect("model conditions hold", True, all(x.holds for x in validate_model(m)))
    r.expect("p -> q valid", True, valid_in_model(m, STANDARD, parse("p -> q")))
    r.expect("[]p -> []q valid", False, valid_in_model(m, STANDARD, parse("[]p -> []q")))
    r.expect("w forces []p", True, forces(ctx, 0, parse("[]p")))
    r.expect("w forces []q", False, forces(ctx, 0, parse("[]q")))
    r.expect("search, 1 world", EXHAUSTED, rule_countermodel_mon(1).verdict)
    r.expect("search, 2 worlds", FOUND, rule_countermodel_mon(2).verdict)


def case_d_valid(r: CaseResult) -> None:
    out = find_countermodel(SearchSpec(parse("[]a -> ~[]~a"), 3))
    r.expect("D countermodel search (3 worlds)", EXHAUSTED, out.verdict)


def case_t_sound(r: CaseResult) -> None:
    out = find_countermodel(SearchSpec(parse("[]a -> a"), 3))
    r.expect("T countermodel search (3 worlds)", EXHAUSTED, out.verdict)
    report = check_proof(parse_proof(bundled_proof_text("t_instance")))
    r.expect("T-instance proof checks", True, report.valid)


def case_simple_t_fail(r: CaseResult) -> None:
    out = find_countermodel(SearchSpec(parse("[]a -> a"), 2, box_mode=BoxMode.SIMPLE))
    r.expect("T countermodel search, simple box (2 worlds)", FOUND, out.verdict)
    if out.found:
        r.expect("witness refutes T in simple mode", False,
                 valid_in_model(out.model, BoxMode.SIMPLE, parse("[]a -> a")))
        r.expect("same model satisfies T in standard mode", True,
                 valid_in_model(out.model, STANDARD, parse("[]a -> a")))


def case_nabla_vs_diamond(r: CaseResult) -> None:
    nabla = find_countermodel(SearchSpec(parse("[]a -> <>a"), 3, {"cond2"}))
    r.expect("[]a -> <>a countermodel search on cond2 frames", EXHAUSTED, nabla.verdict)
    diamond = find_countermodel(SearchSpec(parse("[]a -> <*>a"), 3, {"cond2"}))
    r.expect("[]a -> <*>a countermodel search on cond2 frames", FOUND, diamond.verdict)


def case_four_star(r: CaseResult) -> None:
    m = bundled_model("star_not_four")
    ctx = EvalContext(m)
    r.expect("model conditions hold", True, all(x.holds for x in validate_model(m)))
    r.expect("star holds", True, check_star(m.frame).holds)
    r.expect("starstar holds", False, check_starstar(m.frame).holds)
    r.expect("v forces []p", True, forces(ctx, 0, parse("[]p")))
    r.expect("extension of []p", [0], _ext(ctx, "[]p"))
    r.expect("v forces [][]p", False, forces(ctx, 0, parse("[][]p")))
    r.expect("axiom 4 frame-valid", False,
             scheme_valid_in_frame(m.frame, STANDARD, parse("[]a -> [][]a")))


def case_starstar_four(r: CaseResult) -> None:
    report = verify_starstar_implies_four(3)
    r.expect("every starstar frame (3 worlds) validates axiom 4", True, report.frames_checked > 0)
    r.expect("star-model replay", True, report.ok)


CASES: dict[str, Callable[[CaseResult], None]] = {
    "birel": case_birel,
    "k-fail": case_k_fail,
    "mon-fail": case_mon_fail,
    "d-valid": case_d_valid,
    "t-sound": case_t_sound,
    "simple-t-fail": case_simple_t_fail,
    "nabla-vs-diamond": case_nabla_vs_diamond,
    "four-star": case_four_star,
    "starstar-four": case_starstar_four,
}


def run_case(name: str) -> CaseResult:
    try:
        fn = CASES[name]
    except KeyError:
        raise KeyError(f"unknown replication case {name!r}; known: {', '.join(CASES)}") from None
    result = CaseResult(name)
    fn(result)
    return result


def run_all() -> list[CaseResult]:
    return [run_case(name) for name in CASES]
