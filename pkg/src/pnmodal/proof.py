"""Hilbert-style proof checking: IPC axioms plus T, with modus ponens and extensionality."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .formula import (Atom, Box, Formula, FormulaSyntaxError, Implies, atoms, parse,
                      substitute, to_text)


@dataclass(frozen=True)
class AxiomScheme:
    id: str
    template: Formula

    @property
    def metavariables(self) -> list[str]:
        return sorted(atoms(self.template))


AXIOMS: tuple[AxiomScheme, ...] = tuple(AxiomScheme(i, parse(t)) for i, t in [
    ("A1", "phi -> (psi -> phi)"),
    ("A2", "(phi -> (psi -> chi)) -> ((phi -> psi) -> (phi -> chi))"),
    ("A3", "phi & psi -> phi"),
    ("A4", "phi & psi -> psi"),
    ("A5", "phi -> (psi -> phi & psi)"),
    ("A6", "phi -> phi | psi"),
    ("A7", "psi -> phi | psi"),
    ("A8", "(phi -> chi) -> ((psi -> chi) -> (phi | psi -> chi))"),
    ("A9", "_|_ -> phi"),
    ("T", "[]phi -> phi"),
])
AXIOMS_BY_ID = {a.id: a for a in AXIOMS}


def match(template: Formula, f: Formula, binding: Optional[dict] = None) -> Optional[dict[str, Formula]]:
    """Bind the template's atoms so that it becomes ``f``; None if impossible."""
    binding = {} if binding is None else binding
    if isinstance(template, Atom):
        bound = binding.get(template.name)
        if bound is None:
            binding[template.name] = f
            return binding
        return binding if bound == f else None
    if type(template) is not type(f):
        return None
    if hasattr(template, "left"):
        if match(template.left, f.left, binding) is None:
            return None
        return match(template.right, f.right, binding)
    if hasattr(template, "body"):
        return match(template.body, f.body, binding)
    return binding  # Bottom


def match_axiom(f: Formula) -> Optional[tuple[str, dict[str, Formula]]]:
    for ax in AXIOMS:
        sub = match(ax.template, f)
        if sub is not None:
            return ax.id, sub
    return None


# ------------------------------------------------------------------- proofs


@dataclass(frozen=True)
class AxiomStep:
    id: str
    substitution: Optional[Mapping[str, Formula]] = None


@dataclass(frozen=True)
class MP:
    antecedent: int
    implication: int


@dataclass(frozen=True)
class EXT:
    first: int
    second: int


Justification = Union[AxiomStep, MP, EXT]


@dataclass(frozen=True)
class ProofLine:
    index: int
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofReport:
    valid: bool
    first_error: Optional[tuple[int, str]] = None

    def to_json(self) -> dict:
        err = None
        if self.first_error:
            err = {"line": self.first_error[0], "reason": self.first_error[1]}
        return {"valid": self.valid, "first_error": err}


def _line_error(line: ProofLine, known: dict[int, Formula]) -> Optional[str]:
    j = line.justification
    f = line.formula

    def cited(i: int) -> Formula:
        if i not in known:
            raise LookupError(f"cites line {i}, which is not an earlier line")
        return known[i]

    try:
        if isinstance(j, AxiomStep):
            ax = AXIOMS_BY_ID.get(j.id)
            if ax is None:
                return f"unknown axiom scheme {j.id!r}"
            if j.substitution is None:
                if match(ax.template, f) is None:
                    return f"not an instance of axiom {ax.id}"
                return None
            missing = set(ax.metavariables) - set(j.substitution)
            if missing:
                return f"substitution for {ax.id} lacks {', '.join(sorted(missing))}"
            if substitute(ax.template, j.substitution) != f:
                return f"substitution does not produce this formula from axiom {ax.id}"
            return None
        if isinstance(j, MP):
            ante, imp = cited(j.antecedent), cited(j.implication)
            if not isinstance(imp, Implies):
                return f"line {j.implication} is not an implication"
            if imp.left != ante:
                return f"antecedent of line {j.implication} is not line {j.antecedent}"
            if imp.right != f:
                return f"consequent of line {j.implication} is not this formula"
            return None
        if isinstance(j, EXT):
            a, b = cited(j.first), cited(j.second)
            if not (isinstance(a, Implies) and isinstance(b, Implies)
                    and a.left == b.right and a.right == b.left):
                return f"lines {j.first} and {j.second} are not converse implications"
            phi, psi = a.left, a.right
            if f not in (Implies(Box(phi), Box(psi)), Implies(Box(psi), Box(phi))):
                return "conclusion is not a boxed implication between the cited formulas"
            return None
    except LookupError as exc:
        return str(exc)
    return f"unknown justification {j!r}"


def check_proof(lines: Sequence[ProofLine]) -> ProofReport:
    known: dict[int, Formula] = {}
    for pos, line in enumerate(lines, start=1):
        if line.index != pos:
            return ProofReport(False, (line.index, f"expected line number {pos}"))
        reason = _line_error(line, known)
        if reason is not None:
            return ProofReport(False, (line.index, reason))
        known[line.index] = line.formula
    return ProofReport(True)


# -------------------------------------------------------------- file format


class ProofSyntaxError(ValueError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


_LINE_RE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*;\s*(.*?)\s*$")


def _parse_justification(text: str, lineno: int) -> Justification:
    words = text.split(None, 2)
    if not words:
        raise ProofSyntaxError(lineno, "missing justification")
    kind = words[0].lower()
    if kind == "axiom":
        if len(words) < 2:
            raise ProofSyntaxError(lineno, "axiom needs a scheme id")
        sub = None
        if len(words) == 3:
            sub = {}
            for part in words[2].split(","):
                name, eq, value = part.partition("=")
                if not eq:
                    raise ProofSyntaxError(lineno, f"bad substitution entry {part.strip()!r}")
                try:
                    sub[name.strip()] = parse(value)
                except FormulaSyntaxError as exc:
                    raise ProofSyntaxError(lineno, f"substitution for {name.strip()}: {exc}") from None
        return AxiomStep(words[1], sub)
    if kind in ("mp", "ext"):
        args = text.split()[1:]
        if len(args) != 2 or not all(a.isdigit() for a in args):
            raise ProofSyntaxError(lineno, f"{kind} needs two line numbers")
        i, j = map(int, args)
        return MP(i, j) if kind == "mp" else EXT(i, j)
    raise ProofSyntaxError(lineno, f"unknown justification {words[0]!r}")


def parse_proof(text: str) -> list[ProofLine]:
    """Read the line-oriented proof format.

    Each line is ``N: formula ; justification``; ``#`` starts a comment.
    Justifications: ``axiom ID [name=formula, ...]``, ``mp I J``, ``ext I J``.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE_RE.match(body)
        if m is None:
            raise ProofSyntaxError(lineno, "expected 'N: formula ; justification'")
        index, ftext, jtext = m.groups()
        try:
            f = parse(ftext)
        except FormulaSyntaxError as exc:
            raise ProofSyntaxError(lineno, str(exc)) from None
        lines.append(ProofLine(int(index), f, _parse_justification(jtext, lineno)))
    return lines


def format_proof(lines: Sequence[ProofLine]) -> str:
    out = []
    for line in lines:
        j = line.justification
        if isinstance(j, AxiomStep):
            just = f"axiom {j.id}"
            if j.substitution:
                just += " " + ", ".join(f"{k}={to_text(v)}" for k, v in sorted(j.substitution.items()))
        elif isinstance(j, MP):
            just = f"mp {j.antecedent} {j.implication}"
        else:
            just = f"ext {j.first} {j.second}"
        out.append(f"{line.index}: {to_text(line.formula)} ; {just}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- soundness


@dataclass(frozen=True)
class SweepReport:
    clean: bool
    lines_checked: int
    frames_per_line: tuple[int, ...] = ()
    violation: Optional[dict] = None

    def to_json(self) -> dict:
        return {"clean": self.clean, "lines_checked": self.lines_checked,
                "frames_per_line": list(self.frames_per_line), "violation": self.violation}


def soundness_sweep(lines: Sequence[ProofLine], max_worlds: int = 2, cap: int = 3) -> SweepReport:
    """Check every proved formula is frame-valid (atoms as metavariables) on small frames."""
    from .search import SearchSpec, find_countermodel

    report = check_proof(lines)
    if not report.valid:
        raise ValueError(f"proof is not valid: {report.first_error}")
    frames = []
    for line in lines:
        spec = SearchSpec(line.formula, max_worlds, nbhd_family_cap=cap)
        outcome = find_countermodel(spec)
        if outcome.verdict != "exhausted-no-countermodel":
            violation = {"line": line.index, "verdict": outcome.verdict}
            if outcome.found:
                violation.update(outcome.witness_json(line.formula),
                                 frame=outcome.model.frame.to_json())
            return SweepReport(False, len(frames), tuple(frames), violation)
        frames.append(outcome.stats.frames_visited)
    return SweepReport(True, len(frames), tuple(frames))
