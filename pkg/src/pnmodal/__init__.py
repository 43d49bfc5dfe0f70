"""Finite-model workbench for an intuitionistic modal logic with neighborhood semantics."""
from .formula import Formula, parse, to_text
from .model import Frame, Model
from .semantics import BoxMode, EvalContext, extension, forces

__version__ = "0.1.0"

__all__ = ["Formula", "parse", "to_text", "Frame", "Model", "BoxMode", "EvalContext",
           "extension", "forces"]
