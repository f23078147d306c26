"""ATL formulas with yesterday: syntax, parsing and bounded checking."""

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Coalition,
    Const,
    Embed,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Truth,
    Until,
    Yesterday,
    agents_of,
    as_history,
    as_path,
    atoms_of,
    characteristic,
    common_knowledge,
    conjunction,
    disjunction,
    format_formula,
    is_history_formula,
    knows,
    lookahead,
    temporal_depth,
)
from .parser import parse_formula
from .checker import ModelChecker, Verdict, check, check_path

__all__ = [
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "Coalition",
    "Const",
    "Embed",
    "Formula",
    "Implies",
    "Next",
    "Not",
    "Or",
    "Truth",
    "Until",
    "Yesterday",
    "agents_of",
    "as_history",
    "as_path",
    "atoms_of",
    "characteristic",
    "common_knowledge",
    "conjunction",
    "disjunction",
    "format_formula",
    "is_history_formula",
    "knows",
    "lookahead",
    "temporal_depth",
    "parse_formula",
    "ModelChecker",
    "Verdict",
    "check",
    "check_path",
]
