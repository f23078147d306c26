"""iCGS definitions, histories, validation and file formats."""

from .icgs import ICGS, Coalition, JointAction, build_icgs, rename_states
from .history import BoundedPath, History, children, is_history, strata, stratum, unfold
from .validation import ValidationReport, Violation, validate
from .io import dump_model, load_model, model_from_dict, model_to_dict, parse_history, parse_model


def successors(model: ICGS, state: str, joint) -> frozenset:
    """States reached from ``state`` by an enabled joint action."""
    return model.successors(state, joint)


__all__ = [
    "ICGS",
    "Coalition",
    "JointAction",
    "build_icgs",
    "rename_states",
    "BoundedPath",
    "History",
    "children",
    "is_history",
    "strata",
    "stratum",
    "unfold",
    "ValidationReport",
    "Violation",
    "validate",
    "successors",
    "dump_model",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "parse_history",
    "parse_model",
]
