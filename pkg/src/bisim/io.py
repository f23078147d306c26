"""Relation seed and result files."""

import json
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from ..exceptions import ModelFormatError
from ..model import ICGS, History, is_history

Pair = Tuple[History, History]


class RelationRecord(BaseModel):
    """One pair of a relation file."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    depth: int = Field(ge=0)
    left: List[str]
    left_acts: List[Dict[str, str]] = Field(alias="leftActs")
    right: List[str]
    right_acts: List[Dict[str, str]] = Field(alias="rightActs")


_RECORDS = TypeAdapter(List[RelationRecord])


def _history(model: ICGS, states: List[str], acts: List[Dict[str, str]], depth: int) -> History:
    if len(states) != depth + 1:
        raise ModelFormatError(f"record of depth {depth} lists {len(states)} states")
    joints = []
    for act in acts:
        if set(act) != set(model.agents):
            raise ModelFormatError(f"joint action {act} must name exactly the agents {list(model.agents)}")
        joints.append(tuple(act[a] for a in model.agents))
    try:
        h = History(tuple(states), tuple(joints))
    except ValueError as e:
        raise ModelFormatError(str(e)) from e
    if not is_history(model, h):
        raise ModelFormatError(f"{h} is not a history of {model.name}")
    return h


def relation_from_records(left_model: ICGS, right_model: ICGS, data) -> FrozenSet[Pair]:
    try:
        records = _RECORDS.validate_python(data)
    except ValidationError as e:
        raise ModelFormatError(f"ill-formed relation: {e}") from e
    return frozenset(
        (
            _history(left_model, r.left, r.left_acts, r.depth),
            _history(right_model, r.right, r.right_acts, r.depth),
        )
        for r in records
    )


def load_relation(path: Union[str, Path], left_model: ICGS, right_model: ICGS) -> FrozenSet[Pair]:
    """Read a relation file as a set of history pairs of the two models."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ModelFormatError(f"cannot read relation file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"relation file {path} is not valid JSON: {e}") from e
    return relation_from_records(left_model, right_model, data)


def relation_records(left_model: ICGS, right_model: ICGS, pairs: Iterable[Pair]) -> List[Dict]:
    return [
        {
            "depth": len(h) - 1,
            "left": list(h.states),
            "leftActs": [dict(zip(left_model.agents, j)) for j in h.actions],
            "right": list(h2.states),
            "rightActs": [dict(zip(right_model.agents, j)) for j in h2.actions],
        }
        for h, h2 in sorted(pairs)
    ]


def dump_relation(left_model: ICGS, right_model: ICGS, pairs: Iterable[Pair]) -> str:
    return json.dumps(relation_records(left_model, right_model, pairs), indent=2, sort_keys=True) + "\n"
