"""Tests for models, histories, validation and model files."""

import json

import pytest

from src.exceptions import ActionNotEnabledError, ModelFormatError
from src.model import (
    History,
    build_icgs,
    children,
    dump_model,
    is_history,
    load_model,
    model_from_dict,
    model_to_dict,
    parse_history,
    parse_model,
    stratum,
    successors,
    unfold,
    validate,
)
from src.reductions import BUILTIN_MODELS, builtin_example, coordination, hm_left


@pytest.fixture
def two_state():
    """One agent toggling between two states."""
    return build_icgs(
        ["1"],
        ["s0", "s1"],
        "s0",
        {("1", "s0"): ["a", "b"], ("1", "s1"): ["a"]},
        [("s0", ("a",), "s0"), ("s0", ("b",), "s1"), ("s1", ("a",), "s0")],
        labels={"s1": ["p"]},
    )


@pytest.mark.parametrize("name", sorted(BUILTIN_MODELS))
def test_builtin_examples_are_valid(name):
    """Every built-in example satisfies the model invariants."""
    report = validate(builtin_example(name))
    assert report.is_valid, report.to_dict()


def test_unknown_builtin():
    with pytest.raises(ModelFormatError):
        builtin_example("nope")


def test_validate_reports_missing_transition(two_state):
    """An enabled joint action without successor is reported, not raised."""
    broken = build_icgs(
        two_state.agents,
        two_state.states,
        "s0",
        {("1", "s0"): ["a", "b"], ("1", "s1"): ["a"]},
        [("s0", ("a",), "s0"), ("s1", ("a",), "s0")],
    )
    report = validate(broken)
    assert not report.is_valid
    assert [v.kind for v in report.violations] == ["missing-transition"]
    assert report.to_dict()["valid"] is False


def test_validate_reports_protocol_uniformity():
    model = build_icgs(
        ["1"],
        ["s0", "s1"],
        "s0",
        {("1", "s0"): ["a", "b"], ("1", "s1"): ["a"]},
        [("s0", ("a",), "s1"), ("s0", ("b",), "s1"), ("s1", ("a",), "s1")],
        obs={"1": [["s0", "s1"]]},
    )
    kinds = {v.kind for v in validate(model).violations}
    assert "protocol-uniformity" in kinds


def test_children_and_strata(two_state):
    root = History(("s0",))
    assert children(two_state, root) == [
        History(("s0", "s0"), (("a",),)),
        History(("s0", "s1"), (("b",),)),
    ]
    assert len(stratum(two_state, 3)) == 3
    assert len(unfold(two_state, 2)) == 1 + 2 + 3


def test_history_shape():
    h = History(("s0", "s1"), (("a", "x"),))
    assert len(h) == 2
    assert h.last == "s1"
    assert h.prefix(1) == History(("s0",))
    assert h.to_text(["1", "2"]) == "s0 1:a,2:x s1"
    with pytest.raises(ValueError):
        History(("s0", "s1"))


def test_is_history_follows_transitions(two_state):
    assert is_history(two_state, History(("s0", "s1", "s0"), (("b",), ("a",))))
    assert not is_history(two_state, History(("s0", "s1"), (("a",),)))
    assert not is_history(two_state, History(("s1",)))


def test_parse_history():
    model = coordination()
    assert parse_history(model, "s1 1:g,2:4 s4") == History(("s1", "s4"), (("g", "4"),))
    assert parse_history(model, "s2") == History(("s2",))


@pytest.mark.parametrize("text", ["", "s1 1:g,2:4", "s1 1:g s4", "s1 1:g,2:3 s4", "s9"])
def test_parse_history_rejects(text):
    with pytest.raises(ModelFormatError):
        parse_history(coordination(), text)


def test_model_file_round_trip(tmp_path):
    """Writing a model and reading it back keeps its dictionary form."""
    model = hm_left()
    path = tmp_path / "hm.json"
    path.write_text(dump_model(model))
    loaded = load_model(path)
    assert model_to_dict(loaded) == model_to_dict(model)
    assert loaded.initial == model.initial


def test_model_file_rejects_unknown_keys():
    data = model_to_dict(coordination())
    data["extra"] = 1
    with pytest.raises(ModelFormatError):
        model_from_dict(data)


def test_model_file_rejects_partial_joint_action():
    data = model_to_dict(coordination())
    del data["transitions"][0]["act"]["2"]
    with pytest.raises(ModelFormatError):
        model_from_dict(data)


def test_model_file_rejects_bad_json(tmp_path):
    with pytest.raises(ModelFormatError):
        parse_model("{not json")
    with pytest.raises(ModelFormatError):
        load_model(tmp_path / "missing.json")


def test_model_file_defaults_initial_to_init():
    data = model_to_dict(coordination())
    data.pop("initial")
    model = parse_model(json.dumps(data))
    assert model.initial == frozenset({"s1"})


def test_successors_need_an_enabled_joint_action(two_state):
    assert successors(two_state, "s0", ("b",)) == frozenset({"s1"})
    with pytest.raises(ActionNotEnabledError):
        successors(two_state, "s1", ("b",))
