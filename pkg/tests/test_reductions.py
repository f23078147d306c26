"""Tests for the machine simulator, the machine game and its correspondence to the simple game."""

import json

import pytest

from src.bisim import audit_simulator
from src.exceptions import ModelFormatError
from src.model import is_history, stratum, validate
from src.reductions import (
    Configuration,
    TMSpec,
    builtin_machine,
    chi_action,
    chi_bisimulation,
    chi_map,
    chi_simulators,
    dump_tm,
    encode_tm,
    expected_runs,
    failure_depth,
    good_runs,
    halting_correspondence,
    halting_machine,
    halting_step,
    load_tm,
    simple,
    simulate_tm,
    table1_machine,
    tm_encoding,
    tm_from_dict,
)


@pytest.fixture(scope="module")
def table1():
    return tm_encoding(table1_machine())


@pytest.fixture(scope="module")
def halting():
    return tm_encoding(halting_machine())


def joint(model, state, a1, a2, pick="pick0"):
    """The single successor of a joint action in a deterministic game."""
    (target,) = model.successors(state, (a1, a2, pick))
    return target


# machines

def test_table1_first_steps():
    trace = simulate_tm(table1_machine(), 3)
    assert not trace.halted
    assert trace.last == Configuration("q0", 1, {0: "a", 1: "a"})
    assert [c.state for c in trace.configurations] == ["q0", "q1", "q2", "q0"]


def test_table1_runs_forever():
    assert not simulate_tm(table1_machine(), 10_000).halted
    assert halting_step(table1_machine(), 10_000) is None


def test_halting_machine_stops_at_step_three():
    trace = simulate_tm(halting_machine(), 50)
    assert trace.halted
    assert trace.steps == 3
    assert halting_step(halting_machine(), 50) == 3


def test_undefined_start_halts_immediately():
    tm = TMSpec(states=["q0"], alphabet=["B", "a"], init="q0")
    assert halting_step(tm, 10) == 0


def test_left_move_off_the_tape_halts():
    tm = tm_from_dict({
        "states": ["q0"],
        "alphabet": ["B"],
        "init": "q0",
        "delta": [{"state": "q0", "read": "B", "next": "q0", "write": "B", "move": "L"}],
    })
    assert halting_step(tm, 10) == 0


def test_halting_states_have_no_moves():
    tm = table1_machine().model_copy(update={"halting": ["q2"]})
    assert tm.step("q2", "B") is None
    assert halting_step(tm, 10) == 2


@pytest.mark.parametrize(
    "change",
    [
        {"init": "q9"},
        {"blank": "c"},
        {"states": ["q0", "q1", "q2", "a"]},
        {"states": ["q0", "q1", "q2", "tr"]},
        {"extra": 1},
    ],
)
def test_machine_file_rejects(change):
    data = {**json.loads(dump_tm(table1_machine())), **change}
    with pytest.raises(ModelFormatError):
        tm_from_dict(data)


def test_machine_file_rejects_duplicate_entries():
    data = json.loads(dump_tm(halting_machine()))
    data["delta"].append(dict(data["delta"][0], next="q0"))
    with pytest.raises(ModelFormatError):
        tm_from_dict(data)


def test_machine_file_round_trip(tmp_path):
    path = tmp_path / "tm.json"
    path.write_text(dump_tm(table1_machine()))
    assert load_tm(path) == table1_machine()
    with pytest.raises(ModelFormatError):
        builtin_machine("busy-beaver")


# encoding

def test_encoded_games_are_valid(table1, halting):
    for encoding in (table1, halting):
        assert validate(encoding.model).is_valid, validate(encoding.model).to_dict()
    assert encode_tm(table1_machine()).states == table1.model.states


def test_encoded_game_shape(table1):
    model = table1.model
    assert model.agents == ("1", "2", "3")
    assert joint(model, "s_init", "i", "i", "pick0") == "s_gen"
    assert joint(model, "s_init", "i", "i", "pick1") == "s_init'"
    assert joint(model, "s_lb", "i", "q0") == "s_lb'"
    assert joint(model, "s_lb", "i", "i") == "s_err"
    assert joint(model, "s_gen", "i", "i", "pick1") == "s0_B"
    assert model.enabled("1", "s_err") == ("i",)
    assert model.label("s_err") == frozenset({"err"})


def test_right_move_is_announced_by_agent_one(table1):
    """Leaving a head cell to the right is agent 1's call, arriving is agent 2's."""
    model = table1.model
    assert joint(model, "s_q0_B", "q0-q1-R", "i") == "s0_a"
    assert joint(model, "s_q0_B", "i", "q0-q1-R") == "s_err"
    assert joint(model, "s0_B", "i", "q0-q1-R") == "s_q1_B"
    assert joint(model, "s1_tr", "q0-q1-R", "i") == "s_q0_q1_R"
    assert joint(model, "s_q0_q1_R", "i", "q0-q1-R") == "s1_tr"


def test_ambiguous_states_fall_back_to_waiting(table1):
    model = table1.model
    assert joint(model, "s0_a", "q1-q2-R", "q1-q2-R") == "s_bot1"
    assert joint(model, "s1_tr", "q1-q0-L", "q1-q0-L") == "s_bot3"
    assert joint(model, "s_bot1", "i", "i") == "s_bot2"
    assert joint(model, "s_bot2", "q0", "i") == "s_bot1"
    assert table1.ambiguous == frozenset({"s0_B", "s0_a", "s1_tr", "s_bot2", "s_bot4"})


def test_halting_head_state_has_no_safe_pair(halting):
    assert halting.correct["s_q1_a"] is None
    model = halting.model
    assert all(t == "s_err" for _, t in model.moves("s_q1_a"))


# simple game

def test_simple_game_edges():
    model = simple()
    assert validate(model).is_valid
    assert {t for _, t in model.moves("s_amb1")} == {"s_namb1"}
    assert joint(model, "s_gen", "nok", "ok") == "s_err"
    assert joint(model, "s_gen", "ok", "ok", "pick1") == "s_amb1"
    assert joint(model, "s_namb2", "ok", "ok") == "s_amb2"


# correspondence

def test_chi_actions(table1):
    assert chi_action(table1, "s_init", "1", "i") == "ok"
    assert chi_action(table1, "s_init", "2", "q0") == "nok"
    assert chi_action(table1, "s_init", "3", "pick1") == "pick1"
    assert chi_action(table1, "s0_a", "1", "i") == "ok"
    assert chi_action(table1, "s0_a", "1", "q1-q2-R") == "nok"
    assert chi_action(table1, "s_err", "2", "i") == "ok"
    assert chi_action(table1, "s_q0_B", "1", "q0-q1-R") == "ok"


def test_chi_images_are_simple_game_histories(table1):
    target = simple()
    for h in stratum(table1.model, 3):
        assert is_history(target, chi_map(table1, h)), h


def test_chi_simulators_are_total(table1):
    assert audit_simulator(chi_simulators(table1, 1)) == []


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_machine_game_matches_simple_game(table1, depth):
    assert chi_bisimulation(table1, depth).bisimilar


def test_avoiding_runs_simulate_the_machine(table1):
    runs = good_runs(table1, 9)
    assert runs == expected_runs(table1.tm, 9)
    assert len(runs) == 10
    assert ("s_init", "s_gen", "s0_B", "s_q0_B") in {r[:4] for r in runs}


def test_halting_machine_loses_at_the_predicted_depth(halting):
    assert failure_depth(halting.tm, 50) == 10
    rows = {r["depth"]: r for r in halting_correspondence(halting, [9, 10])}
    assert rows[9]["avoidable"] and not rows[10]["avoidable"]
    assert all(r["matches_prediction"] for r in rows.values())
    assert rows[10]["simple_avoidable"] and not rows[10]["matches_simple"]
    assert good_runs(halting, 10) is None
    assert expected_runs(halting.tm, 10) is None


def test_looping_machine_never_loses(table1):
    rows = halting_correspondence(table1, range(0, 8))
    assert all(r["avoidable"] and r["matches_simple"] for r in rows)
