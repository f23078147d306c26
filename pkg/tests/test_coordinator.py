"""Tests for the verification coordinator and the command line."""

import json

import pytest

import main
from src.bisim import check_bisimulation
from src.coordinator import EXIT_INCONSISTENT, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, VerificationCoordinator
from src.exceptions import ConsistencyError
from src.model import dump_model, model_to_dict, strata
from src.reductions import coordination, dump_tm, halting_machine


@pytest.fixture
def coordinator():
    """Create a coordinator instance."""
    return VerificationCoordinator()


def run_cli(capsys, *argv):
    code = main.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_coordinator_initialization(coordinator):
    assert coordinator.logger is not None
    assert coordinator.tracer is not None
    assert coordinator.metrics is not None


def test_validate_builtin(capsys):
    code, report = run_cli(capsys, "validate", "--model", "coordination")
    assert code == EXIT_OK
    assert report["verdict"] == "valid"
    assert report["inputs"]["model"] == {"builtin": "coordination"}


def test_validate_invalid_file(tmp_path, capsys):
    data = model_to_dict(coordination())
    data["transitions"] = data["transitions"][1:]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    code, report = run_cli(capsys, "validate", "--model", str(path))
    assert code == EXIT_NEGATIVE
    assert report["verdict"] == "invalid"
    assert len(report["inputs"]["model"]["sha256"]) == 64


def test_missing_model_is_an_input_error(tmp_path, capsys):
    code = main.main(["validate", "--model", str(tmp_path / "nope.json")])
    captured = capsys.readouterr()
    assert code == EXIT_INPUT
    assert json.loads(captured.out)["success"] is False
    assert "error" in captured.err


def test_usage_error_exits_with_input_code(capsys):
    with pytest.raises(SystemExit) as info:
        main.main(["bisim", "--left", "hm-left"])
    assert info.value.code == EXIT_INPUT


@pytest.mark.parametrize(
    "semantics,expected_code,verdict",
    [("obj", EXIT_OK, "True"), ("ck", EXIT_NEGATIVE, "False")],
)
def test_check_command(capsys, semantics, expected_code, verdict):
    code, report = run_cli(
        capsys, "check", "--model", "coordination", "--formula", "<<1,2>> X s", "--semantics", semantics,
    )
    assert code == expected_code
    assert report["verdict"] == verdict
    assert report["parameters"]["history"] == "s1"


def test_check_bad_formula(capsys):
    code, report = run_cli(capsys, "check", "--model", "coordination", "--formula", "<<1 X s")
    assert code == EXIT_INPUT
    assert "line" in report["error"]


def test_check_with_history(capsys):
    code, report = run_cli(
        capsys, "check", "--model", "coordination", "--history", "s2 1:w,2:4 s4", "--formula", "s",
    )
    assert code == EXIT_OK


def test_bisim_distinguishes_hennessy_milner_pair(tmp_path, capsys):
    trace = tmp_path / "trace.jsonl"
    code, report = run_cli(
        capsys, "bisim", "--left", "hm-left", "--right", "hm-right", "--coalition", "1,2",
        "--depth", "1", "--distinguish", "--trace", str(trace),
    )
    assert code == EXIT_NEGATIVE
    assert report["verdict"] == "not-bisimilar"
    assert report["game"]["winner"] == "Spoiler"
    assert report["refinement"]["verdict"] == "not-bisimilar"
    assert report["formula_separates"] is True
    assert trace.exists()


def test_bisim_self_writes_relation(tmp_path, capsys):
    out = tmp_path / "relation.json"
    code, report = run_cli(
        capsys, "bisim", "--left", "hm-left", "--right", "hm-left", "--coalition", "1",
        "--depth", "1", "--relation-out", str(out),
    )
    assert code == EXIT_OK
    assert report["verdict"] == "bisimilar-to-depth"
    assert json.loads(out.read_text())


def test_bisim_unknown_agent(capsys):
    code, report = run_cli(
        capsys, "bisim", "--left", "hm-left", "--right", "hm-right", "--coalition", "9", "--depth", "1",
    )
    assert code == EXIT_INPUT


def test_consistency_errors_exit_three(coordinator, monkeypatch):
    def broken(*args, **kwargs):
        raise ConsistencyError("both players claim a win")

    monkeypatch.setattr("src.coordinator.solve", broken)
    result = coordinator.cmd_bisim("hm-left", "hm-right", ["1"], 1, mode="game")
    assert result["exit_code"] == EXIT_INCONSISTENT
    assert not result["success"]


@pytest.mark.parametrize("name", ["coordination", "hm-left", "simple"])
def test_refinement_finds_a_model_bisimilar_to_itself(coordinator, name):
    result = coordinator.cmd_bisim(name, name, ["1", "2"], 2, mode="refine", strict_audit=True)
    assert result["exit_code"] == EXIT_OK
    assert result["refinement"]["verdict"] == "bisimilar-to-depth"
    assert "strict_audit" in result["refinement"]


def test_refinement_and_game_must_agree(coordinator, monkeypatch):
    """A refinement that refutes what Duplicator wins is an internal error."""
    real = check_bisimulation

    def refuting(left, right, agents, depth, seed=None, **kwargs):
        result = real(left, right, agents, depth, seed, **kwargs)
        result.verdict = "not-bisimilar"
        return result

    monkeypatch.setattr("src.coordinator.check_bisimulation", refuting)
    result = coordinator.cmd_bisim("hm-left", "hm-left", ["1"], 1, mode="both")
    assert result["exit_code"] == EXIT_INCONSISTENT
    assert "refinement says not-bisimilar" in result["error"]


def test_commands_release_cached_unfoldings(coordinator):
    coordinator.cmd_bisim("hm-left", "hm-right", ["1"], 1, mode="refine")
    assert strata.cache_info().currsize == 0


def test_emit_and_reload(tmp_path, capsys):
    out = tmp_path / "simple.json"
    code, report = run_cli(capsys, "emit", "--name", "simple", "--out", str(out))
    assert code == EXIT_OK
    assert report["output"]["path"] == str(out)
    code, report = run_cli(capsys, "validate", "--model", str(out))
    assert code == EXIT_OK


def test_emit_inline(capsys):
    code, report = run_cli(capsys, "emit", "--name", "coordination")
    assert report["model"] == dump_model(coordination())


def test_encode_machine_file(tmp_path, capsys):
    tm = tmp_path / "halting.json"
    tm.write_text(dump_tm(halting_machine()))
    code, report = run_cli(capsys, "encode-tm", "--tm", str(tm), "--out", str(tmp_path / "game.json"))
    assert code == EXIT_OK
    assert report["states"] > 20


def test_reduction_on_halting_machine(capsys):
    code, report = run_cli(capsys, "reduction", "--tm", "halting", "--depths", "9,10")
    assert code == EXIT_NEGATIVE
    assert report["verdict"] == "halts"
    assert [r["avoidable"] for r in report["rows"]] == [True, False]


def test_reduction_bad_depths(capsys):
    with pytest.raises(SystemExit) as info:
        main.main(["reduction", "--tm", "halting", "--depths", "a-b"])
    assert info.value.code == EXIT_INPUT
