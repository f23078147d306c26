"""Tests for bounded alternating bisimulation, the game and formula extraction."""

import json

import pytest

from src.bisim import (
    DUPLICATOR,
    SPOILER,
    audit_duplicator_relation,
    audit_relation,
    audit_simulator,
    build_game,
    check_bisimulation,
    check_determinacy,
    dump_relation,
    duplicator_from_relation,
    explore_duplicator,
    export_trace,
    extract_formula,
    load_relation,
    relation_from_duplicator,
    replay_certificate,
    solve,
    verify_distinguishing,
    verify_duplicator,
)
from src.exceptions import ModelFormatError
from src.logic import Truth, format_formula
from src.model import History, rename_states
from src.reductions import BUILTIN_MODELS, builtin_example, coordination, hm_left, hm_right

AGENTS = ["1", "2"]


@pytest.fixture(scope="module")
def hm_game():
    return solve(build_game(hm_left(), hm_right(), AGENTS, 1))


@pytest.fixture(scope="module")
def hm_self():
    return check_bisimulation(hm_left(), hm_left(), AGENTS, 1)


def test_hennessy_milner_pair_is_not_bisimilar():
    result = check_bisimulation(hm_left(), hm_right(), AGENTS, 1)
    assert not result.bisimilar
    assert result.root_certificate() is not None
    assert all(replay_certificate(result, c) for c in result.certificates)


def test_hennessy_milner_pair_agrees_with_one_agent():
    """A lone agent cannot force p anywhere, so it cannot tell the models apart."""
    result = check_bisimulation(hm_left(), hm_right(), ["1"], 1)
    assert result.bisimilar
    assert solve(build_game(hm_left(), hm_right(), ["1"], 1)).winner == DUPLICATOR


def test_model_is_bisimilar_to_itself(hm_self):
    assert hm_self.bisimilar
    assert audit_relation(hm_self, "restated") == []
    assert audit_simulator(hm_self.tables.values()) == []


def test_renamed_copy_is_bisimilar():
    model = coordination()
    copy = rename_states(model, {s: s.replace("s", "t") for s in model.states}, name="copy")
    result = check_bisimulation(model, copy, AGENTS, 2)
    assert result.bisimilar
    assert result.to_dict()["verdict"] == result.verdict


@pytest.mark.parametrize("depth", [1, 2, 3])
@pytest.mark.parametrize("name", sorted(BUILTIN_MODELS))
def test_builtin_model_is_bisimilar_to_itself(name, depth):
    model = builtin_example(name)
    result = check_bisimulation(model, model, AGENTS, depth)
    assert result.bisimilar
    identity = {(h, h) for h, _ in result.initial}
    assert identity <= set(result.relation)


def test_strict_audit_leaves_the_verdict_alone():
    model = coordination()
    plain = check_bisimulation(model, model, AGENTS, 2)
    audited = check_bisimulation(model, model, AGENTS, 2, strict_audit=True)
    assert plain.strict_violations is None
    assert audited.bisimilar and plain.bisimilar
    assert set(audited.relation) == set(plain.relation)
    assert audited.to_dict()["strict_audit"]["violations"] == len(audited.strict_violations)


def test_depth_zero_compares_labels_only():
    assert check_bisimulation(hm_left(), hm_right(), AGENTS, 0).bisimilar
    crossed = (History(("q2",)), History(("q4'",)))
    assert check_bisimulation(hm_left(), hm_right(), AGENTS, 0, root=crossed).bisimilar


def test_spoiler_wins_the_hennessy_milner_game(hm_game):
    assert hm_game.winner == SPOILER
    assert hm_game.determined
    assert hm_game.root_challenge is not None
    assert hm_game.to_dict()["opening_challenge"] is not None


def test_game_is_determined_both_ways():
    assert check_determinacy(build_game(hm_left(), hm_right(), AGENTS, 1))
    assert check_determinacy(build_game(hm_right(), hm_left(), AGENTS, 1))


def test_extracted_formula_separates_roots(hm_game):
    formula = extract_formula(hm_game)
    left, right = verify_distinguishing(hm_game, formula)
    assert left.value is Truth.TRUE
    assert right.value is Truth.FALSE
    assert format_formula(formula)


def test_extraction_needs_a_spoiler_win():
    with pytest.raises(ValueError):
        extract_formula(solve(build_game(hm_left(), hm_left(), AGENTS, 1)))


def test_relation_strategy_wins_the_game(hm_self):
    tree = build_game(hm_left(), hm_left(), AGENTS, 1)
    policy = duplicator_from_relation(hm_self)
    assert verify_duplicator(tree, policy)
    report = explore_duplicator(tree, policy)
    assert report.wins and report.failure is None
    solved = solve(tree)
    assert solved.winner == DUPLICATOR
    assert audit_duplicator_relation(tree, solved.strategy) == []
    assert relation_from_duplicator(tree, solved.strategy)


def test_relation_strategy_needs_a_bisimulation():
    refuted = check_bisimulation(hm_left(), hm_right(), AGENTS, 1)
    with pytest.raises(ValueError):
        duplicator_from_relation(refuted)


def test_seed_restricts_the_relation(tmp_path, hm_self):
    """Seeding with the identity keeps the model bisimilar to itself."""
    identity = {(h, h) for h, _ in hm_self.relation}
    path = tmp_path / "seed.json"
    path.write_text(dump_relation(hm_left(), hm_left(), identity))
    seed = load_relation(path, hm_left(), hm_left())
    assert seed == frozenset(identity)
    assert check_bisimulation(hm_left(), hm_left(), AGENTS, 1, seed=seed).bisimilar


def test_relation_file_rejects_non_histories(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([
        {"depth": 1, "left": ["q1", "q_top"], "leftActs": [{"1": "c", "2": "z"}],
         "right": ["q1", "q_bot"], "rightActs": [{"1": "c", "2": "z"}]},
    ]))
    with pytest.raises(ModelFormatError):
        load_relation(path, hm_left(), hm_left())


def test_trace_export(tmp_path, hm_game):
    path = tmp_path / "trace.jsonl"
    lines = export_trace(hm_game, path)
    assert lines > 0
    first = json.loads(path.read_text().splitlines()[0])
    assert isinstance(first, dict)
