"""Randomised checks on small models: determinacy, invariance and bound monotonicity."""

import numpy as np
import pytest

from src.bisim import (
    DUPLICATOR,
    audit_duplicator_relation,
    audit_relation,
    build_game,
    check_bisimulation,
    check_determinacy,
    duplicator_from_relation,
    solve,
    verify_duplicator,
)
from src.logic import Yesterday, as_history, check, format_formula, parse_formula, temporal_depth
from src.model import History, validate
from src.utils import random_formula, random_model, random_renaming

SEEDS = range(16)
COALITIONS = [["1"], ["2"], ["1", "2"]]
SEMANTICS = ["obj", "subj", "ck"]
# agent 2 has a single action, which keeps depth-3 games small
NARROW = (("a", "b"), ("x",))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def contains(formula, kind) -> bool:
    if isinstance(formula, kind):
        return True
    parts = ("sub", "body", "left", "right")
    return any(contains(getattr(formula, p), kind) for p in parts if hasattr(formula, p))


@pytest.mark.parametrize("seed", SEEDS)
def test_random_models_are_valid(seed):
    model = random_model(np.random.default_rng(seed), max_states=3)
    assert validate(model).is_valid


@pytest.mark.parametrize("coalition", COALITIONS)
@pytest.mark.parametrize("seed", SEEDS)
def test_games_are_determined_at_depth_two(seed, coalition):
    rng = np.random.default_rng(seed)
    left, right = random_model(rng, max_states=3), random_model(rng, max_states=3)
    assert check_determinacy(build_game(left, right, coalition, 2))


@pytest.mark.parametrize("coalition", COALITIONS)
@pytest.mark.parametrize("seed", SEEDS)
def test_games_are_determined_at_depth_three(seed, coalition):
    rng = np.random.default_rng(seed)
    left = random_model(rng, max_states=3, actions=NARROW)
    right = random_model(rng, max_states=3, actions=NARROW)
    assert check_determinacy(build_game(left, right, coalition, 3))


@pytest.mark.parametrize("coalition", COALITIONS)
@pytest.mark.parametrize("seed", SEEDS)
def test_refinement_agrees_with_the_game(seed, coalition):
    rng = np.random.default_rng(seed)
    left, right = random_model(rng, max_states=3), random_model(rng, max_states=3)
    refined = check_bisimulation(left, right, coalition, 2)
    winner = solve(build_game(left, right, coalition, 2)).winner
    assert refined.bisimilar == (winner == DUPLICATOR)
    assert audit_relation(refined) == []


@pytest.mark.parametrize("depth", [1, 2, 3])
@pytest.mark.parametrize("seed", SEEDS)
def test_random_model_is_bisimilar_to_itself(seed, depth):
    model = random_model(np.random.default_rng(seed), max_states=3, actions=NARROW)
    for coalition in COALITIONS:
        assert check_bisimulation(model, model, coalition, depth).bisimilar, coalition


@pytest.mark.parametrize("coalition", COALITIONS)
@pytest.mark.parametrize("seed", SEEDS)
def test_renamed_copy_is_bisimilar_and_round_trips(seed, coalition):
    rng = np.random.default_rng(seed)
    model = random_model(rng, max_states=3)
    copy = random_renaming(model, rng)
    root = (History((model.init,)), History((copy.init,)))
    result = check_bisimulation(model, copy, coalition, 2, root=root)
    assert result.bisimilar

    tree = build_game(model, copy, coalition, 2, root=root)
    assert verify_duplicator(tree, duplicator_from_relation(result))
    solved = solve(tree)
    assert solved.winner == DUPLICATOR
    assert audit_duplicator_relation(tree, solved.strategy) == []


@pytest.mark.parametrize("semantics", SEMANTICS)
@pytest.mark.parametrize("coalition", COALITIONS)
def test_formulas_are_preserved_by_renaming(rng, coalition, semantics):
    for _ in range(5):
        model = random_model(rng, max_states=3)
        copy = random_renaming(model, rng)
        for _ in range(10):
            formula = random_formula(rng, coalition, ["p", "q"], 2)
            here = check(model, History((model.init,)), formula, semantics, 2).value
            there = check(copy, History((copy.init,)), formula, semantics, 2).value
            assert here is there, format_formula(formula)


@pytest.mark.parametrize("semantics", SEMANTICS)
@pytest.mark.parametrize("coalition", COALITIONS)
def test_decided_verdicts_survive_a_larger_bound(rng, coalition, semantics):
    for _ in range(5):
        model = random_model(rng, max_states=3)
        for _ in range(10):
            formula = random_formula(rng, coalition, ["p", "q"], 2)
            assert temporal_depth(formula) <= 2
            verdict = check(model, History((model.init,)), formula, semantics, 2)
            if verdict.value.decided:
                assert check(model, History((model.init,)), formula, semantics, 3).value is verdict.value


def test_random_formulas_print_and_parse(rng):
    for _ in range(20):
        formula = random_formula(rng, ["1", "2"], ["p", "q"], 2)
        assert parse_formula(format_formula(formula)) == as_history(formula)


def test_random_formulas_use_yesterday(rng):
    formulas = [random_formula(rng, ["1", "2"], ["p", "q"], 2) for _ in range(200)]
    assert any(contains(f, Yesterday) for f in formulas)
