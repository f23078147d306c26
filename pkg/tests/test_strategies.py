"""Tests for knowledge neighbourhoods and uniform strategies."""

import pytest

from src.config import reload_settings
from src.epistemics import ckn_of, ckn_partition, hist_indist, subjective_starts
from src.exceptions import LimitExceededError, StrategyDomainError
from src.model import History, stratum
from src.reductions import coordination, hm_left, simple
from src.strategies import (
    StrategySpace,
    UniformCSP,
    audit_uniformity,
    bounded_strategy,
    count_safe_strategies,
    enumerate_partial,
    outcomes,
    safe_strategies,
    start_set,
)

ROOTS = [History((q,)) for q in ("q1", "q2", "q3", "q4")]


def test_indistinguishability_follows_observations():
    model = coordination()
    assert hist_indist(model, "1", History(("s1",)), History(("s2",)))
    assert not hist_indist(model, "2", History(("s1",)), History(("s2",)))
    after = (History(("s1", "s4"), (("g", "4"),)), History(("s2", "s4"), (("g", "3"),)))
    assert hist_indist(model, "1", *after)
    assert not hist_indist(model, "2", *after)


def test_ckn_chains_through_members():
    """s1 and s3 share no observation but are linked through s2."""
    model = coordination()
    block = ckn_of(model, ["1", "2"], History(("s1",)))
    assert block.members == frozenset(History((s,)) for s in ("s1", "s2", "s3"))
    assert [len(b) for b in ckn_partition(model, ["2"], stratum(model, 1))] == [1, 2]


def test_start_sets():
    model = coordination()
    h = History(("s1",))
    assert start_set(model, ("1", "2"), h, "obj") == [h]
    assert subjective_starts(model, ("1", "2"), h) == [h, History(("s2",))]
    assert len(start_set(model, ("1", "2"), h, "ck")) == 3
    with pytest.raises(ValueError):
        start_set(model, ("1",), h, "global")


def test_uniform_strategy_count_on_hennessy_milner_roots():
    """Agent 1 has two classes and agent 2 three over q1..q4, three actions each."""
    assert sum(1 for _ in enumerate_partial(hm_left(), ["1", "2"], ROOTS)) == 243
    assert StrategySpace(hm_left(), ["1"], ROOTS).count == 9


def test_enumerated_strategies_are_uniform_and_distinct():
    model = hm_left()
    seen = set()
    for strategy in enumerate_partial(model, ["1", "2"], ROOTS):
        assert audit_uniformity(model, strategy) == []
        seen.add(strategy.choices)
    assert len(seen) == 243


def test_strategy_cap(monkeypatch):
    monkeypatch.setenv("ICGS_MAX_STRATEGIES", "100")
    reload_settings()
    try:
        with pytest.raises(LimitExceededError):
            list(enumerate_partial(hm_left(), ["1", "2"], ROOTS))
    finally:
        monkeypatch.delenv("ICGS_MAX_STRATEGIES")
        reload_settings()


def test_outcomes_need_a_large_enough_domain():
    model = coordination()
    strategy = next(iter(enumerate_partial(model, ["1", "2"], [History(("s1",))])))
    with pytest.raises(StrategyDomainError):
        outcomes(model, History(("s1",)), strategy, "subj", 1)
    paths = outcomes(model, History(("s1",)), strategy, "obj", 1)
    assert len(paths) == 1


def test_bounded_strategy_rule():
    model = coordination()

    def meet(agent, h):
        return "g" if agent == "1" else "4"

    strategy = bounded_strategy(model, ["1", "2"], 1, meet)
    assert strategy.profile(History(("s1",))) == ("g", "4")
    assert audit_uniformity(model, strategy) == []


def test_strategy_domain_is_computed_once():
    strategy = next(iter(enumerate_partial(hm_left(), ["1", "2"], ROOTS)))
    assert strategy.domain is strategy.domain
    assert strategy.domain == frozenset(h for h, _ in strategy.choices)
    assert hash(strategy) == hash(type(strategy)(strategy.coalition, strategy.choices))


def test_csp_enumerates_every_solution():
    csp = UniformCSP(
        [["a", "b"], ["a", "b"]],
        [((0, 1), {("a", "b"), ("b", "a")})],
    )
    assert sorted(csp.solutions()) == [("a", "b"), ("b", "a")]
    assert list(UniformCSP([["a"]], [((0,), {("b",)})]).solutions()) == []


@pytest.mark.parametrize("depth", [2, 3, 4])
def test_simple_game_has_one_avoiding_strategy(depth):
    """Agents 1 and 2 must answer ok everywhere they can tell apart."""
    assert count_safe_strategies(simple(), ["1", "2"], [History(("s_init",))], depth) == 1


def test_avoiding_strategy_never_reaches_err():
    model = simple()
    first = next(iter(safe_strategies(model, ["1", "2"], [History(("s_init",))], 4)))
    assert all("s_err" not in h.states for h in first.reached)
    assert audit_uniformity(model, first.strategy) == []
