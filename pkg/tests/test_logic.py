"""Tests for formula syntax and the bounded checker."""

import pytest

from src.exceptions import FormulaSyntaxError, UnknownAgentError
from src.logic import (
    Atom,
    Coalition,
    Embed,
    Next,
    Truth,
    Until,
    Yesterday,
    check,
    check_path,
    format_formula,
    lookahead,
    parse_formula,
    temporal_depth,
)
from src.model import BoundedPath, History
from src.reductions import coordination, hm_left, hm_right


def test_parse_coalition_next():
    f = parse_formula("<<1,2>> X s")
    assert f == Coalition(("1", "2"), Next(Embed(Atom("s"))))


def test_prefix_binds_tighter_than_until():
    loose = parse_formula("<<1>> p U q")
    assert isinstance(loose, Until)
    owned = parse_formula("<<1>> (p U q)")
    assert isinstance(owned, Coalition)


def test_knowledge_sugar():
    assert parse_formula("K[1] p") == parse_formula("<<1>> (p U p)")
    assert parse_formula("CK[1,2] p") == parse_formula("<<1,2>> (p U p)")


@pytest.mark.parametrize(
    "text",
    [
        "<<1,2>> X s",
        "!(p & q) -> <<>> X (p | q)",
        "<<1>> (p U <<2>> X Y q)",
        "CK[1,2] (p -> q)",
        "true & !false",
    ],
)
def test_format_parses_back(text):
    f = parse_formula(text)
    assert parse_formula(format_formula(f)) == f


@pytest.mark.parametrize("text", ["<<1 X p", "p &", "K[] p", "(p"])
def test_syntax_errors_carry_position(text):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert "line" in str(info.value) or info.value.line is None


def test_depth_measures():
    f = parse_formula("<<1>> X X p")
    assert temporal_depth(f) == 2
    assert lookahead(f.body) == 2
    assert lookahead(parse_formula("<<1>> (p U q)").body) == float("inf")


@pytest.mark.parametrize(
    "semantics,expected",
    [("obj", Truth.TRUE), ("subj", Truth.TRUE), ("ck", Truth.FALSE)],
)
def test_coordination_semantics(semantics, expected):
    """The grand coalition meets from s1 unless it must agree on all of s1, s2, s3."""
    verdict = check(coordination(), History(("s1",)), parse_formula("<<1,2>> X s"), semantics, 2)
    assert verdict.value is expected
    if expected is Truth.TRUE:
        assert verdict.witness is not None


def test_coordination_single_agent_cannot_force():
    verdict = check(coordination(), History(("s1",)), parse_formula("<<1>> X s"), "obj", 2)
    assert verdict.value is Truth.FALSE


def test_until_of_equal_sides_is_the_formula():
    model = coordination()
    for h in (History(("s1",)), History(("s1", "s4"), (("g", "4"),))):
        for semantics in ("obj", "subj", "ck"):
            plain = check(model, h, parse_formula("s"), semantics, 2).value
            assert check(model, h, parse_formula("<<1>> (s U s)"), semantics, 2).value is plain


def test_yesterday_reads_the_prefix():
    h = History(("s1", "s4"), (("g", "4"),))
    assert check(coordination(), h, parse_formula("<<>> Y !s"), "obj", 1).value is Truth.TRUE


def test_next_beyond_bound_is_unknown():
    verdict = check(coordination(), History(("s1",)), parse_formula("<<1,2>> X X s"), "obj", 1)
    assert verdict.value is Truth.UNKNOWN
    assert check(coordination(), History(("s1",)), parse_formula("<<1,2>> X X s"), "obj", 2).value is Truth.TRUE


def test_common_knowledge_separates_hennessy_milner_pair():
    f = parse_formula("<<1,2>> X p")
    assert check(hm_left(), History(("q1",)), f, "ck", 1).value is Truth.TRUE
    assert check(hm_right(), History(("q1'",)), f, "ck", 1).value is Truth.FALSE
    assert check(hm_right(), History(("q1'",)), f, "obj", 1).value is Truth.TRUE


def test_unknown_agent_rejected():
    with pytest.raises(UnknownAgentError):
        check(coordination(), History(("s1",)), parse_formula("<<7>> X s"), "obj", 1)


def test_non_history_rejected():
    with pytest.raises(ValueError):
        check(coordination(), History(("s4",)), parse_formula("s"), "obj", 1)


def test_path_clauses():
    model = coordination()
    path = BoundedPath(History(("s1", "s4"), (("g", "4"),)))
    s = Embed(Atom("s"))
    assert check_path(model, path, 1, s).value is Truth.TRUE
    assert check_path(model, path, 0, Next(s)).value is Truth.TRUE
    assert check_path(model, path, 0, Yesterday(s)).value is Truth.FALSE
    assert check_path(model, path, 1, Yesterday(s)).value is Truth.FALSE
    with pytest.raises(IndexError):
        check_path(model, path, 2, s)
