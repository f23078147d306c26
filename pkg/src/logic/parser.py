"""Concrete syntax for formulas.

Precedence, loosest first: ``->`` (right associative), ``|``, ``&``,
``U`` (right associative), then the prefix operators ``!``, ``X``,
``Y``, ``<<A>>``, ``K[i]`` and ``CK[A]``. A prefix operator takes the
tightest operand, so ``<<1>> p U q`` reads as ``(<<1>> p) U q``;
write ``<<1>> (p U q)`` for the coalition to own the until.
"""

from functools import lru_cache

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput

from ..exceptions import FormulaSyntaxError
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Coalition,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Until,
    Yesterday,
    as_history,
    common_knowledge,
    knows,
)

GRAMMAR = r"""
?start: implication

?implication: disjunction
    | disjunction "->" implication -> implies

?disjunction: conjunction
    | disjunction "|" conjunction -> or_

?conjunction: until
    | conjunction "&" until -> and_

?until: unary
    | unary "U" until -> until

?unary: "!" unary -> not_
    | "X" unary -> next_
    | "Y" unary -> yesterday
    | "<<" [agents] ">>" unary -> coalition
    | "K" "[" NAME "]" unary -> knows
    | "CK" "[" agents "]" unary -> common
    | atom

?atom: "true" -> true
    | "false" -> false
    | NAME -> atom
    | "(" implication ")"

agents: NAME ("," NAME)*

NAME: /[A-Za-z0-9_][A-Za-z0-9_']*/

%import common.WS
%ignore WS
"""


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turns the parse tree into formula objects."""

    def implies(self, left, right):
        return Implies(left, right)

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def until(self, left, right):
        return Until(left, right)

    def not_(self, sub):
        return Not(sub)

    def next_(self, sub):
        return Next(sub)

    def yesterday(self, sub):
        return Yesterday(sub)

    def coalition(self, agents, body):
        return Coalition(tuple(agents or ()), body)

    def knows(self, agent, body):
        return knows(str(agent), body)

    def common(self, agents, body):
        return common_knowledge(agents, body)

    def agents(self, *names):
        return tuple(str(n) for n in names)

    def true(self):
        return TRUE

    def false(self):
        return FALSE

    def atom(self, name):
        return Atom(str(name))


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", maybe_placeholders=True)


def parse_formula(text: str) -> Formula:
    """Parse and stratify a formula; syntax errors carry line and column."""
    try:
        tree = _parser().parse(text)
    except UnexpectedEOF as e:
        raise FormulaSyntaxError("unexpected end of formula", 1, len(text) + 1) from e
    except (UnexpectedCharacters, UnexpectedInput) as e:
        raise FormulaSyntaxError(f"unexpected input in {text!r}", e.line, e.column) from e
    except LarkError as e:
        raise FormulaSyntaxError(str(e)) from e
    return as_history(FormulaBuilder().transform(tree))
