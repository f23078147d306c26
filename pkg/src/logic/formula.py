"""Abstract syntax of ATL with the yesterday modality."""

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, Tuple, Union


class Truth(Enum):
    """Kleene three-valued truth."""

    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    def __invert__(self) -> "Truth":
        return Truth(2 - self.value)

    def __and__(self, other: "Truth") -> "Truth":
        return Truth(min(self.value, other.value))

    def __or__(self, other: "Truth") -> "Truth":
        return Truth(max(self.value, other.value))

    @classmethod
    def of(cls, value: bool) -> "Truth":
        return cls.TRUE if value else cls.FALSE

    @property
    def decided(self) -> bool:
        return self is not Truth.UNKNOWN

    def __str__(self) -> str:
        return {0: "False", 1: "Unknown", 2: "True"}[self.value]


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Coalition:
    """<<A>> psi: the agents in A can enforce the path formula psi."""
    agents: Tuple[str, ...]
    body: "Formula"


@dataclass(frozen=True)
class Next:
    sub: "Formula"


@dataclass(frozen=True)
class Yesterday:
    sub: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Embed:
    """A history formula used where a path formula is expected."""
    sub: "Formula"


Formula = Union[Atom, Const, Not, And, Or, Implies, Coalition, Next, Yesterday, Until, Embed]

TRUE = Const(True)
FALSE = Const(False)
BINARY = (And, Or, Implies, Until)
UNARY = (Not, Next, Yesterday, Embed)


def is_history_formula(f: Formula) -> bool:
    if isinstance(f, (Atom, Const, Coalition)):
        return True
    if isinstance(f, Not):
        return is_history_formula(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return is_history_formula(f.left) and is_history_formula(f.right)
    return False


def as_path(f: Formula) -> Formula:
    """Stratify ``f`` for a path position, wrapping history subformulas."""
    if isinstance(f, Embed):
        return f
    if is_history_formula(f):
        return Embed(as_history(f))
    if isinstance(f, Not):
        return Not(as_path(f.sub))
    if isinstance(f, (And, Or, Implies, Until)):
        return type(f)(as_path(f.left), as_path(f.right))
    if isinstance(f, (Next, Yesterday)):
        return type(f)(as_path(f.sub))
    raise TypeError(f"not a formula: {f!r}")


def as_history(f: Formula) -> Formula:
    """Stratify a formula read at a history; a bare path formula stays a path formula."""
    if isinstance(f, (Atom, Const)):
        return f
    if isinstance(f, Coalition):
        return Coalition(f.agents, as_path(f.body))
    if not is_history_formula(f):
        return as_path(f)
    if isinstance(f, Not):
        return Not(as_history(f.sub))
    return type(f)(as_history(f.left), as_history(f.right))


def knows(agent: str, f: Formula) -> Formula:
    """K[i] phi, expanded to <<i>> phi U phi."""
    return common_knowledge((agent,), f)


def common_knowledge(agents: Iterable[str], f: Formula) -> Formula:
    """CK[A] phi, expanded to <<A>> phi U phi."""
    body = as_path(f)
    return Coalition(tuple(agents), Until(body, body))


def conjunction(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result = And(p, result)
    return result


def disjunction(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result = Or(p, result)
    return result


def characteristic(atoms: Iterable[str], label: Iterable[str]) -> Formula:
    """pi(s): the atoms of ``label`` positively, every other atom negated."""
    label = set(label)
    return conjunction(Atom(p) if p in label else Not(Atom(p)) for p in sorted(set(atoms)))


def agents_of(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Coalition):
        return frozenset(f.agents) | agents_of(f.body)
    if isinstance(f, UNARY):
        return agents_of(f.sub)
    if isinstance(f, BINARY):
        return agents_of(f.left) | agents_of(f.right)
    return frozenset()


def atoms_of(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Atom):
        return frozenset({f.name})
    if isinstance(f, Coalition):
        return atoms_of(f.body)
    if isinstance(f, UNARY):
        return atoms_of(f.sub)
    if isinstance(f, BINARY):
        return atoms_of(f.left) | atoms_of(f.right)
    return frozenset()


def temporal_depth(f: Formula) -> int:
    """Nesting depth of X, Y and U."""
    if isinstance(f, (Next, Yesterday)):
        return 1 + temporal_depth(f.sub)
    if isinstance(f, Until):
        return 1 + max(temporal_depth(f.left), temporal_depth(f.right))
    if isinstance(f, Coalition):
        return temporal_depth(f.body)
    if isinstance(f, UNARY):
        return temporal_depth(f.sub)
    if isinstance(f, BINARY):
        return max(temporal_depth(f.left), temporal_depth(f.right))
    return 0


INFINITE = float("inf")


def lookahead(f: Formula) -> float:
    """
    How many future steps a path formula inspects from its position.
    Until may inspect arbitrarily far; embedded history formulas look
    at the prefix only.
    """
    if isinstance(f, Next):
        return 1 + lookahead(f.sub)
    if isinstance(f, Yesterday):
        return max(0, lookahead(f.sub) - 1)
    if isinstance(f, Until):
        return INFINITE
    if isinstance(f, (Not,)):
        return lookahead(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return max(lookahead(f.left), lookahead(f.right))
    return 0


_PRECEDENCE = {Implies: 1, Or: 2, And: 3, Until: 4}
_UNARY_LEVEL = 5


def _level(f: Formula) -> int:
    if isinstance(f, Embed):
        return _level(f.sub)
    return _PRECEDENCE.get(type(f), _UNARY_LEVEL)


def format_formula(f: Formula) -> str:
    """Concrete syntax that parses back to the same tree."""
    if isinstance(f, Embed):
        return format_formula(f.sub)
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, (Not, Next, Yesterday)):
        op = {Not: "!", Next: "X ", Yesterday: "Y "}[type(f)]
        return op + _wrap(f.sub, _UNARY_LEVEL)
    if isinstance(f, Coalition):
        return f"<<{','.join(f.agents)}>> " + _wrap(f.body, _UNARY_LEVEL)
    op = {And: "&", Or: "|", Implies: "->", Until: "U"}[type(f)]
    level = _PRECEDENCE[type(f)]
    right_assoc = isinstance(f, (Implies, Until))
    left = _wrap(f.left, level + 1 if right_assoc else level)
    right = _wrap(f.right, level if right_assoc else level + 1)
    return f"{left} {op} {right}"


def _wrap(f: Formula, minimum: int) -> str:
    text = format_formula(f)
    return text if _level(f) >= minimum else f"({text})"
