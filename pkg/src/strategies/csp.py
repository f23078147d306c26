"""Backtracking search for uniform strategies under per-history constraints."""

from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from ..observability import get_metrics_collector

Scope = Tuple[int, ...]
Constraint = Tuple[Scope, FrozenSet[Tuple[str, ...]]]


class UniformCSP:
    """
    Variables are strategy variables (one per agent and observation
    class); each constraint restricts the profile a history receives to an
    allowed set. Search assigns variables with forward checking.

    With ``lexicographic=True`` variables are assigned in index order and
    values in domain order, so the first solution is the least one in the
    enumeration order of strategies. Otherwise the variable with the
    smallest remaining domain goes first.
    """

    def __init__(
        self,
        domains: Sequence[Sequence[str]],
        constraints: Sequence[Constraint],
        lexicographic: bool = True,
    ):
        self.domains = [list(d) for d in domains]
        self.constraints = [(tuple(scope), frozenset(allowed)) for scope, allowed in constraints]
        self.lexicographic = lexicographic
        self.touching: Dict[int, List[int]] = {v: [] for v in range(len(self.domains))}
        for n, (scope, _) in enumerate(self.constraints):
            for v in set(scope):
                self.touching[v].append(n)

    def _supported(self, n: int, assigned: Dict[int, str], domains: List[List[str]]) -> Optional[List[set]]:
        scope, allowed = self.constraints[n]
        if not scope:
            return [] if () in allowed else None
        support = [set() for _ in scope]
        for t in allowed:
            ok = True
            for j, v in enumerate(scope):
                if v in assigned:
                    if t[j] != assigned[v]:
                        ok = False
                        break
                elif t[j] not in domains[v]:
                    ok = False
                    break
            if ok:
                for j, value in enumerate(t):
                    support[j].add(value)
        if not support[0]:
            return None
        return support

    def _propagate(self, touched: Sequence[int], assigned: Dict[int, str], domains: List[List[str]]) -> Optional[List[List[str]]]:
        domains = [list(d) for d in domains]
        queue = list(touched)
        while queue:
            n = queue.pop()
            support = self._supported(n, assigned, domains)
            if support is None:
                return None
            scope, _ = self.constraints[n]
            for j, v in enumerate(scope):
                if v in assigned:
                    continue
                pruned = [x for x in domains[v] if x in support[j]]
                if not pruned:
                    return None
                if len(pruned) != len(domains[v]):
                    domains[v] = pruned
                    queue.extend(m for m in self.touching[v] if m != n)
        return domains

    def solutions(self) -> Iterator[Tuple[str, ...]]:
        """Every solution, as a tuple of values indexed like the variables."""
        get_metrics_collector().increment("csp.searches")
        if any(not d for d in self.domains):
            return
        domains = self._propagate(range(len(self.constraints)), {}, self.domains)
        if domains is None:
            return
        yield from self._search({}, domains)

    def first(self) -> Optional[Tuple[str, ...]]:
        return next(iter(self.solutions()), None)

    def _pick(self, assigned: Dict[int, str], domains: List[List[str]]) -> int:
        free = [v for v in range(len(domains)) if v not in assigned]
        if self.lexicographic:
            return free[0]
        return min(free, key=lambda v: (len(domains[v]), v))

    def _search(self, assigned: Dict[int, str], domains: List[List[str]]) -> Iterator[Tuple[str, ...]]:
        if len(assigned) == len(domains):
            yield tuple(assigned[v] for v in range(len(domains)))
            return
        var = self._pick(assigned, domains)
        for value in domains[var]:
            assigned[var] = value
            narrowed = self._propagate(self.touching[var], assigned, domains)
            if narrowed is not None:
                yield from self._search(assigned, narrowed)
            del assigned[var]
