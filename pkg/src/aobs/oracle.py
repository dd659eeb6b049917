"""Plain tabular belief-state reference implementation.

Deliberately naive: a belief state is a list of (probability, physical state)
rows.  Used as a brute-force correctness oracle for the DAG implementation at
desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from .core import EPS_P, AobsError, StateTuple, UnknownVariable

# rows of (probability, sorted (var, value) tuple)
TabularPBS = List[Tuple[float, StateTuple]]

#: default cap on oracle expansion; the oracle is for desk-scale checks only
ORACLE_ROW_CAP = 10**6


@dataclass(frozen=True)
class Condition:
    """Conjunctive per-variable predicate: variable -> allowed value set.

    Unconstrained variables are simply absent.
    """

    allowed: Mapping[int, frozenset]

    @staticmethod
    def of(constraints: Mapping[int, Sequence[int]]) -> "Condition":
        return Condition({v: frozenset(vals) for v, vals in constraints.items()})

    @property
    def variables(self) -> frozenset:
        return frozenset(self.allowed)

    def allows(self, var: int, value: int) -> bool:
        vals = self.allowed.get(var)
        return vals is None or value in vals

    def satisfied_by(self, state: StateTuple) -> bool:
        assignment = dict(state)
        for var, vals in self.allowed.items():
            if assignment[var] not in vals:
                return False
        return True

    def check_within(self, universe: Sequence[int]) -> None:
        unknown = self.variables - set(universe)
        if unknown:
            raise UnknownVariable(f"condition on unknown variables {sorted(unknown)}")


@dataclass(frozen=True)
class Action:
    """A state-independent probabilistic action.

    ``vars`` is the ordered variable set the action overwrites; each outcome is
    a (probability, values) pair where ``values`` aligns with ``vars``.
    """

    vars: Tuple[int, ...]
    outcomes: Tuple[Tuple[float, Tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise AobsError("action needs at least one outcome")
        if len(set(self.vars)) != len(self.vars):
            raise AobsError("action variables must be distinct")
        total = 0.0
        for p, values in self.outcomes:
            if p <= 0:
                raise AobsError(f"outcome probability must be positive, got {p}")
            if len(values) != len(self.vars):
                raise AobsError("outcome must assign exactly the action variables")
            total += p
        if abs(total - 1.0) > 1e-6:
            raise AobsError(f"outcome probabilities sum to {total}, expected 1")

    @property
    def variables(self) -> frozenset:
        return frozenset(self.vars)

    def check_within(self, universe: Sequence[int]) -> None:
        unknown = self.variables - set(universe)
        if unknown:
            raise UnknownVariable(f"action on unknown variables {sorted(unknown)}")


def tab_canonical(b: TabularPBS) -> TabularPBS:
    """Merge duplicate states by probability sum and sort deterministically."""
    acc: Dict[StateTuple, float] = {}
    for p, state in b:
        acc[state] = acc.get(state, 0.0) + p
    return [(p, s) for s, p in sorted(acc.items())]


def tab_prob(b: TabularPBS, c: Condition) -> float:
    """Probability mass of the rows satisfying the condition."""
    if b:
        universe = {var for var, _ in b[0][1]}
        unknown = c.variables - universe
        if unknown:
            raise UnknownVariable(f"condition on unknown variables {sorted(unknown)}")
    return sum(p for p, state in b if c.satisfied_by(state))


def tab_apply_action(b: TabularPBS, c: Condition, a: Action) -> TabularPBS:
    """Apply an action to the condition-selected rows; result is canonical.

    Rows failing the condition pass through unchanged; each selected row is
    replaced by one row per outcome with the action variables overwritten.
    """
    if b:
        universe = {var for var, _ in b[0][1]}
        unknown = (c.variables | a.variables) - universe
        if unknown:
            raise UnknownVariable(f"unknown variables {sorted(unknown)}")
    out: TabularPBS = []
    for p, state in b:
        if not c.satisfied_by(state):
            out.append((p, state))
            continue
        base = dict(state)
        for q, values in a.outcomes:
            nxt = dict(base)
            for var, value in zip(a.vars, values):
                nxt[var] = value
            out.append((p * q, tuple(sorted(nxt.items()))))
    if len(out) > ORACLE_ROW_CAP:
        raise AobsError(f"oracle expansion exceeds {ORACLE_ROW_CAP} rows")
    return tab_canonical(out)


def tab_equal(a: TabularPBS, b: TabularPBS, eps: float = EPS_P) -> bool:
    """True iff both canonical tables hold the same states within tolerance."""
    if len(a) != len(b):
        return False
    for (pa, sa), (pb, sb) in zip(a, b):
        if sa != sb or abs(pa - pb) > eps:
            return False
    return True
