"""Hash-consed And-Or DAG representation of discrete probabilistic belief states.

A belief state is a distribution over total assignments of integer values to a
fixed set of variables.  The DAG has three node kinds:

* ``LIT``  -- a single variable assignment, e.g. ``a = 0``;
* ``AND``  -- Cartesian product of children over pairwise disjoint variable sets;
* ``OR``   -- weighted union of children over identical variable sets.

Nodes are immutable and interned in a :class:`Store`, so structurally identical
subgraphs are shared automatically.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

#: global tolerance for probability-mass checks
EPS_P = 1e-9

#: OR edge weights are quantized to this many decimal digits inside node keys,
#: so float noise below ~5e-13 does not break structural sharing
WEIGHT_DIGITS = 12

LIT = "lit"
AND = "and"
OR = "or"

# A partial physical state: sorted tuple of (variable, value) pairs.
StateTuple = Tuple[Tuple[int, int], ...]


class AobsError(Exception):
    """Base class for all errors raised by this package."""


class OverlappingSubspaces(AobsError):
    """Two AND children range over a common variable."""


class MismatchedSubspaces(AobsError):
    """OR children do not range over the same variable set."""


class MismatchedUniverse(AobsError):
    """Two belief states do not share a variable universe."""


class PartialAssignment(AobsError):
    """A physical state does not assign every variable of the universe."""


class ExpansionTooLarge(AobsError):
    """Materializing the state collection would exceed the configured cap."""


class UnknownVariable(AobsError):
    """A condition or action mentions a variable outside the universe."""


class Node:
    """An interned DAG node.  Do not construct directly; use a :class:`Store`.

    ``children`` is a tuple of child nodes; for OR nodes ``weights`` is a
    parallel tuple of edge probabilities, otherwise it is empty.  ``key`` is a
    canonical structural digest: two structurally identical subgraphs always
    carry equal keys, which is what the store interns on.
    """

    __slots__ = ("kind", "var", "value", "children", "weights", "key", "omega")

    def __init__(self, kind, var, value, children, weights, key, omega):
        self.kind = kind
        self.var = var
        self.value = value
        self.children = children
        self.weights = weights
        self.key = key
        self.omega = omega

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, Node) and self.key == other.key

    @property
    def is_empty_and(self) -> bool:
        return self.kind == AND and not self.children

    def edges(self) -> Iterator[Tuple[float, "Node"]]:
        """Yield (weight, child) pairs; AND edges carry an implicit weight 1."""
        if self.kind == OR:
            yield from zip(self.weights, self.children)
        else:
            for child in self.children:
                yield 1.0, child

    def __repr__(self) -> str:
        if self.kind == LIT:
            return f"Lit({self.var}={self.value})"
        if self.kind == AND:
            return f"And({len(self.children)} children)"
        return f"Or({len(self.children)} children)"


def _digest(payload: str) -> str:
    return hashlib.blake2b(payload.encode(), digest_size=16).hexdigest()


class Store:
    """Append-only interning table for :class:`Node` objects.

    Construction validates the structural invariants (AND disjointness, OR
    subspace equality, positive weights) and returns the canonical node for a
    given structure, so identical subgraphs are physically shared.
    """

    def __init__(self) -> None:
        self._nodes: Dict[str, Node] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    def _intern(self, node: Node) -> Node:
        return self._nodes.setdefault(node.key, node)

    def make_lit(self, var: int, value: int) -> Node:
        """Intern the literal node ``var = value``."""
        key = _digest(f"L|{var}|{value}")
        node = self._nodes.get(key)
        if node is None:
            node = self._intern(
                Node(LIT, var, value, (), (), key, frozenset((var,)))
            )
        return node

    def make_and(self, children: Iterable[Node]) -> Node:
        """Intern the Cartesian product of ``children``.

        Empty-AND children (the identity substate) are dropped; a singleton
        collapses to the child itself; an empty input yields the canonical
        empty-AND node with unit mass and no variables.
        """
        kept = [c for c in children if not c.is_empty_and]
        if len(kept) == 1:
            return kept[0]
        omega: frozenset = frozenset()
        total = 0
        for c in kept:
            omega = omega | c.omega
            total += len(c.omega)
        if len(omega) != total:
            seen: set = set()
            for c in kept:
                clash = seen & c.omega
                if clash:
                    raise OverlappingSubspaces(
                        f"AND children share variables {sorted(clash)}"
                    )
                seen |= c.omega
        kept.sort(key=lambda c: c.key)
        key = _digest("A|" + "|".join(c.key for c in kept))
        node = self._nodes.get(key)
        if node is None:
            node = self._intern(Node(AND, None, None, tuple(kept), (), key, omega))
        return node

    def empty_and(self) -> Node:
        """The identity substate: unit mass over no variables."""
        return self.make_and(())

    def make_or(self, children: Iterable[Tuple[float, Node]]) -> Node:
        """Intern the weighted union of ``children``.

        Duplicate child nodes are merged by summing their weights.  A single
        child with weight 1 collapses to the child itself.  Children must all
        range over the same variable set and weights must be positive.
        """
        merged: Dict[str, Tuple[float, Node]] = {}
        for w, c in children:
            if w <= 0:
                raise AobsError(f"OR edge weight must be positive, got {w}")
            prev = merged.get(c.key)
            merged[c.key] = (prev[0] + w if prev else w, c)
        if not merged:
            raise AobsError("OR node requires at least one child")
        pairs = sorted(merged.values(), key=lambda wc: wc[1].key)
        omega = pairs[0][1].omega
        for _, c in pairs[1:]:
            if c.omega != omega:
                raise MismatchedSubspaces(
                    f"OR children range over {sorted(omega)} vs {sorted(c.omega)}"
                )
        if len(pairs) == 1 and abs(pairs[0][0] - 1.0) <= EPS_P:
            return pairs[0][1]
        key = _digest(
            "O|" + "|".join(f"{w:.{WEIGHT_DIGITS}f}:{c.key}" for w, c in pairs)
        )
        node = self._nodes.get(key)
        if node is None:
            weights = tuple(w for w, _ in pairs)
            kids = tuple(c for _, c in pairs)
            node = self._intern(Node(OR, None, None, kids, weights, key, omega))
        return node

    def reintern(self, node: Node) -> Node:
        """Copy a node (and its subgraph) from another store into this one."""
        memo: Dict[str, Node] = {}

        def rec(n: Node) -> Node:
            got = memo.get(n.key)
            if got is not None:
                return got
            if n.kind == LIT:
                out = self.make_lit(n.var, n.value)
            elif n.kind == AND:
                out = self.make_and([rec(c) for c in n.children])
            else:
                out = self.make_or([(w, rec(c)) for w, c in n.edges()])
            memo[n.key] = out
            return out

        return rec(node)


def var_subspace(n: Node) -> frozenset:
    """The variable set the node's substate ranges over (computed at interning)."""
    return n.omega


def iter_nodes(root: Node) -> Iterator[Node]:
    """Depth-first traversal over the unique nodes reachable from ``root``."""
    seen = {root.key}
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        for child in node.children:
            if child.key not in seen:
                seen.add(child.key)
                stack.append(child)


def count_states(n: Node) -> int:
    """Number of (probability, state) rows a full expansion would produce.

    Duplicates are counted exactly as :func:`enumerate_states` would emit them.
    """
    memo: Dict[str, int] = {}

    def rec(node: Node) -> int:
        got = memo.get(node.key)
        if got is not None:
            return got
        if node.kind == LIT:
            out = 1
        elif node.kind == AND:
            out = 1
            for c in node.children:
                out *= rec(c)
        else:
            out = sum(rec(c) for c in node.children)
        memo[node.key] = out
        return out

    return rec(n)


def _merge_assign(a: StateTuple, b: StateTuple) -> StateTuple:
    return tuple(sorted(a + b))


def enumerate_states(
    n: Node, cap: int = 10**6, merge: bool = False
) -> List[Tuple[float, StateTuple]]:
    """Expand a node into its plain (probability, partial state) collection.

    OR nodes scale child collections by their edge weights; AND nodes take
    Cartesian products, multiplying probabilities and merging assignments.
    Duplicate states are kept as-is unless ``merge`` is set (merging early is
    equivalent to merging the final table and keeps intermediates small).
    """
    memo: Dict[str, List[Tuple[float, StateTuple]]] = {}

    def check(size: int) -> None:
        if size > cap:
            raise ExpansionTooLarge(f"expansion exceeds cap of {cap} rows")

    def rec(node: Node) -> List[Tuple[float, StateTuple]]:
        got = memo.get(node.key)
        if got is not None:
            return got
        rows: List[Tuple[float, StateTuple]]
        if node.kind == LIT:
            rows = [(1.0, ((node.var, node.value),))]
        elif node.kind == AND:
            rows = [(1.0, ())]
            for c in node.children:
                sub = rec(c)
                check(len(rows) * len(sub))
                rows = [
                    (p * q, _merge_assign(s, t)) for p, s in rows for q, t in sub
                ]
                if merge:
                    rows = _merge_rows(rows)
        else:
            rows = []
            for w, c in node.edges():
                sub = rec(c)
                check(len(rows) + len(sub))
                rows.extend((w * p, s) for p, s in sub)
            if merge:
                rows = _merge_rows(rows)
        memo[node.key] = rows
        return rows

    return list(rec(n))


def _merge_rows(
    rows: Iterable[Tuple[float, StateTuple]]
) -> List[Tuple[float, StateTuple]]:
    acc: Dict[StateTuple, float] = {}
    for p, s in rows:
        acc[s] = acc.get(s, 0.0) + p
    return [(p, s) for s, p in acc.items()]


@dataclass
class Aobs:
    """A belief state: a root node plus its store and variable universe."""

    root: Node
    store: Store
    universe: Tuple[int, ...]
    var_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.root.omega != frozenset(self.universe):
            raise MismatchedUniverse(
                f"root ranges over {sorted(self.root.omega)}, "
                f"universe is {sorted(self.universe)}"
            )

    def name_of(self, var: int) -> str:
        if self.var_names is not None:
            return self.var_names[var]
        return f"v{var}"


def size_metric(g: Aobs) -> int:
    """The graph size |E| + N_and + N_or + 2 * N_lit over unique reachable nodes.

    An OR edge counts once per (parent, position); shared subgraphs are never
    counted twice.
    """
    edges = 0
    n_and = n_or = n_lit = 0
    for node in iter_nodes(g.root):
        if node.kind == LIT:
            n_lit += 1
        elif node.kind == AND:
            n_and += 1
            edges += len(node.children)
        else:
            n_or += 1
            edges += len(node.children)
    return edges + n_and + n_or + 2 * n_lit


def from_physical_state(
    store: Store,
    assignments: Mapping[int, int],
    universe: Sequence[int],
    var_names: Optional[Sequence[str]] = None,
) -> Aobs:
    """Build a unit-mass belief state from a total variable assignment."""
    missing = set(universe) - set(assignments)
    if missing:
        raise PartialAssignment(f"missing variables {sorted(missing)}")
    extra = set(assignments) - set(universe)
    if extra:
        raise UnknownVariable(f"unknown variables {sorted(extra)}")
    root = store.make_and(
        [store.make_lit(v, assignments[v]) for v in universe]
    )
    if not universe:
        root = store.empty_and()
    return Aobs(root, store, tuple(universe),
                tuple(var_names) if var_names is not None else None)


def union_roots(a: Aobs, b: Aobs, w: float) -> Aobs:
    """Weighted union of two belief states over the same universe.

    The result may represent some physical states twice; that does not affect
    inference.
    """
    if tuple(a.universe) != tuple(b.universe):
        raise MismatchedUniverse(
            f"universes differ: {a.universe} vs {b.universe}"
        )
    if not 0.0 < w < 1.0:
        raise AobsError(f"union weight must be in (0, 1), got {w}")
    other = b.root if b.store is a.store else a.store.reintern(b.root)
    root = a.store.make_or([(w, a.root), (1.0 - w, other)])
    return Aobs(root, a.store, a.universe, a.var_names)


def from_tabular(
    store: Store,
    rows: Sequence[Tuple[float, Mapping[int, int]]],
    universe: Sequence[int],
    var_names: Optional[Sequence[str]] = None,
) -> Aobs:
    """Build a belief state as a chain of unions of single physical states.

    The result is correct but not minimal; building a minimal graph from a
    tabular state is out of scope.  Pass the result through the greedy
    optimizer to recover sharing.
    """
    if not rows:
        raise AobsError("tabular belief state needs at least one row")
    total = sum(p for p, _ in rows)
    if abs(total - 1.0) > 1e-6:
        raise AobsError(f"tabular probabilities sum to {total}, expected 1")
    acc = from_physical_state(store, rows[0][1], universe, var_names)
    mass = rows[0][0]
    for p, state in rows[1:]:
        nxt = from_physical_state(store, state, universe, var_names)
        acc = union_roots(acc, nxt, mass / (mass + p))
        mass += p
    return acc
