"""Node construction, interning, semantics, and size metric."""
import random

import pytest

from aobs.core import (
    AND,
    LIT,
    OR,
    Aobs,
    AobsError,
    MismatchedUniverse,
    OverlappingSubspaces,
    MismatchedSubspaces,
    PartialAssignment,
    ExpansionTooLarge,
    Store,
    count_states,
    enumerate_states,
    from_physical_state,
    from_tabular,
    iter_nodes,
    size_metric,
    union_roots,
    var_subspace,
)
from aobs.oracle import tab_canonical, tab_equal

from conftest import enum_canonical, random_aobs, random_tabular

FOUR_ROW_TABLE = [
    (0.28, ((0, 0), (1, 0), (2, 0))),
    (0.12, ((0, 0), (1, 0), (2, 1))),
    (0.42, ((0, 0), (1, 1), (2, 0))),
    (0.18, ((0, 0), (1, 1), (2, 1))),
]


class TestMakeLit:
    def test_leaf(self, store):
        n = store.make_lit(0, 0)
        assert n.kind == LIT and n.var == 0 and n.value == 0
        assert enumerate_states(n) == [(1.0, ((0, 0),))]

    def test_interning_idempotent(self, store):
        assert store.make_lit(0, 0) is store.make_lit(0, 0)

    def test_subspace(self, store):
        assert var_subspace(store.make_lit(2, 1)) == frozenset({2})


class TestMakeAnd:
    def test_three_variable_root(self, three_var_state):
        assert three_var_state.root.kind == AND
        assert len(three_var_state.root.children) == 3
        assert var_subspace(three_var_state.root) == frozenset({0, 1, 2})

    def test_singleton_collapse(self, store):
        lit = store.make_lit(0, 0)
        assert store.make_and([lit]) is lit

    def test_overlap_rejected(self, store):
        with pytest.raises(OverlappingSubspaces):
            store.make_and([store.make_lit(0, 0), store.make_lit(0, 1)])

    def test_empty_and_identity(self, store):
        e = store.empty_and()
        assert e.is_empty_and and var_subspace(e) == frozenset()
        assert enumerate_states(e) == [(1.0, ())]
        # identity element: dropped from products
        lit = store.make_lit(0, 0)
        assert store.make_and([lit, e]) is lit

    def test_child_order_irrelevant(self, store):
        a, b = store.make_lit(0, 0), store.make_lit(1, 1)
        assert store.make_and([a, b]) is store.make_and([b, a])


class TestMakeOr:
    def test_two_values(self, store):
        n = store.make_or([(0.4, store.make_lit(1, 0)),
                           (0.6, store.make_lit(1, 1))])
        assert n.kind == OR
        assert abs(sum(n.weights) - 1.0) < 1e-12

    def test_singleton_weight_one_collapse(self, store):
        lit = store.make_lit(0, 0)
        assert store.make_or([(1.0, lit)]) is lit

    def test_duplicate_children_merged(self, store):
        lit = store.make_lit(0, 0)
        other = store.make_lit(0, 1)
        n = store.make_or([(0.3, lit), (0.2, lit), (0.5, other)])
        merged = {c.key: w for w, c in n.edges()}
        assert abs(merged[lit.key] - 0.5) < 1e-12

    def test_subspace_mismatch_rejected(self, store):
        with pytest.raises(MismatchedSubspaces):
            store.make_or([(0.5, store.make_lit(0, 0)),
                           (0.5, store.make_lit(1, 0))])

    def test_nonpositive_weight_rejected(self, store):
        with pytest.raises(AobsError):
            store.make_or([(0.0, store.make_lit(0, 0))])


class TestVarSubspace:
    def test_root(self, three_var_state):
        assert var_subspace(three_var_state.root) == frozenset({0, 1, 2})

    def test_or_child(self, three_var_state):
        ors = [n for n in iter_nodes(three_var_state.root) if n.kind == OR]
        assert {var_subspace(n) for n in ors} == {
            frozenset({1}), frozenset({2})
        }


class TestEnumerateStates:
    def test_four_rows(self, three_var_state):
        assert tab_equal(enum_canonical(three_var_state), FOUR_ROW_TABLE)

    def test_two_var_three_rows(self, two_var_left):
        expected = [(0.2, ((0, 0), (1, 0))),
                    (0.3, ((0, 0), (1, 1))),
                    (0.5, ((0, 1), (1, 1)))]
        assert tab_equal(enum_canonical(two_var_left), expected)

    def test_duplicates_kept_without_merge(self, store):
        lit = store.make_lit(0, 0)
        dup = store.make_or([(0.5, store.make_and([lit, store.make_lit(1, 0)])),
                             (0.5, store.make_and([store.make_lit(1, 0), lit]))])
        # both branches intern to the same AND, merged at construction already
        assert len(enumerate_states(dup)) == 1

    def test_cap(self, three_var_state):
        with pytest.raises(ExpansionTooLarge):
            enumerate_states(three_var_state.root, cap=2)


class TestCountStates:
    def test_four(self, three_var_state):
        assert count_states(three_var_state.root) == 4

    def test_lit(self, store):
        assert count_states(store.make_lit(0, 0)) == 1

    def test_factored_two_rows(self, store):
        root = store.make_and([
            store.make_lit(0, 0),
            store.make_lit(1, 2),
            store.make_or([(0.7, store.make_lit(2, 1)),
                           (0.3, store.make_lit(2, 0))]),
        ])
        assert count_states(root) == 2

    def test_matches_enumeration(self):
        rng = random.Random(7)
        for _ in range(30):
            s, _ = random_aobs(rng)
            assert count_states(s.root) == len(enumerate_states(s.root))


def _walk_size(g):
    """Independent size computation by explicit node and edge walk."""
    nodes = list(iter_nodes(g.root))
    edges = sum(len(n.children) for n in nodes)
    lits = sum(1 for n in nodes if n.kind == LIT)
    internal = len(nodes) - lits
    return edges + internal + 2 * lits


class TestSizeMetric:
    def test_three_var_graph_is_20(self, three_var_state):
        # 1 AND + 2 OR + 5 LIT + 7 edges -> 7 + 3 + 10
        assert size_metric(three_var_state) == 20

    def test_single_lit(self, store):
        g = Aobs(store.make_lit(0, 5), store, (0,))
        assert size_metric(g) == 2

    def test_matches_structural_walk(self, store):
        root = store.make_and([
            store.make_lit(0, 0),
            store.make_or([
                (0.7, store.make_and([store.make_lit(1, 2),
                                      store.make_lit(2, 1)])),
                (0.3, store.make_and([store.make_lit(1, 2),
                                      store.make_lit(2, 0)])),
            ]),
        ])
        g = Aobs(root, store, (0, 1, 2))
        assert size_metric(g) == _walk_size(g)

    def test_shared_subgraphs_counted_once(self):
        rng = random.Random(11)
        for _ in range(30):
            s, _ = random_aobs(rng)
            assert size_metric(s) == _walk_size(s)


class TestUnionRoots:
    def test_self_union_preserves_mass(self, three_var_state):
        u = union_roots(three_var_state, three_var_state, 0.5)
        assert tab_equal(enum_canonical(u), enum_canonical(three_var_state))

    def test_equivalent_representations(self, two_var_left, two_var_right):
        u = union_roots(two_var_left, two_var_right, 0.5)
        assert tab_equal(enum_canonical(u), enum_canonical(two_var_left))

    def test_universe_mismatch(self, store):
        a = from_physical_state(store, {0: 0, 1: 0}, [0, 1])
        b = from_physical_state(store, {0: 0, 2: 0}, [0, 2])
        with pytest.raises(MismatchedUniverse):
            union_roots(a, b, 0.5)

    def test_weight_range(self, three_var_state):
        with pytest.raises(AobsError):
            union_roots(three_var_state, three_var_state, 1.0)

    def test_cross_store(self, three_var_state):
        other = Store()
        b = from_tabular(other, [(1.0, {0: 0, 1: 1, 2: 0})], (0, 1, 2))
        u = union_roots(three_var_state, b, 0.9)
        assert abs(sum(p for p, _ in enum_canonical(u)) - 1.0) < 1e-9


class TestFromPhysicalState:
    def test_star_of_lits(self, store):
        g = from_physical_state(store, {0: 0, 1: 0, 2: 0}, [0, 1, 2])
        assert g.root.kind == AND and count_states(g.root) == 1

    def test_enumeration(self, store):
        g = from_physical_state(store, {0: 0, 1: 0, 2: 0}, [0, 1, 2])
        assert enum_canonical(g) == [(1.0, ((0, 0), (1, 0), (2, 0)))]

    def test_partial_rejected(self, store):
        with pytest.raises(PartialAssignment):
            from_physical_state(store, {0: 0, 1: 0}, [0, 1, 2])


class TestHashConsing:
    def test_reintern_reproduces_keys(self):
        rng = random.Random(3)
        for _ in range(20):
            s, _ = random_aobs(rng)
            fresh = Store()
            assert fresh.reintern(s.root).key == s.root.key

    def test_structural_rebuild_same_ref(self, three_var_state):
        store = three_var_state.store

        def rebuild(n):
            if n.kind == LIT:
                return store.make_lit(n.var, n.value)
            if n.kind == AND:
                return store.make_and([rebuild(c) for c in n.children])
            return store.make_or([(w, rebuild(c)) for w, c in n.edges()])

        assert rebuild(three_var_state.root) is three_var_state.root


class TestTabularRoundTrip:
    def test_mass_one(self):
        rng = random.Random(5)
        for _ in range(40):
            s, rows = random_aobs(rng)
            got = enum_canonical(s)
            assert abs(sum(p for p, _ in got) - 1.0) < 1e-9
            expected = tab_canonical([
                (p, tuple(sorted(a.items()))) for p, a in rows
            ])
            assert tab_equal(got, expected)

    def test_empty_rejected(self, store):
        with pytest.raises(AobsError):
            from_tabular(store, [], (0,))

    def test_mass_checked(self, store):
        with pytest.raises(AobsError):
            from_tabular(store, [(0.5, {0: 0})], (0,))
