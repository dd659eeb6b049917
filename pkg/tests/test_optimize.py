"""Greedy factoring of shared AND children and OR factoring candidates."""
import random

import pytest

from aobs.core import AND, Aobs, iter_nodes, size_metric
from aobs.oracle import tab_equal
from aobs.optimize import greedy_optimize, or_factor_candidates

from conftest import enum_canonical, random_aobs


def _two_ands(store, values_a, values_b):
    """An OR over two ANDs of literals with the given per-variable values."""
    mk = lambda vals: store.make_and(
        [store.make_lit(v, u) for v, u in enumerate(vals)]
    )
    root = store.make_or([(0.5, mk(values_a)), (0.5, mk(values_b))])
    return Aobs(root, store, tuple(range(len(values_a))))


class TestGreedyOptimize:
    def test_shared_pair_extracted_at_low_threshold(self, store):
        # ANDs {a=0,b=0,c=0} and {a=0,b=0,c=1} share two children
        s = _two_ands(store, (0, 0, 0), (0, 0, 1))
        out = greedy_optimize(s, threshold=1)
        shared = [
            n for n in iter_nodes(out.root)
            if n.kind == AND and n.omega == frozenset({0, 1})
        ]
        assert len(shared) == 1
        parents = [
            n for n in iter_nodes(out.root)
            if n.kind == AND and shared[0] in n.children
        ]
        assert len(parents) == 2
        assert tab_equal(enum_canonical(out), enum_canonical(s))

    def test_triple_extracted_at_default_threshold(self, store):
        s = _two_ands(store, (0, 0, 0, 0), (0, 0, 0, 1))
        before = size_metric(s)
        out = greedy_optimize(s)
        assert tab_equal(enum_canonical(out), enum_canonical(s))
        shared = [
            n for n in iter_nodes(out.root)
            if n.kind == AND and n.omega == frozenset({0, 1, 2})
        ]
        assert len(shared) == 1
        assert size_metric(out) <= before

    def test_no_shared_children_unchanged(self, store):
        s = _two_ands(store, (0, 0), (1, 1))
        assert greedy_optimize(s).root is s.root

    def test_small_intersection_below_default_threshold(self, store):
        s = _two_ands(store, (0, 0, 0), (0, 0, 1))
        assert greedy_optimize(s).root is s.root

    def test_threshold_validation(self, three_var_state):
        with pytest.raises(ValueError):
            greedy_optimize(three_var_state, threshold=0)

    def test_never_grows_and_preserves_semantics(self):
        rng = random.Random(43)
        for _ in range(60):
            s, _ = random_aobs(rng, num_vars=5, max_rows=8)
            out = greedy_optimize(s)
            assert size_metric(out) <= size_metric(s)
            assert tab_equal(enum_canonical(out), enum_canonical(s))


class TestOrFactorCandidates:
    def test_proportional_weights_reported(self, store):
        x, y, z = (store.make_lit(0, u) for u in range(3))
        a = store.make_or([(0.2, x), (0.3, y), (0.5, z)])
        b = store.make_or([(0.4, x), (0.6, y)])
        root = store.make_and([
            store.make_or([(0.5, store.make_and([a, store.make_lit(1, 0)]),),
                           (0.5, store.make_and([b, store.make_lit(1, 1)]),)]),
        ])
        s = Aobs(root, store, (0, 1))
        cands = or_factor_candidates(s)
        pairs = [
            frozenset(n.key for n in pair) for pair, _ in cands
        ]
        assert frozenset({a.key, b.key}) in pairs
        common = dict(
            (frozenset(n.key for n in pair), shared) for pair, shared in cands
        )[frozenset({a.key, b.key})]
        assert {n.key for n in common} == {x.key, y.key}

    def test_disproportional_weights_skipped(self, store):
        x, y = store.make_lit(0, 0), store.make_lit(0, 1)
        a = store.make_or([(0.2, x), (0.8, y)])
        b = store.make_or([(0.5, x), (0.5, y)])
        root = store.make_or([(0.5, store.make_and([a, store.make_lit(1, 0)])),
                              (0.5, store.make_and([b, store.make_lit(1, 1)]))])
        s = Aobs(root, store, (0, 1))
        assert or_factor_candidates(s) == []

    def test_single_or_no_candidates(self, three_var_state):
        # two OR nodes exist but share no children
        assert or_factor_candidates(three_var_state) == []
