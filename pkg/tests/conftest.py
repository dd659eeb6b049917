import pytest

from aobs.core import AND, OR, Aobs, Store, enumerate_states, from_tabular, iter_nodes
from aobs.oracle import tab_canonical


@pytest.fixture
def store():
    return Store()


@pytest.fixture
def three_var_state(store):
    """The three-variable example state: a=0, P(b=1)=0.6, P(c=0)=0.7."""
    a = store.make_lit(0, 0)
    or_b = store.make_or([(0.4, store.make_lit(1, 0)),
                          (0.6, store.make_lit(1, 1))])
    or_c = store.make_or([(0.7, store.make_lit(2, 0)),
                          (0.3, store.make_lit(2, 1))])
    root = store.make_and([a, or_b, or_c])
    return Aobs(root, store, (0, 1, 2), ("a", "b", "c"))


@pytest.fixture
def two_row_state(store):
    """Two-state belief over X, Y, Z: 0.4 (0,0,0) + 0.6 (0,1,0)."""
    return from_tabular(
        store,
        [(0.4, {0: 0, 1: 0, 2: 0}), (0.6, {0: 0, 1: 1, 2: 0})],
        (0, 1, 2),
        ("X", "Y", "Z"),
    )


@pytest.fixture
def two_var_left(store):
    """Two-variable state 0.2 (0,0) + 0.3 (0,1) + 0.5 (1,1), factored on a=0."""
    left = store.make_and([
        store.make_lit(0, 0),
        store.make_or([(0.4, store.make_lit(1, 0)),
                       (0.6, store.make_lit(1, 1))]),
    ])
    right = store.make_and([store.make_lit(0, 1), store.make_lit(1, 1)])
    root = store.make_or([(0.5, left), (0.5, right)])
    return Aobs(root, store, (0, 1), ("a", "b"))


@pytest.fixture
def two_var_right(store):
    """The same distribution as two_var_left, factored on b=1 instead."""
    left = store.make_and([store.make_lit(0, 0), store.make_lit(1, 0)])
    right = store.make_and([
        store.make_or([(0.375, store.make_lit(0, 0)),
                       (0.625, store.make_lit(0, 1))]),
        store.make_lit(1, 1),
    ])
    root = store.make_or([(0.2, left), (0.8, right)])
    return Aobs(root, store, (0, 1), ("a", "b"))


def enum_canonical(s):
    """Canonical tabular expansion of a belief state."""
    return tab_canonical(enumerate_states(s.root, merge=True))


def total_mass(s):
    return sum(p for p, _ in enumerate_states(s.root, merge=True))


def assert_normal_form(s, eps=1e-9):
    """No AND under AND, no OR under OR, every OR's weights sum to 1."""
    for node in iter_nodes(s.root):
        if node.kind == AND:
            assert all(ch.kind != AND for ch in node.children), \
                "AND node has an AND child"
        elif node.kind == OR:
            assert all(ch.kind != OR for ch in node.children), \
                "OR node has an OR child"
            assert abs(sum(node.weights) - 1.0) <= eps, \
                f"OR weights sum to {sum(node.weights)}"


def random_tabular(rng, num_vars, num_values, num_rows):
    """Random canonical tabular belief state with the given bounds."""
    states = set()
    while len(states) < num_rows:
        states.add(tuple(rng.randrange(num_values) for _ in range(num_vars)))
    raw = [rng.random() + 0.05 for _ in states]
    total = sum(raw)
    return [
        (p / total, {v: u for v, u in enumerate(values)})
        for p, values in zip(raw, sorted(states))
    ]


def random_aobs(rng, num_vars=4, num_values=3, max_rows=6):
    """Random belief state built as a union chain over random tabular rows."""
    store = Store()
    rows = random_tabular(rng, num_vars, num_values, rng.randint(1, max_rows))
    return from_tabular(store, rows, tuple(range(num_vars))), rows
