import random

import pytest
from hypothesis import strategies as st

from menuadapt.menu import build_tree, make_distribution
from menuadapt.scenarios import load_walkthrough
from menuadapt.simulation import CostParams

SCENARIO1 = CostParams(100, 2500, 500)
SCENARIO2 = CostParams(100, 500, 2500)

WALKTHROUGH_P = {
    "Reality": 0.073, "Comedy": 0.024, "Drama": 0.098, "Top 50": 0.024,
    "New": 0.024, "Classics": 0.122, "News": 0.11, "Charts": 0.085,
    "Retro": 0.122, "Jazz": 0.073, "Electronic": 0.22, "Rock": 0.025,
}


@pytest.fixture(scope="session")
def bundle():
    return load_walkthrough()


@pytest.fixture(scope="session")
def tree(bundle):
    return bundle.menu


@pytest.fixture(scope="session")
def dist(bundle):
    return bundle.dist


def tree_from_parents(parents):
    """parents[i] is the parent index of node i+1 (must be <= i); node 0 is the root."""
    docs = [{"label": "n0", "children": []}]
    for i, par in enumerate(parents, start=1):
        doc = {"label": f"n{i}", "children": []}
        docs.append(doc)
        docs[par]["children"].append(doc)
    return build_tree(docs[0])


def random_tree(rng: random.Random, max_nodes: int = 50):
    n = rng.randint(2, max_nodes)
    return tree_from_parents([rng.randrange(i) for i in range(1, n)])


def random_dist(rng: random.Random, tree):
    weights = {leaf: rng.random() for leaf in tree.leaves}
    return make_distribution(tree, weights, renormalize=True)


def random_costs(rng: random.Random, low: float = 0.0, high: float = 5000.0):
    return CostParams(rng.uniform(low, high), rng.uniform(low, high), rng.uniform(low, high))


@st.composite
def trees(draw, max_nodes=30):
    n = draw(st.integers(min_value=2, max_value=max_nodes))
    parents = [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, n)]
    return tree_from_parents(parents)


costs_st = st.builds(
    CostParams,
    st.floats(0, 5000, allow_nan=False),
    st.floats(0, 5000, allow_nan=False),
    st.floats(0, 5000, allow_nan=False),
)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
