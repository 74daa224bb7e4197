"""Random graph builders and the two hand-checked micro networks."""

import numpy as np
from hypothesis import strategies as st

from mlndecouple import LayerGraph, build_mln

# M1: x = star at 0, y = path 0-1-2; OR degrees [3, 2, 2, 1]
M1_X = [(0, 1), (0, 2), (0, 3)]
M1_Y = [(0, 1), (1, 2)]
# M2: x = path 0-1-2-3, y = star at 1; AND = {0-1, 1-2}
M2_X = [(0, 1), (1, 2), (2, 3)]
M2_Y = [(0, 1), (1, 2), (1, 3)]


def m1():
    return LayerGraph.from_edges(4, M1_X), LayerGraph.from_edges(4, M1_Y)


def m2():
    return LayerGraph.from_edges(4, M2_X), LayerGraph.from_edges(4, M2_Y)


def random_layer(rng, n, density=None):
    if n < 2:
        return LayerGraph.empty(n)
    p = rng.uniform(0.0, 0.3) if density is None else density
    m = rng.binomial(n * (n - 1) // 2, p)
    return LayerGraph.from_edges(n, rng.integers(0, n, size=(m, 2)))


def random_pair(rng, n_max, n_min=1):
    """Two layers over one vertex set; sometimes overlapping, sometimes nested."""
    n = int(rng.integers(n_min, n_max + 1))
    x = random_layer(rng, n)
    style = rng.integers(3)
    if style == 0:
        y = random_layer(rng, n)
    else:
        # share part of x so AND is not trivially empty
        keep = x.edges()[rng.random(x.edge_count) < rng.uniform(0.3, 1.0)]
        y = LayerGraph.from_edges(n, np.vstack([keep, random_layer(rng, n, rng.uniform(0, 0.1)).edges()]))
    return x, y


def random_mln(rng, n_max, n_min=1):
    x, y = random_pair(rng, n_max, n_min)
    return build_mln([("L1", x), ("L2", y)])


def random_connected(rng, n_min=5, n_max=200):
    n = int(rng.integers(n_min, n_max + 1))
    perm = rng.permutation(n)
    tree = [(perm[i], perm[rng.integers(0, i)]) for i in range(1, n)]
    extra = rng.integers(0, n, size=(int(rng.integers(0, 3 * n)), 2))
    return LayerGraph.from_edges(n, np.vstack([np.array(tree).reshape(-1, 2), extra]))


@st.composite
def layer_pairs(draw, max_n=25):
    n = draw(st.integers(1, max_n))
    edge = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    ex = draw(st.lists(edge, max_size=3 * n))
    ey = draw(st.lists(edge, max_size=3 * n))
    shared = draw(st.lists(st.sampled_from(ex), max_size=len(ex))) if ex else []
    return LayerGraph.from_edges(n, ex), LayerGraph.from_edges(n, ey + shared)
