"""Hypothesis strategies and brute-force oracles shared across tests."""

from __future__ import annotations

from itertools import combinations, product

from hypothesis import strategies as st

from boxchrom.graphs import Graph
from boxchrom.smallgraphs import random_connected_graph, random_graph


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 8, connected: bool = False):
    """Seeded random graphs; shrinking moves through sizes and seeds."""
    n = draw(st.integers(min_n, max_n))
    p = draw(st.sampled_from([0.2, 0.35, 0.5, 0.7]))
    seed = draw(st.integers(0, 2**20))
    if connected:
        return random_connected_graph(n, p, seed)
    return random_graph(n, p, seed)


def mono_degree_ok(g: Graph, colours: tuple[int, ...], d: int) -> bool:
    """Direct definition of d-improper, independent of the library checker."""
    for v in range(g.n):
        same = sum(1 for u in g.neighbours(v) if colours[u] == colours[v])
        if same > d:
            return False
    return True


def component_sizes_ok(g: Graph, colours: tuple[int, ...], t: int) -> bool:
    """Direct definition of t-clustered via DFS over same-colour edges."""
    seen = [False] * g.n
    for start in range(g.n):
        if seen[start]:
            continue
        stack, members = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            members.append(v)
            for u in g.neighbours(v):
                if not seen[u] and colours[u] == colours[v]:
                    seen[u] = True
                    stack.append(u)
        if len(members) > t:
            return False
    return True


def brute_min_colours(g: Graph, valid) -> int:
    """Smallest k admitting an assignment accepted by ``valid``; exponential."""
    if g.n == 0:
        return 0
    for k in range(1, g.n + 1):
        for assignment in product(range(1, k + 1), repeat=g.n):
            if len(set(assignment)) == k and valid(assignment):
                return k
    raise AssertionError("no colouring found")


def brute_chromatic_improper(g: Graph, d: int) -> int:
    return brute_min_colours(g, lambda cs: mono_degree_ok(g, cs, d))


def brute_chromatic_clustered(g: Graph, t: int) -> int:
    return brute_min_colours(g, lambda cs: component_sizes_ok(g, cs, t))


def brute_alpha_d(g: Graph, d: int) -> int:
    best = 0
    for size in range(g.n, 0, -1):
        for subset in combinations(range(g.n), size):
            chosen = set(subset)
            if all(
                sum(1 for u in g.neighbours(v) if u in chosen) <= d for v in subset
            ):
                return size
    return best


def brute_clique(g: Graph) -> int:
    for size in range(g.n, 1, -1):
        for subset in combinations(range(g.n), size):
            if all(g.adjacent(u, v) for u, v in combinations(subset, 2)):
                return size
    return 1 if g.n else 0
