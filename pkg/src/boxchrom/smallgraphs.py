"""Isomorph-free generation of small graphs, canonical forms, random graphs.

Canonical labelling uses colour refinement to split vertices into invariant
classes, then a backtracking search for the class-respecting labelling whose
upper-triangle bitstring is smallest.  That is enough to dedupe exhaustive
augmentation up to the supported cap of 8 vertices; it is not a general
isomorphism engine.
"""

from __future__ import annotations

import random

from .graphs import Graph, emit_graph6

__all__ = [
    "GENERATION_CAP",
    "all_graphs",
    "canonical_certificate",
    "canonical_form",
    "connected_graphs",
    "random_connected_graph",
    "random_graph",
]

GENERATION_CAP = 8


def _refinement_classes(g: Graph) -> list[list[int]]:
    """Stable colour-refinement partition, classes in canonical signature order."""
    n = g.n
    colour = [0] * n
    for _ in range(max(n, 1)):
        sig = [
            (colour[v], tuple(sorted(colour[u] for u in g.neighbours(v))))
            for v in range(n)
        ]
        rank = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [rank[sig[v]] for v in range(n)]
        if new == colour:
            break
        colour = new
    classes: dict[int, list[int]] = {}
    for v in range(n):
        classes.setdefault(colour[v], []).append(v)
    return [classes[c] for c in sorted(classes)]


def _canonical_perm(g: Graph) -> list[int]:
    """Class-respecting vertex order minimizing the column-major triangle bits."""
    n = g.n
    if n == 0:
        return []
    blocks = _refinement_classes(g)
    pos_block: list[int] = []
    for bi, block in enumerate(blocks):
        pos_block.extend([bi] * len(block))
    best_perm: list[int] | None = None
    best_cols: list[tuple[int, ...]] = []
    perm: list[int] = []
    used = [False] * n
    cols: list[tuple[int, ...]] = []

    def column(v: int) -> tuple[int, ...]:
        return tuple(1 if g.adjacent(perm[i], v) else 0 for i in range(len(perm)))

    def install_greedy() -> None:
        # extend the current prefix arbitrarily to refresh the incumbent, so
        # pruning stays active after a strictly smaller prefix is found
        nonlocal best_perm, best_cols
        saved = len(perm)
        for p in range(saved, n):
            for v in blocks[pos_block[p]]:
                if not used[v]:
                    cols.append(column(v))
                    perm.append(v)
                    used[v] = True
                    break
        best_perm = perm.copy()
        best_cols = cols.copy()
        while len(perm) > saved:
            used[perm.pop()] = False
            cols.pop()

    def rec(pos: int) -> None:
        if pos == n:
            return
        for v in blocks[pos_block[pos]]:
            if used[v]:
                continue
            col = column(v)
            if best_perm is not None:
                seg = best_cols[pos]
                if col > seg:
                    continue
                smaller = col < seg
            else:
                smaller = True
            perm.append(v)
            used[v] = True
            cols.append(col)
            if smaller:
                install_greedy()
            rec(pos + 1)
            used[perm.pop()] = False
            cols.pop()

    rec(0)
    assert best_perm is not None
    return best_perm


def canonical_form(g: Graph) -> Graph:
    """Isomorphism-invariant relabelling: equal adj tuples iff isomorphic."""
    perm = _canonical_perm(g)
    position = {v: i for i, v in enumerate(perm)}
    adj = [0] * g.n
    for u, v in g.edges():
        pu, pv = position[u], position[v]
        adj[pu] |= 1 << pv
        adj[pv] |= 1 << pu
    return Graph(g.n, tuple(adj), g.name)


def canonical_certificate(g: Graph) -> str:
    return emit_graph6(canonical_form(g))


_ALL_CACHE: dict[int, tuple[Graph, ...]] = {}


def all_graphs(n: int) -> tuple[Graph, ...]:
    """Every graph on n unlabelled vertices, one canonical copy each, n <= 8."""
    if not 1 <= n <= GENERATION_CAP:
        raise ValueError(f"exhaustive generation supports 1..{GENERATION_CAP} vertices")
    if n in _ALL_CACHE:
        return _ALL_CACHE[n]
    if n == 1:
        out: dict[str, Graph] = {"@": Graph(1, (0,))}
    else:
        out = {}
        for g in all_graphs(n - 1):
            for attach in range(1 << (n - 1)):
                adj = list(g.adj) + [attach]
                for v in range(n - 1):
                    if attach >> v & 1:
                        adj[v] |= 1 << (n - 1)
                candidate = canonical_form(Graph(n, tuple(adj)))
                out.setdefault(emit_graph6(candidate), candidate)
    result = tuple(out[key] for key in sorted(out))
    _ALL_CACHE[n] = result
    return result


def connected_graphs(n: int) -> tuple[Graph, ...]:
    return tuple(g for g in all_graphs(n) if g.is_connected())


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph with a fixed seed."""
    if n < 1:
        raise ValueError("need at least one vertex")
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability must be in [0, 1]")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_connected_graph(n: int, p: float, seed: int) -> Graph:
    """Random spanning tree plus binomial edges: connected by construction."""
    if n < 1:
        raise ValueError("need at least one vertex")
    g = random_graph(n, p, seed)
    if n == 1 or g.is_connected():
        return g
    rng = random.Random(seed ^ 0x5EED)
    edges = set(g.edges())
    if n == 2:
        edges.add((0, 1))
    else:
        # decode a uniform random Pruefer sequence into a labelled tree
        seq = [rng.randrange(n) for _ in range(n - 2)]
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        for x in seq:
            for leaf in range(n):
                if degree[leaf] == 1:
                    edges.add((min(leaf, x), max(leaf, x)))
                    degree[leaf] -= 1
                    degree[x] -= 1
                    break
        last = [v for v in range(n) if degree[v] == 1]
        edges.add((min(last), max(last)))
    return Graph.from_edges(n, sorted(edges))
