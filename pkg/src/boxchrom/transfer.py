"""Constructive descent from clustered product colourings to base colourings.

Given a colouring of the strong product of a graph with a complete graph K_t
whose monochromatic components have at most ell*t vertices, these routines
produce a colouring of the base graph with components of size at most ell,
using for each vertex only colours already present on its product fibre.
The pipeline is fully checked: every rewrite step re-validates the clustering
cap, palette containment, and a strictly decreasing potential, and the whole
run is recorded in a trace that can be replayed independently.

The engine behind the descent is an incidence structure between base vertices
and monochromatic product components.  Once that structure is acyclic, some
component touches few base vertices; colouring and deleting its footprint
shrinks the graph and the argument repeats.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .colouring import Colouring, check_clustered, mono_components
from .graphs import Graph, complete_graph, induced_subgraph, strong_product

__all__ = [
    "ComponentPick",
    "DescentResult",
    "EliminationStep",
    "Incidence",
    "MonoComponent",
    "RecolourOp",
    "TransferInvariantError",
    "TransferTrace",
    "build_incidence",
    "descend",
    "eliminate_cycles",
    "find_small_component",
    "incidence_is_acyclic",
    "replay_trace",
]


class TransferInvariantError(RuntimeError):
    """An internal invariant of the descent pipeline failed."""


@dataclass(frozen=True)
class MonoComponent:
    """One monochromatic component of the product, with its base footprint."""

    colour: int
    vertices: tuple[int, ...]  # product vertices
    cover: tuple[int, ...]  # base vertices touched


@dataclass(frozen=True)
class Incidence:
    """Bipartite structure: base vertices 0..n-1, then one node per component."""

    n_base: int
    components: tuple[MonoComponent, ...]
    adj: tuple[tuple[int, ...], ...]

    def component_node(self, idx: int) -> int:
        return self.n_base + idx


def build_incidence(g: Graph, c: Colouring, t: int) -> Incidence:
    """Component/vertex incidence of a colouring of g * K_t.

    Every fibre is a clique, so for a fixed base vertex and colour all product
    vertices of that colour sit in one component; that uniqueness is asserted
    because later cycle surgery depends on it.
    """
    if t < 1:
        raise ValueError("t must be positive")
    product = strong_product(g, complete_graph(t))
    if c.n != product.n:
        raise ValueError(f"colouring has {c.n} entries, product needs {product.n}")
    comps = []
    for colour, vertices in mono_components(product, c):
        cover = tuple(sorted({pv // t for pv in vertices}))
        comps.append(MonoComponent(colour, vertices, cover))
    adj: list[list[int]] = [[] for _ in range(g.n + len(comps))]
    seen: dict[tuple[int, int], int] = {}
    for idx, comp in enumerate(comps):
        node = g.n + idx
        for v in comp.cover:
            key = (v, comp.colour)
            if key in seen:
                raise TransferInvariantError(
                    f"base vertex {v} is covered by two components of colour {comp.colour}"
                )
            seen[key] = idx
            adj[v].append(node)
            adj[node].append(v)
    return Incidence(g.n, tuple(comps), tuple(tuple(sorted(a)) for a in adj))


def _smallest_cycle(adj: tuple[tuple[int, ...], ...]) -> list[int] | None:
    """Vertices of a shortest cycle, canonically rotated, or None if acyclic.

    BFS from every vertex; each non-tree edge closes a candidate cycle through
    the endpoints' lowest common tree ancestor.
    """
    nv = len(adj)
    best: list[int] | None = None
    for root in range(nv):
        depth = {root: 0}
        parent = {root: -1}
        order = deque([root])
        tree_edges = set()
        while order:
            x = order.popleft()
            for y in adj[x]:
                if y not in depth:
                    depth[y] = depth[x] + 1
                    parent[y] = x
                    tree_edges.add((min(x, y), max(x, y)))
                    order.append(y)
        for x in depth:
            for y in adj[x]:
                if y < x or (x, y) in tree_edges or y not in depth:
                    continue
                px = [x]
                py = [y]
                while px[-1] != py[-1]:
                    if depth[px[-1]] >= depth[py[-1]]:
                        px.append(parent[px[-1]])
                    else:
                        py.append(parent[py[-1]])
                cycle = px[:-1] + py[::-1]  # x .. lca .. y, plus closing edge y-x
                if best is None or len(cycle) < len(best):
                    best = _canonical_rotation(cycle)
    return best


def _canonical_rotation(cycle: list[int]) -> list[int]:
    k = len(cycle)
    start = cycle.index(min(cycle))
    rotated = cycle[start:] + cycle[:start]
    backwards = [rotated[0]] + rotated[1:][::-1]
    return min(rotated, backwards)


@dataclass(frozen=True)
class RecolourOp:
    """One product vertex changing colour (labels refer to the original graph)."""

    product_vertex: int
    old: int
    new: int


@dataclass(frozen=True)
class EliminationStep:
    """One cycle surgery: base vertices, component colours, and the rewrites."""

    base_vertices: tuple[int, ...]
    colours: tuple[int, ...]
    transfer_count: int
    pivot: int
    ops: tuple[RecolourOp, ...]


def _fibre_counts(c: Colouring, v: int, t: int) -> Counter:
    return Counter(c.colours[v * t : (v + 1) * t])


def eliminate_cycles(
    g: Graph,
    c: Colouring,
    t: int,
    cluster_cap: int,
    label_map: tuple[int, ...] | None = None,
) -> tuple[Colouring, tuple[EliminationStep, ...]]:
    """Rewrite c until the component/vertex incidence is acyclic.

    Each round finds a shortest incidence cycle and cyclically shifts a fixed
    number of colour copies along it, chosen so one vertex loses a colour from
    its fibre entirely.  The rewrite preserves the clustering cap and only
    ever shrinks fibre palettes; the total palette size strictly drops, which
    bounds the number of rounds.  ``label_map`` translates current vertex
    labels to original ones inside the recorded trace.
    """
    product = strong_product(g, complete_graph(t))
    if check_clustered(product, c, cluster_cap):
        raise ValueError(f"input colouring is not {cluster_cap}-clustered on the product")
    labels = label_map if label_map is not None else tuple(range(g.n))
    if len(labels) != g.n:
        raise ValueError("label map length does not match graph")
    steps: list[EliminationStep] = []
    colours = list(c.colours)
    potential = sum(len({colours[v * t + x] for x in range(t)}) for v in range(g.n))
    for _ in range(g.n * t + 1):
        cur = Colouring(tuple(colours))
        inc = build_incidence(g, cur, t)
        cycle = _smallest_cycle(inc.adj)
        if cycle is None:
            return cur, tuple(steps)
        if len(cycle) % 2 or len(cycle) < 4:
            raise TransferInvariantError(f"incidence cycle is not alternating: {cycle}")
        base = cycle[0::2]
        comp_nodes = cycle[1::2]
        if any(v >= g.n for v in base) or any(cn < g.n for cn in comp_nodes):
            raise TransferInvariantError(f"cycle does not alternate sides: {cycle}")
        k = len(base)
        a = [inc.components[cn - g.n].colour for cn in comp_nodes]
        # base[i] sits between component i-1 and component i, so both colours
        # appear on its fibre; shift count s is the smallest multiplicity of
        # a[i] at base[i], so the pivot fibre sheds colour a[pivot] completely.
        mults = [_fibre_counts(cur, base[i], t)[a[i]] for i in range(k)]
        if min(mults) < 1:
            raise TransferInvariantError("cycle colour missing from fibre")
        s = min(mults)
        pivot = mults.index(s)
        ops: list[RecolourOp] = []
        for i in range(k):
            v = base[i]
            give, receive = a[i], a[i - 1]
            moved = 0
            for x in range(t):
                if moved == s:
                    break
                if colours[v * t + x] == give:
                    colours[v * t + x] = receive
                    ops.append(RecolourOp(labels[v] * t + x, give, receive))
                    moved += 1
            if moved != s:
                raise TransferInvariantError("fewer colour copies than the shift count")
        nxt = Colouring(tuple(colours))
        _check_step_invariants(product, cur, nxt, cluster_cap, t, g.n, base, pivot, a)
        new_potential = sum(len({colours[v * t + x] for x in range(t)}) for v in range(g.n))
        if new_potential >= potential:
            raise TransferInvariantError("palette potential failed to decrease")
        potential = new_potential
        steps.append(
            EliminationStep(
                base_vertices=tuple(labels[v] for v in base),
                colours=tuple(a),
                transfer_count=s,
                pivot=pivot,
                ops=tuple(ops),
            )
        )
    raise TransferInvariantError("cycle elimination exceeded its iteration bound")


def _check_step_invariants(product, cur, nxt, cluster_cap, t, n_base, base, pivot, a):
    if Counter(cur.colours) != Counter(nxt.colours):
        raise TransferInvariantError("global colour histogram changed")
    for v in range(n_base):
        old_pal = set(cur.colours[v * t : (v + 1) * t])
        new_pal = set(nxt.colours[v * t : (v + 1) * t])
        if not new_pal <= old_pal:
            raise TransferInvariantError(f"fibre palette of vertex {v} grew")
    pv = base[pivot]
    if a[pivot] in nxt.colours[pv * t : (pv + 1) * t]:
        raise TransferInvariantError("pivot fibre kept the colour it should shed")
    bad = check_clustered(product, nxt, cluster_cap)
    if bad:
        raise TransferInvariantError(f"clustering cap broken by surgery: {bad}")


def incidence_is_acyclic(g: Graph, c: Colouring, t: int) -> bool:
    return _smallest_cycle(build_incidence(g, c, t).adj) is None


def find_small_component(g: Graph, c: Colouring, t: int, ell: int) -> MonoComponent:
    """A component covering at most ell base vertices, given an acyclic incidence.

    Counting shows such a component must exist: with every fibre of size t and
    components capped at ell*t product vertices, a cover larger than ell forces
    branching that would close a cycle.  Raises when the precondition fails.
    """
    inc = build_incidence(g, c, t)
    if _smallest_cycle(inc.adj) is not None:
        raise TransferInvariantError("incidence graph still has a cycle")
    for comp in inc.components:
        if len(comp.cover) <= ell:
            return comp
    raise TransferInvariantError(
        f"acyclic incidence but no component covers <= {ell} vertices; "
        f"covers: {[len(cc.cover) for cc in inc.components]}"
    )


@dataclass(frozen=True)
class ComponentPick:
    colour: int
    base_vertices: tuple[int, ...]  # original labels


@dataclass(frozen=True)
class TransferTrace:
    t: int
    ell: int
    rounds: tuple[tuple[tuple[EliminationStep, ...], ComponentPick], ...]

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "ell": self.ell,
            "rounds": [
                {
                    "eliminations": [
                        {
                            "base_vertices": list(st.base_vertices),
                            "colours": list(st.colours),
                            "transfer_count": st.transfer_count,
                            "pivot": st.pivot,
                            "ops": [
                                {"product_vertex": o.product_vertex, "old": o.old, "new": o.new}
                                for o in st.ops
                            ],
                        }
                        for st in elims
                    ],
                    "pick": {"colour": pick.colour, "base_vertices": list(pick.base_vertices)},
                }
                for elims, pick in self.rounds
            ],
        }


@dataclass(frozen=True)
class DescentResult:
    colouring: Colouring
    trace: TransferTrace


def descend(g: Graph, c: Colouring, t: int, ell: int) -> DescentResult:
    """Turn an ell*t-clustered colouring of g * K_t into an ell-clustered one of g.

    Alternates cycle elimination with picking a component whose base footprint
    has at most ell vertices; that footprint takes the component's colour and
    leaves the graph.  The output colours each vertex from its original fibre
    palette, uses no new colours, and is verified ell-clustered before
    returning.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    product = strong_product(g, complete_graph(t))
    bad = check_clustered(product, c, ell * t)
    if bad:
        raise ValueError(f"input colouring is not {ell * t}-clustered: {bad}")
    original_palettes = [set(c.colours[v * t : (v + 1) * t]) for v in range(g.n)]

    out: list[int | None] = [None] * g.n
    labels = tuple(range(g.n))
    cur_g, cur_c = g, c
    rounds = []
    while cur_g.n:
        cur_c, elims = eliminate_cycles(cur_g, cur_c, t, ell * t, labels)
        comp = find_small_component(cur_g, cur_c, t, ell)
        pick = ComponentPick(comp.colour, tuple(labels[v] for v in comp.cover))
        for v in pick.base_vertices:
            out[v] = comp.colour
        rounds.append((elims, pick))
        kept = [v for v in range(cur_g.n) if v not in set(comp.cover)]
        labels = tuple(labels[v] for v in kept)
        new_colours = []
        for v in kept:
            new_colours.extend(cur_c.colours[v * t : (v + 1) * t])
        cur_g = induced_subgraph(cur_g, kept)
        cur_c = Colouring(tuple(new_colours))

    assert all(col is not None for col in out)
    result = Colouring(tuple(out))  # type: ignore[arg-type]
    for v in range(g.n):
        if result.colours[v] not in original_palettes[v]:
            raise TransferInvariantError(
                f"vertex {v} got colour {result.colours[v]} outside its fibre palette"
            )
    bad = check_clustered(g, result, ell)
    if bad:
        raise TransferInvariantError(f"descent output is not {ell}-clustered: {bad}")
    return DescentResult(result, TransferTrace(t, ell, tuple(rounds)))


def replay_trace(g: Graph, c: Colouring, t: int, trace: TransferTrace) -> Colouring:
    """Re-run a recorded descent against the original colouring.

    Applies every recolour with its expected before-value checked, then the
    component picks; a mismatch means the trace does not belong to (g, c, t).
    """
    colours = list(c.colours)
    out: list[int | None] = [None] * g.n
    for elims, pick in trace.rounds:
        for step in elims:
            for op in step.ops:
                if colours[op.product_vertex] != op.old:
                    raise TransferInvariantError(
                        f"trace mismatch at product vertex {op.product_vertex}: "
                        f"expected {op.old}, found {colours[op.product_vertex]}"
                    )
                colours[op.product_vertex] = op.new
        for v in pick.base_vertices:
            if out[v] is not None:
                raise TransferInvariantError(f"vertex {v} picked twice")
            if pick.colour not in colours[v * t : (v + 1) * t]:
                raise TransferInvariantError(
                    f"pick colour {pick.colour} absent from fibre of vertex {v}"
                )
            out[v] = pick.colour
    if any(col is None for col in out):
        raise TransferInvariantError("trace leaves vertices uncoloured")
    return Colouring(tuple(out))  # type: ignore[arg-type]
