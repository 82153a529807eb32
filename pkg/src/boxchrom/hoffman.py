"""Equality diagnostics for the generalized Hoffman bound.

A colouring whose class count meets the spectral lower bound exactly is
heavily constrained: the smallest eigenvalue must repeat, classes must induce
regular subgraphs, and the partition must be regular in a Perron-weighted
sense.  This module checks each of those structural conditions directly so a
claimed tight colouring can be audited, and lifts tight proper colourings
through strong products with complete graphs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import hoffman_bilu
from .colouring import Colouring, check_improper, lift_colouring
from .graphs import Graph, complete_graph, induced_subgraph, strong_product
from .spectra import MULT_TOL, graph_matrix, perron_vector, spectrum

__all__ = [
    "HoffmanDiagnosis",
    "LiftDiagnosis",
    "Partition",
    "diagnose_hoffman",
    "is_equitable",
    "is_weight_regular",
    "lift_tight_colouring",
    "quotient_matrix",
    "weighted_class_degrees",
]

TIGHT_TOL = 1e-6
QUOTIENT_TOL = 1e-7


@dataclass(frozen=True)
class Partition:
    """Ordered partition of the vertex set ``0..n-1`` into nonempty parts."""

    n: int
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = 0
        for part in self.parts:
            if not part:
                raise ValueError("empty part")
            if list(part) != sorted(part):
                raise ValueError("part vertices must be sorted")
            mask = 0
            for v in part:
                if not 0 <= v < self.n:
                    raise ValueError(f"vertex {v} out of range")
                mask |= 1 << v
            if mask & seen:
                raise ValueError("parts overlap")
            seen |= mask
        if seen != (1 << self.n) - 1:
            raise ValueError("parts do not cover every vertex")

    @classmethod
    def from_colouring(cls, c: Colouring) -> "Partition":
        by_colour: dict[int, list[int]] = {}
        for v, col in enumerate(c.colours):
            by_colour.setdefault(col, []).append(v)
        return cls(c.n, tuple(tuple(by_colour[col]) for col in sorted(by_colour)))

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def part_of(self) -> list[int]:
        out = [0] * self.n
        for i, part in enumerate(self.parts):
            for v in part:
                out[v] = i
        return out


def class_degree_table(g: Graph, partition: Partition) -> np.ndarray:
    """Integer table D[v][j] = number of neighbours of v inside part j."""
    table = np.zeros((g.n, partition.num_parts), dtype=int)
    part_of = partition.part_of()
    for u in range(g.n):
        for v in g.neighbours(u):
            table[u][part_of[v]] += 1
    return table


def is_equitable(g: Graph, partition: Partition) -> bool:
    """True when class degrees depend only on the part of the vertex."""
    table = class_degree_table(g, partition)
    return all(
        bool((table[list(part)] == table[part[0]]).all()) for part in partition.parts
    )


def weighted_class_degrees(g: Graph, partition: Partition) -> np.ndarray:
    """Perron-weighted class degrees W[v][j] = sum(w_u : u ~ v, u in part j) / w_v."""
    w = perron_vector(g)
    table = np.zeros((g.n, partition.num_parts), dtype=float)
    part_of = partition.part_of()
    for u in range(g.n):
        for v in g.neighbours(u):
            table[u][part_of[v]] += w[v]
        table[u] /= w[u]
    return table


def is_weight_regular(g: Graph, partition: Partition, tol: float = TIGHT_TOL) -> bool:
    """True when Perron-weighted class degrees are constant on each part."""
    table = weighted_class_degrees(g, partition)
    for part in partition.parts:
        rows = table[list(part)]
        if float(np.abs(rows - rows[0]).max(initial=0.0)) > tol:
            return False
    return True


def quotient_matrix(g: Graph, partition: Partition) -> np.ndarray:
    """Perron-weighted quotient C[i][j] = x_i^T A x_j / |x_i|^2.

    Here x_i is the Perron vector restricted to part i.  Row sums always equal
    the largest adjacency eigenvalue; that identity is verified before
    returning, as a guard against a bad Perron vector or partition.
    """
    if not g.is_connected():
        raise ValueError("quotient matrix needs a connected graph")
    w = perron_vector(g)
    a = graph_matrix(g)
    m = partition.num_parts
    c = np.zeros((m, m))
    vecs = []
    for part in partition.parts:
        x = np.zeros(g.n)
        for v in part:
            x[v] = w[v]
        vecs.append(x)
    for i in range(m):
        norm = float(vecs[i] @ vecs[i])
        for j in range(m):
            c[i][j] = float(vecs[i] @ a @ vecs[j]) / norm
    lam1 = spectrum(g).largest
    rows = c.sum(axis=1)
    if float(np.abs(rows - lam1).max(initial=0.0)) > QUOTIENT_TOL * (1.0 + abs(lam1)):
        raise ArithmeticError("quotient row sums drift from the Perron eigenvalue")
    return c


@dataclass(frozen=True)
class HoffmanDiagnosis:
    """Structural audit of a d-improper colouring against the spectral bound."""

    d: int
    num_classes: int
    bound: float
    is_tight: bool
    smallest_eigenvalue: float
    smallest_multiplicity: int
    multiplicity_sufficient: bool
    classes_d_regular: bool
    weight_regular: bool
    equitable: bool | None
    cross_degrees_match: bool | None
    unique_colouring: bool | None
    multiplicity_exact: bool | None
    quotient: tuple[tuple[float, ...], ...]

    def all_equality_conditions(self) -> bool:
        """Conjunction of the conditions that every tight colouring must satisfy."""
        out = self.multiplicity_sufficient and self.classes_d_regular and self.weight_regular
        if self.equitable is not None:
            out = out and self.equitable and bool(self.cross_degrees_match)
        return out

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "num_classes": self.num_classes,
            "bound": self.bound,
            "is_tight": self.is_tight,
            "smallest_eigenvalue": self.smallest_eigenvalue,
            "smallest_multiplicity": self.smallest_multiplicity,
            "multiplicity_sufficient": self.multiplicity_sufficient,
            "classes_d_regular": self.classes_d_regular,
            "weight_regular": self.weight_regular,
            "equitable": self.equitable,
            "cross_degrees_match": self.cross_degrees_match,
            "unique_colouring": self.unique_colouring,
            "multiplicity_exact": self.multiplicity_exact,
            "quotient": [list(row) for row in self.quotient],
        }


def _count_colourings_up_to_symmetry(g: Graph, d: int, m: int, stop_at: int = 2) -> int:
    """Count d-improper colourings with exactly m colours, up to renaming.

    Colours are introduced in first-seen order, so each equivalence class is
    generated exactly once.  Stops early once ``stop_at`` colourings are found.
    """
    counts: list[int] = []
    classes = [0] * (m + 1)
    found = 0

    def place(v: int, max_used: int) -> None:
        nonlocal found
        if found >= stop_at:
            return
        if v == g.n:
            if max_used == m:
                found += 1
            return
        adj = g.adj[v]
        for colour in range(1, min(max_used + 1, m) + 1):
            mask = classes[colour]
            hit = mask & adj
            if bin(hit).count("1") > d:
                continue
            ok = True
            for u in _bits(hit):
                if counts[u] + 1 > d:
                    ok = False
                    break
            if not ok:
                continue
            classes[colour] |= 1 << v
            counts.append(bin(hit).count("1"))
            for u in _bits(hit):
                counts[u] += 1
            place(v + 1, max(max_used, colour))
            for u in _bits(hit):
                counts[u] -= 1
            counts.pop()
            classes[colour] &= ~(1 << v)

    def _bits(mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    place(0, 0)
    return found


def diagnose_hoffman(
    g: Graph,
    d: int,
    colouring: Colouring,
    *,
    check_uniqueness: bool = False,
) -> HoffmanDiagnosis:
    """Audit a d-improper colouring against the spectral equality conditions.

    The uniqueness check enumerates all colourings with the same class count
    and is capped at 12 vertices; when it confirms a unique colouring, the
    smallest eigenvalue's multiplicity must equal the class count minus one,
    and that sharper statement is checked too.
    """
    if not g.is_connected():
        raise ValueError("Hoffman diagnostics need a connected graph")
    if g.edge_count == 0:
        raise ValueError("Hoffman diagnostics need at least one edge")
    if colouring.n != g.n:
        raise ValueError("colouring size does not match graph")
    bad = check_improper(g, colouring, d)
    if bad is not None:
        raise ValueError(f"colouring is not {d}-improper: {bad}")

    partition = Partition.from_colouring(colouring)
    m = partition.num_parts
    bound = hoffman_bilu(g, d)
    s = spectrum(g)
    lam_n = s.smallest
    mult = s.multiplicity(lam_n)

    table = class_degree_table(g, partition)
    part_of = partition.part_of()
    d_regular = all(table[v][part_of[v]] == d for v in range(g.n))

    degs = set(g.degree_sequence())
    equitable = cross_ok = None
    if len(degs) == 1:
        equitable = is_equitable(g, partition)
        cross = d - lam_n
        cross_ok = all(
            abs(table[v][j] - cross) <= TIGHT_TOL
            for v in range(g.n)
            for j in range(m)
            if j != part_of[v]
        )

    unique = mult_exact = None
    if check_uniqueness:
        if g.n > 12:
            raise ValueError("uniqueness enumeration is capped at 12 vertices")
        unique = _count_colourings_up_to_symmetry(g, d, m) == 1
        if unique:
            mult_exact = mult == m - 1

    quotient = quotient_matrix(g, partition)
    return HoffmanDiagnosis(
        d=d,
        num_classes=m,
        bound=bound,
        is_tight=abs(m - bound) <= TIGHT_TOL,
        smallest_eigenvalue=lam_n,
        smallest_multiplicity=mult,
        multiplicity_sufficient=mult >= m - 1,
        classes_d_regular=d_regular,
        weight_regular=is_weight_regular(g, partition),
        equitable=equitable,
        cross_degrees_match=cross_ok,
        unique_colouring=unique,
        multiplicity_exact=mult_exact,
        quotient=tuple(tuple(float(x) for x in row) for row in quotient),
    )


@dataclass(frozen=True)
class LiftDiagnosis:
    """Outcome of lifting a tight proper colouring through a strong product."""

    base_classes: int
    base_bound: float
    d: int
    product_bound: float
    lifted: Colouring
    product_diagnosis: HoffmanDiagnosis

    def to_json(self) -> dict:
        return {
            "base_classes": self.base_classes,
            "base_bound": self.base_bound,
            "d": self.d,
            "product_bound": self.product_bound,
            "lifted": self.lifted.to_json(),
            "product_diagnosis": self.product_diagnosis.to_json(),
        }


def lift_tight_colouring(g: Graph, proper: Colouring, d: int) -> LiftDiagnosis:
    """Lift a tight proper colouring of g to a tight d-improper one of g * K(d+1).

    The input colouring must be proper and meet the d=0 spectral bound with
    equality.  Copying each vertex's colour across its clique fibre then gives
    every vertex exactly d same-coloured neighbours, and the product bound
    (which equals the base bound) stays tight.  Raises when the input
    colouring is not tight, since the lift then proves nothing.
    """
    if d < 1:
        raise ValueError("lifting needs d >= 1")
    base = diagnose_hoffman(g, 0, proper)
    if not base.is_tight:
        raise ValueError(
            f"proper colouring uses {base.num_classes} classes but the spectral "
            f"bound is {base.bound:.6f}; not tight, nothing to lift"
        )
    product = strong_product(g, complete_graph(d + 1))
    lifted = lift_colouring(proper, d + 1)
    diag = diagnose_hoffman(product, d, lifted)
    if not diag.is_tight:
        raise ArithmeticError("lifted colouring failed to stay tight")
    return LiftDiagnosis(
        base_classes=base.num_classes,
        base_bound=base.bound,
        d=d,
        product_bound=diag.bound,
        lifted=lifted,
        product_diagnosis=diag,
    )
