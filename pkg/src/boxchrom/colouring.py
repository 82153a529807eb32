"""Colourings and their feasibility checkers.

Three relaxations of proper colouring are handled throughout the package:

- d-improper: every vertex has at most d neighbours of its own colour;
- t-clustered: every monochromatic component has at most t vertices;
- b-fold variants of both, where vertices carry size-b colour sets.

Checkers return None on success or a Violation whose witness can be
re-verified independently of the checker that produced it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .graphs import Graph, iter_bits

__all__ = [
    "BFoldColouring",
    "Colouring",
    "Mode",
    "Violation",
    "check_bfold",
    "check_clustered",
    "check_improper",
    "colour_multiset",
    "lift_colouring",
    "mono_components",
]


@dataclass(frozen=True)
class Colouring:
    """Total assignment of positive integer colours to vertices 0..n-1."""

    colours: tuple[int, ...]

    def __post_init__(self) -> None:
        for v, c in enumerate(self.colours):
            if not isinstance(c, int) or c < 1:
                raise ValueError(f"vertex {v} has invalid colour {c!r}")

    @classmethod
    def from_list(cls, colours: Iterable[int]) -> "Colouring":
        return cls(tuple(int(c) for c in colours))

    @property
    def n(self) -> int:
        return len(self.colours)

    def palette(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.colours)))

    @property
    def num_colours(self) -> int:
        return len(set(self.colours))

    def canonical(self) -> "Colouring":
        """Renumber colours 1, 2, ... in order of first appearance."""
        seen: dict[int, int] = {}
        out = []
        for c in self.colours:
            if c not in seen:
                seen[c] = len(seen) + 1
            out.append(seen[c])
        return Colouring(tuple(out))

    def class_mask(self, colour: int) -> int:
        mask = 0
        for v, c in enumerate(self.colours):
            if c == colour:
                mask |= 1 << v
        return mask

    def to_json(self) -> list[int]:
        return list(self.colours)


@dataclass(frozen=True)
class BFoldColouring:
    """Assignment of a set of colours to each vertex; sets serialise sorted."""

    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for v, s in enumerate(self.sets):
            if len(set(s)) != len(s):
                raise ValueError(f"vertex {v} repeats a colour")
            if any(c < 1 for c in s):
                raise ValueError(f"vertex {v} has a non-positive colour")
            if tuple(sorted(s)) != s:
                raise ValueError(f"vertex {v} colour set is not sorted")

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> "BFoldColouring":
        return cls(tuple(tuple(sorted(int(c) for c in s)) for s in sets))

    @property
    def n(self) -> int:
        return len(self.sets)

    def palette(self) -> tuple[int, ...]:
        return tuple(sorted({c for s in self.sets for c in s}))

    def class_mask(self, colour: int) -> int:
        mask = 0
        for v, s in enumerate(self.sets):
            if colour in s:
                mask |= 1 << v
        return mask

    def to_json(self) -> list[list[int]]:
        return [list(s) for s in self.sets]


IMPROPER_DEGREE_EXCEEDED = "ImproperDegreeExceeded"
CLUSTER_TOO_LARGE = "ClusterTooLarge"
ADJACENT_SAME_COLOUR = "AdjacentSameColour"
FOLD_SET_WRONG_SIZE = "FoldSetWrongSize"


@dataclass(frozen=True)
class Violation:
    """A checkable certificate that a colouring breaks a constraint."""

    kind: str
    vertices: tuple[int, ...]
    colour: int | None
    limit: int | None

    def to_json(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices),
                "colour": self.colour, "limit": self.limit}


def _require_total(g: Graph, c: Colouring) -> None:
    if c.n != g.n:
        raise ValueError(f"colouring covers {c.n} vertices, graph has {g.n}")


def check_improper(g: Graph, c: Colouring, d: int) -> Violation | None:
    """None iff every vertex has at most d same-coloured neighbours."""
    if d < 0:
        raise ValueError("d must be non-negative")
    _require_total(g, c)
    for v in range(g.n):
        mask = c.class_mask(c.colours[v])
        same = (g.adj[v] & mask).bit_count()
        if same > d:
            if d == 0:
                u = next(iter_bits(g.adj[v] & mask))
                return Violation(ADJACENT_SAME_COLOUR, (v, u), c.colours[v], d)
            return Violation(IMPROPER_DEGREE_EXCEEDED, (v,), c.colours[v], d)
    return None


def mono_components(g: Graph, c: Colouring) -> list[tuple[int, tuple[int, ...]]]:
    """Monochromatic components as (colour, vertices), ordered by smallest vertex."""
    _require_total(g, c)
    seen = 0
    out = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        colour = c.colours[v]
        mask = c.class_mask(colour)
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= g.adj[u] & mask
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append((colour, tuple(iter_bits(comp))))
    return out


def check_clustered(g: Graph, c: Colouring, t: int) -> Violation | None:
    """None iff every monochromatic component has at most t vertices."""
    if t < 1:
        raise ValueError("t must be positive")
    _require_total(g, c)
    for colour, comp in mono_components(g, c):
        if len(comp) > t:
            return Violation(CLUSTER_TOO_LARGE, comp, colour, t)
    return None


@dataclass(frozen=True)
class Mode:
    """Which relaxation a solver or checker should enforce."""

    kind: str
    param: int | None = None

    _KINDS = ("proper", "improper", "clustered")

    def __post_init__(self) -> None:
        if self.kind not in self._KINDS:
            raise ValueError(f"mode kind must be one of {self._KINDS}")
        if self.kind == "proper" and self.param is not None:
            raise ValueError("proper mode takes no parameter")
        if self.kind == "improper" and (self.param is None or self.param < 0):
            raise ValueError("improper mode needs d >= 0")
        if self.kind == "clustered" and (self.param is None or self.param < 1):
            raise ValueError("clustered mode needs t >= 1")

    @classmethod
    def proper(cls) -> "Mode":
        return cls("proper")

    @classmethod
    def improper(cls, d: int) -> "Mode":
        return cls("improper", d)

    @classmethod
    def clustered(cls, t: int) -> "Mode":
        return cls("clustered", t)

    def describe(self) -> str:
        return self.kind if self.param is None else f"{self.kind}({self.param})"


def _check_class(g: Graph, members: int, colour: int, mode: Mode) -> Violation | None:
    # validate one colour class (given as a vertex mask) against the mode
    if mode.kind in ("proper", "improper"):
        d = 0 if mode.kind == "proper" else mode.param
        for v in iter_bits(members):
            same = (g.adj[v] & members).bit_count()
            if same > d:
                if d == 0:
                    u = next(iter_bits(g.adj[v] & members))
                    return Violation(ADJACENT_SAME_COLOUR, (v, u), colour, 0)
                return Violation(IMPROPER_DEGREE_EXCEEDED, (v,), colour, d)
        return None
    t = mode.param
    left = members
    while left:
        v = next(iter_bits(left))
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= g.adj[u] & members
            frontier = nxt & ~comp
            comp |= frontier
        if comp.bit_count() > t:
            return Violation(CLUSTER_TOO_LARGE, tuple(iter_bits(comp)), colour, t)
        left &= ~comp
    return None


def check_bfold(g: Graph, c: BFoldColouring, b: int, mode: Mode) -> Violation | None:
    """None iff each colour set has size b and each colour class obeys the mode."""
    if b < 1:
        raise ValueError("b must be positive")
    if c.n != g.n:
        raise ValueError(f"colouring covers {c.n} vertices, graph has {g.n}")
    for v, s in enumerate(c.sets):
        if len(s) != b:
            return Violation(FOLD_SET_WRONG_SIZE, (v,), None, b)
    for colour in c.palette():
        bad = _check_class(g, c.class_mask(colour), colour, mode)
        if bad is not None:
            return bad
    return None


def lift_colouring(c: Colouring, t: int) -> Colouring:
    """Blow up a colouring of G to G boxtimes K_t by copying each vertex's colour.

    Vertex (v, i) of the flattened product receives c(v).
    """
    if t < 1:
        raise ValueError("t must be positive")
    out = []
    for col in c.colours:
        out.extend([col] * t)
    return Colouring(tuple(out))


def colour_multiset(c: Colouring, t: int, v: int) -> Counter:
    """Multiset of colours on the t copies of base vertex v in a flattened product."""
    if t < 1:
        raise ValueError("t must be positive")
    if c.n % t:
        raise ValueError(f"colouring length {c.n} is not a multiple of t={t}")
    if not 0 <= v < c.n // t:
        raise ValueError(f"base vertex {v} out of range")
    return Counter(c.colours[v * t:(v + 1) * t])
