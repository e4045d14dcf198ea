"""Weighted directed hypergraphs and their closure/cut machinery.

An edge has a tail set and a head set; it can fire once every tail is
reached, and firing reaches every head.  ``closure`` is the least fixpoint
of repeated firing, restricted to a chosen edge subset.  Hypergraphs are
immutable after construction; closure queries allocate private scratch
state, so one hypergraph can serve concurrent queries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import kernels
from .formula import AttrSet, Universe, format_budget, parse_budget


@dataclass(frozen=True)
class Edge:
    index: int
    tails: AttrSet
    heads: AttrSet
    weight: Fraction

    def __post_init__(self):
        if self.tails.universe != self.heads.universe:
            raise ValueError("edge tails/heads over different universes")
        if not isinstance(self.weight, Fraction):
            object.__setattr__(self, "weight", Fraction(self.weight))
        if self.weight < 0:
            raise ValueError(f"negative edge weight {self.weight}")


class Hypergraph:
    """Finite vertex universe plus a list of weighted directed edges.

    Edges may repeat: parallel edges with different weights are meaningful
    for minimum-budget queries.
    """

    def __init__(self, universe: Universe, edges: Iterable = ()):
        self.universe = universe
        built: list[Edge] = []
        for spec in edges:
            if isinstance(spec, Edge):
                tails, heads, weight = spec.tails, spec.heads, spec.weight
            else:
                tails, heads, weight = spec
            if not isinstance(tails, AttrSet):
                tails = universe.set_of(tails)
            if not isinstance(heads, AttrSet):
                heads = universe.set_of(heads)
            if tails.universe != universe or heads.universe != universe:
                raise ValueError("edge endpoints over a different universe")
            built.append(Edge(len(built), tails, heads, Fraction(weight)))
        self.edges = tuple(built)
        self._kernel = None

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Hypergraph({len(self.universe)} vertices, {len(self.edges)} edges)"

    @property
    def all_edges_mask(self) -> int:
        return (1 << len(self.edges)) - 1

    def edge_mask(self, edge_ids: Iterable[int]) -> int:
        mask = 0
        for e in edge_ids:
            if not 0 <= e < len(self.edges):
                raise ValueError(f"edge id {e} out of range")
            mask |= 1 << e
        return mask

    def edge_ids(self, mask: int) -> tuple[int, ...]:
        out = []
        while mask:
            out.append((mask & -mask).bit_length() - 1)
            mask &= mask - 1
        return tuple(out)

    def weight_of(self, edge_ids: Iterable[int]) -> Fraction:
        return sum((self.edges[e].weight for e in set(edge_ids)), Fraction(0))

    def closure_kernel(self):
        if self._kernel is None:
            self._kernel = kernels.closure_kernel(
                [e.tails.mask for e in self.edges],
                [e.heads.mask for e in self.edges],
                len(self.universe),
            )
        return self._kernel

    # -- JSON wire format ---------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.universe.names),
            "edges": [
                {
                    "in": sorted(e.tails),
                    "out": sorted(e.heads),
                    "w": format_budget(e.weight),
                }
                for e in self.edges
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Hypergraph":
        universe = Universe(data["vertices"])
        edges = [
            (spec["in"], spec["out"], parse_budget(str(spec["w"])))
            for spec in data["edges"]
        ]
        return cls(universe, edges)


@dataclass(frozen=True)
class Cut:
    """An ordered partition (left, right) of the vertex set."""

    left: AttrSet
    right: AttrSet

    def __post_init__(self):
        if self.left.universe != self.right.universe:
            raise ValueError("cut sides over different universes")
        if not self.left.isdisjoint(self.right):
            raise ValueError("cut sides overlap")
        if (self.left | self.right) != self.left.universe.full():
            raise ValueError("cut does not cover the vertex set")


@dataclass(frozen=True)
class ClosureTrace:
    """Serialized closure run: sets[0], edges[0], sets[1], ..., sets[-1].

    ``sets[i] | heads(edges[i]) == sets[i+1]`` and every fired edge's tails
    lie in the set it fired from; the final set is the closure.
    """

    sets: tuple[AttrSet, ...]
    edges: tuple[int, ...]

    def final(self) -> AttrSet:
        return self.sets[-1]

    def conditions_hold(self, h: Hypergraph, start: AttrSet, edge_ids: Iterable[int]) -> bool:
        """Mechanical check of the serial-trace conditions."""
        allowed = set(edge_ids)
        if len(self.sets) != len(self.edges) + 1 or not self.sets:
            return False
        if self.sets[0] != start:
            return False
        if len(set(self.edges)) != len(self.edges):
            return False
        for i, e in enumerate(self.edges):
            if e not in allowed:
                return False
            edge = h.edges[e]
            if not edge.tails <= self.sets[i]:
                return False
            if (self.sets[i] | edge.heads) != self.sets[i + 1]:
                return False
        return self.sets[-1] == closure(h, start, allowed)


def closure(h: Hypergraph, start: AttrSet, edge_ids: Iterable[int]) -> AttrSet:
    """All vertices reachable from ``start`` by firing edges in ``edge_ids``."""
    mask = h.closure_kernel().closure(h.edge_mask(edge_ids), start.mask)
    return AttrSet(h.universe, mask)


def closure_rounds(h: Hypergraph, start: AttrSet, edge_ids: Iterable[int]) -> AttrSet:
    """Naive round-based fixpoint; reference oracle for the kernels."""
    ids = sorted(set(edge_ids))
    current = start.mask
    for _ in range(len(h.universe) + 1):
        nxt = current
        for e in ids:
            edge = h.edges[e]
            if edge.tails.mask & ~current == 0:
                nxt |= edge.heads.mask
        if nxt == current:
            break
        current = nxt
    return AttrSet(h.universe, current)


def closure_trace(h: Hypergraph, start: AttrSet, edge_ids: Iterable[int]) -> ClosureTrace:
    """Deterministic firing sequence reaching the closure.

    Rounds mirror the fixpoint; within a round, edges that became enabled
    (tails reached, heads not yet all reached) fire in ascending id order.
    Each edge fires at most once.
    """
    remaining = sorted(set(edge_ids))
    sets = [start]
    fired: list[int] = []
    current = start
    while True:
        ready = [
            e
            for e in remaining
            if h.edges[e].tails <= current and not h.edges[e].heads <= current
        ]
        if not ready:
            break
        for e in ready:
            current = current | h.edges[e].heads
            fired.append(e)
            sets.append(current)
            remaining.remove(e)
    return ClosureTrace(tuple(sets), tuple(fired))


def crossing_edges(h: Hypergraph, cut: Cut) -> frozenset[int]:
    """Edges with every tail in ``cut.left`` and some head in ``cut.right``."""
    return frozenset(
        e.index
        for e in h.edges
        if e.tails <= cut.left and not e.heads.isdisjoint(cut.right)
    )


def reachability_cut(h: Hypergraph, start: AttrSet, edge_ids: Iterable[int]) -> Cut:
    """Cut (closure, complement); no edge of ``edge_ids`` crosses it."""
    left = closure(h, start, edge_ids)
    return Cut(left, left.complement())
