"""Skeleta: the oriented 1-dimensional spaces that chord diagrams live on.

A skeleton is an ordered tuple of components.  Each component contributes
oriented edges; legs of a chord graph sit on those edges.  Three component
kinds exist:

* ``Interval`` -- one edge with two free ends.
* ``Circle`` -- one edge whose leg order is cyclic.
* ``TreeClosed`` -- ``g`` intervals closed up by a tree (the chain graph
  ``Gamma_g`` for the default tree).

``MarkedSkeleton(g)`` is a stand-in skeleton for marked unitrivalent graphs:
legs carry a label in ``1..g`` and are unordered.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterator


class SkeletonError(ValueError):
    """Raised for malformed skeleta or trees."""


@dataclass(frozen=True)
class Edge:
    id: str
    component: str
    kind: str  # 'interval' | 'circle' | 'curved' | 'tree'
    tail: str | None
    head: str | None

    @property
    def cyclic(self) -> bool:
        return self.kind == "circle"


@dataclass(frozen=True)
class TreeSpec:
    """A tree with ``2g`` leaves glued to the endpoints of ``g`` intervals.

    ``edges`` are oriented pairs of tree nodes.  ``leaves`` lists
    ``(node, interval, end)`` with ``interval`` in ``1..g`` and ``end`` either
    ``'a'`` (start of the interval) or ``'b'`` (its end).
    """

    g: int
    edges: tuple[tuple[str, str], ...]
    leaves: tuple[tuple[str, int, str], ...]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        g = self.g
        if g < 1:
            raise SkeletonError("tree needs g >= 1")
        nodes: dict[str, list[str]] = {}
        for u, v in self.edges:
            if u == v:
                raise SkeletonError(f"tree edge {u}>{v} is a loop")
            nodes.setdefault(u, []).append(v)
            nodes.setdefault(v, []).append(u)
        if len(self.edges) != len(nodes) - 1:
            raise SkeletonError("tree must be acyclic and connected")
        # connectivity
        start = next(iter(nodes))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in nodes[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes):
            raise SkeletonError("tree must be connected")
        leaf_nodes = {x for x, nb in nodes.items() if len(nb) == 1}
        if len(leaf_nodes) != 2 * g:
            raise SkeletonError(f"tree has {len(leaf_nodes)} leaves, expected {2 * g}")
        for x, nb in nodes.items():
            if len(nb) == 2:
                raise SkeletonError(f"tree vertex {x} has valence 2")
        ends = set()
        attached = set()
        for node, i, end in self.leaves:
            if node not in leaf_nodes:
                raise SkeletonError(f"{node} is not a leaf of the tree")
            if not 1 <= i <= g or end not in ("a", "b"):
                raise SkeletonError(f"bad attachment {node}:{i}{end}")
            if (i, end) in ends or node in attached:
                raise SkeletonError(f"attachment {node}:{i}{end} is not bijective")
            ends.add((i, end))
            attached.add(node)
        if len(ends) != 2 * g:
            raise SkeletonError("every interval endpoint needs exactly one leaf")

    @cached_property
    def adjacency(self) -> dict[str, list[str]]:
        nb: dict[str, list[str]] = {}
        for u, v in self.edges:
            nb.setdefault(u, []).append(v)
            nb.setdefault(v, []).append(u)
        return nb

    def leaf_at(self, i: int, end: str) -> str:
        for node, j, e in self.leaves:
            if (j, e) == (i, end):
                return node
        raise KeyError((i, end))


def chain_tree(g: int) -> TreeSpec:
    """Default tree giving the chain graph: a caterpillar on ``w1..w(2g-2)``.

    For ``g = 1`` the tree is a single edge closing the interval to a circle.
    """
    if g < 1:
        raise SkeletonError("chain graph needs g >= 1")
    if g == 1:
        return TreeSpec(1, (("l1b", "l1a"),), (("l1a", 1, "a"), ("l1b", 1, "b")))
    m = 2 * g - 2
    w = [f"w{k}" for k in range(1, m + 1)]
    edges = [(w[k], w[k + 1]) for k in range(m - 1)]
    leaves = []

    def attach(node, i, end):
        leaf = f"l{i}{end}"
        edges.append((node, leaf))
        leaves.append((leaf, i, end))

    attach(w[0], 1, "a")
    attach(w[0], 1, "b")
    for j in range(1, g - 1):
        attach(w[2 * j - 1], j + 1, "a")
        attach(w[2 * j], j + 1, "b")
    attach(w[-1], g, "a")
    attach(w[-1], g, "b")
    return TreeSpec(g, tuple(edges), tuple(leaves))


@dataclass(frozen=True)
class Interval:
    id: str
    reversed: bool = False

    def edges(self) -> list[Edge]:
        return [Edge(self.id, self.id, "interval", None, None)]


@dataclass(frozen=True)
class Circle:
    id: str
    reversed: bool = False

    def edges(self) -> list[Edge]:
        return [Edge(self.id, self.id, "circle", None, None)]


@dataclass(frozen=True)
class TreeClosed:
    """``g`` intervals closed up by a tree.

    Leaf edges of the tree are merged into the interval they touch, so the
    curved edge ``<id>.<i>`` runs between the tree vertices adjacent to the
    two endpoints of interval ``i``.  Edges between internal tree vertices are
    tree edges ``<id>.t<k>``.  When the tree has no internal vertex (``g = 1``)
    its single edge is kept and the two gluing points become bivalent vertices.
    """

    id: str
    tree: TreeSpec
    reversed: bool = False

    @property
    def g(self) -> int:
        return self.tree.g

    def curved_id(self, i: int) -> str:
        return f"{self.id}.{i}"

    def edges(self) -> list[Edge]:
        t = self.tree
        nb = t.adjacency
        internal = [x for x in nb if len(nb[x]) >= 3]
        vname = lambda x: f"{self.id}.{x}"
        out: list[Edge] = []
        if not internal:
            (u, v), = t.edges
            a, b = t.leaf_at(1, "a"), t.leaf_at(1, "b")
            out.append(Edge(self.curved_id(1), self.id, "curved", vname(a), vname(b)))
            out.append(Edge(f"{self.id}.t1", self.id, "tree", vname(u), vname(v)))
        else:
            for i in range(1, t.g + 1):
                a = nb[t.leaf_at(i, "a")][0]
                b = nb[t.leaf_at(i, "b")][0]
                out.append(Edge(self.curved_id(i), self.id, "curved", vname(a), vname(b)))
            k = 0
            for u, v in t.edges:
                if u in internal and v in internal:
                    k += 1
                    out.append(Edge(f"{self.id}.t{k}", self.id, "tree", vname(u), vname(v)))
        if self.reversed:
            out = [replace(e, tail=e.head, head=e.tail) for e in out]
        return out


Component = Interval | Circle | TreeClosed


@dataclass(frozen=True)
class Skeleton:
    components: tuple[Component, ...] = ()

    def __post_init__(self):
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise SkeletonError(f"duplicate component ids in {ids}")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise SkeletonError(f"duplicate edge ids in {eids}")

    is_marked = False

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(e for c in self.components for e in c.edges())

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_order(self) -> dict[str, int]:
        return {e.id: k for k, e in enumerate(self.edges)}

    @cached_property
    def vertices(self) -> dict[str, tuple[tuple[str, str], ...]]:
        """Skeleton vertex -> incident ``(edge id, 'tail'|'head')`` ends."""
        inc: dict[str, list[tuple[str, str]]] = {}
        for e in self.edges:
            if e.tail is not None:
                inc.setdefault(e.tail, []).append((e.id, "tail"))
            if e.head is not None:
                inc.setdefault(e.head, []).append((e.id, "head"))
        return {v: tuple(ends) for v, ends in inc.items()}

    def component(self, cid: str) -> Component:
        for c in self.components:
            if c.id == cid:
                return c
        raise SkeletonError(f"unknown component {cid!r}")

    def placements(self, nlegs: int) -> Iterator[tuple]:
        """All ways to put ``nlegs`` ordered legs on the edges (as colors)."""
        edges = self.edges
        if not edges:
            if nlegs == 0:
                yield ()
            return

        def rec(k, left):
            if k == len(edges) - 1:
                yield (left,)
                return
            for c in range(left + 1):
                for rest in rec(k + 1, left - c):
                    yield (c,) + rest

        for counts in rec(0, nlegs):
            yield tuple((e.id, p) for e, c in zip(edges, counts) for p in range(c))

    def without(self, cids) -> "Skeleton":
        cids = set(cids)
        return Skeleton(tuple(c for c in self.components if c.id not in cids))

    def __str__(self) -> str:
        from .textio import format_skeleton

        return format_skeleton(self)


@dataclass(frozen=True)
class MarkedSkeleton:
    """Pseudo-skeleton for marked unitrivalent graphs with labels ``1..g``."""

    g: int
    is_marked: bool = field(default=True, init=False)

    @property
    def components(self) -> tuple:
        return ()

    @property
    def edges(self) -> tuple:
        return ()

    @property
    def vertices(self) -> dict:
        return {}

    def placements(self, nlegs: int) -> Iterator[tuple]:
        for combo in combinations_with_replacement(range(1, self.g + 1), nlegs):
            yield tuple((j,) for j in combo)

    def __str__(self) -> str:
        return f"B:{self.g}"


EMPTY = Skeleton(())


def intervals(g: int, prefix: str = "I") -> Skeleton:
    return Skeleton(tuple(Interval(f"{prefix}{i}") for i in range(1, g + 1)))


def chain_graph(g: int, cid: str = "G") -> Skeleton:
    """Skeleton ``Gamma_g``; ``g = 0`` gives the empty skeleton."""
    if g == 0:
        return EMPTY
    return Skeleton((TreeClosed(cid, chain_tree(g)),))


def union(a, b):
    """Disjoint union of skeleta (marked pseudo-skeleta only with the empty one)."""
    if a.is_marked or b.is_marked:
        if a == EMPTY:
            return b
        if b == EMPTY:
            return a
        if a == b:
            return a
        raise SkeletonError("cannot take the union of a marked skeleton with another skeleton")
    return Skeleton(a.components + b.components)
