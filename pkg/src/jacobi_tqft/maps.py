"""Structural maps between diagram spaces.

* ``chi``: marked graphs -> diagrams on intervals, averaging leg orders.
* ``chi_inverse``: its inverse on quotients, by a linear solve.
* ``rho``: close intervals up with a tree.
* ``sigma``: push legs off the tree part with the root/labelled-tab rule.
* ``remove_circles``: replace a circle carrying ``2n`` legs by the sum over
  perfect matchings of its legs.
* ``wheel`` / ``comb`` constructors and endpoint relation instances.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import permutations, product
from math import factorial

from .diagram import Diagram, LinComb, Raw, build, splice
from .linalg import solve
from .relations import DEFAULT_CAP, quotient_basis, split_loops, with_loops
from .skeleton import (
    Circle,
    Interval,
    MarkedSkeleton,
    Skeleton,
    TreeClosed,
    TreeSpec,
    chain_tree,
    intervals,
)


class MapError(ValueError):
    """Input outside the domain of a map."""


def _require_intervals(sk) -> list[str]:
    if sk.is_marked:
        raise MapError("expected diagrams on intervals, got marked graphs")
    ids = []
    for c in sk.components:
        if not isinstance(c, Interval) or c.reversed:
            raise MapError(f"expected a union of (unreversed) intervals, got {sk}")
        ids.append(c.id)
    return ids


# ---------------------------------------------------------------------------
# chi


def chi(m: LinComb, target: Skeleton | None = None) -> LinComb:
    """Symmetrization: label ``j`` legs go to interval ``j`` in all orders."""
    sk = m.skeleton
    if not sk.is_marked:
        raise MapError("chi expects marked graphs (skeleton B:g)")
    g = sk.g
    target = intervals(g) if target is None else target
    ids = _require_intervals(target)
    if len(ids) != g:
        raise MapError(f"target has {len(ids)} intervals, need {g}")
    out = LinComb(target)
    for d, c in m.items():
        groups = {}
        for k, (lab,) in enumerate(d.legs):
            groups.setdefault(lab, []).append(k)
        labs = sorted(groups)
        weight = Fraction(1)
        for lab in labs:
            weight /= factorial(len(groups[lab]))
        for orders in product(*(permutations(groups[lab]) for lab in labs)):
            legs = list(d.legs)
            for lab, order in zip(labs, orders):
                for pos, k in enumerate(order):
                    legs[k] = (ids[lab - 1], pos)
            out._add_raw(Diagram(target, tuple(legs), d.nv, d.edges, d.loops), c * weight)
    return out


class InconsistentSystem(RuntimeError):
    """chi_inverse found no solution: the relation generators disagree."""


def chi_inverse(x: LinComb, cap: int = DEFAULT_CAP) -> LinComb:
    """Solve ``chi(y) = x`` in the quotient, degree by degree."""
    ids = _require_intervals(x.skeleton)
    g = len(ids)
    if x.skeleton != intervals(g):
        x = LinComb(intervals(g), {
            Diagram(intervals(g), tuple((f"I{ids.index(e) + 1}", p) for e, p in d.legs),
                    d.nv, d.edges, d.loops): c
            for d, c in x.terms.items()
        })
    msk = MarkedSkeleton(g)
    out = LinComb(msk)
    for k, part in split_loops(x).items():
        for n in sorted(part.degrees()):
            qa = quotient_basis(part.skeleton, n, cap)
            qb = quotient_basis(msk, n, cap)
            basis = qb.basis
            cols = [qa.echelon.reduce(qa.vector(chi(LinComb.of(b)))) for b in basis]
            target = qa.echelon.reduce(qa.vector(part.homogeneous(n)))
            y = solve(cols, target) if target else {}
            if y is None:
                raise InconsistentSystem(f"chi is not onto in degree {n} for g={g}")
            piece = LinComb.sum_of(msk, [(c, basis[j]) for j, c in y.items()])
            out = out + with_loops(piece, k)
    return out


# ---------------------------------------------------------------------------
# rho and sigma


def rho(x: LinComb, tree: TreeSpec | None = None, cid: str = "G") -> LinComb:
    """Attach a tree to the intervals; legs keep their places."""
    ids = _require_intervals(x.skeleton)
    g = len(ids)
    if g == 0:
        return x
    tree = chain_tree(g) if tree is None else tree
    if tree.g != g:
        raise MapError(f"tree has {2 * tree.g} leaves but there are {2 * g} interval ends")
    comp = TreeClosed(cid, tree)
    sk = Skeleton((comp,))
    rename = {iid: comp.curved_id(i) for i, iid in enumerate(ids, 1)}
    out = LinComb(sk)
    for d, c in x.terms.items():
        legs = tuple((rename[e], p) for e, p in d.legs)
        out._add_raw(Diagram(sk, legs, d.nv, d.edges, d.loops), c)
    return out


def tree_component(sk, cid: str | None = None) -> TreeClosed:
    if sk.is_marked:
        raise MapError("sigma needs a tree-closed skeleton, got marked graphs")
    trees = [c for c in sk.components if isinstance(c, TreeClosed)]
    if cid is not None:
        trees = [c for c in trees if c.id == cid]
    if len(trees) != 1:
        raise MapError(f"sigma needs exactly one tree-closed component (got {sk})")
    return trees[0]


def default_root(comp: TreeClosed):
    tree_edges = [e for e in comp.edges() if e.kind == "tree"]
    return (tree_edges[0].id, 0)


def _paths_to_root(comp: TreeClosed, root_edge: str):
    """For each skeleton vertex of the component, the tree edges leading to
    the root edge as ``(edge, entered_at)`` pairs plus the root-edge end."""
    edges = {e.id: e for e in comp.edges() if e.kind == "tree"}
    if root_edge not in edges:
        raise MapError(f"root must lie on a tree edge, {root_edge!r} is not one")
    adj = {}
    for e in edges.values():
        if e.id == root_edge:
            continue
        adj.setdefault(e.tail, []).append((e.id, e.head))
        adj.setdefault(e.head, []).append((e.id, e.tail))
    r = edges[root_edge]
    paths = {}
    for end, start in (("tail", r.tail), ("head", r.head)):
        # BFS outward from the root edge; path of x = edges from x back to start
        paths[start] = ([], end)
        queue = deque([start])
        while queue:
            y = queue.popleft()
            for eid, z in adj.get(y, ()):
                if z in paths:
                    continue
                paths[z] = ([eid] + paths[y][0], end)
                queue.append(z)
    return paths


def sigma(x: LinComb, root=None, cid: str | None = None, names=None) -> LinComb:
    """Push all legs off the tree part onto the intervals.

    ``root = (tree edge id, gap)``: the root sits after the first ``gap`` legs
    of that edge.  Every interval endpoint gets tabs for the tree legs met on
    the way from it to the root, the leg nearest the root nearest the
    endpoint; the result sums over all ways of sending each tree leg to one of
    its tabs.  A leg moved along a tree edge against its direction of travel
    towards the endpoint, and a leg landing at an interval's far end, each
    contribute a sign.
    """
    sk = x.skeleton
    comp = tree_component(sk, cid)
    g = comp.g
    others = [c for c in sk.components if c.id != comp.id]
    if names is None:
        names = [f"I{i}" for i in range(1, g + 1)] if not others else [
            f"{comp.id}_{i}" for i in range(1, g + 1)]
    new_comps = []
    for c in sk.components:
        if c.id == comp.id:
            new_comps += [Interval(nm) for nm in names]
        else:
            new_comps.append(c)
    nsk = Skeleton(tuple(new_comps))
    root = default_root(comp) if root is None else root
    root_edge, gap = root
    paths = _paths_to_root(comp, root_edge)
    emap = {e.id: e for e in comp.edges()}
    curved = [emap[comp.curved_id(i)] for i in range(1, g + 1)]
    curved_name = {e.id: names[i] for i, e in enumerate(curved)}

    out = LinComb(nsk)
    for d, c in x.terms.items():
        on = {eid: d.legs_on(eid) for eid in emap}
        if not 0 <= gap <= len(on.get(root_edge, [])):
            raise MapError(f"root gap {gap} out of range on {root_edge}")

        def walk(vertex):
            """Tree legs from ``vertex`` to the root, with their signs."""
            seq = []
            here = vertex
            path, end = paths[vertex]
            for eid in path:
                e = emap[eid]
                legs = on[eid]
                if here == e.tail:
                    seq += [(k, -1) for k in legs]
                    here = e.head
                else:
                    seq += [(k, 1) for k in reversed(legs)]
                    here = e.tail
            legs = on[root_edge]
            if end == "tail":
                seq += [(k, -1) for k in legs[:gap]]
            else:
                seq += [(k, 1) for k in reversed(legs[gap:])]
            return seq

        tabs = []  # (interval index, at_start, [(leg, sign)] from endpoint to root)
        for i, e in enumerate(curved):
            tabs.append((i, True, walk(e.tail)))
            tabs.append((i, False, walk(e.head)))
        tree_legs = [k for eid, e in emap.items() if e.kind == "tree" for k in on[eid]]
        options = {k: [] for k in tree_legs}
        for t, (_, at_start, seq) in enumerate(tabs):
            for depth, (k, s) in enumerate(seq):
                options[k].append((t, depth, s * (1 if at_start else -1)))
        base = list(d.legs)
        for k, col in enumerate(d.legs):
            if col[0] in curved_name:
                base[k] = (curved_name[col[0]], Fraction(col[1]))
        for choice in product(*(options[k] for k in tree_legs)):
            legs = list(base)
            sign = 1
            for k, (t, depth, s) in zip(tree_legs, choice):
                i, at_start, seq = tabs[t]
                sign *= s
                # nearer the root (larger depth) sits nearer the endpoint
                off = Fraction(depth + 1, len(seq) + 2)
                mine = on[curved[i].id]
                if at_start:
                    lo = Fraction(d.legs[mine[0]][1]) if mine else Fraction(0)
                    legs[k] = (names[i], lo - 1 - off)
                else:
                    hi = Fraction(d.legs[mine[-1]][1]) if mine else Fraction(0)
                    legs[k] = (names[i], hi + 1 + off)
            out._add_raw(Diagram(nsk, tuple(legs), d.nv, d.edges, d.loops), c * sign)
    return out


def tree_edges(x_or_sk) -> list[str]:
    sk = x_or_sk.skeleton if isinstance(x_or_sk, LinComb) else x_or_sk
    return [e.id for e in tree_component(sk).edges() if e.kind == "tree"]


# ---------------------------------------------------------------------------
# circles


class UnsupportedInput(ValueError):
    """A circle carries more than ``2n`` legs."""


def remove_circles(x: LinComb, n: int, cids=None) -> LinComb:
    """Replace each targeted circle with ``2n`` legs by the sum over the
    ``(2n-1)!!`` perfect matchings of its legs; fewer legs give zero."""
    sk = x.skeleton
    if sk.is_marked:
        raise MapError("marked graphs have no circles")
    circles = [c.id for c in sk.components if isinstance(c, Circle)]
    if cids is not None:
        cids = list(cids)
        bad = [c for c in cids if c not in circles]
        if bad:
            raise MapError(f"not circle components: {bad}")
        circles = cids
    nsk = sk.without(circles)
    out = LinComb(nsk)
    for d, c in x.terms.items():
        groups = [d.legs_on(cid) for cid in circles]
        if any(len(gr) > 2 * n for gr in groups):
            raise UnsupportedInput(f"a circle carries more than {2 * n} legs")
        if any(len(gr) < 2 * n for gr in groups):
            continue
        for pairings in product(*(perfect_matchings(gr) for gr in groups)):
            r = Raw.of(d)
            removed = [k for gr in groups for k in gr]
            splice(r, removed, [p for pr in pairings for p in pr])
            out._add_raw(r.diagram(nsk), c)
    return out


def perfect_matchings(items):
    items = list(items)
    if not items:
        yield []
        return
    a = items[0]
    for j in range(1, len(items)):
        rest = items[1:j] + items[j + 1:]
        for m in perfect_matchings(rest):
            yield [(a, items[j])] + m


# ---------------------------------------------------------------------------
# constructors


def _cycle(sk, eid, l):
    if l < 1:
        raise MapError("wheel/comb needs l >= 1")
    legs = [(eid, k) for k in range(l)]
    edges = []
    for v in range(l):
        edges.append((("V", v, 1), ("V", (v + 1) % l, 0)))
        edges.append((("V", v, 2), ("L", v)))
    return build(sk, legs, l, edges)


def wheel(l: int, cid: str = "C") -> LinComb:
    """Internal ``l``-cycle, one spoke per cycle vertex, spokes on a circle."""
    return LinComb.of(_cycle(Skeleton((Circle(cid),)), cid, l))


def comb(l: int, cid: str = "I1") -> LinComb:
    """The wheel broken open: the same cycle with its spokes on an interval."""
    return LinComb.of(_cycle(Skeleton((Interval(cid),)), cid, l))


def endpoint_relation(d: Diagram, leg: int) -> LinComb:
    """Move ``leg`` of a diagram on intervals to just inside every interval
    endpoint: ``+`` at starts, ``-`` at ends.  The sum vanishes in the quotient."""
    ids = _require_intervals(d.skeleton)
    terms = []
    for iid in ids:
        on = [k for k in d.legs_on(iid) if k != leg]
        first = Fraction(d.legs[on[0]][1]) if on else Fraction(0)
        last = Fraction(d.legs[on[-1]][1]) if on else Fraction(0)
        for pos, s in ((first - 1, 1), (last + 1, -1)):
            legs = list(d.legs)
            legs[leg] = (iid, pos)
            terms.append((s, Diagram(d.skeleton, tuple(legs), d.nv, d.edges, d.loops)))
    return LinComb.sum_of(d.skeleton, terms)


def to_circle(x: LinComb, cid: str | None = None) -> LinComb:
    """Identify a genus-one tree-closed component with a circle.

    The closing tree edge follows the curved edge; if it points the other
    way each leg on it picks up the bivalent branching sign ``-1``.
    """
    sk = x.skeleton
    comp = tree_component(sk, cid)
    if comp.g != 1:
        raise MapError("only genus-one components are circles")
    curved, tree = comp.edges()
    forward = tree.tail == curved.head
    new_comps = tuple(Circle(comp.id) if c.id == comp.id else c for c in sk.components)
    nsk = Skeleton(new_comps)
    out = LinComb(nsk)
    for d, c in x.terms.items():
        on_c, on_t = d.legs_on(curved.id), d.legs_on(tree.id)
        order = on_c + (on_t if forward else on_t[::-1])
        legs = list(d.legs)
        for pos, k in enumerate(order):
            legs[k] = (comp.id, pos)
        sign = 1 if forward else (-1) ** len(on_t)
        out._add_raw(Diagram(nsk, tuple(legs), d.nv, d.edges, d.loops), c * sign)
    return out
