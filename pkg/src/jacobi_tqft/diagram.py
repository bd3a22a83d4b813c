"""Chord diagrams, canonical forms and formal linear combinations.

Half-edges of a diagram with ``L`` legs and ``nv`` trivalent vertices are
numbered ``0..L-1`` for the legs and ``L + 3*v + s`` for slot ``s`` of vertex
``v``.  The slot order ``0, 1, 2`` at a vertex is its cyclic orientation.
``edges`` is a perfect matching on the half-edges.  A leg's *color* is its
placement ``(edge id, position)`` on a skeleton, or ``(label,)`` for marked
graphs.  ``loops`` counts closed Q-components without vertices, which appear
when circles are removed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .skeleton import EMPTY, Skeleton, MarkedSkeleton, SkeletonError, union


class DiagramError(ValueError):
    """Structural problem with a diagram (unmatched slot, bad placement...)."""


_EVEN = {(0, 1, 2), (1, 2, 0), (2, 0, 1)}


@dataclass(frozen=True)
class Diagram:
    skeleton: Skeleton | MarkedSkeleton
    legs: tuple
    nv: int
    edges: tuple[tuple[int, int], ...]
    loops: int = 0

    def __post_init__(self):
        n = len(self.legs) + 3 * self.nv
        seen = [0] * n
        for a, b in self.edges:
            if a == b or not (0 <= a < n and 0 <= b < n):
                raise DiagramError(f"bad edge {a}-{b}")
            seen[a] += 1
            seen[b] += 1
        if any(c != 1 for c in seen):
            bad = [h for h, c in enumerate(seen) if c != 1]
            raise DiagramError(f"half-edges {bad} are not matched exactly once")
        if self.skeleton.is_marked:
            for col in self.legs:
                if len(col) != 1 or not 1 <= col[0] <= self.skeleton.g:
                    raise DiagramError(f"leg label {col} out of range 1..{self.skeleton.g}")
        else:
            emap = self.skeleton.edge_map
            for col in self.legs:
                if len(col) != 2 or col[0] not in emap:
                    raise DiagramError(f"leg placed on unknown edge {col}")

    @property
    def nlegs(self) -> int:
        return len(self.legs)

    @property
    def degree(self) -> int:
        return degree(self)

    def partner(self) -> dict[int, int]:
        p = {}
        for a, b in self.edges:
            p[a] = b
            p[b] = a
        return p

    def vslot(self, v: int, s: int) -> int:
        return len(self.legs) + 3 * v + s

    def split(self, h: int) -> tuple[str, int, int]:
        """Half-edge -> ('L', leg, 0) or ('V', vertex, slot)."""
        L = len(self.legs)
        if h < L:
            return ("L", h, 0)
        v, s = divmod(h - L, 3)
        return ("V", v, s)

    def legs_on(self, edge_id: str) -> list[int]:
        """Leg indices on a skeleton edge, sorted by position."""
        on = [i for i, c in enumerate(self.legs) if c[0] == edge_id]
        return sorted(on, key=lambda i: self.legs[i][1])

    def sort_key(self):
        return (self.loops, self.nv, len(self.legs), self.legs, self.edges)


def degree(d: Diagram) -> int:
    tot = d.nv + len(d.legs)
    if tot % 2:
        raise DiagramError("odd number of Q-vertices")
    return tot // 2


def build(skeleton, legs: Iterable, nv: int, edges: Iterable, loops: int = 0) -> Diagram:
    """Construct a raw diagram; half-edges given as ``('L', i)`` / ``('V', v, s)``
    tuples or plain integers."""
    legs = tuple(tuple(c) for c in legs)
    L = len(legs)

    def code(h):
        if isinstance(h, int):
            return h
        if h[0] == "L":
            return h[1]
        return L + 3 * h[1] + h[2]

    es = tuple(tuple(sorted((code(a), code(b)))) for a, b in edges)
    return Diagram(skeleton, legs, nv, tuple(sorted(es)), loops)


# ---------------------------------------------------------------------------
# canonical form


def _normalize_positions(d: Diagram):
    """Dense integer positions per edge; returns (colors, circle groups)."""
    if d.skeleton.is_marked:
        return list(d.legs), []
    by_edge: dict[str, list[int]] = {}
    for i, (eid, pos) in enumerate(d.legs):
        by_edge.setdefault(eid, []).append(i)
    colors = [None] * len(d.legs)
    circles = []
    emap = d.skeleton.edge_map
    for eid, idx in by_edge.items():
        idx.sort(key=lambda i: d.legs[i][1])
        if len({d.legs[i][1] for i in idx}) != len(idx):
            raise DiagramError(f"two legs share a position on edge {eid}")
        for p, i in enumerate(idx):
            colors[i] = (eid, p)
        if emap[eid].cyclic and len(idx) > 1:
            circles.append((eid, idx))
    return colors, circles


def _components(L: int, nv: int, partner: dict[int, int]):
    """Connected components of the chord graph as lists of half-edges."""
    n = L + 3 * nv
    node = lambda h: ("L", h) if h < L else ("V", (h - L) // 3)
    members = lambda nd: [nd[1]] if nd[0] == "L" else [L + 3 * nd[1] + s for s in range(3)]
    seen = set()
    comps = []
    for h0 in range(n):
        nd0 = node(h0)
        if nd0 in seen:
            continue
        seen.add(nd0)
        stack = [nd0]
        hs = []
        while stack:
            nd = stack.pop()
            for h in members(nd):
                hs.append(h)
                nd2 = node(partner[h])
                if nd2 not in seen:
                    seen.add(nd2)
                    stack.append(nd2)
        comps.append(sorted(hs))
    return comps


def _canon_component(comp, L, partner, colors):
    """Canonical code of one connected component of the chord graph.

    A labelling is produced by breadth-first search from a start (the legs of
    smallest color, or every vertex slot when there are no legs); each newly
    reached vertex takes its arrival half-edge as slot 0 and branches over the
    order of the other two.  Every dequeued half-edge emits the label of its
    partner; the emitted sequence determines the labelled component, so the
    lexicographically smallest sequence is a canonical code.  Branches whose
    prefix already exceeds the best code are pruned.

    Returns (code, sign, vertex order, leg order); sign 0 means two minimal
    labellings disagree in orientation, i.e. the component vanishes by AS.
    """
    legs = [h for h in comp if h < L]
    if legs:
        cmin = min(colors[h] for h in legs)
        starts = [("L", h) for h in legs if colors[h] == cmin]
    else:
        starts = [("V", (h - L) // 3, (h - L) % 3, f) for h in comp for f in (0, 1)]
    best = {"code": None, "signs": set(), "hit": None, "ver": 0}

    def prefix_state(code, cmp, ver):
        """-1 smaller than best prefix, 0 equal, 1 larger (prune)."""
        if best["code"] is None:
            return 0, best["ver"]
        if ver != best["ver"] or cmp == 0:
            n = len(code)
            ref = best["code"][:n]
            cmp = -1 if tuple(code) < ref else (0 if tuple(code) == ref else 1)
        return cmp, best["ver"]

    def run(vlab, llab, queue, qi, code, cmp, ver):
        while qi < len(queue):
            h = queue[qi]
            qi += 1
            p = partner[h]
            if p < L:
                if p not in llab:
                    llab[p] = len(llab)
                tok = (0, colors[p], llab[p])
            else:
                v, s = divmod(p - L, 3)
                if v not in vlab:
                    others = [t for t in (0, 1, 2) if t != s]
                    for o in (others, others[::-1]):
                        order = (s, o[0], o[1])
                        vl = dict(vlab)
                        vl[v] = (len(vlab), order)
                        c2 = code + [(1, len(vlab), 0)]
                        cm, vv = prefix_state(c2, cmp, ver)
                        if cm > 0:
                            continue
                        q2 = queue + [L + 3 * v + order[1], L + 3 * v + order[2]]
                        run(vl, dict(llab), q2, qi, c2, cm, vv)
                    return
                k, order = vlab[v]
                tok = (1, k, order.index(s))
            code = code + [tok]
            cmp, ver = prefix_state(code, cmp, ver)
            if cmp > 0:
                return
        sign = 1
        for _, order in vlab.values():
            if order not in _EVEN:
                sign = -sign
        code = tuple(code)
        if best["code"] is None or code < best["code"]:
            best["code"] = code
            best["signs"] = {sign}
            best["hit"] = (vlab, llab)
            best["ver"] += 1
        elif code == best["code"]:
            best["signs"].add(sign)

    for st in starts:
        if st[0] == "L":
            code = [(0, colors[st[1]], 0)]
            cm, vv = prefix_state(code, 0, -1)
            if cm <= 0:
                run({}, {st[1]: 0}, [st[1]], 0, code, cm, vv)
        else:
            _, v, s, flip = st
            others = [t for t in (0, 1, 2) if t != s]
            if flip:
                others.reverse()
            order = (s, others[0], others[1])
            code = [(1, 0, 0)]
            cm, vv = prefix_state(code, 0, -1)
            if cm <= 0:
                run({v: (0, order)}, {}, [L + 3 * v + t for t in order], 0, code, cm, vv)
    vlab, llab = best["hit"]
    vord = [(v, vlab[v][1]) for v in sorted(vlab, key=lambda v: vlab[v][0])]
    lord = sorted(llab, key=llab.get)
    signs = best["signs"]
    return best["code"], (0 if len(signs) > 1 else next(iter(signs))), vord, lord


def canonicalize(d: Diagram):
    """Return ``(canonical diagram, sign)`` or ``None`` if the diagram is zero
    by antisymmetry (it has an orientation-reversing automorphism)."""
    L = len(d.legs)
    partner = d.partner()
    colors0, circles = _normalize_positions(d)
    comps = _components(L, d.nv, partner)
    rot_choices = [range(len(idx)) for _, idx in circles]
    best = None
    signs = set()
    for rots in product(*rot_choices):
        colors = list(colors0)
        for (eid, idx), r in zip(circles, rots):
            k = len(idx)
            for i in idx:
                colors[i] = (eid, (colors0[i][1] - r) % k)
        parts = []
        zero = False
        for comp in comps:
            enc, sign, vord, lord = _canon_component(comp, L, partner, colors)
            if sign == 0:
                zero = True
                break
            parts.append((enc, sign, vord, lord))
        if zero:
            return None
        parts.sort(key=lambda t: t[0])
        key = tuple(p[0] for p in parts)
        sign = 1
        for p in parts:
            sign *= p[1]
        if best is None or key < best[0]:
            best = (key, colors, parts)
            signs = {sign}
        elif key == best[0]:
            signs.add(sign)
    if len(signs) > 1:
        return None
    _, colors, parts = best
    (sign,) = signs
    # rebuild with the winning labelling
    vmap: dict[int, tuple[int, tuple]] = {}
    lmap: dict[int, int] = {}
    for _, _, vord, lord in parts:
        for v, order in vord:
            vmap[v] = (len(vmap), order)
        for l in lord:
            lmap[l] = len(lmap)

    def new(h):
        if h < L:
            return lmap[h]
        v, s = divmod(h - L, 3)
        k, order = vmap[v]
        return L + 3 * k + order.index(s)

    legs = [None] * L
    for l, k in lmap.items():
        legs[k] = tuple(colors[l])
    es = tuple(sorted(tuple(sorted((new(a), new(b)))) for a, b in d.edges))
    return Diagram(d.skeleton, tuple(legs), d.nv, es, d.loops), sign


def is_zero_diagram(d: Diagram) -> bool:
    return canonicalize(d) is None


def flip_vertex(d: Diagram, v: int) -> Diagram:
    """Reverse the cyclic order at vertex ``v`` (swap slots 1 and 2)."""
    a, b = d.vslot(v, 1), d.vslot(v, 2)
    sw = {a: b, b: a}
    es = tuple(sorted(tuple(sorted((sw.get(x, x), sw.get(y, y)))) for x, y in d.edges))
    return Diagram(d.skeleton, d.legs, d.nv, es, d.loops)


def relabel(d: Diagram, leg_perm, vert_perm, rotations=None) -> Diagram:
    """Isomorphic copy: leg i -> leg_perm[i], vertex v -> vert_perm[v], and
    vertex slots rotated cyclically by rotations[v] (orientation preserved)."""
    L = len(d.legs)
    rotations = rotations or [0] * d.nv

    def new(h):
        if h < L:
            return leg_perm[h]
        v, s = divmod(h - L, 3)
        return L + 3 * vert_perm[v] + (s + rotations[v]) % 3

    legs = [None] * L
    for i, c in enumerate(d.legs):
        legs[leg_perm[i]] = c
    es = tuple(sorted(tuple(sorted((new(a), new(b)))) for a, b in d.edges))
    return Diagram(d.skeleton, tuple(legs), d.nv, es, d.loops)


# ---------------------------------------------------------------------------
# linear combinations


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class LinComb:
    """Finite formal sum of canonical diagrams with rational coefficients."""

    __slots__ = ("skeleton", "terms")

    def __init__(self, skeleton, terms: Mapping[Diagram, Fraction] | None = None):
        self.skeleton = skeleton
        self.terms: dict[Diagram, Fraction] = {}
        if terms:
            for d, c in terms.items():
                if d.skeleton != skeleton:
                    raise DiagramError("all terms of a LinComb must share one skeleton")
                c = _frac(c)
                if c:
                    self.terms[d] = c

    @classmethod
    def zero(cls, skeleton) -> "LinComb":
        return cls(skeleton)

    @classmethod
    def of(cls, d: Diagram, coeff=1) -> "LinComb":
        out = cls(d.skeleton)
        out._add_raw(d, _frac(coeff))
        return out

    @classmethod
    def sum_of(cls, skeleton, pairs) -> "LinComb":
        """Sum of ``(coeff, raw diagram)`` pairs; raw diagrams get canonicalized."""
        out = cls(skeleton)
        for c, d in pairs:
            out._add_raw(d, _frac(c))
        return out

    def _add_raw(self, d: Diagram, c: Fraction) -> None:
        if d.skeleton != self.skeleton:
            raise DiagramError(f"skeleton mismatch: {d.skeleton} vs {self.skeleton}")
        can = canonicalize(d)
        if can is None or not c:
            return
        dd, s = can
        v = self.terms.get(dd, 0) + s * c
        if v:
            self.terms[dd] = v
        else:
            self.terms.pop(dd, None)

    def copy(self) -> "LinComb":
        out = LinComb(self.skeleton)
        out.terms = dict(self.terms)
        return out

    def items(self):
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.skeleton != other.skeleton:
            raise DiagramError(f"skeleton mismatch: {self.skeleton} vs {other.skeleton}")

    def __add__(self, other: "LinComb") -> "LinComb":
        self._check(other)
        out = self.copy()
        for d, c in other.terms.items():
            v = out.terms.get(d, 0) + c
            if v:
                out.terms[d] = v
            else:
                out.terms.pop(d, None)
        return out

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, LinComb):
            return disjoint_union(self, k)
        k = _frac(k)
        out = LinComb(self.skeleton)
        if k:
            out.terms = {d: c * k for d, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.skeleton == other.skeleton and self.terms == other.terms

    def __hash__(self):
        return hash((self.skeleton, frozenset(self.terms.items())))

    def coeff(self, d: Diagram) -> Fraction:
        can = canonicalize(d)
        if can is None:
            return Fraction(0)
        dd, s = can
        return s * self.terms.get(dd, Fraction(0))

    def degrees(self) -> set[int]:
        return {degree(d) for d in self.terms}

    def homogeneous(self, n: int) -> "LinComb":
        return LinComb(self.skeleton, {d: c for d, c in self.terms.items() if degree(d) == n})

    def map_terms(self, f, skeleton=None) -> "LinComb":
        """Apply a term-wise linear map ``f(diagram) -> LinComb`` and merge."""
        out = None
        for d, c in self.items():
            img = f(d) * c
            out = img if out is None else out + img
        if out is None:
            return LinComb(self.skeleton if skeleton is None else skeleton)
        return out

    def __repr__(self):
        from .textio import serialize

        return f"LinComb<\n{serialize(self)}>"


# ---------------------------------------------------------------------------
# elementary algebra


def union_diagrams(a: Diagram, b: Diagram, skeleton=None) -> Diagram:
    La, Lb = len(a.legs), len(b.legs)
    L = La + Lb

    def ma(h):
        return h if h < La else L + (h - La)

    def mb(h):
        return La + h if h < Lb else L + 3 * a.nv + (h - Lb)

    es = [tuple(sorted((ma(x), ma(y)))) for x, y in a.edges]
    es += [tuple(sorted((mb(x), mb(y)))) for x, y in b.edges]
    sk = skeleton if skeleton is not None else union(a.skeleton, b.skeleton)
    return Diagram(sk, a.legs + b.legs, a.nv + b.nv, tuple(sorted(es)), a.loops + b.loops)


def disjoint_union(a: LinComb, b: LinComb) -> LinComb:
    """Bilinear disjoint union; with a closed factor this is the module action."""
    sk = union(a.skeleton, b.skeleton)
    out = LinComb(sk)
    for da, ca in a.terms.items():
        for db, cb in b.terms.items():
            out._add_raw(union_diagrams(da, db, sk), ca * cb)
    return out


def reverse_component(x: LinComb | Diagram, cid: str) -> LinComb:
    """Reverse the orientation of a skeleton component.

    Leg order on every edge of the component is reversed and each term picks
    up ``(-1)**m`` for ``m`` legs on the component.
    """
    if isinstance(x, Diagram):
        x = LinComb.of(x)
    sk = x.skeleton
    if sk.is_marked:
        raise SkeletonError("marked graphs have no skeleton components")
    comp = sk.component(cid)
    new_comp = type(comp)(**{**comp.__dict__, "reversed": not comp.reversed})
    comps = tuple(new_comp if c.id == cid else c for c in sk.components)
    nsk = Skeleton(comps)
    own = {e.id for e in comp.edges()}
    out = LinComb(nsk)
    for d, c in x.terms.items():
        legs = []
        m = 0
        for eid, pos in d.legs:
            if eid in own:
                m += 1
                legs.append((eid, -pos))
            else:
                legs.append((eid, pos))
        nd = Diagram(nsk, tuple(legs), d.nv, d.edges, d.loops)
        out._add_raw(nd, c * (-1) ** m)
    return out


def theta() -> Diagram:
    """The theta graph: two vertices joined by three parallel edges."""
    return build(EMPTY, (), 2, [(("V", 0, s), ("V", 1, s)) for s in range(3)])


def empty_diagram(skeleton=EMPTY) -> Diagram:
    return Diagram(skeleton, (), 0, ())


def one(skeleton=EMPTY) -> LinComb:
    return LinComb.of(empty_diagram(skeleton))


# ---------------------------------------------------------------------------
# mutable editing


class Raw:
    """Editable form of a diagram with symbolic half-edges.

    Half-edges are ``('L', key)`` or ``('V', key, slot)``; keys are arbitrary
    hashables so legs and vertices can be added and removed freely.
    """

    def __init__(self, skeleton, legs=None, verts=None, partner=None, loops=0):
        self.skeleton = skeleton
        self.legs: dict = dict(legs or {})
        self.verts: list = list(verts or [])
        self.partner: dict = dict(partner or {})
        self.loops = loops
        self._fresh = 0

    @classmethod
    def of(cls, d: Diagram) -> "Raw":
        r = cls(d.skeleton, loops=d.loops)
        for i, c in enumerate(d.legs):
            r.legs[i] = c
        r.verts = list(range(d.nv))
        for a, b in d.edges:
            ha, hb = r.half(d, a), r.half(d, b)
            r.partner[ha] = hb
            r.partner[hb] = ha
        return r

    @staticmethod
    def half(d: Diagram, h: int):
        L = len(d.legs)
        if h < L:
            return ("L", h)
        v, s = divmod(h - L, 3)
        return ("V", v, s)

    def copy(self) -> "Raw":
        r = Raw(self.skeleton, self.legs, self.verts, self.partner, self.loops)
        r._fresh = self._fresh
        return r

    def fresh(self, tag="n"):
        self._fresh += 1
        return (tag, self._fresh)

    def link(self, a, b) -> None:
        self.partner[a] = b
        self.partner[b] = a

    def unlink(self, a):
        b = self.partner.pop(a)
        self.partner.pop(b, None)
        return b

    def remove_leg(self, key):
        """Drop a leg; returns the half-edge it was matched to (now dangling)."""
        h = ("L", key)
        other = self.partner.pop(h)
        self.partner.pop(other, None)
        del self.legs[key]
        return other

    def add_leg(self, color, to=None):
        key = self.fresh("l")
        self.legs[key] = color
        if to is not None:
            self.link(("L", key), to)
        return key

    def add_vertex(self):
        key = self.fresh("v")
        self.verts.append(key)
        return key

    def remove_vertex(self, key):
        """Drop a vertex; returns its three former partners (slot order)."""
        outs = []
        for s in range(3):
            h = ("V", key, s)
            o = self.partner.pop(h)
            if o[0] == "V" and o[1] == key:
                outs.append(o)
                continue
            self.partner.pop(o, None)
            outs.append(o)
        self.verts.remove(key)
        return outs

    def legs_on(self, edge_id):
        on = [k for k, c in self.legs.items() if c[0] == edge_id]
        return sorted(on, key=lambda k: self.legs[k][1])

    def diagram(self, skeleton=None) -> Diagram:
        sk = self.skeleton if skeleton is None else skeleton
        lkeys = list(self.legs)
        lidx = {k: i for i, k in enumerate(lkeys)}
        vidx = {k: i for i, k in enumerate(self.verts)}
        L = len(lkeys)

        def code(h):
            if h[0] == "L":
                return lidx[h[1]]
            return L + 3 * vidx[h[1]] + h[2]

        es = set()
        for a, b in self.partner.items():
            es.add(tuple(sorted((code(a), code(b)))))
        legs = tuple(self.legs[k] for k in lkeys)
        return Diagram(sk, legs, len(self.verts), tuple(sorted(es)), self.loops)


def splice(r: Raw, removed_legs, pairing) -> None:
    """Delete ``removed_legs`` and join them in pairs according to ``pairing``
    (a list of leg-key pairs).  Chains of joined legs are contracted to single
    edges; chains that close up become vertexless loops."""
    removed = set(removed_legs)
    join = {}
    for a, b in pairing:
        join[a] = b
        join[b] = a
    ends = {k: r.partner[("L", k)] for k in removed}
    for k in removed:
        r.partner.pop(("L", k), None)
        del r.legs[k]
    for k, o in ends.items():
        if r.partner.get(o) == ("L", k):
            del r.partner[o]
    seen = set()
    # walk chains starting from half-edges outside the removed set
    for k in removed:
        if k in seen:
            continue
        o = ends[k]
        if o[0] == "L" and o[1] in removed:
            continue
        # o is an outside half-edge attached to removed leg k
        seen.add(k)
        cur = join[k]
        while True:
            seen.add(cur)
            nxt = ends[cur]
            if nxt[0] == "L" and nxt[1] in removed:
                seen.add(nxt[1])
                cur = join[nxt[1]]
                continue
            r.link(o, nxt)
            break
    for k in removed:
        if k in seen:
            continue
        # closed chain of removed legs only
        cur = k
        while cur not in seen:
            seen.add(cur)
            nxt = ends[cur][1]
            seen.add(nxt)
            cur = join[nxt]
        r.loops += 1
