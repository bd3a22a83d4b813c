"""AS/IHX/STU/branching relations and the quotient spaces they define.

Sign conventions (all checked against the Lie-algebra weight system):

* STU: for legs ``x`` then ``y`` adjacent along an edge, ``T - U - S = 0``
  where ``U`` swaps them and ``S`` joins their partners at a new vertex with
  slot order ``(x-partner, y-partner, new leg)``, the new leg taking ``x``'s
  place.
* IHX: for an internal edge ``u-v`` with ``u = (a, b, e)`` and
  ``v = (e, c, d)``, the three diagrams obtained by cycling ``a, b, c`` sum
  to zero.
* Branching at a skeleton vertex: ``sum_j eps_j D_j = 0`` where ``D_j`` has the
  leg next to the vertex on incident end ``j`` and ``eps_j`` is ``+1`` for an
  outgoing edge, ``-1`` for an incoming one.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .diagram import Diagram, LinComb, Raw, canonicalize
from .linalg import Echelon

log = logging.getLogger(__name__)

DEFAULT_CAP = 3


class CapExceeded(ValueError):
    pass


# ---------------------------------------------------------------------------
# enumeration


def _structures(L: int, V: int):
    """Perfect matchings of the half-edges of ``L`` labelled legs and ``V``
    interchangeable trivalent vertices, without self-loops, up to the obvious
    vertex and slot symmetries (the survivors are deduplicated later)."""
    n = L + 3 * V
    partner = [-1] * n

    def rec():
        try:
            h = partner.index(-1)
        except ValueError:
            yield tuple((a, b) for a, b in enumerate(partner) if a < b)
            return
        vh = (h - L) // 3 if h >= L else -1
        first_untouched = True
        for k in range(h + 1, n):
            if partner[k] != -1:
                continue
            if k >= L:
                vk, sk = divmod(k - L, 3)
                if vk == vh:
                    continue
                if sk and partner[k - 1] == -1:
                    continue  # lower free slot of the same vertex is equivalent
                base = L + 3 * vk
                if all(partner[base + t] == -1 for t in range(3)):
                    if not first_untouched:
                        continue
                    first_untouched = False
            partner[h] = k
            partner[k] = h
            yield from rec()
            partner[h] = -1
            partner[k] = -1

    yield from rec()


@lru_cache(maxsize=None)
def _structure_list(L: int, V: int):
    return list(_structures(L, V))


def enumerate_diagrams(skeleton, n: int, cap: int = DEFAULT_CAP) -> list[Diagram]:
    """All nonzero canonical diagrams of degree exactly ``n`` (sorted)."""
    if n > cap:
        raise CapExceeded(f"degree {n} exceeds cap {cap}")
    if n < 0:
        return []
    found: dict[Diagram, None] = {}
    for L in range(0, 2 * n + 1):
        V = 2 * n - L
        structs = _structure_list(L, V)
        for colors in skeleton.placements(L):
            for es in structs:
                d = Diagram(skeleton, colors, V, es)
                can = canonicalize(d)
                if can is not None:
                    found.setdefault(can[0])
    return sorted(found, key=Diagram.sort_key)


# ---------------------------------------------------------------------------
# relation generators


@dataclass
class Relation:
    vector: LinComb
    kind: str
    source: Diagram
    detail: tuple = ()


def _between(r: Raw, eid, before=None, after=None):
    """A position on edge ``eid`` strictly between two leg keys (None = end)."""
    lo = r.legs[before][1] if before is not None else None
    hi = r.legs[after][1] if after is not None else None
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (Fraction(lo) + Fraction(hi)) / 2


def ihx_relations(d: Diagram) -> list[Relation]:
    out = []
    base = Raw.of(d)
    for (u, su), (v, sv) in _internal_edges(d):
        a, b = ("V", u, (su + 1) % 3), ("V", u, (su + 2) % 3)
        c, dd = ("V", v, (sv + 1) % 3), ("V", v, (sv + 2) % 3)
        stubs = [a, b, c, dd]
        terms = []
        for perm in ((a, b, c, dd), (b, c, a, dd), (c, a, b, dd)):
            r = base.copy()
            outside = {s: r.partner[s] for s in stubs}
            for s in stubs:
                r.partner.pop(s, None)
            r.partner.pop(("V", u, su), None)
            r.partner.pop(("V", v, sv), None)
            for s in stubs:
                o = outside[s]
                if r.partner.get(o) == s:
                    del r.partner[o]
            pos = {perm[0]: ("V", u, 0), perm[1]: ("V", u, 1), perm[2]: ("V", v, 1), perm[3]: ("V", v, 2)}
            r.link(("V", u, 2), ("V", v, 0))
            for s in stubs:
                o = outside[s]
                if o in pos:
                    r.link(pos[s], pos[o])
                else:
                    r.link(pos[s], o)
            terms.append((1, r.diagram()))
        out.append(Relation(LinComb.sum_of(d.skeleton, terms), "IHX", d, (u, su, v, sv)))
    return out


def _internal_edges(d: Diagram):
    L = len(d.legs)
    res = []
    for x, y in d.edges:
        if x >= L and y >= L:
            u, su = divmod(x - L, 3)
            v, sv = divmod(y - L, 3)
            if u != v:
                res.append(((u, su), (v, sv)))
    return res


def _stu_from_pair(d: Diagram, r0: Raw, kx, ky) -> LinComb:
    """T - U - S for legs ``kx`` immediately followed by ``ky``."""
    t = r0.diagram()
    ru = r0.copy()
    cx, cy = ru.legs[kx], ru.legs[ky]
    ru.legs[kx], ru.legs[ky] = (cx[0], cy[1]), (cy[0], cx[1])
    rs = r0.copy()
    px = rs.remove_leg(kx)
    if px == ("L", ky):
        px = py = None
        del rs.legs[ky]
    else:
        py = rs.remove_leg(ky)
    w = rs.add_vertex()
    if px is None:
        rs.link(("V", w, 0), ("V", w, 1))
    else:
        rs.link(("V", w, 0), px)
        rs.link(("V", w, 1), py)
    rs.add_leg(cx, ("V", w, 2))
    return LinComb.sum_of(d.skeleton, [(1, t), (-1, ru.diagram()), (-1, rs.diagram())])


def stu_relations(d: Diagram) -> list[Relation]:
    sk = d.skeleton
    if sk.is_marked:
        return []
    out = []
    r0 = Raw.of(d)
    for e in sk.edges:
        on = r0.legs_on(e.id)
        pairs = list(zip(on, on[1:]))
        if e.cyclic and len(on) >= 2:
            pairs.append((on[-1], on[0]))
        for kx, ky in pairs:
            if e.cyclic and (kx, ky) == (on[-1], on[0]):
                # rotate so the pair is adjacent in linear order
                r = r0.copy()
                r.legs[ky] = (e.id, Fraction(r.legs[kx][1]) + 1)
                vec = _stu_from_pair(d, r, kx, ky)
            else:
                vec = _stu_from_pair(d, r0, kx, ky)
            out.append(Relation(vec, "STU", d, (e.id, kx, ky)))
    # the same relations seen from the S side
    L = len(d.legs)
    for v in range(d.nv):
        for s in range(3):
            p = d.partner()[L + 3 * v + s]
            if p >= L:
                continue
            leg = p
            eid, pos = d.legs[leg]
            r = Raw.of(d)
            hx = r.partner[("V", v, (s + 1) % 3)]
            hy = r.partner[("V", v, (s + 2) % 3)]
            if hx[0] == "V" and hx[1] == v:
                continue  # self-loop: S vanishes, nothing new
            r.remove_vertex(v)
            r.partner.pop(("L", leg), None)
            del r.legs[leg]
            kx = r.add_leg((eid, Fraction(pos) - Fraction(1, 3)), hx)
            ky = r.add_leg((eid, Fraction(pos) + Fraction(1, 3)), hy)
            vec = _stu_from_pair(d, r, kx, ky)
            out.append(Relation(vec, "STU", d, ("S", v, s)))
    return out


def branching_relations(d: Diagram) -> list[Relation]:
    sk = d.skeleton
    if sk.is_marked:
        return []
    out = []
    r0 = Raw.of(d)
    for vname, ends in sk.vertices.items():
        for eid, end in ends:
            on = r0.legs_on(eid)
            if not on:
                continue
            leg = on[0] if end == "tail" else on[-1]
            terms = []
            for eid2, end2 in ends:
                r = r0.copy()
                on2 = [k for k in r.legs_on(eid2) if k != leg]
                if end2 == "tail":
                    pos = _between(r, eid2, None, on2[0] if on2 else None)
                else:
                    pos = _between(r, eid2, on2[-1] if on2 else None, None)
                r.legs[leg] = (eid2, pos)
                terms.append((1 if end2 == "tail" else -1, r.diagram()))
            vec = LinComb.sum_of(sk, terms)
            out.append(Relation(vec, "branching", d, (vname, eid, end)))
    return out


def generate_relations(skeleton, n: int, cap: int = DEFAULT_CAP) -> list[Relation]:
    rels = []
    for d in enumerate_diagrams(skeleton, n, cap):
        rels += ihx_relations(d)
        rels += stu_relations(d)
        rels += branching_relations(d)
    return rels


# ---------------------------------------------------------------------------
# quotient spaces


def _column_key(d: Diagram):
    tree_legs = 0
    if not d.skeleton.is_marked:
        emap = d.skeleton.edge_map
        tree_legs = sum(1 for eid, _ in d.legs if emap[eid].kind == "tree")
    return (-d.nv, -tree_legs, d.sort_key())


@dataclass
class QuotientBasis:
    skeleton: object
    degree: int
    diagrams: list[Diagram]
    echelon: Echelon
    nrelations: int
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {d: k for k, d in enumerate(self.diagrams)}

    @property
    def count(self) -> int:
        return len(self.diagrams)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def dim(self) -> int:
        return self.count - self.rank

    @property
    def basis(self) -> list[Diagram]:
        piv = self.echelon.pivots
        return [d for k, d in enumerate(self.diagrams) if k not in piv]

    def vector(self, x: LinComb) -> dict[int, Fraction]:
        v = {}
        for d, c in x.terms.items():
            v[self.index[d]] = c
        return v

    def combination(self, v: dict[int, Fraction]) -> LinComb:
        return LinComb(self.skeleton, {self.diagrams[k]: c for k, c in v.items()})

    def reduce(self, x: LinComb) -> LinComb:
        return self.combination(self.echelon.reduce(self.vector(x)))

    def coordinates(self, x: LinComb) -> dict[Diagram, Fraction]:
        return dict(self.reduce(x).terms)


_CACHE: dict = {}


def quotient_basis(skeleton, n: int, cap: int = DEFAULT_CAP, order=None) -> QuotientBasis:
    """Echelon data of the degree-``n`` part of the quotient space.

    ``order`` optionally permutes the diagram list (used to test that the
    dimension does not depend on it); by default columns are sorted so that
    diagrams with more trivalent vertices, and with legs on tree edges, are
    eliminated first.
    """
    if n > cap:
        raise CapExceeded(f"degree {n} exceeds cap {cap}")
    key = (skeleton, n)
    if order is None and key in _CACHE:
        return _CACHE[key]
    diagrams = enumerate_diagrams(skeleton, n, cap)
    diagrams.sort(key=_column_key)
    if order is not None:
        diagrams = [diagrams[i] for i in order]
    qb = QuotientBasis(skeleton, n, diagrams, Echelon(), 0)
    rels = generate_relations(skeleton, n, cap)
    qb.nrelations = len(rels)
    for rel in rels:
        qb.echelon.add(qb.vector(rel.vector))
    log.debug("quotient %s deg %d: %d diagrams, rank %d", skeleton, n, qb.count, qb.rank)
    if order is None:
        _CACHE[key] = qb
    return qb


def split_loops(x: LinComb) -> dict[int, LinComb]:
    """Group terms by their number of vertexless loops, with the loops removed.

    Loops are a free formal factor: no relation involves them.
    """
    out: dict[int, LinComb] = {}
    for d, c in x.terms.items():
        part = out.setdefault(d.loops, LinComb(x.skeleton))
        part._add_raw(replace(d, loops=0), c)
    return out


def with_loops(x: LinComb, k: int) -> LinComb:
    if not k:
        return x
    return LinComb(x.skeleton, {replace(d, loops=d.loops + k): c for d, c in x.terms.items()})


def normal_form(x: LinComb, cap: int = DEFAULT_CAP) -> LinComb:
    out = LinComb(x.skeleton)
    for k, part in sorted(split_loops(x).items()):
        for n in sorted(part.degrees()):
            if n > cap:
                raise CapExceeded(f"degree {n} exceeds cap {cap}")
            red = quotient_basis(x.skeleton, n, cap).reduce(part.homogeneous(n))
            out = out + with_loops(red, k)
    return out


def equal(x: LinComb, y: LinComb, cap: int = DEFAULT_CAP) -> bool:
    return normal_form(x - y, cap).is_zero()
