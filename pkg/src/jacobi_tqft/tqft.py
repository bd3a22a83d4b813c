"""Diagram-level TQFT structure on the spaces A(Gamma_g).

A genus-``g`` vector is a LinComb on one chain-graph component (the empty
skeleton for ``g = 0``).  ``include`` is disjoint union; ``pair`` clears the
tree parts with sigma, reverses the second input, glues interval ``i`` of the
first to interval ``match[i]`` of the second into a circle and removes the
circles.  No normalizing or framing factors are applied.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram, LinComb, disjoint_union, one, reverse_component, union_diagrams
from .maps import MapError, remove_circles, sigma
from .relations import DEFAULT_CAP, normal_form
from .skeleton import Circle, Interval, Skeleton, SkeletonError, TreeClosed, chain_graph


@dataclass(frozen=True)
class TQFTVector:
    value: LinComb
    profile: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        actual = genus_profile(self.value.skeleton)
        if self.profile is None:
            object.__setattr__(self, "profile", actual)
        elif tuple(self.profile) != actual:
            raise SkeletonError(f"skeleton has genus profile {actual}, declared {self.profile}")

    @classmethod
    def empty(cls, g: int) -> "TQFTVector":
        return cls(one(chain_graph(g)))


def genus_profile(sk) -> tuple[int, ...]:
    if sk.is_marked:
        raise SkeletonError("marked graphs are not TQFT vectors")
    prof = []
    for c in sk.components:
        if not isinstance(c, TreeClosed):
            raise SkeletonError(f"component {c.id} is not tree-closed")
        prof.append(c.g)
    return tuple(prof)


def rename_component(x: LinComb, old: str, new: str) -> LinComb:
    sk = x.skeleton
    comp = sk.component(old)
    ncomp = type(comp)(**{**comp.__dict__, "id": new})
    emap = dict(zip((e.id for e in comp.edges()), (e.id for e in ncomp.edges())))
    nsk = Skeleton(tuple(ncomp if c.id == old else c for c in sk.components))
    terms = []
    for d, c in x.terms.items():
        legs = tuple((emap.get(e, e), p) for e, p in d.legs)
        terms.append((c, Diagram(nsk, legs, d.nv, d.edges, d.loops)))
    return LinComb.sum_of(nsk, terms)


def include(v1: TQFTVector, v2: TQFTVector) -> TQFTVector:
    """Disjoint union; clashing component ids of ``v2`` get a fresh suffix."""
    b = v2.value
    taken = {c.id for c in v1.value.skeleton.components}
    for c in list(b.skeleton.components):
        if c.id in taken:
            k = 2
            while f"{c.id}{k}" in taken or f"{c.id}{k}" in {cc.id for cc in b.skeleton.components}:
                k += 1
            b = rename_component(b, c.id, f"{c.id}{k}")
            taken.add(f"{c.id}{k}")
        else:
            taken.add(c.id)
    return TQFTVector(disjoint_union(v1.value, b))


def _as_value(v) -> LinComb:
    return v.value if isinstance(v, TQFTVector) else v


def glue(x: LinComb, y: LinComb, match=None) -> LinComb:
    """Glue sigma-images: circle ``i`` is interval ``i`` of ``x`` followed by
    interval ``match[i]`` of ``y`` run backwards (``y`` already reversed)."""
    ax = [c.id for c in x.skeleton.components]
    by = [c.id for c in y.skeleton.components]
    g = len(ax)
    match = list(range(g)) if match is None else list(match)
    if sorted(match) != list(range(g)):
        raise MapError(f"match must be a permutation of 0..{g - 1}, got {match}")
    circles = [f"C{i}" for i in range(1, g + 1)]
    sk = Skeleton(tuple(Circle(c) for c in circles))
    where = {}
    for i in range(g):
        where[ax[i]] = (circles[i], 0)
        where[by[match[i]]] = (circles[i], 1)
    out = LinComb(sk)
    for dx, cx in x.terms.items():
        for dy, cy in y.terms.items():
            u = union_diagrams(dx, dy, skeleton=_plain(x.skeleton, y.skeleton))
            legs = tuple((where[e][0], (where[e][1], p)) for e, p in u.legs)
            # order on each circle: x-part then y-part, each by position
            ranks = {}
            for cid in circles:
                on = sorted((k for k, l in enumerate(legs) if l[0] == cid), key=lambda k: legs[k][1])
                for r, k in enumerate(on):
                    ranks[k] = r
            legs = tuple((l[0], ranks[k]) for k, l in enumerate(legs))
            out._add_raw(Diagram(sk, legs, u.nv, u.edges, u.loops), cx * cy)
    return out


def _plain(a, b):
    """Union skeleton of two interval unions (reversal flags dropped)."""
    comps = [Interval(c.id) for c in a.components] + [Interval(c.id) for c in b.components]
    return Skeleton(tuple(comps))


def pair(v1, v2, n: int, match=None, cap: int = DEFAULT_CAP, normalize: bool = True) -> LinComb:
    """The pairing of two vectors on Gamma_g, landing in A(empty)."""
    x, y = _as_value(v1), _as_value(v2)
    px, py = genus_profile(x.skeleton), genus_profile(y.skeleton)
    if len(px) > 1 or len(py) > 1:
        raise MapError("pair takes vectors on a single chain graph")
    gx = px[0] if px else 0
    gy = py[0] if py else 0
    if gx != gy:
        raise MapError(f"genus mismatch: {gx} vs {gy}")
    if gx == 0:
        res = disjoint_union(x, y)
    else:
        sx = sigma(x, names=[f"a{i}" for i in range(1, gx + 1)])
        sy = sigma(y, names=[f"b{i}" for i in range(1, gy + 1)])
        for c in sy.skeleton.components:
            sy = reverse_component(sy, c.id)
        res = remove_circles(glue(sx, sy, match), n)
    return normal_form(res, cap) if normalize else res
