"""Text and JSON formats for linear combinations of diagrams.

One LinComb per document::

    # comments start with '#'
    skeleton: I:a C:c T:G[g=2]
    coeff 1/2 ; vertices v0 v1 ; legs x@a:0 y@c:0 ; edges v0.0-v1.0 v0.1-v1.1 v0.2-x v1.2-y

Skeleton tokens: ``I:id`` interval, ``C:id`` circle, ``T:id[g=N]`` chain graph
with the default tree, ``T:id[g=N;edges=u>v,...;leaves=u:1a,...]`` explicit
tree, ``B:g`` marked graphs, ``empty``.  A leading ``-`` marks a reversed
component.  Marked legs are written ``name@label``.  An optional
``; loops k`` field counts vertexless closed loops.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from .diagram import Diagram, DiagramError, LinComb
from .skeleton import (
    EMPTY,
    Circle,
    Interval,
    MarkedSkeleton,
    Skeleton,
    SkeletonError,
    TreeClosed,
    TreeSpec,
    chain_tree,
)


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}" + (f", column {col}" if col is not None else "") if line else ""
        super().__init__(f"{where}: {msg}" if where else msg)


# ---------------------------------------------------------------------------
# skeleton


def format_tree(t: TreeSpec) -> str:
    edges = ",".join(f"{u}>{v}" for u, v in t.edges)
    leaves = ",".join(f"{n}:{i}{e}" for n, i, e in t.leaves)
    return f"g={t.g};edges={edges};leaves={leaves}"


def format_component(c) -> str:
    pre = "-" if c.reversed else ""
    if isinstance(c, Interval):
        return f"{pre}I:{c.id}"
    if isinstance(c, Circle):
        return f"{pre}C:{c.id}"
    if c.tree == chain_tree(c.tree.g):
        return f"{pre}T:{c.id}[g={c.tree.g}]"
    return f"{pre}T:{c.id}[{format_tree(c.tree)}]"


def format_skeleton(sk) -> str:
    if sk.is_marked:
        return f"B:{sk.g}"
    if not sk.components:
        return "empty"
    return " ".join(format_component(c) for c in sk.components)


_TOKEN = re.compile(r"(-?)([ICTB]):([^\s\[]+)(?:\[([^\]]*)\])?")


def _parse_tree(spec: str) -> TreeSpec:
    fields = dict(kv.split("=", 1) for kv in spec.split(";") if kv.strip())
    g = int(fields["g"])
    if "edges" not in fields:
        return chain_tree(g)
    edges = tuple(tuple(e.split(">")) for e in fields["edges"].split(",") if e)
    leaves = []
    for item in fields["leaves"].split(","):
        node, at = item.split(":")
        leaves.append((node, int(at[:-1]), at[-1]))
    return TreeSpec(g, edges, tuple(leaves))


def parse_skeleton(text: str, line: int | None = None):
    text = text.strip()
    if text in ("", "empty", "()"):
        return EMPTY
    comps = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"bad skeleton token {text[pos:].split()[0]!r}", line, pos + 1)
        rev, kind, cid, bracket = m.groups()
        try:
            if kind == "B":
                if len(text.split()) != 1:
                    raise ParseError("B:g must be the only skeleton token", line, pos + 1)
                return MarkedSkeleton(int(cid))
            if kind == "I":
                comps.append(Interval(cid, bool(rev)))
            elif kind == "C":
                comps.append(Circle(cid, bool(rev)))
            else:
                if bracket is None:
                    raise ParseError("T component needs [g=...]", line, pos + 1)
                comps.append(TreeClosed(cid, _parse_tree(bracket), bool(rev)))
        except (KeyError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad component {m.group(0)!r}: {exc}", line, pos + 1) from exc
        pos = m.end()
    try:
        return Skeleton(tuple(comps))
    except SkeletonError as exc:
        raise ParseError(str(exc), line) from exc


# ---------------------------------------------------------------------------
# terms


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_term(d: Diagram, c: Fraction) -> str:
    L = len(d.legs)
    vnames = [f"v{k}" for k in range(d.nv)]
    lnames = [f"l{k}" for k in range(L)]
    if d.skeleton.is_marked:
        legs = " ".join(f"{n}@{col[0]}" for n, col in zip(lnames, d.legs))
    else:
        legs = " ".join(f"{n}@{col[0]}:{col[1]}" for n, col in zip(lnames, d.legs))

    def hname(h):
        if h < L:
            return lnames[h]
        v, s = divmod(h - L, 3)
        return f"{vnames[v]}.{s}"

    edges = " ".join(f"{hname(a)}-{hname(b)}" for a, b in d.edges)
    out = f"coeff {_fmt_coeff(c)} ; vertices {' '.join(vnames)} ; legs {legs} ; edges {edges}"
    if d.loops:
        out += f" ; loops {d.loops}"
    return re.sub(r" +", " ", out)


def serialize(x: LinComb) -> str:
    lines = [f"skeleton: {format_skeleton(x.skeleton)}"]
    lines += [format_term(d, c) for d, c in x.items()]
    return "\n".join(lines) + "\n"


def _parse_coeff(s: str, line: int) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient {s!r}", line) from exc


def parse_term(text: str, sk, line: int = 0) -> tuple[Fraction, Diagram]:
    fields = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        key, _, rest = part.partition(" ")
        if key not in ("coeff", "vertices", "legs", "edges", "loops"):
            raise ParseError(f"unknown field {key!r}", line, text.find(part) + 1)
        fields[key] = rest.split()
    if "coeff" not in fields or len(fields["coeff"]) != 1:
        raise ParseError("term needs 'coeff p/q'", line)
    c = _parse_coeff(fields["coeff"][0], line)
    vnames = fields.get("vertices", [])
    vidx = {n: k for k, n in enumerate(vnames)}
    if len(vidx) != len(vnames):
        raise ParseError("duplicate vertex name", line)
    legs = []
    lidx = {}
    for tok in fields.get("legs", []):
        name, at, place = tok.partition("@")
        if not at:
            raise ParseError(f"bad leg {tok!r}", line, text.find(tok) + 1)
        if name in lidx or name in vidx:
            raise ParseError(f"duplicate name {name!r}", line, text.find(tok) + 1)
        try:
            if sk.is_marked:
                legs.append((int(place),))
            else:
                eid, _, pos = place.rpartition(":")
                legs.append((eid, Fraction(pos)))
        except ValueError as exc:
            raise ParseError(f"bad leg placement {tok!r}", line, text.find(tok) + 1) from exc
        lidx[name] = len(lidx)
    L = len(legs)

    def half(tok):
        name, dot, slot = tok.partition(".")
        if name in lidx:
            if dot and slot != "0":
                raise ParseError(f"legs have only slot 0: {tok!r}", line)
            return lidx[name]
        if name in vidx:
            if slot not in ("0", "1", "2"):
                raise ParseError(f"vertex slot must be 0, 1 or 2: {tok!r}", line)
            return L + 3 * vidx[name] + int(slot)
        raise ParseError(f"unknown vertex or leg {name!r}", line, text.find(tok) + 1)

    edges = []
    for tok in fields.get("edges", []):
        a, sep, b = tok.partition("-")
        if not sep:
            raise ParseError(f"bad edge {tok!r}", line, text.find(tok) + 1)
        edges.append(tuple(sorted((half(a), half(b)))))
    loops = 0
    if "loops" in fields:
        try:
            loops = int(fields["loops"][0])
        except (ValueError, IndexError) as exc:
            raise ParseError("bad loops count", line) from exc
    try:
        d = Diagram(sk, tuple(legs), len(vnames), tuple(sorted(edges)), loops)
    except DiagramError as exc:
        raise ParseError(f"invariant violated (perfect matching of half-edges): {exc}", line) from exc
    return c, d


def parse(text: str) -> LinComb:
    sk = None
    out = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if sk is None:
            if not line.startswith("skeleton:"):
                raise ParseError("first line must be 'skeleton: ...'", lineno, 1)
            sk = parse_skeleton(line[len("skeleton:"):], lineno)
            out = LinComb(sk)
            continue
        c, d = parse_term(line, sk, lineno)
        try:
            out._add_raw(d, c)
        except DiagramError as exc:
            raise ParseError(f"invariant violated: {exc}", lineno) from exc
    if sk is None:
        raise ParseError("empty input: missing 'skeleton:' line", 1)
    return out


# ---------------------------------------------------------------------------
# JSON mirror


def to_json(x: LinComb) -> str:
    terms = []
    for d, c in x.items():
        terms.append({
            "coeff": _fmt_coeff(c),
            "vertices": d.nv,
            "legs": [list(col) for col in d.legs],
            "edges": [list(e) for e in d.edges],
            "loops": d.loops,
        })
    return json.dumps({"skeleton": format_skeleton(x.skeleton), "terms": terms}, sort_keys=True)


def from_json(text: str) -> LinComb:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    sk = parse_skeleton(obj["skeleton"])
    out = LinComb(sk)
    for t in obj["terms"]:
        legs = tuple(tuple(col) for col in t["legs"])
        d = Diagram(sk, legs, t["vertices"], tuple(tuple(e) for e in t["edges"]), t.get("loops", 0))
        out._add_raw(d, Fraction(t["coeff"]))
    return out


def load(text: str) -> LinComb:
    """Parse either format."""
    s = text.lstrip()
    if s.startswith("{"):
        return from_json(text)
    return parse(text)
