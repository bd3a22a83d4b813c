"""State-sum weight systems.

Two flavors of tensor data:

* ``lie``: ``T`` totally antisymmetric, ``B`` symmetric, edges carry
  ``B~ = B^-1``.
* ``symplectic``: ``T`` totally symmetric with entries in the odd part of a
  graded-commutative ring, ``B`` antisymmetric, edges carry ``B~ = -B^-1``.
  Orientation enters through the sign of the permutation taking the
  vertex-ordered list of half-edges (vertex slots, then legs) to the
  edge-ordered one; ring factors are multiplied in vertex order.

A vertex with slots ``(h0, h1, h2)`` contributes ``T[i0, i1, i2]``; an edge
from half-edge ``h`` to ``h'`` (in the vertex-ordered list) contributes
``B~[i, i']``.  Legs on a circle become representation matrices multiplied
in circle order and traced.  A vertexless loop counts as ``d`` (lie) or
``-d`` (symplectic).  Indices in files are 1-based.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

from .diagram import Diagram, LinComb, flip_vertex
from .relations import DEFAULT_CAP, enumerate_diagrams, generate_relations, ihx_relations
from .skeleton import EMPTY, Circle, Skeleton


class WeightError(ValueError):
    """Inconsistent or unsupported weight data."""


# ---------------------------------------------------------------------------
# coefficient rings


@dataclass(frozen=True)
class Ring:
    """Finite-dimensional graded-commutative algebra; basis element 0 is 1."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    table: dict = field(hash=False, compare=False)  # (i, j) -> {k: Fraction}

    def __post_init__(self):
        n = len(self.names)
        if n == 0 or self.degrees[0] != 0:
            raise WeightError("ring basis must start with the unit in degree 0")
        if len(set(self.names)) != n:
            raise WeightError("duplicate ring basis names")
        for i in range(n):
            for t in (self.mul_basis(0, i), self.mul_basis(i, 0)):
                if t != {i: 1}:
                    raise WeightError(f"basis element 0 is not a unit (on {self.names[i]})")
        for i in range(n):
            for j in range(n):
                prod = self.mul_basis(i, j)
                for k in prod:
                    if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                        raise WeightError(f"{self.names[i]}*{self.names[j]} breaks the grading")
                s = (-1) ** (self.degrees[i] * self.degrees[j])
                other = self.mul_basis(j, i)
                if {k: s * c for k, c in other.items()} != prod:
                    raise WeightError(f"{self.names[i]}, {self.names[j]} not graded-commutative")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    a = self.mul(self.mul(self.basis(i), self.basis(j)), self.basis(k))
                    b = self.mul(self.basis(i), self.mul(self.basis(j), self.basis(k)))
                    if a != b:
                        raise WeightError("ring is not associative")

    @property
    def dim(self) -> int:
        return len(self.names)

    def mul_basis(self, i, j) -> dict:
        if i == 0:
            return {j: Fraction(1)}
        if j == 0:
            return {i: Fraction(1)}
        return {k: Fraction(c) for k, c in self.table.get((i, j), {}).items() if c}

    def basis(self, i) -> tuple:
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return tuple(v)

    def zero(self) -> tuple:
        return (Fraction(0),) * self.dim

    def one(self) -> tuple:
        return self.basis(0)

    def scalar(self, c) -> tuple:
        return tuple(Fraction(c) if k == 0 else Fraction(0) for k in range(self.dim))

    def add(self, a, b) -> tuple:
        return tuple(x + y for x, y in zip(a, b))

    def scale(self, a, c) -> tuple:
        return tuple(x * c for x in a)

    def mul(self, a, b) -> tuple:
        if self.dim == 1:
            return (a[0] * b[0],)
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                for k, c in self.mul_basis(i, j).items():
                    out[k] += x * y * c
        return tuple(out)

    def is_odd(self, a) -> bool:
        return all(self.degrees[k] % 2 == 1 for k, x in enumerate(a) if x)

    def format(self, a) -> str:
        parts = []
        for k, x in enumerate(a):
            if not x:
                continue
            c = str(x)
            parts.append(c if k == 0 else (self.names[k] if x == 1 else f"{c}*{self.names[k]}"))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def parse(self, text: str) -> tuple:
        out = list(self.zero())
        for k, c in _parse_linear(text, self.names).items():
            out[k] += c
        return tuple(out)


_TERM = re.compile(r"([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][\w^]*)?")


def _parse_linear(text: str, names) -> dict:
    """``"2*b - 1/2*c + 3"`` -> ``{index: Fraction}`` over basis ``names``;
    a bare number is a multiple of the unit."""
    idx = {n: k for k, n in enumerate(names)}
    out: dict = {}
    pos, text = 0, text.strip()
    if not text:
        raise WeightError("empty ring element")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise WeightError(f"cannot parse ring element {text!r}")
        sign, num, name = m.groups()
        c = Fraction(num or 1) * (-1 if sign == "-" else 1)
        if name is not None and name not in idx:
            raise WeightError(f"unknown ring element {name!r}")
        k = idx[name] if name is not None else 0
        out[k] = out.get(k, 0) + c
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return out


def rationals() -> Ring:
    return Ring(("1",), (0,), {})


def truncated_even(top: int, name: str = "b", step: int = 2) -> Ring:
    """``Q[b]/(b^(top+1))`` with ``b`` in degree ``step`` (even)."""
    if step % 2:
        raise WeightError("generator of the truncated ring must have even degree")
    names = ("1",) + tuple(name if k == 1 else f"{name}^{k}" for k in range(1, top + 1))
    table = {}
    for i in range(1, top + 1):
        for j in range(1, top + 1):
            if i + j <= top:
                table[(i, j)] = {i + j: 1}
    return Ring(names, tuple(step * k for k in range(top + 1)), table)


def exterior(m: int, name: str = "t") -> Ring:
    """Exterior algebra on ``m`` odd generators of degree 1."""
    subsets = [()]
    for r in range(1, m + 1):
        subsets += list(combinations(range(1, m + 1), r))
    index = {s: k for k, s in enumerate(subsets)}
    names = tuple("1" if not s else "".join(f"{name}{i}" for i in s) for s in subsets)
    table = {}
    for a in subsets:
        for b in subsets:
            if not a or not b or set(a) & set(b):
                continue
            merged = list(a + b)
            # sign of sorting merged
            sign = 1
            for x in range(len(merged)):
                for y in range(x + 1, len(merged)):
                    if merged[x] > merged[y]:
                        sign = -sign
            table[(index[a], index[b])] = {index[tuple(sorted(merged))]: sign}
    return Ring(names, tuple(len(s) for s in subsets), table)


# ---------------------------------------------------------------------------
# weight data


def _inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise WeightError("bilinear form is not invertible")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class WeightData:
    flavor: str
    rank: int
    B: tuple
    T: dict = field(hash=False, compare=False)  # full (i, j, k) -> ring element
    ring: Ring = field(default_factory=rationals)
    name: str = ""

    def __post_init__(self):
        d = self.rank
        if self.flavor not in ("lie", "symplectic"):
            raise WeightError(f"unknown flavor {self.flavor!r}")
        if len(self.B) != d or any(len(r) != d for r in self.B):
            raise WeightError("B must be rank x rank")
        sym = 1 if self.flavor == "lie" else -1
        for i in range(d):
            for j in range(d):
                if self.B[i][j] != sym * self.B[j][i]:
                    kind = "symmetric" if sym == 1 else "antisymmetric"
                    raise WeightError(f"B must be {kind} for flavor {self.flavor}")
        inv = _inverse(self.B)
        bt = tuple(tuple(x if self.flavor == "lie" else -x for x in row) for row in inv)
        object.__setattr__(self, "Bt", bt)
        tsign = -1 if self.flavor == "lie" else 1
        for (i, j, k), v in self.T.items():
            if not all(0 <= x < d for x in (i, j, k)):
                raise WeightError(f"T index {(i, j, k)} out of range")
            if len(v) != self.ring.dim:
                raise WeightError("T entry has the wrong ring dimension")
            for p in permutations(range(3)):
                q = tuple((i, j, k)[t] for t in p)
                s = _perm_sign(p) if tsign == -1 else 1
                w = self.T.get(q, self.ring.zero())
                if w != self.ring.scale(v, s):
                    raise WeightError(f"T is not totally {'anti' if tsign == -1 else ''}symmetric at {q}")
            if self.flavor == "symplectic" and any(v) and not self.ring.is_odd(v):
                raise WeightError(f"symplectic T entries must be odd in the ring (at {(i, j, k)})")
        object.__setattr__(self, "_entries",
                           tuple((key, v) for key, v in sorted(self.T.items()) if any(v)))

    @classmethod
    def from_entries(cls, flavor, rank, B, entries, ring=None, name=""):
        """Build from entries given once per unordered index triple."""
        ring = ring or rationals()
        full = {}
        for (i, j, k), v in entries.items():
            if not isinstance(v, tuple):
                v = ring.scalar(v)
            for p in permutations(range(3)):
                q = tuple((i, j, k)[t] for t in p)
                s = _perm_sign(p) if flavor == "lie" else 1
                w = ring.scale(v, s)
                if q in full and full[q] != w:
                    raise WeightError(f"conflicting T entries at {q}")
                full[q] = w
        B = tuple(tuple(Fraction(x) for x in row) for row in B)
        return cls(flavor, rank, B, full, ring, name)

    def loop_value(self):
        return self.ring.scalar(self.rank if self.flavor == "lie" else -self.rank)


@dataclass(frozen=True)
class CircleRep:
    """Matrices ``rho(e_a)`` (``r x r``) for ``a = 1..d``."""

    matrices: tuple

    @property
    def size(self) -> int:
        return len(self.matrices[0]) if self.matrices else 0

    def commutator_defect(self, w: WeightData):
        """Max violation of ``[rho_a, rho_b] = sum T_abc B~_cg rho_g``
        (scalar rings only); 0 means STU holds."""
        if w.ring.dim != 1:
            raise WeightError("commutator check needs a scalar ring")
        d, r = w.rank, self.size
        M = [[[Fraction(x) for x in row] for row in m] for m in self.matrices]
        bad = Fraction(0)
        for a in range(d):
            for b in range(d):
                lhs = _matsub(_matmul(M[a], M[b]), _matmul(M[b], M[a]))
                rhs = [[Fraction(0)] * r for _ in range(r)]
                for c in range(d):
                    t = w.T.get((a, b, c))
                    if not t or not t[0]:
                        continue
                    for g in range(d):
                        if w.Bt[c][g]:
                            f = t[0] * w.Bt[c][g]
                            rhs = [[x + f * y for x, y in zip(rr, mr)] for rr, mr in zip(rhs, M[g])]
                diff = _matsub(lhs, rhs)
                bad = max([bad] + [abs(x) for row in diff for x in row])
        return bad


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def _matsub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


# ---------------------------------------------------------------------------
# presets


def so3() -> WeightData:
    return WeightData.from_entries("lie", 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], {(0, 1, 2): 1}, name="so3")


def so3_adjoint() -> CircleRep:
    """``(ad e_a)_{cb} = eps_abc``."""
    eps = so3().T
    mats = []
    for a in range(3):
        m = [[Fraction(0)] * 3 for _ in range(3)]
        for b in range(3):
            for c in range(3):
                v = eps.get((a, b, c))
                if v:
                    m[c][b] = v[0]
        mats.append(tuple(tuple(r) for r in m))
    return CircleRep(tuple(mats))


def perturbed(delta=Fraction(1, 10)) -> WeightData:
    """``so3 + R^2`` (rank 5) with an extra entry ``T_145 = delta``.

    In rank 4 every antisymmetric 3-tensor is decomposable and still a Lie
    bracket, so the perturbation needs rank 5 to break IHX.
    """
    B = [[int(i == j) for j in range(5)] for i in range(5)]
    return WeightData.from_entries("lie", 5, B, {(0, 1, 2): 1, (0, 3, 4): Fraction(delta)}, name="perturbed")


def symplectic_trivial() -> WeightData:
    return WeightData.from_entries("symplectic", 2, [[0, 1], [-1, 0]], {}, exterior(2), name="sp2-trivial")


def symplectic_toy() -> WeightData:
    """Rank 2, standard form, ``T`` with odd entries in an exterior ring."""
    R = exterior(2)
    t1, t2 = R.basis(1), R.basis(2)
    entries = {(0, 0, 0): t1, (0, 0, 1): t2, (1, 1, 1): R.add(t1, t2)}
    return WeightData.from_entries("symplectic", 2, [[0, 1], [-1, 0]], entries, R, name="sp2-toy")


def even_model(top: int = 3) -> WeightData:
    """so3 data with coefficients in the truncated even ring ``Q[b]/b^(top+1)``;
    ``T = b * eps`` so that Theta evaluates to ``6 b^2``."""
    R = truncated_even(top, "b")
    return WeightData.from_entries("lie", 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                                   {(0, 1, 2): R.basis(1)}, R, name="so3-even")


PRESETS = {
    "so3": so3,
    "so3-perturbed": perturbed,
    "sp2-trivial": symplectic_trivial,
    "sp2-toy": symplectic_toy,
    "so3-even": even_model,
}
REP_PRESETS = {"adjoint": so3_adjoint, "so3-adjoint": so3_adjoint}


# ---------------------------------------------------------------------------
# file formats


def parse_weight_data(text: str) -> WeightData:
    """Parse the WeightData text format.

    ::

        flavor lie
        rank 3
        ring basis 1:0 b:2 b2:4          # optional; default Q
        ring mul b b = b2                 # structure constants
        B
        1 0 0
        0 1 0
        0 0 1
        T
        1 2 3 : 1                         # once per unordered triple
    """
    flavor = rank = None
    names, degs, table = ["1"], [0], {}
    B, T = [], []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "flavor":
                flavor = words[1]
            elif words[0] == "rank":
                rank = int(words[1])
            elif words[0] == "ring" and words[1] == "basis":
                names, degs = [], []
                for tok in words[2:]:
                    n, _, g = tok.partition(":")
                    names.append(n)
                    degs.append(int(g))
            elif words[0] == "ring" and words[1] == "mul":
                lhs, _, rhs = line.split(None, 2)[2].partition("=")
                a, b = lhs.split()
                table[(a, b)] = rhs.strip()
            elif words[0] in ("B", "T"):
                section = words[0]
            elif section == "B":
                B.append([Fraction(x) for x in words])
            elif section == "T":
                idx, _, val = line.partition(":")
                T.append((tuple(int(x) - 1 for x in idx.split()), val.strip() or "1"))
            else:
                raise WeightError(f"unexpected line {line!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, WeightError):
                raise WeightError(f"line {lineno}: {exc}") from exc
            raise WeightError(f"line {lineno}: cannot parse {line!r}") from exc
    if flavor is None or rank is None:
        raise WeightError("weight data needs 'flavor' and 'rank'")
    idx = {n: k for k, n in enumerate(names)}
    for a, b in table:
        if a not in idx or b not in idx:
            raise WeightError(f"unknown ring element in product {a}*{b}")
    ring = Ring(tuple(names), tuple(degs),
                {(idx[a], idx[b]): _parse_linear(rhs, names) for (a, b), rhs in table.items()})
    entries = {}
    for key, val in T:
        if len(key) != 3:
            raise WeightError(f"T entries need three indices, got {key}")
        entries[key] = ring.parse(val)
    return WeightData.from_entries(flavor, rank, B, entries, ring)


def format_weight_data(w: WeightData) -> str:
    R = w.ring
    lines = [f"flavor {w.flavor}", f"rank {w.rank}"]
    if R.dim > 1:
        lines.append("ring basis " + " ".join(f"{n}:{g}" for n, g in zip(R.names, R.degrees)))
        for (i, j), prod in sorted(R.table.items()):
            rhs = " + ".join(f"{c}*{R.names[k]}" for k, c in sorted(prod.items()))
            lines.append(f"ring mul {R.names[i]} {R.names[j]} = {rhs}")
    lines.append("B")
    lines += [" ".join(str(x) for x in row) for row in w.B]
    lines.append("T")
    for (i, j, k), v in sorted(w.T.items()):
        if i <= j <= k and any(v):
            lines.append(f"{i + 1} {j + 1} {k + 1} : {R.format(v)}")
    return "\n".join(lines) + "\n"


def parse_rep(text: str) -> CircleRep:
    """``matrix`` blocks of rows, one block per basis element."""
    mats, cur = [], None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("matrix"):
            cur = []
            mats.append(cur)
        elif cur is None:
            raise WeightError("representation file must start with 'matrix'")
        else:
            cur.append(tuple(Fraction(x) for x in line.split()))
    return CircleRep(tuple(tuple(m) for m in mats))


def load_weight_data(spec: str) -> WeightData:
    if spec in PRESETS:
        return PRESETS[spec]()
    with open(spec, encoding="utf-8") as fh:
        return parse_weight_data(fh.read())


def load_rep(spec: str) -> CircleRep:
    if spec in REP_PRESETS:
        return REP_PRESETS[spec]()
    with open(spec, encoding="utf-8") as fh:
        return parse_rep(fh.read())


# ---------------------------------------------------------------------------
# contraction


def _order_key(d: Diagram):
    """Vertex slots first, then legs."""
    L = len(d.legs)
    return lambda h: h - L if h >= L else 3 * d.nv + h


def orientation_sign(d: Diagram) -> int:
    key = _order_key(d)
    seq = []
    for a, b in sorted((tuple(sorted(e, key=key)) for e in d.edges), key=lambda e: key(e[0])):
        seq += [key(a), key(b)]
    return _perm_sign(seq)


def contract(d: Diagram, w: WeightData) -> dict:
    """Raw state sum: ``{leg index tuple: ring element}`` with legs in diagram
    order (empty tuple for closed graphs).  No antisymmetrization."""
    R = w.ring
    L = len(d.legs)
    key = _order_key(d)
    partner = d.partner()
    Bt = w.Bt
    entries = w._entries
    idx = [None] * (L + 3 * d.nv)
    out: dict = {}
    def weight_of(h):
        """B~ factor for the edge at h if both ends are assigned, else None."""
        o = partner[h]
        if idx[o] is None:
            return None
        x, y = (h, o) if key(h) < key(o) else (o, h)
        return Bt[idx[x]][idx[y]]

    def rec_v(v, acc, scal):
        if v == d.nv:
            rec_l(0, acc, scal)
            return
        base = L + 3 * v
        for (i, j, k), val in entries:
            idx[base], idx[base + 1], idx[base + 2] = i, j, k
            s = scal
            ok = True
            done = set()
            for t in range(3):
                h = base + t
                o = partner[h]
                if (o, h) in done:
                    continue
                f = weight_of(h)
                if f is None:
                    continue
                if not f:
                    ok = False
                    break
                s *= f
                done.add((h, o))
            if ok:
                rec_v(v + 1, R.mul(acc, val), s)
            idx[base] = idx[base + 1] = idx[base + 2] = None

    def rec_l(k, acc, scal):
        if k == L:
            tup = tuple(idx[:L])
            cur = out.get(tup)
            term = R.scale(acc, scal)
            out[tup] = term if cur is None else R.add(cur, term)
            return
        for i in range(w.rank):
            idx[k] = i
            f = weight_of(k)
            if f is None:
                rec_l(k + 1, acc, scal)
            elif f:
                rec_l(k + 1, acc, scal * f)
            idx[k] = None

    rec_v(0, R.one(), Fraction(1))
    sign = orientation_sign(d) if w.flavor == "symplectic" else 1
    lv = R.one()
    for _ in range(d.loops):
        lv = R.mul(lv, w.loop_value())
    return {t: R.mul(R.scale(v, sign), lv) for t, v in out.items() if any(v)}


def eval_closed(x: LinComb, w: WeightData):
    if x.skeleton != EMPTY:
        raise WeightError("eval_closed needs diagrams on the empty skeleton")
    R = w.ring
    total = R.zero()
    for d, c in x.items():
        total = R.add(total, R.scale(contract(d, w).get((), R.zero()), c))
    return total


@dataclass
class MarkedValue:
    """Antisymmetrized tensors keyed by the sorted tuple of leg labels."""

    ring: Ring
    parts: dict  # labels tuple -> {index tuple: ring element}

    def is_zero(self) -> bool:
        return not any(self.parts.values())

    def multidegree(self, labels, g):
        return tuple(labels.count(j) for j in range(1, g + 1))


def _antisymmetrize(labels, tensor, R):
    groups = {}
    for pos, lab in enumerate(labels):
        groups.setdefault(lab, []).append(pos)
    perms = list(product(*(list(permutations(groups[lab])) for lab in sorted(groups))))
    n = len(perms)
    out = {}
    for tup, val in tensor.items():
        for combo in perms:
            sign = 1
            new = list(tup)
            for lab, p in zip(sorted(groups), combo):
                src = groups[lab]
                sign *= _perm_sign([src.index(q) for q in p])
                for a, b in zip(src, p):
                    new[b] = tup[a]
            t = tuple(new)
            term = R.scale(val, Fraction(sign, n))
            out[t] = R.add(out[t], term) if t in out else term
    return {t: v for t, v in out.items() if any(v)}


def eval_marked(m: LinComb, w: WeightData) -> MarkedValue:
    """Leg indices grouped by label (ascending), antisymmetric in each group."""
    if not m.skeleton.is_marked:
        raise WeightError("eval_marked needs marked graphs (skeleton B:g)")
    if w.flavor != "symplectic":
        raise WeightError("eval_marked needs symplectic data")
    R = w.ring
    parts: dict = {}
    for d, c in m.items():
        order = sorted(range(len(d.legs)), key=lambda k: (d.legs[k][0], k))
        labels = tuple(d.legs[k][0] for k in order)
        raw = contract(d, w)
        # reorder legs into label order; the permutation sign is part of the
        # odd statistics of the legs
        s = _perm_sign(order)
        tensor = {tuple(t[k] for k in order): R.scale(v, s * c) for t, v in raw.items()}
        anti = _antisymmetrize(labels, tensor, R)
        acc = parts.setdefault(labels, {})
        for t, v in anti.items():
            acc[t] = R.add(acc[t], v) if t in acc else v
    for labels in list(parts):
        parts[labels] = {t: v for t, v in parts[labels].items() if any(v)}
    return MarkedValue(R, parts)


def eval_circle(x: LinComb, w: WeightData, rep) -> tuple:
    """Legs on each circle act through ``rep`` (one CircleRep, or a dict by
    circle id); the product around each circle is traced."""
    if w.flavor != "lie":
        raise WeightError("eval_circle needs lie data")
    sk = x.skeleton
    if sk.is_marked or any(not isinstance(c, Circle) for c in sk.components):
        raise WeightError("eval_circle needs diagrams on circles only")
    reps = rep if isinstance(rep, dict) else {c.id: rep for c in sk.components}
    for c in sk.components:
        r = reps[c.id]
        if len(r.matrices) != w.rank:
            raise WeightError(f"representation has {len(r.matrices)} matrices, rank is {w.rank}")
    R = w.ring
    total = R.zero()
    for d, c in x.items():
        raw = contract(d, w)
        if not raw:
            continue
        orders = [(cc.id, d.legs_on(cc.id)) for cc in sk.components]
        for tup, val in raw.items():
            f = Fraction(1)
            for cid, on in orders:
                mats = reps[cid].matrices
                size = reps[cid].size
                M = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
                for k in on:
                    M = _matmul(M, mats[tup[k]])
                f *= sum(M[i][i] for i in range(size))
                if not f:
                    break
            if f:
                total = R.add(total, R.scale(val, f * c))
    return total


# ---------------------------------------------------------------------------
# relation checks


@dataclass
class CheckReport:
    checked: int = 0
    failures: list = field(default_factory=list)  # (kind, degree, description, value)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_data(w: WeightData, n: int, rep: CircleRep | None = None, cap: int = DEFAULT_CAP) -> CheckReport:
    """Evaluate AS and IHX instances on closed graphs up to degree ``n`` (and
    STU/IHX on one circle when ``rep`` is given)."""
    from .textio import format_term

    R = w.ring
    rep_out = CheckReport()
    cache = {}

    def val(d):
        if d not in cache:
            cache[d] = contract(d, w).get((), R.zero())
        return cache[d]

    for k in range(1, n + 1):
        for d in enumerate_diagrams(EMPTY, k, cap):
            for v in range(d.nv):
                s = R.add(val(d), val(flip_vertex(d, v)))
                rep_out.checked += 1
                if any(s):
                    rep_out.failures.append(("AS", k, format_term(d, Fraction(1)), R.format(s)))
            for rel in ihx_relations(d):
                s = eval_closed(rel.vector, w)
                rep_out.checked += 1
                if any(s):
                    rep_out.failures.append(("IHX", k, format_term(d, Fraction(1)), R.format(s)))
    if rep is not None:
        sk = Skeleton((Circle("C"),))
        for k in range(1, n + 1):
            for rel in generate_relations(sk, k, cap):
                s = eval_circle(rel.vector, w, rep)
                rep_out.checked += 1
                if any(s):
                    rep_out.failures.append((rel.kind, k, format_term(rel.source, Fraction(1)), R.format(s)))
    return rep_out
