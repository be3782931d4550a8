"""Polygon model of the type A_n cluster category.

Indecomposable objects are the diagonals of a convex ``N``-gon with
``N = n + 3`` and vertices ``1..N`` in clockwise order.  Two diagonals have
a one-dimensional extension space exactly when they cross, the suspension
rotates every endpoint by ``-1``, and

    dim Hom(a, b) = 1  iff  a crosses the rotation of b by +1.

Nonzero maps are unique up to scalar, so a composite of two nonzero maps is
either zero or nonzero, decided by :func:`compose_nonzero`.

Distinguished triangles with indecomposable end terms come from crossing
pairs (:func:`triangles_of_pair`).  Triangles with decomposable end terms
are produced by :func:`generic_triangle`: the connecting morphism is a
generic element with prescribed support, and the middle term is recovered
from the long exact Hom sequence.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _gcd
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .abelian import K0Element

__all__ = [
    "Arc",
    "ObjClass",
    "Triangulation",
    "TriangleData",
    "ModuleRep",
    "ArcModelError",
    "BoundExceededError",
    "arc",
    "arcs",
    "parse_arc",
    "cross",
    "suspend",
    "hom_dim",
    "hom_obj",
    "compose_nonzero",
    "triangles_of_pair",
    "split_triangle",
    "generic_triangle",
    "solve_object",
    "enumerate_triangulations",
    "index_resolution",
    "module_of",
    "submodule_classes",
    "closed_subsets",
    "max_n",
    "simple_label",
]


class ArcModelError(ValueError):
    """Invalid arcs, objects or subcategories."""


class BoundExceededError(ArcModelError):
    """The requested polygon is larger than the configured enumeration cap."""


DEFAULT_MAX_N = 8


def max_n() -> int:
    """Enumeration cap, overridable through ``EXANGULATE_MAX_N``."""
    raw = os.environ.get("EXANGULATE_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise ArcModelError(f"EXANGULATE_MAX_N must be an integer, got {raw!r}") from None


def _check_bound(n: int) -> None:
    if n < 1:
        raise ArcModelError(f"n must be at least 1, got {n}")
    cap = max_n()
    if n > cap:
        raise BoundExceededError(f"n={n} exceeds the enumeration cap {cap} (EXANGULATE_MAX_N)")


# ---------------------------------------------------------------------------
# Arcs


class Arc(Tuple[int, int, int]):
    """A diagonal ``(i, j)`` of the ``N``-gon, normalized to ``i < j``."""

    __slots__ = ()

    def __new__(cls, i: int, j: int, N: int):
        if N < 4:
            raise ArcModelError(f"polygon needs at least 4 vertices, got N={N}")
        if not (1 <= i <= N and 1 <= j <= N):
            raise ArcModelError(f"vertex out of range in ({i},{j}) for N={N}")
        if i > j:
            i, j = j, i
        if j - i < 2 or (i == 1 and j == N):
            raise ArcModelError(f"({i},{j}) is a side of the {N}-gon, not a diagonal")
        return tuple.__new__(cls, (i, j, N))

    @property
    def i(self) -> int:
        return self[0]

    @property
    def j(self) -> int:
        return self[1]

    @property
    def N(self) -> int:
        return self[2]

    @property
    def label(self) -> str:
        return f"{self[0]}-{self[1]}"

    def __repr__(self) -> str:
        return f"({self[0]},{self[1]})"

    def __getnewargs__(self):
        return tuple(self)


def _norm(i: int, j: int, N: int) -> Tuple[int, int]:
    i = (i - 1) % N + 1
    j = (j - 1) % N + 1
    return (i, j) if i < j else (j, i)


def _is_diagonal(i: int, j: int, N: int) -> bool:
    i, j = _norm(i, j, N)
    return j - i >= 2 and not (i == 1 and j == N)


def arc(i: int, j: int, N: int) -> Arc:
    """Diagonal with endpoints taken modulo ``N``."""
    i, j = _norm(i, j, N)
    return Arc(i, j, N)


def parse_arc(text: str, N: int) -> Arc:
    """Parse ``"i-j"`` (also accepts ``"i,j"`` and ``"(i,j)"``)."""
    t = text.strip().strip("()")
    for sep in ("-", ","):
        if sep in t:
            a, b = t.split(sep, 1)
            try:
                return Arc(int(a), int(b), N)
            except ValueError as exc:
                if isinstance(exc, ArcModelError):
                    raise
                break
    raise ArcModelError(f"cannot parse arc {text!r}; expected the form i-j")


def arcs(n: int) -> List[Arc]:
    """All ``N(N-3)/2`` diagonals of the ``(n+3)``-gon in lexicographic order."""
    if n < 1:
        raise ArcModelError(f"n must be at least 1, got {n}")
    return list(_arcs(n))


@lru_cache(maxsize=None)
def _arcs(n: int) -> Tuple[Arc, ...]:
    N = n + 3
    return tuple(Arc(i, j, N) for i in range(1, N + 1) for j in range(i + 2, N + 1)
            if not (i == 1 and j == N))


def cross(a: Arc, b: Arc) -> bool:
    """Strict cyclic interleaving of endpoints."""
    i, j = a[0], a[1]
    k, l = b[0], b[1]
    return i < k < j < l or k < i < l < j


@lru_cache(maxsize=1 << 16)
def suspend(a: Arc, power: int = 1) -> Arc:
    """Rotate both endpoints by ``-power``."""
    N = a[2]
    return arc(a[0] - power, a[1] - power, N)


@lru_cache(maxsize=1 << 18)
def hom_dim(a: Arc, b: Arc) -> int:
    return int(cross(a, suspend(b, -1)))


def _fwd(x: int, y: int, N: int) -> int:
    return (y - x) % N


def _match(x1: int, x2: int, b: Arc) -> Optional[Tuple[int, int]]:
    """Endpoints of ``b`` reached from the oriented pair ``(x1, x2)``.

    A nonzero map from the arc ``{x1, x2}`` to ``b`` rotates ``x1`` forward by
    at most ``len1 - 2`` steps and ``x2`` forward by at most ``len2 - 2``
    steps, where ``len1`` is the clockwise distance from ``x1`` to ``x2`` and
    ``len2 = N - len1``.  Returns the images of ``x1`` and ``x2``.
    """
    N = b[2]
    len1 = _fwd(x1, x2, N)
    for b1, b2 in ((b[0], b[1]), (b[1], b[0])):
        if _fwd(x1, b1, N) <= len1 - 2 and _fwd(x2, b2, N) <= N - len1 - 2:
            return b1, b2
    return None


@lru_cache(maxsize=1 << 20)
def compose_nonzero(a: Arc, b: Arc, c: Arc) -> bool:
    """Is the composite of the nonzero maps ``a -> b -> c`` nonzero?

    Requires nonzero maps on both legs.  The composite survives iff the two
    endpoint rotations chain together without leaving the window allowed
    by ``a``.
    """
    if not (hom_dim(a, b) and hom_dim(b, c)):
        raise ArcModelError(f"composite {a}->{b}->{c} needs nonzero maps on both legs")
    if not hom_dim(a, c):
        return False
    N = a[2]
    b1, b2 = _match(a[0], a[1], b)
    c1, c2 = _match(b1, b2, c)
    len1 = _fwd(a[0], a[1], N)
    return (_fwd(a[0], b1, N) + _fwd(b1, c1, N) <= len1 - 2
            and _fwd(a[1], b2, N) + _fwd(b2, c2, N) <= N - len1 - 2)


def simple_label(x: Arc) -> str:
    """Basis label of the simple module at ``x``."""
    return f"S[{x.label}]"


# ---------------------------------------------------------------------------
# Objects


class ObjClass:
    """Isomorphism class of an object: a finite multiset of arcs."""

    __slots__ = ("summands",)

    def __init__(self, summands: Iterable[Arc] = ()):
        s = tuple(sorted(summands))
        if len({a[2] for a in s}) > 1:
            raise ArcModelError("summands live on different polygons")
        self.summands: Tuple[Arc, ...] = s

    @classmethod
    def of(cls, x) -> "ObjClass":
        if isinstance(x, ObjClass):
            return x
        if isinstance(x, Arc):
            return cls((x,))
        return cls(x)

    def __add__(self, other: "ObjClass") -> "ObjClass":
        return ObjClass(self.summands + ObjClass.of(other).summands)

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def __bool__(self) -> bool:
        return bool(self.summands)

    def __eq__(self, other) -> bool:
        return isinstance(other, ObjClass) and self.summands == other.summands

    def __hash__(self) -> int:
        return hash(self.summands)

    def __repr__(self) -> str:
        if not self.summands:
            return "0"
        return "+".join(repr(a) for a in self.summands)

    def multiplicity(self, a: Arc) -> int:
        return self.summands.count(a)

    def suspend(self, power: int = 1) -> "ObjClass":
        return ObjClass(suspend(a, power) for a in self.summands)

    def k0(self) -> K0Element:
        """Class in the split Grothendieck group, labelled by arcs."""
        out: Dict[str, int] = {}
        for a in self.summands:
            out[a.label] = out.get(a.label, 0) + 1
        return K0Element(out)


def hom_obj(x: Arc, S) -> int:
    """``dim Hom(x, S)`` for an arc ``x`` and an object ``S``."""
    return sum(hom_dim(x, s) for s in ObjClass.of(S))


@dataclass(frozen=True)
class Triangulation:
    """A maximal set of pairwise noncrossing diagonals."""

    arcs: Tuple[Arc, ...]
    N: int

    def __init__(self, arcs_: Iterable[Arc], N: Optional[int] = None):
        a = tuple(sorted(set(arcs_)))
        if N is None:
            if not a:
                raise ArcModelError("cannot infer the polygon of an empty triangulation")
            N = a[0][2]
        for x in a:
            if x[2] != N:
                raise ArcModelError(f"arc {x} does not belong to the {N}-gon")
        for x, y in itertools.combinations(a, 2):
            if cross(x, y):
                raise ArcModelError(f"arcs {x} and {y} cross")
        if len(a) != N - 3:
            raise ArcModelError(f"a triangulation of the {N}-gon has {N - 3} arcs, got {len(a)}")
        object.__setattr__(self, "arcs", a)
        object.__setattr__(self, "N", N)

    @property
    def n(self) -> int:
        return self.N - 3

    def __iter__(self) -> Iterator[Arc]:
        return iter(self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)

    def __contains__(self, x) -> bool:
        return x in self.arcs

    @property
    def labels(self) -> List[str]:
        return [a.label for a in self.arcs]

    def triangles(self) -> List[Tuple[int, int, int]]:
        """The ``N - 2`` triangles cut out by the diagonals, as vertex triples."""
        edges = {(a[0], a[1]) for a in self.arcs}
        edges |= {(v, v + 1) for v in range(1, self.N)} | {(1, self.N)}
        return [t for t in itertools.combinations(range(1, self.N + 1), 3)
                if (t[0], t[1]) in edges and (t[1], t[2]) in edges and (t[0], t[2]) in edges]

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(a) for a in self.arcs) + "}"


def enumerate_triangulations(n: int) -> List[Triangulation]:
    """All triangulations of the ``(n+3)``-gon, in a fixed order."""
    _check_bound(n)
    return list(_triangulations(n))


@lru_cache(maxsize=None)
def _triangulations(n: int) -> Tuple[Triangulation, ...]:
    N = n + 3

    @lru_cache(maxsize=None)
    def polygon(lo: int, hi: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        # triangulations of the sub-polygon on vertices lo..hi
        if hi - lo < 2:
            return ((),)
        out = []
        for k in range(lo + 1, hi):
            extra = tuple(e for e in ((lo, k), (k, hi)) if e[1] - e[0] >= 2)
            for left in polygon(lo, k):
                for right in polygon(k, hi):
                    out.append(left + right + extra)
        return tuple(out)

    result = [Triangulation((Arc(i, j, N) for i, j in t if not (i == 1 and j == N)), N)
              for t in polygon(1, N)]
    result.sort(key=lambda T: T.arcs)
    return tuple(result)


# ---------------------------------------------------------------------------
# Triangles


def _matching_size(edges: Sequence[Tuple[int, int]]) -> int:
    """Maximum matching in a small bipartite graph."""
    adj: Dict[int, List[int]] = {}
    for k, j in edges:
        adj.setdefault(k, []).append(j)
    match: Dict[int, int] = {}

    def augment(k, seen):
        for j in adj[k]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match or augment(match[j], seen):
                match[j] = k
                return True
        return False

    return sum(1 for k in adj if augment(k, set()))


@dataclass(frozen=True)
class TriangleData:
    """A distinguished triangle ``A -> B -> C -> ΣA`` with connecting map δ.

    δ is a generic element of ``Ext^1(C, A)`` supported on ``pattern``, a set
    of index pairs ``(k, j)`` meaning the component ``C_j -> ΣA_k`` is
    nonzero.  ``delta_vanishing_set`` holds the arcs ``x`` for which some
    map ``x -> C`` has nonzero composite with δ.
    """

    A: ObjClass
    B: ObjClass
    C: ObjClass
    pattern: FrozenSet[Tuple[int, int]]
    delta_vanishing_set: FrozenSet[Arc]

    def delta_rank(self, w: Arc) -> int:
        """Rank of ``Hom(w, C) -> Hom(w, ΣA)`` given by composing with δ."""
        if not self.pattern:
            return 0
        A, C = self.A.summands, self.C.summands
        edges = []
        for k, j in self.pattern:
            if hom_dim(w, C[j]) and compose_nonzero(w, C[j], suspend(A[k], 1)):
                edges.append((k, j))
        return _matching_size(edges) if edges else 0

    @property
    def is_split(self) -> bool:
        return not self.pattern

    def euler(self) -> K0Element:
        return self.A.k0() - self.B.k0() + self.C.k0()

    def image_dims(self, D: Iterable[Arc]) -> K0Element:
        """Dimension vector of the image of δ on ``D``, over simple labels."""
        return K0Element({simple_label(t): self.delta_rank(t) for t in D})

    def __repr__(self) -> str:
        return f"{self.A!r} -> {self.B!r} -> {self.C!r}"


def _vanishing(pattern, A, C, N) -> FrozenSet[Arc]:
    probe = TriangleData(A, ObjClass(), C, pattern, frozenset())
    return frozenset(w for w in arcs(N - 3) if probe.delta_rank(w) > 0)


def split_triangle(A, C) -> TriangleData:
    """``A -> A ⊕ C -> C`` with zero connecting map."""
    A, C = ObjClass.of(A), ObjClass.of(C)
    return TriangleData(A, A + C, C, frozenset(), frozenset())


def _ptolemy(a: Arc, b: Arc) -> Tuple[ObjClass, ObjClass]:
    N = a[2]
    (i, k), (j, l) = sorted([(a[0], a[1]), (b[0], b[1])])
    e1 = [arc(x, y, N) for x, y in ((i, l), (j, k)) if _is_diagonal(x, y, N)]
    e2 = [arc(x, y, N) for x, y in ((i, j), (k, l)) if _is_diagonal(x, y, N)]
    return ObjClass(e1), ObjClass(e2)


def triangles_of_pair(a: Arc, b: Arc) -> Tuple[TriangleData, TriangleData]:
    """The two nonsplit triangles between crossing arcs.

    With ``{a, b} = {(i,k), (j,l)}``, ``i < j < k < l``, the triangle starting
    at ``(i,k)`` has middle term ``(i,l) ⊕ (j,k)`` and the one starting at
    ``(j,l)`` has middle term ``(i,j) ⊕ (k,l)``; sides of the polygon are
    zero.  Returns ``(a -> E1 -> b, b -> E2 -> a)``.
    """
    if not cross(a, b):
        raise ArcModelError(f"{a} and {b} do not cross")
    N = a[2]
    first, second = _ptolemy(a, b)
    if (a[0], a[1]) > (b[0], b[1]):
        first, second = second, first
    A, Bc = ObjClass.of(a), ObjClass.of(b)
    pat = frozenset({(0, 0)})
    t1 = TriangleData(A, first, Bc, pat, _vanishing(pat, A, Bc, N))
    t2 = TriangleData(Bc, second, A, pat, _vanishing(pat, Bc, A, N))
    return t1, t2


class AmbiguousObjectError(ArcModelError):
    """Hom dimensions admit several objects (the hom matrix is singular)."""


class NoObjectError(ArcModelError):
    """No object has the requested hom dimensions."""


@lru_cache(maxsize=None)
def _hom_table(n: int):
    A = arcs(n)
    H = [[hom_dim(z, x) for x in A] for z in A]
    m = len(A)
    # exact inverse, or None when singular
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(m)]
         for i, row in enumerate(H)]
    inv = None
    r = 0
    ok = True
    for c in range(m):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            ok = False
            break
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        r += 1
    if ok:
        # integer adjugate-style form: inverse = num / den
        den = 1
        for row in M:
            for v in row[m:]:
                den = den * v.denominator // _gcd(den, v.denominator)
        inv = ([[int(v * den) for v in row[m:]] for row in M], den)
    return A, H, inv


def solve_object(n: int, h: Sequence[int], support: Optional[Iterable[Arc]] = None) -> ObjClass:
    """The object ``B`` with ``dim Hom(z, B) = h[z]`` for every arc ``z``.

    ``h`` is indexed like :func:`arcs`.  When ``support`` is given, ``B`` must
    lie in its additive closure.  Raises :class:`NoObjectError` if no object
    fits and :class:`AmbiguousObjectError` if several do.
    """
    A, H, inv = _hom_table(n)
    m = len(A)
    allowed = None if support is None else set(support)
    if inv is not None:
        num, den = inv
        nz = [(z, h[z]) for z in range(m) if h[z]]
        mult = []
        for x in range(m):
            row = num[x]
            q, rem = divmod(sum(row[z] * v for z, v in nz), den)
            if rem or q < 0:
                raise NoObjectError(f"no object has hom dimensions {list(h)}")
            mult.append(q)
        obj = ObjClass(a for a, k in zip(A, mult) for _ in range(k))
        if allowed is not None and any(a not in allowed for a in obj):
            raise NoObjectError(f"solution {obj} leaves the allowed support")
        return obj
    sols = _search_objects(H, list(h), [x for x in range(m)
                                         if h[x] and (allowed is None or A[x] in allowed)])
    if not sols:
        raise NoObjectError(f"no object has hom dimensions {list(h)}")
    if len(sols) > 1:
        raise AmbiguousObjectError(
            "several objects share hom dimensions: "
            + ", ".join(repr(ObjClass(A[x] for x, k in s.items() for _ in range(k))) for s in sols))
    return ObjClass(A[x] for x, k in sols[0].items() for _ in range(k))


def _search_objects(H, h, cand) -> List[Dict[int, int]]:
    """Nonnegative solutions of ``H m = h`` supported on ``cand`` (at most two)."""
    m = len(h)
    last = {}
    for pos, x in enumerate(cand):
        for z in range(m):
            if H[z][x]:
                last[z] = pos
    if any(h[z] and z not in last for z in range(m)):
        return []
    finish: Dict[int, List[int]] = {}
    for z, pos in last.items():
        finish.setdefault(pos, []).append(z)
    sols: List[Dict[int, int]] = []
    res = list(h)
    chosen: Dict[int, int] = {}

    def rec(pos):
        if len(sols) > 1:
            return
        if pos == len(cand):
            if not any(res):
                sols.append({x: k for x, k in chosen.items() if k})
            return
        x = cand[pos]
        col = [z for z in range(m) if H[z][x]]
        top = min(res[z] for z in col)
        for k in range(top + 1):
            if k:
                for z in col:
                    res[z] -= 1
            chosen[x] = k
            if all(res[z] == 0 for z in finish.get(pos, ())):
                rec(pos + 1)
        for z in col:
            res[z] += top
        chosen.pop(x, None)

    rec(0)
    return sols


def generic_triangle(A, C, pattern: Iterable[Tuple[int, int]]) -> TriangleData:
    """Triangle on a generic connecting map with the given support.

    ``pattern`` lists pairs ``(k, j)`` with ``C_j`` crossing ``A_k``.  The
    middle term is read off the long exact sequence

        dim Hom(z, B) = dim Hom(z, A) + dim Hom(z, C) - r(z) - r(Σz),

    where ``r(w)`` is the rank of composing with δ on ``Hom(w, C)``.
    """
    A, C = ObjClass.of(A), ObjClass.of(C)
    pat = frozenset(pattern)
    for k, j in pat:
        if not cross(A.summands[k], C.summands[j]):
            raise ArcModelError(f"no extension from {C.summands[j]} to {A.summands[k]}")
    N = (A.summands or C.summands)[0][2]
    n = N - 3
    probe = TriangleData(A, ObjClass(), C, pat, frozenset())
    zs = arcs(n)
    r = {z: probe.delta_rank(z) for z in zs}
    h = [hom_obj(z, A) + hom_obj(z, C) - r[z] - r[suspend(z, 1)] for z in zs]
    B = solve_object(n, h)
    return TriangleData(A, B, C, pat, frozenset(z for z in zs if r[z]))


def _connected(pattern, p: int, q: int) -> bool:
    """Does the bipartite support graph touch and connect all ``p + q`` vertices?"""
    if not pattern:
        return False
    adj: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}
    for k, j in pattern:
        adj.setdefault(("a", k), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("a", k))
    if len(adj) != p + q:
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == p + q


def generated_triangles(n: int, level: int = 1) -> Tuple[Tuple[TriangleData, ...], int]:
    """All triangles whose end terms have at most ``level + 1`` summands in total.

    Level 1 gives the crossing-pair triangles and the split triangles of two
    indecomposables.  Higher levels add generic triangles on connected
    supports.  Returns the triangles and the number of candidates skipped
    because their middle term is not determined by hom dimensions.
    """
    _check_bound(n)
    if level < 1:
        raise ArcModelError("level must be at least 1")
    out: List[TriangleData] = []
    skipped = 0
    for lv in range(1, level + 1):
        tris, sk = _triangles_at_size(n, lv + 1)
        out.extend(tris)
        skipped += sk
    return tuple(out), skipped


@lru_cache(maxsize=None)
def _triangles_at_size(n: int, size: int) -> Tuple[Tuple[TriangleData, ...], int]:
    A = arcs(n)
    if size == 2:
        out = []
        for a, b in itertools.combinations(A, 2):
            if cross(a, b):
                out.extend(triangles_of_pair(a, b))
        for a in A:
            for c in A:
                out.append(split_triangle(a, c))
        return tuple(out), 0
    out = []
    seen = set()
    skipped = 0
    for p in range(1, size):
        q = size - p
        for As in itertools.combinations_with_replacement(A, p):
            for Cs in itertools.combinations_with_replacement(A, q):
                edges = [(k, j) for k in range(p) for j in range(q) if cross(As[k], Cs[j])]
                if len(edges) < size - 1:
                    continue
                for r in range(size - 1, len(edges) + 1):
                    for pat in itertools.combinations(edges, r):
                        if not _connected(pat, p, q):
                            continue
                        key = (As, Cs, _canonical_pattern(As, Cs, pat))
                        if key in seen:
                            continue
                        seen.add(key)
                        try:
                            out.append(generic_triangle(As, Cs, pat))
                        except AmbiguousObjectError:
                            skipped += 1
    return tuple(out), skipped


def _canonical_pattern(As, Cs, pat):
    """Smallest relabelling of ``pat`` under permutations of equal summands."""
    def perms(seq):
        groups: Dict[Arc, List[int]] = {}
        for i, x in enumerate(seq):
            groups.setdefault(x, []).append(i)
        choices = [list(itertools.permutations(v)) for v in groups.values()]
        keys = list(groups.values())
        for combo in itertools.product(*choices):
            mp = {}
            for orig, new in zip(keys, combo):
                mp.update(zip(orig, new))
            yield mp
    best = None
    for pa in perms(As):
        for pc in perms(Cs):
            cand = tuple(sorted((pa[k], pc[j]) for k, j in pat))
            if best is None or cand < best:
                best = cand
    return best


# ---------------------------------------------------------------------------
# Index resolutions


def _top(T: Sequence[Arc], c: Arc) -> List[Arc]:
    """Arcs of ``T`` supporting the top of ``Hom(-, c)`` restricted to ``T``."""
    out = []
    for t in T:
        if not hom_dim(t, c):
            continue
        radical = any(
            u != t and hom_dim(t, u) and hom_dim(u, c) and compose_nonzero(t, u, c)
            for u in T)
        if not radical:
            out.append(t)
    return out


def index_resolution(T: Triangulation, c: Arc) -> Tuple[ObjClass, ObjClass]:
    """Objects ``T0, T1`` of ``add T`` with a triangle ``T0 -> T1 -> c -> ΣT0``.

    ``T1`` is the projective cover of ``Hom(-, c)`` restricted to ``T``.  Then
    ``T0`` is determined by the long exact sequence: for every arc ``z``,

        dim Hom(z, T0) = dim Hom(z, T1) - s(z) + dim Hom(Σz, c) - s(Σz),

    where ``s(w)`` is the rank of ``Hom(w, T1) -> Hom(w, c)``.
    """
    n = T.n
    T1 = ObjClass(_top(T.arcs, c))

    def s(w):
        return int(any(hom_dim(w, t) and compose_nonzero(w, t, c) for t in T1))

    zs = arcs(n)
    h = []
    for z in zs:
        sz = suspend(z, 1)
        h.append(hom_obj(z, T1) - s(z) + hom_dim(sz, c) - s(sz))
    try:
        T0 = solve_object(n, h, support=T.arcs)
    except (NoObjectError, AmbiguousObjectError) as exc:
        raise ArcModelError(f"index resolution of {c} over {T} failed: {exc}") from None
    return T0, T1


# ---------------------------------------------------------------------------
# Modules over rigid subcategories


@dataclass(frozen=True)
class ModuleRep:
    """The restriction of ``Hom(-, S)`` to the arcs in ``base``.

    ``actions`` contains the pairs ``(x, x2)`` of base arcs for which the
    structure map ``M(x2) -> M(x)`` induced by the nonzero ``x -> x2`` is
    nonzero.
    """

    base: Tuple[Arc, ...]
    dims: Dict[Arc, int]
    actions: FrozenSet[Tuple[Arc, Arc]]

    def support(self) -> List[Arc]:
        return [x for x in self.base if self.dims.get(x, 0)]

    def is_thin(self) -> bool:
        return all(v <= 1 for v in self.dims.values())

    def dim_class(self) -> K0Element:
        return K0Element({simple_label(x): v for x, v in self.dims.items()})

    def total_dim(self) -> int:
        return sum(self.dims.values())


def _check_rigid(D: Sequence[Arc]) -> None:
    for x, y in itertools.combinations(D, 2):
        if cross(x, y):
            raise ArcModelError(f"subcategory is not rigid: {x} and {y} cross")


def module_of(S, D: Iterable[Arc]) -> ModuleRep:
    """``Hom(-, S)`` restricted to the rigid set ``D``."""
    S = ObjClass.of(S)
    base = tuple(sorted(set(D)))
    _check_rigid(base)
    dims = {x: hom_obj(x, S) for x in base}
    acts = set()
    for x in base:
        for y in base:
            if x == y or not dims[x] or not dims[y] or not hom_dim(x, y):
                continue
            for s in set(S.summands):
                if hom_dim(x, s) and hom_dim(y, s) and compose_nonzero(x, y, s):
                    acts.add((x, y))
                    break
    return ModuleRep(base, {x: v for x, v in dims.items() if v}, frozenset(acts))


def closed_subsets(M: ModuleRep) -> List[FrozenSet[Arc]]:
    """Subsets of the support closed under the structure maps.

    A subset ``s`` is closed when ``x2 in s`` and ``(x, x2)`` an action imply
    ``x in s``.
    """
    if not M.is_thin():
        raise ArcModelError("submodule enumeration needs a thin module")
    sup = M.support()
    out = []
    for r in range(len(sup) + 1):
        for s in itertools.combinations(sup, r):
            ss = set(s)
            if all(x in ss for x, y in M.actions if y in ss):
                out.append(frozenset(s))
    return out


def submodule_classes(M: ModuleRep) -> List[Tuple[K0Element, int]]:
    """Dimension classes of submodules with their counts.

    For a thin module the Grassmannian of each class is a finite set of
    points, so its Euler characteristic is the number of closed subsets.
    """
    counts: Dict[K0Element, int] = {}
    order = []
    for s in closed_subsets(M):
        e = K0Element({simple_label(x): 1 for x in s})
        if e not in counts:
            order.append(e)
            counts[e] = 0
        counts[e] += 1
    return [(e, counts[e]) for e in order]
