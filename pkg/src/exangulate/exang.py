"""Finite exangulated categories and their relative Grothendieck groups.

A :class:`CategoryData` records a ``d``-exangulated category by its
indecomposable objects, hom dimensions, and a list of conflations.  Each
conflation stores only the set of objects ``x`` for which some map
``x -> X^{d+1}`` has nonzero composite with its extension; that set decides
membership in every relative structure ``E_D``:

    a conflation belongs to E_D  iff  its vanishing set misses D.

The relative group ``K0(C, E_D)`` is the split Grothendieck group modulo the
Euler relations of those conflations.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from . import arcmodel as am
from .abelian import (FpGroup, GroupHom, IntMatrix, K0Element, Lattice, induced_hom, present,
                      _group_from_lattice)

__all__ = [
    "Conflation",
    "CategoryData",
    "RelativeK0",
    "ExangError",
    "SchemaError",
    "NonStabilizationError",
    "build_d1",
    "load",
    "loads",
    "dumps",
    "relative_conflations",
    "euler",
    "reversed_euler",
    "k0_split",
    "k0_relative",
    "DEFAULT_SATURATION",
]

DEFAULT_SATURATION = 1


class ExangError(ValueError):
    """Invalid category data or subcategory."""


class SchemaError(ExangError):
    """A category file does not match the schema."""


class NonStabilizationError(ExangError):
    """Raising the saturation bound changed the relation subgroup."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Conflation:
    """A ``(d+2)``-term conflation ``X^0 -> ... -> X^{d+1}`` with its extension.

    ``terms`` are multisets of object labels (sorted tuples) and
    ``delta_vanishing_set`` lists the objects ``x`` with ``(δ_♯)_x != 0``.
    """

    terms: Tuple[Tuple[str, ...], ...]
    delta_vanishing_set: FrozenSet[str] = frozenset()

    @classmethod
    def make(cls, terms: Iterable[Iterable[str]], vanishing: Iterable[str] = ()) -> "Conflation":
        return cls(tuple(tuple(sorted(t)) for t in terms), frozenset(vanishing))

    @property
    def length(self) -> int:
        return len(self.terms)


def euler(c: Conflation) -> K0Element:
    """Alternating sum of the term classes, position 0 counted positively."""
    out: Dict[str, int] = {}
    for i, term in enumerate(c.terms):
        sign = -1 if i % 2 else 1
        for label in term:
            out[label] = out.get(label, 0) + sign
    return K0Element(out)


def reversed_euler(c: Conflation) -> K0Element:
    """``sum_i (-1)^i [X^{d+1-i}]``, which equals ``(-1)^{d+1}`` times :func:`euler`."""
    out: Dict[str, int] = {}
    for i, term in enumerate(reversed(c.terms)):
        sign = -1 if i % 2 else 1
        for label in term:
            out[label] = out.get(label, 0) + sign
    return K0Element(out)


@dataclass(frozen=True, eq=False)
class CategoryData:
    """A finite ``d``-exangulated category given as data.

    ``model_n`` is set for categories generated from the polygon model; it
    lets relation generation go beyond the stored conflations when a higher
    saturation bound is requested.
    """

    d: int
    objects: Tuple[str, ...]
    hom: Dict[Tuple[str, str], int]
    suspension: Optional[Dict[str, str]]
    conflations: Tuple[Conflation, ...]
    model_n: Optional[int] = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.d < 1:
            raise ExangError(f"d must be positive, got {self.d}")
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise ExangError("duplicate object label")
        for (s, t), v in self.hom.items():
            if s not in objs or t not in objs:
                raise ExangError(f"hom entry mentions unknown object in ({s!r}, {t!r})")
            if v < 0:
                raise ExangError(f"negative hom dimension for ({s!r}, {t!r})")
        if self.suspension is not None:
            if set(self.suspension) != objs or set(self.suspension.values()) != objs:
                raise ExangError("suspension must be a permutation of the objects")
        for k, c in enumerate(self.conflations):
            _check_conflation(self, c, f"conflations[{k}]")

    def hom_dim(self, s: str, t: str) -> int:
        return self.hom.get((s, t), 0)

    def hom_to(self, x: str, term: Sequence[str]) -> int:
        return sum(self.hom_dim(x, y) for y in term)

    def mask(self, labels: Iterable[str]) -> int:
        index = self._index()
        m = 0
        for x in labels:
            m |= 1 << index[x]
        return m

    def _index(self) -> Dict[str, int]:
        idx = self._cache.get("index")
        if idx is None:
            idx = {x: i for i, x in enumerate(self.objects)}
            self._cache["index"] = idx
        return idx


def _check_conflation(C: CategoryData, c: Conflation, where: str) -> None:
    if len(c.terms) != C.d + 2:
        raise SchemaError(f"{where}: expected {C.d + 2} terms for d={C.d}, got {len(c.terms)}")
    objs = set(C.objects)
    for i, term in enumerate(c.terms):
        for x in term:
            if x not in objs:
                raise SchemaError(f"{where}.terms[{i}]: unknown object {x!r}")
    for x in c.delta_vanishing_set:
        if x not in objs:
            raise SchemaError(f"{where}.delta_nonvanishing: unknown object {x!r}")
        if C.hom_to(x, c.terms[-1]) == 0:
            raise SchemaError(
                f"{where}.delta_nonvanishing: {x!r} has no maps to the last term")


# ---------------------------------------------------------------------------
# Generation and serialization


def _conflation_of(t: am.TriangleData) -> Conflation:
    return Conflation.make(
        ([a.label for a in t.A], [b.label for b in t.B], [c.label for c in t.C]),
        (x.label for x in t.delta_vanishing_set))


def build_d1(n: int) -> CategoryData:
    """The polygon model for ``A_n`` with crossing-pair and split triangles."""
    am._check_bound(n)
    A = am.arcs(n)
    hom = {(x.label, y.label): 1 for x in A for y in A if am.hom_dim(x, y)}
    sus = {x.label: am.suspend(x, 1).label for x in A}
    tris, _ = am.generated_triangles(n, 1)
    return CategoryData(1, tuple(x.label for x in A), hom, sus,
                        tuple(_conflation_of(t) for t in tris), model_n=n)


_TOP_FIELDS = ("d", "objects", "hom", "suspension", "conflations")
_CONFLATION_FIELDS = ("terms", "delta_nonvanishing")


def _payload(C: CategoryData) -> dict:
    out = {
        "d": C.d,
        "objects": list(C.objects),
        "hom": [[s, t, v] for s in C.objects for t in C.objects
                for v in [C.hom_dim(s, t)] if v],
    }
    if C.suspension is not None:
        out["suspension"] = [[x, C.suspension[x]] for x in C.objects]
    order = C._index()
    out["conflations"] = [
        {"terms": [list(t) for t in c.terms],
         "delta_nonvanishing": sorted(c.delta_vanishing_set, key=order.__getitem__)}
        for c in C.conflations]
    return out


def dumps(C: CategoryData) -> str:
    """Deterministic JSON text of a category (trailing newline included)."""
    return json.dumps(_payload(C), indent=1, ensure_ascii=False) + "\n"


def loads(text: str) -> CategoryData:
    """Parse and validate category JSON text."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return _from_payload(raw)


def load(file: Union[str, os.PathLike, io.TextIOBase]) -> CategoryData:
    """Read a category file (path or open text stream)."""
    if hasattr(file, "read"):
        return loads(file.read())
    with open(file, encoding="utf-8") as fh:
        return loads(fh.read())


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise SchemaError(f"{where}: {msg}")


def _from_payload(raw) -> CategoryData:
    _expect(isinstance(raw, dict), "top level", "expected an object")
    extra = sorted(set(raw) - set(_TOP_FIELDS))
    _expect(not extra, "top level", f"unknown field(s) {extra}")
    for key in ("d", "objects", "hom", "conflations"):
        _expect(key in raw, "top level", f"missing field {key!r}")
    d = raw["d"]
    _expect(isinstance(d, int) and not isinstance(d, bool) and d >= 1, "d",
            "expected a positive integer")
    objects = raw["objects"]
    _expect(isinstance(objects, list) and all(isinstance(x, str) for x in objects),
            "objects", "expected an array of strings")
    hom: Dict[Tuple[str, str], int] = {}
    _expect(isinstance(raw["hom"], list), "hom", "expected an array")
    for k, entry in enumerate(raw["hom"]):
        where = f"hom[{k}]"
        _expect(isinstance(entry, list) and len(entry) == 3, where, "expected [source, target, dim]")
        s, t, v = entry
        _expect(isinstance(s, str) and isinstance(t, str), where, "labels must be strings")
        _expect(isinstance(v, int) and not isinstance(v, bool) and v >= 0, where,
                "dim must be a nonnegative integer")
        _expect((s, t) not in hom, where, f"duplicate entry for ({s}, {t})")
        if v:
            hom[(s, t)] = v
    sus = None
    if "suspension" in raw:
        _expect(isinstance(raw["suspension"], list), "suspension", "expected an array")
        sus = {}
        for k, pair in enumerate(raw["suspension"]):
            _expect(isinstance(pair, list) and len(pair) == 2
                    and all(isinstance(x, str) for x in pair),
                    f"suspension[{k}]", "expected [label, label]")
            sus[pair[0]] = pair[1]
    _expect(isinstance(raw["conflations"], list), "conflations", "expected an array")
    confs = []
    for k, c in enumerate(raw["conflations"]):
        where = f"conflations[{k}]"
        _expect(isinstance(c, dict), where, "expected an object")
        extra = sorted(set(c) - set(_CONFLATION_FIELDS))
        _expect(not extra, where, f"unknown field(s) {extra}")
        _expect("terms" in c, where, "missing field 'terms'")
        terms = c["terms"]
        _expect(isinstance(terms, list) and all(
            isinstance(t, list) and all(isinstance(x, str) for x in t) for t in terms),
            f"{where}.terms", "expected an array of arrays of labels")
        _expect(len(terms) == d + 2, f"{where}.terms",
                f"expected {d + 2} terms for d={d}, got {len(terms)}")
        van = c.get("delta_nonvanishing", [])
        _expect(isinstance(van, list) and all(isinstance(x, str) for x in van),
                f"{where}.delta_nonvanishing", "expected an array of labels")
        confs.append(Conflation.make(terms, van))
    try:
        return CategoryData(d, tuple(objects), hom, sus, tuple(confs))
    except SchemaError:
        raise
    except ExangError as exc:
        raise SchemaError(str(exc)) from None


# ---------------------------------------------------------------------------
# Relative structures and Grothendieck groups


def _check_subset(C: CategoryData, D: Iterable[str]) -> FrozenSet[str]:
    D = frozenset(D)
    unknown = sorted(D - set(C.objects))
    if unknown:
        raise ExangError(f"unknown object label(s) {unknown}")
    return D


def relative_conflations(C: CategoryData, D: Iterable[str]) -> List[Conflation]:
    """Conflations whose extension is killed by every object of ``D``."""
    D = _check_subset(C, D)
    return [c for c in C.conflations if not (c.delta_vanishing_set & D)]


def k0_split(C: CategoryData) -> FpGroup:
    """The split Grothendieck group, free on the objects."""
    g = C._cache.get("k0sp")
    if g is None:
        g = present(C.objects, [])
        C._cache["k0sp"] = g
    return g


@dataclass(frozen=True, eq=False)
class RelativeK0:
    """``K0(C, E_D)`` together with the canonical surjection from ``K0^sp``."""

    D: FrozenSet[str]
    group: FpGroup
    projection: GroupHom
    saturation: int
    relation_count: int


def _relation_table(C: CategoryData, level: int) -> Dict[Tuple[int, ...], List[int]]:
    """Euler vectors at a saturation level, each with its minimal vanishing masks."""
    key = ("table", level)
    tab = C._cache.get(key)
    if tab is not None:
        return tab
    index = C._index()
    m = len(C.objects)
    table: Dict[Tuple[int, ...], List[int]] = {}

    def add(vec, mask):
        masks = table.get(vec)
        if masks is None:
            table[vec] = [mask]
            return
        if any(old & mask == old for old in masks):
            return
        masks[:] = [old for old in masks if old & mask != mask] + [mask]

    def add_conflation(c: Conflation):
        vec = [0] * m
        for i, term in enumerate(c.terms):
            sign = -1 if i % 2 else 1
            for x in term:
                vec[index[x]] += sign
        if any(vec):
            add(tuple(vec), C.mask(c.delta_vanishing_set))

    if level <= 1 or C.model_n is None:
        for c in C.conflations:
            add_conflation(c)
    else:
        prev = _relation_table(C, level - 1)
        for vec, masks in prev.items():
            table[vec] = list(masks)
        tris, _ = am._triangles_at_size(C.model_n, level + 1)
        for t in tris:
            add_conflation(_conflation_of(t))
    C._cache[key] = table
    return table


def _relations_for(C: CategoryData, level: int, Dmask: int) -> List[Tuple[int, ...]]:
    return [vec for vec, masks in _relation_table(C, level).items()
            if any(mk & Dmask == 0 for mk in masks)]


def k0_relative(C: CategoryData, D: Iterable[str], saturation: int = DEFAULT_SATURATION,
                check_stability: bool = True) -> RelativeK0:
    """``K0^sp(C) / I_D`` with relations from conflations up to the saturation bound.

    Level ``b`` uses conflations whose end terms have at most ``b + 1``
    indecomposable summands in total.  With ``check_stability`` the level
    ``b + 1`` relations are required to lie in the level ``b`` subgroup;
    otherwise :class:`NonStabilizationError` is raised with a witness.
    """
    if saturation < 1:
        raise ExangError("saturation bound must be at least 1")
    D = _check_subset(C, D)
    Dmask = C.mask(D)
    rels = sorted(_relations_for(C, saturation, Dmask), key=lambda v: (sum(map(abs, v)), v))
    lat = Lattice(len(C.objects), rels)
    if check_stability and C.model_n is not None:
        have = set(rels)
        for vec in _relations_for(C, saturation + 1, Dmask):
            if vec not in have and vec not in lat:
                witness = K0Element.from_vector(C.objects, vec)
                raise NonStabilizationError(
                    f"relation {witness!r} appears at saturation {saturation + 1} "
                    f"but not at {saturation} for D={sorted(D)}", witness)
    group = _group_from_lattice(tuple(C.objects), lat)
    source = k0_split(C)
    proj = GroupHom(source, group, tuple(K0Element.basis_vector(x) for x in C.objects),
                    name=f"Q_D")
    return RelativeK0(D, group, proj, saturation, len(rels))


def relation_vectors(C: CategoryData, D: Iterable[str], level: int) -> FrozenSet[Tuple[int, ...]]:
    """Euler vectors of the ``E_D`` conflations at a saturation level."""
    return frozenset(_relations_for(C, level, C.mask(_check_subset(C, D))))


def saturation_lattices_agree(C: CategoryData, D: Iterable[str], low: int, high: int) -> bool:
    """Do saturation bounds ``low`` and ``high`` generate the same subgroup?"""
    Dmask = C.mask(_check_subset(C, D))
    lo = Lattice(len(C.objects), _relations_for(C, low, Dmask))
    return all(v in lo for v in _relations_for(C, high, Dmask))
