"""Caldero-Chapoton style characters relative to a rigid ``X`` and frieze grids.

Values live in the integer Laurent polynomial ring in variables ``x_{i,j}``,
one per arc of the triangulation ``T``.  An exponential map ``ε̄`` sends
``K0(S, E_X)`` to units of that ring; with

    α(C) = ε̄(Q_X[C]),    β(e) = ε̄(ψ(e)),

the character of an object ``C`` is

    ρ(C) = α(C) * Σ_e χ(Gr_e F_X(ΣC)) * β(e)^{-1}.

Submodule Grassmannians of the thin modules that occur are finite sets, so
``χ`` is a count of closed subsets.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import arcmodel as am
from .abelian import FpGroup, K0Element
from .arcmodel import Arc, ObjClass
from .indexmaps import HomBundle, index

__all__ = [
    "LaurentElement",
    "EpsilonMap",
    "FriezeGrid",
    "EpsilonError",
    "laurent_add",
    "laurent_mul",
    "variable_name",
    "make_epsilon",
    "trivial_epsilon",
    "variable_epsilon",
    "epsilon_from_file",
    "alpha",
    "beta",
    "rho",
    "frieze",
]


class EpsilonError(ValueError):
    """An exponential map is not multiplicative on the group."""


def variable_name(label: str) -> str:
    """``"1-3"`` becomes ``"x_{1,3}"``; other labels become ``"x_{label}"``."""
    m = re.fullmatch(r"(\d+)-(\d+)", label)
    return f"x_{{{m.group(1)},{m.group(2)}}}" if m else f"x_{{{label}}}"


class LaurentElement:
    """Sparse integer Laurent polynomial over a fixed tuple of variable labels."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Tuple[int, ...], int]] = None):
        self.variables: Tuple[str, ...] = tuple(variables)
        k = len(self.variables)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != k:
                raise ValueError("exponent vector length does not match the variables")
            if c:
                clean[e] = clean.get(e, 0) + int(c)
        self.terms: Dict[Tuple[int, ...], int] = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, variables: Sequence[str], c: int = 1) -> "LaurentElement":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Mapping[str, int],
                 coeff: int = 1) -> "LaurentElement":
        variables = tuple(variables)
        for v in exponents:
            if v not in variables:
                raise ValueError(f"unknown variable {v!r}")
        return cls(variables, {tuple(exponents.get(v, 0) for v in variables): coeff})

    def _same(self, other: "LaurentElement") -> None:
        if self.variables != other.variables:
            raise ValueError("Laurent polynomials over different variables")

    def __add__(self, other: "LaurentElement") -> "LaurentElement":
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentElement(self.variables, out)

    def __neg__(self) -> "LaurentElement":
        return LaurentElement(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentElement") -> "LaurentElement":
        return self + (-other)

    def __mul__(self, other) -> "LaurentElement":
        if isinstance(other, int):
            return LaurentElement(self.variables, {e: c * other for e, c in self.terms.items()})
        self._same(other)
        out: Dict[Tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentElement(self.variables, out)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        """Units of the ring are ``±`` a monomial."""
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def inverse(self) -> "LaurentElement":
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        (e, c), = self.terms.items()
        return LaurentElement(self.variables, {tuple(-a for a in e): c})

    def __pow__(self, k: int) -> "LaurentElement":
        base = self if k >= 0 else self.inverse()
        out = LaurentElement.constant(self.variables)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_one(self) -> bool:
        return self.terms == {(0,) * len(self.variables): 1}

    def specialize(self, value: int = 1) -> int:
        """Evaluate with every variable set to ``±1``."""
        if value not in (1, -1):
            raise ValueError("only the units 1 and -1 can be substituted exactly")
        return sum(c * (value ** (sum(e) % 2)) for e, c in self.terms.items())

    def constant_value(self) -> Optional[int]:
        """The integer this element equals, or None if it is not constant."""
        zero = (0,) * len(self.variables)
        if not self.terms:
            return 0
        if set(self.terms) == {zero}:
            return self.terms[zero]
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.constant_value() == other
        return (isinstance(other, LaurentElement) and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.variables, frozenset(self.terms.items())))

    def sorted_terms(self) -> List[Tuple[Tuple[int, ...], int]]:
        return sorted(self.terms.items())

    def to_text(self) -> str:
        """Canonical text: terms in lexicographic order of exponent vectors."""
        if not self.terms:
            return "0"
        names = [variable_name(v) for v in self.variables]
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, a in zip(names, e):
                if a == 1:
                    factors.append(name)
                elif a:
                    factors.append(f"{name}^{a}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> list:
        return [[list(e), c] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, variables: Sequence[str], data) -> "LaurentElement":
        return cls(variables, {tuple(e): c for e, c in data})

    def __repr__(self) -> str:
        return self.to_text()


def laurent_add(p: LaurentElement, q: LaurentElement) -> LaurentElement:
    return p + q


def laurent_mul(p: LaurentElement, q: LaurentElement) -> LaurentElement:
    return p * q


# ---------------------------------------------------------------------------
# Exponential maps


@dataclass(frozen=True, eq=False)
class EpsilonMap:
    """A multiplicative map from a finitely presented group to Laurent units."""

    group: FpGroup
    images: Dict[str, LaurentElement]
    variables: Tuple[str, ...]
    name: str = ""

    def __call__(self, e: K0Element) -> LaurentElement:
        out = LaurentElement.constant(self.variables)
        for label, k in e.coefficients.items():
            out = out * (self.images[label] ** k)
        return out


def make_epsilon(group: FpGroup, images: Mapping[str, LaurentElement],
                 variables: Optional[Sequence[str]] = None, name: str = "") -> EpsilonMap:
    """Validate that generator images are units and every relation maps to 1."""
    missing = [b for b in group.basis if b not in images]
    if missing:
        raise EpsilonError(f"no image for generator(s) {missing}")
    extra = sorted(set(images) - set(group.basis))
    if extra:
        raise EpsilonError(f"images given for unknown generator(s) {extra}")
    if variables is None:
        variables = next(iter(images.values())).variables if images else ()
    variables = tuple(variables)
    for b in group.basis:
        img = images[b]
        if img.variables != variables:
            raise EpsilonError(f"image of {b} uses different variables")
        if not img.is_unit():
            raise EpsilonError(f"image of {b} is {img}, not a unit")
    eps = EpsilonMap(group, dict(images), variables, name)
    for row in group.relations.to_rows():
        rel = K0Element.from_vector(group.basis, row)
        val = eps(rel)
        if not val.is_one():
            raise EpsilonError(f"relation {rel!r} maps to {val}, not 1")
    return eps


def trivial_epsilon(group: FpGroup, variables: Sequence[str] = ()) -> EpsilonMap:
    one = LaurentElement.constant(variables)
    return make_epsilon(group, {b: one for b in group.basis}, variables, name="trivial")


def variable_epsilon(b: HomBundle) -> EpsilonMap:
    """For ``X = T``: the class of each ``t`` goes to ``x_t``.

    On an arbitrary arc ``c`` this forces ``c -> x^{ind_T(c)}``.
    """
    if set(b.X) != set(b.T.arcs):
        raise EpsilonError("the variable map needs X equal to the whole triangulation")
    variables = tuple(b.T.labels)
    images = {}
    for a in am.arcs(b.T.n):
        ind = index(b.T, a)
        images[a.label] = LaurentElement.monomial(variables, ind.coefficients)
    return make_epsilon(b.k0_X.group, images, variables, name="variables")


def epsilon_from_file(path, b: HomBundle) -> EpsilonMap:
    """Read ``{generator: {"sign": ±1, "monomial": {arc: exponent}}}`` from JSON."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return epsilon_from_mapping(raw, b)


def epsilon_from_mapping(raw, b: HomBundle) -> EpsilonMap:
    if not isinstance(raw, dict):
        raise EpsilonError("epsilon file must hold an object keyed by generator labels")
    variables = tuple(b.T.labels)
    images = {}
    for label, entry in raw.items():
        if not isinstance(entry, dict) or set(entry) - {"sign", "monomial"}:
            raise EpsilonError(f"{label}: expected fields 'sign' and 'monomial'")
        sign = entry.get("sign", 1)
        if sign not in (1, -1):
            raise EpsilonError(f"{label}: sign must be 1 or -1")
        mono = entry.get("monomial", {})
        try:
            images[label] = LaurentElement.monomial(variables, mono, sign)
        except ValueError as exc:
            raise EpsilonError(f"{label}: {exc}") from None
    return make_epsilon(b.k0_X.group, images, variables, name="file")


# ---------------------------------------------------------------------------
# The character


def alpha(eps: EpsilonMap, b: HomBundle, C) -> LaurentElement:
    return eps(b.Q_X(ObjClass.of(C).k0()))


def beta(eps: EpsilonMap, b: HomBundle, e: K0Element) -> LaurentElement:
    return eps(b.psi(e))


def rho(eps: EpsilonMap, b: HomBundle, C) -> LaurentElement:
    """``α(C) Σ_e χ(Gr_e F_X(ΣC)) β(e)^{-1}``."""
    C = ObjClass.of(C)
    M = am.module_of(C.suspend(1), b.X)
    total = LaurentElement(eps.variables)
    for e, count in am.submodule_classes(M):
        total = total + beta(eps, b, e).inverse() * count
    return alpha(eps, b, C) * total


# ---------------------------------------------------------------------------
# Friezes


@dataclass(frozen=True, eq=False)
class FriezeGrid:
    """Values on all vertex pairs ``(i, j)``, ``i < j``, of the polygon.

    ``checks`` lists one record per diamond and per quiddity entry.
    """

    N: int
    values: Dict[Tuple[int, int], LaurentElement]
    checks: List[dict] = field(default_factory=list)
    rule: str = "unimodular"

    def value(self, i: int, j: int) -> LaurentElement:
        i, j = am._norm(i, j, self.N)
        return self.values[(i, j)]

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def failures(self) -> List[dict]:
        return [c for c in self.checks if not c["passed"]]

    def quiddity(self) -> List[LaurentElement]:
        return [self.value(v - 1, v + 1) for v in range(1, self.N + 1)]

    def rows(self) -> List[List[LaurentElement]]:
        """Staircase rows: row ``k`` holds the values at distance ``k + 1``."""
        return [[self.value(i, i + k + 1) for i in range(1, self.N + 1)]
                for k in range(self.N - 1)]


def frieze(eps: EpsilonMap, b: HomBundle) -> FriezeGrid:
    """Character values on every arc (sides get 1) with the diamond checks.

    When ``X = T`` every diamond ``a d - b c`` must be 1; otherwise it must
    be 0 or 1.  With the trivial map all entries must also be positive
    integers and, when ``X = T``, the quiddity row must count the triangles
    at each vertex.
    """
    N = b.T.N
    one = LaurentElement.constant(eps.variables)
    values: Dict[Tuple[int, int], LaurentElement] = {}
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            if j == i + 1 or (i == 1 and j == N):
                values[(i, j)] = one
            else:
                values[(i, j)] = rho(eps, b, am.Arc(i, j, N))
    full = set(b.X) == set(b.T.arcs)
    grid = FriezeGrid(N, values, rule="unimodular" if full else "generalised")
    allowed = {1} if full else {0, 1}
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            verts = {i, i % N + 1, j, j % N + 1}
            if len(verts) < 4 or not (i < j):
                continue
            a, d = grid.value(i, j), grid.value(i + 1, j + 1)
            bb, c = grid.value(i + 1, j), grid.value(i, j + 1)
            det = a * d - bb * c
            val = det.constant_value()
            grid.checks.append({
                "check": "diamond",
                "at": [i, j],
                "value": det.to_text(),
                "passed": val in allowed,
            })
    if eps.name == "trivial":
        for key, v in sorted(values.items()):
            val = v.constant_value()
            grid.checks.append({"check": "positive", "at": list(key), "value": v.to_text(),
                                "passed": val is not None and val > 0})
        if full:
            counts = {v: 0 for v in range(1, N + 1)}
            for tri in b.T.triangles():
                for v in tri:
                    counts[v] += 1
            for v, q in zip(range(1, N + 1), grid.quiddity()):
                grid.checks.append({"check": "quiddity", "at": [v], "value": q.to_text(),
                                    "expected": counts[v],
                                    "passed": q.constant_value() == counts[v]})
    return grid
