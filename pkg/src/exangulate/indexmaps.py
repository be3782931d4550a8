"""Index maps, mutation data and the homomorphisms between Grothendieck groups.

For a triangulation ``T`` and a subset ``X`` of ``T`` this module builds

* the index ``ind_T`` and its inverse ``L`` on ``K0(S, E_T)``,
* exchange triangles and the subgroup ``N_X`` of ``K0^sp(T)``,
* the error map ``θ`` on simple ``T``-modules,
* ``G_X : K0^sp(T)/N_X -> K0(S, E_X)`` and the maps ``κ, φ̄, ψ̄, ψ``,

and checks that every square of the resulting diagram commutes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import arcmodel as am
from .abelian import (FpGroup, GroupHom, IllDefinedHomError, K0Element, induced_hom,
                      is_isomorphism, present, member)
from .arcmodel import Arc, ObjClass, TriangleData, Triangulation, simple_label
from .exang import CategoryData, RelativeK0, build_d1, k0_relative, k0_split, DEFAULT_SATURATION

__all__ = [
    "MutationData",
    "NSubgroup",
    "HomBundle",
    "IdentityViolation",
    "category",
    "index",
    "index_hom",
    "descended_index",
    "L_hom",
    "mutate",
    "n_subgroup",
    "theta_on_simple",
    "theta_hom",
    "g_iso",
    "bundle",
    "index_error_sides",
    "psi_identity_sides",
    "relative",
]


class IdentityViolation(AssertionError):
    """A predicted identity failed on a concrete instance."""

    def __init__(self, message: str, instance=None):
        super().__init__(message)
        self.instance = instance


@lru_cache(maxsize=None)
def category(n: int) -> CategoryData:
    """The generated polygon category for ``A_n`` (cached)."""
    return build_d1(n)


def relative(n: int, D: Iterable[str], saturation: int = DEFAULT_SATURATION,
             check_stability: bool = True) -> RelativeK0:
    """Cached ``K0(S, E_D)`` for the polygon model."""
    C = category(n)
    key = ("rel", frozenset(D), saturation, check_stability)
    got = C._cache.get(key)
    if got is None:
        got = k0_relative(C, D, saturation, check_stability)
        C._cache[key] = got
    return got


def _tri_key(T: Triangulation):
    return T.arcs


# ---------------------------------------------------------------------------
# Index


@lru_cache(maxsize=1 << 16)
def _index_arc(T: Triangulation, c: Arc) -> K0Element:
    T0, T1 = am.index_resolution(T, c)
    return T1.k0() - T0.k0()


def index(T: Triangulation, S) -> K0Element:
    """``ind_T(S) = [T1] - [T0]`` for a resolution ``T0 -> T1 -> S``, additively."""
    out = K0Element()
    for c in ObjClass.of(S):
        out = out + _index_arc(T, c)
    return out


def _k0sp_T(T: Triangulation) -> FpGroup:
    return present(T.labels, [])


def _k0_fl(D: Sequence[Arc]) -> FpGroup:
    return present([simple_label(t) for t in D], [])


def index_hom(T: Triangulation) -> GroupHom:
    """``ind_T : K0^sp(S) -> K0^sp(T)`` on arc generators."""
    C = category(T.n)
    return GroupHom(k0_split(C), _k0sp_T(T),
                    tuple(index(T, a) for a in am.arcs(T.n)), name="ind_T")


def descended_index(T: Triangulation, k0T: RelativeK0) -> GroupHom:
    """The index on ``K0(S, E_T)``; raises if it does not kill ``I_T``."""
    return induced_hom(k0T.group, _k0sp_T(T),
                       [index(T, a) for a in am.arcs(T.n)], name="ind_T")


def L_hom(T: Triangulation, k0T: Optional[RelativeK0] = None) -> GroupHom:
    """``L : K0^sp(T) -> K0(S, E_T)``, ``[t] -> [t]``, checked inverse to the index."""
    if k0T is None:
        k0T = relative(T.n, T.labels)
    L = induced_hom(_k0sp_T(T), k0T.group,
                    [K0Element.basis_vector(t.label) for t in T], name="L")
    ind = descended_index(T, k0T)
    bad = ind.compose(L).agrees_with(_identity(L.source))
    bad += L.compose(ind).agrees_with(_identity(k0T.group))
    if bad:
        raise IdentityViolation(f"L and the index are not inverse on {bad} for T={T}", (T, bad))
    return L


def _identity(G: FpGroup) -> GroupHom:
    return GroupHom(G, G, tuple(K0Element.basis_vector(b) for b in G.basis), name="id")


# ---------------------------------------------------------------------------
# Mutation


@dataclass(frozen=True)
class MutationData:
    """Exchange triangles ``t -> Y -> t* -> Σt`` and ``t* -> X -> t -> Σt*``."""

    t: Arc
    t_star: Arc
    Y_triangle: TriangleData
    X_triangle: TriangleData

    @property
    def Y(self) -> ObjClass:
        return self.Y_triangle.B

    @property
    def X(self) -> ObjClass:
        return self.X_triangle.B


@lru_cache(maxsize=1 << 12)
def mutate(T: Triangulation, t: Arc) -> MutationData:
    """Flip ``t`` inside its quadrilateral."""
    if t not in T:
        raise am.ArcModelError(f"{t} is not in {T}")
    N = T.N
    edges = {(a[0], a[1]) for a in T} | {(v, v + 1) for v in range(1, N)} | {(1, N)}
    i, k = t[0], t[1]
    apex = [v for v in range(1, N + 1) if v not in (i, k)
            and tuple(sorted((i, v))) in edges and tuple(sorted((v, k))) in edges]
    if len(apex) != 2:
        raise am.ArcModelError(f"{t} does not bound two triangles of {T}")
    t_star = am.arc(apex[0], apex[1], N)
    y_tri, x_tri = am.triangles_of_pair(t, t_star)
    rest = set(T.arcs) - {t}
    for tri in (y_tri, x_tri):
        if any(a not in rest for a in tri.B):
            raise IdentityViolation(f"exchange middle {tri.B} leaves add(T minus {t})", (T, t))
        if tri.is_split:
            raise IdentityViolation(f"exchange triangle at {t} is split", (T, t))
    return MutationData(t, t_star, y_tri, x_tri)


@dataclass(frozen=True)
class NSubgroup:
    """``N_X``: generated by ``[X] - [Y]`` over exchange pairs at ``t`` in ``T \\ X``."""

    T: Triangulation
    X: FrozenSet[Arc]
    generators: Tuple[K0Element, ...]

    def contains(self, v: K0Element) -> bool:
        return member(list(self.generators), v, self.T.labels)


def _check_X(T: Triangulation, X: Iterable[Arc]) -> FrozenSet[Arc]:
    X = frozenset(X)
    extra = sorted(X - set(T.arcs))
    if extra:
        raise am.ArcModelError(f"X is not contained in T: {extra}")
    return X


def n_subgroup(T: Triangulation, X: Iterable[Arc]) -> NSubgroup:
    X = _check_X(T, X)
    gens = []
    for t in T:
        if t in X:
            continue
        m = mutate(T, t)
        gens.append(m.X.k0() - m.Y.k0())
    return NSubgroup(T, X, tuple(gens))


def theta_on_simple(T: Triangulation, t: Arc) -> K0Element:
    """``θ([S̄_t]) = [Y] - [X]`` from the exchange triangles at ``t``."""
    m = mutate(T, t)
    return m.Y.k0() - m.X.k0()


def theta_hom(T: Triangulation) -> GroupHom:
    """``θ : K0(fl T) -> K0^sp(T)`` on the simple modules."""
    return GroupHom(_k0_fl(T.arcs), _k0sp_T(T),
                    tuple(theta_on_simple(T, t) for t in T), name="theta")


def index_error_sides(T: Triangulation, tri: TriangleData) -> Tuple[K0Element, K0Element]:
    """Both sides of ``ind(C) - ind(B) + ind(A) = θ([Im F_T(δ)])``."""
    lhs = index(T, tri.C) - index(T, tri.B) + index(T, tri.A)
    rhs = theta_hom(T)(tri.image_dims(T.arcs))
    return lhs, rhs


# ---------------------------------------------------------------------------
# G_X and the bundle of maps


def g_iso(T: Triangulation, X: Iterable[Arc], k0X: Optional[RelativeK0] = None,
          saturation: int = DEFAULT_SATURATION) -> GroupHom:
    """``G_X : K0^sp(T)/N_X -> K0(S, E_X)``, ``[t] + N_X -> [t]``.

    Well-definedness and bijectivity are both checked.
    """
    X = _check_X(T, X)
    if k0X is None:
        k0X = relative(T.n, [x.label for x in X], saturation)
    quot = present(T.labels, n_subgroup(T, X).generators)
    try:
        G = induced_hom(quot, k0X.group,
                        [K0Element.basis_vector(t.label) for t in T], name="G_X")
    except IllDefinedHomError as exc:
        raise IdentityViolation(f"G_X is not well defined for T={T}, X={sorted(X)}: {exc}",
                               (T, X)) from None
    if not is_isomorphism(G):
        raise IdentityViolation(
            f"G_X is not an isomorphism for T={T}, X={sorted(X)}: "
            f"{quot.describe()} vs {k0X.group.describe()}", (T, X))
    return G


@dataclass(frozen=True, eq=False)
class HomBundle:
    """Every group and map of the diagram for one pair ``(T, X)``."""

    T: Triangulation
    X: FrozenSet[Arc]
    k0_T: RelativeK0
    k0_X: RelativeK0
    k0_0: RelativeK0
    N_X: NSubgroup
    index_hom: GroupHom
    index_desc: GroupHom
    L: GroupHom
    theta: GroupHom
    kappa: GroupHom
    phibar: GroupHom
    psibar: GroupHom
    psi: GroupHom
    Q_T: GroupHom
    Q_X: GroupHom
    Q_0: GroupHom
    Q_tilde: GroupHom
    Q_X0: GroupHom
    Q_NX: GroupHom
    G_X: GroupHom

    @property
    def X_arcs(self) -> List[Arc]:
        return sorted(self.X)

    def faces(self) -> Dict[str, List[str]]:
        """For each face, the generators on which it fails to commute."""
        out = {
            "Q_tilde*Q_T = Q_X": self.Q_tilde.compose(self.Q_T).agrees_with(self.Q_X),
            "Q_X0*Q_X = Q_0": self.Q_X0.compose(self.Q_X).agrees_with(self.Q_0),
            "ind*Q_T = ind": self.index_desc.compose(self.Q_T).agrees_with(self.index_hom),
            "ind*L = id": self.index_desc.compose(self.L).agrees_with(_identity(self.L.source)),
            "L*ind = id": self.L.compose(self.index_desc).agrees_with(
                _identity(self.k0_T.group)),
            "G_X*Q_NX = Q_tilde*L": self.G_X.compose(self.Q_NX).agrees_with(
                self.Q_tilde.compose(self.L)),
            "psi*kappa = Q_tilde*psibar": self.psi.compose(self.kappa).agrees_with(
                self.Q_tilde.compose(self.psibar)),
            "theta = phibar": self.theta.agrees_with(self.phibar),
        }
        return out

    def failures(self) -> List[str]:
        return [f"{name}: fails on {bad}" for name, bad in self.faces().items() if bad]

    def module_class(self, C) -> K0Element:
        """``[F_X(C)]`` over the simple ``X``-modules."""
        return am.module_of(C, self.X).dim_class()


def bundle(T: Triangulation, X: Iterable[Arc], saturation: int = DEFAULT_SATURATION,
           check_stability: bool = True) -> HomBundle:
    """Build and check every map of the diagram for ``(T, X)``."""
    X = _check_X(T, X)
    n = T.n
    C = category(n)
    sp = k0_split(C)
    k0T = relative(n, T.labels, saturation, check_stability)
    k0X = relative(n, [x.label for x in X], saturation, check_stability)
    k00 = relative(n, [], saturation, check_stability)
    arc_gens = [K0Element.basis_vector(a.label) for a in am.arcs(n)]
    Q_T = induced_hom(sp, k0T.group, arc_gens, name="Q_T")
    Q_X = induced_hom(sp, k0X.group, arc_gens, name="Q_X")
    Q_0 = induced_hom(sp, k00.group, arc_gens, name="Q_0")
    try:
        Q_tilde = induced_hom(k0T.group, k0X.group, arc_gens, name="Q_tilde")
        Q_X0 = induced_hom(k0X.group, k00.group, arc_gens, name="Q_X0")
    except IllDefinedHomError as exc:
        raise IdentityViolation(f"relation subgroups are not nested: {exc}", (T, X)) from None
    ind = index_hom(T)
    try:
        ind_desc = descended_index(T, k0T)
    except IllDefinedHomError as exc:
        raise IdentityViolation(f"index does not descend for T={T}: {exc}", (T,)) from None
    L = L_hom(T, k0T)
    NX = n_subgroup(T, X)
    kT = _k0sp_T(T)
    quot = present(T.labels, NX.generators)
    Q_NX = induced_hom(kT, quot, [K0Element.basis_vector(t.label) for t in T], name="Q_NX")
    G = g_iso(T, X, k0X)
    theta = theta_hom(T)
    flT = _k0_fl(T.arcs)
    flX = _k0_fl(sorted(X))
    kappa = GroupHom(flT, flX, tuple(
        K0Element.basis_vector(simple_label(t)) if t in X else K0Element() for t in T),
        name="kappa")
    phibar = GroupHom(flT, kT, tuple(
        mutate(T, t).Y.k0() - mutate(T, t).X.k0() for t in T), name="phibar")
    psibar = L.compose(phibar)
    psibar = GroupHom(psibar.source, psibar.target, psibar.gen_images, name="psibar")
    psi = GroupHom(flX, k0X.group, tuple(Q_tilde(psibar.image_of(simple_label(x)))
                                         for x in sorted(X)), name="psi")
    b = HomBundle(T, X, k0T, k0X, k00, NX, ind, ind_desc, L, theta, kappa, phibar, psibar,
                  psi, Q_T, Q_X, Q_0, Q_tilde, Q_X0, Q_NX, G)
    return b


def psi_identity_sides(b: HomBundle, C) -> Tuple[K0Element, K0Element]:
    """Both sides of ``ψ([F_X(C)]) = Q_X([C]) + Q_X([Σ^{-1} C])``."""
    C = ObjClass.of(C)
    lhs = b.psi(b.module_class(C))
    rhs = b.Q_X(C.k0()) + b.Q_X(C.suspend(-1).k0())
    return lhs, rhs
