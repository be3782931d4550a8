import itertools

import pytest
from hypothesis import given, settings, strategies as st

import mesh_oracle
from exangulate import arcmodel as am
from exangulate.arcmodel import Arc, ObjClass, Triangulation


def A(i, j, N):
    return Arc(i, j, N)


def pentagon_fan():
    return Triangulation([A(1, 3, 5), A(1, 4, 5)], 5)


@st.composite
def arc_pairs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    arcs = am.arcs(n)
    return draw(st.sampled_from(arcs)), draw(st.sampled_from(arcs))


# ---------------------------------------------------------------------------
# Arcs, crossing, suspension


def test_arc_counts():
    for n in range(1, 8):
        N = n + 3
        assert len(am.arcs(n)) == N * (N - 3) // 2


def test_arc_validation_and_parsing():
    assert am.parse_arc("2-4", 5) == A(2, 4, 5)
    assert A(2, 4, 5).label == "2-4"
    for bad in [(1, 2), (1, 5), (0, 3), (3, 3)]:
        with pytest.raises(am.ArcModelError):
            A(bad[0], bad[1], 5)
    with pytest.raises(am.ArcModelError):
        am.parse_arc("2/4", 5)


def test_cross_examples():
    assert am.cross(A(1, 3, 5), A(2, 4, 5))
    assert not am.cross(A(1, 3, 5), A(1, 4, 5))
    assert not am.cross(A(1, 3, 5), A(1, 3, 5))
    assert am.cross(A(2, 5, 6), A(1, 3, 6))


def test_suspend_rotates_backwards():
    assert am.suspend(A(2, 4, 5)) == A(1, 3, 5)
    assert am.suspend(A(1, 3, 5)) == A(2, 5, 5)
    assert am.suspend(A(1, 3, 5), -1) == A(2, 4, 5)
    assert am.suspend(A(1, 3, 5), 5) == A(1, 3, 5)


def test_hom_examples():
    assert am.hom_dim(A(1, 3, 5), A(1, 3, 5)) == 1
    assert am.hom_dim(A(1, 3, 5), A(1, 4, 5)) == 1
    assert am.hom_dim(A(1, 4, 5), A(1, 3, 5)) == 0
    assert am.hom_dim(A(1, 4, 5), A(2, 4, 5)) == 1
    assert am.hom_dim(A(1, 3, 5), A(2, 4, 5)) == 0


@settings(max_examples=300, deadline=None)
@given(arc_pairs())
def test_two_calabi_yau(pair):
    a, b = pair
    assert am.hom_dim(a, b) == am.hom_dim(b, am.suspend(a, 2))


@settings(max_examples=300, deadline=None)
@given(arc_pairs())
def test_extensions_are_crossings(pair):
    a, b = pair
    assert am.hom_dim(a, am.suspend(b, 1)) == int(am.cross(a, b))
    assert am.hom_dim(a, b) <= 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_hom_matches_mesh_category(n):
    N = n + 3
    for a in am.arcs(n):
        for b in am.arcs(n):
            assert am.hom_dim(a, b) == mesh_oracle.hom_dim((a.i, a.j), (b.i, b.j), N), (a, b)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_composition_matches_mesh_category(n):
    N = n + 3
    arcs = am.arcs(n)
    for a, b, c in itertools.product(arcs, repeat=3):
        if am.hom_dim(a, b) and am.hom_dim(b, c):
            expected = mesh_oracle.compose_nonzero((a.i, a.j), (b.i, b.j), (c.i, c.j), N)
            assert am.compose_nonzero(a, b, c) == expected, (a, b, c)


def test_composition_examples():
    # identities compose nontrivially
    a = A(1, 3, 5)
    assert am.compose_nonzero(a, a, A(1, 4, 5))
    assert am.compose_nonzero(A(1, 4, 6), A(2, 4, 6), A(2, 5, 6))
    assert not am.compose_nonzero(A(1, 3, 6), A(1, 4, 6), A(2, 4, 6))
    # a map through (3,7) that is radical although Hom(a, a) is nonzero
    a, b = A(1, 5, 8), A(3, 7, 8)
    assert am.hom_dim(a, b) and am.hom_dim(b, a)
    assert not am.compose_nonzero(a, b, a)
    with pytest.raises(am.ArcModelError):
        am.compose_nonzero(A(1, 4, 5), A(1, 3, 5), A(1, 3, 5))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_compose_with_identity(n):
    for a in am.arcs(n):
        for b in am.arcs(n):
            if am.hom_dim(a, b):
                assert am.compose_nonzero(a, a, b)
                assert am.compose_nonzero(a, b, b)


# ---------------------------------------------------------------------------
# Triangulations


def _brute_force_triangulations(n):
    arcs = am.arcs(n)
    out = set()
    for sub in itertools.combinations(arcs, n):
        if not any(am.cross(x, y) for x, y in itertools.combinations(sub, 2)):
            out.add(frozenset(sub))
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_triangulations_match_brute_force(n):
    found = {frozenset(T.arcs) for T in am.enumerate_triangulations(n)}
    assert found == _brute_force_triangulations(n)


def test_catalan_counts():
    assert [len(am.enumerate_triangulations(n)) for n in range(1, 7)] == [2, 5, 14, 42, 132, 429]


def test_triangulation_validation():
    with pytest.raises(am.ArcModelError):
        Triangulation([A(1, 3, 5), A(2, 4, 5)], 5)
    with pytest.raises(am.ArcModelError):
        Triangulation([A(1, 3, 5)], 5)
    assert pentagon_fan().triangles() == [(1, 2, 3), (1, 3, 4), (1, 4, 5)]


def test_bound_is_enforced():
    with pytest.raises(am.BoundExceededError):
        am.enumerate_triangulations(am.max_n() + 1)


# ---------------------------------------------------------------------------
# Triangles


def test_ptolemy_triangles():
    a, b = A(1, 3, 5), A(2, 4, 5)
    t1, t2 = am.triangles_of_pair(a, b)
    assert (t1.A, t1.B, t1.C) == (ObjClass.of(a), ObjClass.of(A(1, 4, 5)), ObjClass.of(b))
    # both other diagonals of the second pair are sides, so the middle term is zero
    assert (t2.A, t2.B, t2.C) == (ObjClass.of(b), ObjClass(), ObjClass.of(a))
    assert b.label in {w.label for w in t1.delta_vanishing_set}
    assert a not in t1.delta_vanishing_set


def test_hexagon_ptolemy_middle_has_two_summands():
    t1, _ = am.triangles_of_pair(A(1, 4, 6), A(2, 5, 6))
    assert t1.B == ObjClass((A(1, 5, 6), A(2, 4, 6)))


def test_split_triangle():
    t = am.split_triangle(A(1, 3, 5), A(2, 4, 5))
    assert t.is_split and not t.delta_vanishing_set
    assert t.B == ObjClass((A(1, 3, 5), A(2, 4, 5)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generic_triangle_reproduces_ptolemy(n):
    for a, b in itertools.combinations(am.arcs(n), 2):
        if am.cross(a, b):
            for t, (x, y) in zip(am.triangles_of_pair(a, b), [(a, b), (b, a)]):
                g = am.generic_triangle(ObjClass.of(x), ObjClass.of(y), [(0, 0)])
                assert g.B == t.B
                assert g.delta_vanishing_set == t.delta_vanishing_set


@pytest.mark.parametrize("n", [2, 3, 4])
def test_triangle_hom_dimensions_are_subadditive(n):
    tris, _ = am.generated_triangles(n, 2)
    for t in tris:
        for z in am.arcs(n):
            hB = am.hom_obj(z, t.B)
            assert hB <= am.hom_obj(z, t.A) + am.hom_obj(z, t.C)
            # Hom(z, -) is exact in the middle so dimensions cannot drop by more
            # than the connecting ranks
            assert hB >= am.hom_obj(z, t.A) + am.hom_obj(z, t.C) - 2 * len(t.C.summands)


def test_generated_triangle_counts_grow():
    one, _ = am.generated_triangles(3, 1)
    two, _ = am.generated_triangles(3, 2)
    assert len(two) > len(one)
    assert all(t in two for t in one)


def test_solve_object_examples():
    n = 2
    target = ObjClass((A(1, 3, 5), A(2, 4, 5)))
    h = [am.hom_obj(z, target) for z in am.arcs(n)]
    assert am.solve_object(n, h) == target
    with pytest.raises(am.NoObjectError):
        am.solve_object(n, [-1] + h[1:])


# ---------------------------------------------------------------------------
# Index resolutions


def test_index_resolution_examples():
    T = pentagon_fan()
    assert am.index_resolution(T, A(1, 3, 5)) == (ObjClass(), ObjClass.of(A(1, 3, 5)))
    assert am.index_resolution(T, A(2, 4, 5)) == (ObjClass.of(A(1, 3, 5)),
                                                  ObjClass.of(A(1, 4, 5)))
    assert am.index_resolution(T, A(2, 5, 5)) == (ObjClass.of(A(1, 3, 5)), ObjClass())
    assert am.index_resolution(T, A(3, 5, 5)) == (ObjClass.of(A(1, 4, 5)), ObjClass())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_index_resolution_of_t_and_its_suspension(n):
    for T in am.enumerate_triangulations(n):
        for t in T:
            assert am.index_resolution(T, t) == (ObjClass(), ObjClass.of(t))
            assert am.index_resolution(T, am.suspend(t, 1)) == (ObjClass.of(t), ObjClass())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_index_resolution_terms_lie_in_T(n):
    for T in am.enumerate_triangulations(n):
        for c in am.arcs(n):
            T0, T1 = am.index_resolution(T, c)
            assert set(T0.summands) <= set(T) and set(T1.summands) <= set(T)
            # a minimal resolution never repeats a summand on both sides
            assert not set(T0.summands) & set(T1.summands)


# ---------------------------------------------------------------------------
# Modules


def test_module_examples():
    T = pentagon_fan()
    M = am.module_of(A(1, 4, 5), T.arcs)
    assert M.is_thin() and M.support() == [A(1, 3, 5), A(1, 4, 5)]
    assert M.actions == frozenset({(A(1, 3, 5), A(1, 4, 5))})
    classes = dict((repr(e), c) for e, c in am.submodule_classes(M))
    assert classes == {"0": 1, "[S[1-3]]": 1, "[S[1-3]] + [S[1-4]]": 1}


def test_module_rejects_crossing_base():
    with pytest.raises(am.ArcModelError):
        am.module_of(A(1, 3, 5), [A(1, 3, 5), A(2, 4, 5)])


@pytest.mark.parametrize("n", [2, 3])
def test_submodules_against_bitmask_oracle(n):
    """Closure computed from mesh-category composites."""
    N = n + 3
    objs = [ObjClass.of(a) for a in am.arcs(n)]
    objs += [ObjClass(p) for p in itertools.combinations(am.arcs(n), 2)]
    for T in am.enumerate_triangulations(n):
        for S in objs:
            M = am.module_of(S, T.arcs)
            if not M.is_thin():
                continue
            sup = M.support()
            acts = set()
            for x, y in itertools.permutations(sup, 2):
                if not am.hom_dim(x, y):
                    continue
                if not mesh_oracle.hom_dim((x.i, x.j), (y.i, y.j), N):
                    continue
                for s in set(S.summands):
                    if (am.hom_dim(y, s) and am.hom_dim(x, s) and mesh_oracle.compose_nonzero(
                            (x.i, x.j), (y.i, y.j), (s.i, s.j), N)):
                        acts.add((x, y))
            count = 0
            for mask in range(1 << len(sup)):
                chosen = {sup[k] for k in range(len(sup)) if mask >> k & 1}
                if all(x in chosen for x, y in acts if y in chosen):
                    count += 1
            assert count == len(am.closed_subsets(M)), (T, S)
