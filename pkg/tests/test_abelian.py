import itertools

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from exangulate.abelian import (AbelianError, GroupHom, IllDefinedHomError, IntMatrix,
                                K0Element, Lattice, induced_hom, is_injective,
                                is_isomorphism, is_surjective, left_kernel, member,
                                present, snf)

small_ints = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c),
                               min_size=r, max_size=r)))


def E(**kw):
    return K0Element({k.replace("_", "-"): v for k, v in kw.items()})


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_known_example():
    M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert snf(M).diagonal == [2, 6, 12]


def test_snf_of_zero_and_unit():
    assert snf(IntMatrix.zeros(2, 3)).diagonal == [0, 0]
    assert snf(IntMatrix.identity(3)).diagonal == [1, 1, 1]


def test_det_matches_cofactor_expansion():
    M = IntMatrix.from_rows([[2, -1, 0], [1, 3, 4], [0, 5, -2]])
    assert M.det() == sympy.Matrix(M.to_rows()).det()


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_matches_sympy(rows):
    M = IntMatrix.from_rows(rows)
    form = snf(M)
    ours = [d for d in form.diagonal if d]
    theirs = [abs(int(d)) for d in sympy_invariants(sympy.Matrix(rows), domain=sympy.ZZ) if d]
    assert ours == theirs


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_is_a_factorisation(rows):
    M = IntMatrix.from_rows(rows)
    form = snf(M)
    assert (form.U @ M @ form.V).to_rows() == form.D.to_rows()
    assert abs(form.U.det()) == 1 and abs(form.V.det()) == 1
    diag = form.diagonal
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and (b == 0 or (a != 0 and b % a == 0))


# ---------------------------------------------------------------------------
# Lattices and presentations


def test_lattice_membership():
    lat = Lattice(2, [[2, 0], [0, 3]])
    assert [4, -3] in lat
    assert [1, 0] not in lat
    assert lat.rank == 2 and not lat.is_full()
    assert Lattice(2, [[2, 1], [1, 1]]).is_full()


@settings(max_examples=100, deadline=None)
@given(matrices(3, 4))
def test_left_kernel_annihilates(rows):
    cols = len(rows[0])
    ker = left_kernel(rows, cols)
    for k in ker:
        assert any(k)
        assert all(sum(k[i] * rows[i][c] for i in range(len(rows))) == 0 for c in range(cols))
    assert len(ker) == len(rows) - sympy.Matrix(rows).rank()


def test_present_examples():
    G = present(["a", "b"], [E(a=2)])
    assert G.invariant_factors == (2,) and G.free_rank == 1
    assert G.describe() == "Z/2 + Z"
    assert present(["a"], [E(a=1)]).describe() == "trivial group"
    assert present(["a", "b"], []).describe() == "free rank 2"
    assert present(["a", "b"], [E(a=2, b=1), E(a=1, b=3)]).order() == 5


def test_present_rejects_unknown_labels():
    with pytest.raises(AbelianError):
        present(["a"], [E(b=1)])
    with pytest.raises(AbelianError):
        present(["a", "a"], [])


@settings(max_examples=60, deadline=None)
@given(matrices(4, 3), st.randoms(use_true_random=False))
def test_present_invariant_under_relation_moves(rows, rnd):
    basis = ["a", "b", "c"][:len(rows[0])]
    rels = [K0Element.from_vector(basis, r) for r in rows]
    G = present(basis, rels)
    moved = list(rels)
    rnd.shuffle(moved)
    moved = [-r if rnd.random() < 0.5 else r for r in moved]
    if len(moved) > 1:
        moved[0] = moved[0] + 3 * moved[1]
    assert present(basis, moved).canonical() == G.canonical()


def test_member_examples():
    gens = [E(a=2, b=1), E(b=2)]
    assert member(gens, E(a=4))
    assert not member(gens, E(a=1))
    assert member([], K0Element())


def test_group_equality_modulo_relations():
    G = present(["a", "b"], [E(a=1, b=-1)])
    assert G.equal(E(a=1), E(b=1))
    assert not G.is_zero(E(a=1))


# ---------------------------------------------------------------------------
# Homomorphisms


def test_z2_to_z_rejected():
    Z2 = present(["a"], [E(a=2)])
    Z = present(["b"], [])
    with pytest.raises(IllDefinedHomError):
        induced_hom(Z2, Z, [E(b=1)])
    assert is_isomorphism(induced_hom(Z2, present(["b"], [E(b=2)]), [E(b=1)]))


def test_iso_examples():
    Z6 = present(["a"], [E(a=6)])
    Z2xZ3 = present(["b", "c"], [E(b=2), E(c=3)])
    h = induced_hom(Z6, Z2xZ3, [E(b=1, c=1)])
    assert is_isomorphism(h)
    double = induced_hom(Z6, Z6, [E(a=2)])
    assert not is_injective(double) and not is_surjective(double)
    Z = present(["z"], [])
    assert is_injective(induced_hom(Z, Z, [E(z=2)]))
    assert not is_surjective(induced_hom(Z, Z, [E(z=2)]))


def test_compose_and_agreement():
    Z = present(["z"], [])
    h = GroupHom(Z, Z, (E(z=2),))
    assert h.compose(h).gen_images == (E(z=4),)
    assert h.agrees_with(GroupHom(Z, Z, (E(z=2),))) == []
    assert h.agrees_with(GroupHom(Z, Z, (E(z=3),))) == ["z"]


def _elements(orders):
    return list(itertools.product(*[range(o) for o in orders]))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(2, 4), min_size=1, max_size=3),
       st.lists(st.integers(2, 4), min_size=1, max_size=3),
       st.data())
def test_bijectivity_against_brute_force(src, tgt, data):
    """Finite cyclic products: compare with explicit element enumeration."""
    M = [[data.draw(st.integers(0, 3)) for _ in tgt] for _ in src]
    sb = [f"s{i}" for i in range(len(src))]
    tb = [f"t{j}" for j in range(len(tgt))]
    S = present(sb, [K0Element({s: o}) for s, o in zip(sb, src)])
    T = present(tb, [K0Element({t: o}) for t, o in zip(tb, tgt)])
    images = [K0Element.from_vector(tb, row) for row in M]
    well_defined = all((src[i] * M[i][j]) % tgt[j] == 0
                       for i in range(len(src)) for j in range(len(tgt)))
    if not well_defined:
        with pytest.raises(IllDefinedHomError):
            induced_hom(S, T, images)
        return
    h = induced_hom(S, T, images)
    image = set()
    for x in _elements(src):
        image.add(tuple(sum(x[i] * M[i][j] for i in range(len(src))) % tgt[j]
                        for j in range(len(tgt))))
    n_src = len(_elements(src))
    n_tgt = len(_elements(tgt))
    assert is_surjective(h) == (len(image) == n_tgt)
    assert is_injective(h) == (len(image) == n_src)
    assert S.order() == n_src and T.order() == n_tgt


def test_k0element_text():
    assert repr(E(a=1, b=-2)) == "[a] - 2*[b]"
    assert repr(K0Element()) == "0"
    assert repr(-E(a=1)) == "-[a]"
