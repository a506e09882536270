import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistalg import errors
from twistalg.groups import (
    AbelianGroup,
    GroupHom,
    abelianization,
    cyclic,
    dihedral,
    direct_product,
    dual_group,
    dual_hom,
    heisenberg,
    hom_from_matrix,
    hom_matrix,
    identity_hom,
    make_abelian,
    make_table,
    quotient,
    subgroup,
)

small_moduli = st.lists(st.integers(2, 6), min_size=0, max_size=3)


def test_make_abelian_trivial_and_klein():
    t = make_abelian([])
    assert t.order == 1
    k = make_abelian([2, 2])
    assert k.order == 4
    assert all(k.element_order(a) in (1, 2) for a in k.elements())


def test_make_abelian_mixed_radix_addition():
    g = make_abelian([2, 4])
    a, b = g.idx((1, 3)), g.idx((1, 2))
    assert g.vec(g.op(a, b)) == (0, 1)


def test_make_abelian_rejects_bad_invariant():
    with pytest.raises(errors.InvalidInvariant):
        make_abelian([2, 1])


def test_make_table_trivial_and_z3():
    assert make_table([[0]]).order == 1
    z3 = make_table([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    assert z3.order == 3 and z3.element_order(1) == 3


def test_make_table_normalizes_identity_position():
    # Z_3 written with the identity at index 2
    raw = np.array([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
    g = make_table(raw, labels=["a", "b", "e"])
    assert g.labels[0] == "e"
    assert g.element_order(1) == 3


def test_make_table_reports_associativity_witness():
    s3 = dihedral(3)  # S_3
    bad = np.array(s3.mul, dtype=np.int64).copy()
    bad[1, 2] = (bad[1, 2] + 1) % 6
    with pytest.raises(errors.NotAssociative) as exc:
        make_table(bad)
    a, b, c = exc.value.triple
    m = bad
    assert m[m[a, b], c] != m[a, m[b, c]]


def test_make_table_no_inverse():
    # commutative monoid with absorbing element, not a group
    bad = [[0, 1, 2], [1, 1, 2], [2, 2, 2]]
    with pytest.raises((errors.NoInverse, errors.NotAssociative)):
        make_table(bad)


def test_direct_product_orders_and_homs():
    z2, s3 = cyclic(2), dihedral(3)
    res = direct_product(z2, s3)
    assert res.group.order == 12
    order2 = sum(1 for a in res.group.elements() if res.group.element_order(a) == 2)
    # D_3 = S_3 has 3 involutions; Z_2 x S_3 has 3 + 1 + 3 = 7
    assert order2 == 7
    assert res.proj_left.compose(res.incl_left).images.tolist() == [0, 1]
    triv = make_abelian([])
    res2 = direct_product(triv, s3)
    assert res2.incl_right.is_injective() and res2.incl_right.is_surjective()


def test_abelianization_of_abelian_group_is_identity():
    g = make_abelian([2, 4])
    a, hom = abelianization(g)
    assert a is g and np.array_equal(hom.images, np.arange(8))


def test_abelianization_d4():
    a, hom = abelianization(dihedral(4))
    assert a.abelian.invariant_factors() == (2, 2)
    assert hom.is_surjective()
    assert len(hom.kernel()) == 2


def test_abelianization_heisenberg():
    a, hom = abelianization(heisenberg(3))
    assert a.abelian.invariant_factors() == (3, 3)
    assert hom.is_surjective()


def test_abelianization_idempotent():
    g = dihedral(4)
    a1, _ = abelianization(g)
    a2, h2 = abelianization(a1)
    assert a2.abelian.invariant_factors() == a1.abelian.invariant_factors()
    assert h2.is_injective() and h2.is_surjective()


def test_dual_group_pairings():
    t = dual_group(make_abelian([]))
    assert t.order == 1
    z6 = make_abelian([6])
    assert z6.abelian.pairing((2,), (3,)) == 0
    g = make_abelian([2, 4])
    # formula with exp = 4 and weights (2, 1)
    assert g.abelian.pairing((1, 1), (1, 2)) == (1 * 1 * 2 + 1 * 2 * 1) % 4


def test_pairing_nondegenerate():
    g = make_abelian([2, 4])
    ab = g.abelian
    for ci in range(g.order):
        chi = g.vec(ci)
        if ci and all(ab.pairing(chi, g.vec(a)) == 0 for a in g.elements()):
            raise AssertionError("degenerate pairing")


def test_quotient_examples():
    g = make_abelian([4])
    q, hom = quotient(g, [0])
    assert q.order == 4
    q2, hom2 = quotient(g, [0, 2])
    assert q2.order == 2 and hom2.is_surjective()
    d4 = dihedral(4)
    center = [a for a in d4.elements() if d4.is_central(a)]
    q3, _ = quotient(d4, center)
    a3, _ = abelianization(q3)
    assert a3.abelian.invariant_factors() == (2, 2)


def test_quotient_rejects_bad_kernels():
    d4 = dihedral(4)
    with pytest.raises(errors.NotSubgroup):
        quotient(d4, [0, 1])
    s3 = dihedral(3)
    refl = [0, 3]  # order-2 subgroup, not normal in S_3
    assert s3.is_subgroup(refl)
    with pytest.raises(errors.NotNormal):
        quotient(s3, refl)


def test_quotient_hom_kernel_exact():
    d4 = dihedral(4)
    K = d4.commutator_subgroup()
    q, hom = quotient(d4, K)
    assert set(hom.kernel()) == set(K)
    assert hom.is_surjective()


def test_dual_hom_z2_to_z4():
    z2, z4 = make_abelian([2]), make_abelian([4])
    psi = hom_from_matrix(z2, z4, [[2]])
    d = dual_hom(psi)
    assert d.source.order == 4 and d.target.order == 2
    assert d.images.tolist() == [0, 1, 0, 1]
    # pairing identity on all 8 pairs, compared inside Q/Z
    for chi in range(4):
        for a in range(2):
            lhs = z2.abelian.pairing(d.target.vec(d(chi)), z2.vec(a)) / z2.abelian.exponent
            rhs = z4.abelian.pairing(z4.vec(chi), z4.vec(psi(a))) / z4.abelian.exponent
            assert (lhs - rhs) % 1 == 0


def test_dual_hom_identity_and_zero():
    g = make_abelian([2, 4])
    ident = identity_hom(g)
    assert np.array_equal(dual_hom(ident).images, np.arange(8))
    zero = GroupHom(g, g, np.zeros(8, dtype=np.int64))
    assert not dual_hom(zero).images.any()


@settings(max_examples=30, deadline=None)
@given(small_moduli, st.data())
def test_dual_hom_double_dual(mods, data):
    a_mods = mods or [2]
    b_mods = data.draw(small_moduli) or [3]
    A, B = make_abelian(a_mods), make_abelian(b_mods)
    cols = np.zeros((len(b_mods), len(a_mods)), dtype=np.int64)
    for i, db in enumerate(b_mods):
        for j, da in enumerate(a_mods):
            # the image of a generator of order da must have order dividing da
            step = db // np.gcd(da, db)
            cols[i, j] = step * data.draw(st.integers(0, np.gcd(da, db) - 1))
    psi = hom_from_matrix(A, B, cols)
    dd = dual_hom(dual_hom(psi))
    assert np.array_equal(hom_matrix(dd), hom_matrix(psi))


def test_subgroup_relabels():
    z4 = make_abelian([4])
    s, incl = subgroup(z4, [0, 2])
    assert s.order == 2
    assert incl(1) == 2


def test_conjugacy_classes_s3():
    s3 = dihedral(3)
    sizes = sorted(len(c) for c in s3.conjugacy_classes())
    assert sizes == [1, 2, 3]


def test_invariant_factors_merging():
    assert AbelianGroup((2, 3)).invariant_factors() == (6,)
    assert AbelianGroup((4, 2, 2)).invariant_factors() == (2, 2, 4)
    assert AbelianGroup((6, 4)).invariant_factors() == (2, 12)
