import random
from fractions import Fraction

import pytest

from conftest import random_subspace, unit_functional
from spdelta.linalg import Matrix, Subspace, solve
from spdelta.system import (
    CapExceeded,
    Precondition,
    check_axioms,
    derived_system,
    descend,
    descend_fixpoint,
    descended_level,
    equivalence_reduce,
    free_system,
    from_functionals,
    from_levels,
    order_profile,
    prolong,
    prolong_iterated,
    restrict_system,
    transform_system,
)
from spdelta.tensor import Slot, comultiplication_matrix


def prolong_by_comultiplication(h: Subspace, n: int, nu: int, k: int, l: int
                                ) -> Subspace:
    """Independent oracle: h^(l) = S^l T* (x) h meet S^(k+l) T* (x) N, realised
    through the binomial comultiplication embedding and pulled back."""
    cm = comultiplication_matrix(n, l, k, nu)
    inner = Slot(n, nu, k).dim
    outer = cm.nrows // inner
    embedded = Subspace.span([cm.apply(v) for v in
                              (tuple(1 if c == i else 0 for c in range(cm.ncols))
                               for i in range(cm.ncols))], cm.nrows)
    tensor_rows = []
    for b in range(outer):
        for row in h.basis:
            vec = [0] * cm.nrows
            for i, val in enumerate(row):
                vec[b * inner + i] = val
            tensor_rows.append(vec)
    meet = embedded.intersect(Subspace.span(tensor_rows, cm.nrows))
    solver = Matrix.from_rows([[cm.rows[r][c] for c in range(cm.ncols)]
                               for r in range(cm.nrows)], cm.ncols)
    pulled = []
    for row in meet.basis:
        x = solve(solver, list(row))
        assert x is not None
        pulled.append(x)
    return Subspace.span(pulled, cm.ncols)


def test_prolong_full_and_zero():
    assert prolong(Subspace.full(Slot(2, 1, 2).dim), 2, 1, 2).is_full()
    assert prolong(Subspace.zero(Slot(2, 1, 2).dim), 2, 1, 2).is_zero()


def test_prolong_of_mixed_monomial_vanishes():
    xy = Subspace.span([[0, 1, 0]], 3)  # coordinates x^2, xy, y^2
    assert prolong(xy, 2, 1, 2).is_zero()


def test_prolong_iterated_identity_and_composition():
    rng = random.Random(23)
    for _ in range(20):
        h = random_subspace(rng, Slot(2, 1, 2).dim, rng.randint(0, 3))
        assert prolong_iterated(h, 2, 1, 2, 0) == h
        once_twice = prolong(prolong(h, 2, 1, 2), 2, 1, 3)
        assert once_twice == prolong_iterated(h, 2, 1, 2, 2)


def test_prolongation_characterisations_agree():
    rng = random.Random(29)
    for _ in range(25):
        n = rng.randint(2, 3)
        nu = rng.randint(1, 2)
        k = rng.randint(1, 2)
        h = random_subspace(rng, Slot(n, nu, k).dim, rng.randint(0, 3))
        for l in (1, 2):
            assert prolong_iterated(h, n, nu, k, l) == \
                prolong_by_comultiplication(h, n, nu, k, l), (n, nu, k, l)


def test_free_system_levels(ex1):
    free = free_system(2, 2, 3)
    assert all(free.level(k).is_full() for k in range(4))
    assert order_profile(free).orders == ()
    assert order_profile(free).codim == 0


def test_two_unknown_example_dims(ex1):
    assert ex1.dims()[:5] == [2, 4, 4, 3, 3]
    prof = order_profile(ex1)
    assert prof.orders == (2, 3)
    assert prof.multiplicity == {2: 2, 3: 1}
    assert prof.codim == 3
    assert prof.r_min == 2 and prof.r_max == 3
    assert prof.certified_within_cap


def test_rotational_system_dims(so2):
    assert so2.dims()[:4] == [2, 1, 0, 0]
    prof = order_profile(so2)
    assert prof.orders == (1,)
    assert prof.multiplicity == {1: 3}


def test_axioms_hold_after_constructors(ex1, so2, uxy):
    assert check_axioms(ex1)
    assert check_axioms(so2)
    assert check_axioms(restrict_system(so2, [[0, 1]]))
    assert check_axioms(equivalence_reduce(uxy, 2))
    assert check_axioms(descend(uxy))


def test_cap_below_equation_order_is_an_error():
    s = Slot(2, 1, 3)
    with pytest.raises(CapExceeded):
        from_functionals(2, 1, [(3, unit_functional(s, 0, (1, 2)))], 2)


def test_derived_system_levels(ex1):
    d0 = derived_system(ex1, 0)
    assert all(d0.level(k).is_full() for k in range(d0.cap + 1))
    d2 = derived_system(ex1, 2)
    assert d2.level(2) == ex1.level(2)
    assert d2.level(3).dim == 4      # strictly larger than the full system's 3
    assert ex1.level(3).dim == 3
    d9 = derived_system(ex1, 4)      # beyond r_max: agrees with ex1 from 4 on
    for k in range(4, ex1.cap + 1):
        assert d9.level(k) == ex1.level(k)


def test_restrict_to_full_basis_is_identity(ex1):
    same = restrict_system(ex1, [[1, 0], [0, 1]])
    for k in range(ex1.cap + 1):
        assert same.level(k) == ex1.level(k)


def test_rotational_restriction_levels(so2):
    restricted = restrict_system(so2, [[0, 1]])
    assert restricted.dims()[:3] == [2, 1, 0]
    prof = order_profile(restricted)
    assert prof.orders == (1, 2)
    assert prof.multiplicity == {1: 1, 2: 1}
    # the restricted level 2 is strictly smaller than the prolongation of
    # level 1, which is why restriction must store images, not re-prolong
    assert restricted.level(2).is_zero()
    from spdelta.system import prolong as _prolong
    assert _prolong(restricted.level(1), 1, 2, 1).dim == 1


def test_restriction_codims_of_complete_intersection(cint3):
    restricted = restrict_system(cint3, [[1, 0, 1], [0, 1, 3]])
    from math import comb
    for i in range(3):
        expected_codim = comb(3 + i, i + 2) - comb(3, i + 2)
        assert Slot(2, 1, 2 + i).dim - restricted.level(2 + i).dim == expected_codim


def test_transform_requires_full_basis(ex1):
    with pytest.raises(ValueError):
        transform_system(ex1, [[1, 0]])


def test_equivalence_reduction_matches_first_order_symbol(uxy):
    ghat = equivalence_reduce(uxy, 2)
    s = Slot(2, 2, 1)
    expected = from_functionals(2, 2, [
        (1, unit_functional(s, 0, (0, 1))),   # y-derivative of the first new unknown
        (1, unit_functional(s, 1, (1, 0))),   # x-derivative of the second
    ], ghat.cap)
    for k in range(ghat.cap + 1):
        assert ghat.level(k) == expected.level(k)


def test_equivalence_reduction_of_free_system():
    # Reducing the unconstrained system still produces the cross-derivative
    # compatibility relations on the new unknowns; for n = 2, k = 2 the
    # reduced symbol is exactly that of p_y - q_x = 0.
    free = free_system(2, 1, 5)
    ghat = equivalence_reduce(free, 2)
    assert ghat.nu == Slot(2, 1, 1).dim
    s = Slot(2, 2, 1)
    row = [0] * s.dim
    row[s.index(0, (0, 1))] = 1
    row[s.index(1, (1, 0))] = -1
    compat = from_functionals(2, 2, [(1, row)], ghat.cap)
    for k in range(ghat.cap + 1):
        assert ghat.level(k) == compat.level(k)
    # level dims follow the symmetric powers: the reduction is injective
    assert ghat.dims() == [Slot(2, 1, d + 1).dim for d in range(ghat.cap + 1)]


def test_equivalence_reduction_commutes_with_prolongation(uxy):
    from spdelta.system import er_matrix, prolong as _prolong
    m3 = er_matrix(2, 1, 2, 3)
    reduced_of_prolonged = Subspace.span(
        [m3.apply(list(b)) for b in prolong(uxy.level(2), 2, 1, 2).basis],
        m3.nrows)
    m2 = er_matrix(2, 1, 2, 2)
    reduced = Subspace.span([m2.apply(list(b)) for b in uxy.level(2).basis],
                            m2.nrows)
    prolonged_of_reduced = _prolong(reduced, 2, uxy.nu * 2, 1)
    assert reduced_of_prolonged == prolonged_of_reduced


def test_equivalence_reduction_commutation_on_random_generators():
    rng = random.Random(31)
    from spdelta.system import er_matrix
    for _ in range(15):
        n = rng.randint(2, 3)
        k = rng.randint(2, 3)
        l = rng.randint(k, 4)
        h = random_subspace(rng, Slot(n, 1, l).dim, rng.randint(1, 2))
        m_up = er_matrix(n, 1, k, l + 1)
        lhs = Subspace.span([m_up.apply(list(b))
                             for b in prolong(h, n, 1, l).basis], m_up.nrows)
        m = er_matrix(n, 1, k, l)
        reduced = Subspace.span([m.apply(list(b)) for b in h.basis], m.nrows)
        nu_hat = Slot(n, 1, k - 1).dim
        rhs = prolong(reduced, n, nu_hat, l - k + 1)
        assert lhs == rhs, (n, k, l)


def test_equivalence_reduction_precondition(so2):
    with pytest.raises(Precondition):
        equivalence_reduce(so2, 2)   # r_min = 1 < 2


def test_descend_free_system():
    free = free_system(2, 2, 4)
    dg = descend(free)
    assert all(dg.level(k).is_full() for k in range(dg.cap + 1))


def test_descend_frobenius_strictly_smaller():
    frob = from_levels(2, 1, [Subspace.full(1), Subspace.full(2),
                              Subspace.zero(3), Subspace.zero(4)])
    dg = descend(frob)
    assert dg.level(1).is_zero() and frob.level(1).is_full()
    assert dg.level(0).is_full()


def test_descend_mixed_second_order(uxy):
    dg = descend(uxy)
    assert dg.level(1).is_full()
    assert descended_level(uxy, 2) == Subspace.full(2)


def test_descend_fixpoint_terminates(uxy, ex1):
    fp = descend_fixpoint(uxy)
    assert not fp.cap_exhausted
    fp = descend_fixpoint(ex1)
    assert fp.steps >= 1
