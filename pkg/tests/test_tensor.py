import random
from fractions import Fraction

import pytest

from spdelta.linalg import Matrix, Subspace, rank_of_rows
from spdelta.tensor import (
    DependentBasis,
    Slot,
    delta_matrix,
    dderiv_vec,
    directional_derivative,
    power_subspace,
    restriction_matrix,
    slot_dim,
    subspace_product,
    sym_dim,
    sym_indices,
    sym_multiply,
    wedge_indices,
)


def test_slot_dims():
    assert slot_dim(Slot(2, 1, 2, 0)) == 3
    assert slot_dim(Slot(3, 1, 2, 0)) == 6
    assert slot_dim(Slot(2, 2, 1, 1)) == 8
    assert slot_dim(Slot(2, 1, -1, 0)) == 0


def test_colex_enumeration():
    assert sym_indices(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert sym_indices(3, 2) == ((2, 0, 0), (1, 1, 0), (0, 2, 0),
                                 (1, 0, 1), (0, 1, 1), (0, 0, 2))
    assert wedge_indices(3, 2) == ((0, 1), (0, 2), (1, 2))


def test_indexing_round_trip():
    s = Slot(3, 2, 2, 1)
    for flat in range(s.dim):
        mu, alpha, I = s.unindex(flat)
        assert s.index(mu, alpha, I) == flat


def test_delta_degree_one_is_permutation_like():
    s = Slot(2, 1, 1, 0)
    d = delta_matrix(s)
    # x maps to 1 (x) dx, y to 1 (x) dy: two unit entries
    assert sorted(sum(1 for x in row if x != 0) for row in d.rows) == [1, 1]
    assert all(x in (0, 1) for row in d.rows for x in row)


def test_delta_degree_two_expansion():
    s = Slot(2, 1, 2, 0)
    t = s.below(dj=1)
    d = delta_matrix(s)

    def column(alpha):
        return [d.rows[r][s.index(0, alpha)] for r in range(t.dim)]

    dx, dy = (0,), (1,)
    expected_x2 = [0] * t.dim
    expected_x2[t.index(0, (1, 0), dx)] = 2
    assert column((2, 0)) == expected_x2
    expected_xy = [0] * t.dim
    expected_xy[t.index(0, (0, 1), dx)] = 1
    expected_xy[t.index(0, (1, 0), dy)] = 1
    assert column((1, 1)) == expected_xy
    expected_y2 = [0] * t.dim
    expected_y2[t.index(0, (0, 1), dy)] = 2
    assert column((0, 2)) == expected_y2


def test_delta_squared_is_zero():
    s = Slot(3, 1, 3, 1)
    assert delta_matrix(s.below(dj=1)).matmul(delta_matrix(s)).is_zero()


def test_delta_squared_zero_over_small_ranges():
    for n in (1, 2, 3, 4):
        for nu in (1, 2):
            for k in range(1, 5):
                for j in range(0, n):
                    s = Slot(n, nu, k, j)
                    if s.dim == 0:
                        continue
                    assert delta_matrix(s.below(dj=1)).matmul(
                        delta_matrix(s)).is_zero(), (n, nu, k, j)


def test_directional_derivative_examples():
    s = Slot(2, 1, 2, 0)
    x2 = [0] * 3
    x2[s.index(0, (2, 0))] = 1
    assert directional_derivative([1, 0], s).apply(x2) == [2, 0]
    assert directional_derivative([0, 1], s).apply(x2) == [0, 0]


def test_directional_derivatives_commute():
    rng = random.Random(11)
    s = Slot(2, 1, 3, 0)
    for _ in range(20):
        v = [Fraction(rng.randint(-9, 9)) for _ in range(2)]
        w = [Fraction(rng.randint(-9, 9)) for _ in range(2)]
        for flat in range(s.dim):
            unit = [0] * s.dim
            unit[flat] = 1
            once = dderiv_vec(dderiv_vec(unit, v, s), w, s.below())
            other = dderiv_vec(dderiv_vec(unit, w, s), v, s.below())
            assert once == other


def test_sym_multiply_examples():
    x, y = [1, 0], [0, 1]
    assert sym_multiply(x, y, 2, 1, 1) == [0, 1, 0]
    assert sym_multiply([1, 1], [1, -1], 2, 1, 1) == [1, 0, -1]
    # plain polynomial convention: x * x has coefficient 1 on x^2
    assert sym_multiply(x, x, 2, 1, 1) == [1, 0, 0]


def test_restriction_to_coordinate_line():
    s = Slot(2, 1, 2, 0)
    m = restriction_matrix([[1, 0]], s)
    assert [m.rows[0][c] for c in range(3)] == [1, 0, 0]


def test_restriction_to_diagonal_line():
    s = Slot(2, 1, 2, 0)
    m = restriction_matrix([[1, 1]], s)
    assert [m.rows[0][c] for c in range(3)] == [1, 1, 1]


def test_restriction_identity_for_standard_basis():
    s = Slot(3, 2, 2, 1)
    m = restriction_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]], s)
    assert m == Matrix.identity(s.dim)


def test_restriction_rejects_dependent_basis():
    with pytest.raises(DependentBasis):
        restriction_matrix([[1, 0], [2, 0]], Slot(2, 1, 1, 0))


def test_rotational_symbol_restricts_to_a_line():
    # the span of x (x) e2 - y (x) e1 restricted to the second axis
    s = Slot(2, 2, 1, 0)
    v = [0] * s.dim
    v[s.index(0, (1, 0))] = -0 or 0
    v[s.index(1, (1, 0))] = 1   # x (x) e2
    v[s.index(0, (0, 1))] = -1  # -y (x) e1
    m = restriction_matrix([[0, 1]], s)
    out = m.apply(v)
    target = Slot(1, 2, 1, 0)
    expected = [0] * target.dim
    expected[target.index(0, (1,))] = -1  # -t (x) e1
    assert out == expected


def test_restriction_naturality_square():
    # restriction o delta = delta_W o restriction on full slots
    rng = random.Random(13)
    w = [[1, 0, 2], [0, 1, -1]]
    for k, j in ((2, 0), (3, 1), (2, 1)):
        s = Slot(3, 2, k, j)
        target = s.below(dj=1)
        r_src = restriction_matrix(w, s)
        r_tgt = restriction_matrix(w, target)
        d_big = delta_matrix(s)
        d_small = delta_matrix(Slot(2, 2, k, j))
        for _ in range(5):
            vec = [Fraction(rng.randint(-3, 3)) for _ in range(s.dim)]
            assert r_tgt.apply(d_big.apply(vec)) == d_small.apply(r_src.apply(vec))


def test_delta_rank_invariant_under_monomial_rescaling():
    s = Slot(3, 1, 3, 0)
    d = delta_matrix(s)
    rng = random.Random(17)
    scaled = [list(row) for row in d.rows]
    for c in range(d.ncols):
        factor = Fraction(rng.randint(1, 7))
        for r in range(d.nrows):
            scaled[r][c] *= factor
    for r in range(d.nrows):
        factor = Fraction(rng.randint(1, 7))
        scaled[r] = [factor * x for x in scaled[r]]
    assert rank_of_rows(scaled, d.ncols) == d.rank()


def test_subspace_product_examples():
    # V* = <dx> times the full linear slot: the span of x^2, xy
    prod = subspace_product(Subspace.span([[1, 0]], 2), Subspace.full(2),
                            Slot(2, 1, 1, 0))
    assert prod == Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    # zero V* gives the zero space
    prod = subspace_product(Subspace.zero(2), Subspace.full(2), Slot(2, 1, 1, 0))
    assert prod.is_zero()
    # full V* times a full slot is everything
    prod = subspace_product(Subspace.full(2), Subspace.full(2), Slot(2, 1, 1, 0))
    assert prod.is_full()


def test_power_subspace_dims():
    line = Subspace.span([[1, 1]], 2)
    assert power_subspace(line, 2).basis == ((1, 2, 1),)
    plane = Subspace.full(2)
    assert power_subspace(plane, 3).dim == sym_dim(2, 3)
