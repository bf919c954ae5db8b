from fractions import Fraction

from spdelta.linalg import Subspace
from spdelta.system import equivalence_reduce
from spdelta.theorems import corollary_euler_check, verify_thm1, verify_thm2


def test_restriction_formula_for_transverse_line(uz):
    rep = verify_thm1(uz, [[0, 0, 1]])
    assert rep.hypotheses_met
    assert rep.all_match
    assert rep.restriction_involutive


def test_restriction_formula_hypotheses_reported(uz):
    # the annihilated direction is characteristic, so this V* fails
    rep = verify_thm1(uz, [[1, 0, 0]])
    assert not rep.hypotheses_met
    assert "strongly non-characteristic" in rep.failing_hypotheses[0]


def test_restriction_formula_rank_one_second_order(dim1g2):
    rep = verify_thm1(dim1g2, [[0, 1]])
    assert rep.hypotheses_met and rep.all_match
    assert rep.r_min == 2   # the boundary correction terms were exercised


def test_restriction_formula_after_order_reduction(uxy):
    ghat = equivalence_reduce(uxy, 2)
    rep = verify_thm1(ghat, [[1, 2]])
    assert rep.hypotheses_met and rep.all_match


def test_restriction_formula_counterexample_cell(so2):
    rep = verify_thm1(so2, [[1, 0]])
    assert not rep.hypotheses_met
    assert "involutive" in " ".join(rep.failing_hypotheses)
    assert (1, 1) in [(i, j) for (i, j, lhs, rhs) in rep.mismatches]


def test_free_system_formula_trivial():
    # on a free system every nonzero V* is characteristic (full levels are
    # never restricted injectively), yet the formula matches cell by cell:
    # only the (0,0) cell is nonzero on either side
    from spdelta.system import free_system
    free = free_system(2, 2, 4)
    rep = verify_thm1(free, [[1, 3]])
    assert rep.all_match
    assert [c for c in rep.cells if c[2] != 0] == [(0, 0, 2, 2, True)]


def test_corollary_sums_for_first_order(uz):
    for j in range(4):
        rep = corollary_euler_check(uz, [[0, 0, 1]], 0, j)
        assert rep.hypotheses_met and rep.applicable
        assert rep.holds and rep.holds_sec4


def test_corollary_sums_above_minimal_order(uz):
    for i in (1, 2):
        for j in range(4):
            rep = corollary_euler_check(uz, [[0, 0, 1]], i, j)
            assert rep.holds, (i, j, rep.terms)


def test_corollary_sums_boundary_case(dim1g2):
    assert not corollary_euler_check(dim1g2, [[0, 1]], 1, 0).applicable
    for j in (1, 2):
        rep = corollary_euler_check(dim1g2, [[0, 1]], 1, j)
        assert rep.hypotheses_met and rep.holds and rep.holds_sec4


def test_corollary_sums_after_order_reduction(uxy):
    ghat = equivalence_reduce(uxy, 2)
    for j in range(3):
        rep = corollary_euler_check(ghat, [[1, 2]], 0, j)
        assert rep.hypotheses_met and rep.holds and rep.holds_sec4


def test_corollary_below_valid_range_is_flagged(dim1g2):
    rep = corollary_euler_check(dim1g2, [[0, 1]], 0, 1)
    assert not rep.hypotheses_met
    assert any("below" in reason for reason in rep.failing_hypotheses)


def test_characteristic_equivalence_holds_for_involutive(wave, uxy):
    rep = verify_thm2(wave, Subspace.full(2))
    assert rep.equivalence_holds and not rep.hypothesis_violated
    rep = verify_thm2(uxy, [[1, 0]])
    assert rep.equivalence_holds


def test_characteristic_equivalence_fails_for_finite_type(cint3):
    rep = verify_thm2(cint3, [[1, 0, 0], [0, 1, 0]])
    assert rep.strongly_char
    assert rep.pencil_exists is False
    assert rep.hypothesis_violated
    assert rep.equivalence_holds is False


def test_first_order_line_pencil():
    from conftest import load_system
    g = load_system("uz.spd", cap=4)
    rep = verify_thm2(g, [[0, 0, 1]])
    # the annihilated direction: not characteristic, not strongly char
    assert not rep.strongly_char and rep.pencil_exists is False
    assert rep.equivalence_holds
    rep = verify_thm2(g, [[1, 0, 0]])
    assert rep.strongly_char and rep.pencil_exists and rep.equivalence_holds


def test_sampled_verdict_for_large_subspaces(cint3):
    rep = verify_thm2(cint3, Subspace.full(3), samples=4)
    assert rep.strongly_char
    assert rep.partial or rep.pencil_exists
