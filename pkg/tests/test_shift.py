import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from shiftequiv.dimgroup import (
    DimClass,
    apply_Rt_G,
    equal,
    generator_class,
    order_unit,
    x_action,
)
from shiftequiv.exceptions import NotAHomomorphismError, NotIntertwinerError, ShapeError
from shiftequiv.graph import cuntz_splice
from shiftequiv.linalg import Matrix
from shiftequiv.shift import (
    GradedHomSpec,
    RelaxedSEWitness,
    SEWitness,
    SSEStep,
    compose_se,
    intertwiner_coordinates,
    iter_se,
    lift_hom_to_matrix,
    matrix_to_hom,
    search_se,
    solve_intertwiners,
    sse_to_se,
    verify_relaxed_se,
    verify_se,
    verify_sse_chain,
    verify_unital,
)

from conftest import essential_matrices, intertwined_pairs

TWO = [[2]]
FIB = [[1, 1], [1, 0]]
ONES = [[1, 1], [1, 1]]


@st.composite
def sse_pairs(draw, max_size=3):
    """``(A, B, R, S)`` with ``A = RS``, ``B = SR`` both essential."""
    p = draw(st.integers(1, max_size))
    q = draw(st.integers(1, max_size))
    while True:
        R = draw(st.lists(st.lists(st.integers(0, 2), min_size=q, max_size=q),
                          min_size=p, max_size=p))
        S = draw(st.lists(st.lists(st.integers(0, 2), min_size=p, max_size=p),
                          min_size=q, max_size=q))
        R, S = Matrix(R), Matrix(S)
        A, B = R @ S, S @ R
        if all(any(r) for r in A.rows) and all(any(r) for r in B.rows):
            return A, B, R, S
        assume(False)


def random_intertwiner(A, B, data):
    basis = solve_intertwiners(A, B)
    assume(basis)
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=len(basis), max_size=len(basis)))
    R = Matrix.zeros(Matrix(A).nrows, Matrix(B).nrows)
    for c, b in zip(coeffs, basis):
        R = R + b.scale(c)
    return R


class TestVerifySE:
    def test_self_equivalence(self):
        assert verify_se(SEWitness(FIB, FIB, FIB, FIB, 2)).ok

    def test_one_vertex_to_all_ones(self):
        assert verify_se(SEWitness(TWO, ONES, [[1, 1]], [[1], [1]], 1)).ok

    def test_tampered_S(self):
        report = verify_se(SEWitness(TWO, ONES, [[1, 1]], [[1], [2]], 1))
        assert not report.ok
        check = report["B^m = SR"]
        assert not check.ok and check.residual == Matrix([[0, 0], [-1, -1]])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            verify_se(SEWitness(TWO, ONES, [[1]], [[1], [1]], 1))

    def test_negative_entries_flagged(self):
        report = verify_se(SEWitness(TWO, TWO, [[-1]], [[-2]], 1))
        assert report["A^m = RS"].ok and not report["R >= 0"].ok


class TestRelaxedSE:
    def test_full_witness_is_relaxed(self):
        assert verify_relaxed_se(RelaxedSEWitness(TWO, ONES, [[1, 1]], [[1], [1]],
                                                  [[1], [1]], 1, 1)).ok

    def test_zero_R(self):
        report = verify_relaxed_se(RelaxedSEWitness(TWO, TWO, [[0]], [[1]], [[1]], 1, 1))
        assert not report["A^m = RS"].ok

    def test_unit_factors_fail(self):
        report = verify_relaxed_se(RelaxedSEWitness(TWO, TWO, [[1]], [[1]], [[1]], 1, 1))
        assert not report.ok and report["A^m = RS"].residual == Matrix([[1]])


class TestSSEChain:
    def test_single_step(self):
        assert verify_sse_chain([SSEStep(TWO, ONES, [[1, 1]], [[1], [1]])])

    def test_empty(self):
        assert verify_sse_chain([])

    def test_tampered(self):
        assert not verify_sse_chain([SSEStep(TWO, ONES, [[1, 1]], [[1], [2]])])

    def test_non_chaining(self):
        steps = [SSEStep(TWO, ONES, [[1, 1]], [[1], [1]]), SSEStep(TWO, TWO, [[1]], [[2]])]
        with pytest.raises(ValueError):
            verify_sse_chain(steps)

    @given(sse_pairs(), st.data())
    def test_chain_gives_shift_equivalence(self, pair, data):
        A, B, R, S = pair
        step = SSEStep(A, B, R, S)
        back = SSEStep(B, A, S, R)
        assert verify_sse_chain([step, back])
        w = sse_to_se([step, back])
        assert w.m == 2 and verify_se(w).ok


class TestUnital:
    def test_unit_row(self):
        assert verify_unital([[1, 1]], TWO, ONES)

    def test_doubled_row(self):
        assert not verify_unital([[2, 2]], TWO, ONES)

    def test_permutation_self_map(self):
        P = [[0, 1], [1, 0]]
        assert verify_unital(P, P, P)

    def test_self_map_by_A_is_not_unital_in_general(self):
        # R = A sends [1, 0] to [2, 0], not the unit
        assert not verify_unital(TWO, TWO, TWO)

    def test_requires_intertwiner(self):
        with pytest.raises(NotIntertwinerError):
            verify_unital([[1, 0]], TWO, ONES)

    @given(intertwined_pairs(), st.data())
    def test_unital_maps_preserve_order_unit(self, pair, data):
        A, B = pair
        R = random_intertwiner(A, B, data)
        image = apply_Rt_G(order_unit(A), R, B)
        assert verify_unital(R, A, B) == equal(image, order_unit(B))


class TestIntertwiners:
    def test_commuting_scalars(self):
        assert solve_intertwiners(TWO, TWO) == [Matrix([[1]])]

    def test_cuntz_splice_has_none(self):
        assert solve_intertwiners(TWO, cuntz_splice(TWO, 0)) == []

    def test_cuntz_splice_of_one_loop_is_a_line(self):
        assert solve_intertwiners([[1]], cuntz_splice([[1]], 0)) == [Matrix([[1, 0, -1]])]

    def test_different_eigenvalues(self):
        assert solve_intertwiners([[1]], TWO) == []

    @given(essential_matrices(), essential_matrices())
    def test_lattice_against_sympy(self, A, B):
        basis = solve_intertwiners(A, B)
        for R in basis:
            assert A @ R == R @ B
        p, q = A.nrows, B.nrows
        op = sympy.kronecker_product(sympy.Matrix(A.tolist()), sympy.eye(q)) - \
            sympy.kronecker_product(sympy.eye(p), sympy.Matrix(B.T.tolist()))
        assert len(basis) == len(op.nullspace())

    @given(intertwined_pairs(), st.data())
    def test_coordinates_round_trip(self, pair, data):
        A, B = pair
        basis = solve_intertwiners(A, B)
        coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(basis),
                                    max_size=len(basis)))
        R = Matrix.zeros(A.nrows, B.nrows)
        for c, b in zip(coeffs, basis):
            R = R + b.scale(c)
        assert intertwiner_coordinates(R, basis) == tuple(coeffs)


class TestSearch:
    def test_one_vertex_to_all_ones(self):
        w = search_se(TWO, ONES, 2, 2)
        assert (w.R, w.S, w.m) == (Matrix([[1, 1]]), Matrix([[1], [1]]), 1)

    def test_none_between_different_eigenvalues(self):
        assert search_se([[1]], TWO, 3, 3) is None

    def test_self_witness_at_lag_two(self):
        ws = list(iter_se(FIB, FIB, m_max=2, coeff_bound=2, m_min=2))
        assert any(w.R == Matrix(FIB) and w.S == Matrix(FIB) for w in ws)

    def test_first_witness_for_A_equal_B(self):
        w = search_se(FIB, FIB, 2, 2)
        assert w.m == 1 and verify_se(w).ok

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            search_se(TWO, TWO, 0, 1)

    def test_parallel_matches_sequential(self):
        A = [[1, 1], [1, 1]]
        B = [[1, 1, 0], [1, 1, 0], [1, 1, 0]]
        assert search_se(A, B, 2, 2, jobs=2, batch_size=2) == search_se(A, B, 2, 2)
        assert search_se(ONES, ONES, 2, 2, jobs=2, batch_size=1) == search_se(ONES, ONES, 2, 2)

    @settings(max_examples=15)
    @given(sse_pairs(max_size=2))
    def test_found_witnesses_verify_and_are_deterministic(self, pair):
        A, B, _, _ = pair
        w = search_se(A, B, 2, 2)
        if w is not None:
            assert verify_se(w).ok
        assert search_se(A, B, 2, 2) == w

    @given(sse_pairs(), st.data())
    def test_composition(self, pair, data):
        A, B, R, S = pair
        j = data.draw(st.integers(1, 2))
        there = SEWitness(A, B, R, S, 1)
        back = SEWitness(B, A, S, R, 1)
        loop = SEWitness(B, B, Matrix(B) ** j, Matrix.identity(Matrix(B).nrows), j)
        for w in (compose_se(there, back), compose_se(there, loop)):
            assert verify_se(w).ok
        assert compose_se(there, loop).m == 1 + j


class TestLift:
    def test_shifted_scalar(self):
        lift = lift_hom_to_matrix(GradedHomSpec(TWO, TWO, [((1,), 1)]))
        assert lift.R == Matrix([[1]]) and lift.shift == 1

    def test_identity(self):
        spec = GradedHomSpec(FIB, FIB, [((1, 0), 0), ((0, 1), 0)])
        lift = lift_hom_to_matrix(spec)
        assert lift.R == Matrix.identity(2) and lift.shift == 0

    def test_one_vertex_to_all_ones(self):
        lift = lift_hom_to_matrix(GradedHomSpec(TWO, ONES, [((1, 1), 0)]))
        assert lift.R == Matrix([[1, 1]]) and lift.shift == 0

    def test_matrix_to_hom(self):
        spec = matrix_to_hom([[1, 1]], TWO, ONES)
        assert spec.images[0].v == (1, 1) and spec.images[0].k == 0
        ident = matrix_to_hom(Matrix.identity(2), FIB, FIB)
        assert [img.v for img in ident.images] == [(1, 0), (0, 1)]

    def test_non_homomorphism(self):
        with pytest.raises(NotAHomomorphismError):
            lift_hom_to_matrix(GradedHomSpec(ONES, TWO, [((1,), 0), ((2,), 0)]))

    def test_negative_image_rejected(self):
        with pytest.raises(ValueError):
            GradedHomSpec(TWO, TWO, [((-1,), 0)])

    @given(sse_pairs(), st.data())
    def test_lift_recovers_shifted_representatives(self, pair, data):
        A, B, R, _ = pair  # AR = RSR = RB
        c = data.draw(st.integers(0, 2))
        images = []
        for i in range(A.nrows):
            j = data.draw(st.integers(0, 2))
            v = (B.T ** j).mul_vec(R.row(i))
            images.append((v, j + c))
        spec = GradedHomSpec(A, B, images)
        lift = lift_hom_to_matrix(spec)
        assert A @ lift.R == lift.R @ B and lift.R.is_nonnegative()
        for i in range(A.nrows):
            g = generator_class(A, i)
            assert equal(spec(g), lift(g))
            assert equal(lift(g), x_action(DimClass(lift.R.row(i), 0, B), -lift.shift))
            assert equal(spec(g), x_action(DimClass(R.row(i), 0, B), -c))


def test_report_text_lists_each_check():
    text = str(verify_se(SEWitness(TWO, ONES, [[1, 1]], [[1], [2]], 1)))
    assert "FAIL B^m = SR residual [[0, 0], [-1, -1]]" in text.splitlines()
    assert "ok   AR = RB" in text.splitlines()
