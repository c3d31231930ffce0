import pytest
from hypothesis import given, settings

from mfcut.clifford import generated_algebra_dimension, idempotents, spinor_ops, supercommutator
from mfcut.mf import GradedMatrix

from strategies import XY, graded_matrices


def column(ops, subset):
    k = ops.basis.index(subset)
    return {r: v.constant_value() for (r, c), v in ops.contract[0].items() if c == k}


def apply(M, ops, subset):
    k = ops.basis.index(subset)
    return {ops.basis.elements[r]: v.constant_value() for (r, c), v in M.items() if c == k}


def test_rank_one_exterior_algebra():
    ops = spinor_ops(1)
    assert apply(ops.contract[0], ops, (1,)) == {(): 1}
    assert apply(ops.contract[0], ops, ()) == {}
    assert apply(ops.wedge[0], ops, ()) == {(1,): 1}
    assert apply(ops.wedge[0], ops, (1,)) == {}


def test_contraction_signs():
    ops = spinor_ops(2)
    assert apply(ops.contract[0], ops, (1, 2)) == {(2,): 1}
    assert apply(ops.contract[1], ops, (1, 2)) == {(1,): -1}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_clifford_relations(n):
    ops = spinor_ops(n)
    one = GradedMatrix.identity(ops.context, ops.parities)
    for i in range(n):
        for j in range(n):
            assert supercommutator(ops.contract[i], ops.wedge[j]) == (one if i == j else one.scale(0))
            assert supercommutator(ops.wedge[i], ops.wedge[j]).is_zero()
            assert supercommutator(ops.contract[i], ops.contract[j]).is_zero()


def test_idempotents():
    ops = spinor_ops(1)
    e, top = idempotents(ops)
    assert [[v.constant_value() for v in r] for r in e.entries] == [[1, 0], [0, 0]]
    assert [[v.constant_value() for v in r] for r in top.entries] == [[0, 0], [0, 1]]
    e2, _ = idempotents(spinor_ops(2))
    assert [k for k, _ in e2.items()] == [(0, 0)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projector_absorbs_contractions(n):
    ops = spinor_ops(n)
    e, _ = idempotents(ops)
    for i in range(n):
        assert (ops.contract[i] @ e).is_zero()
        assert (e @ ops.wedge[i]).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_endomorphism_algebra_dimension(n):
    ops = spinor_ops(n)
    assert generated_algebra_dimension(list(ops.wedge + ops.contract)) == 4 ** n


def test_supercommutator_basic_cases():
    ops = spinor_ops(2)
    assert supercommutator(ops.wedge[0], ops.contract[1]).is_zero()
    A = ops.wedge[0] + ops.contract[1]
    assert supercommutator(A, A) == (A @ A).scale(2)


_par = (0, 1, 0)


def test_even_bracket_is_commutator():
    ops = spinor_ops(2)
    a = ops.wedge[0] @ ops.contract[1]
    b = ops.contract[0] @ ops.wedge[0]
    assert supercommutator(a, b) == a @ b - b @ a


@settings(max_examples=40, deadline=None)
@given(graded_matrices(XY, rows=_par, cols=_par), graded_matrices(XY, rows=_par, cols=_par),
       graded_matrices(XY, rows=_par, cols=_par))
def test_graded_jacobi(a, b, c):
    def sgn(x, y):
        return -1 if x.parity * y.parity % 2 else 1
    total = (a.bracket(b.bracket(c)).scale(sgn(a, c)) + b.bracket(c.bracket(a)).scale(sgn(b, a))
             + c.bracket(a.bracket(b)).scale(sgn(c, b)))
    assert total.is_zero()
