from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mfcut.instances import HOM_PERM, HOM_SIGNS, an_factorisation
from mfcut.mf import (GradedMatrix, NotAFactorisation, NotClosed, ParityViolation, UnknownAtBound,
                      dual_sign_identity, homotopy_bracket, kron, mf_dual, mf_partial, mf_shift,
                      mf_tensor, mf_validate, null_homotopy)
from mfcut.ring import VarContext

from strategies import XY

X1 = VarContext(("x",))
Y1 = VarContext(("y",))
ZX = VarContext(("z", "x"))


def rank_one(ctx, a, b, W):
    d = GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [["0", a], [b, "0"]])
    return mf_validate(d, ctx.parse(W))


def const(M):
    return [[v.constant_value() for v in r] for r in M.entries]


def test_validate():
    rank_one(X1, "x", "x", "x^2")
    for N in (3, 4, 5):
        for i in range(1, N):
            an_factorisation(Y1, "y", N, i)
    with pytest.raises(NotAFactorisation):
        rank_one(X1, "x", "x", "x^3")


def test_even_differential_is_rejected():
    d = GradedMatrix.from_dense(X1, 0, (0, 1), (0, 1), [["x", "0"], ["0", "x"]])
    with pytest.raises(ParityViolation):
        mf_validate(d, X1.parse("x^2"))


def test_misplaced_entry_is_rejected():
    with pytest.raises(ValueError):
        GradedMatrix.from_dense(X1, 1, (0, 1), (0, 1), [["x", "0"], ["0", "0"]])


def test_shift():
    X = rank_one(X1, "x", "x", "x^2")
    S = mf_shift(X)
    assert S.d == GradedMatrix.from_dense(X1, 1, (1, 0), (1, 0), [["0", "-x"], ["-x", "0"]])
    assert mf_shift(S).d == X.d
    assert S.d @ S.d == S.identity().scale(S.potential)


def test_dual():
    X = rank_one(Y1, "y^2", "y", "y^3")
    D = mf_dual(X)
    assert D.potential == Y1.parse("-y^3")
    assert D.rank == X.rank
    DD = mf_dual(D)
    s = dual_sign_identity(X)
    assert DD.d @ s == s @ X.d


def test_tensor_without_shared_variables():
    Y = rank_one(ZX, "z", "z", "z^2")
    X = rank_one(ZX, "x", "-x", "-x^2")
    T = mf_tensor(Y, X)
    assert T.rank == 4 and T.potential == ZX.parse("z^2 - x^2")


def test_tensor_gives_hom_differential():
    Y = rank_one(Y1, "y^2", "y", "y^3")
    T = mf_tensor(mf_dual(Y), Y)
    assert T.potential.is_zero()
    y, y2 = Y1.var("y"), Y1.var("y") ** 2
    # Hom basis (theta theta*, theta* theta, theta, theta*) = tensor (-(1,1), (0,0), (0,1), (1,0))
    D = T.d.permuted(list(HOM_PERM), list(HOM_SIGNS))
    want = GradedMatrix.from_dense(Y1, 1, (0, 0, 1, 1), (0, 0, 1, 1),
                                   [[0, 0, y2, y], [0, 0, y2, y], [-y, y, 0, 0], [y2, -y2, 0, 0]])
    assert D == want


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.data())
def test_tensor_squares_to_total_potential(N, data):
    i = data.draw(st.integers(1, N - 1))
    j = data.draw(st.integers(1, N - 1))
    Y = mf_dual(an_factorisation(Y1, "y", N, i))
    X = an_factorisation(Y1, "y", N, j)
    T = mf_tensor(Y, X)
    assert T.d @ T.d == T.identity().scale(T.potential)


def test_partials():
    X = rank_one(X1, "x", "x", "x^2")
    lam = mf_partial(X, "x")
    assert const(lam) == [[0, 1], [1, 0]]
    assert X.d.bracket(lam) == X.identity().scale(X1.parse("2*x"))
    Y = rank_one(Y1, "y^2", "y", "y^3")
    assert mf_partial(Y, "y") == GradedMatrix.from_dense(Y1, 1, (0, 1), (0, 1), [["0", "2*y"], ["1", "0"]])
    assert mf_partial(rank_one(XY, "x", "x", "x^2"), "y").is_zero()


CASES = [(XY, "x^2+y", "x^2-y", "x^4-y^2"), (XY, "x*y", "x^2+y^2", "x^3*y+x*y^3"),
         (Y1, "y^3", "y^2", "y^5")]


@pytest.mark.parametrize("ctx,a,b,W", CASES)
def test_partials_are_homotopies(ctx, a, b, W):
    X = rank_one(ctx, a, b, W)
    for v in ctx.names:
        assert X.d.bracket(mf_partial(X, v)) == X.identity().scale(X.potential.partial(v))


@pytest.mark.parametrize("ctx,a,b,W", CASES)
def test_hessian_homotopy(ctx, a, b, W):
    X = rank_one(ctx, a, b, W)
    for u in ctx.names:
        for v in ctx.names:
            lhs = mf_partial(X, u).bracket(mf_partial(X, v)) - X.identity().scale(
                X.potential.partial(u).partial(v))
            assert lhs == X.d.bracket(-X.d.partial(u).partial(v))


def test_partial_naturality():
    # even closed phi: X -> X'; differentiating d' phi = phi d gives the witness -d/dv(phi)
    X = rank_one(XY, "x*y", "x+y", "x^2*y+x*y^2")
    Xp = rank_one(XY, "x+y", "x*y", "x^2*y+x*y^2")
    phi = GradedMatrix.from_dense(XY, 0, (0, 1), (0, 1), [["x+y", "0"], ["0", "x*y"]])
    assert homotopy_bracket(phi, X, Xp).is_zero()
    for v in ("x", "y"):
        lhs = mf_partial(Xp, v) @ phi - phi @ mf_partial(X, v)
        assert lhs == homotopy_bracket(-phi.partial(v), X, Xp)


def test_null_homotopy_examples():
    X = rank_one(X1, "x", "x", "x^2")
    w = null_homotopy(X.identity().scale(X1.var("x")), X, X)
    assert homotopy_bracket(w.h, X, X) == X.identity().scale(X1.var("x"))
    half = mf_partial(X, "x").scale(Fraction(1, 2))
    assert homotopy_bracket(half, X, X) == X.identity().scale(X1.var("x"))
    assert null_homotopy(X.identity().scale(0), X, X).h.is_zero()
    Y = rank_one(Y1, "y^2", "y", "y^3")
    w = null_homotopy(Y.identity().scale(Y1.var("y")), Y, Y)
    assert w.h.max_degree() <= 1
    assert homotopy_bracket(w.h, Y, Y) == Y.identity().scale(Y1.var("y"))


def test_null_homotopy_errors():
    X = rank_one(Y1, "y^2", "y", "y^3")
    with pytest.raises(NotClosed):
        null_homotopy(GradedMatrix.from_dense(Y1, 0, (0, 1), (0, 1), [["1", "0"], ["0", "0"]]), X, X)
    with pytest.raises(UnknownAtBound):
        null_homotopy(X.identity(), X, X, degree_cap=4)


@settings(max_examples=25, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2))
def test_witnesses_are_exact(c, p, q):
    X = rank_one(XY, "x^2+y", "x^2-y", "x^4-y^2")
    phi = X.identity().scale(XY.monomial((p, q), c) * X.potential.partial("y"))
    w = null_homotopy(phi, X, X)
    assert homotopy_bracket(w.h, X, X) == phi


def test_kron_koszul_sign():
    A = GradedMatrix.from_dense(X1, 1, (0, 1), (0, 1), [["0", "1"], ["1", "0"]])
    B = GradedMatrix.from_dense(X1, 1, (0, 1), (0, 1), [["0", "1"], ["1", "0"]])
    K = kron(A, B)
    # (a (x) b)(u (x) v) = (-1)^{|b||u|} a u (x) b v
    assert K.entry(3, 0) == X1.one()
    assert K.entry(1, 2) == -X1.one()
