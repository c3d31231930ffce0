from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mfcut.mf import GradedMatrix, homotopy_bracket, mf_validate
from mfcut.ring import VarContext
from mfcut.transfer import (InvalidSetup, closedness_transport, combin_check, conjugate, delta_exp,
                            fermat_setup, hessian_scalars, identity_checks, koszul_setup,
                            partial_setup, simplified_theta, total_factorisation, transfer_general,
                            transfer_theta)

SETUPS = [(3,), (4,), (5,), (3, 3), (3, 4), (3, 3, 3)]


@pytest.fixture(scope="module", params=SETUPS, ids=lambda e: "x".join(map(str, e)))
def setup(request):
    return fermat_setup(request.param)


def y3():
    return fermat_setup((3,))


def test_exp_for_one_variable():
    S = y3()
    delta, plus, minus = delta_exp(S)
    assert minus == S.identity - S.lam(0) @ S.theta_star(0)
    assert (S.d + S.d_koszul) @ minus == minus @ S.d
    assert S.t[0] == S.context.parse("3*y^2")


def test_delta_nilpotency():
    S = fermat_setup((3, 3))
    delta, _, _ = delta_exp(S)
    assert not delta.power(2).is_zero()
    assert delta.power(3).is_zero()


def test_exp_identities(setup):
    delta, plus, minus = delta_exp(setup)
    assert plus @ minus == setup.identity
    assert (setup.d + setup.d_koszul) @ minus == minus @ setup.d


def test_transfer_of_lambda(setup):
    for i in range(setup.m):
        T = transfer_general(setup, setup.lambdas[i])
        assert T == conjugate(setup, setup.lam(i))


def test_transfer_of_lambda_one_variable():
    S = y3()
    L = S.lam(0)
    assert transfer_general(S, S.lambdas[0]) == L + L.bracket(L) @ S.theta_star(0)


def test_commuting_operator_is_fixed():
    # X = (y, y) of y^2 with lambda = D; E supercommutes with D, so every bracket vanishes
    ctx = VarContext(("y",))
    X = mf_validate(GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [["0", "y"], ["y", "0"]]),
                    ctx.parse("y^2"))
    D = X.d.partial("y")
    S = koszul_setup(X, [ctx.parse("2*y")], [D])
    E = GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [["0", "1"], ["-1", "0"]])
    assert D.bracket(E).is_zero()
    assert transfer_general(S, E) == S.on_base(E)


def test_transfer_of_d(setup):
    assert transfer_general(setup, setup.base.d) == setup.d + setup.d_koszul


def test_transfer_of_theta_one_variable():
    S = y3()
    L = S.lam(0)
    T, _ = transfer_theta(S, 0)
    assert T == S.theta(0) - L - (L @ L) @ S.theta_star(0)
    _, plus, minus = delta_exp(S)
    assert T == (S.identity - L @ S.theta_star(0)) @ S.theta(0) @ (S.identity + L @ S.theta_star(0))


def test_zero_lambda_fixes_theta():
    ctx = VarContext(("y",))
    X = mf_validate(GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [["0", "y^2"], ["y", "0"]]),
                    ctx.parse("y^3"))
    S = koszul_setup(X, [ctx.zero()], [GradedMatrix.zero(ctx, 1, (0, 1), (0, 1))])
    T, _ = transfer_theta(S, 0)
    assert T == S.theta(0)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_simplified_theta_up_to_homotopy(N):
    S = fermat_setup((N,))
    f = hessian_scalars(S)
    assert f[(0, 0)] == S.context.parse(f"{N * (N - 1)}*y^{N - 2}")
    T, w = transfer_theta(S, 0, f)
    total = total_factorisation(S)
    assert homotopy_bracket(w.h, total, total) == T - simplified_theta(S, 0, f)


def test_identity_checks(setup):
    out = identity_checks(setup)
    assert all(out.values()), [k for k, v in out.items() if not v]
    assert len([k for k in out if k.startswith("[d, delta^")]) == setup.m + 1


def test_closedness_transport(setup):
    for L in setup.lambdas:
        assert closedness_transport(setup, L)
    assert closedness_transport(setup, setup.base.d)


def test_invalid_setup():
    ctx = VarContext(("y",))
    X = mf_validate(GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [["0", "y^2"], ["y", "0"]]),
                    ctx.parse("y^3"))
    with pytest.raises(InvalidSetup):
        koszul_setup(X, [ctx.parse("y^2")], [X.d.partial("y")])


def test_partial_setup_matches_fermat():
    S = fermat_setup((4,))
    assert partial_setup(S.base).t == S.t


def test_combin_values():
    assert combin_check(0, 0)["passed"]
    assert Fraction(2, 24) * (1 + 2 + 3) == Fraction(1, 2)
    out = combin_check(8, 8)
    assert out["passed"] and out["checked"] == 81


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 12), st.integers(0, 12))
def test_combin_property(a, b):
    assert combin_check(a, b)["passed"]
