from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mfcut.instances import an_factorisation, hom_example
from mfcut.mf import GradedMatrix, kron, mf_dual, mf_validate
from mfcut.perturb import (K, SplittingHomotopy, change_basis, clifford_idempotent,
                           clifford_intertwine_check, cohomology_and_split, creation_check,
                           ext_oracle, hom_pipeline, identity_sdr, is_valid, koszul_perturbation,
                           koszul_truncation, perturb_sdr, phi_map, phi_on_pair, retracts_isomorphic,
                           sdr_from_splitting, sdr_validate, sigma_inf_mod_t, splitting_sdr_roundtrip)
from mfcut.ring import VarContext

Y1 = VarContext(("y",))
C2 = VarContext(("y1", "y2"))


@pytest.fixture(scope="module")
def hom3():
    Y = an_factorisation(Y1, "y", 3, 1)
    return phi_map(mf_dual(Y), Y)


@pytest.fixture(scope="module")
def two_variable():
    d = GradedMatrix.from_dense(C2, 1, (0, 1), (0, 1), [["0", "y1^2-y1*y2+y2^2"], ["y1+y2", "0"]])
    X = mf_validate(d, C2.parse("y1^3+y2^3"))
    return phi_map(mf_dual(X), X)


def test_koszul_truncation_axioms():
    s = koszul_truncation(12)
    assert all(sdr_validate(s).values())
    assert s.small.shape == (1, 1)


def test_identity_sdr():
    d = koszul_truncation(3).big
    assert is_valid(identity_sdr(d))


def test_zero_perturbation_is_identity():
    s = koszul_truncation(6)
    p = perturb_sdr(s, s.big.scale(0))
    assert p == s


@pytest.mark.parametrize("c,shift", [(1, 2), (3, 2), (-2, 3), (Fraction(1, 2), 5)])
def test_perturbed_retract(c, shift):
    s = koszul_truncation(12)
    p = perturb_sdr(s, koszul_perturbation(12, c, shift))
    assert is_valid(p)
    # d_inf^2 = 0: the perturbed big differential still squares to zero
    assert (p.big @ p.big).is_zero() and (p.small @ p.small).is_zero()


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(2, 4), st.integers(2, 4))
def test_perturbation_associativity(a, b, s1, s2):
    s = koszul_truncation(8)
    t1 = koszul_perturbation(8, a, s1)
    t2 = koszul_perturbation(8, b, s2)
    assert perturb_sdr(perturb_sdr(s, t1), t2) == perturb_sdr(s, t1 + t2)


def test_splitting_roundtrip():
    s = koszul_truncation(12)
    h = splitting_sdr_roundtrip(s)
    assert isinstance(h, SplittingHomotopy)
    r = splitting_sdr_roundtrip(h)
    assert r.small.shape == (1, 1) and r.small.row_parities == (0,)
    assert is_valid(r) and retracts_isomorphic(s, r)


def test_zero_splitting_keeps_everything():
    big = koszul_truncation(4).big
    zero = big.scale(0)
    r = sdr_from_splitting(SplittingHomotopy(big, zero))
    assert r.small.shape == big.shape


def test_splitting_idempotent():
    s = koszul_truncation(10)
    one = GradedMatrix.identity(K, s.big.row_parities)
    e = one - s.big.bracket(s.phi)
    assert e @ e == e


def test_phi_is_quotient_in_degree_zero(hom3):
    res = hom3.cut
    T = res.tensor
    ctx = T.context
    for b in range(T.rank):
        for k in range(4):
            got = hom3.on_representative((), b, ctx.var("y") ** k)
            n = res.jacobi.dim
            want = {b * n + k: ctx.one().to_context(res.mf.context)} if k < n else {}
            assert got == want


def test_phi_on_theta(hom3):
    # Phi(theta (x) nu) = -lambda(nu bar)
    res = hom3.cut
    ctx = res.tensor.context
    n = res.jacobi.dim
    for b in range(res.tensor.rank):
        for k in range(n):
            got = hom3.on_representative((1,), b, ctx.var("y") ** k)
            col = b * n + k
            want = {r: -v for (r, c), v in res.lambdas[0].items() if c == col}
            assert got == want


def test_phi_on_pairs(two_variable):
    ctx = two_variable.cut.tensor.context
    for b in range(two_variable.cut.tensor.rank):
        for e in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]:
            p = ctx.monomial(e)
            for i, j in ((0, 1), (1, 0)):
                got, want = phi_on_pair(two_variable, i, j, b, p)
                assert got == want


def test_sigma_inf_components(hom3):
    res = hom3.cut
    table, ops = sigma_inf_mod_t(res)
    ctx = res.mf.context
    Ic = res.mf.identity()
    IS = GradedMatrix.identity(ctx, ops.parities)
    incl = kron(GradedMatrix(ctx, 0, ops.parities, (0,), {(0, 0): 1}), Ic)
    assert table[0] == incl
    assert table[1] == -(kron(IS, res.gamma[0]) @ kron(ops.wedge[0], Ic) @ incl)


def test_creation_exact_for_one_variable(hom3):
    exact, status = creation_check(hom3.cut, (0,))
    assert exact and status == "exact"


def test_creation_two_variables(two_variable):
    for qs in ((0,), (1,), (0, 1), (1, 0)):
        exact, status = creation_check(two_variable.cut, qs)
        assert exact and status in ("exact", "homotopy")


def test_intertwining_one_variable(hom3):
    Ycomp = mf_dual(an_factorisation(Y1, "y", 3, 1))
    X = an_factorisation(Y1, "y", 3, 1)
    out = clifford_intertwine_check(Ycomp, X, fm=hom3, morphisms=(Ycomp.identity(), X.identity(), Ycomp, X))
    assert out["gamma_1 Phi ~ Phi theta*_1"][0] in ("exact", "homotopy")
    assert out["gamma_dagger_1 Phi ~ Phi theta_1"][0] in ("exact", "homotopy")
    assert out["naturality"][0] == "exact"


def test_zero_naturality_square(hom3):
    Ycomp = mf_dual(an_factorisation(Y1, "y", 3, 1))
    X = an_factorisation(Y1, "y", 3, 1)
    zero = (Ycomp.identity().scale(0), X.identity(), Ycomp, X)
    out = clifford_intertwine_check(Ycomp, X, fm=hom3, morphisms=zero, max_order=0)
    assert out["naturality"] == ("exact", 0)


def test_cohomology_trivial_idempotents():
    res = hom_example(3, 1, 1).cut
    dims, image = cohomology_and_split(res.d, res.mf.identity())
    assert image == dims
    _, image = cohomology_and_split(res.d, res.mf.identity().scale(0))
    assert image == (0, 0)


def _random_change(draw, par):
    # block-unitriangular in each parity block, then a parity-preserving permutation
    n = len(par)
    data = {(i, i): 1 for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if par[i] == par[j]:
                c = draw(st.integers(-2, 2))
                if c:
                    data[(i, j)] = c
    return GradedMatrix(K, 0, par, par, data)


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_cohomology_basis_independent(data):
    N = data.draw(st.integers(3, 5))
    i = data.draw(st.integers(1, N - 1))
    j = data.draw(st.integers(1, N - 1))
    res = hom_example(N, i, j).cut
    d = res.d.to_context(K)
    e = clifford_idempotent(res).to_context(K)
    P = _random_change(data.draw, d.row_parities)
    # P is unitriangular, so its inverse is the finite Neumann series
    one = GradedMatrix.identity(K, d.row_parities)
    nil = P - one
    Pinv, term = one, one
    for k in range(1, len(d.row_parities)):
        term = term @ (-nil)
        Pinv = Pinv + term
    assert P @ Pinv == one
    base = cohomology_and_split(d, e)
    moved = cohomology_and_split(change_basis(d, P, Pinv), change_basis(e, P, Pinv))
    assert base == moved


@pytest.mark.parametrize("N", [3, 4, 5])
def test_ext_oracle_matches_pipeline(N):
    for i in range(1, N):
        for j in range(1, N):
            Y = an_factorisation(Y1, "y", N, i)
            X = an_factorisation(Y1, "y", N, j)
            assert hom_pipeline(Y, X)["image"] == ext_oracle(Y, X)[0]
