"""Strong deformation retracts, the perturbation lemma and the finite-model map.

An SDR (M, d_M) <-> (A, d_A) with homotopy phi satisfies

    pi sigma = 1,  sigma pi = 1 - [d_A, phi],  phi^2 = phi sigma = pi phi = 0.

The finite-model map Phi = pi exp(-delta) from S_m (x) (Y (x) X) to Y|X kills
every t_i-multiple, so it factors through S_m (x) (Y|X) and is represented
there by a finite matrix; homotopy certificates are computed on that model.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial

from . import linalg
from .groebner import buchberger, standard_monomials
from .clifford import spinor_ops
from .cut import JacobiData, cut_compose, inflate, _Splitter
from .mf import GradedMatrix, MatrixFactorisation, NotClosed, UnknownAtBound, kron, null_homotopy
from .ring import VarContext

K = VarContext(())


class NotNilpotent(ValueError):
    pass


class NotHomotopyIdempotent(ValueError):
    pass


@dataclass(frozen=True)
class SDR:
    small: GradedMatrix
    big: GradedMatrix
    sigma: GradedMatrix
    pi: GradedMatrix
    phi: GradedMatrix


@dataclass(frozen=True)
class SplittingHomotopy:
    complex: GradedMatrix
    phi: GradedMatrix


def sdr_validate(s):
    """Each of the five axioms, by name, as a boolean."""
    one_m = GradedMatrix.identity(s.small.context, s.small.row_parities)
    one_a = GradedMatrix.identity(s.big.context, s.big.row_parities)
    return {
        "pi sigma = 1": s.pi @ s.sigma == one_m,
        "sigma pi = 1 - [d, phi]": s.sigma @ s.pi == one_a - s.big.bracket(s.phi),
        "phi^2 = 0": (s.phi @ s.phi).is_zero(),
        "phi sigma = 0": (s.phi @ s.sigma).is_zero(),
        "pi phi = 0": (s.pi @ s.phi).is_zero(),
    }


def is_valid(s):
    return all(sdr_validate(s).values())


def identity_sdr(d):
    one = GradedMatrix.identity(d.context, d.row_parities)
    zero = GradedMatrix.zero(d.context, 1, d.row_parities, d.row_parities)
    return SDR(d, d, one, one, zero)


def koszul_truncation(D):
    """k <-> Koszul complex on x truncated at x^D.

    Basis of the big complex: x^0..x^D (even), then x^0 theta..x^{D-1} theta (odd);
    d(x^n theta) = x^{n+1}, phi(x^n) = x^{n-1} theta, pi is the constant term.
    """
    ev, od = D + 1, D
    par = (0,) * ev + (1,) * od
    d = GradedMatrix(K, 1, par, par, {(n + 1, ev + n): 1 for n in range(od)})
    phi = GradedMatrix(K, 1, par, par, {(ev + n - 1, n): 1 for n in range(1, ev)})
    sigma = GradedMatrix(K, 0, par, (0,), {(0, 0): 1})
    pi = GradedMatrix(K, 0, (0,), par, {(0, 0): 1})
    small = GradedMatrix.zero(K, 1, (0,), (0,))
    return SDR(small, d, sigma, pi, phi)


def koszul_perturbation(D, c=1, shift=2):
    """tau(x^n theta) = c x^{n+shift}: the Koszul differential of x + c x^shift."""
    ev, od = D + 1, D
    par = (0,) * ev + (1,) * od
    return GradedMatrix(K, 1, par, par,
                        {(n + shift, ev + n): c for n in range(od) if n + shift < ev})


def _nilpotent_series(op, dim):
    """[op^0, op^1, ...] up to the first zero power; NotNilpotent past dim."""
    one = GradedMatrix.identity(op.context, op.row_parities)
    powers = [one]
    P = one
    for _ in range(dim + 1):
        P = P @ op
        if P.is_zero():
            return powers
        powers.append(P)
    raise NotNilpotent(f"phi tau is not nilpotent within {dim + 1} powers")


def perturb_sdr(s, tau):
    """The perturbed SDR (M, d_inf) <-> (A, d + tau); all axioms re-verified."""
    powers = _nilpotent_series(s.phi @ tau, len(s.big.row_parities))
    series = powers[0]
    for k, P in enumerate(powers[1:], 1):
        series = series + (P if k % 2 == 0 else -P)
    A = tau @ series
    sigma = s.sigma - s.phi @ A @ s.sigma
    pi = s.pi - s.pi @ A @ s.phi
    small = s.small + s.pi @ A @ s.sigma
    phi = series @ s.phi
    out = SDR(small, s.big + tau, sigma, pi, phi)
    report = sdr_validate(out)
    bad = [k for k, v in report.items() if not v]
    if bad:
        raise AssertionError(f"perturbed retract violates {', '.join(bad)}")
    total = out.big @ out.big
    W = total.entry(0, 0) if total.shape[0] else None
    if W is not None and total == GradedMatrix.identity(total.context, total.row_parities, W):
        if out.small @ out.small != GradedMatrix.identity(out.small.context, out.small.row_parities, W):
            raise AssertionError("d_inf^2 differs from the perturbed potential")
    return out


def _columns(M):
    cols = {}
    for (r, c), v in M.items():
        cols.setdefault(c, {})[r] = v.constant_value()
    return cols


def _constant_rows(M):
    rows = {}
    for (r, c), v in M.items():
        rows.setdefault(r, {})[c] = v.constant_value()
    return rows


def sdr_from_splitting(h):
    """Split e = 1 - [d, phi] over the rationals: sigma spans im e, pi = coordinates of e."""
    d, phi = h.complex, h.phi
    par = d.row_parities
    one = GradedMatrix.identity(d.context, par)
    e = one - d.bracket(phi)
    if e @ e != e:
        raise ValueError("1 - [d, phi] is not idempotent")
    cols = _columns(e)
    n = len(par)
    basis = []
    for p in (0, 1):
        vecs = [{r: v for r, v in cols[c].items()} for c in sorted(cols) if par[c] == p]
        # transpose convention: row_space_basis works on vectors indexed by module rows
        for vec in linalg.row_space_basis(vecs, n):
            basis.append((p, vec))
    small_par = tuple(p for p, _ in basis)
    sigma = GradedMatrix(d.context, 0, par, small_par,
                         {(r, k): v for k, (_, vec) in enumerate(basis) for r, v in vec.items()})
    # left inverse on the image: each basis vector has a pivot coordinate equal to 1
    # and zero at the other pivots of its parity block; pi = pivot rows of e
    pi_data = {}
    for k, (_, vec) in enumerate(basis):
        pivot = min(vec)
        for c, v in e.rows.get(pivot, {}).items():
            pi_data[(k, c)] = v
    pi = GradedMatrix(d.context, 0, small_par, par, pi_data)
    small = pi @ d @ sigma
    return SDR(small, d, sigma, pi, phi)


def splitting_sdr_roundtrip(x):
    if isinstance(x, SDR):
        return SplittingHomotopy(x.big, x.phi)
    h = x
    if not (h.phi @ h.phi).is_zero() or h.phi @ h.complex @ h.phi != h.phi:
        raise ValueError("not a splitting homotopy")
    return sdr_from_splitting(h)


def retracts_isomorphic(a, b):
    """The comparison pi_b sigma_a is an invertible chain map of the small objects."""
    f = b.pi @ a.sigma
    g = a.pi @ b.sigma
    ok_a = g @ f == GradedMatrix.identity(a.small.context, a.small.row_parities)
    ok_b = f @ g == GradedMatrix.identity(b.small.context, b.small.row_parities)
    return ok_a and ok_b and b.small @ f == f @ a.small


# ----------------------------------------------------------------------------
# finite-model map


@dataclass
class FiniteModelMap:
    """Phi on S_m (x) (Y|X): rows index Y|X, columns (subset, tensor index, Jacobi index)."""
    Phi: GradedMatrix
    source: MatrixFactorisation
    cut: object
    spinor: object
    delta: GradedMatrix
    degree_bound: int
    _sp: object = field(default=None, repr=False)

    def on_representative(self, subset, b, p):
        """Phi(theta_subset (x) p e_b) for p a polynomial over the tensor ring."""
        T = self.cut.tensor
        sp = self._sp
        J = self.cut.jacobi
        n = J.dim
        col = {}
        for ye, q in sp.split(p.to_context(T.context)).items():
            for (r, s), c in J.monomial_matrix(ye).items():
                if s != 0:
                    continue
                key = (self.spinor.basis.index(subset) * T.rank + b) * n + r
                val = q.scale(c)
                col[key] = col[key] + val if key in col else val
        out = {}
        for key, q in col.items():
            for r, v in self.Phi.rows.items():
                w = v.get(key)
                if w is not None:
                    out[r] = out[r] + w * q if r in out else w * q
        return {r: v for r, v in out.items() if v}


def _delta_on(setup_ops, lambdas, ctx, par):
    delta = GradedMatrix.zero(ctx, 0, par, par)
    for L, S in zip(lambdas, setup_ops):
        delta = delta + L @ S
    return delta


def _spinor_column(ctx, spar, index):
    return GradedMatrix(ctx, spar[index], spar, (spar[index],), {(index, 0): 1})


def phi_map(Y, X, J=None, res=None, degree_bound=None):
    """Phi = pi exp(-delta) on S_m (x) (Y|X), with closedness asserted."""
    res = res or cut_compose(Y, X, J=J)
    J = res.jacobi
    T = res.tensor
    m = J.m
    ctx = res.mf.context
    ops = spinor_ops(m, ctx)
    spar = ops.parities
    cut_par = res.mf.parities
    IS = GradedMatrix.identity(ctx, spar)
    Ic = res.mf.identity()
    lam = [kron(IS, L) for L in res.lambdas]
    theta_star = [kron(S, Ic) for S in ops.contract]
    par = tuple((p + q) % 2 for p in spar for q in cut_par)
    delta = _delta_on(theta_star, lam, ctx, par)
    one = GradedMatrix.identity(ctx, par)
    minus = one
    power = one
    for n in range(1, m + 1):
        power = power @ delta
        minus = minus + power.scale(Fraction((-1) ** n, factorial(n)))
    proj = kron(_spinor_column(ctx, spar, 0).transpose(), Ic)
    Phi = proj @ minus
    dS = kron(IS, res.d)
    source = MatrixFactorisation(res.mf.potential, dS)
    if res.d @ Phi != Phi @ dS:
        raise AssertionError("Phi is not a chain map")
    if degree_bound is None:
        degree_bound = max([_ydegree(M, J) for M in (Y.d, X.d)]) + J.dim
    fm = FiniteModelMap(Phi, source, res, ops, delta, degree_bound, _Splitter(T.context, J))
    _check_representatives(fm)
    return fm


def _ydegree(M, J):
    names = [n for n in J.y_vars if n in M.context]
    best = 0
    for _, v in M.items():
        for e in v.terms:
            best = max(best, sum(e[M.context.index(n)] for n in names))
    return best


def _check_representatives(fm):
    """Phi(1 (x) y^e e_b) is the quotient class, and Phi commutes with d on representatives."""
    res = fm.cut
    T = res.tensor
    J = res.jacobi
    ctx = T.context
    ypos = [ctx.index(v) for v in J.y_vars]
    for total in range(fm.degree_bound + 1):
        for exps in product(range(total + 1), repeat=len(ypos)):
            if sum(exps) != total:
                continue
            e = [0] * ctx.nvars
            for p, k in zip(ypos, exps):
                e[p] = k
            mono = ctx.monomial(tuple(e))
            for b in range(T.rank):
                got = fm.on_representative((), b, mono)
                want = _quotient(res, {b: mono})
                if got != want:
                    raise AssertionError("Phi on theta-degree 0 is not the quotient map")
                for subset in fm.spinor.basis.elements:
                    _check_closed_on(fm, subset, b, mono)


def _quotient(res, vec):
    """Class in Y|X of sum_b vec[b] e_b over the tensor ring."""
    J = res.jacobi
    sp = _Splitter(res.tensor.context, J)
    n = J.dim
    out = {}
    for b, p in vec.items():
        for ye, q in sp.split(p).items():
            for (r, s), c in J.monomial_matrix(ye).items():
                if s != 0:
                    continue
                key = b * n + r
                val = q.scale(c)
                out[key] = out[key] + val if key in out else val
    return {k: v for k, v in out.items() if v}


def _check_closed_on(fm, subset, b, mono):
    res = fm.cut
    T = res.tensor
    # d on S_m (x) T acts as 1 (x) d_T with the Koszul sign (-1)^{|subset|}
    sign = -1 if len(subset) % 2 else 1
    lhs = {}
    for r, v in T.d.rows.items():
        w = v.get(b)
        if w is None:
            continue
        part = fm.on_representative(subset, r, (w * mono).scale(sign))
        for k, q in part.items():
            lhs[k] = lhs[k] + q if k in lhs else q
    lhs = {k: v for k, v in lhs.items() if v}
    image = fm.on_representative(subset, b, mono)
    rhs = {}
    for k, q in image.items():
        for r, row in res.d.rows.items():
            w = row.get(k)
            if w is not None:
                rhs[r] = rhs[r] + w * q if r in rhs else w * q
    rhs = {k: v for k, v in rhs.items() if v}
    if lhs != rhs:
        raise AssertionError(f"Phi does not commute with d on theta_{subset} (x) {mono} e_{b}")


def phi_on_pair(fm, i, j, b, p):
    """(Phi(theta_i theta_j (x) p e_b), 1/2 (lambda_i lambda_j - lambda_j lambda_i) applied to its class)."""
    res = fm.cut
    got = fm.on_representative(tuple(sorted((i + 1, j + 1))), b, p)
    if i > j:
        got = {k: -v for k, v in got.items()}
    L = (res.lambdas[i] @ res.lambdas[j] - res.lambdas[j] @ res.lambdas[i]).scale(Fraction(1, 2))
    cls = _quotient(res, {b: p.to_context(res.tensor.context)})
    want = {}
    for k, q in cls.items():
        for r, row in L.rows.items():
            w = row.get(k)
            if w is not None:
                want[r] = want[r] + w * q if r in want else w * q
    return got, {k: v for k, v in want.items() if v}


# ----------------------------------------------------------------------------
# sigma_inf modulo t


def sigma_inf_mod_t(res, s_max=None):
    """{s: theta-degree-s component of sigma_inf mod t} as maps Y|X -> S_m (x) (Y|X)."""
    m = res.jacobi.m
    s_max = m if s_max is None else min(s_max, m)
    ctx = res.mf.context
    ops = spinor_ops(m, ctx)
    spar = ops.parities
    IS = GradedMatrix.identity(ctx, spar)
    Ic = res.mf.identity()
    sigma0 = kron(_spinor_column(ctx, spar, 0), Ic)
    At = [kron(IS, A) for A in res.gamma]
    theta = [kron(W, Ic) for W in ops.wedge]
    table = {}
    for s in range(s_max + 1):
        comp = GradedMatrix.zero(ctx, 0, sigma0.row_parities, sigma0.col_parities)
        for ps in product(range(m), repeat=s):
            if len(set(ps)) < s:
                continue
            term = sigma0
            for p in reversed(ps):
                term = theta[p] @ term
            for p in reversed(ps):
                term = At[p] @ term
            comp = comp + term
        sign = -1 if comb(s + 1, 2) % 2 else 1
        table[s] = comp.scale(Fraction(sign, factorial(s)))
    return table, ops


def creation_check(res, qs, degree_cap=None):
    """pi theta*_{q_1}..theta*_{q_l} sigma_inf against At_{q_1}..At_{q_l}.

    Returns (exact antisymmetrised identity holds, status of the homotopy to the plain product).
    """
    table, ops = sigma_inf_mod_t(res)
    ctx = res.mf.context
    spar = ops.parities
    Ic = res.mf.identity()
    proj = kron(_spinor_column(ctx, spar, 0).transpose(), Ic)
    word = proj
    for q in qs:
        word = word @ kron(ops.contract[q], Ic)
    total = None
    for comp in table.values():
        part = word @ comp
        total = part if total is None else total + part
    l = len(qs)
    anti = GradedMatrix.zero(ctx, l % 2, res.mf.parities, res.mf.parities)
    for perm in permutations(range(l)):
        sign = _perm_sign(perm)
        term = Ic
        for k in perm:
            term = term @ res.gamma[qs[k]]
        anti = anti + term.scale(Fraction(sign, factorial(l)))
    if total is None:
        total = anti.scale(0)
    plain = Ic
    for q in qs:
        plain = plain @ res.gamma[q]
    exact = total == anti
    return exact, _status(total - plain, res.mf, res.mf, degree_cap)


def _perm_sign(perm):
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _status(diff, source, target, degree_cap):
    if diff.is_zero():
        return "exact"
    try:
        null_homotopy(diff, source, target, degree_cap)
    except NotClosed:
        return "fail"
    except UnknownAtBound:
        return "unknown-at-bound"
    return "homotopy"


def truncated_algebra(J, order):
    """k[y]/(t_1..t_m)^(order+1) in the same JacobiData shape as J."""
    ctx = J.context
    gens = []
    for beta in product(range(order + 2), repeat=J.m):
        if sum(beta) != order + 1:
            continue
        g = ctx.one()
        for t, k in zip(J.t, beta):
            if k:
                g = g * t ** k
        gens.append(g)
    gb = buchberger(gens)
    return JacobiData(J.potential, J.y_vars, ctx, gb, standard_monomials(gb), [])


def thickened_source(fm, order):
    """(S_m (x) T/(t)^(order+1) T, Phi precomposed with the reduction to Y|X)."""
    res = fm.cut
    J = res.jacobi
    A = truncated_algebra(J, order)
    T = res.tensor
    dA = inflate(T.d, A)
    ctx = dA.context
    nA, nJ = A.dim, J.dim
    data = {}
    for s, e in enumerate(A.basis):
        for r, c in J.coordinates(J.context.monomial(e)).items():
            for b in range(T.rank):
                data[(b * nJ + r, b * nA + s)] = c
    q = GradedMatrix(ctx, 0, res.mf.parities, dA.row_parities, data)
    if res.d @ q != q @ dA:
        raise AssertionError("reduction to Y|X is not a chain map")
    IS = GradedMatrix.identity(ctx, fm.spinor.parities)
    source = MatrixFactorisation(res.mf.potential, kron(IS, dA))
    return source, fm.Phi @ kron(IS, q), kron(IS, q), dA


def _thick_status(diff_of, fm, target, degree_cap, max_order):
    """Certify diff_of(source, Phi_n, lift) ~ 0 on S_m (x) T/(t)^(n+1) T for n = 0..max_order."""
    last = "unknown-at-bound"
    for order in range(max_order + 1):
        source, Phi_n, _, dA = thickened_source(fm, order)
        diff = diff_of(Phi_n, GradedMatrix.identity(dA.context, dA.row_parities))
        if diff.is_zero():
            return "exact", order
        try:
            null_homotopy(diff, source, target, degree_cap)
        except NotClosed:
            return "fail", order
        except UnknownAtBound:
            continue
        return "homotopy", order
    return last, max_order


def clifford_intertwine_check(Y, X, J=None, fm=None, morphisms=None, degree_cap=None, max_order=3):
    """gamma_i Phi ~ Phi theta*_i and gamma_dagger_i Phi ~ Phi theta_i, plus naturality.

    Maps out of S_m (x) T with T = Y (x) X are certified after restriction to the
    finite quotient S_m (x) T/(t)^(n+1) T, through which Phi factors; n escalates
    up to max_order.  morphisms = (psi, phi, Y2, X2) adds the square
    (psi|phi) Phi ~ Phi' (1 (x) psi (x) phi).  Values are (status, order).
    """
    fm = fm or phi_map(Y, X, J)
    res = fm.cut
    ops = fm.spinor
    report = {}
    for i in range(res.jacobi.m):
        def star(Phi_n, It, i=i):
            return res.gamma[i] @ Phi_n - Phi_n @ kron(ops.contract[i], It)

        def wedge(Phi_n, It, i=i):
            return res.gamma_dagger[i] @ Phi_n - Phi_n @ kron(ops.wedge[i], It)

        report[f"gamma_{i + 1} Phi ~ Phi theta*_{i + 1}"] = _thick_status(
            star, fm, res.mf, degree_cap, max_order)
        report[f"gamma_dagger_{i + 1} Phi ~ Phi theta_{i + 1}"] = _thick_status(
            wedge, fm, res.mf, degree_cap, max_order)
    if morphisms is not None:
        psi, phi, Y2, X2 = morphisms
        fm2 = phi_map(Y2, X2, res.jacobi)
        full = res.tensor.context.union(fm2.cut.tensor.context)
        kappa = kron(psi.to_context(full), phi.to_context(full))
        kappa_cut = inflate(kappa, res.jacobi)
        for order in range(max_order + 1):
            source, Phi_n, lift, _ = thickened_source(fm, order)
            source2, Phi2_n, _, _ = thickened_source(fm2, order)
            A = truncated_algebra(res.jacobi, order)
            IS = GradedMatrix.identity(Phi_n.context, ops.parities)
            diff = kappa_cut @ Phi_n - Phi2_n @ kron(IS, inflate(kappa, A))
            status = _status(diff, source, fm2.cut.mf, degree_cap)
            if status != "unknown-at-bound":
                break
        report["naturality"] = (status, order)
    return report


# ----------------------------------------------------------------------------
# cohomology


def _constant_matrix(M):
    for _, v in M.items():
        if v.degree() > 0:
            raise ValueError("cohomology needs a complex with constant entries")
    return _constant_rows(M)


def _kernel(rows, nrows, cols_idx):
    sub = {r: {cols_idx.index(c): v for c, v in row.items() if c in cols_idx} for r, row in rows.items()}
    return [{cols_idx[k]: v for k, v in vec.items()} for vec in linalg.nullspace(sub, nrows, len(cols_idx))]


def _apply(rows, vec):
    out = {}
    for r, row in rows.items():
        s = sum(row.get(c, 0) * v for c, v in vec.items())
        if s:
            out[r] = s
    return out


def cohomology_and_split(d, e):
    """(dims of H^0, H^1), (dims of the image of H(e)) for a constant Z2-complex."""
    par = d.row_parities
    n = len(par)
    if not (d @ d).is_zero():
        raise NotClosed("d^2 != 0")
    if e.parity != 0 or not d.bracket(e).is_zero():
        raise NotClosed("e is not an even closed map")
    D = _constant_matrix(d)
    E = _constant_matrix(e)
    dims, image = [], []
    for p in (0, 1):
        idx = [c for c in range(n) if par[c] == p]
        cycles = _kernel(D, n, idx)
        src = [c for c in range(n) if par[c] != p]
        bounds = [v for v in (_apply(D, {c: Fraction(1)}) for c in src) if v]
        b = linalg.rank(dict(enumerate(bounds)), len(bounds), n) if bounds else 0
        dims.append(len(cycles) - b)
        # H(e)^2 = H(e): (e^2 - e) z is a boundary for every cycle z
        for z in cycles:
            ez = _apply(E, z)
            eez = _apply(E, ez)
            diff = {k: eez.get(k, 0) - ez.get(k, 0) for k in set(ez) | set(eez)}
            diff = {k: v for k, v in diff.items() if v}
            if diff:
                cand = bounds + [diff]
                if linalg.rank(dict(enumerate(cand)), len(cand), n) != b:
                    raise NotHomotopyIdempotent("H(e)^2 != H(e)")
        imgs = [v for v in (_apply(E, z) for z in cycles) if v]
        cand = bounds + imgs
        r = linalg.rank(dict(enumerate(cand)), len(cand), n) if cand else 0
        image.append(r - b)
    return tuple(dims), tuple(image)


def change_basis(d, P, Pinv):
    return Pinv @ d @ P


# ----------------------------------------------------------------------------
# Hom pipeline and the brute-force Ext oracle


def clifford_idempotent(res):
    """e_m = gamma_1..gamma_m gamma_dagger_m..gamma_dagger_1 on the cut."""
    e = res.mf.identity()
    for A in res.gamma:
        e = e @ A
    for A in reversed(res.gamma_dagger):
        e = e @ A
    return e


def hom_pipeline(Y, X):
    """Cohomology of dual(Y)|X and of the image of H(e_m), for Y, X over the y-variables only."""
    from .mf import mf_dual
    res = cut_compose(mf_dual(Y), X)
    e = clifford_idempotent(res)
    dims, image = cohomology_and_split(res.d, e)
    return {"cut": res, "cohomology": dims, "image": image}


def _monomials(nvars, degree):
    return [e for e in product(range(degree + 1), repeat=nvars) if sum(e) <= degree]


def _bounded_ext(Y, X, D):
    """(dims of closed maps of degree <= D modulo boundaries landing in degree <= D) per parity."""
    ctx = X.context
    dY, dX = Y.d.to_context(ctx), X.d.to_context(ctx)
    ry, rx = Y.rank, X.rank
    mons = _monomials(ctx.nvars, D)
    out = []
    for p in (0, 1):
        slots = [(r, c) for r in range(rx) for c in range(ry)
                 if (X.parities[r] + Y.parities[c]) % 2 == p]
        hslots = [(r, c) for r in range(rx) for c in range(ry)
                  if (X.parities[r] + Y.parities[c]) % 2 != p]
        coords = {}

        def coord(key):
            k = coords.get(key)
            if k is None:
                k = coords[key] = len(coords)
            return k

        def image(par, r0, c0, e):
            """coordinates of [d, E_{r0 c0} y^e] for a map of parity par."""
            vec = {}
            for r, row in dX.rows.items():
                v = row.get(r0)
                if v is None:
                    continue
                for ve, vc in v.terms.items():
                    k = coord((r, c0, tuple(a + b for a, b in zip(ve, e))))
                    vec[k] = vec.get(k, 0) + vc
            sign = 1 if par else -1
            for c, v in dY.rows.get(c0, {}).items():
                for ve, vc in v.terms.items():
                    k = coord((r0, c, tuple(a + b for a, b in zip(ve, e))))
                    vec[k] = vec.get(k, 0) + sign * vc
            return {k: v for k, v in vec.items() if v}

        unknowns = [(r, c, e) for (r, c) in slots for e in mons]
        cols = [image(p, r, c, e) for (r, c, e) in unknowns]
        rows = {}
        for u, col in enumerate(cols):
            for k, v in col.items():
                rows.setdefault(k, {})[u] = v
        closed = len(unknowns) - linalg.rank(rows, max(len(coords), 1), len(unknowns))
        # boundaries [d, h], deg h <= D, that stay inside degree <= D
        inside = {(r, c, e): k for k, (r, c, e) in enumerate(unknowns)}
        bvecs = []
        for (r, c) in hslots:
            for e in mons:
                vec = image(1 - p, r, c, e)
                bvecs.append(vec)
        keys = {v: k for k, v in coords.items()}
        full = {i: vec for i, vec in enumerate(bvecs) if vec}
        ncoord = len(coords)
        b_all = linalg.rank(full, len(bvecs), ncoord) if full else 0
        outside = {i: {k: v for k, v in vec.items() if keys[k] not in inside}
                   for i, vec in full.items()}
        outside = {i: v for i, v in outside.items() if v}
        b_out = linalg.rank(outside, len(bvecs), ncoord) if outside else 0
        out.append(closed - (b_all - b_out))
    return tuple(out)


def ext_oracle(Y, X, start=None, max_degree=64):
    """Ext dims of Hom(Y, X) by bounded-degree brute force, escalated until stable twice."""
    D = start if start is not None else max(Y.d.max_degree(), X.d.max_degree(), 0)
    history = []
    while D <= max_degree:
        history.append(_bounded_ext(Y, X, D))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return history[-1], D
        D += 1
    raise UnknownAtBound(max_degree)
