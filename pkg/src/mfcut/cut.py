"""The cut Y|X of matrix factorisations and its Clifford action.

Y|X is Y (x) J_V (x) X over k[x,z], where J_V is the Jacobi algebra of the
intermediate potential V(y).  Matrices over k[x,y,z] are inflated by
substituting the multiplication matrices [y_i] for the y_i.  Atiyah classes
and the homotopy witnesses are computed on standard-monomial representatives
by extracting coefficients of the t-expansion, t_i = dV/dy_i.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .groebner import (ConnectionCheckFailed, NotFiniteDimensional, buchberger,
                       connection_check, expand_terms, normal_form, standard_monomials)
from .mf import (GradedMatrix, MatrixFactorisation, NotClosed, UnknownAtBound, is_closed,
                 kron, mf_tensor, mf_validate, null_homotopy, tensor_maps)
from .ring import Polynomial, VarContext

__all__ = ["ConnectionCheckFailed", "NotFiniteDimensional", "JacobiData", "CutResult",
           "WitnessIdentityFailed", "NotAMorphism", "jacobi", "inflate", "descend",
           "atiyah", "cut_compose", "cut_morphism", "naturality_witness",
           "associator_check", "top_projector_check"]


class WitnessIdentityFailed(AssertionError):
    pass


class NotAMorphism(ValueError):
    pass


@dataclass
class JacobiData:
    potential: Polynomial
    y_vars: tuple
    context: VarContext
    gb: object
    basis: list
    mult: list
    _mono: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self):
        return len(self.basis)

    @property
    def m(self):
        return len(self.y_vars)

    @property
    def t(self):
        return self.gb.generators

    def coordinates(self, p):
        """Coordinates of the class of the y-polynomial p in the standard basis."""
        if self.gb is None:
            # no y-variables: J = k
            c = p.constant_value()
            return {0: c} if c else {}
        r, _ = normal_form(p, self.gb)
        pos = {e: k for k, e in enumerate(self.basis)}
        return {pos[e]: c for e, c in r.terms.items()}

    def monomial_matrix(self, exps):
        """Sparse {(row, col): rational} matrix of multiplication by y^exps."""
        exps = tuple(exps)
        hit = self._mono.get(exps)
        if hit is None:
            ctx = self.context
            hit = {}
            for s, e in enumerate(self.basis):
                prod = ctx.monomial(tuple(a + b for a, b in zip(e, exps)))
                for r, c in self.coordinates(prod).items():
                    hit[(r, s)] = c
            self._mono[exps] = hit
        return hit

    def matrix_of(self, p):
        out = {}
        for e, c in p.terms.items():
            for rc, v in self.monomial_matrix(e).items():
                w = out.get(rc, 0) + c * v
                if w:
                    out[rc] = w
                else:
                    out.pop(rc, None)
        return out


def _dense(sparse, n):
    M = [[Fraction(0)] * n for _ in range(n)]
    for (r, c), v in sparse.items():
        M[r][c] = v
    return M


def jacobi(V, y_vars, check_degree=None):
    y_vars = tuple(y_vars)
    ctx = VarContext(y_vars)
    Vy = V.to_context(ctx)
    t = [Vy.partial(v) for v in y_vars]
    if not t:
        return JacobiData(Vy, (), ctx, None, [()], [])
    if not any(t):
        raise NotFiniteDimensional("V is constant in y; the Jacobi algebra is not finite")
    gb = buchberger(t)
    basis = standard_monomials(gb)
    if check_degree is None:
        check_degree = max((sum(e) for e in basis), default=0) + 2
    connection_check(gb, check_degree)
    J = JacobiData(Vy, y_vars, ctx, gb, basis, [])
    n = len(basis)
    for i in range(len(y_vars)):
        e = [0] * len(y_vars)
        e[i] = 1
        J.mult.append(_dense(J.monomial_matrix(e), n))
    for A in J.mult:
        for B in J.mult:
            AB = [[sum(A[r][k] * B[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
            BA = [[sum(B[r][k] * A[k][c] for k in range(n)) for c in range(n)] for r in range(n)]
            if AB != BA:
                raise AssertionError("multiplication matrices do not commute")
    return J


class _Splitter:
    """Split polynomials over k[x,y,z] into y-monomials with k[x,z] coefficients."""

    def __init__(self, full, J):
        self.full = full
        self.ypos = [full.index(v) for v in J.y_vars]
        rest = tuple(n for n in full.names if n not in J.y_vars)
        self.cut = VarContext(rest)
        self.rpos = [full.index(v) for v in rest]
        self._cache = {}

    def split(self, p):
        hit = self._cache.get(p)
        if hit is None:
            groups = {}
            for e, c in p.terms.items():
                ye = tuple(e[i] for i in self.ypos)
                re = tuple(e[i] for i in self.rpos)
                groups.setdefault(ye, {})[re] = c
            hit = {ye: Polynomial._raw(self.cut, g) for ye, g in groups.items()}
            self._cache[p] = hit
        return hit


def _splitter(M, J):
    return _Splitter(M.context, J)


def inflate(M, J, splitter=None):
    """Replace every y_i by [y_i]; block index (module index, Jacobi index)."""
    sp = splitter or _splitter(M, J)
    n = J.dim
    rp = tuple(p for p in M.row_parities for _ in range(n))
    cp = tuple(p for p in M.col_parities for _ in range(n))
    rows = {}
    for (a, b), v in M.items():
        for ye, q in sp.split(v).items():
            for (r, s), c in J.monomial_matrix(ye).items():
                row = rows.setdefault(a * n + r, {})
                key = b * n + s
                w = row.get(key)
                w = q.scale(c) if w is None else w + q.scale(c)
                if w:
                    row[key] = w
                else:
                    row.pop(key)
    rows = {r: row for r, row in rows.items() if row}
    return GradedMatrix._from_rows(sp.cut, M.parity, rp, cp, rows)


def descend(M, J, beta, splitter=None):
    """Column (b, s) is the t^beta coefficient of M applied to e_b (x) y^{basis_s}."""
    sp = splitter or _splitter(M, J)
    n = J.dim
    beta = tuple(beta)
    rp = tuple(p for p in M.row_parities for _ in range(n))
    cp = tuple(p for p in M.col_parities for _ in range(n))
    ctx = J.context
    rows = {}
    for (a, b), v in M.items():
        for ye, q in sp.split(v).items():
            for s, std in enumerate(J.basis):
                mono = tuple(x + y for x, y in zip(ye, std))
                coeffs = expand_terms(ctx.monomial(mono), J.gb).get(beta)
                if not coeffs:
                    continue
                for se, c in coeffs.items():
                    r = J.basis.index(se)
                    row = rows.setdefault(a * n + r, {})
                    key = b * n + s
                    w = row.get(key)
                    w = q.scale(c) if w is None else w + q.scale(c)
                    if w:
                        row[key] = w
                    else:
                        row.pop(key)
    rows = {r: row for r, row in rows.items() if row}
    return GradedMatrix._from_rows(sp.cut, M.parity, rp, cp, rows)


def _unit(m, *idx):
    beta = [0] * m
    for i in idx:
        beta[i] += 1
    return tuple(beta)


def atiyah(Y, X, J, i, tensor=None):
    """At_i = [d, d/dt_i] = -(t_i coefficient of d applied to the representative)."""
    T = tensor or mf_tensor(Y, X)
    return -descend(T.d, J, _unit(J.m, i))


@dataclass
class CutResult:
    mf: MatrixFactorisation
    tensor: MatrixFactorisation
    jacobi: JacobiData
    gamma: list
    gamma_dagger: list
    lambdas: list
    h: dict
    g: dict
    c: dict
    y_potential_hessian: dict
    w: dict
    w_exact: dict
    c_exact: dict
    k: dict
    h_literal: dict

    @property
    def atiyah(self):
        return self.gamma

    @property
    def d(self):
        return self.mf.d

    @property
    def rank(self):
        return self.mf.rank


def _split_potentials(Y, X, y_vars):
    # X factorises V(y) - W(x); the y-dependent part of X.potential is V
    ctx = X.potential.context
    ypos = [ctx.index(v) for v in y_vars if v in ctx]
    vterms = {e: c for e, c in X.potential.terms.items() if any(e[i] for i in ypos)}
    return Polynomial(ctx, vterms)


def _check(name, lhs, rhs):
    if lhs != rhs:
        diff = (lhs - rhs).first_nonzero()
        raise WitnessIdentityFailed(f"{name} fails at entry {diff[0]}: {diff[1]}")


def cut_compose(Y, X, V=None, y_vars=None, J=None, verify=True):
    """The cut Y|X with gamma_i, gamma_dagger_i and the relation witnesses h, g, c."""
    if y_vars is None:
        y_vars = tuple(n for n in X.context.names if n in Y.context.names)
    if V is None:
        V = _split_potentials(Y, X, y_vars)
    if J is None:
        J = jacobi(V, y_vars)
    T = mf_tensor(Y, X)
    full = T.context
    sp = _Splitter(full, J)
    m = J.m
    d = inflate(T.d, J, sp)
    cut_potential = _restrict(T.potential, sp)
    cut = mf_validate(d, cut_potential)
    ctx = sp.cut

    dX = X.d.to_context(full)
    IY = GradedMatrix.identity(full, Y.parities)
    lam_full = [kron(IY, dX.partial(v)) for v in J.y_vars]
    lam = [inflate(L, J, sp) for L in lam_full]
    At = [-descend(T.d, J, _unit(m, i), sp) for i in range(m)]
    Vf = J.potential.to_context(full)
    hess = {(q, i): Vf.partial(J.y_vars[q]).partial(J.y_vars[i])
            for q in range(m) for i in range(m)}
    ones = GradedMatrix.identity(full, T.parities)
    hess_op = {k: inflate(ones.scale(v), J, sp) for k, v in hess.items()}
    half = Fraction(1, 2)

    gamma = At
    gamma_dagger = []
    for i in range(m):
        op = -lam[i]
        for q in range(m):
            op = op - (hess_op[(q, i)] @ At[q]).scale(half)
        gamma_dagger.append(op)

    # h_literal = -[d/dt_j, At_i]; the exact witness is h = +[d/dt_j, At_i]
    h, h_literal, g, k = {}, {}, {}, {}
    for i in range(m):
        for j in range(m):
            h_literal[(i, j)] = descend(T.d, J, _unit(m, i, j), sp).scale(2 if i == j else 1)
            h[(i, j)] = -h_literal[(i, j)]
            g[(i, j)] = descend(lam_full[i], J, _unit(m, j), sp)
    # k[(j, q, i)] = [d/dt_j, multiplication by d^2V/dy_q dy_i]
    for j in range(m):
        for q in range(m):
            for i in range(m):
                k[(j, q, i)] = descend(ones.scale(hess[(q, i)]), J, _unit(m, j), sp)
    quarter = Fraction(1, 4)
    c, c_exact, w, w_exact = {}, {}, {}, {}
    for i in range(m):
        for j in range(m):
            base = -g[(i, j)]
            lit, op = base, base
            for q in range(m):
                lit = lit - (hess_op[(q, i)] @ h_literal[(q, j)]).scale(half)
                op = op - (hess_op[(q, i)] @ h[(q, j)] + k[(j, q, i)] @ At[q]).scale(half)
            w[(i, j)] = lit
            w_exact[(i, j)] = op
            second = inflate(kron(IY, dX.partial(J.y_vars[i]).partial(J.y_vars[j])), J, sp)
            base = -second
            for q in range(m):
                base = base + (hess_op[(q, j)] @ g[(i, q)]).scale(half)
                base = base + (hess_op[(q, i)] @ g[(j, q)]).scale(half)
            lit, op = base, base
            for p in range(m):
                for q in range(m):
                    ff = hess_op[(p, i)] @ hess_op[(q, j)]
                    lit = lit + (ff @ h_literal[(p, q)]).scale(quarter)
                    extra = (ff @ h[(p, q)] + hess_op[(p, i)] @ k[(p, q, j)] @ At[q]
                             + hess_op[(q, j)] @ k[(q, p, i)] @ At[p])
                    op = op + extra.scale(quarter)
            c[(i, j)] = lit
            c_exact[(i, j)] = op

    res = CutResult(cut, T, J, gamma, gamma_dagger, lam, h, g, c, hess_op,
                    w, w_exact, c_exact, k, h_literal)
    if verify:
        verify_cut(res)
    return res


def _restrict(p, sp):
    out = {}
    for e, c in p.terms.items():
        if any(e[i] for i in sp.ypos):
            raise ValueError(f"composite potential still depends on y: {p}")
        re = tuple(e[i] for i in sp.rpos)
        out[re] = c
    return Polynomial(sp.cut, out)


def closedness_checks(res):
    d = res.d
    out = {}
    for i, A in enumerate(res.gamma):
        out[f"closed gamma_{i + 1}"] = d.bracket(A).is_zero()
    for i, A in enumerate(res.gamma_dagger):
        out[f"closed gamma_dagger_{i + 1}"] = d.bracket(A).is_zero()
    return out


def relation_checks(res, exact=True):
    """Witness identities for the Clifford relations: name -> (lhs, [d, witness]).

    With exact=False the witnesses are the closed formulas h = -[d/dt_j, At_i],
    -g - 1/2 sum f h and c.  With exact=True h = +[d/dt_j, At_i] and the second
    and third carry the correction terms built from
    k = [d/dt, multiplication by the Hessian of V].
    """
    d = res.d
    m = res.jacobi.m
    one = res.mf.identity()
    zero = GradedMatrix.zero(d.context, 0, d.row_parities, d.col_parities)
    h = res.h if exact else res.h_literal
    w = res.w_exact if exact else res.w
    c = res.c_exact if exact else res.c
    out = {}
    for i in range(m):
        for j in range(m):
            lhs = res.gamma[i].bracket(res.gamma[j])
            out[f"[gamma_{i + 1},gamma_{j + 1}] = [d,h]"] = (lhs, d.bracket(h[(i, j)]))
            lhs = res.gamma_dagger[i].bracket(res.gamma[j]) - (one if i == j else zero)
            out[f"[gamma_dagger_{i + 1},gamma_{j + 1}] - delta = [d,w]"] = (lhs, d.bracket(w[(i, j)]))
            lhs = res.gamma_dagger[i].bracket(res.gamma_dagger[j])
            out[f"[gamma_dagger_{i + 1},gamma_dagger_{j + 1}] = [d,c]"] = (lhs, d.bracket(c[(i, j)]))
    return out


def verify_cut(res):
    for name, ok in closedness_checks(res).items():
        if not ok:
            raise WitnessIdentityFailed(f"{name} fails")
    for name, (lhs, rhs) in relation_checks(res, exact=True).items():
        _check(name, lhs, rhs)
    return True


def cut_morphism(psi, phi, J, domains=None):
    """psi|phi = inflation of psi (x) phi; domains = (Y, Y2, X, X2) enables the morphism check."""
    if domains is not None:
        Y, Y2, X, X2 = domains
        if psi.parity or not is_closed(psi, Y, Y2):
            raise NotAMorphism("psi is not an even closed map")
        if phi.parity or not is_closed(phi, X, X2):
            raise NotAMorphism("phi is not an even closed map")
    kappa = tensor_maps(psi, phi)
    return inflate(kappa, J)


def naturality_witness(psi, phi, J, i):
    """[d/dt_i, psi (x) phi] on representatives."""
    kappa = tensor_maps(psi, phi)
    return descend(kappa, J, _unit(J.m, i))


def top_projector_check(res, degree_cap=None):
    """e'_m = gamma_dagger_1..gamma_dagger_m gamma_m..gamma_1 against the lambda-At word."""
    m = res.jacobi.m
    one = res.mf.identity()
    e_top = one
    for i in range(m):
        e_top = e_top @ res.gamma_dagger[i]
    for i in reversed(range(m)):
        e_top = e_top @ res.gamma[i]
    word = one
    for i in range(m):
        word = word @ res.lambdas[i]
    for i in range(m):
        word = word @ res.gamma[i]
    if comb(m + 1, 2) % 2:
        word = -word
    diff = e_top - word
    if diff.is_zero():
        return {"status": "exact", "witness": None}
    try:
        w = null_homotopy(diff, res.mf, res.mf, degree_cap)
    except UnknownAtBound:
        return {"status": "unknown-at-bound", "witness": None}
    return {"status": "homotopy", "witness": w}


def _tensor_index(ranks, idx):
    k = 0
    for r, i in zip(ranks, idx):
        k = k * r + i
    return k


def associator_check(Z, Y, X, degree_cap=None):
    """Compare Z|(Y|X) with (Z|Y)|X through the re-bracketing permutation.

    Z factorises Q(q) - U(u), Y factorises U(u) - V(y), X factorises V(y) - W(x).
    The inner cut's Clifford family is carried across by cut_morphism-style
    inflation; each comparison is exact or certified by null_homotopy.
    """
    YX = cut_compose(Y, X)
    ZY = cut_compose(Z, Y)
    Z_YX = cut_compose(Z, YX.mf)
    ZY_X = cut_compose(ZY.mf, X)
    Jv, Ju = YX.jacobi, ZY.jacobi
    rz, ry, rx = Z.rank, Y.rank, X.rank
    dv, du = Jv.dim, Ju.dim
    # inflation orders blocks as (module index, Jacobi index):
    # Z|(Y|X) is (z, y, x, v, u) and (Z|Y)|X is (z, y, u, x, v)
    perm = [0] * (rz * ry * rx * dv * du)
    for z in range(rz):
        for y in range(ry):
            for x in range(rx):
                for v in range(dv):
                    for u in range(du):
                        left = _tensor_index((rz, ry, rx, dv, du), (z, y, x, v, u))
                        right = _tensor_index((rz, ry, du, rx, dv), (z, y, u, x, v))
                        perm[left] = right
    report = {"rank_left": Z_YX.rank, "rank_right": ZY_X.rank, "checks": {}}
    if Z_YX.d.context != ZY_X.d.context:
        raise ValueError("the two bracketings live over different rings")
    dl = Z_YX.d.permuted(perm)
    report["checks"]["differential"] = "exact" if dl == ZY_X.d else "fail"
    ZI = GradedMatrix.identity(Z.context, Z.parities)
    XI = GradedMatrix.identity(X.context, X.parities)
    # V-family: on Z|(Y|X) inherited from Y|X as 1|gamma; on (Z|Y)|X it is native
    for i in range(Jv.m):
        for label, inner, outer in (("gamma", YX.gamma[i], ZY_X.gamma[i]),
                                    ("gamma_dagger", YX.gamma_dagger[i], ZY_X.gamma_dagger[i])):
            lifted = inflate(tensor_maps(ZI, inner), Z_YX.jacobi).permuted(perm)
            report["checks"][f"V-{label}_{i + 1}"] = _compare(lifted, outer, ZY_X.mf, degree_cap)
    # U-family: native on Z|(Y|X); on (Z|Y)|X inherited from Z|Y as gamma|1
    for i in range(Ju.m):
        for label, inner, outer in (("gamma", ZY.gamma[i], Z_YX.gamma[i]),
                                    ("gamma_dagger", ZY.gamma_dagger[i], Z_YX.gamma_dagger[i])):
            lifted = inflate(tensor_maps(inner, XI), ZY_X.jacobi)
            report["checks"][f"U-{label}_{i + 1}"] = _compare(outer.permuted(perm), lifted, ZY_X.mf, degree_cap)
    report["permutation"] = perm
    return report


def _compare(A, B, F, degree_cap):
    diff = A - B
    if diff.is_zero():
        return "exact"
    try:
        null_homotopy(diff, F, F, degree_cap)
    except NotClosed:
        return "fail"
    except UnknownAtBound:
        return "unknown-at-bound"
    return "homotopy"
