"""Transfer of Clifford operators through the Koszul twist exp(-delta).

The total module is S_m (x) X.  Spinor operators act as theta (x) 1 and
operators on X as 1 (x) A, so every sign comes from kron.  With
delta = sum_i lambda_i theta_i^* the map exp(-delta) intertwines
(S_m (x) X, d) with (S_m (x) X, d + d_K), d_K = sum_i t_i theta_i^*.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, factorial

from .clifford import spinor_ops
from .mf import GradedMatrix, MatrixFactorisation, kron, mf_tensor, mf_validate, null_homotopy
from .ring import VarContext


class FormulaMismatch(AssertionError):
    pass


class InvalidSetup(ValueError):
    pass


@dataclass
class KoszulSetup:
    m: int
    t: list
    lambdas: list
    base: MatrixFactorisation
    _ops: dict = field(default_factory=dict, repr=False)

    @property
    def context(self):
        return self.base.context

    @property
    def spinor(self):
        ops = self._ops.get("spinor")
        if ops is None:
            ops = self._ops["spinor"] = spinor_ops(self.m, self.context)
        return ops

    @property
    def parities(self):
        sp = self.spinor.parities
        return tuple((p + q) % 2 for p in sp for q in self.base.parities)

    def on_base(self, A):
        """1 (x) A on the total module."""
        return kron(GradedMatrix.identity(self.context, self.spinor.parities), A)

    def on_spinor(self, A):
        """A (x) 1 on the total module."""
        return kron(A, self.base.identity())

    def theta(self, i):
        return self._cached(("theta", i), lambda: self.on_spinor(self.spinor.wedge[i]))

    def theta_star(self, i):
        return self._cached(("theta*", i), lambda: self.on_spinor(self.spinor.contract[i]))

    def lam(self, i):
        return self._cached(("lambda", i), lambda: self.on_base(self.lambdas[i]))

    @property
    def d(self):
        return self._cached("d", lambda: self.on_base(self.base.d))

    @property
    def d_koszul(self):
        def build():
            dk = GradedMatrix.zero(self.context, 1, self.parities, self.parities)
            for i in range(self.m):
                dk = dk + self.theta_star(i).scale(self.t[i])
            return dk
        return self._cached("dK", build)

    @property
    def identity(self):
        return GradedMatrix.identity(self.context, self.parities)

    def _cached(self, key, build):
        hit = self._ops.get(key)
        if hit is None:
            hit = self._ops[key] = build()
        return hit


def koszul_setup(base, t, lambdas):
    """Validate [d, lambda_i] = t_i and (d + d_K)^2 = W on the total module."""
    ctx = base.context
    t = [p if hasattr(p, "terms") else ctx.const(p) for p in t]
    if len(t) != len(lambdas):
        raise InvalidSetup("one null-homotopy is needed per element of the sequence")
    for i, (ti, L) in enumerate(zip(t, lambdas)):
        if L.parity != 1:
            raise InvalidSetup(f"lambda_{i + 1} must be odd")
        if base.d.bracket(L) != base.identity().scale(ti):
            raise InvalidSetup(f"[d, lambda_{i + 1}] is not t_{i + 1}")
    setup = KoszulSetup(len(t), t, list(lambdas), base)
    D = setup.d + setup.d_koszul
    if D @ D != setup.identity.scale(base.potential):
        raise InvalidSetup("(d + d_K)^2 is not the potential")
    return setup


def partial_setup(X, y_vars=None):
    """t_i = dW/dy_i with lambda_i = d(d_X)/dy_i, the choice used for cuts."""
    names = y_vars or X.context.names
    t = [X.potential.partial(v) for v in names]
    lambdas = [X.d.partial(v) for v in names]
    return koszul_setup(X, t, lambdas)


def fermat_setup(exponents, name="y"):
    """Tensor product of the rank-two factorisations y_i^{N_i} = y_i^{N_i - 1} * y_i."""
    names = tuple(f"{name}{k + 1}" for k in range(len(exponents))) if len(exponents) > 1 else (name,)
    ctx = VarContext(names)
    X = None
    for v, N in zip(names, exponents):
        d = GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1),
                                    [["0", f"{v}^{N - 1}"], [v, "0"]])
        F = mf_validate(d, ctx.parse(f"{v}^{N}"))
        X = F if X is None else mf_tensor(X, F)
    return partial_setup(X, names)


def _exp(delta, m, sign):
    ident = GradedMatrix.identity(delta.context, delta.row_parities)
    out = ident
    power = ident
    for n in range(1, m + 1):
        power = power @ delta
        out = out + power.scale(Fraction(sign ** n, factorial(n)))
    return out


def delta_exp(setup):
    """(delta, exp(delta), exp(-delta)) with nilpotency, inverse and intertwining asserted."""
    m = setup.m
    delta = GradedMatrix.zero(setup.context, 0, setup.parities, setup.parities)
    for i in range(m):
        delta = delta + setup.lam(i) @ setup.theta_star(i)
    if not delta.power(m + 1).is_zero():
        raise FormulaMismatch("delta^(m+1) is not zero")
    plus = _exp(delta, m, 1)
    minus = _exp(delta, m, -1)
    if plus @ minus != setup.identity or minus @ plus != setup.identity:
        raise FormulaMismatch("exp(delta) and exp(-delta) are not inverse")
    if (setup.d + setup.d_koszul) @ minus != minus @ setup.d:
        raise FormulaMismatch("exp(-delta) does not intertwine d with d + d_K")
    return delta, plus, minus


def conjugate(setup, A):
    """exp(-delta) A exp(delta)."""
    _, plus, minus = delta_exp_cached(setup)
    return minus @ A @ plus


def delta_exp_cached(setup):
    hit = setup._ops.get("exp")
    if hit is None:
        hit = setup._ops["exp"] = delta_exp(setup)
    return hit


def _nested(setup, qs, A):
    """[lambda_{q_n}, [..., [lambda_{q_1}, A]]]."""
    for q in qs:
        A = setup.lam(q).bracket(A)
    return A


def _theta_star_word(setup, qs):
    word = setup.identity
    for q in qs:
        word = word @ setup.theta_star(q)
    return word


def series_gamma(setup, G):
    """G + sum_n 1/n! sum_q [lambda_{q_n},[...,[lambda_{q_1}, G]]] theta*_{q_1}...theta*_{q_n}."""
    out = G
    for n in range(1, setup.m + 1):
        for qs in product(range(setup.m), repeat=n):
            if len(set(qs)) < n:
                continue
            term = _nested(setup, qs, G) @ _theta_star_word(setup, qs)
            out = out + term.scale(Fraction(1, factorial(n)))
    return out


def transfer_general(setup, gamma):
    """T(gamma) for an odd operator gamma on X, checked against the series."""
    if gamma.parity != 1:
        raise ValueError("gamma must be odd")
    G = setup.on_base(gamma)
    direct = conjugate(setup, G)
    series = series_gamma(setup, G)
    if direct != series:
        raise FormulaMismatch("nested-commutator series differs from conjugation")
    return direct


def series_theta(setup, i):
    """theta_i - sum_n 1/(n+1)! sum_q [lambda_{q_n},[...,[lambda_{q_1}, lambda_i]]] theta*_q."""
    out = setup.theta(i)
    for n in range(0, setup.m + 1):
        for qs in product(range(setup.m), repeat=n):
            if len(set(qs)) < n:
                continue
            term = _nested(setup, qs, setup.lam(i)) @ _theta_star_word(setup, qs)
            out = out - term.scale(Fraction(1, factorial(n + 1)))
    return out


def simplified_theta(setup, i, f):
    """theta_i - lambda_i - 1/2 sum_q f_{qi} theta*_q for scalars f[(q, i)]."""
    out = setup.theta(i) - setup.lam(i)
    for q in range(setup.m):
        fq = f.get((q, i))
        if fq:
            out = out - setup.theta_star(q).scale(fq).scale(Fraction(1, 2))
    return out


def transfer_theta(setup, i, f=None, degree_cap=None):
    """T(theta_i) checked against the series; with f, also the simplified form up to homotopy.

    Returns (T(theta_i), witness) where witness is None without f, and a
    HomotopyWitness of T(theta_i) - simplified on (S_m (x) X, d + d_K) otherwise.
    """
    direct = conjugate(setup, setup.theta(i))
    series = series_theta(setup, i)
    if direct != series:
        raise FormulaMismatch(f"series for T(theta_{i + 1}) differs from conjugation")
    if f is None:
        return direct, None
    total = total_factorisation(setup)
    diff = direct - simplified_theta(setup, i, f)
    return direct, null_homotopy(diff, total, total, degree_cap)


def total_factorisation(setup):
    return MatrixFactorisation(setup.base.potential, setup.d + setup.d_koszul)


def hessian_scalars(setup):
    """f_{qi} = d^2 W / dy_q dy_i for a partial_setup."""
    names = setup.context.names
    W = setup.base.potential
    return {(q, i): W.partial(names[q]).partial(names[i])
            for q in range(setup.m) for i in range(setup.m)}


def combin_check(a_max, b_max):
    """b!/(a+b+1)! * sum_{a<=n<=a+b} C(n, a) = 1/(a+1)! for all a <= a_max, b <= b_max."""
    failures = []
    for a in range(a_max + 1):
        for b in range(b_max + 1):
            lhs = Fraction(factorial(b), factorial(a + b + 1)) * sum(comb(n, a) for n in range(a, a + b + 1))
            if lhs != Fraction(1, factorial(a + 1)):
                failures.append((a, b, lhs))
    return {"checked": (a_max + 1) * (b_max + 1), "failures": failures, "passed": not failures}


def identity_checks(setup):
    """Name -> bool for the structural identities of the transfer."""
    delta, plus, minus = delta_exp_cached(setup)
    out = {}
    m = setup.m
    dk = setup.d_koszul
    power = setup.identity
    for n in range(1, m + 2):
        prev = power
        power = power @ delta
        out[f"[d, delta^{n}] = {n} delta^{n - 1} d_K"] = (
            setup.d.bracket(power) == (prev @ dk).scale(n))
    for i in range(m):
        out[f"T(theta*_{i + 1}) = theta*_{i + 1}"] = conjugate(setup, setup.theta_star(i)) == setup.theta_star(i)
    T = [conjugate(setup, setup.theta(i)) for i in range(m)]
    S = [setup.theta_star(i) for i in range(m)]
    ok = True
    for i in range(m):
        for j in range(m):
            ok &= T[i].bracket(T[j]).is_zero()
            ok &= S[i].bracket(S[j]).is_zero()
            ok &= S[i].bracket(T[j]) == (setup.identity if i == j else setup.identity.scale(0))
    out["transferred Clifford relations"] = ok
    return out


def closedness_transport(setup, gamma):
    """[T(gamma), d + d_K] = T([gamma, d]) for an odd gamma on X."""
    Tg = transfer_general(setup, gamma)
    lhs = Tg.bracket(setup.d + setup.d_koszul)
    rhs = conjugate(setup, setup.on_base(gamma.bracket(setup.base.d)))
    return lhs == rhs
