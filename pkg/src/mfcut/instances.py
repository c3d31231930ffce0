"""Standard inputs: A_N factorisations, the Hom example and the Fermat battery.

The golden_* builders write the Hom-example matrices directly from their
closed forms, independently of the cut engine, in the basis order
(theta theta^*, theta^* theta, theta, theta^*) of Hom_R(Y, X) tensored with
the Jacobi basis 1, y, ..., y^{N-2}.
"""

from dataclasses import dataclass
from fractions import Fraction

from .cut import cut_compose, descend, inflate, jacobi
from .mf import GradedMatrix, mf_dual, mf_tensor, mf_validate
from .ring import VarContext

# tensor basis index and sign of each Hom-basis element
HOM_PERM = (1, 2, 3, 0)
HOM_SIGNS = (1, 1, 1, -1)


def an_factorisation(ctx, var, N, i):
    """y^N = y^{N-i} * y^i as the rank-two factorisation [[0, y^{N-i}], [y^i, 0]]."""
    y = ctx.var(var)
    d = GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [[0, y ** (N - i)], [y ** i, 0]])
    return mf_validate(d, y ** N)


def difference_factorisation(ctx, hi, lo, N):
    """hi^N - lo^N = (hi - lo) * (hi^{N-1} + ... + lo^{N-1})."""
    a, b = ctx.var(hi), ctx.var(lo)
    tail = ctx.zero()
    for k in range(N):
        tail = tail + a ** (N - 1 - k) * b ** k
    d = GradedMatrix.from_dense(ctx, 1, (0, 1), (0, 1), [[0, tail], [a - b, 0]])
    return mf_validate(d, a ** N - b ** N)


@dataclass
class HomExample:
    N: int
    i: int
    j: int
    Y: object
    X: object
    cut: object

    @property
    def basis_change(self):
        n = self.N - 1
        perm = [HOM_PERM[a] * n + s for a in range(4) for s in range(n)]
        signs = [HOM_SIGNS[a] for a in range(4) for s in range(n)]
        return perm, signs

    def in_hom_basis(self, M):
        perm, signs = self.basis_change
        return M.permuted(perm, signs)

    @property
    def d(self):
        return self.in_hom_basis(self.cut.d)

    @property
    def gamma(self):
        return self.in_hom_basis(self.cut.gamma[0])

    @property
    def gamma_dagger(self):
        return self.in_hom_basis(self.cut.gamma_dagger[0])

    @property
    def lam(self):
        return self.in_hom_basis(self.cut.lambdas[0])

    @property
    def inflation(self):
        """Multiplication by y on Y|X (block diagonal [y])."""
        J = self.cut.jacobi
        y = J.context.var(J.y_vars[0])
        ones = self.cut.tensor.identity().scale(y.to_context(self.cut.tensor.context))
        return self.in_hom_basis(inflate(ones, J))


def hom_example(N, i, j):
    """Y = (y^{N-i}, y^i), X = (y^{N-j}, y^j) and the cut dual(Y)|X for V = y^N."""
    ctx = VarContext(("y",))
    Y = an_factorisation(ctx, "y", N, i)
    X = an_factorisation(ctx, "y", N, j)
    res = cut_compose(mf_dual(Y), X, V=ctx.var("y") ** N, y_vars=("y",))
    return HomExample(N, i, j, Y, X, res)


def _zero(n):
    return [[Fraction(0)] * n for _ in range(n)]


def golden_y(N, k=1):
    """[y]^k on J = k[y]/(y^{N-1}): ones on the k-th sub-diagonal."""
    n = N - 1
    return [[Fraction(1) if r - c == k else Fraction(0) for c in range(n)] for r in range(n)]


def golden_R(N, a):
    """[R_a] = (1/N) (0 I_a; 0 0)."""
    n = N - 1
    return [[Fraction(1, N) if (c - r == n - a and r < a) else Fraction(0) for c in range(n)]
            for r in range(n)]


def _scaled(M, s):
    return [[s * v for v in row] for row in M]


def _blocks(B, n):
    out = [[Fraction(0)] * (4 * n) for _ in range(4 * n)]
    for bi in range(4):
        for bj in range(4):
            for a in range(n):
                for b in range(n):
                    out[bi * n + a][bj * n + b] = B[bi][bj][a][b]
    return out


def golden_d(N, i, j):
    n = N - 1
    Z = _zero(n)
    yp = lambda k: golden_y(N, k)
    return _blocks([[Z, Z, yp(N - i), yp(j)],
                    [Z, Z, yp(N - j), yp(i)],
                    [_scaled(yp(i), -1), yp(j), Z, Z],
                    [yp(N - j), _scaled(yp(N - i), -1), Z, Z]], n)


def golden_gamma(N, i, j):
    n = N - 1
    Z = _zero(n)
    R = lambda a: golden_R(N, a)
    return _blocks([[Z, Z, _scaled(R(N - i), -1), _scaled(R(j), -1)],
                    [Z, Z, _scaled(R(N - j), -1), _scaled(R(i), -1)],
                    [R(i), _scaled(R(j), -1), Z, Z],
                    [_scaled(R(N - j), -1), R(N - i), Z, Z]], n)


def golden_lambda(N, j):
    """d_y(d_X) on Hom_R(Y, X) (x) J: post-composition with [[0, (N-j) y^{N-j-1}], [j y^{j-1}, 0]]."""
    n = N - 1
    Z = _zero(n)
    yp = lambda k: golden_y(N, k)
    return _blocks([[Z, Z, Z, _scaled(yp(j - 1), j)],
                    [Z, Z, _scaled(yp(N - j - 1), N - j), Z],
                    [Z, _scaled(yp(j - 1), j), Z, Z],
                    [_scaled(yp(N - j - 1), N - j), Z, Z, Z]], n)


def _matmul(A, B):
    n = len(A)
    return [[sum(A[r][k] * B[k][c] for k in range(n)) for c in range(n)] for r in range(n)]


def golden_block_y(N, k):
    n = N - 1
    Z = _zero(n)
    yp = golden_y(N, k) if k < n else _zero(n)
    return _blocks([[yp if a == b else Z for b in range(4)] for a in range(4)], n)


def golden_gamma_dagger(N, i, j):
    """-d_y(d_X) - 1/2 N(N-1) y^{N-2} gamma."""
    L = golden_lambda(N, j)
    G = golden_gamma(N, i, j)
    YG = _matmul(golden_block_y(N, N - 2), G)
    c = Fraction(N * (N - 1), 2)
    return [[-L[r][s] - c * YG[r][s] for s in range(len(L))] for r in range(len(L))]


def residue_matrix(N, a):
    """R_a: y^q -> d/dt (y^{a+q}) on J = k[y]/(y^{N-1}), computed by the t-expansion."""
    ctx = VarContext(("y",))
    J = jacobi(ctx.var("y") ** N, ("y",))
    M = GradedMatrix.from_dense(ctx, 0, (0,), (0,), [[ctx.var("y") ** a]])
    return descend(M, J, (1,))


def constant_entries(M):
    return [[v.constant_value() for v in row] for row in M.entries]


def fermat_battery():
    """Composable pairs (label, Y, X) with Fermat-type potentials, <= 2 variables per group."""
    out = []
    cy = VarContext(("y",))
    for N in (3, 4, 5):
        for i in range(1, N):
            for j in range(1, N // 2 + 1):
                Y = mf_dual(an_factorisation(cy, "y", N, j))
                X = an_factorisation(cy, "y", N, i)
                out.append((f"hom y^{N} ({j},{i})", Y, X))
    cxy = VarContext(("x", "y"))
    cyz = VarContext(("y", "z"))
    for N in (3, 4):
        X = difference_factorisation(cxy, "y", "x", N)
        Y = difference_factorisation(cyz, "z", "y", N)
        out.append((f"z^{N}-y^{N} | y^{N}-x^{N}", Y, X))
        Yi = mf_dual(an_factorisation(cy, "y", N, 1))
        out.append((f"-y^{N} | y^{N}-x^{N}", Yi, X))
        out.append((f"z^{N}-y^{N} | y^{N}", Y, an_factorisation(cy, "y", N, 1)))
    c2 = VarContext(("y1", "y2"))
    for a, b in ((3, 3), (3, 4)):
        X = mf_tensor(an_factorisation(c2, "y1", a, 1), an_factorisation(c2, "y2", b, 1))
        out.append((f"y1^{a}+y2^{b} dual | self", mf_dual(X), X))
    cx2 = VarContext(("x1", "x2", "y1", "y2"))
    X = mf_tensor(difference_factorisation(cx2, "y1", "x1", 3), difference_factorisation(cx2, "y2", "x2", 3))
    c2b = VarContext(("y1", "y2"))
    Y = mf_dual(mf_tensor(an_factorisation(c2b, "y1", 3, 1), an_factorisation(c2b, "y2", 3, 2)))
    out.append(("-(y1^3+y2^3) | y1^3+y2^3-x1^3-x2^3", Y, X))
    return out
