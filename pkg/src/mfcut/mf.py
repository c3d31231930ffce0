"""Z2-graded polynomial matrices and matrix factorisations.

A GradedMatrix stores only its nonzero entries.  Entry (r, c) may be
nonzero only when row_parities[r] + col_parities[c] equals the declared
parity mod 2.  Products, brackets and Koszul-signed tensor products are
defined on these.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import linalg
from .ring import Polynomial, order_key


class ParityViolation(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class NotAFactorisation(ValueError):
    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


class NotClosed(ValueError):
    pass


class UnknownAtBound(RuntimeError):
    def __init__(self, bound):
        super().__init__(f"no null-homotopy with entries of degree <= {bound}")
        self.bound = bound


class GradedMatrix:
    __slots__ = ("context", "parity", "row_parities", "col_parities", "rows")

    def __init__(self, context, parity, row_parities, col_parities, data=None, check=True):
        self.context = context
        self.parity = parity & 1
        self.row_parities = tuple(p & 1 for p in row_parities)
        self.col_parities = tuple(p & 1 for p in col_parities)
        self.rows = {}
        if data:
            for (r, c), v in data.items():
                if not isinstance(v, Polynomial):
                    v = context.const(v)
                if v:
                    self.rows.setdefault(r, {})[c] = v
        if check:
            self._check()

    def _check(self):
        nr, nc = self.shape
        for r, row in self.rows.items():
            for c, v in row.items():
                if not (0 <= r < nr and 0 <= c < nc):
                    raise ShapeMismatch(f"entry ({r}, {c}) outside {nr}x{nc}")
                if v.context != self.context:
                    raise ShapeMismatch(f"entry ({r}, {c}) has a foreign context")
                if (self.row_parities[r] + self.col_parities[c]) % 2 != self.parity:
                    raise ParityViolation(
                        f"entry ({r}, {c}) = {v} violates parity {self.parity}")

    @classmethod
    def _from_rows(cls, context, parity, rp, cp, rows):
        m = cls.__new__(cls)
        m.context = context
        m.parity = parity
        m.row_parities = rp
        m.col_parities = cp
        m.rows = rows
        return m

    @classmethod
    def from_dense(cls, context, parity, row_parities, col_parities, matrix):
        data = {}
        for r, row in enumerate(matrix):
            for c, v in enumerate(row):
                if isinstance(v, str):
                    v = context.parse(v)
                data[(r, c)] = v
        return cls(context, parity, row_parities, col_parities, data)

    @classmethod
    def zero(cls, context, parity, row_parities, col_parities):
        return cls(context, parity, row_parities, col_parities)

    @classmethod
    def identity(cls, context, parities, scalar=1):
        n = len(parities)
        s = scalar if isinstance(scalar, Polynomial) else context.const(scalar)
        rows = {i: {i: s} for i in range(n)} if s else {}
        return cls._from_rows(context, 0, tuple(parities), tuple(parities), rows)

    @property
    def shape(self):
        return (len(self.row_parities), len(self.col_parities))

    def entry(self, r, c):
        v = self.rows.get(r, {}).get(c)
        return v if v is not None else self.context.zero()

    @property
    def entries(self):
        nr, nc = self.shape
        return [[self.entry(r, c) for c in range(nc)] for r in range(nr)]

    def items(self):
        for r in sorted(self.rows):
            row = self.rows[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def is_zero(self):
        return not self.rows

    def first_nonzero(self):
        for rc, v in self.items():
            return rc, v
        return None

    def max_degree(self):
        return max((v.degree() for _, v in self.items()), default=-1)

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (self.context == other.context and self.shape == other.shape
                and self.row_parities == other.row_parities
                and self.col_parities == other.col_parities
                and (self.parity == other.parity or (self.is_zero() and other.is_zero()))
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.shape, tuple(self.items())))

    def _same(self, other):
        if self.shape != other.shape or self.context != other.context:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        if self.row_parities != other.row_parities or self.col_parities != other.col_parities:
            raise ShapeMismatch("parity vectors differ")
        if self.parity != other.parity and not (self.is_zero() or other.is_zero()):
            raise ParityViolation("cannot add matrices of different parity")

    def _combine(self, other, sign):
        self._same(other)
        parity = self.parity if not self.is_zero() else other.parity
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            target = rows.setdefault(r, {})
            for c, v in row.items():
                w = target.get(c)
                w = (w + v if sign > 0 else w - v) if w is not None else (v if sign > 0 else -v)
                if w:
                    target[c] = w
                else:
                    target.pop(c, None)
            if not target:
                del rows[r]
        return GradedMatrix._from_rows(self.context, parity, self.row_parities,
                                       self.col_parities, rows)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.map_entries(lambda v: -v)

    def scale(self, s):
        """Multiply by a rational or by an even polynomial scalar."""
        if isinstance(s, Polynomial):
            if not s:
                return self.map_entries(lambda v: v.context.zero())
            return self.map_entries(lambda v: v * s)
        s = Fraction(s)
        return self.map_entries(lambda v: v.scale(s))

    def map_entries(self, fn, context=None):
        ctx = context or self.context
        rows = {}
        for r, row in self.rows.items():
            out = {}
            for c, v in row.items():
                w = fn(v)
                if w:
                    out[c] = w
            if out:
                rows[r] = out
        return GradedMatrix._from_rows(ctx, self.parity, self.row_parities,
                                       self.col_parities, rows)

    def __matmul__(self, other):
        if self.shape[1] != other.shape[0] or self.col_parities != other.row_parities:
            raise ShapeMismatch(f"cannot compose {self.shape} with {other.shape}")
        if self.context != other.context:
            raise ShapeMismatch("contexts differ")
        rows = {}
        brows = other.rows
        for r, row in self.rows.items():
            acc = {}
            for k, a in row.items():
                brow = brows.get(k)
                if not brow:
                    continue
                for c, b in brow.items():
                    slot = acc.setdefault(c, {})
                    for e1, c1 in a.terms.items():
                        for e2, c2 in b.terms.items():
                            e = tuple(x + y for x, y in zip(e1, e2)) if e1 else e2
                            slot[e] = slot.get(e, 0) + c1 * c2
            out = {}
            for c, slot in acc.items():
                p = Polynomial._raw(self.context, slot)
                if p:
                    out[c] = p
            if out:
                rows[r] = out
        return GradedMatrix._from_rows(self.context, (self.parity + other.parity) % 2,
                                       self.row_parities, other.col_parities, rows)

    def bracket(self, other):
        """Graded commutator ab - (-1)^{|a||b|} ba."""
        ab = self @ other
        ba = other @ self
        return ab + ba if (self.parity and other.parity) else ab - ba

    def power(self, k):
        out = GradedMatrix.identity(self.context, self.row_parities)
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self):
        rows = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return GradedMatrix._from_rows(self.context, self.parity, self.col_parities,
                                       self.row_parities, rows)

    def to_context(self, ctx):
        return self.map_entries(lambda v: v.to_context(ctx), context=ctx)

    def partial(self, name):
        return self.map_entries(lambda v: v.partial(name))

    def permuted(self, perm, signs=None):
        """Conjugate by the signed permutation sending basis vector i to signs[i]*e_perm[i]."""
        n = self.shape[0]
        if self.shape[1] != n:
            raise ShapeMismatch("permuted expects a square matrix")
        signs = signs or [1] * n
        rp = [0] * n
        for i, p in enumerate(perm):
            rp[p] = self.row_parities[i]
        rows = {}
        for r, row in self.rows.items():
            out = rows.setdefault(perm[r], {})
            for c, v in row.items():
                out[perm[c]] = v if signs[r] * signs[c] > 0 else -v
        return GradedMatrix._from_rows(self.context, self.parity, tuple(rp), tuple(rp), rows)

    def __repr__(self):
        return f"GradedMatrix({self.shape}, parity={self.parity}, nnz={sum(map(len, self.rows.values()))})"


def kron(A, B):
    """A (x) B on the basis (a, b) in lexicographic order, with (A (x) B)(a (x) b) = (-1)^{|B||a|} Aa (x) Bb."""
    if A.context != B.context:
        raise ShapeMismatch("contexts differ")
    nb_r, nb_c = B.shape
    rp = tuple((p + q) % 2 for p in A.row_parities for q in B.row_parities)
    cp = tuple((p + q) % 2 for p in A.col_parities for q in B.col_parities)
    rows = {}
    for r1, row1 in A.rows.items():
        for c1, a in row1.items():
            sign = -1 if (B.parity and A.col_parities[c1]) else 1
            for r2, row2 in B.rows.items():
                target = rows.setdefault(r1 * nb_r + r2, {})
                for c2, b in row2.items():
                    v = a * b
                    if sign < 0:
                        v = -v
                    key = c1 * nb_c + c2
                    w = target.get(key)
                    v = v if w is None else w + v
                    if v:
                        target[key] = v
                    else:
                        target.pop(key, None)
    rows = {r: row for r, row in rows.items() if row}
    return GradedMatrix._from_rows(A.context, (A.parity + B.parity) % 2, rp, cp, rows)


def identity_like(parities, context):
    return GradedMatrix.identity(context, parities)


@dataclass(frozen=True)
class MatrixFactorisation:
    potential: Polynomial
    d: GradedMatrix

    @property
    def context(self):
        return self.d.context

    @property
    def parities(self):
        return self.d.row_parities

    @property
    def rank(self):
        return self.d.shape[0]

    def identity(self):
        return GradedMatrix.identity(self.context, self.parities)


def mf_validate(d, W):
    if d.shape[0] != d.shape[1] or d.row_parities != d.col_parities:
        raise ShapeMismatch("a factorisation needs a square matrix with equal parity vectors")
    if d.parity != 1:
        raise ParityViolation("the differential must be odd")
    d._check()
    if W.context != d.context:
        W = W.to_context(d.context)
    diff = d @ d - GradedMatrix.identity(d.context, d.row_parities, W)
    bad = diff.first_nonzero()
    if bad is not None:
        (r, c), v = bad
        raise NotAFactorisation(f"d^2 - W*I has entry ({r}, {c}) = {v}", entry=(r, c))
    return MatrixFactorisation(W, d)


def mf_shift(X):
    d = X.d
    flipped = tuple(1 - p for p in d.row_parities)
    rows = {r: {c: -v for c, v in row.items()} for r, row in d.rows.items()}
    nd = GradedMatrix._from_rows(d.context, 1, flipped, flipped, rows)
    return mf_validate(nd, X.potential)


def mf_dual(X):
    # d_dual(xi) = -(-1)^{|xi|} xi . d, i.e. d_dual[c][a] = -(-1)^{|a|} d[a][c]
    d = X.d
    par = d.row_parities
    rows = {}
    for a, row in d.rows.items():
        for c, v in row.items():
            rows.setdefault(c, {})[a] = v if par[a] else -v
    nd = GradedMatrix._from_rows(d.context, 1, par, par, rows)
    return mf_validate(nd, -X.potential)


def dual_sign_identity(X):
    """The isomorphism X -> dual(dual(X)), diag((-1)^{|a|})."""
    par = X.parities
    data = {(a, a): (-1 if p else 1) for a, p in enumerate(par)}
    return GradedMatrix(X.context, 0, par, par, data)


def mf_tensor(Y, X):
    ctx = Y.context.union(X.context)
    dy = Y.d.to_context(ctx)
    dx = X.d.to_context(ctx)
    iy = GradedMatrix.identity(ctx, Y.parities)
    ix = GradedMatrix.identity(ctx, X.parities)
    d = kron(dy, ix) + kron(iy, dx)
    W = Y.potential.to_context(ctx) + X.potential.to_context(ctx)
    return mf_validate(d, W)


def tensor_maps(psi, phi):
    ctx = psi.context.union(phi.context)
    return kron(psi.to_context(ctx), phi.to_context(ctx))


def mf_partial(X, name):
    return X.d.partial(name)


def is_closed(phi, source, target):
    bracket = target.d @ phi
    other = phi @ source.d
    diff = bracket + other if phi.parity else bracket - other
    return diff.is_zero()


def homotopy_bracket(h, source, target):
    """d_target h - (-1)^{|h|} h d_source."""
    a = target.d @ h
    b = h @ source.d
    return a + b if h.parity else a - b


@dataclass(frozen=True)
class HomotopyWitness:
    h: GradedMatrix
    bound: int


def default_degree_cap(phi, source, target):
    deg = max(source.potential.degree(), target.potential.degree(), 0)
    return max(phi.max_degree(), 0) + deg + 2


def _monomials_up_to(nvars, degree):
    mons = [e for e in product(range(degree + 1), repeat=nvars) if sum(e) <= degree]
    mons.sort(key=order_key)
    return mons


def null_homotopy(phi, source, target, degree_cap=None):
    """Find h with d_target h - (-1)^{|h|} h d_source = phi, entries of degree <= D.

    D escalates from the maximum entry degree of phi to degree_cap.  Raises
    NotClosed if phi is not closed and UnknownAtBound if no h exists at the cap.
    """
    if not is_closed(phi, source, target):
        raise NotClosed("the map to be null-homotopic is not closed")
    hpar = (phi.parity + 1) % 2
    rp, cp = phi.row_parities, phi.col_parities
    ctx = phi.context
    if phi.is_zero():
        return HomotopyWitness(GradedMatrix.zero(ctx, hpar, rp, cp), 0)
    if degree_cap is None:
        degree_cap = default_degree_cap(phi, source, target)
    start = max(phi.max_degree(), 0)
    sign = 1 if hpar else -1  # h d_source enters with -(-1)^{|h|}
    dt, ds = target.d, source.d
    dt_cols = {}
    for r, row in dt.rows.items():
        for k, v in row.items():
            dt_cols.setdefault(k, []).append((r, v))
    nv = ctx.nvars
    for D in range(start, max(degree_cap, start) + 1):
        mons = _monomials_up_to(nv, D)
        slots = [(r, c) for r in range(len(rp)) for c in range(len(cp))
                 if (rp[r] + cp[c]) % 2 == hpar]
        unknowns = [(r, c, e) for (r, c) in slots for e in mons]
        eq_index = {}
        cols = {}

        def eq(key):
            i = eq_index.get(key)
            if i is None:
                i = eq_index[key] = len(eq_index)
            return i

        for u, (r0, c0, e) in enumerate(unknowns):
            col = {}
            for r, v in dt_cols.get(r0, ()):
                for ve, vc in v.terms.items():
                    mono = tuple(a + b for a, b in zip(ve, e))
                    k = eq((r, c0, mono))
                    col[k] = col.get(k, 0) + vc
            for c, v in ds.rows.get(c0, {}).items():
                for ve, vc in v.terms.items():
                    mono = tuple(a + b for a, b in zip(ve, e))
                    k = eq((r0, c, mono))
                    col[k] = col.get(k, 0) + sign * vc
            cols[u] = col
        rhs = {}
        for (r, c), v in phi.items():
            for ve, vc in v.terms.items():
                rhs[eq((r, c, ve))] = vc
        rows = {}
        for u, col in cols.items():
            for k, v in col.items():
                if v:
                    rows.setdefault(k, {})[u] = v
        sol = linalg.solve(rows, len(eq_index), len(unknowns), rhs)
        if sol is None:
            continue
        data = {}
        for u, val in sol.items():
            r, c, e = unknowns[u]
            data.setdefault((r, c), {})[e] = val
        h = GradedMatrix(ctx, hpar, rp, cp,
                         {rc: Polynomial(ctx, t) for rc, t in data.items()})
        if homotopy_bracket(h, source, target) != phi:
            raise AssertionError("null-homotopy witness failed re-verification")
        return HomotopyWitness(h, D)
    raise UnknownAtBound(degree_cap)
