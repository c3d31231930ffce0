"""Clifford algebras acting on the spinor representation.

The spinor module on n generators is the exterior algebra on theta_1..theta_n.
Its basis is the list of subsets of {1..n} ordered by cardinality, then
lexicographically, so index 0 is the empty set.  The wedge theta_i and the
contraction theta_i^* are odd operators satisfying the Clifford relations.
"""

from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .mf import GradedMatrix, ShapeMismatch
from .ring import VarContext

EMPTY = VarContext(())


def spinor_basis(n):
    return [s for k in range(n + 1) for s in combinations(range(1, n + 1), k)]


@dataclass(frozen=True)
class SpinorBasis:
    n: int
    elements: tuple

    @property
    def parities(self):
        return tuple(len(s) % 2 for s in self.elements)

    def index(self, subset):
        return self.elements.index(tuple(sorted(subset)))


@dataclass(frozen=True)
class CliffordOps:
    n: int
    basis: SpinorBasis
    wedge: tuple
    contract: tuple

    @property
    def parities(self):
        return self.basis.parities

    @property
    def context(self):
        return self.wedge[0].context if self.wedge else EMPTY


def supercommutator(A, B):
    if A.shape[1] != B.shape[0] or B.shape[1] != A.shape[0]:
        raise ShapeMismatch(f"cannot bracket {A.shape} with {B.shape}")
    return A.bracket(B)


def _wedge_matrix(i, basis, ctx):
    pos = {s: k for k, s in enumerate(basis.elements)}
    par = basis.parities
    data = {}
    for k, s in enumerate(basis.elements):
        if i in s:
            continue
        sign = -1 if sum(1 for x in s if x < i) % 2 else 1
        data[(pos[tuple(sorted(s + (i,)))], k)] = sign
    return GradedMatrix(ctx, 1, par, par, {rc: ctx.const(v) for rc, v in data.items()})


def _contract_matrix(i, basis, ctx):
    pos = {s: k for k, s in enumerate(basis.elements)}
    par = basis.parities
    data = {}
    for k, s in enumerate(basis.elements):
        if i not in s:
            continue
        l = s.index(i) + 1
        sign = -1 if (l - 1) % 2 else 1
        data[(pos[tuple(x for x in s if x != i)], k)] = sign
    return GradedMatrix(ctx, 1, par, par, {rc: ctx.const(v) for rc, v in data.items()})


def check_relations(wedge, contract):
    """All graded brackets of the generators match the Clifford relations."""
    n = len(wedge)
    if not n:
        return True
    par = wedge[0].row_parities
    ctx = wedge[0].context
    one = GradedMatrix.identity(ctx, par)
    zero = GradedMatrix.zero(ctx, 0, par, par)
    for i in range(n):
        for j in range(n):
            if not supercommutator(contract[i], contract[j]).is_zero():
                return False
            if not supercommutator(wedge[i], wedge[j]).is_zero():
                return False
            expect = one if i == j else zero
            if supercommutator(contract[i], wedge[j]) != expect:
                return False
    return True


def spinor_ops(n, context=EMPTY):
    basis = SpinorBasis(n, tuple(spinor_basis(n)))
    wedge = tuple(_wedge_matrix(i, basis, context) for i in range(1, n + 1))
    contract = tuple(_contract_matrix(i, basis, context) for i in range(1, n + 1))
    if not check_relations(wedge, contract):
        raise AssertionError("spinor operators violate the Clifford relations")
    return CliffordOps(n, basis, wedge, contract)


def idempotents(ops):
    """(e_n, e_n_top): the words contract_1..contract_n wedge_n..wedge_1 and its mirror."""
    ctx = ops.context
    par = ops.parities
    e = GradedMatrix.identity(ctx, par)
    for i in range(ops.n):
        e = e @ ops.contract[i]
    for i in reversed(range(ops.n)):
        e = e @ ops.wedge[i]
    top = GradedMatrix.identity(ctx, par)
    for i in range(ops.n):
        top = top @ ops.wedge[i]
    for i in reversed(range(ops.n)):
        top = top @ ops.contract[i]
    last = len(par) - 1
    if e != GradedMatrix(ctx, 0, par, par, {(0, 0): 1}):
        raise AssertionError("e_n is not the projector onto the empty set")
    if top != GradedMatrix(ctx, 0, par, par, {(last, last): 1}):
        raise AssertionError("e_n_top is not the projector onto the full set")
    return e, top


def _flatten(M):
    n = M.shape[1]
    out = {}
    for (r, c), v in M.items():
        out[r * n + c] = v.constant_value()
    return out


def generated_algebra_dimension(generators):
    """Dimension of the unital algebra generated by constant square matrices."""
    if not generators:
        return 1
    ctx = generators[0].context
    par = generators[0].row_parities
    size = len(par) ** 2
    span = [GradedMatrix.identity(ctx, par)]
    vecs = [_flatten(span[0])]
    frontier = list(span)
    dim = 1
    while frontier:
        new = []
        for M in frontier:
            for g in generators:
                P = g @ M
                cand = vecs + [_flatten(P)]
                r = linalg.rank(dict(enumerate(cand)), len(cand), size)
                if r > dim:
                    dim = r
                    vecs.append(_flatten(P))
                    new.append(P)
        frontier = new
    return dim
