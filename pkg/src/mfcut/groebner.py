"""Gröbner bases with cofactors, standard monomials and t-adic expansions.

The t-expansion of f with respect to generators t_1..t_m writes
f = sum_beta t^beta r_beta with every r_beta a combination of standard
monomials.  Its first-order coefficients are the connection operators
d/dt_i used for Atiyah classes.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .ring import Polynomial, order_key


class NotFiniteDimensional(ValueError):
    pass


class ConnectionCheckFailed(ValueError):
    pass


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


@dataclass
class GroebnerBasis:
    generators: tuple
    basis: tuple
    cofactors: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def context(self):
        return self.generators[0].context

    @property
    def leading(self):
        return [b.leading()[0] for b in self.basis]

    def combination(self, coeffs):
        ctx = self.context
        total = ctx.zero()
        for c, g in zip(coeffs, self.generators):
            total = total + c * g
        return total


def _reduce(f, basis, cofs, m):
    """Division by the basis: (remainder, cofactors against the generators)."""
    ctx = f.context
    lts = [b.leading() for b in basis]
    quot = [dict() for _ in basis]
    rem = {}
    work = dict(f.terms)
    while work:
        e = max(work, key=order_key)
        c = work.pop(e)
        if c == 0:
            continue
        for k, (lt, lc) in enumerate(lts):
            if _divides(lt, e):
                s = _sub(e, lt)
                q = c / lc
                quot[k][s] = quot[k].get(s, 0) + q
                for be, bc in basis[k].terms.items():
                    t = tuple(x + y for x, y in zip(be, s))
                    if t == e:
                        continue
                    v = work.get(t, 0) - q * bc
                    if v:
                        work[t] = v
                    else:
                        work.pop(t, None)
                break
        else:
            rem[e] = c
    out = [ctx.zero() for _ in range(m)]
    for k, q in enumerate(quot):
        if not q:
            continue
        qp = Polynomial._raw(ctx, q)
        for i in range(m):
            if cofs[k][i]:
                out[i] = out[i] + qp * cofs[k][i]
    return Polynomial._raw(ctx, rem), out


def buchberger(generators):
    generators = tuple(generators)
    if not generators:
        raise ValueError("buchberger needs at least one generator")
    ctx = generators[0].context
    m = len(generators)
    basis, cofs = [], []
    for i, g in enumerate(generators):
        if g.context != ctx:
            raise ValueError("generators must share a context")
        if g:
            unit = [ctx.zero()] * m
            unit[i] = ctx.one()
            basis.append(g)
            cofs.append(unit)
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        i, j = pairs.pop(0)
        ei, ci = basis[i].leading()
        ej, cj = basis[j].leading()
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        l = _lcm(ei, ej)
        mi = ctx.monomial(_sub(l, ei), 1 / ci)
        mj = ctx.monomial(_sub(l, ej), 1 / cj)
        s = mi * basis[i] - mj * basis[j]
        scof = [mi * a - mj * b for a, b in zip(cofs[i], cofs[j])]
        r, rc = _reduce(s, basis, cofs, m)
        if r:
            new = len(basis)
            basis.append(r)
            cofs.append([a - b for a, b in zip(scof, rc)])
            pairs.extend((k, new) for k in range(new))
    # minimal basis
    keep = []
    for k, b in enumerate(basis):
        lk = b.leading()[0]
        dominated = False
        for o, c in enumerate(basis):
            if o == k:
                continue
            lo = c.leading()[0]
            if _divides(lo, lk) and (lo != lk or o < k):
                dominated = True
                break
        if not dominated:
            keep.append(k)
    basis = [basis[k] for k in keep]
    cofs = [cofs[k] for k in keep]
    # interreduce and make monic
    for k in range(len(basis)):
        others = [b for o, b in enumerate(basis) if o != k]
        ocofs = [c for o, c in enumerate(cofs) if o != k]
        lt, lc = basis[k].leading()
        head = ctx.monomial(lt, lc)
        tail = basis[k] - head
        r, rc = _reduce(tail, others, ocofs, m) if others else (tail, [ctx.zero()] * m)
        basis[k] = (head + r).scale(1 / lc)
        cofs[k] = [(a - b).scale(1 / lc) for a, b in zip(cofs[k], rc)]
    order = sorted(range(len(basis)), key=lambda k: order_key(basis[k].leading()[0]))
    return GroebnerBasis(generators, tuple(basis[k] for k in order),
                         tuple(tuple(cofs[k]) for k in order))


def normal_form(f, G):
    return _reduce(f, list(G.basis), [list(c) for c in G.cofactors], len(G.generators))


def standard_monomials(G):
    cached = G._cache.get("standard")
    if cached is not None:
        return list(cached)
    n = G.context.nvars
    lts = G.leading
    bounds = []
    for v in range(n):
        pure = [lt[v] for lt in lts if lt[v] > 0 and all(lt[u] == 0 for u in range(n) if u != v)]
        if not pure:
            name = G.context.names[v]
            raise NotFiniteDimensional(
                f"standard monomials include every power of {name}; not a potential")
        bounds.append(min(pure))
    mons = [e for e in product(*(range(b) for b in bounds))
            if not any(_divides(lt, e) for lt in lts)]
    mons.sort(key=order_key)
    G._cache["standard"] = tuple(mons)
    return mons


@dataclass(frozen=True)
class TExpansion:
    coefficients: dict

    def __getitem__(self, beta):
        return self.coefficients[tuple(beta)]

    def get(self, beta, default=None):
        return self.coefficients.get(tuple(beta), default)

    def reassemble(self, generators):
        ctx = generators[0].context
        total = ctx.zero()
        for beta, r in self.coefficients.items():
            term = r
            for g, k in zip(generators, beta):
                if k:
                    term = term * g ** k
            total = total + term
        return total


_MAX_DEPTH = 256


def _expand_monomial(e, G, depth=0):
    """{beta: {standard exponent: coefficient}} for the monomial y^e."""
    cache = G._cache.setdefault("texp", {})
    hit = cache.get(e)
    if hit is not None:
        return hit
    if depth > _MAX_DEPTH:
        raise ConnectionCheckFailed(f"t-expansion of monomial {e} does not terminate")
    ctx = G.context
    m = len(G.generators)
    r, cof = normal_form(ctx.monomial(e), G)
    out = {}
    if r:
        out[(0,) * m] = dict(r.terms)
    for i, c in enumerate(cof):
        for ce, cc in c.terms.items():
            sub = _expand_monomial(ce, G, depth + 1)
            for beta, coeffs in sub.items():
                b = list(beta)
                b[i] += 1
                b = tuple(b)
                slot = out.setdefault(b, {})
                for se, sc in coeffs.items():
                    v = slot.get(se, 0) + cc * sc
                    if v:
                        slot[se] = v
                    else:
                        slot.pop(se)
                if not slot:
                    del out[b]
    cache[e] = out
    return out


def expand_terms(f, G):
    """Raw expansion {beta: {standard exponent: coefficient}}, linear in f."""
    standard_monomials(G)
    out = {}
    for e, c in f.terms.items():
        for beta, coeffs in _expand_monomial(e, G).items():
            slot = out.setdefault(beta, {})
            for se, sc in coeffs.items():
                v = slot.get(se, 0) + c * sc
                if v:
                    slot[se] = v
                else:
                    slot.pop(se)
            if not slot:
                del out[beta]
    return out


def t_expand(f, G):
    ctx = G.context
    raw = expand_terms(f, G)
    keys = sorted(raw, key=lambda b: (sum(b), b))
    return TExpansion({b: Polynomial._raw(ctx, raw[b]) for b in keys})


def t_coeff(f, beta, G):
    ctx = G.context
    raw = expand_terms(f, G)
    return Polynomial._raw(ctx, raw.get(tuple(beta), {}))


def dt_coeff(f, i, G):
    beta = [0] * len(G.generators)
    beta[i] = 1
    return t_coeff(f, beta, G)


def connection_check(G, max_degree):
    """Leibniz/duality check of the expansion on all monomials up to max_degree."""
    ctx = G.context
    m = len(G.generators)
    n = ctx.nvars
    mons = [e for e in product(range(max_degree + 1), repeat=n) if sum(e) <= max_degree]
    for e in sorted(mons, key=order_key):
        mono = ctx.monomial(e)
        base = expand_terms(mono, G)
        for j, t in enumerate(G.generators):
            shifted = expand_terms(t * mono, G)
            for beta, coeffs in shifted.items():
                if beta[j] == 0:
                    raise ConnectionCheckFailed(
                        f"t-expansion of t{j + 1}*{mono} has a term at {beta}")
                prev = list(beta)
                prev[j] -= 1
                if base.get(tuple(prev), {}) != coeffs:
                    raise ConnectionCheckFailed(
                        f"t-expansion of t{j + 1}*{mono} disagrees at {beta}")
            for beta, coeffs in base.items():
                b = list(beta)
                b[j] += 1
                if tuple(b) not in shifted:
                    raise ConnectionCheckFailed(
                        f"t-expansion of t{j + 1}*{mono} misses {tuple(b)}")
    return True
