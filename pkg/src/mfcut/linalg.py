"""Exact rational linear algebra on sparse row dictionaries, via sympy's DomainMatrix."""

from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_qq(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _to_fraction(q):
    return Fraction(int(q.numerator), int(q.denominator))


def _domain(rows, nrows, ncols):
    data = {}
    for i, row in rows.items():
        r = {j: _to_qq(c) for j, c in row.items() if c}
        if r:
            data[i] = r
    return DomainMatrix(data, (nrows, ncols), QQ)


def rank(rows, nrows, ncols):
    """Rank of the matrix given as {row: {col: value}}."""
    if nrows == 0 or ncols == 0:
        return 0
    return _domain(rows, nrows, ncols).rank()


def dense_rank(matrix):
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    rows = {i: {j: c for j, c in enumerate(r) if c} for i, r in enumerate(matrix)}
    return rank(rows, nrows, ncols)


def solve(rows, nrows, ncols, rhs):
    """A particular solution of A u = rhs as {col: value}, or None if inconsistent.

    rhs is {row: value}; free variables are set to zero.
    """
    if ncols == 0:
        return {} if not any(rhs.values()) else None
    aug = {i: dict(r) for i, r in rows.items()}
    for i, c in rhs.items():
        if c:
            aug.setdefault(i, {})[ncols] = c
    if nrows == 0:
        return {}
    red, pivots = _domain(aug, nrows, ncols + 1).rref()
    if ncols in pivots:
        return None
    sdm = red.rep.to_sdm() if hasattr(red.rep, "to_sdm") else red.rep
    out = {}
    for i, p in enumerate(pivots):
        row = sdm.get(i, {})
        v = row.get(ncols)
        if v:
            out[p] = _to_fraction(v)
    return out


def nullspace(rows, nrows, ncols):
    """A basis of {u : A u = 0} as a list of {col: value} dictionaries."""
    if ncols == 0:
        return []
    if nrows == 0:
        return [{j: Fraction(1)} for j in range(ncols)]
    red, pivots = _domain(rows, nrows, ncols).rref()
    sdm = red.rep.to_sdm() if hasattr(red.rep, "to_sdm") else red.rep
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = {f: Fraction(1)}
        for i, p in enumerate(pivots):
            v = sdm.get(i, {}).get(f)
            if v:
                vec[p] = -_to_fraction(v)
        basis.append(vec)
    return basis


def row_space_basis(vectors, ncols):
    """Reduced echelon basis of the span of the given {col: value} vectors."""
    if not vectors:
        return []
    rows = {i: v for i, v in enumerate(vectors)}
    red, pivots = _domain(rows, len(vectors), ncols).rref()
    sdm = red.rep.to_sdm() if hasattr(red.rep, "to_sdm") else red.rep
    return [{j: _to_fraction(c) for j, c in sdm.get(i, {}).items()} for i in range(len(pivots))]
