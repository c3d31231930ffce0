"""Plain-text problem files and matrix serialization.

One statement per line; '#' starts a comment; blank lines are ignored.

    variables {
      x =
      y = y
      z =
    }
    potentials {
      W = 0
      V = y^3
      U = 0
    }
    factorisation X {          # X factorises V - W, Y factorises U - V
      rank = 2
      parity = 0 1
      matrix {
        0, y^2
        y, 0
      }
    }

A factorisation may set 'potential = ...' explicitly (required for names
other than X and Y).  'clifford NAME' blocks hold a parity vector and named
odd matrix blocks; 'idempotent NAME' blocks hold one even matrix block.
'matrix NAME' blocks carry variables, parity, rows, cols and a data block;
they are the machine serialization format.
"""

from dataclasses import dataclass, field

from .mf import GradedMatrix, NotAFactorisation, mf_validate
from .ring import ParseError, VarContext, format_polynomial, parse_polynomial

GROUPS = ("x", "y", "z")


@dataclass
class Block:
    kind: str
    name: str
    line: int
    items: list = field(default_factory=list)


@dataclass
class ProblemFile:
    groups: dict
    potentials: dict
    factorisations: dict
    clifford: dict
    idempotents: dict
    matrices: dict

    @property
    def context(self):
        names = []
        for g in self.groups.values():
            names.extend(g)
        return VarContext(tuple(names))

    def factorisation_context(self, name):
        return self.factorisations[name].context


def _strip(text):
    k = text.find("#")
    return text if k < 0 else text[:k]


def _tokenize(text):
    """Nested blocks of (line, column, statement) and Block items."""
    root = Block("root", "", 0)
    stack = [root]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw).rstrip()
        body = line.strip()
        if not body:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if body.endswith("{"):
            head = body[:-1].split()
            if not head or len(head) > 2:
                raise ParseError("block header must be 'kind [name] {'", lineno, col)
            blk = Block(head[0], head[1] if len(head) == 2 else "", lineno)
            stack[-1].items.append(blk)
            stack.append(blk)
        elif body == "}":
            if len(stack) == 1:
                raise ParseError("unbalanced '}'", lineno, col)
            stack.pop()
        else:
            stack[-1].items.append((lineno, col, body))
    if len(stack) > 1:
        blk = stack[-1]
        raise ParseError(f"block '{blk.kind}' is not closed", blk.line, 1)
    return root


def _assignment(item):
    lineno, col, body = item
    if "=" not in body:
        raise ParseError("expected 'key = value'", lineno, col)
    key, value = body.split("=", 1)
    vcol = col + len(key) + 1 + (len(value) - len(value.lstrip()))
    return key.strip(), value.strip(), lineno, vcol


def _parities(value, lineno, col):
    out = []
    for k, tok in enumerate(value.split()):
        if tok not in ("0", "1"):
            raise ParseError(f"parity must be 0 or 1, found {tok!r}", lineno, col)
        out.append(int(tok))
    return tuple(out)


def _rows(block, ctx):
    rows = []
    for item in block.items:
        if isinstance(item, Block):
            raise ParseError("nested block inside a matrix", item.line, 1)
        lineno, col, body = item
        entries = []
        start = 0
        for piece in body.split(","):
            offset = body.index(piece, start) if piece else start
            start = offset + len(piece) + 1
            text = piece.strip()
            pcol = col + offset + (len(piece) - len(piece.lstrip()))
            entries.append(parse_polynomial(text, ctx, lineno, pcol))
        rows.append(entries)
    return rows


def _matrix(block, ctx, parity, rp, cp):
    rows = _rows(block, ctx)
    if len(rows) != len(rp) or any(len(r) != len(cp) for r in rows):
        raise ParseError(f"matrix must be {len(rp)} x {len(cp)}", block.line, 1)
    try:
        return GradedMatrix.from_dense(ctx, parity, rp, cp, rows)
    except ValueError as exc:
        raise ParseError(str(exc), block.line, 1) from None


def _groups(block):
    groups = {}
    for item in block.items:
        if isinstance(item, Block):
            raise ParseError("nested block inside variables", item.line, 1)
        key, value, lineno, col = _assignment(item)
        names = tuple(v.strip() for v in value.split(",") if v.strip())
        for n in names:
            if not n.isidentifier():
                raise ParseError(f"bad variable name {n!r}", lineno, col)
        groups[key] = names
    for g in GROUPS:
        groups.setdefault(g, ())
    return groups


def _default_potential(name, pots, ctx):
    W, V, U = (pots.get(k, ctx.zero()) for k in ("W", "V", "U"))
    if name == "X":
        return V - W
    if name == "Y":
        return U - V
    return None


def parse_problem(text):
    root = _tokenize(text)
    groups, pots_raw = None, []
    blocks = {"factorisation": [], "clifford": [], "idempotent": [], "matrix": []}
    for item in root.items:
        if not isinstance(item, Block):
            raise ParseError("statement outside a block", item[0], item[1])
        if item.kind == "variables":
            groups = _groups(item)
        elif item.kind == "potentials":
            pots_raw = item.items
        elif item.kind in blocks:
            blocks[item.kind].append(item)
        else:
            raise ParseError(f"unknown block '{item.kind}'", item.line, 1)
    if groups is None:
        groups = {g: () for g in GROUPS}
    names = [n for g in groups.values() for n in g]
    if len(set(names)) != len(names):
        raise ParseError("a variable is declared in two groups", 1, 1)
    ctx = VarContext(tuple(names))
    pots = {}
    for item in pots_raw:
        if isinstance(item, Block):
            raise ParseError("nested block inside potentials", item.line, 1)
        key, value, lineno, col = _assignment(item)
        pots[key] = parse_polynomial(value, ctx, lineno, col)
    facs = {}
    for blk in blocks["factorisation"]:
        facs[blk.name] = _factorisation(blk, ctx, pots)
    cliff = {blk.name: _operator_set(blk, ctx) for blk in blocks["clifford"]}
    idem = {}
    for blk in blocks["idempotent"]:
        ops = _operator_set(blk, ctx)
        if len(ops) != 1:
            raise ParseError("an idempotent block holds one matrix", blk.line, 1)
        idem[blk.name] = next(iter(ops.values()))
    mats = {blk.name: _matrix_block(blk, ctx) for blk in blocks["matrix"]}
    return ProblemFile(groups, pots, facs, cliff, idem, mats)


def _settings(block):
    opts, subs = {}, []
    for item in block.items:
        if isinstance(item, Block):
            subs.append(item)
        else:
            key, value, lineno, col = _assignment(item)
            opts[key] = (value, lineno, col)
    return opts, subs


def _factorisation(blk, ctx, pots):
    opts, subs = _settings(blk)
    if "parity" not in opts:
        raise ParseError(f"factorisation {blk.name} needs a parity vector", blk.line, 1)
    par = _parities(*opts["parity"])
    if "rank" in opts:
        value, lineno, col = opts["rank"]
        if not value.isdigit() or int(value) != len(par):
            raise ParseError("rank disagrees with the parity vector", lineno, col)
    if "potential" in opts:
        value, lineno, col = opts["potential"]
        W = parse_polynomial(value, ctx, lineno, col)
    else:
        W = _default_potential(blk.name, pots, ctx)
        if W is None:
            raise ParseError(f"factorisation {blk.name} needs a potential", blk.line, 1)
    mats = [s for s in subs if s.kind == "matrix"]
    if len(mats) != 1:
        raise ParseError(f"factorisation {blk.name} needs one matrix block", blk.line, 1)
    d = _matrix(mats[0], ctx, 1, par, par)
    keep = tuple(n for n in ctx.names if _mentions(d, W, n))
    sub = VarContext(keep)
    d = d.to_context(sub) if keep != ctx.names else d
    W = W.to_context(sub) if keep != ctx.names else W
    try:
        return mf_validate(d, W)
    except NotAFactorisation as exc:
        raise ParseError(f"factorisation {blk.name}: {exc}", mats[0].line, 1) from None


def _mentions(d, W, name):
    if name in W.variables():
        return True
    return any(name in v.variables() for _, v in d.items())


def _operator_set(blk, ctx):
    opts, subs = _settings(blk)
    if "parity" not in opts:
        raise ParseError(f"{blk.kind} {blk.name} needs a parity vector", blk.line, 1)
    par = _parities(*opts["parity"])
    out = {}
    for s in subs:
        if s.kind != "matrix":
            raise ParseError(f"unexpected block '{s.kind}'", s.line, 1)
        degree = 0 if blk.kind == "idempotent" else 1
        out[s.name or str(len(out))] = _matrix(s, ctx, degree, par, par)
    return out


def _matrix_block(blk, ctx):
    opts, subs = _settings(blk)
    names = ()
    if "variables" in opts:
        names = tuple(v.strip() for v in opts["variables"][0].split(",") if v.strip())
    mctx = VarContext(names)
    need = ("parity", "rows", "cols")
    for k in need:
        if k not in opts:
            raise ParseError(f"matrix {blk.name} needs '{k}'", blk.line, 1)
    value, lineno, col = opts["parity"]
    if value not in ("0", "1"):
        raise ParseError("parity must be 0 or 1", lineno, col)
    rp = _parities(*opts["rows"])
    cp = _parities(*opts["cols"])
    data = [s for s in subs if s.kind == "data"]
    if len(data) != 1:
        raise ParseError(f"matrix {blk.name} needs one data block", blk.line, 1)
    return _matrix(data[0], mctx, int(value), rp, cp)


def serialize(matrices, format="pretty"):
    """matrices: list of (name, GradedMatrix)."""
    out = []
    for name, M in matrices:
        out.append(pretty(name, M) if format == "pretty" else machine(name, M))
    return "".join(out)


def pretty(name, M):
    cells = [[format_polynomial(v) for v in row] for row in M.entries]
    width = max((len(c) for row in cells for c in row), default=1)
    lines = [f"{name} ({M.shape[0]}x{M.shape[1]}, parity {M.parity})"]
    for row in cells:
        lines.append("  " + "  ".join(c.rjust(width) for c in row))
    return "\n".join(lines) + "\n"


def machine(name, M):
    lines = [f"matrix {name} {{"]
    lines.append(f"  variables = {', '.join(M.context.names)}")
    lines.append(f"  parity = {M.parity}")
    lines.append(f"  rows = {' '.join(map(str, M.row_parities))}")
    lines.append(f"  cols = {' '.join(map(str, M.col_parities))}")
    lines.append("  data {")
    for row in M.entries:
        lines.append("    " + ", ".join(format_polynomial(v) for v in row))
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_matrices(text):
    """Inverse of serialize(..., 'machine'): list of (name, GradedMatrix)."""
    root = _tokenize(text)
    out = []
    for item in root.items:
        if not isinstance(item, Block) or item.kind != "matrix":
            raise ParseError("expected a matrix block", *(item[:2] if not isinstance(item, Block) else (item.line, 1)))
        out.append((item.name, _matrix_block(item, VarContext(()))))
    return out
