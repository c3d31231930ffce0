"""Exact sparse multivariate polynomials over the rationals.

A polynomial lives in a VarContext, an ordered tuple of variable names.
Monomials are exponent tuples compared degree-first, then lexicographically
in the declared variable order.  Terms are kept in descending order with no
zero coefficients, so equal polynomials have identical representations.
"""

from dataclasses import dataclass
from fractions import Fraction

MAX_EXPONENT = 2**63 - 1


class ContextMismatch(ValueError):
    pass


class UnknownVariable(KeyError):
    pass


class ExponentOverflow(OverflowError):
    pass


class ParseError(ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class VarContext:
    names: tuple

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if any(not isinstance(n, str) or not n for n in names):
            raise ValueError("variable names must be nonempty strings")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")

    @property
    def nvars(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def __contains__(self, name):
        return name in self.names

    def union(self, other):
        extra = tuple(n for n in other.names if n not in self.names)
        return VarContext(self.names + extra)

    def restrict(self, names):
        keep = set(names)
        return VarContext(tuple(n for n in self.names if n in keep))

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        return Polynomial(self, {(0,) * self.nvars: Fraction(c)})

    def var(self, name):
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def monomial(self, exps, coeff=1):
        return Polynomial(self, {tuple(exps): Fraction(coeff)})

    def parse(self, text):
        return parse_polynomial(text, self)


def order_key(e):
    return (sum(e), e)


def _sorted_terms(terms):
    items = [(e, c) for e, c in terms.items() if c != 0]
    items.sort(key=lambda ec: order_key(ec[0]), reverse=True)
    return dict(items)


class Polynomial:
    __slots__ = ("context", "terms", "_hash")

    def __init__(self, context, terms):
        n = context.nvars
        clean = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match {n} variables")
            if any(k < 0 or k > MAX_EXPONENT for k in e):
                raise ExponentOverflow(f"exponent {e} out of range")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.context = context
        self.terms = _sorted_terms(clean)
        self._hash = None

    @classmethod
    def _raw(cls, context, terms):
        p = cls.__new__(cls)
        p.context = context
        p.terms = _sorted_terms(terms)
        p._hash = None
        return p

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.context != self.context:
                raise ContextMismatch(f"{self.context.names} vs {other.context.names}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.const(other)
        return NotImplemented

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.context.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.context, tuple(self.terms.items())))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial._raw(self.context, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.context, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return Polynomial._raw(self.context, out)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return self.context.zero()
        return Polynomial._raw(self.context, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        for e in out:
            if any(k > MAX_EXPONENT for k in e):
                raise ExponentOverflow(f"exponent {e} out of range")
        return Polynomial._raw(self.context, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.context.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def partial(self, name):
        i = self.context.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(self.context, out)

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name):
        i = self.context.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def leading(self):
        for e, c in self.terms.items():
            return e, c
        raise ValueError("zero polynomial has no leading term")

    def coeff(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_value(self):
        """The rational value if the polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            e, c = self.leading()
            if not any(e):
                return c
        return None

    def variables(self):
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.context.names[i] for i in sorted(used))

    def to_context(self, ctx):
        index = [ctx.index(n) if n in ctx else None for n in self.context.names]
        out = {}
        for e, c in self.terms.items():
            f = [0] * ctx.nvars
            for i, k in enumerate(e):
                if k:
                    if index[i] is None:
                        raise ContextMismatch(
                            f"variable {self.context.names[i]} not in {ctx.names}")
                    f[index[i]] = k
            out[tuple(f)] = c
        return Polynomial._raw(ctx, out)

    def split(self, names):
        """Group terms by the exponents of `names`: {exps_on_names: rest}."""
        pos = [self.context.index(n) for n in names]
        groups = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in pos)
            rest = list(e)
            for i in pos:
                rest[i] = 0
            g = groups.setdefault(key, {})
            g[tuple(rest)] = c
        return {k: Polynomial._raw(self.context, g) for k, g in groups.items()}

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


def _format_coeff(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(e, names):
    parts = []
    for k, n in zip(e, names):
        if k == 1:
            parts.append(n)
        elif k > 1:
            parts.append(f"{n}^{k}")
    return "*".join(parts)


def format_polynomial(p):
    if not p.terms:
        return "0"
    pieces = []
    for e, c in p.terms.items():
        mono = format_monomial(e, p.context.names)
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        sign = "-" if c < 0 else "+"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces)


def poly_combine(op, f, g):
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scalar-mul":
        if isinstance(g, Polynomial):
            raise TypeError("scalar-mul expects a rational scalar")
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


def poly_partial(f, name):
    return f.partial(name)


class _Lexer:
    def __init__(self, text, line=1, column=1):
        self.tokens = []
        ln, col = line, column
        i = 0
        while i < len(text):
            ch = text[i]
            if ch == "\n":
                ln, col = ln + 1, 1
                i += 1
                continue
            if ch.isspace():
                i += 1
                col += 1
                continue
            start = (ln, col)
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", text[i:j], start))
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("name", text[i:j], start))
            elif ch in "+-*/^()":
                j = i + 1
                self.tokens.append((ch, ch, start))
            else:
                raise ParseError(f"unexpected character {ch!r}", *start)
            col += j - i
            i = j
        self.tokens.append(("end", "", (ln, col)))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind}, found {what}", *tok[2])
        self.pos += 1
        return tok


class _Parser:
    # expr := ['-'|'+'] term (('+'|'-') term)*
    # term := factor (('*'|'/') factor)*
    # factor := atom ('^' int)?
    # atom := int | name | '(' expr ')'
    def __init__(self, text, ctx, line=1, column=1):
        self.lex = _Lexer(text, line, column)
        self.ctx = ctx

    def parse(self):
        if self.lex.peek()[0] == "end":
            raise ParseError("empty polynomial", *self.lex.peek()[2])
        p = self.expr()
        tok = self.lex.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", *tok[2])
        return p

    def expr(self):
        tok = self.lex.peek()
        neg = False
        if tok[0] in ("+", "-"):
            self.lex.take()
            neg = tok[0] == "-"
        p = self.term()
        if neg:
            p = -p
        while self.lex.peek()[0] in ("+", "-"):
            op = self.lex.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.lex.peek()[0] in ("*", "/"):
            op, _, where = self.lex.take()
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                c = q.constant_value()
                if c is None or c == 0:
                    raise ParseError("division only by nonzero constants", *where)
                p = p.scale(1 / c)
        return p

    def factor(self):
        p = self.atom()
        if self.lex.peek()[0] == "^":
            self.lex.take()
            tok = self.lex.take("int")
            k = int(tok[1])
            if k > MAX_EXPONENT:
                raise ParseError("exponent too large", *tok[2])
            p = p ** k
        return p

    def atom(self):
        kind, value, where = self.lex.peek()
        if kind == "int":
            self.lex.take()
            return self.ctx.const(int(value))
        if kind == "name":
            self.lex.take()
            if value not in self.ctx:
                raise ParseError(f"undeclared variable {value!r}", *where)
            return self.ctx.var(value)
        if kind == "(":
            self.lex.take()
            p = self.expr()
            self.lex.take(")")
            return p
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", *where)


def parse_polynomial(text, ctx, line=1, column=1):
    return _Parser(text, ctx, line, column).parse()
