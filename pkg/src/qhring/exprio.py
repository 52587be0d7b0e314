"""Canonical expression serialization and parsing.

Grammar: integers, ``beta``, ``q``, ``t1..tN``, ``u1..uN`` (plus any extra
declared symbols), operators ``+ - * / ^`` and parentheses.  Polynomial terms
are emitted in ascending graded-lexicographic order with the variable order
beta < t1 < ... < tN < u1 < ... < uN, so identical values always serialize to
identical bytes.
"""

import re
from fractions import Fraction

from sympy.polys.domains import QQ

from .errors import QhError
from .qseries import QSeries


def _frac_str(fr):
    fr = Fraction(fr)
    if fr.denominator == 1:
        return str(fr.numerator)
    return "%d/%d" % (fr.numerator, fr.denominator)


def _poly_terms_sorted(ctx, poly):
    terms = []
    for exps, coeff in poly.terms():
        cf = Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff)))
        terms.append((sum(exps), tuple(-e for e in exps), cf))
    terms.sort(key=lambda t: (t[0], t[1]))
    return terms


def _poly_to_str(ctx, poly):
    gens = ctx.field.symbols
    parts = []
    for _, negexps, cf in _poly_terms_sorted(ctx, poly):
        factors = []
        for gi, ne in enumerate(negexps):
            e = -ne
            if e == 1:
                factors.append(str(gens[gi]))
            elif e > 1:
                factors.append("%s^%d" % (gens[gi], e))
        mag = abs(cf)
        if not factors:
            body = _frac_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_frac_str(mag)] + factors)
        sign = "-" if cf < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = []
    for i, (sign, body) in enumerate(parts):
        if i == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(sign + body)
    return "".join(out)


def _needs_parens(s):
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > 0:
            return True
        elif depth == 0 and ch in "*/^" :
            return True
    return False


def scalar_to_str(ctx, s):
    """Canonical string for one scalar of the given field mode."""
    if isinstance(s, (int, Fraction)):
        return _frac_str(s)
    if isinstance(s, complex):
        return repr(s)
    num = _poly_to_str(ctx, s.numer)
    if s.denom == 1:
        return num
    den = _poly_to_str(ctx, s.denom)
    num_s = "(%s)" % num if ("+" in num[1:] or "-" in num[1:]) else num
    den_s = "(%s)" % den if _needs_parens(den) else den
    return "%s/%s" % (num_s, den_s)


def qseries_to_str(series):
    """Canonical string for a q-series; only known coefficients appear."""
    ctx = series.ctx
    parts = []
    for i, c in enumerate(series.coeffs):
        if c == 0:
            continue
        cs = scalar_to_str(ctx, c)
        if i == 0:
            parts.append(cs)
            continue
        qs = "q" if i == 1 else "q^%d" % i
        if cs == "1":
            parts.append(qs)
        elif cs == "-1":
            parts.append("-" + qs)
        else:
            if _needs_parens(cs):
                cs = "(%s)" % cs
            parts.append("%s*%s" % (cs, qs))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.group(1):
            toks.append(("int", int(m.group(1))))
        elif m.group(2):
            toks.append(("name", m.group(2)))
        else:
            ch = m.group(3)
            if ch.strip():
                toks.append((ch, ch))
    toks.append(("end", None))
    return toks


class _Parser:
    def __init__(self, ctx, toks):
        self.ctx = ctx
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def _as_pair(self, a, b):
        if isinstance(a, QSeries) or isinstance(b, QSeries):
            if not isinstance(a, QSeries):
                a = QSeries.const(self.ctx, a)
            if not isinstance(b, QSeries):
                b = QSeries.const(self.ctx, b)
        return a, b

    def expr(self):
        val = self.term()
        while self.peek() in "+-":
            op = self.next()[0]
            rhs = self.term()
            a, b = self._as_pair(val, rhs)
            val = a + b if op == "+" else a - b
        return val

    def term(self):
        val = self.factor()
        while self.peek() in "*/":
            op = self.next()[0]
            rhs = self.factor()
            a, b = self._as_pair(val, rhs)
            val = a * b if op == "*" else a / b
        return val

    def factor(self):
        if self.peek() == "-":
            self.next()
            return -self.factor()
        if self.peek() == "+":
            self.next()
            return self.factor()
        base = self.atom()
        if self.peek() == "^":
            self.next()
            kind, v = self.next()
            neg = False
            if kind == "-":
                neg = True
                kind, v = self.next()
            if kind != "int":
                raise QhError("exponent must be an integer")
            return base ** (-v if neg else v)
        return base

    def atom(self):
        kind, v = self.next()
        if kind == "int":
            return self.ctx.from_int(v)
        if kind == "name":
            return self._resolve(v)
        if kind == "(":
            val = self.expr()
            if self.next()[0] != ")":
                raise QhError("unbalanced parentheses")
            return val
        raise QhError("unexpected token %r" % (v,))

    def _resolve(self, name):
        ctx = self.ctx
        if name == "beta":
            return ctx.beta
        if name == "q":
            return QSeries.gen(ctx)
        m = re.fullmatch(r"t(\d+)", name)
        if m:
            return ctx.t(int(m.group(1)))
        m = re.fullmatch(r"u(\d+)", name)
        if m:
            return ctx.u(int(m.group(1)))
        try:
            return ctx.sym(name)
        except KeyError:
            raise QhError("unknown symbol %r" % name) from None


def parse_expr(ctx, text):
    """Parse canonical-grammar text into a scalar or QSeries."""
    p = _Parser(ctx, _tokenize(text))
    val = p.expr()
    if p.peek() != "end":
        raise QhError("trailing input in expression %r" % text)
    return val
