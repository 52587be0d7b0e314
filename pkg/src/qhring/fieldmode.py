"""Coefficient arithmetic for the three working modes.

A ``FieldMode`` fixes the ground field once and for all: symbolic rational
functions in beta and the equivariant parameters t1..tN (mode ``symbolic``),
exact rationals with numeric beta and t's (mode ``rational``), or complex
doubles (mode ``complexfloat``, used only by the numeric root solver).  All
higher layers receive their scalars from here; the group law

    x (+) y = x + y + beta*x*y,      x (-) y = (x - y)/(1 + beta*y)

and the factorial powers built from it are the only "new" operations on top
of ordinary field arithmetic.
"""

from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.fields import field as _sympy_field

from .errors import GenericityViolation, NonInvertible, QhError

SYMBOLIC = "symbolic"
RATIONAL = "rational"
COMPLEXFLOAT = "complexfloat"

#: symbolic mode is capped here by default; multivariate gcd cost explodes
DEFAULT_SYMBOLIC_N_LIMIT = 5


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError("expected an exact rational, got %r" % (v,))


class FieldMode:
    """Ground field plus the distinguished values beta, t1..tN.

    In symbolic mode the t's (and beta, unless pinned to a rational) are
    field generators; derived contexts may override them with arbitrary
    field elements, which is how parameter reversal t -> (-)t' and the
    K-theory substitution t_j -> 1 - u_{N+1-j} are realized.
    """

    def __init__(self, kind, N, beta=None, t=None, with_u=False,
                 extra_symbols=(), symbolic_n_limit=DEFAULT_SYMBOLIC_N_LIMIT,
                 _shared_field=None, _skip_generic=False):
        if N < 3:
            raise GenericityViolation("N >= 3 is required, got N=%d" % N)
        if kind not in (SYMBOLIC, RATIONAL, COMPLEXFLOAT):
            raise ValueError("unknown mode kind %r" % kind)
        self.kind = kind
        self.N = N
        self.extra_names = tuple(extra_symbols)
        self.with_u = bool(with_u)

        if kind == SYMBOLIC:
            if N > symbolic_n_limit:
                raise GenericityViolation(
                    "symbolic mode is limited to N <= %d (got N=%d); "
                    "use rational mode or raise symbolic_n_limit"
                    % (symbolic_n_limit, N))
            if _shared_field is not None:
                self.field, self._genmap = _shared_field
            else:
                names = []
                if beta is None:
                    names.append("beta")
                names += ["t%d" % j for j in range(1, N + 1)]
                if with_u:
                    names += ["u%d" % j for j in range(1, N + 1)]
                names += list(self.extra_names)
                created = _sympy_field(",".join(names), QQ)
                self.field = created[0]
                gens = created[1:]
                self._genmap = dict(zip(names, gens))
            if beta is None:
                self.beta = self._genmap["beta"]
            else:
                self.beta = self._embed_rational(_as_fraction(beta))
            if t is None:
                self._t = tuple(self._genmap["t%d" % j] for j in range(1, N + 1))
            else:
                self._t = tuple(self._coerce(v) for v in t)
        elif kind == RATIONAL:
            self.field = None
            self._genmap = {}
            self.beta = _as_fraction(beta if beta is not None else 0)
            if t is None:
                raise GenericityViolation("rational mode needs explicit t values")
            self._t = tuple(_as_fraction(v) for v in t)
        else:  # COMPLEXFLOAT
            self.field = None
            self._genmap = {}
            self.beta = complex(beta if beta is not None else 0.0)
            self._t = tuple([0j] * N)

        if len(self._t) != N:
            raise GenericityViolation("need exactly N=%d values for t" % N)
        self.homogeneous = all(self._is_zero(v) for v in self._t)
        if not _skip_generic and kind != COMPLEXFLOAT and not self.homogeneous:
            self._check_genericity()

    # -- construction helpers -------------------------------------------------

    def _embed_rational(self, frac):
        if self.kind == SYMBOLIC:
            return self.field.ground_new(QQ(frac.numerator, frac.denominator))
        if self.kind == RATIONAL:
            return frac
        return complex(frac)

    def _coerce(self, v):
        """Coerce ints/Fractions (and, symbolically, field elements)."""
        if isinstance(v, (int, Fraction)):
            return self._embed_rational(_as_fraction(v))
        if self.kind == SYMBOLIC and self.field is not None:
            if getattr(v, "field", None) is self.field:
                return v
        raise TypeError("cannot coerce %r into this field mode" % (v,))

    def _is_zero(self, v):
        return v == 0

    def _check_genericity(self):
        seen = set()
        for j, tj in enumerate(self._t, start=1):
            if self.kind == RATIONAL:
                if tj in seen:
                    raise GenericityViolation("t values must be pairwise distinct")
                seen.add(tj)
            if self._is_zero(1 + self.beta * tj):
                raise GenericityViolation(
                    "1 + beta*t_%d vanishes; parameters are degenerate" % j)
        if self.kind == SYMBOLIC:
            # distinctness can only fail for explicitly overridden values
            vals = list(self._t)
            for a in range(len(vals)):
                for b in range(a + 1, len(vals)):
                    if vals[a] == vals[b]:
                        raise GenericityViolation("t values must be pairwise distinct")

    # -- basic accessors ------------------------------------------------------

    @property
    def zero(self):
        if self.kind == SYMBOLIC:
            return self.field.zero
        if self.kind == RATIONAL:
            return Fraction(0)
        return 0j

    @property
    def one(self):
        if self.kind == SYMBOLIC:
            return self.field.one
        if self.kind == RATIONAL:
            return Fraction(1)
        return 1 + 0j

    def from_int(self, m):
        return self._embed_rational(Fraction(m))

    def from_fraction(self, fr):
        return self._embed_rational(_as_fraction(fr))

    def t(self, j):
        """t_j, with t_j = 0 for indices outside 1..N."""
        if 1 <= j <= self.N:
            return self._t[j - 1]
        return self.zero

    @property
    def tvec(self):
        return self._t

    def u(self, j):
        if self.kind != SYMBOLIC or not self.with_u:
            raise QhError("u symbols only exist in symbolic mode with with_u=True")
        return self._genmap["u%d" % j]

    def sym(self, name):
        if name not in self._genmap:
            raise KeyError("no symbol %r in this field mode" % name)
        return self._genmap[name]

    def require_exact(self):
        if self.kind == COMPLEXFLOAT:
            raise QhError("operation not available in complexfloat mode")

    # -- group law ------------------------------------------------------------

    def _align(self, a, b):
        """Coerce the pair so mixed scalar/QSeries arithmetic is safe."""
        from .qseries import QSeries
        if isinstance(a, QSeries) and not isinstance(b, QSeries):
            b = QSeries.const(self, b)
        elif isinstance(b, QSeries) and not isinstance(a, QSeries):
            a = QSeries.const(self, a)
        return a, b

    def oplus(self, a, b):
        """a + b + beta*a*b (works on scalars and q-series alike)."""
        self.require_exact()
        a, b = self._align(a, b)
        return a + b + a * b * self.beta

    def ominus(self, a, b):
        """(a - b) / (1 + beta*b)."""
        self.require_exact()
        a, b = self._align(a, b)
        den = b * self.beta + 1
        try:
            return (a - b) / den
        except ZeroDivisionError:
            raise NonInvertible("1 + beta*b is not invertible") from None

    def gminus(self, b):
        """Group inverse (-)b = -b/(1 + beta*b)."""
        return self.ominus(self.zero, b)

    def factorial_power(self, x, r, shift=0, sign="plain"):
        """prod_{j=1..r} x (+) (t_{j+shift} or (-)t_{j+shift}).

        Indices outside 1..N contribute t = 0, i.e. a bare factor x.
        """
        self.require_exact()
        if r < 0:
            raise ValueError("factorial power needs r >= 0")
        acc = None
        for j in range(1, r + 1):
            tj = self.t(j + shift)
            if sign == "neg":
                tj = self.gminus(tj)
            elif sign != "plain":
                raise ValueError("sign must be 'plain' or 'neg'")
            fac = self.oplus(x, tj)
            acc = fac if acc is None else acc * fac
        if acc is None:
            return self.one
        return acc

    # -- derived contexts -----------------------------------------------------

    def derived(self, t=None, beta=None):
        """Same field, different distinguished values (symbolic/rational)."""
        self.require_exact()
        kwargs = dict(kind=self.kind, N=self.N, with_u=self.with_u,
                      extra_symbols=self.extra_names)
        if self.kind == SYMBOLIC:
            kwargs["_shared_field"] = (self.field, self._genmap)
            new = FieldMode.__new__(FieldMode)
            new.kind = self.kind
            new.N = self.N
            new.extra_names = self.extra_names
            new.with_u = self.with_u
            new.field = self.field
            new._genmap = self._genmap
            new.beta = self.beta if beta is None else (
                beta if getattr(beta, "field", None) is self.field
                else self._embed_rational(_as_fraction(beta)))
            new._t = self._t if t is None else tuple(
                v if getattr(v, "field", None) is self.field else self._coerce(v)
                for v in t)
            if len(new._t) != self.N:
                raise GenericityViolation("need N t-values")
            new.homogeneous = all(v == 0 for v in new._t)
            if not new.homogeneous:
                new._check_genericity()
            return new
        return FieldMode(self.kind, self.N,
                         beta=self.beta if beta is None else beta,
                         t=self._t if t is None else t,
                         extra_symbols=self.extra_names)

    def swapped(self, j):
        """Context with t_j and t_{j+1} exchanged (indices mod N: j=N swaps t_N,t_1)."""
        tt = list(self._t)
        a = j - 1
        b = j % self.N
        tt[a], tt[b] = tt[b], tt[a]
        return self.derived(t=tuple(tt))

    def reversed_neg(self):
        """Context carrying (-)t' = ((-)t_N, ..., (-)t_1) as its parameters."""
        return self.derived(t=tuple(self.gminus(self.t(self.N + 1 - j))
                                    for j in range(1, self.N + 1)))

    # -- substitutions (symbolic only) ----------------------------------------

    def eval_poly(self, poly, images):
        """Evaluate a sympy PolyElement given one image per field generator."""
        acc = images["__zero__"]
        gens = self.field.gens
        for exps, coeff in poly.terms():
            cf = Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff)))
            term = images["__embed__"](cf)
            for gi, e in enumerate(exps):
                if e:
                    term = term * images[gens[gi]] ** e
            acc = acc + term
        return acc

    def subs_scalar(self, s, genmap, target=None):
        """Map a symbolic scalar through generator images.

        ``genmap`` sends field generators to scalars of ``target`` (default:
        this context).  Exact rational inputs pass through unchanged.
        """
        target = target or self
        if isinstance(s, (int, Fraction)):
            return target.from_fraction(_as_fraction(s))
        if self.kind != SYMBOLIC:
            raise QhError("substitution needs symbolic mode")
        images = {"__zero__": target.zero, "__one__": target.one,
                  "__embed__": target.from_fraction}
        for g in self.field.gens:
            images[g] = genmap.get(g, g if target is self else None)
            if images[g] is None:
                raise QhError("no image supplied for generator %s" % g)
        num = self.eval_poly(s.numer, images)
        den = self.eval_poly(s.denom, images)
        try:
            return num / den
        except ZeroDivisionError:
            raise NonInvertible("substitution produced a zero denominator") from None

    def swap_t_in_scalar(self, s, j):
        """Exchange t_j <-> t_{j+1} (cyclically for j=N) inside a symbolic scalar."""
        if self.kind != SYMBOLIC:
            raise QhError("scalar-level parameter swaps need symbolic mode")
        a, b = j, (j % self.N) + 1
        ga = self._genmap.get("t%d" % a)
        gb = self._genmap.get("t%d" % b)
        if ga is None or gb is None:
            raise QhError("t generators are specialized; cannot swap")
        genmap = {ga: gb, gb: ga}
        return self.subs_scalar(s, genmap)

    # -- misc -----------------------------------------------------------------

    def canonicalize(self, s):
        """Scalars are kept canonical by construction; returns its argument."""
        return s

    def key(self):
        from .exprio import scalar_to_str
        tstr = tuple(scalar_to_str(self, v) for v in self._t) \
            if self.kind != COMPLEXFLOAT else tuple(repr(v) for v in self._t)
        bstr = scalar_to_str(self, self.beta) if self.kind != COMPLEXFLOAT \
            else repr(self.beta)
        return (self.kind, self.N, bstr, tstr, self.extra_names, self.with_u)

    def __repr__(self):
        return "FieldMode(%s, N=%d)" % (self.kind, self.N)
