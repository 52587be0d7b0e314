"""Factorial Grothendieck polynomials: evaluation and basis manipulation.

Two independent evaluation routes are kept side by side: the set-valued
tableau sum (the brute-force oracle) and the determinant ratio.  On top of
them sit the change of basis into the row-determinant polynomials F, the
expansion of symmetric polynomials in the G-basis, and the overflow
reduction that rewrites a first part larger than k into q-corrections.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DegenerateVanishingPoints, NonInvertible, NonTerminating,
                     QhError, SingularVandermonde, TooLarge)
from .partitions import BoxPartition, partitions_at_most
from .qseries import QSeries

DEFAULT_TABLEAU_CELL_BOUND = 12


class ParamSeq:
    """A doubly infinite parameter sequence s_j built from the context's t.

    idx j maps to t_{j+shift} (or its reversal t_{N+1-j+shift}) with the
    group inverse applied when sign is 'neg'; indices outside 1..N give 0.
    """

    def __init__(self, ctx, sign="plain", reverse=False, shift=0):
        if sign not in ("plain", "neg"):
            raise ValueError("sign must be plain or neg")
        self.ctx = ctx
        self.sign = sign
        self.reverse = reverse
        self.shift = shift
        self._cache = {}

    def __call__(self, j):
        v = self._cache.get(j)
        if v is None:
            ctx = self.ctx
            base = (ctx.N + 1 - j + self.shift) if self.reverse else (j + self.shift)
            v = ctx.t(base)
            if self.sign == "neg":
                v = ctx.gminus(v)
            self._cache[j] = v
        return v

    def point(self, j):
        """(-)s_j, the natural evaluation point attached to index j."""
        return self.ctx.gminus(self(j))

    def shifted(self, p):
        return ParamSeq(self.ctx, self.sign, self.reverse, self.shift + p)

    def key(self):
        return (self.sign, self.reverse, self.shift)


def params_neg_t(ctx, shift=0):
    return ParamSeq(ctx, "neg", False, shift)


def params_t(ctx, shift=0):
    return ParamSeq(ctx, "plain", False, shift)


def params_neg_t_rev(ctx, shift=0):
    """(-)t' with t'_j = t_{N+1-j}."""
    return ParamSeq(ctx, "neg", True, shift)


def params_t_rev(ctx, shift=0):
    return ParamSeq(ctx, "plain", True, shift)


def facpow(ctx, x, r, params):
    """prod_{j=1..r} x (+) s_j for an arbitrary parameter sequence."""
    acc = None
    for j in range(1, r + 1):
        f = ctx.oplus(x, params(j))
        acc = f if acc is None else acc * f
    return ctx.one if acc is None else acc


# -- request record (public surface) ----------------------------------------------


@dataclass(frozen=True)
class GValueRequest:
    """Evaluation request for a factorial Grothendieck polynomial.

    shape: partition/composition tuple, BoxPartition, or (outer, inner) skew
    pair; xargs: the evaluation arguments; tsign/tshift/treverse pick the
    parameter sequence (treverse encodes the reversal t -> t').
    """
    shape: object
    xargs: tuple
    tsign: str = "plain"
    tshift: int = 0
    treverse: bool = False

    def params(self, ctx):
        return ParamSeq(ctx, "neg" if self.tsign == "neg" else "plain",
                        self.treverse, self.tshift)


def _shape_pair(shape):
    """Normalize a shape argument to (outer tuple, inner tuple)."""
    if isinstance(shape, BoxPartition):
        return tuple(shape.parts), ()
    if isinstance(shape, tuple) and len(shape) == 2 and \
            isinstance(shape[0], (tuple, list)):
        return tuple(shape[0]), tuple(shape[1])
    return tuple(shape), ()


# -- tableau sum -------------------------------------------------------------------


def _svt_enumerate(outer, inner, n):
    """Yield set-valued tableaux as dicts (i, j) -> frozenset of entries."""
    cells = []
    rows = len(outer)
    for i in range(1, rows + 1):
        lo = inner[i - 1] if i - 1 < len(inner) else 0
        for j in range(lo + 1, outer[i - 1] + 1):
            cells.append((i, j))
    cells.sort()
    subsets = {}

    def choices(lo):
        """Nonempty subsets of [n] with minimum at least lo."""
        if lo not in subsets:
            res = []
            for m in range(max(1, lo), n + 1):
                rest = list(range(m + 1, n + 1))
                for extra in itertools.chain.from_iterable(
                        itertools.combinations(rest, r) for r in range(len(rest) + 1)):
                    res.append((m,) + extra)
            subsets[lo] = res
        return subsets[lo]

    def in_shape(i, j):
        if not (1 <= i <= rows):
            return False
        lo = inner[i - 1] if i - 1 < len(inner) else 0
        return lo < j <= outer[i - 1]

    def rec(idx, assignment):
        if idx == len(cells):
            yield dict(assignment)
            return
        i, j = cells[idx]
        lo = 1
        if in_shape(i, j - 1):
            lo = max(lo, max(assignment[(i, j - 1)]))
        if in_shape(i - 1, j):
            lo = max(lo, max(assignment[(i - 1, j)]) + 1)
        for S in choices(lo):
            assignment[(i, j)] = S
            yield from rec(idx + 1, assignment)
        assignment.pop((i, j), None)

    yield from rec(0, {})


def eval_tableau_sum(ctx, req, n=None, cell_bound=DEFAULT_TABLEAU_CELL_BOUND):
    """Sum over set-valued tableaux; the brute-force evaluation oracle."""
    outer, inner = _shape_pair(req.shape)
    xargs = tuple(req.xargs)
    if n is None:
        n = len(xargs)
    if len(xargs) != n:
        raise QhError("xargs length must equal the variable count")
    ncells = sum(outer) - sum(inner)
    if ncells > cell_bound:
        raise TooLarge("tableau enumeration bound exceeded (%d cells)" % ncells)
    if any(outer[i] < outer[i + 1] for i in range(len(outer) - 1)):
        raise QhError("tableau sum needs a (skew) partition shape")
    params = req.params(ctx)
    beta = ctx.beta
    total = None
    for T in _svt_enumerate(outer, inner, n):
        weight = None
        extras = 0
        for (i, j), S in T.items():
            extras += len(S) - 1
            for r in S:
                f = ctx.oplus(xargs[r - 1], params(r + j - i))
                weight = f if weight is None else weight * f
        if weight is None:
            weight = ctx.one
        for _ in range(extras):
            weight = weight * beta
        total = weight if total is None else total + weight
    if total is None:
        total = ctx.one  # empty shape: only the empty tableau
    return total


# -- determinant formula -----------------------------------------------------------


def _det_perm(matrix, n):
    total = None
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for a in range(n):
            for b in range(a + 1, n):
                if seen[a] > seen[b]:
                    sign = -sign
        term = None
        for i in range(n):
            e = matrix[i][perm[i]]
            term = e if term is None else term * e
        if sign < 0:
            term = -term
        total = term if total is None else total + term
    return total


def eval_determinant(ctx, req, n=None):
    """Determinant ratio; defined for arbitrary compositions."""
    comp, inner = _shape_pair(req.shape)
    if inner:
        raise QhError("determinant formula does not take skew shapes")
    return g_determinant(ctx, comp, tuple(req.xargs), req.params(ctx), n)


def g_determinant(ctx, comp, xargs, params, n=None):
    """G_comp(xargs | s) for an explicit parameter sequence s."""
    comp = tuple(comp)
    if n is None:
        n = len(xargs)
    if n == 0:
        return ctx.one
    if len(comp) > n:
        raise QhError("composition has more than n parts")
    comp = comp + (0,) * (n - len(comp))
    exps = [comp[i] + n - (i + 1) for i in range(n)]
    if any(e < 0 for e in exps):
        raise QhError("composition exponent below zero; shape too negative")
    beta = ctx.beta
    matrix = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = facpow(ctx, xargs[j], exps[i], params)
            opb = xargs[j] * beta + 1
            for _ in range(i):
                entry = entry * opb
            row.append(entry)
        matrix.append(row)
    num = _det_perm(matrix, n)
    den = None
    for a in range(n):
        for b in range(a + 1, n):
            f = xargs[a] - xargs[b]
            den = f if den is None else den * f
    if den is None:
        return num
    try:
        return num / den
    except (ZeroDivisionError, NonInvertible):
        raise SingularVandermonde("coincident x arguments") from None


def eval_f_determinant(ctx, comp, xargs, params):
    """F-polynomial: same determinant without the (1+beta*x) row factors."""
    n = len(xargs)
    if n == 0:
        return ctx.one
    comp = tuple(comp) + (0,) * (n - len(comp))
    exps = [comp[i] + n - (i + 1) for i in range(n)]
    if any(e < 0 for e in exps):
        raise QhError("negative exponent in F determinant")
    matrix = [[facpow(ctx, xargs[j], exps[i], params) for j in range(n)]
              for i in range(n)]
    num = _det_perm(matrix, n)
    den = None
    for a in range(n):
        for b in range(a + 1, n):
            f = xargs[a] - xargs[b]
            den = f if den is None else den * f
    # normalize by det[(x|s)^{n-i}] = Delta(x) * prod (1+beta*s_i)^{n-i}
    scale = ctx.one
    for i in range(1, n + 1):
        f = params(i) * ctx.beta + 1
        for _ in range(n - i):
            scale = scale * f
    try:
        return num / (den * scale) if den is not None else num / scale
    except (ZeroDivisionError, NonInvertible):
        raise SingularVandermonde("coincident x arguments") from None


# -- explicit symmetric polynomials in the x variables ------------------------------


class XPoly:
    """Sparse polynomial in x_1..x_n over the scalar field."""

    __slots__ = ("ctx", "n", "terms")

    def __init__(self, ctx, n, terms=None):
        self.ctx = ctx
        self.n = n
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[e] = c

    @classmethod
    def zero(cls, ctx, n):
        return cls(ctx, n)

    @classmethod
    def const(cls, ctx, n, c):
        return cls(ctx, n, {(0,) * n: c})

    @classmethod
    def var(cls, ctx, n, j):
        e = [0] * n
        e[j] = 1
        return cls(ctx, n, {tuple(e): ctx.one})

    def copy(self):
        return XPoly(self.ctx, self.n, dict(self.terms))

    def __add__(self, other):
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, self.ctx.zero) + c
            if s == 0:
                res.pop(e, None)
            else:
                res[e] = s
        return XPoly(self.ctx, self.n, res)

    def __neg__(self):
        return XPoly(self.ctx, self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, XPoly):
            if other == 0:
                return XPoly.zero(self.ctx, self.n)
            return XPoly(self.ctx, self.n,
                         {e: c * other for e, c in self.terms.items()})
        res = {}
        zero = self.ctx.zero
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = res.get(e, zero) + c1 * c2
                res[e] = s
        return XPoly(self.ctx, self.n, res)

    def is_zero(self):
        return not self.terms

    def max_exponent(self):
        m = 0
        for e in self.terms:
            m = max(m, max(e) if e else 0)
        return m

    def evaluate(self, xargs):
        total = None
        for e, c in self.terms.items():
            term = None
            for j, p in enumerate(e):
                for _ in range(p):
                    term = xargs[j] if term is None else term * xargs[j]
            if term is None:
                piece = c
            else:
                piece = term * c
            total = piece if total is None else total + piece
        return self.ctx.zero if total is None else total

    def divide_linear(self, a, b):
        """Exact division by (x_a - x_b); raises if not divisible."""
        p = dict(self.terms)
        q = {}
        zero = self.ctx.zero

        def clean(d, e):
            if d.get(e) == 0:
                del d[e]

        while p:
            E = max(p, key=lambda E: (E[a], E))
            c = p[E]
            if E[a] == 0:
                raise QhError("polynomial not divisible by the linear factor")
            Eq = list(E)
            Eq[a] -= 1
            Eq = tuple(Eq)
            q[Eq] = q.get(Eq, zero) + c
            del p[E]
            Eb = list(Eq)
            Eb[b] += 1
            Eb = tuple(Eb)
            p[Eb] = p.get(Eb, zero) + c
            clean(p, Eb)
        return XPoly(self.ctx, self.n, q)

    def m_coordinates(self):
        """Coefficients indexed by sorted exponent patterns (monomial basis)."""
        coords = {}
        for e, c in self.terms.items():
            key = tuple(sorted(e, reverse=True))
            if key in coords:
                if coords[key] != c:
                    raise QhError("polynomial is not symmetric")
            else:
                coords[key] = c
        return coords


def _facpow_xpoly(ctx, n, j, r, params):
    acc = XPoly.const(ctx, n, ctx.one)
    xj = XPoly.var(ctx, n, j)
    for i in range(1, r + 1):
        s = params(i)
        fac = XPoly.const(ctx, n, s) + xj * (ctx.beta * s + 1)
        acc = acc * fac
    return acc


def tableau_polynomial(ctx, shape, n, params,
                       cell_bound=DEFAULT_TABLEAU_CELL_BOUND):
    """G_shape(x|s) as an explicit polynomial in x_1..x_n."""
    outer, inner = _shape_pair(shape)
    ncells = sum(outer) - sum(inner)
    if ncells > cell_bound:
        raise TooLarge("tableau enumeration bound exceeded")
    beta = ctx.beta
    total = XPoly.zero(ctx, n)
    for T in _svt_enumerate(outer, inner, n):
        weight = XPoly.const(ctx, n, ctx.one)
        extras = 0
        for (i, j), S in T.items():
            extras += len(S) - 1
            for r in S:
                s = params(r + j - i)
                xr = XPoly.var(ctx, n, r - 1)
                weight = weight * (XPoly.const(ctx, n, s) + xr * (beta * s + 1))
        for _ in range(extras):
            weight = weight * beta
        total = total + weight
    if not outer:
        total = XPoly.const(ctx, n, ctx.one)
    return total


def f_polynomial(ctx, comp, n, params):
    """F_comp(x|s) as an explicit polynomial (determinant ratio expanded)."""
    comp = tuple(comp) + (0,) * (n - len(comp))
    exps = [comp[i] + n - (i + 1) for i in range(n)]
    if any(e < 0 for e in exps):
        raise QhError("negative exponent in F determinant")
    rows = [[_facpow_xpoly(ctx, n, j, exps[i], params) for j in range(n)]
            for i in range(n)]
    det = None
    for perm in itertools.permutations(range(n)):
        sign = 1
        sp = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if sp[i] > sp[j]:
                    sign = -sign
        term = XPoly.const(ctx, n, ctx.one)
        for i in range(n):
            term = term * rows[i][perm[i]]
        if sign < 0:
            term = -term
        det = term if det is None else det + term
    for a in range(n):
        for b in range(a + 1, n):
            det = det.divide_linear(a, b)
    scale = ctx.one
    for i in range(1, n + 1):
        f = params(i) * ctx.beta + 1
        for _ in range(n - i):
            scale = scale * f
    inv = 1 / scale
    return det * inv


# -- expansion into the G basis ------------------------------------------------------


def _g_poly_cached(ctx, shape, n, params):
    cache = getattr(ctx, "_gpoly_cache", None)
    if cache is None:
        cache = {}
        ctx._gpoly_cache = cache
    key = (params.key(), n, tuple(shape))
    if key not in cache:
        cache[key] = tableau_polynomial(ctx, tuple(shape), n, params,
                                        cell_bound=64)
    return cache[key]


def expand_poly_in_g_basis(ctx, poly, params, maxwidth=None):
    """Expand an explicit symmetric polynomial as sum(c_nu * G_nu(x|s)).

    Exact linear solve in monomial-symmetric coordinates; returns a dict
    mapping partition tuples to scalars.  Unlike the vanishing-point route
    this never needs parameter indices beyond the window, so it stays
    non-degenerate for arbitrarily wide partitions.
    """
    n = poly.n
    W = poly.max_exponent() if maxwidth is None else maxwidth
    cands = [p for p in partitions_at_most(n, W)]
    gpolys = {p: _g_poly_cached(ctx, p, n, params) for p in cands}
    mkeys = set(poly.m_coordinates().keys())
    for gp in gpolys.values():
        mkeys |= set(gp.m_coordinates().keys())
    mkeys = sorted(mkeys)
    rows = []
    target = poly.m_coordinates()
    for mk in mkeys:
        row = [gpolys[p].m_coordinates().get(mk, ctx.zero) for p in cands]
        row.append(target.get(mk, ctx.zero))
        rows.append(row)
    ncols = len(cands)
    sol = _solve_exact(ctx, rows, ncols)
    if sol is None:
        raise DegenerateVanishingPoints("G-basis expansion system is singular")
    out = {}
    check = XPoly.zero(ctx, n)
    for p, c in zip(cands, sol):
        if c != 0:
            out[p] = c
            check = check + gpolys[p] * c
    if not (check - poly).is_zero():
        raise QhError("G-basis expansion failed verification")
    return out


def _solve_exact(ctx, rows, ncols):
    """Gaussian elimination for an overdetermined consistent exact system."""
    rows = [list(r) for r in rows]
    piv = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    sol = [ctx.zero] * ncols
    for i, c in enumerate(piv):
        sol[c] = rows[i][ncols]
    for i in range(r, len(rows)):
        if rows[i][ncols] != 0:
            return None
    return sol


def vanishing_point(ctx, params, mu, n):
    """The evaluation point ((-)s_{mu_n+1}, ..., (-)s_{mu_1+n})."""
    mu = tuple(mu) + (0,) * (n - len(mu))
    return tuple(params.point(mu[n - i] + i) for i in range(1, n + 1))


def expand_in_G_basis(ctx, oracle, n, degree_bound, params):
    """Expand an evaluation oracle in the G basis via vanishing triangularity.

    oracle(xargs) must evaluate the target symmetric polynomial; points are
    the (-)s_mu with mu ranging over partitions with at most n parts and
    first part at most degree_bound, processed in containment-compatible
    order.  Raises DegenerateVanishingPoints when points collide.
    """
    cands = partitions_at_most(n, degree_bound)
    points = {}
    seen = set()
    for mu in cands:
        p = vanishing_point(ctx, params, mu, n)
        if len(set(p)) != len(p):
            raise DegenerateVanishingPoints(
                "coordinates collide at mu=%r" % (mu,))
        fp = tuple(sorted(str(c) for c in map(lambda v: _pt_key(ctx, v), p)))
        if fp in seen:
            raise DegenerateVanishingPoints(
                "evaluation points collide at mu=%r" % (mu,))
        seen.add(fp)
        points[mu] = p
    coeffs = {}
    gcache = {}

    def gval(nu, point_mu):
        key = (nu, point_mu)
        if key not in gcache:
            gcache[key] = g_determinant(ctx, nu, points[point_mu], params, n)
        return gcache[key]

    for mu in cands:
        val = oracle(points[mu])
        for nu, c in coeffs.items():
            if c != 0:
                val = val - c * gval(nu, mu)
        diag = gval(mu, mu)
        if diag == 0:
            raise DegenerateVanishingPoints(
                "diagonal vanishing value is zero at mu=%r" % (mu,))
        coeffs[mu] = val / diag
    return {mu: c for mu, c in coeffs.items() if c != 0}


def _pt_key(ctx, v):
    from .exprio import scalar_to_str
    return scalar_to_str(ctx, v)


# -- Jacobi-Trudi / Giambelli coefficients --------------------------------------------


def gamma_reduced(ctx, params, m, r, nprime):
    """Gamma_m(r, n') with its beta^(r-m) prefactor stripped.

    g(i) = 1/(1 + beta*s_i); the chain sum runs over weakly increasing
    (j_1 <= ... <= j_m) inside [m-1, r-1].
    """
    if m < 0 or m > r:
        return ctx.zero

    def g(i):
        return 1 / (params(i) * ctx.beta + 1)

    pref = ctx.one
    for j in range(m, r):
        pref = pref * g(nprime - j)

    chains = [ctx.one]
    if m > 0:
        chains = []

        def rec(depth, lo, acc):
            if depth == m:
                chains.append(acc)
                return
            for j in range(lo, r):
                rec(depth + 1, j, acc * g(nprime - j))

        rec(0, m - 1, ctx.one)
    total = None
    for c in chains:
        total = c if total is None else total + c
    return pref * (total if total is not None else ctx.zero)


def giambelli_alphas(n):
    """All corrections alpha = (0, a2, ..., an) with 0 <= a_i <= i-1."""
    ranges = [range(1)] + [range(i) for i in range(2, n + 1)]
    return [tuple(a) for a in itertools.product(*ranges)]


def phi_coefficient(ctx, params, shape, alpha, n):
    """phi_alpha for G_shape(x|s) = sum beta^|alpha| phi_alpha F_{shape+alpha}."""
    shape = tuple(shape) + (0,) * (n - len(shape))
    total = ctx.one
    for i in range(1, n + 1):
        a = alpha[i - 1]
        total = total * gamma_reduced(ctx, params, i - 1 - a, i - 1,
                                      n + shape[i - 1] - 1)
    for i in range(1, n + 1):
        f = params(i) * ctx.beta + 1
        for _ in range(n - i):
            total = total * f
    return total


def giambelli_coefficients(ctx, lam, n=None, params=None):
    """Map alpha -> phi_alpha(lam) for the expansion into F's (params (-)t)."""
    if isinstance(lam, BoxPartition):
        if n is None:
            n = lam.n
        lam = lam.parts
    if n is None:
        n = len(lam)
    if params is None:
        params = params_neg_t(ctx)
    return {alpha: phi_coefficient(ctx, params, lam, alpha, n)
            for alpha in giambelli_alphas(n)}


def f_straighten(comp):
    """Sort a composition by the F-rules; returns (sign, partition) or None."""
    n = len(comp)
    keys = [comp[i] - (i + 1) for i in range(n)]
    if len(set(keys)) != len(keys):
        return None
    order = sorted(range(n), key=lambda i: keys[i], reverse=True)
    sign = 1
    seen = list(order)
    for a in range(n):
        for b in range(a + 1, n):
            if seen[a] > seen[b]:
                sign = -sign
    parts = tuple(keys[order[i]] + (i + 1) for i in range(n))
    if any(p < 0 for p in parts):
        raise QhError("straightening produced negative parts: %r" % (parts,))
    return sign, parts


# -- overflow reduction ----------------------------------------------------------------


def _complete_h(ctx, r, m):
    """h_r(t_1..t_m), complete homogeneous symmetric polynomial."""
    if r < 0:
        return ctx.zero
    if r == 0:
        return ctx.one
    if m <= 0:
        return ctx.zero
    total = None
    for combo in itertools.combinations_with_replacement(range(1, m + 1), r):
        term = None
        for j in combo:
            term = ctx.t(j) if term is None else term * ctx.t(j)
        total = term if total is None else total + term
    return total if total is not None else ctx.zero


def reduce_overflow(ctx, comp, n, k, order, depth_limit=64):
    """Rewrite G_comp((.)|(-)t) at Bethe roots as q-corrections inside the box.

    Returns a dict mapping in-box partition tuples to exact q-polynomial
    QSeries coefficients, valid modulo the Bethe ideal up to q^order.
    Compositions are normalized through the F-level determinant identities;
    the first part is folded with the reduction identity, which multiplies
    by q, so pruning at the truncation order guarantees termination.
    """
    params = params_neg_t(ctx)
    comp = tuple(comp)
    if len(comp) > n:
        raise QhError("composition has more than n parts")
    comp = comp + (0,) * (n - len(comp))
    one = QSeries.const(ctx, ctx.one)
    work = [(comp, one)]
    result = {}
    steps = 0
    fexp_cache = {}
    while work:
        steps += 1
        if steps > depth_limit * max(1, len(comp)) * 64:
            raise NonTerminating("overflow reduction exceeded its step budget")
        theta, coeff = work.pop()
        if _min_qdeg(coeff) > order:
            continue
        sorted_ok = all(theta[i] >= theta[i + 1] for i in range(len(theta) - 1))
        if sorted_ok and all(p >= 0 for p in theta):
            if not theta or theta[0] <= k:
                key = tuple(p for p in theta if p)
                result[key] = result.get(key, QSeries.const(ctx, ctx.zero)) + coeff
                continue
            # fold the oversized first part; brings one power of q
            lam = theta
            acc = []
            for r in range(0, lam[0] - k):
                c = _complete_h(ctx, lam[0] - 1 - k - r, r + 1)
                if c == 0:
                    continue
                for i in range(1, r + 1):
                    c = c * (ctx.beta * ctx.t(i) + 1)
                tgt = tuple(p - 1 for p in lam[1:]) + (r,)
                acc.append((tgt, coeff.qshift(1) * c))
            work.extend(acc)
            continue
        # composition: route through the F determinants and re-expand
        key = theta
        if key not in fexp_cache:
            fexp_cache[key] = _composition_to_g(ctx, theta, n, params)
        for nu, c in fexp_cache[key].items():
            work.append((nu, coeff * c))
    return {key: val for key, val in result.items() if not val.is_zero()}


def _min_qdeg(series):
    for i, c in enumerate(series.coeffs):
        if c != 0:
            return i
    return 10 ** 9


def _composition_to_g(ctx, theta, n, params):
    """G_theta as a finite combination of partition-indexed G's."""
    alphas = giambelli_alphas(n)
    fsum = {}
    for alpha in alphas:
        target = tuple(theta[i] + alpha[i] for i in range(n))
        st = f_straighten(target)
        if st is None:
            continue
        sign, partition = st
        c = phi_coefficient(ctx, params, theta, alpha, n)
        for _ in range(sum(alpha)):
            c = c * ctx.beta
        if sign < 0:
            c = -c
        fsum[partition] = fsum.get(partition, ctx.zero) + c
    out = {}
    for partition, c in fsum.items():
        if c == 0:
            continue
        fp = f_polynomial(ctx, partition, n, params)
        for nu, cc in expand_poly_in_g_basis(ctx, fp, params).items():
            v = out.get(nu, ctx.zero) + c * cc
            out[nu] = v
    return {nu: c for nu, c in out.items() if c != 0}
