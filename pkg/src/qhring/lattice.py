"""Five-vertex lattice operators on the weight spaces V_n.

The monodromy matrix is a product of local L-operators along one lattice
row; its four auxiliary-space entries A, B, C, D (and the primed, vee and
star variants) act on spin vectors by a transfer-style dynamic program over
the sites.  Row-to-row transfer matrices are H = A + qD and E = A' + qD';
their coefficients in factorial powers of the spectral parameter give the
Pieri operators.
"""

from .errors import (DegenerateNodes, QhError, QNotInvertible, SectorOverflow)
from .grothendieck import ParamSeq, params_neg_t_rev, params_t
from .partitions import BoxPartition, all_partitions
from .qseries import QSeries


class SpinVector:
    """Sparse vector on V_n with q-series coefficients."""

    __slots__ = ("ctx", "n", "comps")

    def __init__(self, ctx, n, comps=None):
        self.ctx = ctx
        self.n = n
        self.comps = {}
        if comps:
            for lam, c in comps.items():
                if not isinstance(c, QSeries):
                    c = QSeries.const(ctx, c)
                if not c.is_zero():
                    self.comps[lam] = c

    @classmethod
    def basis(cls, ctx, lam):
        return cls(ctx, lam.n, {lam: QSeries.const(ctx, ctx.one)})

    def coeff(self, lam):
        return self.comps.get(lam, QSeries.const(self.ctx, self.ctx.zero))

    def items(self):
        return sorted(self.comps.items(), key=lambda kv: kv[0].sort_key())

    def __add__(self, other):
        res = dict(self.comps)
        for lam, c in other.comps.items():
            s = res[lam] + c if lam in res else c
            if s.is_zero():
                res.pop(lam, None)
            else:
                res[lam] = s
        return SpinVector(self.ctx, self.n, res)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if not isinstance(c, QSeries):
            c = QSeries.const(self.ctx, self.ctx.from_fraction(c)
                              if isinstance(c, int) else c)
        return SpinVector(self.ctx, self.n,
                          {lam: v * c for lam, v in self.comps.items()})

    def is_zero(self):
        return all(v.is_zero() for v in self.comps.values())

    def eq_upto(self, other, order):
        keys = set(self.comps) | set(other.comps)
        return all(self.coeff(k).eq_upto(other.coeff(k), order) for k in keys)

    def __eq__(self, other):
        keys = set(self.comps) | set(other.comps)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    def __repr__(self):
        return "SpinVector(%r)" % {k: v for k, v in self.items()}


class LinearOperator:
    """Operator on V_n stored column by column."""

    __slots__ = ("ctx", "n", "cols")

    def __init__(self, ctx, n, cols):
        self.ctx = ctx
        self.n = n
        self.cols = cols

    @classmethod
    def from_action(cls, ctx, n, action):
        cols = {lam: action(SpinVector.basis(ctx, lam))
                for lam in all_partitions(n, ctx.N - n)}
        return cls(ctx, n, cols)

    @classmethod
    def identity(cls, ctx, n):
        return cls.from_action(ctx, n, lambda v: v)

    @classmethod
    def zero(cls, ctx, n):
        return cls(ctx, n, {lam: SpinVector(ctx, n)
                            for lam in all_partitions(n, ctx.N - n)})

    def apply(self, v):
        out_n = next(iter(self.cols.values())).n if self.cols else v.n
        out = SpinVector(self.ctx, out_n)
        for lam, c in v.comps.items():
            out = out + self.cols[lam].scale(c)
        return out

    def compose(self, other):
        """self o other."""
        return LinearOperator(self.ctx, other.n,
                              {lam: self.apply(col)
                               for lam, col in other.cols.items()})

    def __add__(self, other):
        return LinearOperator(self.ctx, self.n,
                              {lam: self.cols[lam] + other.cols[lam]
                               for lam in self.cols})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return LinearOperator(self.ctx, self.n,
                              {lam: col.scale(c) for lam, col in self.cols.items()})

    def entry(self, nu, mu):
        return self.cols[mu].coeff(nu)

    def eq_upto(self, other, order):
        return all(self.cols[lam].eq_upto(other.cols[lam], order)
                   for lam in self.cols)

    def __eq__(self, other):
        return all(self.cols[lam] == other.cols[lam] for lam in self.cols)


# -- local vertex weights -------------------------------------------------------


def _weights_L(ctx, x, j):
    om = ctx.ominus(x, ctx.t(j))
    return {
        (0, 0): [(0, 0, om)],
        (0, 1): [(0, 1, ctx.one), (1, 0, ctx.one)],
        (1, 0): [(0, 1, om * ctx.beta + 1), (1, 0, ctx.one)],
        (1, 1): [],
    }


def _weights_Lp(ctx, x, j):
    op = ctx.oplus(x, ctx.t(j))
    return {
        (0, 0): [(0, 0, ctx.one)],
        (0, 1): [(0, 1, op), (1, 0, op * ctx.beta + 1)],
        (1, 0): [(0, 1, ctx.one)],
        (1, 1): [(1, 1, ctx.one)],
    }


def _weights_Lv(ctx, x, j):
    om = ctx.ominus(x, ctx.t(j))
    return {
        (0, 0): [(0, 0, om)],
        (0, 1): [(0, 1, ctx.one), (1, 0, om * ctx.beta + 1)],
        (1, 0): [(0, 1, ctx.one), (1, 0, ctx.one)],
        (1, 1): [],
    }


def _weights_Ls(ctx, x, j):
    op = ctx.oplus(x, ctx.t(j))
    return {
        (0, 0): [(0, 0, ctx.one)],
        (0, 1): [(0, 1, op), (1, 0, ctx.one)],
        (1, 0): [(0, 1, op * ctx.beta + 1)],
        (1, 1): [(1, 1, ctx.one)],
    }


_FAMILIES = {
    "plain": (_weights_L, "forward"),
    "prime": (_weights_Lp, "forward"),
    "vee": (_weights_Lv, "backward"),
    "star": (_weights_Ls, "backward"),
}

_ENTRY = {"A": (0, 0), "B": (0, 1), "C": (1, 0), "D": (1, 1)}


def monodromy_apply(ctx, family, entry, x, v, qtwist=None):
    """Apply one monodromy matrix entry to a spin vector.

    entry is 'A'|'B'|'C'|'D' (out, in) auxiliary indices; family selects the
    L-operator variant.  qtwist, when given, is a length-N list of weights
    multiplied whenever the auxiliary line carries a 1 past a site.
    """
    weights_fn, direction = _FAMILIES[family]
    aux_out, aux_in = _ENTRY[entry]
    N = ctx.N
    delta = aux_out - aux_in  # net particles deposited
    n_out = v.n + (1 if entry == "B" else 0) - (1 if entry == "C" else 0)
    if not (0 <= n_out <= N):
        raise SectorOverflow("entry %s leaves the state space" % entry)
    site_order = range(1, N + 1) if direction == "forward" else range(N, 0, -1)
    out = SpinVector(ctx, n_out)
    one = QSeries.const(ctx, ctx.one)
    for lam, c in v.comps.items():
        bits = [int(b) for b in lam.to_string()]
        states = {(aux_in, ()): one}
        for j in site_order:
            wt = weights_fn(ctx, x, j)
            new = {}
            for (aux, acc), w in states.items():
                if qtwist is not None and aux == 1:
                    w = w * qtwist[j - 1]
                for (a2, b2, wf) in wt[(aux, bits[j - 1])]:
                    key = (a2, acc + ((j, b2),))
                    if key in new:
                        new[key] = new[key] + w * wf
                    else:
                        new[key] = w * wf
            states = new
        comps = {}
        for (aux, acc), w in states.items():
            if aux != aux_out:
                continue
            bits_out = [0] * N
            for j, b in acc:
                bits_out[j - 1] = b
            lam2 = BoxPartition.from_string("".join(map(str, bits_out)))
            prev = comps.get(lam2)
            comps[lam2] = w * c if prev is None else prev + w * c
        out = out + SpinVector(ctx, n_out, comps)
    return out


def apply_monodromy_entry(ctx, which, x, v, qtwist=None):
    """Spec-level entry point; which is one of A,B,C,D,A',B',C',D' etc."""
    family = "plain"
    name = which
    if which.endswith("'"):
        family, name = "prime", which[:-1]
    elif which.endswith("v"):
        family, name = "vee", which[:-1]
    elif which.endswith("*"):
        family, name = "star", which[:-1]
    return monodromy_apply(ctx, family, name, x, v, qtwist=qtwist)


# -- transfer matrices -----------------------------------------------------------


def q_gen(ctx):
    return QSeries.gen(ctx)


def transfer_apply(ctx, kind, x, v, engine="algebraic", q_value=None):
    """H = A + qD or E = A' + qD' applied to a spin vector."""
    if kind not in ("H", "E"):
        raise ValueError("kind must be H or E")
    if engine == "algebraic":
        fam = "plain" if kind == "H" else "prime"
        va = monodromy_apply(ctx, fam, "A", x, v)
        vd = monodromy_apply(ctx, fam, "D", x, v)
        q = q_value if q_value is not None else q_gen(ctx)
        return va + vd.scale(q)
    if engine == "combinatorial":
        return _transfer_comb(ctx, kind, x, v, q_value=q_value)
    raise ValueError("unknown engine %r" % engine)


def _site_index(N, n, i, j):
    """t-index n + c(s) for the cell (i, j), normalized into 1..N.

    Contents of equivalent cells differ by multiples of N, and the local
    vertex weights only ever involve genuine sites, so the normalized
    representative is the right one for every boundary set.
    """
    return (n + (j - i) - 1) % N + 1


def _comb_weight_H(ctx, x, diag, q):
    N = ctx.N
    n = diag.n
    w = QSeries.const(ctx, ctx.one)
    for (i, j) in diag.cbar_set():
        w = w * ctx.ominus(x, ctx.t(_site_index(N, n, i, j)))
    for (i, j) in diag.r_set():
        w = w * (ctx.ominus(x, ctx.t(_site_index(N, n, i, j))) * ctx.beta + 1)
    for _ in range(diag.d):
        w = w * q
    return w


def _comb_weight_E(ctx, x, diag, q):
    N = ctx.N
    n = diag.n
    w = QSeries.const(ctx, ctx.one)
    for (i, j) in diag.rbar_set():
        w = w * ctx.oplus(x, ctx.t(_site_index(N, n, i, j)))
    for (i, j) in diag.c_set():
        w = w * (ctx.oplus(x, ctx.t(_site_index(N, n, i, j))) * ctx.beta + 1)
    for _ in range(diag.d):
        w = w * q
    return w


def _transfer_comb(ctx, kind, x, v, q_value=None):
    from .toric import enumerate_toric_strips
    n = v.n
    N = ctx.N
    q = q_value if q_value is not None else q_gen(ctx)
    if n > N - n:
        # route through the particle-hole involution into the small sector
        ctx2 = ctx.reversed_neg()
        other = "E" if kind == "H" else "H"
        w = theta_apply(ctx, v)
        w = _transfer_comb(ctx2, other, x, w, q_value=q_value)
        return theta_apply(ctx, w)
    out = SpinVector(ctx, n)
    strip_kind = "horizontal" if kind == "H" else "vertical"
    for mu, c in v.comps.items():
        comps = {}
        for lam, d, diag, _sets in enumerate_toric_strips(mu, strip_kind):
            w = (_comb_weight_H(ctx, x, diag, q) if kind == "H"
                 else _comb_weight_E(ctx, x, diag, q))
            prev = comps.get(lam)
            comps[lam] = w * c if prev is None else prev + w * c
        out = out + SpinVector(ctx, n, comps)
    return out


def theta_apply(ctx, v):
    """Particle-hole involution v_lam -> v_lam' (sector n -> N-n)."""
    return SpinVector(ctx, ctx.N - v.n,
                      {lam.prime(): c for lam, c in v.comps.items()})


def transfer_operator(ctx, n, kind, x, engine="algebraic", q_value=None):
    return LinearOperator.from_action(
        ctx, n, lambda v: transfer_apply(ctx, kind, x, v, engine, q_value))


# -- coefficient extraction -------------------------------------------------------


def _monomial_operator_coeffs(ctx, n, kind, deg):
    """Operator coefficients of the x-polynomial H(x) resp. E(x) on V_n."""
    nodes = [ctx.from_int(m) for m in range(deg + 1)]
    ops = [transfer_operator(ctx, n, kind, u) for u in nodes]
    # exact inverse-Vandermonde combination: c_m = sum_i w_{m,i} Op(u_i)
    import itertools
    from fractions import Fraction
    size = deg + 1
    mat = [[Fraction(i ** m) for m in range(size)] for i in range(size)]
    inv = _invert_fraction_matrix(mat)
    coeffs = []
    for m in range(size):
        acc = LinearOperator.zero(ctx, n)
        for i in range(size):
            w = inv[m][i]
            if w:
                acc = acc + ops[i].scale(ctx.from_fraction(w))
        coeffs.append(acc)
    # degree check at two extra nodes
    for extra in (deg + 1, deg + 2):
        u = ctx.from_int(extra)
        expect = transfer_operator(ctx, n, kind, u)
        acc = LinearOperator.zero(ctx, n)
        for m in range(size):
            acc = acc + coeffs[m].scale(ctx.from_int(extra ** m))
        if not acc == expect:
            raise QhError("transfer matrix degree exceeds %d" % deg)
    return coeffs


def _invert_fraction_matrix(mat):
    from fractions import Fraction
    size = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(size)]
           for i, row in enumerate(mat)]
    for c in range(size):
        piv = next(i for i in range(c, size) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for i in range(size):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[size:] for row in aug]


def _factorial_basis_monomials(ctx, params, deg):
    """Monomial coefficients of (x|s)^m for m = 0..deg; B[m][j] = [x^j]."""
    rows = [[ctx.one]]
    for m in range(1, deg + 1):
        s = params(m)
        prev = rows[-1]
        row = [ctx.zero] * (m + 1)
        grow = s * ctx.beta + 1
        for j, c in enumerate(prev):
            row[j] = row[j] + c * s
            row[j + 1] = row[j + 1] + c * grow
        rows.append(row)
    return rows


def extract_transfer_coefficients(ctx, n, kind, shift=0):
    """The operators H_1..H_k (kind 'H') or E_1..E_n (kind 'E').

    With a shift p the expansion uses the shifted factorial powers; the
    boundary coefficient beyond the top one is taken to vanish, matching the
    interpolation formulas at the natural parameter nodes.
    """
    cache = getattr(ctx, "_transfer_coeff_cache", None)
    if cache is None:
        cache = {}
        ctx._transfer_coeff_cache = cache
    key = (n, kind, shift)
    if key in cache:
        return cache[key]
    k = ctx.N - n
    deg = k if kind == "H" else n
    mono = _monomial_operator_coeffs(ctx, n, kind, deg)
    params = params_neg_t_rev(ctx, shift) if kind == "H" else params_t(ctx, shift)
    basis = _factorial_basis_monomials(ctx, params, deg)
    # triangular change of basis: mono[j] = sum_m fac_coeff[m]*basis[m][j]
    fac = [None] * (deg + 1)
    rem = list(mono)
    for m in range(deg, -1, -1):
        lead = basis[m][m]
        try:
            inv_lead = 1 / lead
        except ZeroDivisionError:
            raise DegenerateNodes("factorial basis is degenerate") from None
        fac[m] = rem[m].scale(QSeries.const(ctx, inv_lead))
        for j in range(m + 1):
            rem[j] = rem[j] - fac[m].scale(QSeries.const(ctx, basis[m][j]))
    # c_r multiplies (x|s)^(deg-r); solve X_r = c_r - beta*X_{r+1} upward
    ops = [None] * (deg + 2)
    ops[deg + 1] = LinearOperator.zero(ctx, n)
    beta = QSeries.const(ctx, ctx.beta)
    for r in range(deg, 0, -1):
        c_r = fac[deg - r]
        ops[r] = c_r - ops[r + 1].scale(beta)
    result = ops[1:deg + 1]
    cache[key] = result
    return result


# -- braid, Hecke and symmetric-group operators -------------------------------------


def _pair_indices(ctx, j):
    if not 1 <= j <= ctx.N:
        raise QhError("index out of range")
    return j, (j % ctx.N) + 1


def rhat_apply(ctx, j, v, q_value=None):
    """Braid matrix r-hat_j acting on a spin vector (j = N is affine)."""
    a, b = _pair_indices(ctx, j)
    affine = (j == ctx.N)
    if affine and q_value is None:
        raise QNotInvertible("j = N needs an invertible quantum parameter")
    ominus = ctx.ominus(ctx.t(b), ctx.t(a))
    diag = ominus * ctx.beta + 1
    off = ominus
    if affine:
        try:
            qinv = (QSeries.const(ctx, ctx.one) / q_value
                    if isinstance(q_value, QSeries)
                    else QSeries.const(ctx, 1 / q_value))
        except ZeroDivisionError:
            raise QNotInvertible("quantum parameter is zero") from None
    out = SpinVector(ctx, v.n)
    for lam, c in v.comps.items():
        bits = lam.to_string()
        if bits[a - 1] == "0" and bits[b - 1] == "1":
            swapped = list(bits)
            swapped[a - 1], swapped[b - 1] = "1", "0"
            lam2 = BoxPartition.from_string("".join(swapped))
            w2 = c * off
            if affine:
                w2 = w2 * qinv
            out = out + SpinVector(ctx, v.n, {lam: c * diag, lam2: w2})
        else:
            out = out + SpinVector(ctx, v.n, {lam: c})
    return out


def delta_apply(ctx, j, v, q_value=None):
    """Generalized divided-difference generator acting on a spin vector."""
    a, b = _pair_indices(ctx, j)
    affine = (j == ctx.N)
    if affine:
        if q_value is None:
            raise QNotInvertible("j = N needs an invertible quantum parameter")
        qinv = (QSeries.const(ctx, ctx.one) / q_value
                if isinstance(q_value, QSeries)
                else QSeries.const(ctx, 1 / q_value))
    out = SpinVector(ctx, v.n)
    for lam, c in v.comps.items():
        bits = lam.to_string()
        if bits[a - 1] == "0" and bits[b - 1] == "1":
            swapped = list(bits)
            swapped[a - 1], swapped[b - 1] = "1", "0"
            lam2 = BoxPartition.from_string("".join(swapped))
            w2 = c if not affine else c * qinv
            out = out + SpinVector(ctx, v.n,
                                   {lam: c * ctx.beta, lam2: w2})
    return out


def sbold_apply(ctx, j, v, q_value=None):
    """Symmetric-group action: parameter swap followed by the braid matrix.

    Needs symbolic mode (the swap acts inside the scalar coefficients); for
    rational parameters use the two-context formulation instead.
    """
    a, b = _pair_indices(ctx, j)
    affine = (j == ctx.N)
    if affine and q_value is None:
        raise QNotInvertible("j = N needs an invertible quantum parameter")
    swapped_coeffs = SpinVector(
        ctx, v.n,
        {lam: QSeries(ctx, [_swap_scalar(ctx, j, c) for c in coeff.coeffs],
                      coeff.order)
         for lam, coeff in v.comps.items()})
    # after the swap the braid matrix carries swapped arguments
    ominus = ctx.ominus(ctx.t(a), ctx.t(b))
    diag = ominus * ctx.beta + 1
    if affine:
        qinv = (QSeries.const(ctx, ctx.one) / q_value
                if isinstance(q_value, QSeries)
                else QSeries.const(ctx, 1 / q_value))
    out = SpinVector(ctx, v.n)
    for lam, c in swapped_coeffs.comps.items():
        bits = lam.to_string()
        if bits[a - 1] == "0" and bits[b - 1] == "1":
            swapped = list(bits)
            swapped[a - 1], swapped[b - 1] = "1", "0"
            lam2 = BoxPartition.from_string("".join(swapped))
            w2 = c * ominus
            if affine:
                w2 = w2 * qinv
            out = out + SpinVector(ctx, v.n, {lam: c * diag, lam2: w2})
        else:
            out = out + SpinVector(ctx, v.n, {lam: c})
    return out


def _swap_scalar(ctx, j, s):
    if ctx.kind != "symbolic":
        raise QhError("sbold needs symbolic scalars; use swapped contexts "
                      "for rational parameters")
    return ctx.swap_t_in_scalar(s, j)


def hecke_and_symmetric_action(ctx, which, j, v, q_value=None):
    """Dispatch for the named operators rhat_j, sbold_j, delta_j, theta."""
    if which == "rhat_j":
        return rhat_apply(ctx, j, v, q_value=q_value)
    if which == "sbold_j":
        return sbold_apply(ctx, j, v, q_value=q_value)
    if which == "delta_j":
        return delta_apply(ctx, j, v, q_value=q_value)
    if which == "theta":
        return theta_apply(ctx, v)
    raise ValueError("unknown operator %r" % which)
