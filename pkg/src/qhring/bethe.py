"""Bethe ansatz equations: exact q-series roots and numeric homogeneous roots.

The equivariant equations are solved by Newton iteration over truncated
q-series starting from the exact q=0 seed y = t_lambda; the Jacobian is
diagonal at the seed, so every step is an exact linear solve.  The
homogeneous (t=0) equations decouple at beta=0 into N-th roots of q, which
seed a complex Newton iteration.
"""

import cmath
from dataclasses import dataclass

from .errors import GenericityViolation, NonConvergence, QhError
from .grothendieck import g_determinant, params_neg_t, params_neg_t_rev
from .lattice import SpinVector
from .partitions import BoxPartition, all_partitions
from .qseries import QSeries


@dataclass(frozen=True)
class BetheRootVector:
    label: BoxPartition
    roots: tuple          # QSeries, ascending by the index set of label
    order: int

    @property
    def index_set(self):
        return self.label.index_set()


def _pi(ctx, values):
    acc = QSeries.const(ctx, ctx.one)
    for v in values:
        acc = acc * (v * ctx.beta + 1)
    return acc


def pi_t(ctx, lam):
    """Pi(t_lambda) = prod over the index set of (1 + beta t_i)."""
    acc = ctx.one
    for i in lam.index_set():
        acc = acc * (ctx.beta * ctx.t(i) + 1)
    return acc


def bae_residual(ctx, label, roots, order):
    """Left-hand sides of the coupled equations, as q-series."""
    n = label.n
    sign = -1 if n % 2 else 1
    piy = _pi(ctx, roots)
    q = QSeries.gen(ctx).truncate(order)
    out = []
    for i, y in enumerate(roots):
        g = piy
        for _ in range(n):
            g = g / (y * ctx.beta + 1)
        prod = QSeries.const(ctx, ctx.one).truncate(order)
        for j in range(1, ctx.N + 1):
            prod = prod * ctx.ominus(y, ctx.t(j))
        out.append(g * prod * sign + q)
    return out


def solve_bae_qseries(ctx, label, order):
    """Roots of the equations for the given label, correct to q^order."""
    if ctx.kind == "complexfloat":
        raise QhError("q-series solve needs exact arithmetic")
    if ctx.homogeneous:
        raise GenericityViolation("q-series roots need distinct t values")
    cache = getattr(ctx, "_bae_cache", None)
    if cache is None:
        cache = {}
        ctx._bae_cache = cache
    key = (label.n, label.parts, order)
    if key in cache:
        return cache[key]
    n = label.n
    N = ctx.N
    iset = label.index_set()
    ys = [QSeries.const(ctx, ctx.t(i)).truncate(order) for i in iset]
    sign = -1 if n % 2 else 1

    def tprod(z, skip=None):
        acc = QSeries.const(ctx, ctx.one).truncate(order)
        for j in range(1, N + 1):
            if j != skip:
                acc = acc * ctx.ominus(z, ctx.t(j))
        return acc

    for sweep in range(60):
        res = bae_residual(ctx, label, ys, order)
        if all(r.is_zero() for r in res):
            break
        piy = _pi(ctx, ys)
        jac = [[None] * n for _ in range(n)]
        for i in range(n):
            gi = piy
            for _ in range(n):
                gi = gi / (ys[i] * ctx.beta + 1)
            p = tprod(ys[i])
            pprime = QSeries.const(ctx, ctx.zero).truncate(order)
            for j in range(1, N + 1):
                pprime = pprime + tprod(ys[i], skip=j) / (ctx.beta * ctx.t(j) + 1)
            for j in range(n):
                if j == i:
                    dg = gi * ctx.beta * (1 - n) / (ys[i] * ctx.beta + 1)
                    jac[i][j] = (dg * p + gi * pprime) * sign
                else:
                    dg = gi * ctx.beta / (ys[j] * ctx.beta + 1)
                    jac[i][j] = dg * p * sign
        delta = _solve_series_system(ctx, jac, res, order)
        ys = [y - d for y, d in zip(ys, delta)]
    else:
        raise NonConvergence("Newton sweep limit hit; this signals a bug")
    result = BetheRootVector(label, tuple(ys), order)
    cache[key] = result
    return result


def _solve_series_system(ctx, mat, rhs, order):
    n = len(rhs)
    aug = [[mat[i][j] for j in range(n)] + [rhs[i]] for i in range(n)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if aug[i][c].constant != 0:
                piv = i
                break
        if piv is None:
            raise NonConvergence("singular Jacobian in the series solve")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c].inverse(order)
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def all_roots(ctx, n, order):
    return {lam: solve_bae_qseries(ctx, lam, order)
            for lam in all_partitions(n, ctx.N - n)}


# -- Bethe vectors, norms, idempotents ------------------------------------------------


def norm_e(ctx, rv):
    """e(y,y) by the Cauchy sum over the box."""
    n = rv.label.n
    pm = params_neg_t(ctx)
    pmr = params_neg_t_rev(ctx)
    total = None
    for mu in all_partitions(n, ctx.N - n):
        a = g_determinant(ctx, mu.parts, rv.roots, pm, n)
        b = g_determinant(ctx, mu.vee().parts, rv.roots, pmr, n)
        term = a * b / pi_t(ctx, mu)
        total = term if total is None else total + term
    return _pi(ctx, rv.roots) * total


def norm0(ctx, mu):
    """q = 0 norm: prod over I_mu x I_mu* of t_i (-) t_j."""
    acc = ctx.one
    istar = set(range(1, ctx.N + 1)) - set(mu.index_set())
    for i in mu.index_set():
        for j in sorted(istar):
            acc = acc * ctx.ominus(ctx.t(i), ctx.t(j))
    return acc


def bethe_vector(ctx, rv, normalized=False):
    """|y> = Pi(y) sum_mu G_{mu vee}(y|(-)t') / Pi(t_mu) v_mu."""
    n = rv.label.n
    pmr = params_neg_t_rev(ctx)
    piy = _pi(ctx, rv.roots)
    comps = {}
    for mu in all_partitions(n, ctx.N - n):
        g = g_determinant(ctx, mu.vee().parts, rv.roots, pmr, n)
        comps[mu] = piy * g / pi_t(ctx, mu)
    v = SpinVector(ctx, n, comps)
    if normalized:
        e = norm_e(ctx, rv)
        v = v.scale(e.inverse(rv.order))
    return v


# -- numeric homogeneous roots ----------------------------------------------------------


@dataclass(frozen=True)
class NumericBetheRoots:
    label: BoxPartition
    roots: tuple
    beta: complex
    q: complex
    residual_norm: float


def _bae0_residual(ys, N, n, beta, q):
    sign = 1 if (n - 1) % 2 == 0 else -1
    res = []
    for i, y in enumerate(ys):
        prod = y ** N
        for j, z in enumerate(ys):
            if j != i:
                prod *= (1 + beta * z) / (1 + beta * y)
        res.append(prod - sign * q)
    return res


def label_shifts(label):
    """Root labels (n+1)/2 + lambda_i - i as exact half-integers times 2."""
    n = label.n
    return tuple(n + 1 + 2 * (label.part(i) - i) for i in range(1, n + 1))


def solve_bae_homogeneous_numeric(label, N, beta, q, tol=1e-12, maxiter=200):
    """Newton solve of the t=0 equations from the free-fermion seed."""
    n = label.n
    if n + label.k != N:
        raise QhError("label does not match N")
    root_q = abs(q) ** (1.0 / N) * cmath.exp(1j * cmath.phase(q) / N)
    seeds = [root_q * cmath.exp(2j * cmath.pi * (s / 2.0) / N)
             for s in label_shifts(label)]
    ys = list(seeds)
    for it in range(maxiter):
        res = _bae0_residual(ys, N, n, beta, q)
        rn = max(abs(r) for r in res)
        if rn < tol:
            return NumericBetheRoots(label, tuple(ys), beta, q, rn)
        jac = [[0j] * n for _ in range(n)]
        for i in range(n):
            base = ys[i] ** N
            coupling = 1 + 0j
            for j in range(n):
                if j != i:
                    coupling *= (1 + beta * ys[j]) / (1 + beta * ys[i])
            for j in range(n):
                if j == i:
                    d = N * ys[i] ** (N - 1) * coupling
                    d += base * coupling * (-(n - 1) * beta / (1 + beta * ys[i]))
                    jac[i][j] = d
                else:
                    jac[i][j] = base * coupling * beta / (1 + beta * ys[j])
        try:
            delta = _solve_complex(jac, res)
        except ZeroDivisionError:
            raise NonConvergence("singular Jacobian at iteration %d" % it) from None
        ys = [y - d for y, d in zip(ys, delta)]
    raise NonConvergence("no convergence after %d iterations (residual %.3e)"
                         % (maxiter, rn))


def _solve_complex(mat, rhs):
    n = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for c in range(n):
        piv = max(range(c, n), key=lambda i: abs(aug[i][c]))
        if abs(aug[piv][c]) == 0:
            raise ZeroDivisionError
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def first_order_root_coefficient(ctx, label, i):
    """Closed-form q-coefficient of the root with index i (i in I_lambda)."""
    n = label.n
    sign = 1 if (n - 1) % 2 == 0 else -1
    num = (ctx.beta * ctx.t(i) + 1) ** (n + 1)
    den = pi_t(ctx, label)
    for j in range(1, ctx.N + 1):
        if j != i:
            den = den * ctx.ominus(ctx.t(i), ctx.t(j))
    return sign * num / den


def homogeneous_first_order(label, N, q, j_half):
    """Free-fermion root plus its first beta-correction at the given label."""
    zeta = cmath.exp(2j * cmath.pi / N)
    n = label.n
    sign = 1 if (n - 1) % 2 == 0 else -1
    root_q = abs(q) ** (1.0 / N) * cmath.exp(1j * cmath.phase(q) / N)
    zj = root_q * zeta ** (j_half / 2.0)
    corr = 0j
    for s in label_shifts(label):
        if s != j_half:
            corr += zeta ** (s / 2.0) - zeta ** (j_half / 2.0)
    first = sign * root_q ** 2 * zeta ** (j_half / 2.0) * corr
    return zj, first
