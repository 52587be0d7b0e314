"""Toric (cylindric) skew diagrams and the strip data feeding the transfer
matrices.

Cells live in Z x Z modulo the shift (n, -k); representatives carry row index
in 1..n.  A diagram lambda/d/mu collects the cells between the cylindric
loops lambda[d] and mu[0].  Horizontal strips have at most one cell per
column of the full periodic picture, vertical strips at most one cell per
row; both only occur with winding degree d in {0, 1} here.
"""

from .errors import QhError
from .partitions import BoxPartition, all_partitions


class ToricSkewDiagram:
    """The diagram theta = lambda/d/mu with its boundary data."""

    __slots__ = ("lam", "mu", "d", "n", "k")

    def __init__(self, lam, mu, d):
        if lam.n != mu.n or lam.k != mu.k:
            raise QhError("mismatched boxes")
        self.lam = lam
        self.mu = mu
        self.d = d
        self.n = lam.n
        self.k = lam.k

    def valid(self):
        """The two loops must not cross."""
        return all(self.lam.loop(self.d, i) >= self.mu.loop(0, i)
                   for i in range(1, self.n + 1))

    def cells(self):
        """Representative cells, rows 1..n."""
        out = []
        for i in range(1, self.n + 1):
            hi = self.lam.loop(self.d, i)
            lo = self.mu.loop(0, i)
            out.extend((i, j) for j in range(lo + 1, hi + 1))
        return out

    @property
    def size(self):
        return self.lam.size + self.d * (self.n + self.k) - self.mu.size

    # -- occupancy along the infinite picture -----------------------------------

    def _imax(self, seq_loop, j):
        """max { i : loop_i >= j } for a weakly decreasing loop accessor."""
        i = 0
        if seq_loop(i) >= j:
            while seq_loop(i + 1) >= j:
                i += 1
            return i
        while seq_loop(i) < j:
            i -= 1
        return i

    def _lam_imax(self, j):
        return self._imax(lambda i: self.lam.loop(self.d, i), j)

    def _mu_imax(self, j):
        return self._imax(lambda i: self.mu.loop(0, i), j)

    def column_count(self, j):
        """Number of theta-cells in column j of the full periodic picture."""
        return self._lam_imax(j) - self._mu_imax(j)

    def row_count(self, i):
        return self.lam.loop(self.d, i) - self.mu.loop(0, i)

    def is_horizontal_strip(self):
        if not self.valid():
            return False
        if any(self.row_count(i) > self.k for i in range(1, self.n + 1)):
            return False
        return all(self.column_count(j) <= 1 for j in range(1, self.k + 1))

    def is_vertical_strip(self):
        if not self.valid():
            return False
        return all(self.row_count(i) <= 1 for i in range(1, self.n + 1))

    def is_rook_strip(self):
        """At most one cell in every row and every column."""
        return self.is_horizontal_strip() and self.is_vertical_strip()

    # -- boundary sets for the transfer weights -----------------------------------

    def r_set(self):
        """One cell right of the end of each lambda[d]-row meeting theta."""
        out = []
        for i in range(1, self.n + 1):
            if self.row_count(i) > 0:
                out.append((i, self.lam.loop(self.d, i) + 1))
        return out

    def cbar_set(self):
        """Bottom cell of each mu-column (k column classes) missing theta."""
        out = []
        for j in range(1, self.k + 1):
            if self.column_count(j) == 0:
                out.append((self._mu_imax(j), j))
        return out

    def c_set(self):
        """Bottom cell of each lambda[d]-column class meeting theta."""
        out = []
        for j in range(1, self.k + 1):
            if self.column_count(j) > 0:
                out.append((self._lam_imax(j), j))
        return out

    def rbar_set(self):
        """Cell right of the end of each mu-row missing theta (rows 1..n)."""
        out = []
        for i in range(1, self.n + 1):
            if self.row_count(i) == 0:
                out.append((i, self.mu.loop(0, i) + 1))
        return out

    def r_count(self):
        return len(self.r_set())

    def c_count(self):
        return len(self.c_set())

    def __repr__(self):
        return "Toric(%r/%d/%r)" % (list(self.lam.parts), self.d,
                                    list(self.mu.parts))


def enumerate_toric_strips(mu, kind, maxboxes=None):
    """All (lambda, d) with lambda/d/mu a toric strip of the requested kind.

    Yields (lambda, d, diagram, boundary) where boundary is (R, Cbar) for
    horizontal strips and (Rbar, C) for vertical ones.
    """
    if kind not in ("horizontal", "vertical"):
        raise ValueError("kind must be horizontal or vertical")
    for lam in all_partitions(mu.n, mu.k):
        for d in (0, 1):
            diag = ToricSkewDiagram(lam, mu, d)
            if not diag.valid():
                continue
            if maxboxes is not None and diag.size > maxboxes:
                continue
            if kind == "horizontal":
                if diag.is_horizontal_strip():
                    yield lam, d, diag, (diag.r_set(), diag.cbar_set())
            else:
                if diag.is_vertical_strip():
                    yield lam, d, diag, (diag.rbar_set(), diag.c_set())
