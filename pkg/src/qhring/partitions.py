"""Boxed partitions, binary strings and their discrete symmetries.

A partition living in the n x k box (N = n+k) is the same datum as a binary
string of length N with n one-letters; the letter positions form the index
set I.  All three encodings are used interchangeably by the higher layers.
"""

from functools import total_ordering

from .errors import BoxMismatch


@total_ordering
class BoxPartition:
    """Partition with at most n parts, each at most k, inside its box."""

    __slots__ = ("n", "k", "parts")

    def __init__(self, n, k, parts=()):
        parts = tuple(int(p) for p in parts if p)
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise BoxMismatch("parts must be weakly decreasing: %r" % (parts,))
        if any(p < 0 for p in parts):
            raise BoxMismatch("parts must be non-negative")
        if len(parts) > n:
            raise BoxMismatch("more than n=%d parts: %r" % (n, parts))
        if parts and parts[0] > k:
            raise BoxMismatch("first part exceeds k=%d: %r" % (k, parts))
        self.n = n
        self.k = k
        self.parts = parts

    # -- encodings -------------------------------------------------------------

    @property
    def N(self):
        return self.n + self.k

    def part(self, i):
        """lambda_i with zero padding, 1-based."""
        if 1 <= i <= len(self.parts):
            return self.parts[i - 1]
        return 0

    def padded(self):
        return tuple(self.part(i) for i in range(1, self.n + 1))

    @property
    def size(self):
        return sum(self.parts)

    def index_set(self):
        """I = {lambda_{n+1-i} + i : i = 1..n}, the 1-letter positions."""
        return tuple(sorted(self.part(self.n + 1 - i) + i
                            for i in range(1, self.n + 1)))

    def to_string(self):
        bits = ["0"] * self.N
        for pos in self.index_set():
            bits[pos - 1] = "1"
        return "".join(bits)

    @classmethod
    def from_string(cls, bits):
        N = len(bits)
        ones = [i + 1 for i, b in enumerate(bits) if b == "1"]
        if set(bits) - {"0", "1"}:
            raise BoxMismatch("binary string may only contain 0 and 1")
        n = len(ones)
        k = N - n
        parts = sorted((pos - (i + 1) for i, pos in enumerate(ones)), reverse=True)
        return cls(n, k, parts)

    @classmethod
    def from_index_set(cls, n, k, index_set):
        bits = ["0"] * (n + k)
        for pos in index_set:
            bits[pos - 1] = "1"
        return cls.from_string("".join(bits))

    # -- containment and arithmetic ---------------------------------------------

    def contains(self, other):
        return all(self.part(i) >= other.part(i) for i in range(1, self.n + 1))

    def conjugate_parts(self):
        width = self.parts[0] if self.parts else 0
        return tuple(sum(1 for p in self.parts if p >= j)
                     for j in range(1, width + 1))

    # -- discrete symmetries -----------------------------------------------------

    def vee(self):
        """Poincare dual: reverse the binary string (complement in the box)."""
        return BoxPartition.from_string(self.to_string()[::-1])

    def star(self):
        """Level-rank dual: flip 0 and 1 letters (box transposes)."""
        flipped = "".join("1" if b == "0" else "0" for b in self.to_string())
        return BoxPartition.from_string(flipped)

    def prime(self):
        """Conjugate partition in the transposed box; prime = vee then star."""
        return self.vee().star()

    def s_j(self, j):
        """Exchange letters j and j+1 of the binary string (1 <= j <= N-1)."""
        b = list(self.to_string())
        b[j - 1], b[j] = b[j], b[j - 1]
        return BoxPartition.from_string("".join(b))

    # -- cylindric loops ----------------------------------------------------------

    def ext(self, i):
        """Periodic extension lambda_{i+n} = lambda_i - k for any integer i."""
        q, r = divmod(i - 1, self.n)
        return self.part(r + 1) - self.k * q

    def loop(self, r, i):
        """lambda[r]_i, the cylindric loop shifted r steps along (1,1)."""
        return self.ext(i - r) + r

    def loop_window(self, r, lo, hi):
        return [self.loop(r, i) for i in range(lo, hi + 1)]

    # -- ordering / hashing ---------------------------------------------------------

    def sort_key(self):
        return (self.size, self.parts)

    def __eq__(self, other):
        return (isinstance(other, BoxPartition) and self.n == other.n
                and self.k == other.k and self.parts == other.parts)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash((self.n, self.k, self.parts))

    def __repr__(self):
        return "BP(%d,%d;%s)" % (self.n, self.k, list(self.parts))


def all_partitions(n, k):
    """Every partition in the n x k box, in the canonical (size, lex) order."""
    out = []

    def rec(prefix, maxpart):
        out.append(BoxPartition(n, k, prefix))
        if len(prefix) == n:
            return
        for p in range(1, maxpart + 1):
            rec(prefix + [p], p)

    rec([], k)
    out.sort(key=BoxPartition.sort_key)
    return out


def partitions_at_most(n, width):
    """Partitions with at most n parts, each at most width (no box attached)."""
    res = []

    def rec(prefix, maxpart):
        res.append(tuple(prefix))
        if len(prefix) == n:
            return
        for p in range(1, maxpart + 1):
            rec(prefix + [p], p)

    rec([], width)
    res.sort(key=lambda t: (sum(t), t))
    return res


def string_s_j(bits, j):
    b = list(bits)
    b[j - 1], b[j] = b[j], b[j - 1]
    return "".join(b)
