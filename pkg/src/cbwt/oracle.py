"""Brute-force reference implementations for circular Cartesian-tree matching.

Everything here favors being obviously correct over being fast: conjugates are
materialized, sort keys are full encoded expansions, matching is literal
encoding equality.  The succinct index is tested against these functions, so
none of them may share machinery with it beyond the basic encoders.

Hard limit: collections with more than 64 total symbols are refused, which
keeps every routine comfortably polynomial at desk scale.
"""

from .encodings import (
    DOLLAR,
    lcp_count,
    parent_distance_encode,
    pd_order_key,
    pi_head,
    power_prefix,
    primitive_root_length,
    rotation,
    rotational_pd_encode,
)

ORACLE_LIMIT = 64


def build_cartesian_tree(seq):
    """Shape of the min-heap Cartesian tree of seq, ties resolved leftmost.

    Returned as nested (left, right) tuples with None for absent children,
    so two sequences match circularly-ignorant iff the tuples are equal.
    """
    if not seq:
        return None
    # Rightmost-spine construction; strict > keeps an earlier equal value
    # as the ancestor, which is exactly the leftmost-tie rule.
    nodes = [[None, None] for _ in seq]
    stack = []
    for i, v in enumerate(seq):
        last = None
        while stack and seq[stack[-1]] > v:
            last = stack.pop()
        nodes[i][0] = last
        if stack:
            nodes[stack[-1]][1] = i
        stack.append(i)
    root = stack[0]

    def freeze(i):
        if i is None:
            return None
        return (freeze(nodes[i][0]), freeze(nodes[i][1]))

    return freeze(root)


def ct_equal(u, w):
    """Do u and w (same length) have identical Cartesian trees?"""
    return len(u) == len(w) and build_cartesian_tree(u) == build_cartesian_tree(w)


def omega_key(seq, z):
    """Sort key deciding the circular preorder: encoded 3z-expansion."""
    pd = parent_distance_encode(power_prefix(seq, 3 * z))
    return tuple(pd_order_key(sym) for sym in pd)


def omega_compare(u, w):
    """-1, 0, 1 as u precedes, ties with, or follows w in the circular preorder."""
    z = max(len(u), len(w))
    ku = omega_key(u, z)
    kw = omega_key(w, z)
    return (ku > kw) - (ku < kw)


class BruteIndex:
    """All index arrays of a collection, computed by definition.

    Texts are taken in the order given; conjugate j (1-based) starts at the
    j-th position of their concatenation.  Lists are 0-based Python lists
    whose slot r-1 holds the value for lex rank (or conjugate number) r.
    """

    def __init__(self, texts):
        if not texts or any(len(t) == 0 for t in texts):
            raise ValueError("collection must be non-empty texts")
        self.texts = [list(t) for t in texts]
        self.n = sum(len(t) for t in self.texts)
        if self.n > ORACLE_LIMIT:
            raise ValueError(
                f"collection too large for oracle verification (n = {self.n} > {ORACLE_LIMIT})"
            )
        # conjugate tables, 1-based conjugate numbers
        self.conj_text = [0] * (self.n + 1)   # conjugate -> text position in input
        self.conj_start = [0] * (self.n + 1)  # conjugate -> 1-based start in its text
        self.conj_seq = [None] * (self.n + 1)
        j = 1
        for ti, t in enumerate(self.texts):
            for s in range(1, len(t) + 1):
                self.conj_text[j] = ti
                self.conj_start[j] = s
                self.conj_seq[j] = rotation(t, s - 1)
                j += 1
        z = max(len(t) for t in self.texts)
        keys = {j: omega_key(self.conj_seq[j], z) for j in range(1, self.n + 1)}
        self.ca = sorted(range(1, self.n + 1), key=lambda j: (keys[j], j))
        self.ica = [0] * (self.n + 1)
        for r, j in enumerate(self.ca, start=1):
            self.ica[j] = r
        # one-step-back permutation: wrap within the signature-root block
        self.roots = [primitive_root_length(rotational_pd_encode(t)) for t in self.texts]
        self.prev = [0] * (self.n + 1)
        off = 0
        for ti, t in enumerate(self.texts):
            w = self.roots[ti]
            for s in range(1, len(t) + 1):
                j = off + s
                if (s - 1) % w == 0:
                    self.prev[j] = j - 1 + w
                else:
                    self.prev[j] = j - 1
            off += len(t)
        self.lf = [self.ica[self.prev[self.ca[r]]] for r in range(self.n)]
        self.fl = [0] * self.n
        for r in range(1, self.n + 1):
            self.fl[self.lf[r - 1] - 1] = r
        self.ft = [pi_head(self.conj_seq[self.ca[r]]) for r in range(self.n)]
        self.lt = [pi_head(self.conj_seq[self.prev[self.ca[r]]]) for r in range(self.n)]
        self.lcp = [0] * self.n
        for r in range(1, self.n):
            self.lcp[r] = lcp_count(self.conj_seq[self.ca[r]], self.conj_seq[self.ca[r - 1]])

    def matching_conjugates(self, pattern):
        """Conjugate numbers whose circular expansion matches the pattern."""
        if any(v is DOLLAR for v in pattern):
            raise ValueError("patterns are terminator-free")
        m = len(pattern)
        if m == 0:
            return list(range(1, self.n + 1))
        target = parent_distance_encode(list(pattern))
        out = []
        for j in range(1, self.n + 1):
            pd = parent_distance_encode(power_prefix(self.conj_seq[j], m))
            if pd == target:
                out.append(j)
        return out

    def crange(self, pattern):
        """Lex-rank interval of matching conjugates: (lo, hi) 1-based, or None."""
        ranks = sorted(self.ica[j] for j in self.matching_conjugates(pattern))
        if not ranks:
            return None
        lo, hi = ranks[0], ranks[-1]
        assert ranks == list(range(lo, hi + 1)), "matches must form one lex interval"
        return (lo, hi)

    def count(self, pattern):
        return len(self.matching_conjugates(pattern))

    def locate(self, pattern):
        """Set of (1-based text position in input order, 1-based start offset)."""
        return {
            (self.conj_text[j] + 1, self.conj_start[j])
            for j in self.matching_conjugates(pattern)
        }


def brute_index(texts):
    return BruteIndex(texts)


def brute_count(texts, pattern):
    return BruteIndex(texts).count(pattern)


def brute_locate(texts, pattern):
    return BruteIndex(texts).locate(pattern)
