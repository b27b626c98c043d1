"""Dynamic sequence of bounded non-negative integers, 1-based.

Thin validation layer over the numba kernels in :mod:`cbwt._kernels`; each
public call forwards to exactly one kernel invocation (``set`` to two), so
the kernel-side operation counter matches the number of sequence operations
performed through this API.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as _k


class DynSeq:
    """Mutable integer sequence supporting the queries the index needs.

    Besides insert/delete/access this provides rank, select, rangecount,
    rnv (smallest value above a threshold inside a range) and mi (maximal
    interval around a position whose interior stays >= a threshold), each
    in time polylogarithmic in the current length.

    Single-writer: no internal locking; hand a ``copy()`` to other threads
    if concurrent mutation is possible.
    """

    __slots__ = ("alphabet_bound", "_s")

    def __init__(self, alphabet_bound, values=(), capacity=None):
        if alphabet_bound < 0:
            raise ValueError("alphabet_bound must be non-negative")
        self.alphabet_bound = int(alphabet_bound)
        if capacity is None:
            capacity = max(16, 2 * len(values))
        self._s = _k.make_state(self.alphabet_bound, capacity)
        for t, v in enumerate(values):
            self.insert(t + 1, v)
        self._s[0][_k.META_OPS] = 0

    def __len__(self):
        return int(self._s[0][_k.META_N])

    @property
    def op_count(self):
        """Number of sequence operations performed since construction."""
        return int(self._s[0][_k.META_OPS])

    def _grow(self):
        old = self._s
        n = int(old[0][_k.META_N])
        ops = int(old[0][_k.META_OPS])
        buf = np.empty(n, dtype=np.int64)
        _k.k_dump(old, buf)
        self._s = _k.make_state(self.alphabet_bound,
                                2 * int(old[0][_k.META_NCAP]))
        for t in range(n):
            _k.k_ins(self._s, t + 1, buf[t])
        self._s[0][_k.META_OPS] = ops

    # ---------------------------------------------------------- mutation

    def insert(self, i, c):
        n = len(self)
        if not 1 <= i <= n + 1:
            raise IndexError(f"insert position {i} not in [1..{n + 1}]")
        if not 0 <= c <= self.alphabet_bound:
            raise ValueError(
                f"value {c} not in [0..{self.alphabet_bound}]")
        if n >= int(self._s[0][_k.META_NCAP]):
            self._grow()
        _k.k_ins(self._s, i, c)

    def delete(self, k):
        if not 1 <= k <= len(self):
            raise IndexError(f"delete position {k} not in [1..{len(self)}]")
        return int(_k.k_del(self._s, k))

    def set(self, i, c):
        """Replace position i (sugar for delete + insert: two operations)."""
        self.delete(i)
        self.insert(i, c)

    # ----------------------------------------------------------- queries

    def access(self, i):
        if not 1 <= i <= len(self):
            raise IndexError(f"position {i} not in [1..{len(self)}]")
        return int(_k.k_access(self._s, i))

    def rank(self, c, j):
        if not 0 <= j <= len(self):
            raise IndexError(f"rank prefix end {j} not in [0..{len(self)}]")
        if not 0 <= c <= self.alphabet_bound:
            return 0
        return int(_k.k_rank(self._s, c, j))

    def select(self, c, i):
        if i < 1:
            raise ValueError(f"occurrence index {i} must be >= 1")
        if not 0 <= c <= self.alphabet_bound or \
                i > int(_k.k_rank(self._s, c, len(self))):
            raise ValueError(f"fewer than {i} occurrences of {c}")
        return int(_k.k_select(self._s, c, i))

    def rangecount(self, i, j, c, d):
        if c > d:
            raise ValueError(f"empty value range [{c}..{d}]")
        if i > j:
            return 0
        if j > len(self):
            raise IndexError(f"range end {j} exceeds length {len(self)}")
        return int(_k.k_rangecount(self._s, i, j, c, d))

    def rnv(self, i, j, c):
        if not 1 <= i <= j <= len(self):
            raise IndexError(
                f"range [{i}..{j}] not within [1..{len(self)}]")
        out = int(_k.k_rnv(self._s, i, j, c))
        return None if out == -1 else out

    def mi(self, j, c):
        if not 1 <= j <= len(self):
            raise IndexError(f"position {j} not in [1..{len(self)}]")
        l, r = _k.k_mi(self._s, j, c)
        return int(l), int(r)

    # ------------------------------------------------------------- misc

    def to_list(self):
        buf = np.empty(len(self), dtype=np.int64)
        _k.k_dump(self._s, buf)
        return [int(v) for v in buf]

    def dump(self):
        """Debug dump: one value per line, decimal."""
        return "\n".join(str(v) for v in self.to_list())

    def copy(self):
        out = DynSeq.__new__(DynSeq)
        out.alphabet_bound = self.alphabet_bound
        out._s = tuple(a.copy() for a in self._s)
        return out

    def __repr__(self):
        n = len(self)
        if n <= 12:
            return f"DynSeq({self.to_list()!r})"
        return f"DynSeq(<{n} values>)"
