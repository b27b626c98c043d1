"""The index proper: FT/LT and the lcp sequence in dynamic form.

Lex ranks are 1-based throughout.  FT holds the signature head of the
conjugate at each rank, LT the signature head of the one-step-back
conjugate; both are stored in a DynSeq with the terminator shifted in as
0 (plain value v is stored as v + 1) so that the terminator sorts below
every plain value.  The lcp sequence is stored unshifted.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from .dynseq import DynSeq
from .encodings import DOLLAR, preprocess_pattern

DOLLAR_RANK = 0


def to_stored(sym) -> int:
    """Encode a signature symbol (DOLLAR or int >= 0) for FT/LT storage."""
    return DOLLAR_RANK if sym is DOLLAR else int(sym) + 1


def from_stored(v: int):
    """Decode an FT/LT storage rank back to DOLLAR or a plain int."""
    return DOLLAR if v == DOLLAR_RANK else v - 1


@dataclass
class ConjRange:
    """A lex-rank interval [lo..hi]; empty whenever hi < lo."""

    lo: int
    hi: int

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    def __len__(self) -> int:
        return 0 if self.is_empty else self.hi - self.lo + 1

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))


EMPTY_RANGE = ConjRange(1, 0)


@dataclass
class TextMeta:
    """Per-text bookkeeping.

    ident is the text's 1-based position in the user's input order (the
    id reported by locate and stored in the file header); length its
    symbol count.  The remaining fields exist only on indexes built in
    this process: root is the signature-root length (the cycle size of
    the one-step-back permutation) and anchor a known (rank, start)
    correspondence — the lex rank of the conjugate starting at text
    position 2 (position 1 for one-symbol texts).  The text's remaining
    walk cycles hang off it arithmetically, one per descending rank; the
    exact pairing lives in builder.cycle_anchors.  Deserialized indexes
    leave root/anchor None; locate then relies purely on the stored
    samples.
    """

    ident: int
    length: int
    root: Optional[int] = None
    anchor: Optional[int] = None


class CbwtIndex:
    """Dynamic index over a multiset of circular texts.

    Supports count/backward-search queries at any point between
    construction steps; the builder module grows it one text at a time.
    """

    def __init__(self, bound_hint: int = 16, capacity_hint: int = 16):
        bound = max(2, bound_hint)
        self.ft = DynSeq(bound, capacity=capacity_hint)
        self.lt = DynSeq(bound, capacity=capacity_hint)
        self.lcp = DynSeq(bound, capacity=capacity_hint)
        self.e_marks = DynSeq(1, capacity=capacity_hint)
        self.texts: list[TextMeta] = []
        self.samples = None  # locator.SampleStore once attached

    # ------------------------------------------------------------ basics

    @property
    def n(self) -> int:
        return len(self.ft)

    @property
    def d(self) -> int:
        return len(self.texts)

    def ensure_room(self, n_total: int) -> None:
        """Make value bound and capacity sufficient for n_total rows."""
        bound = n_total + 2
        for seq in (self.ft, self.lt, self.lcp):
            if seq.alphabet_bound < bound:
                grown = DynSeq(bound, values=seq.to_list(),
                               capacity=max(n_total, 16))
                if seq is self.ft:
                    self.ft = grown
                elif seq is self.lt:
                    self.lt = grown
                else:
                    self.lcp = grown

    def ft_values(self) -> list:
        return [from_stored(v) for v in self.ft.to_list()]

    def lt_values(self) -> list:
        return [from_stored(v) for v in self.lt.to_list()]

    def lcp_values(self) -> list[int]:
        return self.lcp.to_list()

    def text_offsets(self) -> dict[int, int]:
        """ident -> 0-based start of that text in the input concatenation."""
        metas = sorted(self.texts, key=lambda tm: tm.ident)
        out = {}
        off = 0
        for tm in metas:
            out[tm.ident] = off
            off += tm.length
        return out

    # ------------------------------------------------------- permutations

    def lf(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"rank {i} not in [1..{self.n}]")
        c = self.lt.access(i)
        return self.ft.select(c, self.lt.rank(c, i))

    def fl(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"rank {i} not in [1..{self.n}]")
        c = self.ft.access(i)
        return self.lt.select(c, self.ft.rank(c, i))

    # ------------------------------------------------------------ queries

    def crange_update(self, rng: ConjRange, h: int, e: int) -> ConjRange:
        """Shrink the conjugate range by one prepended pattern symbol.

        h is the number of stack pops the symbol causes and e the stack
        height it leaves (both from preprocess_pattern); rng must be the
        range of the one-symbol-shorter suffix.
        """
        if rng.is_empty:
            return EMPTY_RANGE
        lo, hi = rng.lo, rng.hi
        lt, lcp = self.lt, self.lcp
        ab = lt.alphabet_bound
        hs = h + 1  # stored form
        if e > 1:
            c = lt.rangecount(lo, hi, hs, hs)
            if c == 0:
                return EMPTY_RANGE
            x = lt.select(hs, lt.rank(hs, hi))
            new_hi = self.lf(x)
        else:
            c = lt.rangecount(lo, hi, hs, ab)
            if c == 0:
                return EMPTY_RANGE
            v = lt.rnv(lo, hi, h)  # smallest stored value above h, i.e. >= hs
            x = lt.select(v, lt.rank(v, hi))
            _, r2 = lcp.mi(x, v)   # lcp threshold (v-1)+1 in plain terms
            y = (lt.rangecount(lo, x - 1, hs, ab)
                 + lt.rangecount(x + 1, r2, hs, ab))
            new_hi = self.lf(x) + c - (y + 1)
        return ConjRange(new_hi - c + 1, new_hi)

    def backward_search(self, pattern) -> ConjRange:
        """Conjugate range of the pattern: ranks whose rotations match it."""
        pattern = list(pattern)
        if any(v is DOLLAR for v in pattern):
            raise ValueError("patterns are terminator-free")
        rng = ConjRange(1, self.n)
        if not pattern:
            return rng
        ctx = preprocess_pattern(pattern)
        for i in range(len(pattern) - 1, -1, -1):
            rng = self.crange_update(rng, ctx.h[i], ctx.e[i])
            if rng.is_empty:
                return EMPTY_RANGE
        return rng

    def count(self, pattern) -> int:
        return len(self.backward_search(pattern))

    # ------------------------------------------------------ serialization

    def serialize(self) -> str:
        """Versioned text format; deterministic, hence diffable."""
        lines = ["CBWT 1", f"{self.n} {self.d}"]
        for tm in self.texts:
            lines.append(f"{tm.ident} {tm.length}")

        def tok(v):
            return "$" if v == DOLLAR_RANK else str(v - 1)

        lines.append(" ".join(tok(v) for v in self.ft.to_list()))
        lines.append(" ".join(tok(v) for v in self.lt.to_list()))
        lines.append(" ".join(str(v) for v in self.lcp.to_list()))
        if self.samples is None:
            lines.append("SAMPLES 0 0")
        else:
            entries = sorted(self.samples.entries.items())
            lines.append(f"SAMPLES {self.samples.rate} {len(entries)}")
            for lexpos, conjstart in entries:
                lines.append(f"{lexpos} {conjstart}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    @classmethod
    def deserialize(cls, data: str) -> "CbwtIndex":
        lines = data.splitlines()
        try:
            if lines[0].strip() != "CBWT 1":
                raise ValueError(f"unsupported header {lines[0]!r}")
            n, d = map(int, lines[1].split())
            metas = []
            for k in range(d):
                ident, length = map(int, lines[2 + k].split())
                metas.append(TextMeta(ident=ident, length=length))

            def untok(t):
                return DOLLAR_RANK if t == "$" else int(t) + 1

            if sum(m.length for m in metas) != n:
                raise ValueError("text lengths disagree with header")
            ft_line, lt_line, lcp_line = lines[2 + d:5 + d]
            ft = [untok(t) for t in ft_line.split()]
            lt = [untok(t) for t in lt_line.split()]
            lcp = [int(t) for t in lcp_line.split()]
            if not len(ft) == len(lt) == len(lcp) == n:
                raise ValueError("array length disagrees with header")
            sample_head = lines[5 + d].split()
            if sample_head[0] != "SAMPLES":
                raise ValueError("missing SAMPLES section")
            rate, k = int(sample_head[1]), int(sample_head[2])
            entries = {}
            for t in range(k):
                lexpos, conjstart = map(int, lines[6 + d + t].split())
                entries[lexpos] = conjstart
        except (IndexError, ValueError) as exc:
            raise ValueError(f"malformed index file: {exc}") from exc
        idx = cls(bound_hint=n + 2, capacity_hint=max(n, 16))
        for t, v in enumerate(ft):
            idx.ft.insert(t + 1, v)
        for t, v in enumerate(lt):
            idx.lt.insert(t + 1, v)
        for t, v in enumerate(lcp):
            idx.lcp.insert(t + 1, v)
        for t in range(n):
            idx.e_marks.insert(t + 1, 0)
        idx.texts = metas
        if rate > 0:
            from .locator import SampleStore
            idx.samples = SampleStore.from_entries(idx, rate, entries)
        return idx
