"""Occurrence reporting: sampled conjugate-array positions and locate.

A SampleStore pins a subset of lex ranks to their conjugate start
positions in the concatenated input.  Samples are placed along each
one-step walk cycle (text order, every rate-th step, step 0 always
included), so a locate walk runs at most rate-1 steps backwards and
never leaves its cycle; the start position is then the sample's start
plus the walked distance, with no further arithmetic.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional

from .builder import cycle_anchors, walk_cycle
from .core import CbwtIndex, TextMeta
from .dynseq import DynSeq


@dataclass
class SampleStore:
    """Sampled conjugate array: rate, mark bits, and rank -> start map.

    entries maps a marked lex rank to the 1-based position of its
    conjugate's start in the concatenation of the texts (input order).
    cycle_cover counts the walk cycles that received a sample, when
    known (None on deserialized stores).
    """

    rate: int
    marked: DynSeq
    entries: dict
    cycle_cover: Optional[int] = None

    @classmethod
    def from_entries(cls, index: CbwtIndex, rate: int, entries: dict):
        bits = [0] * index.n
        for pos in entries:
            if not 1 <= pos <= index.n:
                raise ValueError(f"sample rank {pos} out of range")
            bits[pos - 1] = 1
        return cls(rate, DynSeq(1, values=bits), dict(entries))

    @property
    def values(self) -> list:
        """Sampled conjugate starts, in lex order."""
        return [self.entries[p] for p in sorted(self.entries)]


def default_rate(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def _cycle_origin_pairs(index: CbwtIndex, tm: TextMeta):
    """One (rank, start) pair per walk cycle, at the cycle's first start.

    The anchor pairs sit at each cycle's second start position, so one
    lf step rebases them; walks from here advance monotonically, which
    keeps the sample + walked-distance arithmetic wrap-free.
    """
    for rank, start in cycle_anchors(tm):
        if tm.root == 1:
            yield rank, start
        else:
            yield index.lf(rank), start - 1


def _sample_text(index: CbwtIndex, store: SampleStore, tm: TextMeta,
                 base: int) -> None:
    for rank, start in _cycle_origin_pairs(index, tm):
        for step, (r, s) in enumerate(
                walk_cycle(index, rank, start, tm.root)):
            if step % store.rate == 0:
                if store.marked.access(r) == 0:
                    store.marked.set(r, 1)
                store.entries[r] = base + s
        store.cycle_cover = (store.cycle_cover or 0) + 1


def attach_samples(index: CbwtIndex, rate: Optional[int] = None) -> SampleStore:
    """Build and attach a SampleStore by walking every cycle of every text.

    Requires the construction anchors recorded by the builder; an index
    that was deserialized lacks them (its samples travel in the file).
    """
    if index.n == 0:
        raise ValueError("cannot sample an empty index")
    if rate is None:
        rate = default_rate(index.n)
    if rate < 1:
        raise ValueError("rate must be >= 1")
    for tm in index.texts:
        if tm.anchor is None or tm.root is None:
            raise RuntimeError(
                "construction-order error: text anchors are only available "
                "on indexes built in this process; deserialized indexes "
                "already carry their samples")
    store = SampleStore(int(rate), DynSeq(1, values=[0] * index.n), {},
                        cycle_cover=0)
    offsets = index.text_offsets()
    for tm in index.texts:
        _sample_text(index, store, tm, offsets[tm.ident])
    index.samples = store
    return store


def refresh_after_extension(index: CbwtIndex, patched_entries: dict) -> None:
    """Rebuild the attached store after one text was merged in.

    patched_entries map merge-adjusted lex ranks to (text id, local
    offset) pairs; they are recomposed against the post-merge global
    offsets, and the new text (last in index.texts) is sampled from its
    fresh anchor.
    """
    old = index.samples
    offsets = index.text_offsets()
    entries = {pos: offsets[tid] + off
               for pos, (tid, off) in patched_entries.items()}
    store = SampleStore.from_entries(index, old.rate, entries)
    store.cycle_cover = old.cycle_cover
    tm = index.texts[-1]
    _sample_text(index, store, tm, offsets[tm.ident])
    if old.cycle_cover is None:
        store.cycle_cover = None
    index.samples = store


def locate(index: CbwtIndex, store: SampleStore, pattern) -> set:
    """All (text id, 1-based start offset) whose conjugate matches pattern."""
    rng = index.backward_search(pattern)
    out = set()
    if rng.is_empty:
        return out
    offsets = index.text_offsets()
    metas = sorted(index.texts, key=lambda tm: tm.ident)
    bases = [offsets[tm.ident] for tm in metas]
    cap = store.rate * index.n
    for r in rng:
        cur, steps = r, 0
        while store.marked.access(cur) == 0:
            cur = index.lf(cur)
            steps += 1
            if steps > cap:
                raise RuntimeError(
                    "walk exceeded the sample cover; index and samples "
                    "disagree")
        g = store.entries[cur] + steps
        t = bisect_right(bases, g - 1) - 1
        out.add((metas[t].ident, g - bases[t]))
    return out
