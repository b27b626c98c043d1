"""Compact-space construction of the index.

Three layers, bottom to top:

* ``extend_front`` / ``build_single_dollar``: grow the index of a single
  terminator-padded text one prepended symbol at a time (the hot loop
  lives in :mod:`cbwt._kernels`).
* ``build_single``: index an arbitrary circular text by building its
  four-fold padded power and filtering the surviving rows.
* ``next_helper`` / ``extend_with_text`` / ``build_collection``: extend an
  existing index by one more text via the marker-bit merge, processing
  texts in ascending length order.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .core import CbwtIndex, ConjRange, TextMeta, to_stored
from .dynseq import DynSeq
from .encodings import (
    DOLLAR,
    power_prefix,
    preprocess_pattern,
    primitive_root_length,
    rotational_pd_encode,
)


@dataclass
class ExtHelpers:
    """Rank bookkeeping for one rotation during an extension.

    cnt: how many indexed conjugates sort at or below the rotation;
    plcp/slcp: lcp value toward the rank directly below/above the
    rotation's insertion point (-1 when that neighbour does not exist,
    i.e. cnt = 0 or cnt = current size).
    """

    cnt: int
    plcp: int
    slcp: int


def _validate_plain_text(t):
    if not t:
        raise ValueError("texts must be non-empty")
    for v in t:
        if v is DOLLAR or not isinstance(v, (int, np.integer)) or v < 0:
            raise ValueError("texts are sequences of non-negative integers")


def _ensure_room(index: CbwtIndex, n_target: int) -> None:
    """Bound + capacity for n_target rows, for kernel-level mutation."""
    if index.ft.alphabet_bound < n_target + 2:
        index.ensure_room(n_target)
    for seq in (index.ft, index.lt, index.lcp):
        while int(seq._s[0][_k.META_NCAP]) < n_target:
            seq._grow()


# ------------------------------------------------------- single-text build

def extend_front(index: CbwtIndex, b, pi: int, y: int) -> int:
    """Prepend symbol b to the single indexed padded text.

    pi must be the signature head of the extended text (the number of
    minima-stack pops b causes) and y the lex rank of the pre-extension
    text among its own conjugates, as returned by the previous call.
    Returns the lex rank of the extended text.  The update depends on b
    only through pi; b is taken for interface clarity.
    """
    if b is DOLLAR:
        raise ValueError("only plain symbols can be prepended")
    rho = index.n
    _ensure_room(index, rho + 1)
    new_rank = int(_k.k_extend_front(
        index.ft._s, index.lt._s, index.lcp._s,
        int(pi), int(y), rho, index.ft.alphabet_bound, True))
    index.e_marks.insert(new_rank, 0)
    return new_rank


def build_single_dollar(symbols, ident: int = 1) -> CbwtIndex:
    """Index of one text that ends with its unique terminator."""
    r = list(symbols)
    if not r or r[-1] is not DOLLAR:
        raise ValueError("text must end with the terminator")
    plain = r[:-1]
    if any(v is DOLLAR for v in plain):
        raise ValueError("terminator must be unique")
    _validate_plain_text(plain) if plain else None
    rho = len(r)
    idx = CbwtIndex(bound_hint=rho + 2, capacity_hint=rho)
    arr = np.array([int(v) for v in plain] + [-1], dtype=np.int64)
    yt = DynSeq(1, capacity=rho)
    _, r2 = _k.k_build_dollar(idx.ft._s, idx.lt._s, idx.lcp._s, yt._s,
                              arr, 0, idx.ft.alphabet_bound)
    _k.k_wv_build(idx.lcp._s)  # the build loop defers the lcp wavelet
    idx.build_ops = (idx.ft.op_count + idx.lt.op_count
                     + idx.lcp.op_count + yt.op_count)
    idx.e_marks = DynSeq(1, values=[0] * rho, capacity=rho)
    root = primitive_root_length(rotational_pd_encode(r))
    idx.texts = [TextMeta(ident=ident, length=rho, root=root,
                          anchor=int(r2))]
    return idx


def build_single(text, ident: int = 1) -> CbwtIndex:
    """Index of one circular text, via its terminator-padded fourth power.

    The padded power is indexed front to back; a marker sequence records
    which rows correspond to rotations starting inside the first period,
    and those rows are filtered out into the final index (ft/lt copied,
    lcp re-derived as range minima between consecutive survivors).
    """
    t = [int(v) for v in text]
    _validate_plain_text(t)
    n = len(t)
    rho = 4 * n + 1
    bound = rho + 2
    bft = DynSeq(bound, capacity=rho)
    blt = DynSeq(bound, capacity=rho)
    blcp = DynSeq(bound, capacity=rho)
    yt = DynSeq(1, capacity=rho)
    arr = np.array(t * 4 + [-1], dtype=np.int64)
    _, r2 = _k.k_build_dollar(bft._s, blt._s, blcp._s, yt._s, arr, n, bound)
    reduction_ops = (bft.op_count + blt.op_count + blcp.op_count
                     + yt.op_count)
    idx = CbwtIndex(bound_hint=n + 2, capacity_hint=max(n, 16))
    _k.k_filter(bft._s, blt._s, blcp._s, yt._s,
                idx.ft._s, idx.lt._s, idx.lcp._s, n)
    anchor = yt.rank(1, int(r2))
    idx.e_marks = DynSeq(1, values=[0] * n, capacity=max(n, 16))
    idx.build_ops = reduction_ops
    root = primitive_root_length(rotational_pd_encode(t))
    idx.texts = [TextMeta(ident=ident, length=n, root=root, anchor=anchor)]
    return idx


# ------------------------------------------------------------- extension

def next_helper(index: CbwtIndex, pi, prev: ExtHelpers) -> ExtHelpers:
    """Helper values of a rotation from those of its left rotation.

    pi is the rotation's signature head (DOLLAR for the rotation that
    starts with the terminator); prev holds cnt/plcp/slcp of the rotation
    shifted one symbol left.  Queries the index read-only.
    """
    if pi is DOLLAR:
        return ExtHelpers(0, -1, 0)
    pi = int(pi)
    lt, lcp, ft = index.lt, index.lcp, index.ft
    ab = lt.alphabet_bound
    rho = index.n
    y, pl, sl = prev.cnt, prev.plcp, prev.slcp
    if sl >= pi + 1:
        l, r = lcp.mi(y + 1, pi + 1)
    elif pl >= pi + 1:
        l, r = lcp.mi(y, pi + 1)
    else:
        l, r = y + 1, y
    c = (lt.rangecount(y + 1, r, pi + 2, ab)
         + lt.rangecount(max(l, 1), y, pi + 1, ab))
    for i in range(min(pi, pl), 0, -1):
        rp = l - 1
        l, r = lcp.mi(y, i)
        c += lt.rangecount(max(l, 1), rp, i + 1, ab)
    if c == 0:
        p = -1
    else:
        flc = index.fl(c)
        if flc > y:
            p = 1
        else:
            e = pl if flc == y else min(pl, lcp.rnv(flc + 1, y, -1))
            p = e - pi + 1 if (ft.access(c) == pi + 1 and pi < e) else 1
    if c == rho:
        s = -1
    else:
        flc1 = index.fl(c + 1)
        if flc1 < y + 1:
            s = 1
        else:
            e = sl if flc1 == y + 1 else min(sl, lcp.rnv(y + 2, flc1, -1))
            s = e - pi + 1 if (ft.access(c + 1) == pi + 1 and pi < e) else 1
    return ExtHelpers(int(c), int(p), int(s))


def cycle_anchors(tm: TextMeta):
    """Yield one known (rank, start) pair per walk cycle of a text.

    The ranks anchor, anchor-1, ... hold one row of each walk cycle, all
    from one equivalence class; which cycle gets which rank is a free
    choice within the class, made here so that equivalent rows in rank
    order carry ascending start positions.  The pair sits at the cycle's
    second start (wrapping to the first for one-symbol cycles).
    """
    m, w = tm.length, tm.root
    c = m // w
    for j in range(c):
        yield tm.anchor - j, ((c - 1 - j) * w + 1) % m + 1


def walk_cycle(index: CbwtIndex, rank: int, start: int, root: int):
    """Yield (rank, start) along one forward walk cycle.

    Steps via fl; the start advances by one and wraps within its cycle
    block of `root` consecutive positions.
    """
    lo = (start - 1) // root * root + 1
    r, s = rank, start
    for step in range(root):
        yield r, s
        if step + 1 < root:
            r = index.fl(r)
            s = s + 1 if s < lo + root - 1 else lo
    return


def _conjugate_ranks(index: CbwtIndex) -> list:
    """start position -> lex rank, for a freshly built single-text index."""
    tm = index.texts[0]
    ranks = [0] * (tm.length + 1)
    for rank, start in cycle_anchors(tm):
        for r, s in walk_cycle(index, rank, start, tm.root):
            ranks[s] = r
    return ranks


def extend_with_text(index: CbwtIndex, text, ident=None, on_merged=None):
    """Extend the index by one more circular text, in place.

    Implements the marker-bit merge: a standalone index of the new text
    supplies its internal rows, per-rotation helper triples supply the
    insertion ranks (recorded in e_marks), and the two lcp passes stitch
    the boundaries.  ``on_merged``, if given, is called after the arrays
    are merged but before e_marks is cleared.
    """
    s = [int(v) for v in text]
    _validate_plain_text(s)
    if index.n == 0 or not index.texts:
        raise ValueError("extend requires a non-empty index")
    if index.e_marks.rank(1, index.n) != 0:
        raise RuntimeError("marker bits not cleared by previous extension")
    lam = len(s)
    rho = index.n
    _ensure_room(index, rho + lam)

    sub = build_single(s, ident=0)
    sub_anchor = sub.texts[0].anchor
    sub_root = sub.texts[0].root

    z = max([lam] + [tm.length for tm in index.texts])
    case_equal = not index.backward_search(power_prefix(s, 3 * z)).is_empty

    # helper triples for every rotation i (rotation i starts at text
    # position i+1, so i = lam is the text itself)
    triples = {}
    if case_equal:
        # every rotation coincides with indexed conjugates: the suffix
        # ranges of the long plain pattern read the values off directly
        pat = power_prefix(s, 4 * z)[1:]
        ctx = preprocess_pattern(pat)
        rng = ConjRange(1, rho)
        for i0 in range(len(pat) - 1, -1, -1):
            rng = index.crange_update(rng, ctx.h[i0], ctx.e[i0])
            if rng.is_empty:
                raise RuntimeError("rotation lost its matched conjugates")
            if i0 + 1 <= lam:
                r = rng.hi
                slcp = index.lcp.access(r + 1) if r < rho else -1
                triples[i0 + 1] = ExtHelpers(r, ctx.e[i0], slcp)
    else:
        # no rotation matches: run the helper recurrence around the
        # padded power, seeded at the terminator rotation
        vpat = power_prefix(s, 4 * z)
        ctx = preprocess_pattern(vpat)
        cur = ExtHelpers(0, -1, 0)
        for j in range(4 * z - 1, 0, -1):
            cur = next_helper(index, ctx.h[j], cur)
            if j <= lam:
                triples[j] = cur

    # mark insertion slots, most-shifted rotation first
    for i in range(lam, 0, -1):
        cnt = triples[i].cnt
        pos = index.e_marks.select(0, cnt) if cnt >= 1 else 0
        index.e_marks.insert(pos + 1, 1)

    # helper values reindexed by the new text's internal lex rank
    rank_of_start = _conjugate_ranks(sub)
    plcp_lex = [0] * (lam + 1)
    slcp_lex = [0] * (lam + 1)
    for i in range(1, lam + 1):
        k = rank_of_start[(i % lam) + 1]
        plcp_lex[k] = triples[i].plcp
        slcp_lex[k] = triples[i].slcp

    # remap anchors and samples of the already-indexed rows
    new_anchor = index.e_marks.select(1, sub_anchor)
    for tm in index.texts:
        if tm.anchor is not None:
            tm.anchor = index.e_marks.select(0, tm.anchor)
    patched_samples = None
    if index.samples is not None:
        # keep (ident, local offset): global offsets shift when the new
        # text's input id is lower than an already-indexed one's
        old_offsets = index.text_offsets()
        id_by_base = sorted((b, i) for i, b in old_offsets.items())

        def split(conj):
            k = bisect_right([b for b, _ in id_by_base], conj - 1) - 1
            base, tid = id_by_base[k]
            return tid, conj - base

        patched_samples = {
            index.e_marks.select(0, pos): split(conj)
            for pos, conj in index.samples.entries.items()
        }

    sub_ft = sub.ft.to_list()
    sub_lt = sub.lt.to_list()
    sub_lcp = sub.lcp.to_list()
    positions = [index.e_marks.select(1, k) for k in range(1, lam + 1)]
    for k in range(1, lam + 1):
        p = positions[k - 1]
        index.ft.insert(p, sub_ft[k - 1])
        index.lt.insert(p, sub_lt[k - 1])
        if p == 1:
            v = 0
        elif index.e_marks.access(p - 1) == 1:
            v = sub_lcp[k - 1]
        else:
            v = plcp_lex[k]
        index.lcp.insert(p, v)
    ntot = rho + lam
    for k in range(1, lam + 1):
        q = positions[k - 1] + 1
        if q <= ntot and index.e_marks.access(q) == 0:
            index.lcp.set(q, slcp_lex[k])

    if on_merged is not None:
        on_merged(index)

    if ident is None:
        ident = max(tm.ident for tm in index.texts) + 1
    index.texts.append(TextMeta(ident=ident, length=lam, root=sub_root,
                                anchor=new_anchor))

    for _ in range(lam):
        p = index.e_marks.select(1, 1)
        index.e_marks.set(p, 0)

    if index.samples is not None:
        from .locator import refresh_after_extension
        refresh_after_extension(index, patched_samples)
    return index


def build_collection(texts, idents=None) -> CbwtIndex:
    """Index a whole collection, shortest texts first.

    Input order fixes the text ids reported by locate; the build order
    (stable ascending length) only affects internals — the resulting
    arrays are order-independent.
    """
    lists = [[int(v) for v in t] for t in texts]
    if not lists:
        raise ValueError("empty collection")
    for t in lists:
        _validate_plain_text(t)
    if idents is None:
        idents = list(range(1, len(lists) + 1))
    order = sorted(range(len(lists)), key=lambda k: len(lists[k]))
    idx = build_single(lists[order[0]], ident=idents[order[0]])
    _ensure_room(idx, sum(len(t) for t in lists))
    for k in order[1:]:
        extend_with_text(idx, lists[k], ident=idents[k])
    return idx
