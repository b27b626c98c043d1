"""Numba kernels backing the dynamic sequence and the single-text build loop.

Layout
------
A sequence state is a plain tuple of numpy arrays (see ``make_state``):

    0  meta   int64[16]   0:n 1:raw-chunks 2:active-levels 3:maxval
                          4:alphabet-bound 5:n-capacity 7:op-counter
    1  rvals  int64[rcap, VCAP]      raw values, chunked
    2  rsz    int64[rcap]            raw chunk sizes (physical index)
    3  rmin   int64[rcap]            raw chunk minima (physical index)
    4  rord   int64[rcap]            logical order -> physical slot
    5  rfen   int64[rcap+1]          Fenwick tree over logical chunk sizes
    6  smin   int64[rcap//SCAP+2]    minima over SCAP logical chunks
    7  bwords uint64[LMAX, bcap, BW] wavelet bit chunks (level = bit index)
    8  bsz    int64[LMAX, bcap]      bit chunk sizes (physical)
    9  bones  int64[LMAX, bcap]      bit chunk popcounts (physical)
    10 bord   int64[LMAX, bcap]      per level logical -> physical
    11 bn     int64[LMAX]            chunk count per level
    12 bfen   int64[LMAX, bcap+1]    packed Fenwick per level; every node
                                     holds size-sum + ones-sum * 2^32, so one
                                     traversal yields both counts (sequences
                                     must stay shorter than 2^31 elements)
    13 btot   int64[LMAX, 2]         per level total bits / total ones

The raw mirror answers access / mi / range-minimum and serialization scans;
level ``b`` of the wavelet holds bit ``b`` of every element, so growing the
active level count (when a larger value arrives) only adds all-zero rows on
top and never reshuffles existing rows.  All positions are 1-based.
"""

from __future__ import annotations

import numpy as np
from numba import njit

VCAP = 128          # raw values per chunk
BW = 32             # 64-bit words per bit chunk (2048 bits)
BBITS = BW * 64
SCAP = 64           # raw chunks per superblock (range-min skip list)
INF64 = np.int64(np.iinfo(np.int64).max)

META_N = 0
META_RN = 1
META_NLEV = 2
META_MAX = 3
META_ABOUND = 4
META_NCAP = 5
META_OPS = 7


def make_state(alphabet_bound, capacity):
    """Allocate a fresh empty sequence state."""
    capacity = max(int(capacity), 16)
    lmax = max(1, int(alphabet_bound).bit_length())
    rcap = capacity // (VCAP // 2) + 4
    bcap = capacity // (BBITS // 2) + 4
    scap = rcap // SCAP + 2
    meta = np.zeros(16, dtype=np.int64)
    meta[META_ABOUND] = alphabet_bound
    meta[META_NCAP] = capacity
    meta[META_RN] = 1                       # one empty raw chunk
    rvals = np.zeros((rcap, VCAP), dtype=np.int64)
    rsz = np.zeros(rcap, dtype=np.int64)
    rmin = np.full(rcap, INF64, dtype=np.int64)
    # rord / bord rows stay permutations of the physical slots; the live
    # chunks are the first rn (resp. bn) entries, free slots follow
    rord = np.arange(rcap, dtype=np.int64)
    rfen = np.zeros(rcap + 1, dtype=np.int64)
    smin = np.full(scap, INF64, dtype=np.int64)
    bwords = np.zeros((lmax, bcap, BW), dtype=np.uint64)
    bsz = np.zeros((lmax, bcap), dtype=np.int64)
    bones = np.zeros((lmax, bcap), dtype=np.int64)
    bord = np.tile(np.arange(bcap, dtype=np.int64), (lmax, 1))
    bn = np.zeros(lmax, dtype=np.int64)
    bfen = np.zeros((lmax, bcap + 1), dtype=np.int64)
    btot = np.zeros((lmax, 2), dtype=np.int64)
    return (meta, rvals, rsz, rmin, rord, rfen, smin,
            bwords, bsz, bones, bord, bn, bfen, btot)


# ---------------------------------------------------------------- word ops

@njit(cache=True, inline="always")
def _popcnt(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + (
        (x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def _wsel(x, k):
    # position (0-based) of the k-th set bit of x, k in [1..popcount(x)]
    pos = 0
    span = 32
    while span:
        m = (np.uint64(1) << np.uint64(span)) - np.uint64(1)
        c = _popcnt(x & m)
        if k > c:
            k -= c
            x = x >> np.uint64(span)
            pos += span
        span >>= 1
    return pos


# ----------------------------------------------------------------- Fenwick

@njit(cache=True, inline="always")
def _fen_add(fen, size, li, delta):
    k = li + 1
    while k <= size:
        fen[k] += delta
        k += k & (-k)


@njit(cache=True, inline="always")
def _fen_prefix(fen, li):
    s = np.int64(0)
    k = li
    while k > 0:
        s += fen[k]
        k -= k & (-k)
    return s


@njit(cache=True, inline="always")
def _fen_locate(fen, size, pos):
    # smallest logical index li with prefix(li+1) >= pos;
    # returns (li, offset-within-chunk) with offset 1-based
    idx = 0
    rem = pos
    bit = np.int64(1)
    while (bit << 1) <= size:
        bit <<= 1
    while bit:
        nxt = idx + bit
        if nxt <= size and fen[nxt] < rem:
            rem -= fen[nxt]
            idx = nxt
        bit >>= 1
    return idx, rem


M32 = np.int64(0xFFFFFFFF)


@njit(cache=True, inline="always")
def _fen_locate2(fen, size, pos):
    # packed-tree variant of _fen_locate: descends on the size field and
    # accumulates the ones field along the way, so the caller also learns
    # how many set bits precede the located chunk
    idx = 0
    rem = pos
    ones = np.int64(0)
    bit = np.int64(1)
    while (bit << 1) <= size:
        bit <<= 1
    while bit:
        nxt = idx + bit
        if nxt <= size:
            v = fen[nxt]
            if (v & M32) < rem:
                rem -= v & M32
                ones += v >> 32
                idx = nxt
        bit >>= 1
    return idx, rem, ones


# ---------------------------------------------------------------- raw side

@njit(cache=True)
def _raw_rebuild(ds):
    # linear-time reconstruction after a chunk count change; entries of
    # rfen / smin beyond the live prefix are left stale, which is safe
    # because every traversal is bounded by the current chunk count
    meta, rvals, rsz, rmin, rord, rfen, smin = ds[0], ds[1], ds[2], ds[3], ds[4], ds[5], ds[6]
    rn = meta[META_RN]
    for li in range(rn):
        rfen[li + 1] = rsz[rord[li]]
    i = np.int64(1)
    while i <= rn:
        j = i + (i & (-i))
        if j <= rn:
            rfen[j] += rfen[i]
        i += 1
    ns = (rn + SCAP - 1) // SCAP
    for si in range(ns):
        smin[si] = INF64
    for li in range(rn):
        m = rmin[rord[li]]
        if m < smin[li // SCAP]:
            smin[li // SCAP] = m


@njit(cache=True, inline="always")
def _chunk_min(row, sz):
    m = INF64
    for t in range(sz):
        if row[t] < m:
            m = row[t]
    return m


@njit(cache=True)
def _super_refresh(ds, si):
    meta, rmin, rord, smin = ds[0], ds[3], ds[4], ds[6]
    rn = meta[META_RN]
    lo = si * SCAP
    hi = min(lo + SCAP, rn)
    m = INF64
    for li in range(lo, hi):
        if rmin[rord[li]] < m:
            m = rmin[rord[li]]
    smin[si] = m


@njit(cache=True)
def _raw_insert(ds, pos, v):
    meta, rvals, rsz, rmin, rord, rfen, smin = ds[0], ds[1], ds[2], ds[3], ds[4], ds[5], ds[6]
    n = meta[META_N]
    rn = meta[META_RN]
    if pos > n:
        li = rn - 1
        off = rsz[rord[li]] + 1
    else:
        li, off = _fen_locate(rfen, rn, pos)
    phys = rord[li]
    if rsz[phys] == VCAP:
        # split the full chunk, then redo the placement arithmetic
        half = VCAP // 2
        np_new = rord[rn]  # first free physical slot
        for t in range(half):
            rvals[np_new, t] = rvals[phys, half + t]
        rsz[np_new] = half
        rsz[phys] = half
        rmin[np_new] = _chunk_min(rvals[np_new], half)
        rmin[phys] = _chunk_min(rvals[phys], half)
        for k in range(rn, li + 1, -1):
            rord[k] = rord[k - 1]
        rord[li + 1] = np_new
        meta[META_RN] = rn + 1
        _raw_rebuild(ds)
        rn += 1
        if off > half:
            li += 1
            off -= half
            phys = np_new
    row = rvals[phys]
    for t in range(rsz[phys], off - 1, -1):
        row[t] = row[t - 1]
    row[off - 1] = v
    rsz[phys] += 1
    _fen_add(rfen, rn, li, 1)
    if v < rmin[phys]:
        rmin[phys] = v
        if v < smin[li // SCAP]:
            smin[li // SCAP] = v


@njit(cache=True)
def _raw_delete(ds, pos):
    meta, rvals, rsz, rmin, rord, rfen, smin = ds[0], ds[1], ds[2], ds[3], ds[4], ds[5], ds[6]
    rn = meta[META_RN]
    li, off = _fen_locate(rfen, rn, pos)
    phys = rord[li]
    row = rvals[phys]
    v = row[off - 1]
    for t in range(off - 1, rsz[phys] - 1):
        row[t] = row[t + 1]
    rsz[phys] -= 1
    _fen_add(rfen, rn, li, -1)
    if rsz[phys] == 0 and rn > 1:
        for k in range(li, rn - 1):
            rord[k] = rord[k + 1]
        rord[rn - 1] = phys
        rmin[phys] = INF64
        meta[META_RN] = rn - 1
        _raw_rebuild(ds)
    elif v == rmin[phys]:
        rmin[phys] = _chunk_min(row, rsz[phys])
        _super_refresh(ds, li // SCAP)
    return v


@njit(cache=True, inline="always")
def _raw_get(ds, pos):
    meta, rvals, rord, rfen = ds[0], ds[1], ds[4], ds[5]
    li, off = _fen_locate(rfen, meta[META_RN], pos)
    return rvals[rord[li], off - 1]


@njit(cache=True)
def _raw_mi(ds, j, c):
    meta, rvals, rsz, rmin, rord, rfen, smin = ds[0], ds[1], ds[2], ds[3], ds[4], ds[5], ds[6]
    n = meta[META_N]
    rn = meta[META_RN]
    lj, off = _fen_locate(rfen, rn, j)
    # left border: last x <= j with V[x] < c, else 0
    left = np.int64(0)
    row = rvals[rord[lj]]
    for t in range(off - 1, -1, -1):
        if row[t] < c:
            left = _fen_prefix(rfen, lj) + t + 1
            break
    if left == 0:
        li = lj - 1
        while li >= 0:
            si = li // SCAP
            if li % SCAP == SCAP - 1 and smin[si] >= c:
                li = si * SCAP - 1
                continue
            phys = rord[li]
            if rmin[phys] < c:
                row = rvals[phys]
                for t in range(rsz[phys] - 1, -1, -1):
                    if row[t] < c:
                        left = _fen_prefix(rfen, li) + t + 1
                        break
                break
            li -= 1
    # right border: first x > j with V[x] < c, minus one, else n
    right = n
    row = rvals[rord[lj]]
    found = False
    for t in range(off, rsz[rord[lj]]):
        if row[t] < c:
            right = _fen_prefix(rfen, lj) + t
            found = True
            break
    if not found:
        li = lj + 1
        while li < rn:
            si = li // SCAP
            if li % SCAP == 0 and si * SCAP + SCAP <= rn and smin[si] >= c:
                li = si * SCAP + SCAP
                continue
            phys = rord[li]
            if rmin[phys] < c:
                row = rvals[phys]
                for t in range(rsz[phys]):
                    if row[t] < c:
                        right = _fen_prefix(rfen, li) + t
                        found = True
                        break
                break
            li += 1
    return left, right


@njit(cache=True)
def _raw_range_min(ds, i, j):
    meta, rvals, rsz, rmin, rord, rfen = ds[0], ds[1], ds[2], ds[3], ds[4], ds[5]
    rn = meta[META_RN]
    li, offi = _fen_locate(rfen, rn, i)
    lj, offj = _fen_locate(rfen, rn, j)
    m = INF64
    if li == lj:
        row = rvals[rord[li]]
        for t in range(offi - 1, offj):
            if row[t] < m:
                m = row[t]
        return m
    row = rvals[rord[li]]
    for t in range(offi - 1, rsz[rord[li]]):
        if row[t] < m:
            m = row[t]
    row = rvals[rord[lj]]
    for t in range(offj):
        if row[t] < m:
            m = row[t]
    k = li + 1
    while k < lj:
        if k % SCAP == 0 and k + SCAP <= lj:
            v = ds[6][k // SCAP]
            k += SCAP
        else:
            v = rmin[rord[k]]
            k += 1
        if v < m:
            m = v
    return m


# ------------------------------------------------------------ bit vectors

@njit(cache=True)
def _bv_rebuild(ds, lev):
    # linear-time packed rebuild; stale nodes beyond the live chunk count
    # are never read because traversals are bounded by the current count
    bsz, bones, bord, bn, bfen = ds[8], ds[9], ds[10], ds[11], ds[12]
    cnt = bn[lev]
    fen = bfen[lev]
    for li in range(cnt):
        phys = bord[lev, li]
        fen[li + 1] = bsz[lev, phys] + (bones[lev, phys] << np.int64(32))
    i = np.int64(1)
    while i <= cnt:
        j = i + (i & (-i))
        if j <= cnt:
            fen[j] += fen[i]
        i += 1


@njit(cache=True, inline="always")
def _bv_totals(ds, lev):
    btot = ds[13]
    return btot[lev, 0], btot[lev, 1]


@njit(cache=True)
def _bv_insert(ds, lev, pos, bit):
    bwords, bsz, bones, bord, bn, bfen, btot = (
        ds[7], ds[8], ds[9], ds[10], ds[11], ds[12], ds[13])
    cnt = bn[lev]
    total = btot[lev, 0]
    if pos > total:
        li = cnt - 1
        off = bsz[lev, bord[lev, li]] + 1
    else:
        li, off, _ = _fen_locate2(bfen[lev], cnt, pos)
    phys = bord[lev, li]
    if bsz[lev, phys] == BBITS:
        half = BW // 2
        pnew = bord[lev, cnt]  # first free physical slot
        ones_moved = np.int64(0)
        for w in range(half):
            x = bwords[lev, phys, half + w]
            bwords[lev, pnew, w] = x
            bwords[lev, phys, half + w] = np.uint64(0)
            ones_moved += _popcnt(x)
        for w in range(half, BW):
            bwords[lev, pnew, w] = np.uint64(0)
        bsz[lev, pnew] = BBITS // 2
        bsz[lev, phys] = BBITS // 2
        bones[lev, pnew] = ones_moved
        bones[lev, phys] -= ones_moved
        for k in range(cnt, li + 1, -1):
            bord[lev, k] = bord[lev, k - 1]
        bord[lev, li + 1] = pnew
        bn[lev] = cnt + 1
        _bv_rebuild(ds, lev)
        cnt += 1
        if off > BBITS // 2:
            li += 1
            off -= BBITS // 2
            phys = pnew
    sz = bsz[lev, phys]
    wi = (off - 1) >> 6
    bi = (off - 1) & 63
    last = sz >> 6  # word that receives the final carried-out bit
    w = last
    while w > wi:
        bwords[lev, phys, w] = (bwords[lev, phys, w] << np.uint64(1)) | (
            bwords[lev, phys, w - 1] >> np.uint64(63))
        w -= 1
    x = bwords[lev, phys, wi]
    if bi == 0:
        low = np.uint64(0)
        highmask = np.uint64(0xFFFFFFFFFFFFFFFF)
    else:
        low = x & ((np.uint64(1) << np.uint64(bi)) - np.uint64(1))
        highmask = ~((np.uint64(1) << np.uint64(bi)) - np.uint64(1))
    bwords[lev, phys, wi] = low | (np.uint64(bit) << np.uint64(bi)) | (
        (x & highmask) << np.uint64(1))
    bsz[lev, phys] = sz + 1
    bones[lev, phys] += bit
    _fen_add(bfen[lev], cnt, li, np.int64(1) + (bit << np.int64(32)))
    btot[lev, 0] = total + 1
    btot[lev, 1] += bit


@njit(cache=True)
def _bv_delete(ds, lev, pos):
    bwords, bsz, bones, bord, bn, bfen, btot = (
        ds[7], ds[8], ds[9], ds[10], ds[11], ds[12], ds[13])
    cnt = bn[lev]
    li, off, _ = _fen_locate2(bfen[lev], cnt, pos)
    phys = bord[lev, li]
    sz = bsz[lev, phys]
    wi = (off - 1) >> 6
    bi = (off - 1) & 63
    x = bwords[lev, phys, wi]
    bit = np.int64((x >> np.uint64(bi)) & np.uint64(1))
    if bi == 0:
        low = np.uint64(0)
        highmask = np.uint64(0xFFFFFFFFFFFFFFFF)
    else:
        mask = (np.uint64(1) << np.uint64(bi)) - np.uint64(1)
        low = x & mask
        highmask = ~mask
    bwords[lev, phys, wi] = low | ((x >> np.uint64(1)) & highmask)
    last = (sz - 1) >> 6
    for w in range(wi + 1, last + 1):
        carry = bwords[lev, phys, w] & np.uint64(1)
        bwords[lev, phys, w - 1] |= carry << np.uint64(63)
        bwords[lev, phys, w] >>= np.uint64(1)
    bsz[lev, phys] = sz - 1
    bones[lev, phys] -= bit
    _fen_add(bfen[lev], cnt, li, np.int64(-1) - (bit << np.int64(32)))
    btot[lev, 0] -= 1
    btot[lev, 1] -= bit
    if bsz[lev, phys] == 0 and cnt > 1:
        for k in range(li, cnt - 1):
            bord[lev, k] = bord[lev, k + 1]
        bord[lev, cnt - 1] = phys
        bn[lev] = cnt - 1
        _bv_rebuild(ds, lev)
    return bit


@njit(cache=True, inline="always")
def _bv_rank1(ds, lev, pos):
    bwords, bord, bn, bfen, btot = ds[7], ds[10], ds[11], ds[12], ds[13]
    if pos <= 0 or btot[lev, 1] == 0:
        return np.int64(0)
    if pos >= btot[lev, 0]:
        return btot[lev, 1]
    li, off, ones = _fen_locate2(bfen[lev], bn[lev], pos)
    phys = bord[lev, li]
    full = off >> 6
    for w in range(full):
        ones += _popcnt(bwords[lev, phys, w])
    rem = off & 63
    if rem:
        mask = (np.uint64(1) << np.uint64(rem)) - np.uint64(1)
        ones += _popcnt(bwords[lev, phys, full] & mask)
    return ones


@njit(cache=True)
def _bv_select1(ds, lev, k):
    bwords, bord, bn, bfen = ds[7], ds[10], ds[11], ds[12]
    cnt = bn[lev]
    fen = bfen[lev]
    idx = 0
    rem = k
    base = np.int64(0)
    bit = np.int64(1)
    while (bit << 1) <= cnt:
        bit <<= 1
    while bit:
        nxt = idx + bit
        if nxt <= cnt:
            v = fen[nxt]
            if (v >> 32) < rem:
                rem -= v >> 32
                base += v & M32
                idx = nxt
        bit >>= 1
    phys = bord[lev, idx]
    for w in range(BW):
        c = _popcnt(bwords[lev, phys, w])
        if rem > c:
            rem -= c
        else:
            return base + (w << 6) + _wsel(bwords[lev, phys, w], rem) + 1
    return np.int64(-1)


@njit(cache=True)
def _bv_select0(ds, lev, k):
    bwords, bsz, bord, bn, bfen = ds[7], ds[8], ds[10], ds[11], ds[12]
    if ds[13][lev, 1] == 0:
        return k  # no set bits: the k-th zero sits at position k
    cnt = bn[lev]
    fen = bfen[lev]
    idx = 0
    rem = k
    base = np.int64(0)
    bit = np.int64(1)
    while (bit << 1) <= cnt:
        bit <<= 1
    while bit:
        nxt = idx + bit
        if nxt <= cnt:
            v = fen[nxt]
            zeros = (v & M32) - (v >> 32)
            if zeros < rem:
                rem -= zeros
                base += v & M32
                idx = nxt
        bit >>= 1
    phys = bord[lev, idx]
    sz = bsz[lev, phys]
    for w in range(BW):
        avail = min(64, sz - (w << 6))
        if avail <= 0:
            break
        inv = ~bwords[lev, phys, w]
        if avail < 64:
            inv &= (np.uint64(1) << np.uint64(avail)) - np.uint64(1)
        c = _popcnt(inv)
        if rem > c:
            rem -= c
        else:
            return base + (w << 6) + _wsel(inv, rem) + 1
    return np.int64(-1)


# ------------------------------------------------------------ wavelet ops

@njit(cache=True)
def _materialize_level(ds, lev):
    meta = ds[0]
    bwords, bsz, bones, bord, bn, btot = ds[7], ds[8], ds[9], ds[10], ds[11], ds[13]
    n = meta[META_N]
    nb = max(np.int64(1), (n + BBITS - 1) // BBITS)
    for j in range(nb):
        bord[lev, j] = j
        take = min(np.int64(BBITS), n - j * BBITS)
        if take < 0:
            take = 0
        bsz[lev, j] = take
        bones[lev, j] = 0
        for w in range(BW):
            bwords[lev, j, w] = np.uint64(0)
    bn[lev] = nb
    btot[lev, 0] = n
    btot[lev, 1] = 0
    _bv_rebuild(ds, lev)


@njit(cache=True)
def _ensure_levels(ds, v):
    meta = ds[0]
    if v > meta[META_MAX]:
        meta[META_MAX] = v
    need = np.int64(0)
    x = v
    while x:
        need += 1
        x >>= 1
    while meta[META_NLEV] < need:
        _materialize_level(ds, meta[META_NLEV])
        meta[META_NLEV] += 1


@njit(cache=True)
def _wv_insert(ds, pos, v):
    meta = ds[0]
    _ensure_levels(ds, v)
    nlev = meta[META_NLEV]
    p = pos
    for b in range(nlev - 1, -1, -1):
        bit = np.int64((v >> b) & 1)
        if bit:
            total, ones = _bv_totals(ds, b)
            z = total - ones  # zeros are unchanged by inserting a 1
            _bv_insert(ds, b, p, bit)
            p = z + _bv_rank1(ds, b, p)
        else:
            _bv_insert(ds, b, p, bit)
            p = p - _bv_rank1(ds, b, p)


@njit(cache=True)
def _wv_delete(ds, pos, v):
    meta = ds[0]
    nlev = meta[META_NLEV]
    p = pos
    for b in range(nlev - 1, -1, -1):
        bit = np.int64((v >> b) & 1)
        r1 = _bv_rank1(ds, b, p)
        if bit:
            total, ones = _bv_totals(ds, b)
            child = (total - ones) + r1
        else:
            child = p - r1
        _bv_delete(ds, b, p)
        p = child


@njit(cache=True)
def _wv_rank_sym(ds, c, j):
    meta = ds[0]
    nlev = meta[META_NLEV]
    if j <= 0:
        return np.int64(0)
    if c >> nlev:
        return np.int64(0)
    s = np.int64(0)
    e = j
    for b in range(nlev - 1, -1, -1):
        if s == e:
            return np.int64(0)
        r1s = _bv_rank1(ds, b, s)
        r1e = _bv_rank1(ds, b, e)
        if (c >> b) & 1:
            total, ones = _bv_totals(ds, b)
            z = total - ones
            s = z + r1s
            e = z + r1e
        else:
            s = s - r1s
            e = e - r1e
    return e - s


@njit(cache=True)
def _wv_select_sym(ds, c, k):
    meta = ds[0]
    nlev = meta[META_NLEV]
    s = np.int64(0)
    for b in range(nlev - 1, -1, -1):
        r1s = _bv_rank1(ds, b, s)
        if (c >> b) & 1:
            total, ones = _bv_totals(ds, b)
            s = (total - ones) + r1s
        else:
            s = s - r1s
    p = s + k
    for b in range(nlev):
        if (c >> b) & 1:
            total, ones = _bv_totals(ds, b)
            p = _bv_select1(ds, b, p - (total - ones))
        else:
            p = _bv_select0(ds, b, p)
    return p


@njit(cache=True)
def _wv_count_less(ds, i, j, x):
    meta = ds[0]
    nlev = meta[META_NLEV]
    s = i - 1
    e = j
    if x <= 0 or s >= e:
        return np.int64(0)
    if x >> nlev:
        return e - s
    res = np.int64(0)
    for b in range(nlev - 1, -1, -1):
        r1s = _bv_rank1(ds, b, s)
        r1e = _bv_rank1(ds, b, e)
        if (x >> b) & 1:
            res += (e - r1e) - (s - r1s)
            total, ones = _bv_totals(ds, b)
            z = total - ones
            s = z + r1s
            e = z + r1e
        else:
            s = s - r1s
            e = e - r1e
        if s == e:
            break
    return res


@njit(cache=True)
def _wv_rnv(ds, i, j, c):
    meta = ds[0]
    nlev = meta[META_NLEV]
    x = c + 1
    if x > meta[META_MAX]:
        return np.int64(-1)
    st_lev = np.empty(70, dtype=np.int64)
    st_s = np.empty(70, dtype=np.int64)
    st_e = np.empty(70, dtype=np.int64)
    st_v = np.empty(70, dtype=np.int64)
    top = 0
    s = i - 1
    e = j
    alive = s < e
    for b in range(nlev - 1, -1, -1):
        if not alive:
            break
        r1s = _bv_rank1(ds, b, s)
        r1e = _bv_rank1(ds, b, e)
        total, ones = _bv_totals(ds, b)
        z = total - ones
        s1 = z + r1s
        e1 = z + r1e
        if (x >> b) & 1:
            s = s1
            e = e1
        else:
            if e1 > s1:
                st_lev[top] = b
                st_s[top] = s1
                st_e[top] = e1
                st_v[top] = ((x >> (b + 1)) << 1) | 1
                top += 1
            s = s - r1s
            e = e - r1e
        if s >= e:
            alive = False
    if alive:
        return x
    while top > 0:
        top -= 1
        b0 = st_lev[top]
        s = st_s[top]
        e = st_e[top]
        v = st_v[top]
        for b in range(b0 - 1, -1, -1):
            r1s = _bv_rank1(ds, b, s)
            r1e = _bv_rank1(ds, b, e)
            s0 = s - r1s
            e0 = e - r1e
            if e0 > s0:
                v = v << 1
                s = s0
                e = e0
            else:
                total, ones = _bv_totals(ds, b)
                z = total - ones
                v = (v << 1) | 1
                s = z + r1s
                e = z + r1e
        return v
    return np.int64(-1)


# ------------------------------------------------------------- public ops

@njit(cache=True)
def k_ins(ds, pos, v):
    meta = ds[0]
    meta[META_OPS] += 1
    _raw_insert(ds, pos, v)
    _wv_insert(ds, pos, v)
    meta[META_N] += 1


@njit(cache=True)
def k_del(ds, pos):
    meta = ds[0]
    meta[META_OPS] += 1
    v = _raw_delete(ds, pos)
    _wv_delete(ds, pos, v)
    meta[META_N] -= 1
    return v


@njit(cache=True)
def k_ins_nowv(ds, pos, v):
    # raw-side-only insert for build phases that never query the wavelet
    # (it is reconstructed in bulk afterwards when still needed); op
    # accounting matches k_ins so construction budgets are unaffected
    meta = ds[0]
    meta[META_OPS] += 1
    if v > meta[META_MAX]:
        meta[META_MAX] = v
    _raw_insert(ds, pos, v)
    meta[META_N] += 1


@njit(cache=True)
def k_del_nowv(ds, pos):
    meta = ds[0]
    meta[META_OPS] += 1
    v = _raw_delete(ds, pos)
    meta[META_N] -= 1
    return v


@njit(cache=True)
def k_wv_build(ds):
    """Construct every wavelet level from the raw mirror in one pass.

    The levels form a matrix: the top level (most significant bit) stores
    bits in sequence order and each level below holds the elements
    stable-partitioned by the bit above (zeros first, then ones), which is
    the order incremental inserts produce.  Each level gets the canonical
    full-chunk layout (the same shape lazy level materialization uses), so
    the result is indistinguishable from a sequence maintained
    incrementally.
    """
    meta = ds[0]
    rvals, rsz, rord = ds[1], ds[2], ds[4]
    bwords, bsz, bones, bord, bn, btot = (
        ds[7], ds[8], ds[9], ds[10], ds[11], ds[13])
    n = meta[META_N]
    need = np.int64(0)
    x = meta[META_MAX]
    while x:
        need += 1
        x >>= 1
    nb = max(np.int64(1), (n + BBITS - 1) // BBITS)
    for lev in range(need):
        for j in range(nb):
            bord[lev, j] = j
            take = min(np.int64(BBITS), n - j * BBITS)
            if take < 0:
                take = 0
            bsz[lev, j] = take
            bones[lev, j] = 0
            for w in range(BW):
                bwords[lev, j, w] = np.uint64(0)
        bn[lev] = nb
    cur = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    t = np.int64(0)
    for li in range(meta[META_RN]):
        phys = rord[li]
        row = rvals[phys]
        for u in range(rsz[phys]):
            cur[t] = row[u]
            t += 1
    for lev in range(need - 1, -1, -1):
        ones = np.int64(0)
        for q in range(n):
            if (cur[q] >> lev) & 1:
                j = q // BBITS
                wi = (q % BBITS) >> 6
                bwords[lev, j, wi] |= np.uint64(1) << np.uint64(q & 63)
                bones[lev, j] += 1
                ones += 1
        btot[lev, 0] = n
        btot[lev, 1] = ones
        _bv_rebuild(ds, lev)
        if lev > 0:
            zi = np.int64(0)
            oi = n - ones
            for q in range(n):
                v = cur[q]
                if (v >> lev) & 1:
                    nxt[oi] = v
                    oi += 1
                else:
                    nxt[zi] = v
                    zi += 1
            tmp = cur
            cur = nxt
            nxt = tmp
    meta[META_NLEV] = need


@njit(cache=True)
def k_access(ds, pos):
    ds[0][META_OPS] += 1
    return _raw_get(ds, pos)


@njit(cache=True)
def k_rank(ds, c, j):
    ds[0][META_OPS] += 1
    return _wv_rank_sym(ds, c, j)


@njit(cache=True)
def k_select(ds, c, k):
    ds[0][META_OPS] += 1
    return _wv_select_sym(ds, c, k)


@njit(cache=True)
def k_rangecount(ds, i, j, a, b):
    ds[0][META_OPS] += 1
    if i > j:
        return np.int64(0)
    if i < 1:
        i = np.int64(1)  # interval borders from mi may start at 0
    lo = a if a > 0 else np.int64(0)
    hi = _wv_count_less(ds, i, j, b + 1)
    return hi - _wv_count_less(ds, i, j, lo)


@njit(cache=True)
def k_rnv(ds, i, j, c):
    ds[0][META_OPS] += 1
    if i > j:
        return np.int64(-1)
    if c < 0:
        return _raw_range_min(ds, i, j)
    return _wv_rnv(ds, i, j, c)


@njit(cache=True)
def k_mi(ds, j, c):
    ds[0][META_OPS] += 1
    return _raw_mi(ds, j, c)


@njit(cache=True)
def k_dump(ds, out):
    meta, rvals, rsz, rord = ds[0], ds[1], ds[2], ds[4]
    t = 0
    for li in range(meta[META_RN]):
        phys = rord[li]
        for k in range(rsz[phys]):
            out[t] = rvals[phys, k]
            t += 1
    return t


# ------------------------------------------------------- index primitives
# FT and LT store pi-values shifted by one so that 0 encodes the terminator
# symbol, which must stay below every plain value in rangecount filters.

@njit(cache=True)
def k_fl(ft, lt, i):
    c = k_access(ft, i)
    return k_select(lt, c, k_rank(ft, c, i))


@njit(cache=True)
def k_lf(ft, lt, i):
    c = k_access(lt, i)
    return k_select(ft, c, k_rank(lt, c, i))


@njit(cache=True)
def k_extend_front(ft, lt, lcp, pi, y, rho, abound, lcp_wv):
    """One front-extension step: index of {R} -> index of {bR}.

    pi = pi(bR), y = rank of R among its conjugates, rho = |R|.
    Returns the rank of bR, i.e. the next y.  pi is the plain (unshifted)
    signature value; ft/lt hold shifted values.  lcp_wv=False defers the
    lcp wavelet (this step only queries lcp through its raw mirror, so
    callers that batch many steps may rebuild that wavelet once at the
    end instead).
    """
    if rho == 1:
        # the only indexed conjugate is the terminator itself: bR sorts
        # after it and shares no infinity prefix with it
        if lcp_wv:
            k_ins(lcp, 2, 0)
        else:
            k_ins_nowv(lcp, 2, 0)
        k_ins(ft, 2, pi + 1)
        k_del(lt, 1)
        k_ins(lt, 1, pi + 1)
        k_ins(lt, 2, 0)
        return np.int64(2)
    l, r = k_mi(lcp, y, pi + 1)
    c = (k_rangecount(lt, l, y - 1, pi + 1, abound) + 2
         + k_rangecount(lt, y + 1, r, pi + 2, abound))
    for i in range(pi, 0, -1):
        rp = l - 1
        l, r = k_mi(lcp, y, i)
        c += k_rangecount(lt, l, rp, i + 1, abound)
    p = np.int64(1)
    s = np.int64(1)
    if k_access(ft, c) == pi + 1:
        flc = k_select(lt, pi + 1, k_rank(ft, pi + 1, c))
        if flc < y:
            e = k_rnv(lcp, flc + 1, y, -1)
            if pi < e:
                p = e - pi + 1
    if c < rho and k_access(ft, c + 1) == pi + 1:
        flc1 = k_select(lt, pi + 1, k_rank(ft, pi + 1, c + 1))
        if flc1 > y:
            e = k_rnv(lcp, y + 1, flc1, -1)
            if pi < e:
                s = e - pi + 1
    if lcp_wv:
        k_ins(lcp, c + 1, p)
        if c < rho:
            k_del(lcp, c + 2)
            k_ins(lcp, c + 2, s)
    else:
        k_ins_nowv(lcp, c + 1, p)
        if c < rho:
            k_del_nowv(lcp, c + 2)
            k_ins_nowv(lcp, c + 2, s)
    k_ins(ft, c + 1, pi + 1)
    k_del(lt, y)
    k_ins(lt, y, pi + 1)
    k_ins(lt, c + 1, 0)
    return c + 1


@njit(cache=True)
def k_build_dollar(ft, lt, lcp, yseq, text, n_orig, abound):
    """Build the index of the terminator-padded text by front extensions.

    text is the full padded string (terminator encoded as -1 in its last
    slot, never read).  yseq receives one marker bit per row: 1 iff the row
    is a conjugate starting in [2..n_orig+1] (the rows that survive the
    filter back to the original circular text).  Returns (final y, rank of
    the conjugate starting at position 2).

    The lcp wavelet is deferred throughout (no step queries it); callers
    that keep the lcp sequence must run k_wv_build on it afterwards.
    """
    rho_full = text.shape[0]
    k_ins(ft, 1, 0)
    k_ins(lt, 1, 0)
    k_ins_nowv(lcp, 1, 0)
    k_ins(yseq, 1, 1 if 2 <= rho_full <= n_orig + 1 else 0)
    stack = np.empty(rho_full, dtype=np.int64)
    top = 0
    y = np.int64(1)
    # the seeded row is itself the start-2 conjugate when the text has
    # exactly two symbols (and the start-1 conjugate when it is just the
    # terminator); otherwise the rank is recorded at the i == 2 step
    r2 = np.int64(1) if rho_full <= 2 else np.int64(-1)
    for i in range(rho_full - 1, 0, -1):
        b = text[i - 1]
        pi = np.int64(0)
        while top > 0 and stack[top - 1] >= b:
            top -= 1
            pi += 1
        stack[top] = b
        top += 1
        y = k_extend_front(ft, lt, lcp, pi, y, rho_full - i, abound, False)
        k_ins(yseq, y, 1 if 2 <= i <= n_orig + 1 else 0)
        if i == 2:
            r2 = y
        elif i == 1 and r2 >= 0 and y <= r2:
            r2 += 1
    return y, r2


@njit(cache=True)
def k_filter(ft_r, lt_r, lcp_r, yseq, ft_t, lt_t, lcp_t, n_orig):
    """Project the padded-text index onto the original circular text."""
    prev = np.int64(-1)
    for k in range(1, n_orig + 1):
        pos = k_select(yseq, 1, k)
        k_ins(ft_t, k, k_access(ft_r, pos))
        k_ins(lt_t, k, k_access(lt_r, pos))
        if k == 1:
            k_ins(lcp_t, 1, 0)
        else:
            k_ins(lcp_t, k, k_rnv(lcp_r, prev + 1, pos, -1))
        prev = pos
