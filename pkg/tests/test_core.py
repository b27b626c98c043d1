import itertools
import random

import pytest

from cbwt.builder import build_collection
from cbwt.core import CbwtIndex, ConjRange, TextMeta, from_stored, to_stored
from cbwt.encodings import DOLLAR, preprocess_pattern
from cbwt.locator import attach_samples
from cbwt.oracle import BruteIndex
from test_oracle import FL, FT, LCP, LF, LT


def test_stored_symbol_shift():
    assert to_stored(DOLLAR) == 0
    assert to_stored(0) == 1
    assert to_stored(7) == 8
    assert from_stored(0) is DOLLAR
    assert from_stored(8) == 7
    for v in [DOLLAR, 0, 1, 41]:
        assert from_stored(to_stored(v)) == v or from_stored(to_stored(v)) is v


def test_conj_range():
    r = ConjRange(4, 5)
    assert not r.is_empty
    assert len(r) == 2
    assert list(r) == [4, 5]
    e = ConjRange(3, 2)
    assert e.is_empty
    assert len(e) == 0
    assert list(e) == []


def test_index_arrays(running_index):
    idx = running_index
    assert idx.n == 11
    assert idx.d == 3
    assert idx.ft_values() == FT
    assert idx.lt_values() == LT
    assert idx.lcp_values() == LCP
    assert [idx.lf(i) for i in range(1, 12)] == LF
    assert [idx.fl(i) for i in range(1, 12)] == FL
    assert idx.text_offsets() == {1: 0, 2: 3, 3: 7}


def test_lf_fl_inverse(running_index):
    idx = running_index
    for i in range(1, 12):
        assert idx.fl(idx.lf(i)) == i


def test_search_steps(running_index):
    """Pattern 375 narrows the full range in two effective steps."""
    idx = running_index
    ctx = preprocess_pattern([3, 7, 5])
    rng = ConjRange(1, idx.n)
    seen = []
    for i in (2, 1, 0):
        rng = idx.crange_update(rng, ctx.h[i], ctx.e[i])
        seen.append((ctx.h[i], ctx.e[i], rng.lo, rng.hi))
    assert seen == [(0, 1, 1, 11), (0, 2, 8, 11), (2, 1, 4, 5)]


def test_counts(running_index):
    idx = running_index
    assert idx.count([5, 6, 3, 4]) == 2
    rng = idx.backward_search([5, 6, 3, 4])
    assert (rng.lo, rng.hi) == (6, 7)
    assert idx.count([6, 4, 3]) == 0
    assert idx.backward_search([6, 4, 3]).is_empty
    assert idx.count([]) == 11
    assert idx.count([3, 7, 5]) == 2


def test_counts_exhaustive_small():
    texts = [[2, 0, 1], [1, 1], [0, 2, 0, 2]]
    idx = build_collection(texts)
    b = BruteIndex(texts)
    for m in range(5):
        for pat in itertools.product(range(3), repeat=m):
            assert idx.count(list(pat)) == b.count(list(pat)), pat


def test_serialize_round_trip(running_index):
    idx = running_index
    attach_samples(idx, 4)
    blob = idx.serialize()
    again = CbwtIndex.deserialize(blob)
    assert again.serialize() == blob
    assert again.n == idx.n
    assert again.ft_values() == idx.ft_values()
    assert again.lt_values() == idx.lt_values()
    assert again.lcp_values() == idx.lcp_values()
    assert [(m.ident, m.length) for m in again.texts] == \
        [(m.ident, m.length) for m in idx.texts]
    assert again.samples.rate == 4
    assert again.samples.entries == idx.samples.entries
    # deserialized indexes drop construction-only fields
    assert all(m.root is None and m.anchor is None for m in again.texts)


def test_serialize_without_samples(running_index):
    blob = running_index.serialize()
    assert "SAMPLES 0 0" in blob
    again = CbwtIndex.deserialize(blob)
    assert again.samples is None
    assert again.serialize() == blob


def test_queries_leave_index_unchanged(running_index):
    idx = running_index
    before = idx.digest()
    idx.count([5, 6, 3, 4])
    idx.count([])
    idx.backward_search([3, 7, 5])
    for i in range(1, 12):
        idx.lf(i)
        idx.fl(i)
    assert idx.digest() == before


def test_deserialize_rejects_garbage():
    cases = [
        "",
        "WHAT 1\n",
        "CBWT 2\n0 0\n",
        # token counts disagreeing with the header
        "CBWT 1\n2 1\n1 2\n1\n0 0\n0 0\nSAMPLES 0 0\n",
        # text lengths disagreeing with n
        "CBWT 1\n2 1\n1 3\n1 1\n0 0\n0 0\nSAMPLES 0 0\n",
        # sample position out of range
        "CBWT 1\n1 1\n1 1\n2\n2\n0\nSAMPLES 1 1\n9 1\n",
    ]
    for blob in cases:
        with pytest.raises(ValueError):
            CbwtIndex.deserialize(blob)


def test_random_round_trips():
    rng = random.Random("core-serial")
    for _ in range(25):
        d = rng.randint(1, 3)
        texts = [[rng.randint(0, 4) for _ in range(rng.randint(1, 6))]
                 for _ in range(d)]
        idx = build_collection(texts)
        attach_samples(idx, rng.choice([1, 2, 3]))
        blob = idx.serialize()
        assert CbwtIndex.deserialize(blob).serialize() == blob


def test_text_meta_defaults():
    tm = TextMeta(ident=2, length=5)
    assert tm.root is None and tm.anchor is None
