import random

import pytest

from cbwt.builder import build_collection, build_single, extend_with_text
from cbwt.core import CbwtIndex
from cbwt.locator import SampleStore, attach_samples, default_rate, locate
from cbwt.oracle import BruteIndex, brute_locate
from conftest import EXTENSION_TEXT, RUNNING_TEXTS
from test_oracle import CA

PATTERNS = [[], [5, 6, 3, 4], [6, 4, 3], [4], [3], [4, 4], [7, 3, 1, 5, 2],
            [2, 5], [1, 2, 5], [3, 7, 5]]


def test_default_rate():
    assert default_rate(1) == 1
    assert default_rate(2) == 1
    assert default_rate(11) == 4
    assert default_rate(1024) == 10
    assert default_rate(1025) == 11


def test_rate_one_marks_every_rank(running_index):
    store = attach_samples(running_index, 1)
    assert store.rate == 1
    assert sorted(store.entries) == list(range(1, 12))
    assert store.values == CA
    assert store.marked.to_list() == [1] * 11
    assert running_index.samples is store


def test_sparse_rate_keeps_one_sample_per_cycle(running_index):
    store = attach_samples(running_index, running_index.n)
    # cycle counts: 512 has one, 5363 two (root 2), 4478 one
    assert len(store.entries) == 4
    assert store.cycle_cover == 4
    for pat in PATTERNS:
        assert (locate(running_index, store, pat)
                == brute_locate(RUNNING_TEXTS, pat)), pat


def test_locate_fixed_values(running_index):
    store = attach_samples(running_index)
    assert store.rate == 4
    assert locate(running_index, store, [5, 6, 3, 4]) == {(1, 3), (3, 3)}
    assert locate(running_index, store, [6, 4, 3]) == set()
    assert locate(running_index, store, []) == {
        (1, 1), (1, 2), (1, 3),
        (2, 1), (2, 2), (2, 3), (2, 4),
        (3, 1), (3, 2), (3, 3), (3, 4),
    }


@pytest.mark.parametrize("rate", [1, 2, 4, 11])
def test_locate_all_rates(running_index, rate):
    store = attach_samples(running_index, rate)
    for pat in PATTERNS:
        assert (locate(running_index, store, pat)
                == brute_locate(RUNNING_TEXTS, pat)), pat


def test_locate_random_collections():
    rng = random.Random("locate-dev")
    for _ in range(40):
        d = rng.randint(1, 3)
        texts = [[rng.randint(0, 4) for _ in range(rng.randint(1, 7))]
                 for _ in range(d)]
        idx = build_collection(texts)
        b = BruteIndex(texts)
        rates = {1, 2, default_rate(idx.n), idx.n}
        pats = [[rng.randint(0, 4) for _ in range(rng.randint(0, 5))]
                for _ in range(8)]
        for rate in rates:
            store = attach_samples(idx, rate)
            for pat in pats:
                assert locate(idx, store, pat) == b.locate(pat), (texts, rate,
                                                                  pat)


def test_samples_follow_extensions(running_index):
    store = attach_samples(running_index, 2)
    extend_with_text(running_index, EXTENSION_TEXT, ident=4)
    assert running_index.samples.rate == 2
    all_texts = RUNNING_TEXTS + [EXTENSION_TEXT]
    for pat in PATTERNS:
        assert (locate(running_index, running_index.samples, pat)
                == brute_locate(all_texts, pat)), pat


def test_samples_follow_random_extensions():
    rng = random.Random("extend-dev")
    for _ in range(20):
        texts = [[rng.randint(0, 4) for _ in range(rng.randint(1, 6))]
                 for _ in range(rng.randint(1, 3))]
        extra = [rng.randint(0, 4) for _ in range(rng.randint(1, 6))]
        idx = build_collection(texts)
        attach_samples(idx, rng.choice([1, 2, 3, idx.n]))
        extend_with_text(idx, extra)
        b = BruteIndex(texts + [extra])
        for _ in range(6):
            pat = [rng.randint(0, 4) for _ in range(rng.randint(0, 5))]
            assert (locate(idx, idx.samples, pat)
                    == b.locate(pat)), (texts, extra, pat)


def test_locate_after_round_trip(running_index):
    attach_samples(running_index, 3)
    again = CbwtIndex.deserialize(running_index.serialize())
    assert again.samples.rate == 3
    assert again.samples.cycle_cover is None
    for pat in PATTERNS:
        assert (locate(again, again.samples, pat)
                == brute_locate(RUNNING_TEXTS, pat)), pat


def test_extension_after_round_trip():
    idx = build_collection(RUNNING_TEXTS)
    attach_samples(idx, 2)
    again = CbwtIndex.deserialize(idx.serialize())
    extend_with_text(again, EXTENSION_TEXT)
    b = BruteIndex(RUNNING_TEXTS + [EXTENSION_TEXT])
    assert again.ft_values() == b.ft
    for pat in PATTERNS:
        assert locate(again, again.samples, pat) == b.locate(pat), pat


def test_attach_requires_construction_metadata(running_index):
    again = CbwtIndex.deserialize(running_index.serialize())
    with pytest.raises(RuntimeError):
        attach_samples(again, 2)


def test_attach_validates_arguments(running_index):
    with pytest.raises(ValueError):
        attach_samples(running_index, 0)
    with pytest.raises(ValueError):
        attach_samples(CbwtIndex(), 1)


def test_sample_store_validates_positions(running_index):
    with pytest.raises(ValueError):
        SampleStore.from_entries(running_index, 1, {99: 1})


def test_single_nonprimitive_text_locate():
    text = [2, 2, 1, 2, 2, 1]
    idx = build_single(text)
    b = BruteIndex([text])
    for rate in (1, 3, 6):
        store = attach_samples(idx, rate)
        for pat in ([2, 2, 1], [1, 2], [1, 1], []):
            assert locate(idx, store, pat) == b.locate(pat), (rate, pat)
