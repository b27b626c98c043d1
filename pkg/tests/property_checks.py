"""Randomized law checks for the encodings, shared with the acceptance gate.

Each function draws ``count`` independent instances from ``rng`` and raises
AssertionError with the offending instance on the first violation.
"""

from cbwt.encodings import (
    count_infinity,
    lcp_count,
    parent_distance_encode,
    pd_order_key,
    pi_head,
    power_prefix,
    rotation,
    rotational_pd_encode,
    rts_encode,
)
from cbwt.oracle import build_cartesian_tree, omega_compare, omega_key


def random_seq(rng, max_len=9, max_val=5, min_len=1):
    return [rng.randint(0, max_val) for _ in range(rng.randint(min_len, max_len))]


def _order_isomorphic_copy(rng, u):
    """Remap values through a random strictly increasing function."""
    distinct = sorted(set(u))
    new = {}
    cur = rng.randint(0, 2)
    for v in distinct:
        new[v] = cur
        cur += rng.randint(1, 3)
    return [new[v] for v in u]


def check_tree_encoding_equivalence(rng, count):
    """Equal Cartesian trees exactly when equal parent-distance encodings."""
    for _ in range(count):
        u = random_seq(rng)
        if rng.random() < 0.5:
            w = _order_isomorphic_copy(rng, u)
        else:
            w = [rng.randint(0, 5) for _ in range(len(u))]
        same_tree = build_cartesian_tree(u) == build_cartesian_tree(w)
        same_pd = parent_distance_encode(u) == parent_distance_encode(w)
        assert same_tree == same_pd, (u, w)


def check_square_match(rng, count):
    """Doubling a circular text doubles both rotation-aware encodings."""
    for _ in range(count):
        u = random_seq(rng)
        assert rotational_pd_encode(u + u) == rotational_pd_encode(u) * 2, u
        assert rts_encode(u + u) == rts_encode(u) * 2, u


def check_rotation_commutes(rng, count):
    """Rotating a circular text rotates both rotation-aware encodings."""
    for _ in range(count):
        u = random_seq(rng)
        k = rng.randrange(len(u))
        assert (rotational_pd_encode(rotation(u, k))
                == rotation(rotational_pd_encode(u), k)), (u, k)
        assert rts_encode(rotation(u, k)) == rotation(rts_encode(u), k), (u, k)


def check_signature_budget(rng, count):
    """Signature entries are non-negative and sum to at most the length."""
    for _ in range(count):
        u = random_seq(rng)
        s = rts_encode(u)
        assert len(s) == len(u), (u, s)
        assert all(isinstance(v, int) and v >= 0 for v in s), (u, s)
        assert sum(s) <= len(u), (u, s)
        assert pi_head(u) == s[0], (u, s)


def check_prefix_stability(rng, count):
    """Parent distances of a prefix are a prefix of the parent distances."""
    for _ in range(count):
        u = random_seq(rng, max_len=12)
        k = rng.randint(0, len(u))
        assert parent_distance_encode(u[:k]) == parent_distance_encode(u)[:k], (u, k)


def _order_at(u, w, length):
    ku = tuple(pd_order_key(s)
               for s in parent_distance_encode(power_prefix(u, length)))
    kw = tuple(pd_order_key(s)
               for s in parent_distance_encode(power_prefix(w, length)))
    return (ku > kw) - (ku < kw)


def _lcp_at(u, w, length):
    pu = parent_distance_encode(power_prefix(u, length))
    pw = parent_distance_encode(power_prefix(w, length))
    common = 0
    for a, b in zip(pu, pw):
        if a != b:
            break
        common += 1
    return count_infinity(pu, common)


def check_expansion_cutoff(rng, count):
    """Orders and shared-minima counts settle by three times the longer period."""
    for _ in range(count):
        u = random_seq(rng, max_len=7)
        w = random_seq(rng, max_len=7)
        z = max(len(u), len(w))
        at3 = _order_at(u, w, 3 * z)
        assert at3 == _order_at(u, w, 4 * z) == _order_at(u, w, 6 * z), (u, w)
        assert lcp_count(u, w) == _lcp_at(u, w, 5 * z), (u, w)


def check_preorder_laws(rng, count):
    """The circular comparison is a total preorder respecting powers."""
    for _ in range(count):
        u = random_seq(rng, max_len=6)
        w = random_seq(rng, max_len=6)
        v = random_seq(rng, max_len=6)
        assert omega_compare(u, u) == 0, u
        assert omega_compare(u, w) == -omega_compare(w, u), (u, w)
        if omega_compare(u, w) <= 0 and omega_compare(w, v) <= 0:
            assert omega_compare(u, v) <= 0, (u, w, v)
        z = max(len(u), len(w))
        assert ((omega_compare(u, w) == 0)
                == (omega_key(u, z) == omega_key(w, z))), (u, w)
        assert omega_compare(u + u, u) == 0, u
        assert lcp_count(u, w) == lcp_count(w, u), (u, w)


ALL_CHECKS = (
    check_tree_encoding_equivalence,
    check_square_match,
    check_rotation_commutes,
    check_signature_budget,
    check_prefix_stability,
    check_expansion_cutoff,
    check_preorder_laws,
)
