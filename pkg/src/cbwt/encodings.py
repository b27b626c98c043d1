"""Parent-distance and rotational signature encodings for Cartesian tree matching.

Two equal-length integer strings match iff their Cartesian trees (min-heap,
ties resolved to the left) coincide, and that holds iff their parent-distance
encodings are equal.  Everything in this module is exact and allocation-happy;
the succinct index keeps only derived integer values, never these symbol lists.

Symbols
-------
Input strings are sequences of plain ints, possibly containing the terminator
``DOLLAR``.  Encoded strings are sequences over a three-kind alphabet ordered

    DOLLAR < Dist(1) < Dist(2) < ... < INFINITY

where ``Dist(k)`` says "nearest earlier position with a value <= mine is k
steps back", ``INFINITY`` marks a strict running minimum (no such position),
and ``DOLLAR`` is preserved.  A terminator counts as <= everything, so no
position after a terminator is ever a strict minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union


class _Terminator:
    """The unique end-of-text symbol; compares below every plain value."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "$"

    def __reduce__(self):  # keep the singleton a singleton under pickling
        return (_Terminator, ())


class _Infinity:
    """Encoded symbol for a strict running minimum; compares above every Dist."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


DOLLAR = _Terminator()
INFINITY = _Infinity()


@dataclass(frozen=True)
class Dist:
    """Encoded symbol: distance back to the nearest position with a <= value."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("distance must be >= 1")

    def __repr__(self):
        return str(self.k)


PdSymbol = Union[_Terminator, Dist, _Infinity]
Symbol = Union[int, _Terminator]


def pd_order_key(sym: PdSymbol) -> tuple[int, int]:
    """Total order on encoded symbols: DOLLAR < Dist(k), by k < INFINITY."""
    if sym is DOLLAR:
        return (0, 0)
    if isinstance(sym, Dist):
        return (1, sym.k)
    if sym is INFINITY:
        return (2, 0)
    raise TypeError(f"not an encoded symbol: {sym!r}")


def pd_to_string(pd: Iterable[PdSymbol]) -> str:
    """Compact display form, e.g. ``∞∞121$1``; distances >= 10 are bracketed."""
    parts = []
    for sym in pd:
        if isinstance(sym, Dist) and sym.k >= 10:
            parts.append(f"({sym.k})")
        else:
            parts.append(repr(sym))
    return "".join(parts)


def parent_distance_encode(seq: Sequence[Symbol]) -> list[PdSymbol]:
    """Parent-distance encoding of ``seq``.

    Position i maps to DOLLAR if seq[i] is the terminator, to INFINITY if
    seq[i] is strictly smaller than every earlier symbol (terminators counting
    as <= everything), and otherwise to Dist(i - j) for the largest j < i with
    seq[j] <= seq[i].

    Runs in O(n) with a monotone stack of candidate parents.
    """
    out: list[PdSymbol] = []
    # Stack of (index, value) with strictly increasing values bottom-to-top;
    # a terminator enters as a floor that never pops.
    stack: list[tuple[int, Symbol]] = []
    for i, v in enumerate(seq):
        if v is DOLLAR:
            out.append(DOLLAR)
            stack.clear()
            stack.append((i, v))
            continue
        if not isinstance(v, int):
            raise TypeError(f"text symbol must be int or DOLLAR, got {v!r}")
        while stack and stack[-1][1] is not DOLLAR and stack[-1][1] > v:
            stack.pop()
        if not stack:
            out.append(INFINITY)
        else:
            out.append(Dist(i - stack[-1][0]))
        stack.append((i, v))
    return out


def power_prefix(seq: Sequence[Symbol], length: int) -> list[Symbol]:
    """First ``length`` symbols of seq repeated forever."""
    if not seq:
        raise ValueError("cannot repeat an empty sequence")
    reps = -(-length // len(seq))
    return (list(seq) * reps)[:length]


def rotation(seq: Sequence[Symbol], i: int) -> list[Symbol]:
    """Cyclic shift by ``i``: seq[i:] + seq[:i] (shift, not start position)."""
    i %= len(seq)
    return list(seq[i:]) + list(seq[:i])


def rotational_pd_encode(seq: Sequence[Symbol]) -> list[PdSymbol]:
    """Rotation-aware parent distances: the second half of the encoding of seq·seq.

    In the doubled string every position of the second copy sees a full
    window of predecessors, so the result is invariant under which rotation
    the circular string is written down from, up to the same rotation.
    """
    n = len(seq)
    if n == 0:
        raise ValueError("empty sequence")
    return parent_distance_encode(list(seq) + list(seq))[n:]


def count_infinity(pd: Sequence[PdSymbol], upto: int) -> int:
    """Number of INFINITY symbols among the first ``upto`` encoded symbols."""
    return sum(1 for sym in pd[:upto] if sym is INFINITY)


def rts_encode(seq: Sequence[Symbol]) -> list[Union[int, _Terminator]]:
    """Rotational signature string of a circular text.

    Entry i (0-based here) is DOLLAR when seq[i] is the terminator; otherwise
    it counts the strict running minima of the one-step rotation starting at
    i+1 whose values are >= seq[i] — equivalently, how many minima the symbol
    seq[i] absorbs when prepended.  The entries sum to at most len(seq).
    """
    n = len(seq)
    out: list[Union[int, _Terminator]] = []
    for i in range(n):
        v = seq[i]
        if v is DOLLAR:
            out.append(DOLLAR)
            continue
        rot = rotation(seq, i + 1) if n > 1 else []
        if n == 1:
            # Sole symbol: its own rotation is itself; the prepended copy
            # absorbs exactly the one minimum.
            out.append(1)
            continue
        pd_rot = parent_distance_encode(rot)
        pd_ext = parent_distance_encode([v] + rot)[1:]
        before = count_infinity(pd_rot, n)
        after = count_infinity(pd_ext, n)
        out.append(before - after)
    return out


def pi_head(seq: Sequence[Symbol]) -> Union[int, _Terminator]:
    """First entry of the rotational signature (the value the index stores)."""
    n = len(seq)
    v = seq[0]
    if v is DOLLAR:
        return DOLLAR
    if n == 1:
        return 1
    rot = rotation(seq, 1)
    pd_rot = parent_distance_encode(rot)
    pd_ext = parent_distance_encode([v] + rot)[1:]
    return count_infinity(pd_rot, n) - count_infinity(pd_ext, n)


def lcp_count(u: Sequence[Symbol], w: Sequence[Symbol]) -> int:
    """Shared-minima count of two circular strings.

    Both arguments are expanded to three times the longer length, encoded,
    and the number of INFINITY symbols of ``u``'s encoding within the common
    prefix of the two encodings is returned.  All minima of a circular string
    fall within its first period, so 3z is enough to separate any two.
    """
    z = max(len(u), len(w))
    pu = parent_distance_encode(power_prefix(u, 3 * z))
    pw = parent_distance_encode(power_prefix(w, 3 * z))
    common = 0
    for a, b in zip(pu, pw):
        if a != b:
            break
        common += 1
    return count_infinity(pu, common)


@dataclass(frozen=True)
class PatternContext:
    """Per-position prepend contexts of a pattern, built right to left.

    ``h[i]`` is how many strict prefix minima of P[i+1..] the symbol P[i]
    absorbs (pops of the minima stack); ``e[i]`` is the remaining stack height
    once P[i] is pushed.  Both lists are 0-based aligned with the pattern.
    """

    h: list[int]
    e: list[int]


def preprocess_pattern(pattern: Sequence[int]) -> PatternContext:
    """Single right-to-left pass maintaining the strict-prefix-minima stack."""
    m = len(pattern)
    h = [0] * m
    e = [0] * m
    stack: list[int] = []  # minima values, leftmost (largest) on top
    for i in range(m - 1, -1, -1):
        v = pattern[i]
        if not isinstance(v, int):
            raise TypeError("patterns are plain integer strings")
        pops = 0
        while stack and stack[-1] >= v:
            stack.pop()
            pops += 1
        stack.append(v)
        h[i] = pops
        e[i] = len(stack)
    return PatternContext(h=h, e=e)


def primitive_root_length(seq: Sequence) -> int:
    """Length of the primitive root of ``seq`` (shortest w with seq = w^k).

    Computed from the classic border (failure) function; elements only need
    equality, so this works for plain ints and encoded symbols alike.
    """
    n = len(seq)
    if n == 0:
        raise ValueError("empty sequence")
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and seq[i] != seq[k]:
            k = fail[k - 1]
        if seq[i] == seq[k]:
            k += 1
        fail[i] = k
    root = n - fail[n - 1]
    return root if n % root == 0 else n
