"""Succinct index for Cartesian-tree matching over collections of circular texts."""

from .builder import build_collection, build_single, extend_with_text
from .core import CbwtIndex, ConjRange, TextMeta
from .encodings import DOLLAR, INFINITY
from .locator import attach_samples, default_rate, locate
from .oracle import brute_count, brute_index, brute_locate

__version__ = "0.1.0"

__all__ = [
    "CbwtIndex",
    "ConjRange",
    "TextMeta",
    "DOLLAR",
    "INFINITY",
    "build_collection",
    "build_single",
    "extend_with_text",
    "attach_samples",
    "default_rate",
    "locate",
    "brute_index",
    "brute_count",
    "brute_locate",
]
