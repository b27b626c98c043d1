"""Command-line front end: build, query, extend, and verify index files.

Exit codes: 0 ok, 1 verify mismatch, 2 usage/parse error, 3 I/O error,
4 over the verification size limit.
"""

from __future__ import annotations

import argparse
import re
import sys

from .builder import build_collection, extend_with_text
from .core import CbwtIndex
from .locator import attach_samples, default_rate, locate
from .oracle import ORACLE_LIMIT, BruteIndex, omega_key

MAX_TOKEN = 2 ** 31 - 1
_TOKEN_RE = re.compile(r"\S+")
_DECIMAL_RE = re.compile(r"[0-9]+")


class ParseError(Exception):
    """Bad user input (exit 2)."""


class LimitError(Exception):
    """Operation over a documented size limit (exit 4)."""


def _parse_tokens(line: str, where: str):
    out = []
    for mt in _TOKEN_RE.finditer(line):
        tok, col = mt.group(), mt.start() + 1
        if not _DECIMAL_RE.fullmatch(tok):
            raise ParseError(f"{where}:{col}: invalid token {tok!r} "
                             "(expected a non-negative decimal integer)")
        v = int(tok)
        if v > MAX_TOKEN:
            raise ParseError(f"{where}:{col}: token {tok} out of range "
                             f"[0..{MAX_TOKEN}]")
        out.append(v)
    return out


def parse_text_file(path: str, chars: bool = False):
    """One text per line; blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    texts = []
    for ln, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if chars:
            texts.append([ord(ch) for ch in line])
        else:
            texts.append(_parse_tokens(line, f"{path}:{ln}"))
    if not texts:
        raise ParseError(f"{path}: no texts")
    return texts


def parse_symbols(arg: str, chars: bool, what: str):
    if chars:
        return [ord(ch) for ch in arg]
    return _parse_tokens(arg, what)


def load_index(path: str) -> CbwtIndex:
    with open(path, encoding="utf-8") as fh:
        data = fh.read()
    try:
        return CbwtIndex.deserialize(data)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_index(index: CbwtIndex, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(index.serialize())


def cmd_build(args) -> int:
    texts = parse_text_file(args.input, args.chars)
    index = build_collection(texts)
    rate = args.sample_rate
    if rate is None:
        rate = default_rate(index.n)
    elif rate < 1:
        raise ParseError("--sample-rate must be >= 1")
    attach_samples(index, rate)
    write_index(index, args.output)
    print(f"indexed d={index.d} n={index.n}")
    return 0


def cmd_count(args) -> int:
    index = load_index(args.index)
    pattern = parse_symbols(args.pattern, args.chars, "pattern")
    print(index.count(pattern))
    return 0


def cmd_locate(args) -> int:
    index = load_index(args.index)
    pattern = parse_symbols(args.pattern, args.chars, "pattern")
    if index.samples is None:
        raise ParseError(f"{args.index}: index carries no samples; "
                         "rebuild it to locate")
    for ident, off in sorted(locate(index, index.samples, pattern)):
        print(f"{ident}:{off}")
    return 0


def cmd_add(args) -> int:
    index = load_index(args.index)
    text = parse_symbols(args.text, args.chars, "text")
    if not text:
        raise ParseError("cannot add an empty text")
    extend_with_text(index, text)
    write_index(index, args.index)
    print(f"indexed d={index.d} n={index.n}")
    return 0


def cmd_verify(args) -> int:
    index = load_index(args.index)
    texts = parse_text_file(args.source, args.chars)
    total = sum(len(t) for t in texts)
    if index.n > ORACLE_LIMIT or total > ORACLE_LIMIT:
        print("too large for oracle verification", file=sys.stderr)
        raise LimitError
    if total != index.n or len(texts) != index.d:
        print(f"mismatch: index holds d={index.d} n={index.n}, "
              f"source has d={len(texts)} n={total}")
        return 1
    brute = BruteIndex(texts)
    for name, got, want in (("FT", index.ft_values(), brute.ft),
                            ("LT", index.lt_values(), brute.lt),
                            ("LCP", index.lcp_values(), brute.lcp)):
        for i, (g, w) in enumerate(zip(got, want), start=1):
            if g != w:
                print(f"mismatch: {name} differs first at position {i} "
                      f"(index {g}, oracle {w})")
                return 1
    if index.samples is not None:
        z = max(len(t) for t in texts)
        for lexpos in sorted(index.samples.entries):
            conj = index.samples.entries[lexpos]
            if not (1 <= lexpos <= index.n and 1 <= conj <= index.n):
                print(f"mismatch: sample at rank {lexpos} out of range")
                return 1
            if (omega_key(brute.conj_seq[conj], z)
                    != omega_key(brute.conj_seq[brute.ca[lexpos - 1]], z)):
                print(f"mismatch: sample at rank {lexpos} names conjugate "
                      f"{conj}, not equivalent to that rank")
                return 1
    print("ok")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cbwt",
        description="Index multisets of circular integer texts for "
                    "Cartesian-tree pattern matching.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="index a text file")
    b.add_argument("input")
    b.add_argument("output")
    b.add_argument("--sample-rate", type=int, default=None)
    b.add_argument("--chars", action="store_true",
                   help="treat each line as characters, not integer tokens")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("count", help="count matching conjugates")
    c.add_argument("index")
    c.add_argument("--pattern", default="")
    c.add_argument("--chars", action="store_true")
    c.set_defaults(func=cmd_count)

    l = sub.add_parser("locate", help="list matching text:offset pairs")
    l.add_argument("index")
    l.add_argument("--pattern", default="")
    l.add_argument("--chars", action="store_true")
    l.set_defaults(func=cmd_locate)

    a = sub.add_parser("add", help="extend an index file by one text")
    a.add_argument("index")
    a.add_argument("--text", required=True)
    a.add_argument("--chars", action="store_true")
    a.set_defaults(func=cmd_add)

    v = sub.add_parser("verify", help="check an index against its source")
    v.add_argument("index")
    v.add_argument("--source", required=True)
    v.add_argument("--chars", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitError:
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
