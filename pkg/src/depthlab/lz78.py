"""Bit-exact LZ78: greedy phrase parsing, pointer/bit coding, and the
repeated-block length bound.

Phrases live in a trie rooted at the empty phrase 0. Token i codes its
pointer in exactly ceil(log2 i) bits (the decoder knows i, so the width is
implicit; token 1 has no pointer bits) followed by one literal bit. An
input ending inside a known phrase yields a pointer-only tail token.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ValidationError

_ROOT = 0


class _Trie:
    """Phrase dictionary; node k is phrase k, node 0 the empty phrase."""

    def __init__(self) -> None:
        self.children: list[list[Optional[int]]] = [[None, None]]
        self.phrases: list[str] = []  # complete phrases, phrase i at index i-1

    def walk(self, node: int, bit: str) -> Optional[int]:
        return self.children[node][bit == "1"]

    def add(self, node: int, bit: str, phrase: str) -> int:
        self.children.append([None, None])
        idx = len(self.children) - 1
        self.children[node][bit == "1"] = idx
        self.phrases.append(phrase)
        return idx

    @property
    def size(self) -> int:
        return len(self.phrases)


@dataclass
class LzParse:
    """Greedy parse: tokens are (pointer, final bit); a tail pointer marks
    an input that ended inside an already-known phrase."""

    tokens: list[tuple[int, str]] = field(default_factory=list)
    tail: Optional[int] = None
    phrases: list[str] = field(default_factory=list)


def _parse_into(trie: _Trie, x: str) -> LzParse:
    parse = LzParse()
    node = _ROOT
    pending = ""
    for b in x:
        nxt = trie.walk(node, b)
        if nxt is None:
            phrase = pending + b
            trie.add(node, b, phrase)
            parse.tokens.append((node, b))
            node, pending = _ROOT, ""
        else:
            node, pending = nxt, pending + b
    if pending:
        parse.tail = node
    parse.phrases = list(trie.phrases)
    return parse


def lz_parse(x: str) -> LzParse:
    return _parse_into(_Trie(), x)


def _pointer_width(token_index: int) -> int:
    # ceil(log2 i): pointers range over 0..i-1.
    return (token_index - 1).bit_length()


def _encode_tokens(parse: LzParse, first_index: int) -> str:
    pieces = []
    i = first_index
    for ptr, bit in parse.tokens:
        w = _pointer_width(i)
        if w:
            pieces.append(format(ptr, f"0{w}b"))
        pieces.append(bit)
        i += 1
    if parse.tail is not None:
        w = _pointer_width(i)
        pieces.append(format(parse.tail, f"0{w}b") if w else "")
    return "".join(pieces)


def lz_encode(x: str) -> str:
    return _encode_tokens(lz_parse(x), 1)


def lz_decode(bits: str) -> str:
    """Exact inverse of lz_encode; raises ValueError naming the bit
    position on truncated or corrupt streams."""
    phrases = [""]
    out = []
    pos = 0
    i = 1
    while pos < len(bits):
        w = _pointer_width(i)
        remaining = len(bits) - pos
        if remaining < w:
            raise ValueError(f"truncated pointer at bit {pos}")
        ptr = int(bits[pos : pos + w], 2) if w else 0
        if ptr >= len(phrases):
            raise ValueError(f"pointer out of range at bit {pos}")
        if remaining == w:  # pointer-only tail token
            out.append(phrases[ptr])
            pos += w
            break
        phrase = phrases[ptr] + bits[pos + w]
        phrases.append(phrase)
        out.append(phrase)
        pos += w + 1
        i += 1
    return "".join(out)


def lz_conditional(y: str, x: str) -> tuple[str, int]:
    """Code for y with the dictionary primed by parsing x (x's own code is
    discarded; a pending partial phrase of x is abandoned).

    Returns (bits, length). When x ends on a phrase boundary this equals
    the tail of lz_encode(xy) beyond lz_encode(x).
    """
    trie = _Trie()
    _parse_into(trie, x)
    d = trie.size
    parse = _parse_into(trie, y)
    parse.phrases = parse.phrases[d:]
    bits = _encode_tokens(parse, d + 1)
    return bits, len(bits)


def repeat_bound(len_y: int, n: int, d: int) -> float:
    """Upper bound on the coded length of y^n against a d-phrase dictionary:
    sqrt(2(|y|+1)|y^n|) * log2(d + sqrt(2(|y|+1)|y^n|))."""
    if len_y < 1 or n < 1 or d < 0:
        raise ValidationError("need len_y >= 1, n >= 1, d >= 0")
    root = math.sqrt(2 * (len_y + 1) * (len_y * n))
    return root * math.log2(d + root)


def check_parse(parse: LzParse) -> None:
    """Structural sanity: phrases distinct and prefix-closed."""
    seen = set(parse.phrases)
    if len(seen) != len(parse.phrases):
        raise ValidationError("duplicate complete phrase")
    for p in parse.phrases:
        if p[:-1] and p[:-1] not in seen:
            raise ValidationError(f"phrase {p!r} lacks its prefix")
