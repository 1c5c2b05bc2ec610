"""Binary code for transducers, plus the small string codes it is built from.

A machine description is: the start-state index in binary with every bit
doubled, a "01" separator, then the transition table. Each table entry is
an optional target code (dagger-marked binary of a state offset; empty for
a self-loop) followed by the emission in the complemented diamond code.
The two chunk kinds parse deterministically left to right: a dagger chunk
begins 10/11, a diamond chunk begins 00/01.
"""
from __future__ import annotations

from typing import Optional

from .errors import ValidationError
from .fst import BITS, FstSpec


def nat_bin(n: int) -> str:
    """Standard binary of n >= 1 (always starts with 1)."""
    if n < 1:
        raise ValidationError("nat_bin needs n >= 1")
    return format(n, "b")


def nat_string(n: int) -> str:
    """nat_bin(n) minus its leading 1; length is floor(log2 n)."""
    return nat_bin(n)[1:]


def dagger(x: str) -> str:
    """Interleave a 0 after every bit of x except the last, which gets a 1."""
    if not x:
        raise ValidationError("dagger needs a nonempty string")
    return "".join(c + "0" for c in x[:-1]) + x[-1] + "1"


def complement(x: str) -> str:
    return "".join("1" if c == "0" else "0" for c in x)


def diamond(x: str) -> str:
    """Complemented dagger of 1x; self-delimits even for empty x."""
    return complement(dagger("1" + x))


def double_bits(x: str) -> str:
    """Duplicate every bit: 10 -> 1100."""
    return "".join(c + c for c in x)


def reverse_bits(x: str) -> str:
    return x[::-1]


def encode_fst(T: FstSpec) -> str:
    """Canonical description of T: minimal offset in every dagger chunk.

    A non-self-loop targeting state t from a machine with m states encodes
    the smallest n >= 1 with 1 + (n mod m) = t.
    """
    m = T.num_states
    parts = [double_bits(nat_bin(T.start)), "01"]
    for q in range(1, m + 1):
        for b in BITS:
            tgt = T.next[(q, b)]
            if tgt != q:
                n = tgt - 1 if tgt >= 2 else m
                parts.append(dagger(nat_bin(n)))
            # The emission e is itself string(n') for n' = value of 1e.
            parts.append(diamond(T.out[(q, b)]))
    return "".join(parts)


def decode_fst(bits: str) -> Optional[FstSpec]:
    """Inverse of encode_fst on its range; None for anything malformed.

    None covers: bad doubling in the start pointer, missing separator,
    truncated or misaligned table chunks, an odd entry count, and a start
    index beyond the decoded state count.
    """
    if bits.strip("01") != "":
        return None
    # Start pointer: doubled pairs up to the 01 separator.
    i = 0
    startbits = []
    while True:
        grp = bits[i : i + 2]
        if len(grp) < 2:
            return None
        i += 2
        if grp == "01":
            break
        if grp[0] != grp[1]:
            return None
        startbits.append(grp[0])
    if not startbits or startbits[0] != "1":
        return None
    start = int("".join(startbits), 2)

    # Table entries: optional dagger chunk (first pair starts 1) then a
    # diamond chunk (first pair starts 0).
    entries: list[tuple[Optional[int], str]] = []
    while i < len(bits):
        n: Optional[int] = None
        if bits[i] == "1":
            nb = []
            while True:
                grp = bits[i : i + 2]
                if len(grp) < 2:
                    return None
                i += 2
                nb.append(grp[0])
                if grp[1] == "1":
                    break
            n = int("".join(nb), 2)
        grp = bits[i : i + 2]
        if len(grp) < 2 or grp[0] != "0":
            return None
        payload = []
        i += 2
        if grp == "01":
            while True:
                grp = bits[i : i + 2]
                if len(grp) < 2:
                    return None
                i += 2
                payload.append(grp[0])
                if grp[1] == "0":
                    break
        entries.append((n, complement("".join(payload))))

    if not entries or len(entries) % 2:
        return None
    m = len(entries) // 2
    if start > m:
        return None
    next_map: dict[tuple[int, str], int] = {}
    out_map: dict[tuple[int, str], str] = {}
    for idx, (n, emission) in enumerate(entries):
        q, b = idx // 2 + 1, BITS[idx % 2]
        next_map[(q, b)] = q if n is None else 1 + (n % m)
        out_map[(q, b)] = emission
    return FstSpec(m, start, next_map, out_map)


def fst_size(T: FstSpec) -> int:
    """Length of the canonical description.

    This is the minimum over the canonical form; it is an upper bound on
    the minimum over every decodable string (larger offsets can only
    lengthen chunks, so the bound is believed tight, and a constant-factor
    gap would not change any depth verdict).
    """
    return len(encode_fst(T))


def tuple_encode(parts: list[str]) -> str:
    """Self-delimiting concatenation; every part but the last is framed.

    The frame for a part p is 1^(|bin(|p|)|-1) 0 bin(|p|), then p itself;
    the final part is appended raw. Parts before the last must be
    nonempty so their length is codable.
    """
    if not parts:
        raise ValidationError("tuple_encode needs at least one part")
    pieces = []
    for p in parts[:-1]:
        if not p:
            raise ValidationError("only the final part may be empty")
        nb = nat_bin(len(p))
        pieces.append("1" * (len(nb) - 1) + "0" + nb + p)
    pieces.append(parts[-1])
    return "".join(pieces)


def tuple_decode(bits: str, count: int) -> list[str]:
    """Recover a tuple of `count` parts from tuple_encode output."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    parts = []
    i = 0
    for _ in range(count - 1):
        ones = 0
        while i < len(bits) and bits[i] == "1":
            ones += 1
            i += 1
        if i >= len(bits):
            raise ValueError(f"truncated length frame at bit {i}")
        i += 1  # the 0 ending the unary run
        width = ones + 1
        nb = bits[i : i + width]
        if len(nb) < width or not nb.startswith("1"):
            raise ValueError(f"bad length field at bit {i}")
        i += width
        n = int(nb, 2)
        part = bits[i : i + n]
        if len(part) < n:
            raise ValueError(f"truncated part at bit {i}")
        parts.append(part)
        i += n
    parts.append(bits[i:])
    return parts
